//! Exact dense linear algebra over prime fields F_p.
//!
//! Everything downstream (group actions, resolutions, stable homs) reduces to
//! row reduction over F_p, so the conventions live in one place: matrices act
//! on column vectors, kernel and quotient bases are returned as rows in
//! reduced row echelon form, and all solvers return the canonical solution
//! with free variables set to zero.  That canonicity is what makes every
//! higher-level computation reproducible byte for byte.

use crate::error::Error;

/// The scalar field F_p.  Construction checks primality; `p` is capped at
/// 2^16 so that dot products accumulate in u64 without overflow.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<PrimeField, Error> {
        if p < 2 || p >= (1 << 16) {
            return Err(Error::NotPrime(p as u64));
        }
        let mut d = 2u32;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::NotPrime(p as u64));
            }
            d += 1;
        }
        Ok(PrimeField { p })
    }

    pub fn order(self) -> u32 {
        self.p
    }

    pub fn reduce(self, x: i64) -> u32 {
        (x.rem_euclid(self.p as i64)) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "division by zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, base: u32, mut exp: u32) -> u32 {
        let mut acc = 1u64;
        let mut b = base as u64 % self.p as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % self.p as u64;
            }
            b = b * b % self.p as u64;
            exp >>= 1;
        }
        acc as u32
    }
}

/// Dense matrix over F_p, row-major.  A matrix of shape `rows x cols`
/// represents a linear map F_p^cols -> F_p^rows acting on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub field: PrimeField,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.field.order())?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from integer rows; entries are reduced mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for (i, row) in rows.iter().enumerate() {
            assert!(row.len() == c, "ragged rows: row {} has {} entries, row 0 has {}", i, row.len(), c);
        }
        let mut m = Matrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, field.reduce(x));
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.field.order());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[u32]) {
        assert!(v.len() == self.rows, "column length {} vs {} rows", v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self.set(i, j, x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch in add: {}x{} vs {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = self.field.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch in sub: {}x{} vs {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = self.field.sub(*a, b);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.field.mul(*a, c);
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.neg(1))
    }

    /// Matrix product self * other (composition of maps: self after other).
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert!(
            self.cols == other.rows,
            "shape mismatch in mul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        if self.field.order() == 2 && self.cols >= 32 {
            return self.mul_f2(other);
        }
        let p = self.field.order() as u64;
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        // i,k,j loop order keeps the inner accesses row-contiguous.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow.iter()) {
                    *d = ((*d as u64 + a * b as u64) % p) as u32;
                }
            }
        }
        out
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert!(v.len() == self.cols, "apply: vector length {} vs {} cols", v.len(), self.cols);
        let p = self.field.order() as u64;
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc = 0u64;
                for (&a, &b) in row.iter().zip(v.iter()) {
                    acc += a as u64 * b as u64;
                    if acc >= (1 << 62) {
                        acc %= p;
                    }
                }
                (acc % p) as u32
            })
            .collect()
    }

    /// Stack rows of `self` above rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert!(self.cols == other.cols, "vstack: {} vs {} cols", self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().pivots.len()
    }

    fn mul_f2(&self, other: &Matrix) -> Matrix {
        let words = (other.cols + 63) / 64;
        let mut packed = vec![0u64; other.rows * words];
        for k in 0..other.rows {
            for j in 0..other.cols {
                if other.at(k, j) != 0 {
                    packed[k * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u64; words];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|w| *w = 0);
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (k, &a) in row.iter().enumerate() {
                if a != 0 {
                    let src = &packed[k * words..(k + 1) * words];
                    for (d, &s) in acc.iter_mut().zip(src.iter()) {
                        *d ^= s;
                    }
                }
            }
            for j in 0..other.cols {
                if acc[j / 64] >> (j % 64) & 1 != 0 {
                    out.data[i * other.cols + j] = 1;
                }
            }
        }
        out
    }

    /// Bit-packed Gauss–Jordan over F_2; same pivot choices as the generic
    /// path, so rref, pivots, and transform agree with it exactly.
    fn row_echelon_f2(&self) -> RowEchelon {
        let wr = (self.cols + 63) / 64;
        let wt = (self.rows + 63) / 64;
        let mut r = vec![0u64; self.rows * wr];
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.at(i, j) != 0 {
                    r[i * wr + j / 64] |= 1 << (j % 64);
                }
            }
        }
        let mut t = vec![0u64; self.rows * wt];
        for i in 0..self.rows {
            t[i * wt + i / 64] |= 1 << (i % 64);
        }
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        let mut tmp_r = vec![0u64; wr];
        let mut tmp_t = vec![0u64; wt];
        for pc in 0..self.cols {
            let w = pc / 64;
            let bit = 1u64 << (pc % 64);
            let mut sel = None;
            for i in pr..self.rows {
                if r[i * wr + w] & bit != 0 {
                    sel = Some(i);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != pr {
                for j in 0..wr {
                    r.swap(sel * wr + j, pr * wr + j);
                }
                for j in 0..wt {
                    t.swap(sel * wt + j, pr * wt + j);
                }
            }
            tmp_r.copy_from_slice(&r[pr * wr..(pr + 1) * wr]);
            tmp_t.copy_from_slice(&t[pr * wt..(pr + 1) * wt]);
            for i in 0..self.rows {
                if i != pr && r[i * wr + w] & bit != 0 {
                    for j in 0..wr {
                        r[i * wr + j] ^= tmp_r[j];
                    }
                    for j in 0..wt {
                        t[i * wt + j] ^= tmp_t[j];
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == self.rows {
                break;
            }
        }
        let mut rref = Matrix::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if r[i * wr + j / 64] >> (j % 64) & 1 != 0 {
                    rref.data[i * self.cols + j] = 1;
                }
            }
        }
        let mut transform = Matrix::zeros(self.field, self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                if t[i * wt + j / 64] >> (j % 64) & 1 != 0 {
                    transform.data[i * self.rows + j] = 1;
                }
            }
        }
        RowEchelon { rref, pivots, transform }
    }

    /// Reduced row echelon form, the pivot columns, and the invertible
    /// transform T with T * self = rref.
    pub fn row_echelon(&self) -> RowEchelon {
        if self.field.order() == 2 && self.cols >= 32 && self.rows > 0 {
            return self.row_echelon_f2();
        }
        self.row_echelon_generic()
    }

    fn row_echelon_generic(&self) -> RowEchelon {
        let f = self.field;
        let mut r = self.clone();
        let mut t = Matrix::identity(f, self.rows);
        let mut pivots = Vec::new();
        let mut pr = 0usize; // current pivot row
        for pc in 0..self.cols {
            // find pivot in column pc at row >= pr
            let mut sel = None;
            for i in pr..self.rows {
                if r.at(i, pc) != 0 {
                    sel = Some(i);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != pr {
                for j in 0..self.cols {
                    let tmp = r.at(sel, j);
                    r.set(sel, j, r.at(pr, j));
                    r.set(pr, j, tmp);
                }
                for j in 0..self.rows {
                    let tmp = t.at(sel, j);
                    t.set(sel, j, t.at(pr, j));
                    t.set(pr, j, tmp);
                }
            }
            let inv = f.inv(r.at(pr, pc));
            if inv != 1 {
                for j in 0..self.cols {
                    r.set(pr, j, f.mul(r.at(pr, j), inv));
                }
                for j in 0..self.rows {
                    t.set(pr, j, f.mul(t.at(pr, j), inv));
                }
            }
            for i in 0..self.rows {
                if i == pr {
                    continue;
                }
                let c = r.at(i, pc);
                if c == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(r.at(i, j), f.mul(c, r.at(pr, j)));
                    r.set(i, j, v);
                }
                for j in 0..self.rows {
                    let v = f.sub(t.at(i, j), f.mul(c, t.at(pr, j)));
                    t.set(i, j, v);
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == self.rows {
                break;
            }
        }
        RowEchelon { rref: r, pivots, transform: t }
    }

    /// Basis of the right kernel {v : self * v = 0}, as rows in RREF.
    pub fn kernel_basis(&self) -> Matrix {
        let ech = self.row_echelon();
        let f = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|j| !ech.pivots.contains(j)).collect();
        let mut raw = Matrix::zeros(f, free.len(), self.cols);
        for (row, &j) in free.iter().enumerate() {
            raw.set(row, j, 1);
            for (i, &pc) in ech.pivots.iter().enumerate() {
                raw.set(row, pc, f.neg(ech.rref.at(i, j)));
            }
        }
        // The raw spanning set is independent but not in RREF (pivot columns
        // of `self` can precede the free column that leads each row).
        let out = raw.row_echelon().rref;
        Matrix {
            field: f,
            rows: free.len(),
            cols: self.cols,
            data: out.data[..free.len() * self.cols].to_vec(),
        }
    }

    /// Inverse of a square matrix, or None when singular.  The row-echelon
    /// transform of an invertible matrix is exactly its inverse.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let ech = self.row_echelon();
        if ech.pivots.len() != self.rows {
            return None;
        }
        Some(ech.transform)
    }

    pub fn determinant(&self) -> u32 {
        assert!(self.rows == self.cols, "determinant of {}x{}", self.rows, self.cols);
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u32;
        for col in 0..n {
            let mut sel = None;
            for i in col..n {
                if m.at(i, col) != 0 {
                    sel = Some(i);
                    break;
                }
            }
            let Some(sel) = sel else { return 0 };
            if sel != col {
                for j in 0..n {
                    let tmp = m.at(sel, j);
                    m.set(sel, j, m.at(col, j));
                    m.set(col, j, tmp);
                }
                det = f.neg(det);
            }
            let piv = m.at(col, col);
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for i in col + 1..n {
                let c = f.mul(m.at(i, col), inv);
                if c == 0 {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(m.at(i, j), f.mul(c, m.at(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial det(xI - self), returned as ascending
    /// coefficients of length n+1 (leading coefficient 1).  Uses the
    /// Hessenberg reduction so it works in any characteristic.
    pub fn char_poly(&self) -> Vec<u32> {
        assert!(self.rows == self.cols, "char_poly of {}x{}", self.rows, self.cols);
        let f = self.field;
        let n = self.rows;
        if n == 0 {
            return vec![1];
        }
        let mut h = self.clone();
        // Reduce to upper Hessenberg by a similarity transformation.
        for m in 1..n.saturating_sub(1) {
            let mut sel = None;
            for i in m..n {
                if h.at(i, m - 1) != 0 {
                    sel = Some(i);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != m {
                for j in 0..n {
                    let tmp = h.at(sel, j);
                    h.set(sel, j, h.at(m, j));
                    h.set(m, j, tmp);
                }
                for i in 0..n {
                    let tmp = h.at(i, sel);
                    h.set(i, sel, h.at(i, m));
                    h.set(i, m, tmp);
                }
            }
            let t = h.at(m, m - 1);
            let tinv = f.inv(t);
            for i in m + 1..n {
                let u = f.mul(h.at(i, m - 1), tinv);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.at(i, j), f.mul(u, h.at(m, j)));
                    h.set(i, j, v);
                }
                for k in 0..n {
                    let v = f.add(h.at(k, m), f.mul(u, h.at(k, i)));
                    h.set(k, m, v);
                }
            }
        }
        // p_0 = 1; p_m = (x - h[m-1][m-1]) p_{m-1}
        //             - sum_i h[m-1-i][m-1] * (prod_j h[m-j][m-1-j]) * p_{m-1-i}
        let mut polys: Vec<Vec<u32>> = vec![vec![1]];
        for m in 1..=n {
            let prev = &polys[m - 1];
            let mut pm = vec![0u32; m + 1];
            for (k, &c) in prev.iter().enumerate() {
                pm[k + 1] = f.add(pm[k + 1], c);
                pm[k] = f.sub(pm[k], f.mul(h.at(m - 1, m - 1), c));
            }
            let mut run = 1u32;
            for i in 1..m {
                run = f.mul(run, h.at(m - i, m - 1 - i));
                if run == 0 {
                    break;
                }
                let coeff = f.mul(h.at(m - 1 - i, m - 1), run);
                if coeff == 0 {
                    continue;
                }
                for (k, &c) in polys[m - 1 - i].iter().enumerate() {
                    pm[k] = f.sub(pm[k], f.mul(coeff, c));
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }
}

/// Output of `Matrix::row_echelon`.
pub struct RowEchelon {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
    /// Invertible `rows x rows` matrix with `transform * input = rref`.
    pub transform: Matrix,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Repeated-right-hand-side solver for A x = b.  The row reduction of A is
/// done once; each solve costs one pass.  Solutions are canonical: free
/// variables are zero.
pub struct ColumnSolver {
    ech: RowEchelon,
    cols: usize,
}

impl ColumnSolver {
    pub fn new(a: &Matrix) -> ColumnSolver {
        ColumnSolver { ech: a.row_echelon(), cols: a.cols }
    }

    pub fn rank(&self) -> usize {
        self.ech.pivots.len()
    }

    pub fn solve(&self, rhs: &[u32]) -> Option<Vec<u32>> {
        assert!(rhs.len() == self.ech.transform.cols, "rhs length {} vs {} rows", rhs.len(), self.ech.transform.cols);
        let reduced = self.ech.transform.apply(rhs);
        let rank = self.ech.pivots.len();
        // consistency: rows below the pivot rows must reduce to zero
        if reduced[rank..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in self.ech.pivots.iter().enumerate() {
            x[pc] = reduced[i];
        }
        Some(x)
    }

    /// Solve for every column of `rhs` at once; None if any column is
    /// inconsistent.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Option<Matrix> {
        let mut out = Matrix::zeros(rhs.field, self.cols, rhs.cols);
        for j in 0..rhs.cols {
            let x = self.solve(&rhs.col(j))?;
            out.set_col(j, &x);
        }
        Some(out)
    }
}

/// A row space with a fixed, linearly independent basis, supporting repeated
/// coordinate extraction.  `coords(v)` returns x with x^T * basis = v.
pub struct RowBasis {
    pub basis: Matrix,
    ech: RowEchelon,
}

impl RowBasis {
    pub fn new(basis: Matrix) -> Result<RowBasis, Error> {
        let ech = basis.row_echelon();
        if ech.pivots.len() != basis.rows {
            return Err(Error::DependentBasis {
                rows: basis.rows,
                cols: basis.cols,
                rank: ech.pivots.len(),
            });
        }
        Ok(RowBasis { basis, ech })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert!(v.len() == self.basis.cols, "coords: vector length {} vs {} cols", v.len(), self.basis.cols);
        let f = self.basis.field;
        // reduce v against the rref rows, recording coefficients
        let mut residual = v.to_vec();
        let mut c = vec![0u32; self.basis.rows];
        for (i, &pc) in self.ech.pivots.iter().enumerate() {
            let coeff = residual[pc];
            if coeff == 0 {
                continue;
            }
            c[i] = coeff;
            let row = self.ech.rref.row(i);
            for (r, &x) in residual.iter_mut().zip(row.iter()) {
                *r = f.sub(*r, f.mul(coeff, x));
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        // v = c^T rref = c^T (T basis), so coords = T^T c.
        let t = &self.ech.transform;
        let mut out = vec![0u32; self.basis.rows];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (i, &ci) in c.iter().enumerate() {
                acc += t.at(i, j) as u64 * ci as u64;
            }
            *o = (acc % f.order() as u64) as u32;
        }
        Some(out)
    }

    /// Coordinates of every column of `m` (as images, i.e. m's columns are
    /// vectors in the ambient space).  None if any column falls outside.
    pub fn coords_matrix(&self, m: &Matrix) -> Option<Matrix> {
        let mut out = Matrix::zeros(m.field, self.dim(), m.cols);
        for j in 0..m.cols {
            let x = self.coords(&m.col(j))?;
            out.set_col(j, &x);
        }
        Some(out)
    }
}

/// Coordinates of `v` in the row span of `basis`, or None if `v` lies
/// outside.  The basis rows must be linearly independent.
pub fn image_coords(basis: &Matrix, v: &[u32]) -> Result<Option<Vec<u32>>, Error> {
    let rb = RowBasis::new(basis.clone())?;
    Ok(rb.coords(v))
}

/// A quotient space F_p^n / U presented by coset representatives.
///
/// `projection * v` gives the coset coordinates of v; the coset basis rows
/// are ambient representatives, and projection kills U while acting as the
/// identity on the chosen representatives.
pub struct Quotient {
    pub coset_basis: Matrix,
    pub projection: Matrix,
}

pub fn quotient_space(field: PrimeField, ambient_dim: usize, sub_basis: &Matrix) -> Quotient {
    assert!(
        sub_basis.cols == ambient_dim || sub_basis.rows == 0,
        "subspace basis has {} cols, ambient dim {}",
        sub_basis.cols, ambient_dim
    );
    let ech = if sub_basis.rows == 0 {
        Matrix::zeros(field, 0, ambient_dim).row_echelon()
    } else {
        sub_basis.row_echelon()
    };
    let rank = ech.pivots.len();
    let free: Vec<usize> = (0..ambient_dim).filter(|j| !ech.pivots.contains(j)).collect();
    let mut coset_basis = Matrix::zeros(field, free.len(), ambient_dim);
    let mut projection = Matrix::zeros(field, free.len(), ambient_dim);
    for (row, &q) in free.iter().enumerate() {
        coset_basis.set(row, q, 1);
        projection.set(row, q, 1);
        for (i, &pc) in ech.pivots.iter().enumerate().take(rank) {
            projection.set(row, pc, field.neg(ech.rref.at(i, q)));
        }
    }
    Quotient { coset_basis, projection }
}

/// Kronecker product; index conventions are lexicographic, so the tensor
/// basis vector e_i (x) e_j of the product sits at index i * dim_b + j.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field;
    assert!(f == b.field, "kronecker over different fields");
    let mut out = Matrix::zeros(f, a.rows * b.rows, a.cols * b.cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let c = a.at(ia, ja);
            if c == 0 {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    let v = f.mul(c, b.at(ib, jb));
                    out.set(ia * b.rows + ib, ja * b.cols + jb, v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn primality_is_checked() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(23).is_ok());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(91).is_err()); // 7 * 13
    }

    #[test]
    fn rref_of_one_by_one() {
        let m = Matrix::from_rows(f(2), &[vec![1]]);
        let ech = m.row_echelon();
        assert_eq!(ech.pivots, vec![0]);
        assert_eq!(ech.rref.at(0, 0), 1);
    }

    #[test]
    fn kernel_of_empty_map_is_full_space() {
        // a 0 x 3 matrix has kernel all of F^3
        let m = Matrix::zeros(f(3), 0, 3);
        let k = m.kernel_basis();
        assert_eq!(k.rows, 3);
        assert_eq!(k, Matrix::identity(f(3), 3));
    }

    #[test]
    fn kernel_of_map_to_zero_space() {
        let m = Matrix::zeros(f(2), 3, 0);
        let k = m.kernel_basis();
        assert_eq!(k.rows, 0);
        assert_eq!(k.cols, 0);
    }

    #[test]
    fn solve_sum_equation_canonically() {
        // x0 + x1 = 1 over F_2: solutions are (1,0) and (0,1); the canonical
        // one zeroes the free variable x1.  Frozen from enumerating all four
        // candidate vectors.
        let m = Matrix::from_rows(f(2), &[vec![1, 1]]);
        let s = ColumnSolver::new(&m);
        assert_eq!(s.solve(&[1]), Some(vec![1, 0]));
        assert_eq!(s.solve(&[0]), Some(vec![0, 0]));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = Matrix::from_rows(f(3), &[vec![1, 2], vec![2, 4]]);
        let s = ColumnSolver::new(&m);
        assert_eq!(s.solve(&[1, 2]), Some(vec![1, 0]));
        assert_eq!(s.solve(&[1, 0]), None);
    }

    #[test]
    fn image_coords_in_standard_basis() {
        let basis = Matrix::identity(f(2), 2);
        assert_eq!(image_coords(&basis, &[1, 1]).unwrap(), Some(vec![1, 1]));
    }

    #[test]
    fn image_coords_rejects_dependent_basis() {
        let basis = Matrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]]);
        assert!(matches!(
            image_coords(&basis, &[1, 1]),
            Err(Error::DependentBasis { rows: 2, rank: 1, .. })
        ));
    }

    #[test]
    fn image_coords_detects_outside_vector() {
        let basis = Matrix::from_rows(f(5), &[vec![1, 1, 0]]);
        assert_eq!(image_coords(&basis, &[0, 0, 1]).unwrap(), None);
        assert_eq!(image_coords(&basis, &[3, 3, 0]).unwrap(), Some(vec![3]));
    }

    #[test]
    fn quotient_by_full_space_is_zero() {
        let q = quotient_space(f(2), 2, &Matrix::identity(f(2), 2));
        assert_eq!(q.coset_basis.rows, 0);
        assert_eq!(q.projection.rows, 0);
    }

    #[test]
    fn quotient_kills_subspace_and_fixes_representatives() {
        let sub = Matrix::from_rows(f(3), &[vec![1, 1, 0]]);
        let q = quotient_space(f(3), 3, &sub);
        assert_eq!(q.coset_basis.rows, 2);
        // projection of the subspace generator is zero
        assert_eq!(q.projection.apply(&[1, 1, 0]), vec![0, 0]);
        // projection o inclusion of the coset basis = identity
        for i in 0..2 {
            let rep = q.coset_basis.row(i).to_vec();
            let mut expected = vec![0, 0];
            expected[i] = 1;
            assert_eq!(q.projection.apply(&rep), expected);
        }
    }

    #[test]
    fn kronecker_index_convention() {
        // e_i (x) e_j maps to index i * dim_b + j: check on explicit 2x2.
        let a = Matrix::from_rows(f(5), &[vec![0, 1], vec![2, 0]]);
        let b = Matrix::from_rows(f(5), &[vec![1, 2], vec![3, 4]]);
        let k = kronecker(&a, &b);
        assert_eq!(k.rows, 4);
        // Entry ((ia,ib),(ja,jb)) = a[ia][ja] * b[ib][jb], frozen from the
        // entrywise definition computed by hand.
        assert_eq!(k.at(0 * 2 + 0, 1 * 2 + 0), 1 * 1);
        assert_eq!(k.at(0 * 2 + 1, 1 * 2 + 1), 1 * 4 % 5);
        assert_eq!(k.at(1 * 2 + 1, 0 * 2 + 0), 2 * 3 % 5);
        assert_eq!(k.at(0, 0), 0);
    }

    #[test]
    fn char_poly_of_companion_matrix() {
        // companion of x^3 + 2x + 1 over F_5
        let m = Matrix::from_rows(f(5), &[vec![0, 0, -1], vec![1, 0, -2], vec![0, 1, 0]]);
        assert_eq!(m.char_poly(), vec![1, 2, 0, 1]);
    }

    #[test]
    fn char_poly_satisfies_cayley_hamilton() {
        let cases = [
            Matrix::from_rows(f(2), &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
            Matrix::from_rows(f(3), &[vec![2, 1, 0, 2], vec![0, 0, 1, 1], vec![1, 2, 2, 0], vec![0, 1, 0, 1]]),
            Matrix::from_rows(f(7), &[vec![3, 5], vec![6, 1]]),
        ];
        for m in cases {
            let cp = m.char_poly();
            assert_eq!(*cp.last().unwrap(), 1);
            let mut acc = Matrix::zeros(m.field, m.rows, m.rows);
            let mut power = Matrix::identity(m.field, m.rows);
            for &c in cp.iter() {
                acc = acc.add(&power.scale(c));
                power = power.mul(&m);
            }
            assert!(acc.is_zero(), "Cayley-Hamilton failed:\n{:?}", m);
        }
    }

    #[test]
    fn char_poly_constant_term_is_det_up_to_sign() {
        let m = Matrix::from_rows(f(7), &[vec![1, 2, 3], vec![4, 5, 6], vec![1, 1, 2]]);
        let cp = m.char_poly();
        let det = m.determinant();
        // det(xI - M) at x=0 is det(-M) = (-1)^n det(M)
        let f7 = f(7);
        assert_eq!(cp[0], f7.neg(det));
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_killed(rows in 0usize..5, cols in 0usize..5, seed in 0u64..1000) {
            let field = f(3);
            let mut state = seed;
            let mut next = || { state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (state >> 33) as i64 };
            let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| next() % 3).collect()).collect();
            let m = if rows == 0 { Matrix::zeros(field, 0, cols) } else { Matrix::from_rows(field, &data) };
            let k = m.kernel_basis();
            prop_assert_eq!(k.rows + m.rank(), cols);
            for i in 0..k.rows {
                let v = k.row(i).to_vec();
                prop_assert!(m.apply(&v).iter().all(|&x| x == 0));
            }
            // RREF is idempotent on the kernel basis
            if k.rows > 0 {
                let again = k.row_echelon();
                prop_assert_eq!(&again.rref, &k);
            }
        }

        #[test]
        fn solutions_satisfy_their_system(seed in 0u64..500) {
            let field = f(5);
            let mut state = seed.wrapping_add(7);
            let mut next = || { state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (state >> 33) as i64 };
            let rows = 1 + (next().unsigned_abs() as usize) % 4;
            let cols = 1 + (next().unsigned_abs() as usize) % 4;
            let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| next() % 5).collect()).collect();
            let m = Matrix::from_rows(field, &data);
            let x0: Vec<u32> = (0..cols).map(|_| field.reduce(next() % 5)).collect();
            let b = m.apply(&x0);
            let s = ColumnSolver::new(&m);
            let x = s.solve(&b).expect("constructed rhs must be solvable");
            prop_assert_eq!(m.apply(&x), b);
        }

        #[test]
        fn packed_f2_paths_match_generic(seed in 0u64..300) {
            let field = f(2);
            let mut state = seed.wrapping_add(99);
            let mut next = || { state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); ((state >> 33) & 1) as i64 };
            let rows = 3 + (seed as usize % 5) * 17;
            let cols = 35 + (seed as usize % 3) * 23;
            let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| next()).collect()).collect();
            let m = Matrix::from_rows(field, &data);
            let fast = m.row_echelon_f2();
            let slow = m.row_echelon_generic();
            prop_assert_eq!(&fast.rref, &slow.rref);
            prop_assert_eq!(&fast.pivots, &slow.pivots);
            prop_assert_eq!(&fast.transform, &slow.transform);
            let data2: Vec<Vec<i64>> = (0..cols).map(|_| (0..7).map(|_| next()).collect()).collect();
            let m2 = Matrix::from_rows(field, &data2);
            let prod_fast = m.mul_f2(&m2);
            // element-by-element reference product
            let mut reference = Matrix::zeros(field, rows, 7);
            for i in 0..rows {
                for j in 0..7 {
                    let mut acc = 0u32;
                    for k in 0..cols {
                        acc ^= m.at(i, k) & m2.at(k, j);
                    }
                    reference.set(i, j, acc);
                }
            }
            prop_assert_eq!(&prod_fast, &reference);
        }
    }
}
