//! The stable module category: Hom-spaces modulo maps factoring through
//! projectives.  Everything here is deliberately independent of resolutions'
//! internals — Hom-spaces come from the equivariance kernel and the
//! projective-factoring subspace from an explicit Frobenius basis of maps
//! into a fixed free cover — so stable computations can serve as one leg of
//! cross-checks against resolution-based ones.

use crate::error::Error;
use crate::linalg::{quotient_space, ColumnSolver, Matrix, Quotient, RowBasis};
use crate::modrep::{hom_basis, Module, ModuleMap};
use crate::resolution::{free_cover, Cover, FreeResolution};

/// Basis of Hom_G(a, F_pG^rank): for each generator copy i and each
/// coordinate c of a, the map y ↦ Σ_g (g⁻¹·y)_c · (i, g).  These span by
/// the free-module adjunction, and there are rank·dim(a) of them.
pub fn maps_into_free(a: &Module, rank: usize) -> Vec<ModuleMap> {
    let n = a.group.order;
    let f = a.field;
    let target = Module::free(a.group.clone(), f, rank);
    let mut inv_actions: Vec<Matrix> = Vec::with_capacity(n);
    for g in 0..n {
        inv_actions.push(a.action_matrix(a.group.inv(g)));
    }
    let mut out = Vec::with_capacity(rank * a.dim);
    for i in 0..rank {
        for c in 0..a.dim {
            let mut m = Matrix::zeros(f, target.dim, a.dim);
            for g in 0..n {
                for y in 0..a.dim {
                    m.set(i * n + g, y, inv_actions[g].at(c, y));
                }
            }
            out.push(ModuleMap { source: a.clone(), target: target.clone(), matrix: m });
        }
    }
    out
}

fn flatten(m: &Matrix) -> Vec<u32> {
    let mut v = Vec::with_capacity(m.rows * m.cols);
    for i in 0..m.rows {
        v.extend_from_slice(m.row(i));
    }
    v
}

/// Hom_G(a, b) modulo the maps factoring through a projective, with a fixed
/// basis of coset representatives.  Factoring is tested against one fixed
/// free cover π: F_pG^r ↠ b, which suffices: any factorization through a
/// projective can be rerouted through π by lifting.
pub struct StableHomSpace {
    pub a: Module,
    pub b: Module,
    pub homs: Vec<ModuleMap>,
    hom_rows: RowBasis,
    cover: Cover,
    cover_maps: Vec<ModuleMap>,
    /// Reduced basis of the factoring subspace in hom coordinates.
    pub factoring: Matrix,
    quot: Quotient,
}

pub fn stable_hom(a: &Module, b: &Module, radical: &Matrix) -> Result<StableHomSpace, Error> {
    let f = a.field;
    let homs = hom_basis(a, b);
    let hom_dim = homs.len();
    let mut hom_matrix = Matrix::zeros(f, hom_dim, a.dim * b.dim);
    for (i, h) in homs.iter().enumerate() {
        let row = flatten(&h.matrix);
        for (j, &x) in row.iter().enumerate() {
            hom_matrix.set(i, j, x);
        }
    }
    let hom_rows = RowBasis::new(hom_matrix)?;
    let cover = free_cover(b, true, radical)?;
    let cover_maps = maps_into_free(a, cover.term.rank);
    let mut factoring_rows = Matrix::zeros(f, cover_maps.len(), hom_dim);
    for (i, m) in cover_maps.iter().enumerate() {
        let composed = cover.map.matrix.mul(&m.matrix);
        let coords = hom_rows
            .coords(&flatten(&composed))
            .expect("projective factorization is equivariant, must lie in the hom space");
        for (j, &x) in coords.iter().enumerate() {
            factoring_rows.set(i, j, x);
        }
    }
    let ech = factoring_rows.row_echelon();
    let frank = ech.pivots.len();
    let mut factoring = Matrix::zeros(f, frank, hom_dim);
    for i in 0..frank {
        for j in 0..hom_dim {
            factoring.set(i, j, ech.rref.at(i, j));
        }
    }
    let quot = quotient_space(f, hom_dim, &factoring);
    Ok(StableHomSpace { a: a.clone(), b: b.clone(), homs, hom_rows, cover, cover_maps, factoring, quot })
}

impl StableHomSpace {
    pub fn dim(&self) -> usize {
        self.quot.coset_basis.rows
    }

    pub fn hom_dim(&self) -> usize {
        self.homs.len()
    }

    /// Coordinates of the stable class of f in the coset basis.
    pub fn class_of(&self, f: &ModuleMap) -> Vec<u32> {
        let coords = self
            .hom_rows
            .coords(&flatten(&f.matrix))
            .expect("map is not in the hom space (not equivariant?)");
        self.quot.projection.apply(&coords)
    }

    /// A module map representing the class with the given coset coordinates.
    pub fn rep_of(&self, class: &[u32]) -> ModuleMap {
        assert!(class.len() == self.dim());
        let field = self.a.field;
        let mut matrix = Matrix::zeros(field, self.b.dim, self.a.dim);
        for (i, &c) in class.iter().enumerate() {
            if c == 0 {
                continue;
            }
            // coset basis row i is a hom-coordinate vector
            for (j, &hj) in self.quot.coset_basis.row(i).iter().enumerate() {
                if hj != 0 {
                    matrix = matrix.add(&self.homs[j].matrix.scale(field.mul(hj, c)));
                }
            }
        }
        ModuleMap { source: self.a.clone(), target: self.b.clone(), matrix }
    }

    /// If f factors through a projective, produce h: a → F_pG^r with
    /// π ∘ h = f for the fixed cover π; otherwise None.
    pub fn lifting_test(&self, f: &ModuleMap) -> Option<ModuleMap> {
        let field = self.a.field;
        let mut system = Matrix::zeros(field, self.a.dim * self.b.dim, self.cover_maps.len());
        for (i, m) in self.cover_maps.iter().enumerate() {
            let composed = self.cover.map.matrix.mul(&m.matrix);
            system.set_col(i, &flatten(&composed));
        }
        let solver = ColumnSolver::new(&system);
        let x = solver.solve(&flatten(&f.matrix))?;
        let mut h = Matrix::zeros(field, self.cover.term.module.dim, self.a.dim);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                h = h.add(&self.cover_maps[i].matrix.scale(c));
            }
        }
        Some(ModuleMap { source: self.a.clone(), target: self.cover.term.module.clone(), matrix: h })
    }
}

/// Matrix of precomposition with g: a' → a, as a map of stable spaces
/// [a, b] → [a', b], in coset coordinates.
pub fn precompose_stable(src: &StableHomSpace, dst: &StableHomSpace, g: &ModuleMap) -> Matrix {
    assert!(g.target.dim == src.a.dim && g.source.dim == dst.a.dim);
    let mut out = Matrix::zeros(src.a.field, dst.dim(), src.dim());
    for j in 0..src.dim() {
        let mut class = vec![0u32; src.dim()];
        class[j] = 1;
        let f = src.rep_of(&class);
        let composed = f.compose(g);
        out.set_col(j, &dst.class_of(&composed));
    }
    out
}

/// Matrix of postcomposition with h: b → b', as a map [a, b] → [a, b'].
pub fn postcompose_stable(src: &StableHomSpace, dst: &StableHomSpace, h: &ModuleMap) -> Matrix {
    assert!(h.source.dim == src.b.dim && h.target.dim == dst.b.dim);
    let mut out = Matrix::zeros(src.a.field, dst.dim(), src.dim());
    for j in 0..src.dim() {
        let mut class = vec![0u32; src.dim()];
        class[j] = 1;
        let f = src.rep_of(&class);
        let composed = h.compose(&f);
        out.set_col(j, &dst.class_of(&composed));
    }
    out
}

/// The colimit transition in coset coordinates:
/// [Ã_{d}, B̃_k] → [Ã_{d+1}, B̃_{k+1}], f ↦ (lift of f∘π_A through π_B)
/// restricted to the next syzygy.  Requires res_a extended through d+1 and
/// res_b through k+1.
pub fn transition_matrix(
    res_a: &FreeResolution,
    res_b: &FreeResolution,
    d: usize,
    k: usize,
    src: &StableHomSpace,
    dst: &StableHomSpace,
) -> Result<Matrix, Error> {
    let field = src.a.field;
    let pi_a = res_a.syzygy_project(d);
    let pi_b = res_b.syzygy_project(k);
    let solver = ColumnSolver::new(&pi_b.matrix);
    let incl_next = res_a.syzygy_include(d + 1);
    let term_a = &res_a.terms[d];
    let mut out = Matrix::zeros(field, dst.dim(), src.dim());
    for j in 0..src.dim() {
        let mut class = vec![0u32; src.dim()];
        class[j] = 1;
        let f = src.rep_of(&class);
        let u = f.matrix.mul(&pi_a.matrix);
        let images = solver
            .solve_matrix(&term_a.generator_columns(&u))
            .ok_or_else(|| Error::Exactness(format!("cover projection not surjective at k = {}", k)))?;
        let h = term_a.generator_image_map(&res_b.terms[k].module, &images);
        let restricted = h.matrix.mul(&incl_next.matrix);
        let coords = res_b.syzygy_coords(k + 1, &restricted).ok_or_else(|| {
            Error::Exactness(format!(
                "restriction does not land in the syzygy at k = {} (cover kernel mismatch)",
                k + 1
            ))
        })?;
        let map = ModuleMap {
            source: res_a.syzygy_module(d + 1),
            target: res_b.syzygy_module(k + 1),
            matrix: coords,
        };
        out.set_col(j, &dst.class_of(&map));
    }
    Ok(out)
}

/// Whether a stable-space map given by its coset-coordinate matrix is an
/// isomorphism.
pub fn is_iso(m: &Matrix) -> bool {
    m.rows == m.cols && m.rank() == m.rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::PrimeField;
    use crate::resolution::group_algebra_radical;
    use std::rc::Rc;

    fn setup(name: &str, p: u32) -> (Rc<crate::modrep::FiniteGroup>, PrimeField, Matrix) {
        let g = catalog::group(name).unwrap();
        let f = PrimeField::new(p).unwrap();
        let rad = group_algebra_radical(&g, f).unwrap();
        (g, f, rad)
    }

    #[test]
    fn stable_endomorphisms_of_k_are_one_dimensional() {
        for (name, p) in [("C2", 2u32), ("C3", 3)] {
            let (g, f, rad) = setup(name, p);
            let k = Module::trivial(g, f);
            let s = stable_hom(&k, &k, &rad).unwrap();
            assert_eq!(s.hom_dim(), 1);
            assert_eq!(s.dim(), 1, "[k,k] over F_{}[{}]", p, name);
        }
    }

    #[test]
    fn semisimple_case_collapses_to_zero() {
        let (g, f, rad) = setup("C2", 3);
        assert_eq!(rad.rows, 0);
        let k = Module::trivial(g, f);
        let s = stable_hom(&k, &k, &rad).unwrap();
        assert_eq!(s.hom_dim(), 1);
        assert_eq!(s.dim(), 0, "projective modules have no stable maps");
    }

    #[test]
    fn projective_source_and_target_give_zero() {
        let (g, f, rad) = setup("C4", 2);
        let k = Module::trivial(g.clone(), f);
        let reg = Module::regular(g, f);
        let s1 = stable_hom(&reg, &k, &rad).unwrap();
        assert_eq!(s1.dim(), 0);
        let s2 = stable_hom(&k, &reg, &rad).unwrap();
        assert_eq!(s2.dim(), 0);
        let s3 = stable_hom(&reg, &reg, &rad).unwrap();
        assert_eq!(s3.dim(), 0);
    }

    #[test]
    fn lifting_test_detects_projective_factorizations() {
        let (g, f, rad) = setup("C2", 2);
        let k = Module::trivial(g.clone(), f);
        let reg = Module::regular(g, f);
        let s = stable_hom(&reg, &reg, &rad).unwrap();
        let id = ModuleMap::identity(&reg);
        let h = s.lifting_test(&id).expect("identity of a free module factors");
        assert_eq!(s.cover.map.matrix.mul(&h.matrix), id.matrix);
        let sk = stable_hom(&k, &k, &rad).unwrap();
        let idk = ModuleMap::identity(&k);
        assert!(sk.lifting_test(&idk).is_none(), "identity of k is not stably trivial");
        // but zero always lifts
        assert!(sk.lifting_test(&ModuleMap::zero(&k, &k)).is_some());
    }

    #[test]
    fn factoring_subspace_is_cover_independent() {
        let (g, f, rad) = setup("C4", 2);
        let k = Module::trivial(g.clone(), f);
        let m3 = {
            // the 3-dimensional augmentation-ideal submodule of F_2C4
            let reg = Module::regular(g.clone(), f);
            let rows = Matrix::from_rows(f, &[vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1]]);
            reg.submodule_from_basis(rows).0
        };
        let s_min = stable_hom(&m3, &k, &rad).unwrap();
        // recompute against a non-minimal cover: rank = dim(b) many generators
        let homs = s_min.homs.clone();
        let mut hom_matrix = Matrix::zeros(f, homs.len(), m3.dim * k.dim);
        for (i, h) in homs.iter().enumerate() {
            for (j, &x) in flatten(&h.matrix).iter().enumerate() {
                hom_matrix.set(i, j, x);
            }
        }
        let hom_rows = RowBasis::new(hom_matrix).unwrap();
        let cover = free_cover(&k, false, &rad).unwrap();
        let maps = maps_into_free(&m3, cover.term.rank);
        let mut rows = Matrix::zeros(f, maps.len(), homs.len());
        for (i, m) in maps.iter().enumerate() {
            let composed = cover.map.matrix.mul(&m.matrix);
            let coords = hom_rows.coords(&flatten(&composed)).unwrap();
            for (j, &x) in coords.iter().enumerate() {
                rows.set(i, j, x);
            }
        }
        let ech = rows.row_echelon();
        assert_eq!(ech.pivots.len(), s_min.factoring.rows, "factoring subspace dimension");
        for i in 0..s_min.factoring.rows {
            for j in 0..homs.len() {
                assert_eq!(ech.rref.at(i, j), s_min.factoring.at(i, j), "factoring subspace basis");
            }
        }
    }

    #[test]
    fn transitions_along_syzygies_are_isomorphisms() {
        let (g, f, rad) = setup("C2", 2);
        let rad = Rc::new(rad);
        let k = Module::trivial(g, f);
        let mut res = crate::resolution::FreeResolution::new(k, true, rad.clone()).unwrap();
        res.extend_to(4).unwrap();
        for start in 1..=2usize {
            let src = stable_hom(&res.syzygy_module(start), &res.syzygy_module(start), &rad).unwrap();
            let dst = stable_hom(&res.syzygy_module(start + 1), &res.syzygy_module(start + 1), &rad).unwrap();
            let t = transition_matrix(&res, &res, start, start, &src, &dst).unwrap();
            assert!(is_iso(&t), "transition at {} should be invertible", start);
            assert_eq!(t.rows, 1);
        }
    }

    #[test]
    fn induced_maps_respect_identity() {
        let (g, f, rad) = setup("C4", 2);
        let k = Module::trivial(g, f);
        let s = stable_hom(&k, &k, &rad).unwrap();
        let id = ModuleMap::identity(&k);
        let pre = precompose_stable(&s, &s, &id);
        let post = postcompose_stable(&s, &s, &id);
        assert_eq!(pre, Matrix::identity(f, s.dim()));
        assert_eq!(post, Matrix::identity(f, s.dim()));
    }

    #[test]
    fn stable_class_roundtrip() {
        let (g, f, rad) = setup("V4", 2);
        let k = Module::trivial(g.clone(), f);
        let reg = Module::regular(g, f);
        // b = k ⊕ F_2V4 has stable homs only into the k part
        let b = Module::direct_sum(vec![k.clone(), reg]);
        let s = stable_hom(&k, &b, &rad).unwrap();
        assert_eq!(s.dim(), 1);
        for j in 0..s.dim() {
            let mut class = vec![0u32; s.dim()];
            class[j] = 1;
            let rep = s.rep_of(&class);
            assert_eq!(s.class_of(&rep), class);
        }
    }
}
