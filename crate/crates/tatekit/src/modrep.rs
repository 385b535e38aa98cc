//! Finite groups and their modular representations.
//!
//! Groups are given by explicit multiplication tables (index 0 is always the
//! identity) and validated on construction: associativity on every triple,
//! two-sided identity, inverses, and that the declared generators reach the
//! whole group.  Failures carry the first offending indices.
//!
//! Modules know their action in one of three forms.  Small "working" modules
//! store one dense matrix per group element.  Free modules F_pG^r and tensor
//! products act through their structure (a block permutation, respectively a
//! Kronecker factorization), which keeps resolutions from materializing
//! |G| dense matrices on spaces of dimension rank * |G|.  All three answer
//! `apply` and can materialize any single action matrix on demand.

use std::collections::HashMap;
use std::rc::Rc;

use serde::Deserialize;

use crate::error::Error;
use crate::linalg::{kronecker, Matrix, PrimeField, RowBasis};

#[derive(Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub order: usize,
    mult: Vec<usize>,
    pub generators: Vec<usize>,
    inverse: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mult == other.mult
    }
}

impl FiniteGroup {
    pub fn new(name: &str, table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Rc<FiniteGroup>, Error> {
        let order = table.len();
        if order == 0 {
            return Err(Error::GroupValidation("empty multiplication table".into()));
        }
        let mut mult = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::GroupValidation(format!(
                    "row {} has length {}, expected {}",
                    i, row.len(), order
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::GroupValidation(format!(
                        "entry at ({},{}) is {}, out of range 0..{}",
                        i, j, v, order
                    )));
                }
                mult.push(v);
            }
        }
        for g in generators.iter() {
            if *g >= order {
                return Err(Error::GroupValidation(format!("generator index {} out of range", g)));
            }
        }
        let m = |a: usize, b: usize| mult[a * order + b];
        for j in 0..order {
            if m(0, j) != j || m(j, 0) != j {
                return Err(Error::GroupValidation(format!(
                    "element 0 is not a two-sided identity (fails at element {})",
                    j
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::GroupValidation(format!(
                            "associativity fails at triple ({},{},{})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| m(a, b) == 0 && m(b, a) == 0) {
                Some(b) => inverse[a] = b,
                None => {
                    return Err(Error::GroupValidation(format!("element {} has no inverse", a)));
                }
            }
        }
        // generators must reach everything
        let mut seen = vec![false; order];
        seen[0] = true;
        let mut queue = vec![0usize];
        while let Some(h) = queue.pop() {
            for &s in &generators {
                let g = m(s, h);
                if !seen[g] {
                    seen[g] = true;
                    queue.push(g);
                }
            }
        }
        if let Some(unreached) = seen.iter().position(|&s| !s) {
            return Err(Error::GroupValidation(format!(
                "generators {:?} do not generate: element {} unreached",
                generators, unreached
            )));
        }
        Ok(Rc::new(FiniteGroup { name: name.to_string(), order, mult, generators, inverse }))
    }

    /// Build the closure of a set of permutations of {0..n-1} under
    /// composition.  Element 0 is the identity permutation; the rest appear
    /// in breadth-first order, so indices are deterministic.
    pub fn from_permutations(name: &str, perms: &[Vec<usize>]) -> Result<Rc<FiniteGroup>, Error> {
        if perms.is_empty() {
            return Err(Error::GroupValidation("no permutation generators given".into()));
        }
        let n = perms[0].len();
        for (i, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(Error::GroupValidation(format!(
                    "permutation {} has length {}, expected {}",
                    i, p.len(), n
                )));
            }
            let mut seen = vec![false; n];
            for &x in p {
                if x >= n || seen[x] {
                    return Err(Error::GroupValidation(format!("permutation {} is not a bijection", i)));
                }
                seen[x] = true;
            }
        }
        let compose = |f: &[usize], g: &[usize]| -> Vec<usize> { g.iter().map(|&x| f[x]).collect() };
        let identity: Vec<usize> = (0..n).collect();
        let mut elems: Vec<Vec<usize>> = vec![identity];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut cursor = 0;
        while cursor < elems.len() {
            let current = elems[cursor].clone();
            for p in perms {
                let q = compose(p, &current);
                if !index.contains_key(&q) {
                    index.insert(q.clone(), elems.len());
                    elems.push(q);
                }
            }
            cursor += 1;
        }
        let order = elems.len();
        let mut table = vec![vec![0usize; order]; order];
        for a in 0..order {
            for b in 0..order {
                let q = compose(&elems[a], &elems[b]);
                table[a][b] = index[&q];
            }
        }
        let generators: Vec<usize> = perms.iter().map(|p| index[p]).collect();
        FiniteGroup::new(name, table, generators)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(g, x);
            k += 1;
        }
        k
    }

    /// Content-based cache key: the full multiplication table.
    pub fn table_fingerprint(&self) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.order * self.order + 1);
        v.push(self.order as u32);
        for a in 0..self.order {
            for b in 0..self.order {
                v.push(self.mul(a, b) as u32);
            }
        }
        v
    }

    /// Smallest generating set found greedily by ascending element index.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut reached = vec![false; self.order];
        reached[0] = true;
        let mut count = 1;
        while count < self.order {
            let next = (0..self.order).find(|&g| !reached[g]).unwrap();
            gens.push(next);
            // close up under the enlarged set
            let mut queue: Vec<usize> = (0..self.order).filter(|&g| reached[g]).collect();
            while let Some(h) = queue.pop() {
                for &s in &gens {
                    let g = self.mul(s, h);
                    if !reached[g] {
                        reached[g] = true;
                        count += 1;
                        queue.push(g);
                    }
                }
            }
        }
        gens
    }
}

/// A subgroup H of a fixed parent group, with left coset data G = ⊔ rH.
/// Coset representatives are chosen smallest-element-first, so the identity
/// represents H itself.
#[derive(Debug)]
pub struct Subgroup {
    pub parent: Rc<FiniteGroup>,
    /// Sorted parent indices of the subgroup elements.
    pub elements: Vec<usize>,
    /// Representatives of the left cosets, in order of discovery.
    pub coset_reps: Vec<usize>,
    coset_of: Vec<usize>,
    position: Vec<usize>, // parent index -> position in `elements` (or MAX)
    /// The subgroup as a group in its own right, elements re-indexed by
    /// their position in `elements` (identity stays at 0).
    pub as_group: Rc<FiniteGroup>,
}

impl Subgroup {
    /// Subgroup generated by the given parent element indices.
    pub fn generated_by(parent: Rc<FiniteGroup>, gens: &[usize]) -> Result<Subgroup, Error> {
        for &g in gens {
            if g >= parent.order {
                return Err(Error::SubgroupValidation(format!("element index {} out of range", g)));
            }
        }
        let mut in_h = vec![false; parent.order];
        in_h[0] = true;
        let mut queue = vec![0usize];
        while let Some(h) = queue.pop() {
            for &s in gens {
                let g = parent.mul(s, h);
                if !in_h[g] {
                    in_h[g] = true;
                    queue.push(g);
                }
            }
        }
        let elements: Vec<usize> = (0..parent.order).filter(|&g| in_h[g]).collect();
        Subgroup::from_elements(parent, elements)
    }

    /// Build from an explicit element set; validates closure and inverses.
    pub fn from_elements(parent: Rc<FiniteGroup>, elements: Vec<usize>) -> Result<Subgroup, Error> {
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::SubgroupValidation("subgroup must contain the identity (index 0)".into()));
        }
        let mut position = vec![usize::MAX; parent.order];
        for (i, &g) in elements.iter().enumerate() {
            if g >= parent.order {
                return Err(Error::SubgroupValidation(format!("element index {} out of range", g)));
            }
            position[g] = i;
        }
        for &a in &elements {
            if position[parent.inv(a)] == usize::MAX {
                return Err(Error::SubgroupValidation(format!("not closed under inverse at element {}", a)));
            }
            for &b in &elements {
                if position[parent.mul(a, b)] == usize::MAX {
                    return Err(Error::SubgroupValidation(format!(
                        "not closed under multiplication at pair ({},{})",
                        a, b
                    )));
                }
            }
        }
        // left cosets rH, representatives smallest-first
        let mut coset_of = vec![usize::MAX; parent.order];
        let mut coset_reps = Vec::new();
        for g in 0..parent.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = coset_reps.len();
            coset_reps.push(g);
            for &h in &elements {
                coset_of[parent.mul(g, h)] = idx;
            }
        }
        // re-indexed group structure
        let order = elements.len();
        let mut table = vec![vec![0usize; order]; order];
        for i in 0..order {
            for j in 0..order {
                table[i][j] = position[parent.mul(elements[i], elements[j])];
            }
        }
        let sub_parent_gens: Vec<usize> = {
            // find a small generating set inside H, greedily
            let tmp = FiniteGroup::new("tmp", table.clone(), (0..order).collect())?;
            tmp.greedy_generators()
        };
        let as_group = FiniteGroup::new(
            &format!("{}|H{}", parent.name, order),
            table,
            if order == 1 { vec![] } else { sub_parent_gens },
        )?;
        Ok(Subgroup { parent, elements, coset_reps, coset_of, position, as_group })
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position[g] != usize::MAX
    }

    /// Position of a parent element inside `elements`; panics if outside H.
    pub fn position_of(&self, g: usize) -> usize {
        let p = self.position[g];
        assert!(p != usize::MAX, "element {} is not in the subgroup", g);
        p
    }
}

#[derive(Clone)]
enum ModuleKind {
    Explicit { action: Rc<Vec<Matrix>> },
    Free { rank: usize },
    Tensor { left: Rc<Module>, right: Rc<Module> },
    DirectSum { parts: Rc<Vec<Module>> },
}

/// A finite-dimensional F_p[G]-module.
#[derive(Clone)]
pub struct Module {
    pub group: Rc<FiniteGroup>,
    pub field: PrimeField,
    pub dim: usize,
    kind: ModuleKind,
}

impl std::fmt::Debug for Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.kind {
            ModuleKind::Explicit { .. } => "explicit".to_string(),
            ModuleKind::Free { rank } => format!("free rank {}", rank),
            ModuleKind::Tensor { .. } => "tensor".to_string(),
            ModuleKind::DirectSum { parts } => format!("direct sum of {}", parts.len()),
        };
        write!(f, "Module(dim {} over F_{}[{}], {})", self.dim, self.field.order(), self.group.name, kind)
    }
}

impl Module {
    pub fn trivial(group: Rc<FiniteGroup>, field: PrimeField) -> Module {
        let action = vec![Matrix::identity(field, 1); group.order];
        Module { group, field, dim: 1, kind: ModuleKind::Explicit { action: Rc::new(action) } }
    }

    pub fn zero(group: Rc<FiniteGroup>, field: PrimeField) -> Module {
        let action = vec![Matrix::zeros(field, 0, 0); group.order];
        Module { group, field, dim: 0, kind: ModuleKind::Explicit { action: Rc::new(action) } }
    }

    pub fn regular(group: Rc<FiniteGroup>, field: PrimeField) -> Module {
        Module::free(group, field, 1)
    }

    /// F_pG^rank with basis indexed by (copy, group element) at
    /// copy * |G| + element.  The free generators sit at the identity slots.
    pub fn free(group: Rc<FiniteGroup>, field: PrimeField, rank: usize) -> Module {
        let dim = rank * group.order;
        Module { group, field, dim, kind: ModuleKind::Free { rank } }
    }

    /// Explicit module from one action matrix per group element, fully
    /// validated: identity acts as 1 and the action is multiplicative on
    /// every pair of group elements.
    pub fn explicit(group: Rc<FiniteGroup>, field: PrimeField, action: Vec<Matrix>) -> Result<Module, Error> {
        if action.len() != group.order {
            return Err(Error::ModuleValidation(format!(
                "expected {} action matrices, got {}",
                group.order, action.len()
            )));
        }
        let dim = action.first().map_or(0, |m| m.rows);
        crate::check_dim(dim)?;
        for (g, m) in action.iter().enumerate() {
            if m.rows != dim || m.cols != dim {
                return Err(Error::ModuleValidation(format!(
                    "action of element {} is {}x{}, expected {}x{}",
                    g, m.rows, m.cols, dim, dim
                )));
            }
        }
        if action[0] != Matrix::identity(field, dim) {
            return Err(Error::ModuleValidation("identity element must act as the identity matrix".into()));
        }
        for a in 0..group.order {
            for b in 0..group.order {
                if action[a].mul(&action[b]) != action[group.mul(a, b)] {
                    return Err(Error::ModuleValidation(format!(
                        "action is not multiplicative at pair ({},{})",
                        a, b
                    )));
                }
            }
        }
        Ok(Module { group, field, dim, kind: ModuleKind::Explicit { action: Rc::new(action) } })
    }

    /// Internal constructor for actions that are multiplicative by
    /// construction (restrictions of a valid action to an invariant
    /// subspace, quotients, induced blocks).  Debug builds still verify
    /// multiplicativity on generators.
    pub(crate) fn explicit_unchecked(group: Rc<FiniteGroup>, field: PrimeField, action: Vec<Matrix>) -> Module {
        let dim = action.first().map_or(0, |m| m.rows);
        #[cfg(debug_assertions)]
        {
            assert_eq!(action.len(), group.order);
            assert_eq!(action[0], Matrix::identity(field, dim));
            for &s in &group.generators {
                for b in 0..group.order {
                    assert_eq!(
                        action[s].mul(&action[b]),
                        action[group.mul(s, b)],
                        "internal action not multiplicative at ({},{})",
                        s, b
                    );
                }
            }
        }
        Module { group, field, dim, kind: ModuleKind::Explicit { action: Rc::new(action) } }
    }

    /// Expand per-generator action matrices along the Cayley graph and
    /// validate the result.
    pub fn from_generator_actions(
        group: Rc<FiniteGroup>,
        field: PrimeField,
        dim: usize,
        gen_actions: &HashMap<usize, Matrix>,
    ) -> Result<Module, Error> {
        for &g in &group.generators {
            if !gen_actions.contains_key(&g) {
                return Err(Error::ModuleValidation(format!(
                    "missing action for generator index {}",
                    g
                )));
            }
        }
        let mut action: Vec<Option<Matrix>> = vec![None; group.order];
        action[0] = Some(Matrix::identity(field, dim));
        let mut queue = vec![0usize];
        while let Some(h) = queue.pop() {
            for &s in &group.generators {
                let g = group.mul(s, h);
                if action[g].is_none() {
                    let m = gen_actions[&s].mul(action[h].as_ref().unwrap());
                    action[g] = Some(m);
                    queue.push(g);
                }
            }
        }
        let action: Vec<Matrix> = action
            .into_iter()
            .enumerate()
            .map(|(g, m)| m.ok_or_else(|| Error::ModuleValidation(format!("element {} unreachable from generators", g))))
            .collect::<Result<_, _>>()?;
        Module::explicit(group, field, action)
    }

    pub fn tensor(a: &Module, b: &Module) -> Result<Module, Error> {
        assert!(Rc::ptr_eq(&a.group, &b.group) || a.group == b.group, "tensor over different groups");
        assert!(a.field == b.field, "tensor over different fields");
        crate::check_dim(a.dim * b.dim)?;
        Ok(Module {
            group: a.group.clone(),
            field: a.field,
            dim: a.dim * b.dim,
            kind: ModuleKind::Tensor { left: Rc::new(a.clone()), right: Rc::new(b.clone()) },
        })
    }

    /// Block direct sum; basis indices are consecutive over the parts.
    pub fn direct_sum(parts: Vec<Module>) -> Module {
        assert!(!parts.is_empty(), "direct_sum needs at least one part");
        let group = parts[0].group.clone();
        let field = parts[0].field;
        for p in &parts {
            assert!(p.group == group && p.field == field, "direct_sum over mixed groups/fields");
        }
        let dim = parts.iter().map(|p| p.dim).sum();
        Module { group, field, dim, kind: ModuleKind::DirectSum { parts: Rc::new(parts) } }
    }

    /// The summands of a direct sum (singleton slice view otherwise: None).
    pub fn summands(&self) -> Option<&[Module]> {
        match &self.kind {
            ModuleKind::DirectSum { parts } => Some(parts),
            _ => None,
        }
    }

    /// The contragredient module: g acts by the transposed inverse.  The
    /// regular module is self-dual on the nose (the transpose of the
    /// permutation matrix of g^{-1} is the permutation matrix of g), so free
    /// modules stay free with identical structure, and the double dual of an
    /// explicit module is literally equal to it.
    pub fn dual(&self) -> Module {
        match &self.kind {
            ModuleKind::Free { .. } => self.clone(),
            ModuleKind::Tensor { left, right } => Module {
                group: self.group.clone(),
                field: self.field,
                dim: self.dim,
                kind: ModuleKind::Tensor { left: Rc::new(left.dual()), right: Rc::new(right.dual()) },
            },
            ModuleKind::DirectSum { parts } => {
                Module::direct_sum(parts.iter().map(|p| p.dual()).collect())
            }
            ModuleKind::Explicit { action } => {
                let dual_action: Vec<Matrix> = (0..self.group.order)
                    .map(|g| action[self.group.inv(g)].transpose())
                    .collect();
                Module::explicit_unchecked(self.group.clone(), self.field, dual_action)
            }
        }
    }

    pub fn is_free_kind(&self) -> bool {
        matches!(self.kind, ModuleKind::Free { .. })
    }

    pub fn free_rank(&self) -> Option<usize> {
        match self.kind {
            ModuleKind::Free { rank } => Some(rank),
            _ => None,
        }
    }

    /// Apply the action of group element g to a column vector.
    pub fn apply(&self, g: usize, v: &[u32]) -> Vec<u32> {
        assert!(v.len() == self.dim, "apply: vector length {} vs dim {}", v.len(), self.dim);
        match &self.kind {
            ModuleKind::Explicit { action } => action[g].apply(v),
            ModuleKind::Free { rank } => {
                let n = self.group.order;
                let mut out = vec![0u32; self.dim];
                for i in 0..*rank {
                    for h in 0..n {
                        out[i * n + self.group.mul(g, h)] = v[i * n + h];
                    }
                }
                out
            }
            ModuleKind::DirectSum { parts } => {
                let mut out = Vec::with_capacity(self.dim);
                let mut offset = 0;
                for p in parts.iter() {
                    out.extend(p.apply(g, &v[offset..offset + p.dim]));
                    offset += p.dim;
                }
                out
            }
            ModuleKind::Tensor { left, right } => {
                let dl = left.dim;
                let dr = right.dim;
                // (L ⊗ R) v: view v as a dl x dr array V, compute L V R^T.
                // First L applied to each column, then R applied to each row.
                let mut mid = vec![0u32; dl * dr];
                for j in 0..dr {
                    let col: Vec<u32> = (0..dl).map(|i| v[i * dr + j]).collect();
                    let lc = left.apply(g, &col);
                    for i in 0..dl {
                        mid[i * dr + j] = lc[i];
                    }
                }
                let mut out = vec![0u32; dl * dr];
                for i in 0..dl {
                    let row: Vec<u32> = mid[i * dr..(i + 1) * dr].to_vec();
                    let rr = right.apply(g, &row);
                    out[i * dr..(i + 1) * dr].copy_from_slice(&rr);
                }
                out
            }
        }
    }

    /// Materialize the action matrix of a single element.
    pub fn action_matrix(&self, g: usize) -> Matrix {
        match &self.kind {
            ModuleKind::Explicit { action } => action[g].clone(),
            _ => {
                let mut m = Matrix::zeros(self.field, self.dim, self.dim);
                for j in 0..self.dim {
                    let mut e = vec![0u32; self.dim];
                    e[j] = 1;
                    m.set_col(j, &self.apply(g, &e));
                }
                m
            }
        }
    }

    /// Apply the action of g to every column of a matrix whose columns are
    /// vectors in this module.
    pub fn apply_to_columns(&self, g: usize, m: &Matrix) -> Matrix {
        assert!(m.rows == self.dim, "apply_to_columns: {} rows vs dim {}", m.rows, self.dim);
        let mut out = Matrix::zeros(self.field, m.rows, m.cols);
        for j in 0..m.cols {
            out.set_col(j, &self.apply(g, &m.col(j)));
        }
        out
    }

    /// Content key for caches: prime, dimension, and the generator action
    /// matrices.  Two modules with equal keys have equal actions.
    pub fn content_key(&self) -> ModuleContentKey {
        let gens = if self.group.generators.is_empty() { vec![0] } else { self.group.generators.clone() };
        let mut data = Vec::new();
        for &g in &gens {
            let m = self.action_matrix(g);
            for i in 0..m.rows {
                data.extend_from_slice(m.row(i));
            }
        }
        ModuleContentKey {
            prime: self.field.order(),
            group_order: self.group.order,
            dim: self.dim,
            gen_actions: data,
        }
    }

    /// The submodule generated by the given row vectors: their span closed
    /// under the group action, returned with its inclusion map.
    pub fn submodule_generated(&self, vectors: &Matrix) -> (Module, ModuleMap) {
        assert!(vectors.cols == self.dim || vectors.rows == 0);
        let mut span = if vectors.rows == 0 {
            Matrix::zeros(self.field, 0, self.dim)
        } else {
            let ech = vectors.row_echelon();
            let rank = ech.pivots.len();
            let mut m = Matrix::zeros(self.field, rank, self.dim);
            for i in 0..rank {
                for j in 0..self.dim {
                    m.set(i, j, ech.rref.at(i, j));
                }
            }
            m
        };
        loop {
            let mut extended = span.clone();
            for &s in &self.group.generators {
                for i in 0..span.rows {
                    let img = self.apply(s, span.row(i));
                    extended = extended.vstack(&Matrix::from_rows(
                        self.field,
                        &[img.iter().map(|&x| x as i64).collect()],
                    ));
                }
            }
            let ech = extended.row_echelon();
            let rank = ech.pivots.len();
            if rank == span.rows {
                break;
            }
            let mut m = Matrix::zeros(self.field, rank, self.dim);
            for i in 0..rank {
                for j in 0..self.dim {
                    m.set(i, j, ech.rref.at(i, j));
                }
            }
            span = m;
        }
        self.submodule_from_basis(span)
    }

    /// Wrap an action-invariant row space (already a basis in RREF or at
    /// least independent) as a module with its inclusion map.
    pub fn submodule_from_basis(&self, basis: Matrix) -> (Module, ModuleMap) {
        let rb = RowBasis::new(basis.clone()).expect("submodule basis must be independent");
        let dim = basis.rows;
        let action: Vec<Matrix> = (0..self.group.order)
            .map(|g| {
                let mut m = Matrix::zeros(self.field, dim, dim);
                for i in 0..dim {
                    let img = self.apply(g, basis.row(i));
                    let coords = rb
                        .coords(&img)
                        .expect("subspace is not invariant under the group action");
                    m.set_col(i, &coords);
                }
                m
            })
            .collect();
        let sub = Module::explicit_unchecked(self.group.clone(), self.field, action);
        let incl = ModuleMap::new_unchecked(sub.clone(), self.clone(), basis.transpose());
        (sub, incl)
    }

    /// Quotient by an invariant subspace, returned with the projection map.
    pub fn quotient_by(&self, sub_basis: &Matrix) -> (Module, ModuleMap) {
        let q = crate::linalg::quotient_space(self.field, self.dim, sub_basis);
        let incl = q.coset_basis.transpose();
        let action: Vec<Matrix> = (0..self.group.order)
            .map(|g| q.projection.mul(&self.apply_to_columns(g, &incl)))
            .collect();
        let quo = Module::explicit_unchecked(self.group.clone(), self.field, action);
        let proj = ModuleMap::new_unchecked(self.clone(), quo.clone(), q.projection);
        (quo, proj)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModuleContentKey {
    prime: u32,
    group_order: usize,
    dim: usize,
    gen_actions: Vec<u32>,
}

/// An equivariant linear map between modules over the same group.
/// Equivariance is checked on construction (on generators, which suffices:
/// maps commuting with generator actions commute with every product of
/// generators).
#[derive(Clone)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    pub matrix: Matrix,
}

impl std::fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModuleMap({} -> {})", self.source.dim, self.target.dim)
    }
}

impl ModuleMap {
    pub fn new(source: Module, target: Module, matrix: Matrix) -> Result<ModuleMap, Error> {
        assert!(
            matrix.rows == target.dim && matrix.cols == source.dim,
            "map matrix is {}x{}, expected {}x{}",
            matrix.rows, matrix.cols, target.dim, source.dim
        );
        let gens = if source.group.generators.is_empty() {
            vec![]
        } else {
            source.group.generators.clone()
        };
        for &g in &gens {
            let lhs = target.apply_to_columns(g, &matrix);
            let mut rhs = Matrix::zeros(matrix.field, matrix.rows, matrix.cols);
            for j in 0..source.dim {
                let mut e = vec![0u32; source.dim];
                e[j] = 1;
                let moved = source.apply(g, &e);
                rhs.set_col(j, &matrix.apply(&moved));
            }
            if lhs != rhs {
                for i in 0..lhs.rows {
                    for j in 0..lhs.cols {
                        if lhs.at(i, j) != rhs.at(i, j) {
                            return Err(Error::NotEquivariant { element: g, row: i, col: j });
                        }
                    }
                }
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    /// For maps equivariant by construction; debug builds re-check.
    pub(crate) fn new_unchecked(source: Module, target: Module, matrix: Matrix) -> ModuleMap {
        debug_assert!(matrix.rows == target.dim && matrix.cols == source.dim);
        #[cfg(debug_assertions)]
        {
            let checked = ModuleMap::new(source.clone(), target.clone(), matrix.clone());
            assert!(checked.is_ok(), "internal map not equivariant: {:?}", checked.err());
        }
        ModuleMap { source, target, matrix }
    }

    pub fn identity(m: &Module) -> ModuleMap {
        ModuleMap::new_unchecked(m.clone(), m.clone(), Matrix::identity(m.field, m.dim))
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleMap {
        ModuleMap::new_unchecked(source.clone(), target.clone(), Matrix::zeros(source.field, target.dim, source.dim))
    }

    /// self after other.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        assert!(
            self.source.dim == other.target.dim,
            "compose: inner dims {} vs {}",
            self.source.dim, other.target.dim
        );
        ModuleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        ModuleMap { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// The tensor product map f (x) g on the tensor product modules.
    pub fn tensor(f: &ModuleMap, g: &ModuleMap) -> Result<ModuleMap, Error> {
        let source = Module::tensor(&f.source, &g.source)?;
        let target = Module::tensor(&f.target, &g.target)?;
        Ok(ModuleMap::new_unchecked(source, target, kronecker(&f.matrix, &g.matrix)))
    }
}

/// Basis of Hom_{F_pG}(a, b) as matrices, solved from the equivariance
/// constraints over the group generators. The order is canonical (row
/// echelon of the constraint kernel).
pub fn hom_basis(a: &Module, b: &Module) -> Vec<ModuleMap> {
    assert!(a.group == b.group, "hom between modules over different groups");
    let f = a.field;
    let unknowns = b.dim * a.dim; // f[i][j], index i * a.dim + j
    if unknowns == 0 {
        return vec![];
    }
    let gens: Vec<usize> = if a.group.generators.is_empty() { vec![] } else { a.group.generators.clone() };
    if gens.is_empty() {
        // trivial group: every matrix is equivariant
        let id = Matrix::identity(f, unknowns);
        return (0..unknowns)
            .map(|r| {
                let mut m = Matrix::zeros(f, b.dim, a.dim);
                for i in 0..b.dim {
                    for j in 0..a.dim {
                        m.set(i, j, id.at(r, i * a.dim + j));
                    }
                }
                ModuleMap::new_unchecked(a.clone(), b.clone(), m)
            })
            .collect();
    }
    let mut constraints = Matrix::zeros(f, gens.len() * unknowns, unknowns);
    for (gi, &g) in gens.iter().enumerate() {
        let ra = a.action_matrix(g);
        let rb = b.action_matrix(g);
        // (F ρ_a(g) - ρ_b(g) F)[i][j] = Σ_k F[i][k] ra[k][j] - Σ_k rb[i][k] F[k][j]
        for i in 0..b.dim {
            for j in 0..a.dim {
                let row = gi * unknowns + i * a.dim + j;
                for k in 0..a.dim {
                    let idx = i * a.dim + k;
                    let cur = constraints.at(row, idx);
                    constraints.set(row, idx, f.add(cur, ra.at(k, j)));
                }
                for k in 0..b.dim {
                    let idx = k * a.dim + j;
                    let cur = constraints.at(row, idx);
                    constraints.set(row, idx, f.sub(cur, rb.at(i, k)));
                }
            }
        }
    }
    let kernel = constraints.kernel_basis();
    (0..kernel.rows)
        .map(|r| {
            let mut m = Matrix::zeros(f, b.dim, a.dim);
            for i in 0..b.dim {
                for j in 0..a.dim {
                    m.set(i, j, kernel.at(r, i * a.dim + j));
                }
            }
            ModuleMap::new_unchecked(a.clone(), b.clone(), m)
        })
        .collect()
}

/// Search for an equivariant isomorphism a -> b.  Exhausts small coefficient
/// spaces of hom_basis combinations, falling back to a deterministic seeded
/// scan; returns the first invertible combination found.
pub fn find_isomorphism(a: &Module, b: &Module) -> Option<ModuleMap> {
    if a.dim != b.dim {
        return None;
    }
    if a.dim == 0 {
        return Some(ModuleMap::zero(a, b));
    }
    let basis = hom_basis(a, b);
    if basis.is_empty() {
        return None;
    }
    let f = a.field;
    let p = f.order() as u64;
    let d = basis.len();
    let total = (p as f64).powi(d as i32);
    let combine = |coeffs: &[u32]| -> Matrix {
        let mut m = Matrix::zeros(f, a.dim, a.dim);
        for (c, bm) in coeffs.iter().zip(basis.iter()) {
            if *c != 0 {
                m = m.add(&bm.matrix.scale(*c));
            }
        }
        m
    };
    if total <= 200_000.0 {
        let mut coeffs = vec![0u32; d];
        loop {
            // increment base-p counter
            let mut i = 0;
            loop {
                if i == d {
                    return None;
                }
                coeffs[i] += 1;
                if coeffs[i] < p as u32 {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            let m = combine(&coeffs);
            if m.determinant() != 0 {
                return Some(ModuleMap::new_unchecked(a.clone(), b.clone(), m));
            }
        }
    }
    // seeded scan
    let mut state = 0x9e3779b97f4a7c15u64;
    for _ in 0..20_000 {
        let coeffs: Vec<u32> = (0..d)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % p) as u32
            })
            .collect();
        let m = combine(&coeffs);
        if m.determinant() != 0 {
            return Some(ModuleMap::new_unchecked(a.clone(), b.clone(), m));
        }
    }
    None
}

/// Restriction to a subgroup: same underlying space, action of h in H given
/// by the parent action, re-indexed over `sub.as_group`.
pub fn restrict(sub: &Subgroup, m: &Module) -> Module {
    assert!(*m.group == *sub.parent, "restrict: module is not over the parent group");
    let action: Vec<Matrix> = sub.elements.iter().map(|&h| m.action_matrix(h)).collect();
    Module::explicit_unchecked(sub.as_group.clone(), m.field, action)
}

/// Induction Ind_H^G m = F_pG ⊗_{F_pH} m with basis (coset, module basis)
/// at index coset * dim(m) + j.  The element g sends block i to block j with
/// the action of h, where g r_i = r_j h.
pub fn induce(sub: &Subgroup, m: &Module) -> Result<Module, Error> {
    assert!(*m.group == *sub.as_group, "induce: module is not over the subgroup");
    let g_order = sub.parent.order;
    let idx = sub.index();
    let dim = idx * m.dim;
    crate::check_dim(dim)?;
    let action: Vec<Matrix> = (0..g_order)
        .map(|g| {
            let mut a = Matrix::zeros(m.field, dim, dim);
            for i in 0..idx {
                let t = sub.parent.mul(g, sub.coset_reps[i]);
                let j = sub.coset_of(t);
                let h = sub.parent.mul(sub.parent.inv(sub.coset_reps[j]), t);
                let hm = m.action_matrix(sub.position_of(h));
                for r in 0..m.dim {
                    for c in 0..m.dim {
                        let v = hm.at(r, c);
                        if v != 0 {
                            a.set(j * m.dim + r, i * m.dim + c, v);
                        }
                    }
                }
            }
            a
        })
        .collect();
    Ok(Module::explicit_unchecked(sub.parent.clone(), m.field, action))
}

/// Coinduction realized through duality: Coind_H^G m = (Ind_H^G m*)*.
/// At finite index this is isomorphic to induction.
pub fn coinduce(sub: &Subgroup, m: &Module) -> Result<Module, Error> {
    Ok(induce(sub, &m.dual())?.dual())
}

// ---------------------------------------------------------------------------
// JSON file formats
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct GroupFile {
    name: String,
    #[serde(default)]
    order: Option<usize>,
    #[serde(default)]
    mult_table: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    generators: Option<Vec<usize>>,
    #[serde(default)]
    permutation_generators: Option<Vec<Vec<usize>>>,
}

/// Parse a group description: either an explicit table
/// `{"name", "order", "mult_table", "generators"}` or
/// `{"name", "permutation_generators"}`.
pub fn group_from_json(text: &str) -> Result<Rc<FiniteGroup>, Error> {
    let gf: GroupFile = serde_json::from_str(text)?;
    group_from_file(gf)
}

fn group_from_file(gf: GroupFile) -> Result<Rc<FiniteGroup>, Error> {
    if let Some(perms) = gf.permutation_generators {
        return FiniteGroup::from_permutations(&gf.name, &perms);
    }
    let table = gf
        .mult_table
        .ok_or_else(|| Error::Input("group file needs mult_table or permutation_generators".into()))?;
    if let Some(order) = gf.order {
        if order != table.len() {
            return Err(Error::GroupValidation(format!(
                "declared order {} does not match table size {}",
                order, table.len()
            )));
        }
    }
    let generators = gf
        .generators
        .ok_or_else(|| Error::Input("group file with mult_table needs generators".into()))?;
    FiniteGroup::new(&gf.name, table, generators)
}

#[derive(Deserialize)]
struct ModuleFile {
    prime: u32,
    group: serde_json::Value,
    dim: usize,
    action: HashMap<String, Vec<Vec<i64>>>,
}

/// Parse a module description `{"prime", "group", "dim", "action"}` where
/// `group` is a catalog name (resolved through `resolve_group`) or an inline
/// group object, and `action` maps generator element indices (as strings) to
/// matrices.  Actions of the remaining elements are derived and validated.
pub fn module_from_json(
    text: &str,
    resolve_group: &dyn Fn(&str) -> Option<Rc<FiniteGroup>>,
) -> Result<Module, Error> {
    let mf: ModuleFile = serde_json::from_str(text)?;
    let field = PrimeField::new(mf.prime)?;
    let group = match &mf.group {
        serde_json::Value::String(name) => resolve_group(name)
            .ok_or_else(|| Error::Input(format!("unknown group name {:?}", name)))?,
        obj @ serde_json::Value::Object(_) => group_from_file(serde_json::from_value(obj.clone())?)?,
        _ => return Err(Error::Input("module file: group must be a name or an inline object".into())),
    };
    let mut gen_actions = HashMap::new();
    for (key, rows) in &mf.action {
        let g: usize = key
            .parse()
            .map_err(|_| Error::Input(format!("action key {:?} is not an element index", key)))?;
        if g >= group.order {
            return Err(Error::Input(format!("action key {} out of range 0..{}", g, group.order)));
        }
        if rows.len() != mf.dim || rows.iter().any(|r| r.len() != mf.dim) {
            return Err(Error::ModuleValidation(format!(
                "action of element {} must be a {}x{} matrix",
                g, mf.dim, mf.dim
            )));
        }
        gen_actions.insert(g, Matrix::from_rows(field, rows));
    }
    for &g in &group.generators {
        if !gen_actions.contains_key(&g) {
            return Err(Error::ModuleValidation(format!(
                "module file is missing the action of generator {}",
                g
            )));
        }
    }
    let m = Module::from_generator_actions(group.clone(), field, mf.dim, &gen_actions)?;
    // if extra non-generator actions were supplied, they must match
    for (&g, mat) in &gen_actions {
        if m.action_matrix(g) != *mat {
            return Err(Error::ModuleValidation(format!(
                "supplied action of element {} conflicts with the action generated by the generators",
                g
            )));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cyclic(n: usize) -> Rc<FiniteGroup> {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(&format!("C{}", n), table, if n == 1 { vec![] } else { vec![1] }).unwrap()
    }

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn broken_associativity_is_reported_with_witness() {
        // order-3 "table" that is not associative
        let table = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]];
        let err = FiniteGroup::new("bad", table, vec![1]).unwrap_err();
        let msg = format!("{}", err);
        assert!(msg.contains("associativity"), "{}", msg);
        assert!(msg.contains("("), "{}", msg);
    }

    #[test]
    fn identity_must_be_index_zero() {
        // swap roles so 0 is not the identity
        let table = vec![vec![1, 0], vec![0, 1]];
        let err = FiniteGroup::new("bad", table, vec![1]).unwrap_err();
        assert!(format!("{}", err).contains("identity"));
    }

    #[test]
    fn symmetric_group_from_permutations() {
        let s3 = FiniteGroup::from_permutations("S3", &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert_eq!(s3.order, 6);
        assert_eq!(s3.element_order(s3.generators[0]), 3);
        assert_eq!(s3.element_order(s3.generators[1]), 2);
    }

    #[test]
    fn subgroup_coset_reps_are_smallest_first() {
        let c4 = cyclic(4);
        let h = Subgroup::generated_by(c4.clone(), &[2]).unwrap();
        assert_eq!(h.elements, vec![0, 2]);
        assert_eq!(h.coset_reps, vec![0, 1]);
        assert_eq!(h.index(), 2);
        assert_eq!(h.as_group.order, 2);
    }

    #[test]
    fn subgroup_must_be_closed() {
        let c4 = cyclic(4);
        let err = Subgroup::from_elements(c4, vec![0, 1]).unwrap_err();
        assert!(format!("{}", err).contains("not closed"));
    }

    #[test]
    fn regular_module_acts_by_permutations() {
        let c3 = cyclic(3);
        let m = Module::regular(c3.clone(), f(3));
        let a = m.action_matrix(1);
        // g e_h = e_{g+h}
        for h in 0..3 {
            let mut e = vec![0u32; 3];
            e[h] = 1;
            let out = m.apply(1, &e);
            let mut expected = vec![0u32; 3];
            expected[(1 + h) % 3] = 1;
            assert_eq!(out, expected);
        }
        assert_eq!(a.apply(&[1, 2, 0]), vec![0, 1, 2]);
    }

    #[test]
    fn generator_expansion_validates_relations() {
        let c3 = cyclic(3);
        // action [-1] over F_3 would need (-1)^3 = 1, but it is -1: invalid
        let mut bad = HashMap::new();
        bad.insert(1usize, Matrix::from_rows(f(3), &[vec![-1]]));
        let err = Module::from_generator_actions(c3.clone(), f(3), 1, &bad).unwrap_err();
        assert!(format!("{}", err).contains("multiplicative"));
        // action [1] is the trivial module
        let mut good = HashMap::new();
        good.insert(1usize, Matrix::identity(f(3), 1));
        let m = Module::from_generator_actions(c3, f(3), 1, &good).unwrap();
        assert_eq!(m.dim, 1);
    }

    #[test]
    fn hom_space_of_regular_c2_module_matches_enumeration() {
        let c2 = cyclic(2);
        let m = Module::regular(c2.clone(), f(2));
        let basis = hom_basis(&m, &m);
        // exhaustive check over all 16 candidate 2x2 matrices: the
        // equivariant ones form a 2-dimensional space (4 matrices)
        let swap = m.action_matrix(1);
        let mut count = 0;
        for bits in 0..16u32 {
            let mat = Matrix::from_rows(
                f(2),
                &[
                    vec![(bits & 1) as i64, ((bits >> 1) & 1) as i64],
                    vec![((bits >> 2) & 1) as i64, ((bits >> 3) & 1) as i64],
                ],
            );
            if mat.mul(&swap) == swap.mul(&mat) {
                count += 1;
            }
        }
        assert_eq!(count, 4);
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn tensor_with_trivial_is_identity_on_actions() {
        let c4 = cyclic(4);
        let k = Module::trivial(c4.clone(), f(2));
        let m = Module::regular(c4, f(2));
        let t = Module::tensor(&k, &m).unwrap();
        assert_eq!(t.dim, m.dim);
        for g in 0..4 {
            assert_eq!(t.action_matrix(g), m.action_matrix(g));
        }
        let t2 = Module::tensor(&m, &k).unwrap();
        for g in 0..4 {
            assert_eq!(t2.action_matrix(g), m.action_matrix(g));
        }
    }

    #[test]
    fn dual_of_regular_is_regular_on_the_nose() {
        let c4 = cyclic(4);
        let m = Module::regular(c4, f(2));
        let d = m.dual();
        for g in 0..4 {
            assert_eq!(d.action_matrix(g), m.action_matrix(g));
        }
    }

    #[test]
    fn double_dual_of_explicit_module_is_equal() {
        let c3 = cyclic(3);
        // 2-dim module over F_2: g acts by [[0,1],[1,1]] (order 3)
        let mut gen = HashMap::new();
        gen.insert(1usize, Matrix::from_rows(f(2), &[vec![0, 1], vec![1, 1]]));
        let m = Module::from_generator_actions(c3, f(2), 2, &gen).unwrap();
        let dd = m.dual().dual();
        for g in 0..3 {
            assert_eq!(dd.action_matrix(g), m.action_matrix(g));
        }
    }

    #[test]
    fn restriction_of_regular_c4_to_c2_is_free_of_rank_two() {
        let c4 = cyclic(4);
        let h = Subgroup::generated_by(c4.clone(), &[2]).unwrap();
        let m = Module::regular(c4, f(2));
        let res = restrict(&h, &m);
        assert_eq!(res.dim, 4);
        let free2 = Module::free(h.as_group.clone(), f(2), 2);
        let iso = find_isomorphism(&res, &free2);
        assert!(iso.is_some(), "Res_C2 F_2[C4] should be free of rank 2");
    }

    #[test]
    fn induction_of_trivial_is_permutation_module_on_cosets() {
        let c4 = cyclic(4);
        let h = Subgroup::generated_by(c4.clone(), &[2]).unwrap();
        let k_h = Module::trivial(h.as_group.clone(), f(2));
        let ind = induce(&h, &k_h).unwrap();
        assert_eq!(ind.dim, 2);
        // the generator g swaps the two cosets H and gH
        assert_eq!(ind.action_matrix(1), Matrix::from_rows(f(2), &[vec![0, 1], vec![1, 0]]));
        // g^2 lies in H and acts trivially
        assert_eq!(ind.action_matrix(2), Matrix::identity(f(2), 2));
    }

    #[test]
    fn induction_and_coinduction_are_isomorphic_at_finite_index() {
        let c4 = cyclic(4);
        let h = Subgroup::generated_by(c4.clone(), &[2]).unwrap();
        let reg_h = Module::regular(h.as_group.clone(), f(2));
        let ind = induce(&h, &reg_h).unwrap();
        let coind = coinduce(&h, &reg_h).unwrap();
        assert_eq!(ind.dim, coind.dim);
        assert!(find_isomorphism(&ind, &coind).is_some());
    }

    #[test]
    fn frobenius_reciprocity_dimension_identity() {
        let c4 = cyclic(4);
        let h = Subgroup::generated_by(c4.clone(), &[2]).unwrap();
        let a = Module::regular(h.as_group.clone(), f(2));
        let b = Module::regular(c4.clone(), f(2));
        let lhs = hom_basis(&induce(&h, &a).unwrap(), &b).len();
        let rhs = hom_basis(&a, &restrict(&h, &b)).len();
        assert_eq!(lhs, rhs);
        // and the coinduction-side identity
        let lhs2 = hom_basis(&restrict(&h, &b), &a).len();
        let rhs2 = hom_basis(&b, &coinduce(&h, &a).unwrap()).len();
        assert_eq!(lhs2, rhs2);
    }

    #[test]
    fn submodule_closure_and_quotient_compose_to_zero() {
        let c2 = cyclic(2);
        let m = Module::regular(c2, f(2));
        // the span of (1,1) is the augmentation ideal, already invariant
        let gens = Matrix::from_rows(f(2), &[vec![1, 1]]);
        let (sub, incl) = m.submodule_generated(&gens);
        assert_eq!(sub.dim, 1);
        let (quo, proj) = m.quotient_by(&incl.matrix.transpose());
        assert_eq!(quo.dim, 1);
        assert!(proj.compose(&incl).is_zero());
    }

    #[test]
    fn module_file_roundtrip() {
        let resolver = |name: &str| -> Option<Rc<FiniteGroup>> {
            if name == "C2" {
                Some(cyclic(2))
            } else {
                None
            }
        };
        let m = module_from_json(
            r#"{"prime": 2, "group": "C2", "dim": 2, "action": {"1": [[0,1],[1,0]]}}"#,
            &resolver,
        )
        .unwrap();
        assert_eq!(m.dim, 2);
        assert_eq!(m.action_matrix(1), Matrix::from_rows(f(2), &[vec![0, 1], vec![1, 0]]));
        // inline group object
        let m2 = module_from_json(
            r#"{"prime": 3, "group": {"name":"C2","order":2,"mult_table":[[0,1],[1,0]],"generators":[1]}, "dim": 1, "action": {"1": [[-1]]}}"#,
            &resolver,
        )
        .unwrap();
        assert_eq!(m2.action_matrix(1), Matrix::from_rows(f(3), &[vec![2]]));
        // conflicting extra action is rejected
        let err = module_from_json(
            r#"{"prime": 2, "group": "C2", "dim": 1, "action": {"0": [[0]], "1": [[1]]}}"#,
            &resolver,
        );
        assert!(err.is_err());
    }
}
