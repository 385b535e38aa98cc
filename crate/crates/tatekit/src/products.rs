//! Products on completed Ext: external products via tensor resolutions,
//! cup products on completed cohomology, Yoneda composition, and graded
//! ring tables.
//!
//! The external product and the Yoneda product are independent code paths
//! on purpose: their agreement on Ĥ*(G,k) is one of the cross-checks the
//! verification suites run, so neither is defined in terms of the other.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::error::Error;
use crate::linalg::{kronecker, ColumnSolver, Matrix};
use crate::modrep::{FiniteGroup, Module, ModuleMap};
use crate::resolution::{lift_chain_map, FreeResolution};
use crate::stable::transition_matrix;
use crate::completion::{
    canonical_k, completed_naive, ext_classes_at, naive_transition, resolution_connecting,
    CompletedExtElement, CompletedExtGroup, ExtOrdinary, Session,
};
use crate::linalg::PrimeField;
use crate::resolution::{hom_coords_to_map, map_to_hom_coords};

/// (−1)^e in the field.
pub(crate) fn parity_sign(field: PrimeField, e: i64) -> u32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        field.neg(1)
    }
}

/// The smallest even shift 2κ ≥ 0 with m + 2κ ≥ 1.
pub(crate) fn even_shift(m: i64) -> usize {
    if m >= 1 {
        0
    } else {
        let need = (1 - m) as usize;
        need + (need % 2)
    }
}

/// Rows r0..r0+len of a matrix as a standalone matrix.
fn rows_block(m: &Matrix, r0: usize, len: usize) -> Matrix {
    let mut out = Matrix::zeros(m.field, len, m.cols);
    for r in 0..len {
        for c in 0..m.cols {
            let v = m.at(r0 + r, c);
            if v != 0 {
                out.set(r, c, v);
            }
        }
    }
    out
}

/// Move a class of the naive carrier from the canonical index to index k:
/// forward through transition maps, or backward through their certified
/// inverses when k is below the canonical index.
pub(crate) fn naive_class_at(
    session: &Session,
    g: &CompletedExtGroup,
    class: &[u32],
    k: usize,
) -> Result<Vec<u32>, Error> {
    let k_star = g.naive_detail().k_star;
    let mut cur = class.to_vec();
    if k >= k_star {
        for t in k_star..k {
            cur = naive_transition(session, &g.a, &g.b, g.n, t)?.apply(&cur);
        }
    } else {
        for t in (k..k_star).rev() {
            let m = naive_transition(session, &g.a, &g.b, g.n, t)?;
            let inv = m.inverse().ok_or_else(|| {
                Error::Certificate(format!("transition at index {} is not invertible", t))
            })?;
            cur = inv.apply(&cur);
        }
    }
    Ok(cur)
}

/// Pull a class at index `from_k` back to the canonical index through
/// inverted (certified) transitions.
pub(crate) fn class_down_to_canonical(
    session: &Session,
    a: &Module,
    b: &Module,
    n: i64,
    from_k: usize,
    class: &[u32],
) -> Result<Vec<u32>, Error> {
    let k_star = canonical_k(n);
    let mut cur = class.to_vec();
    for t in (k_star..from_k).rev() {
        let m = naive_transition(session, a, b, n, t)?;
        let inv = m
            .inverse()
            .ok_or_else(|| Error::Certificate(format!("transition at index {} is not invertible", t)))?;
        cur = inv.apply(&cur);
    }
    Ok(cur)
}

/// The comparison map σ: (B⊗D)~_{kb+kd} → B̃_{kb} ⊗ D̃_{kd}, built by
/// peeling one cover sequence at a time (first down the D tower, then the
/// B tower) and lifting through the projective middles.  Each peel is a
/// Schanuel step, so σ is a stable isomorphism.
fn syzygy_tensor_comparison(
    res_bd: &FreeResolution,
    res_b: &FreeResolution,
    res_d: &FreeResolution,
    kb: usize,
    kd: usize,
) -> Result<ModuleMap, Error> {
    let field = res_bd.module.field;
    let b_mod = res_b.module.clone();
    let mut sigma = ModuleMap {
        source: res_bd.syzygy_module(0),
        target: Module::tensor(&b_mod, &res_d.syzygy_module(0))?,
        matrix: Matrix::identity(field, res_bd.module.dim),
    };
    let mut level = 0usize;
    // peel the D tower: 0 → B ⊗ D̃_{t+1} → B ⊗ D_t → B ⊗ D̃_t → 0
    for t in 0..kd {
        let middle = Module::tensor(&b_mod, &res_d.terms[t].module)?;
        let pr = kronecker(&Matrix::identity(field, b_mod.dim), &res_d.syzygy_project(t).matrix);
        let incl = kronecker(&Matrix::identity(field, b_mod.dim), &res_d.syzygy_include(t + 1).matrix);
        let next = Module::tensor(&b_mod, &res_d.syzygy_module(t + 1))?;
        sigma = peel_step(res_bd, level, &sigma, &pr, &middle, &incl, next)?;
        level += 1;
    }
    // peel the B tower: 0 → B̃_{r+1} ⊗ D̃_{kd} → B_r ⊗ D̃_{kd} → B̃_r ⊗ D̃_{kd} → 0
    let d_syz = res_d.syzygy_module(kd);
    for r in 0..kb {
        let middle = Module::tensor(&res_b.terms[r].module, &d_syz)?;
        let pr = kronecker(&res_b.syzygy_project(r).matrix, &Matrix::identity(field, d_syz.dim));
        let incl = kronecker(&res_b.syzygy_include(r + 1).matrix, &Matrix::identity(field, d_syz.dim));
        let next = Module::tensor(&res_b.syzygy_module(r + 1), &d_syz)?;
        sigma = peel_step(res_bd, level, &sigma, &pr, &middle, &incl, next)?;
        level += 1;
    }
    Ok(sigma)
}

/// One Schanuel step: given σ: R̃_level → Y and a projective cover of Y
/// (projection pr: P → Y with kernel included by incl: Y' → P), lift σ∘π
/// through pr equivariantly and restrict to the kernels, giving
/// R̃_{level+1} → Y'.
fn peel_step(
    res: &FreeResolution,
    level: usize,
    sigma: &ModuleMap,
    pr: &Matrix,
    middle: &Module,
    incl: &Matrix,
    next_target: Module,
) -> Result<ModuleMap, Error> {
    let term = &res.terms[level];
    let rhs = term.generator_columns(&sigma.matrix.mul(&res.syzygy_project(level).matrix));
    let images = ColumnSolver::new(pr)
        .solve_matrix(&rhs)
        .ok_or_else(|| Error::Exactness("comparison lift: cover projection not surjective".into()))?;
    let h = term.generator_image_map(middle, &images);
    let restricted = h.matrix.mul(&res.syzygy_include(level + 1).matrix);
    let coords = ColumnSolver::new(incl)
        .solve_matrix(&restricted)
        .ok_or_else(|| Error::Exactness("comparison lift misses the kernel".into()))?;
    Ok(ModuleMap {
        source: res.syzygy_module(level + 1),
        target: next_target,
        matrix: coords,
    })
}

pub struct ExternalProduct {
    pub group: CompletedExtGroup,
    pub element: CompletedExtElement,
}

/// External product Êxt^m(A,B) × Êxt^n(C,D) → Êxt^{m+n}(A⊗C, B⊗D).
///
/// Both factors are pushed to even shift indices 2κ, 2λ, the signed
/// tensor-cocycle is formed on the tensor-product resolution of A⊗C,
/// transported to the minimal resolution by a lifted comparison, moved to
/// the coefficient syzygy of B⊗D through the peeled comparison map, walked
/// down the connecting tower, and finally converted to the canonical naive
/// carrier.
pub fn external(
    session: &Session,
    gx: &CompletedExtGroup,
    x: &[u32],
    gy: &CompletedExtGroup,
    y: &[u32],
) -> Result<ExternalProduct, Error> {
    let m = gx.n;
    let n = gy.n;
    assert!(gx.a.group == gy.a.group && gx.a.field == gy.a.field, "product over mismatched algebras");
    let kb = even_shift(m);
    let kd = even_shift(n);
    let j1 = (m + kb as i64) as usize;
    let j2 = (n + kd as i64) as usize;
    let s = j1 + j2;
    // representatives at the shifted indices
    let x_at = naive_class_at(session, gx, x, kb)?;
    let y_at = naive_class_at(session, gy, y, kd)?;
    let rca = session.resolution(&gx.a, j1 + 1)?;
    let rcc = session.resolution(&gy.a, j2 + 1)?;
    let rcb = session.resolution(&gx.b, kb + 1)?;
    let rcd = session.resolution(&gy.b, kd + 1)?;
    let (phi, psi, w_mod) = {
        let ra = rca.borrow();
        let rc = rcc.borrow();
        let rb = rcb.borrow();
        let rd = rcd.borrow();
        let space_x = session.stable_space(&ra.syzygy_module(j1), &rb.syzygy_module(kb))?;
        let space_y = session.stable_space(&rc.syzygy_module(j2), &rd.syzygy_module(kd))?;
        let f = space_x.rep_of(&x_at);
        let g = space_y.rep_of(&y_at);
        (
            f.matrix.mul(&ra.syzygy_project(j1).matrix),
            g.matrix.mul(&rc.syzygy_project(j2).matrix),
            Module::tensor(&rb.syzygy_module(kb), &rd.syzygy_module(kd))?,
        )
    };
    let v_mod = Module::tensor(&gx.a, &gy.a)?;
    let bd_mod = Module::tensor(&gx.b, &gy.b)?;
    let td = session.tensor_data(&gx.a, &gy.a, s + 1)?;
    let rcv = session.resolution(&v_mod, s + 2)?;
    let rcbd = session.resolution(&bd_mod, kb + kd + 1)?;
    let sign = parity_sign(session.field, (j1 * j2) as i64);
    let class_k0;
    let k0 = (1 - (m + n)).max(0) as usize;
    let j0 = (m + n + k0 as i64) as usize;
    {
        let rb = rcb.borrow();
        let rd = rcd.borrow();
        let rv = rcv.borrow();
        let rbd = rcbd.borrow();
        // the signed product cochain on the tensor complex, supported on the
        // (j1, j2) summand of level s
        let level = &td.complex.levels[s];
        let block = kronecker(&phi, &psi).scale(sign);
        let d_rows = rows_block(&td.complex.diffs[s], level.offsets[j1], level.dims[j1]);
        if !block.mul(&d_rows).is_zero() {
            return Err(Error::Exactness("product cochain is not a cocycle".into()));
        }
        // transport to the minimal resolution of A⊗C through the lifted
        // comparison
        let lift_rows = rows_block(&td.lifts[s].matrix, level.offsets[j1], level.dims[j1]);
        let u_min = block.mul(&lift_rows);
        let cls_w = ext_classes_at(&rv, &w_mod, s);
        let u_map = ModuleMap { source: rv.terms[s].module.clone(), target: w_mod.clone(), matrix: u_min };
        let class_u = cls_w
            .class_of(&map_to_hom_coords(&rv.terms[s], &u_map))
            .ok_or_else(|| Error::Exactness("transported product cochain is not a cocycle".into()))?;
        // move coefficients from B̃_{kb} ⊗ D̃_{kd} to the matching syzygy of
        // B⊗D (no move needed when both shifts are zero: the modules agree)
        let (mut class, mut upper) = if kb + kd == 0 {
            (class_u, cls_w)
        } else {
            let sigma = syzygy_tensor_comparison(&rbd, &rb, &rd, kb, kd)?;
            let syz_bd = rbd.syzygy_module(kb + kd);
            let cls_r = ext_classes_at(&rv, &syz_bd, s);
            let post = kronecker(&Matrix::identity(session.field, rv.terms[s].rank), &sigma.matrix);
            let mut induced = Matrix::zeros(session.field, cls_w.dim, cls_r.dim);
            for c in 0..cls_r.dim {
                let mut e = vec![0u32; cls_r.dim];
                e[c] = 1;
                let moved = post.apply(&cls_r.rep_of(&e));
                let cls = cls_w
                    .class_of(&moved)
                    .ok_or_else(|| Error::Exactness("comparison image is not a cocycle".into()))?;
                induced.set_col(c, &cls);
            }
            let induced_inv = induced.inverse().ok_or_else(|| {
                Error::Certificate("coefficient comparison is not an isomorphism on Ext".into())
            })?;
            (induced_inv.apply(&class_u), cls_r)
        };
        // walk down the connecting tower of the B⊗D coefficient syzygies
        for k in (k0..kb + kd).rev() {
            let j = (m + n + k as i64) as usize;
            let lower = ext_classes_at(&rv, &rbd.syzygy_module(k), j);
            let delta = resolution_connecting(&rv, &rbd, j, k, &lower, &upper)?;
            let delta_inv = delta
                .inverse()
                .ok_or_else(|| Error::Certificate(format!("connecting map at index {} is not invertible", k)))?;
            class = delta_inv.apply(&class);
            upper = lower;
        }
        // convert the resolution-carrier class to the canonical naive one
        let coeff = rbd.syzygy_module(k0);
        let rep = upper.rep_of(&class);
        let u0 = hom_coords_to_map(&rv.terms[j0], &coeff, &rep);
        let solver = ColumnSolver::new(&rv.syzygy_project(j0).matrix.transpose());
        let ubar_t = solver
            .solve_matrix(&u0.matrix.transpose())
            .ok_or_else(|| Error::Exactness("product cocycle does not factor through the syzygy".into()))?;
        let ubar = ModuleMap {
            source: rv.syzygy_module(j0),
            target: coeff.clone(),
            matrix: ubar_t.transpose(),
        };
        let s0 = session.stable_space(&rv.syzygy_module(j0), &coeff)?;
        let class0 = s0.class_of(&ubar);
        class_k0 = if k0 == 0 {
            let s1 = session.stable_space(&rv.syzygy_module(j0 + 1), &rbd.syzygy_module(1))?;
            let t0 = transition_matrix(&rv, &rbd, j0, 0, &s0, &s1)?;
            t0.apply(&class0)
        } else {
            class0
        };
    }
    let group = completed_naive(session, &v_mod, &bd_mod, m + n)?;
    if group.dim != class_k0.len() {
        return Err(Error::Certificate("product landed in a carrier of unexpected dimension".into()));
    }
    Ok(ExternalProduct {
        group,
        element: CompletedExtElement { n: m + n, class: class_k0 },
    })
}

/// Cup product on completed cohomology: Ĥ^m(G,M) × Ĥ^n(G,N) → Ĥ^{m+n}(G, M⊗N).
/// The first variable of both factors must be the trivial module; the
/// identification k ⊗ k ≅ k is content-level (the tensor square of the
/// trivial module *is* the trivial module to every cache).
pub fn cup(
    session: &Session,
    gx: &CompletedExtGroup,
    x: &[u32],
    gy: &CompletedExtGroup,
    y: &[u32],
) -> Result<ExternalProduct, Error> {
    let k = Module::trivial(gx.a.group.clone(), session.field);
    assert!(
        gx.a.content_key() == k.content_key() && gy.a.content_key() == k.content_key(),
        "cup product needs trivial first variables"
    );
    external(session, gx, x, gy, y)
}

/// Yoneda (composition) product Êxt^n(H,J) × Êxt^m(F,H) → Êxt^{m+n}(F,J)
/// at an explicit common shift index k.
pub fn yoneda_at(
    session: &Session,
    gx: &CompletedExtGroup,
    x: &[u32],
    gy: &CompletedExtGroup,
    y: &[u32],
    k: usize,
) -> Result<ExternalProduct, Error> {
    let n = gx.n;
    let m = gy.n;
    assert!(
        gy.b.content_key() == gx.a.content_key(),
        "yoneda: inner target must equal outer source"
    );
    let total = m + n;
    assert!(k >= canonical_k(n) && k >= canonical_k(total), "common index too small");
    assert!(n + k as i64 >= canonical_k(m) as i64, "common index too small for the inner factor");
    let x_at = naive_class_at(session, gx, x, k)?;
    let y_at = naive_class_at(session, gy, y, (n + k as i64) as usize)?;
    let d_total = (total + k as i64) as usize;
    let rcf = session.resolution(&gy.a, d_total + 2)?;
    let rch = session.resolution(&gy.b, (n + k as i64) as usize + 2)?;
    let rcj = session.resolution(&gx.b, k + 2)?;
    let (sf, sh, sj) = {
        let rf = rcf.borrow();
        let rh = rch.borrow();
        let rj = rcj.borrow();
        (
            rf.syzygy_module(d_total),
            rh.syzygy_module((n + k as i64) as usize),
            rj.syzygy_module(k),
        )
    };
    let space_x = session.stable_space(&sh, &sj)?;
    let space_y = session.stable_space(&sf, &sh)?;
    let space_out = session.stable_space(&sf, &sj)?;
    let xi = space_x.rep_of(&x_at);
    let eta = space_y.rep_of(&y_at);
    let composed = ModuleMap { source: sf, target: sj, matrix: xi.matrix.mul(&eta.matrix) };
    let at_k = space_out.class_of(&composed);
    let class = class_down_to_canonical(session, &gy.a, &gx.b, total, k, &at_k)?;
    let group = completed_naive(session, &gy.a, &gx.b, total)?;
    Ok(ExternalProduct {
        group,
        element: CompletedExtElement { n: total, class },
    })
}

/// Yoneda product at the smallest legal common index.
pub fn yoneda(
    session: &Session,
    gx: &CompletedExtGroup,
    x: &[u32],
    gy: &CompletedExtGroup,
    y: &[u32],
) -> Result<ExternalProduct, Error> {
    let n = gx.n;
    let m = gy.n;
    let mut k = canonical_k(n).max(canonical_k(m + n));
    let inner = canonical_k(m) as i64 - n;
    if inner > k as i64 {
        k = inner as usize;
    }
    yoneda_at(session, gx, x, gy, y, k)
}

/// The unit of the completed cohomology ring: the class of the identity in
/// the canonical degree-0 carrier.
pub fn unit_class(session: &Session, group: &Rc<FiniteGroup>) -> Result<ExternalProduct, Error> {
    let k = Module::trivial(group.clone(), session.field);
    let g = completed_naive(session, &k, &k, 0)?;
    let class = {
        let detail = g.naive_detail();
        let id = ModuleMap::identity(&detail.space.a);
        detail.space.class_of(&id)
    };
    Ok(ExternalProduct {
        element: CompletedExtElement { n: 0, class },
        group: g,
    })
}

/// Ordinary cup product Ext^m(k,M) × Ext^n(k,N) → Ext^{m+n}(k, M⊗N) via a
/// diagonal approximation, with the same sign convention as the completed
/// external product.
pub fn ordinary_cup(
    session: &Session,
    ex: &ExtOrdinary,
    x: &[u32],
    ey: &ExtOrdinary,
    y: &[u32],
) -> Result<(ExtOrdinary, Vec<u32>), Error> {
    assert!(ex.j >= 0 && ey.j >= 0, "ordinary cup needs non-negative degrees");
    let m = ex.j as usize;
    let n = ey.j as usize;
    let k_mod = Module::trivial(ex.a.group.clone(), session.field);
    assert!(
        ex.a.content_key() == k_mod.content_key() && ey.a.content_key() == k_mod.content_key(),
        "ordinary cup needs trivial first variables"
    );
    let s = m + n;
    let td = session.tensor_data(&k_mod, &k_mod, s + 1)?;
    let rck = session.resolution(&k_mod, s + 2)?;
    let mn_mod = Module::tensor(&ex.b, &ey.b)?;
    let (cochain, classes) = {
        let rk = rck.borrow();
        // the (m, n) component of the diagonal approximation
        let level = &td.complex.levels[s];
        let slice = rows_block(&td.lifts[s].matrix, level.offsets[m], level.dims[m]);
        let phi = hom_coords_to_map(&rk.terms[m], &ex.b, &ex.classes.rep_of(x));
        let psi = hom_coords_to_map(&rk.terms[n], &ey.b, &ey.classes.rep_of(y));
        let sign = parity_sign(session.field, (m * n) as i64);
        let u = kronecker(&phi.matrix, &psi.matrix).scale(sign).mul(&slice);
        let u_map = ModuleMap { source: rk.terms[s].module.clone(), target: mn_mod.clone(), matrix: u };
        let classes = ext_classes_at(&rk, &mn_mod, s);
        (map_to_hom_coords(&rk.terms[s], &u_map), classes)
    };
    let class = classes
        .class_of(&cochain)
        .ok_or_else(|| Error::Exactness("cup cochain is not a cocycle".into()))?;
    let term_rank = { rck.borrow().terms[s].rank };
    Ok((
        ExtOrdinary {
            a: k_mod,
            b: mn_mod,
            j: s as i64,
            dim: classes.dim,
            term_rank,
            classes,
        },
        class,
    ))
}

/// Graded commutativity report: x ∨ y and y ∨ x correspond under the swap
/// isomorphisms with sign (−1)^{mn}.
pub struct SwapReport {
    pub m: i64,
    pub n: i64,
    pub holds: bool,
}

/// The flip A⊗C → C⊗A as an explicit module map.
pub fn swap_map(a: &Module, c: &Module) -> Result<ModuleMap, Error> {
    let src = Module::tensor(a, c)?;
    let dst = Module::tensor(c, a)?;
    let mut m = Matrix::zeros(a.field, dst.dim, src.dim);
    for i in 0..a.dim {
        for j in 0..c.dim {
            m.set(j * a.dim + i, i * c.dim + j, 1);
        }
    }
    Ok(ModuleMap { source: src, target: dst, matrix: m })
}

/// The map on syzygies induced by f: lift f through the minimal resolutions
/// and restrict level j−1 to the j-th kernels.
pub(crate) fn induced_syzygy_map(
    res_src: &FreeResolution,
    res_tgt: &FreeResolution,
    f: &ModuleMap,
    j: usize,
) -> Result<ModuleMap, Error> {
    let chain = lift_chain_map(f, res_src, res_tgt, j)?;
    let cols = chain[j - 1].matrix.mul(&res_src.syzygy_include(j).matrix);
    let coords = res_tgt
        .syzygy_coords(j, &cols)
        .ok_or_else(|| Error::Exactness("induced map misses the syzygy".into()))?;
    Ok(ModuleMap {
        source: res_src.syzygy_module(j),
        target: res_tgt.syzygy_module(j),
        matrix: coords,
    })
}

/// Check graded commutativity of the external product on one pair of
/// classes.
pub fn swap_check(
    session: &Session,
    gx: &CompletedExtGroup,
    x: &[u32],
    gy: &CompletedExtGroup,
    y: &[u32],
) -> Result<SwapReport, Error> {
    let m = gx.n;
    let n = gy.n;
    let xy = external(session, gx, x, gy, y)?;
    let yx = external(session, gy, y, gx, x)?;
    let total = m + n;
    let k_star = canonical_k(total);
    let j = (total + k_star as i64) as usize;
    // transport xy into the carrier of yx along the two swap isomorphisms
    let swap_front = swap_map(&gy.a, &gx.a)?; // C⊗A → A⊗C
    let swap_back = swap_map(&gx.b, &gy.b)?; // B⊗D → D⊗B
    let rc_ac = session.resolution(&xy.group.a, j + 1)?;
    let rc_ca = session.resolution(&yx.group.a, j + 1)?;
    let rc_bd = session.resolution(&xy.group.b, k_star + 1)?;
    let rc_db = session.resolution(&yx.group.b, k_star + 1)?;
    let (front, back, src_a, dst_a, src_b, dst_b) = {
        let r_ac = rc_ac.borrow();
        let r_ca = rc_ca.borrow();
        let r_bd = rc_bd.borrow();
        let r_db = rc_db.borrow();
        (
            induced_syzygy_map(&r_ca, &r_ac, &swap_front, j)?,
            induced_syzygy_map(&r_bd, &r_db, &swap_back, k_star)?,
            r_ac.syzygy_module(j),
            r_ca.syzygy_module(j),
            r_bd.syzygy_module(k_star),
            r_db.syzygy_module(k_star),
        )
    };
    let space_xy = session.stable_space(&src_a, &src_b)?;
    let space_yx = session.stable_space(&dst_a, &dst_b)?;
    let rep = space_xy.rep_of(&xy.element.class);
    let moved = ModuleMap {
        source: dst_a,
        target: dst_b,
        matrix: back.matrix.mul(&rep.matrix).mul(&front.matrix),
    };
    let transported = space_yx.class_of(&moved);
    let sign = parity_sign(session.field, m * n);
    let expected: Vec<u32> = yx
        .element
        .class
        .iter()
        .map(|&c| session.field.mul(c, sign))
        .collect();
    Ok(SwapReport { m, n, holds: transported == expected })
}

// ---------------------------------------------------------------------------
// Ring tables
// ---------------------------------------------------------------------------

pub struct ProductEntry {
    pub a: String,
    pub b: String,
    pub result: BTreeMap<String, u32>,
}

pub struct GradedRingTable {
    pub group_name: String,
    pub prime: u32,
    pub lo: i64,
    pub hi: i64,
    pub dims: BTreeMap<i64, usize>,
    pub unit: Vec<String>,
    pub products: Vec<ProductEntry>,
}

fn label(n: i64, i: usize) -> String {
    format!("u{}_{}", n, i)
}

fn coords_to_labels(n: i64, coords: &[u32]) -> BTreeMap<String, u32> {
    coords
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (label(n, i), c))
        .collect()
}

/// The completed cohomology ring of G with trivial coefficients on a degree
/// window: per-degree dimensions and all pairwise cup products with total
/// degree in range.  Unit and associativity laws are checked before the
/// table is returned.
pub fn ring_table(
    session: &Session,
    group: &Rc<FiniteGroup>,
    lo: i64,
    hi: i64,
    span_bound: usize,
) -> Result<GradedRingTable, Error> {
    if lo > hi {
        return Err(Error::Input(format!("empty degree range {}..{}", lo, hi)));
    }
    if (hi - lo) as usize > span_bound {
        return Err(Error::Input(format!(
            "degree span {} exceeds the bound {}",
            hi - lo,
            span_bound
        )));
    }
    let k = Module::trivial(group.clone(), session.field);
    let mut dims = BTreeMap::new();
    let mut groups: BTreeMap<i64, CompletedExtGroup> = BTreeMap::new();
    for d in lo..=hi {
        let g = completed_naive(session, &k, &k, d)?;
        dims.insert(d, g.dim);
        groups.insert(d, g);
    }
    let unit = unit_class(session, group)?;
    let unit_labels: Vec<String> = unit
        .element
        .class
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, _)| label(0, i))
        .collect();
    // cells
    let mut products = Vec::new();
    let mut results: BTreeMap<(i64, usize, i64, usize), Vec<u32>> = BTreeMap::new();
    for m in lo..=hi {
        for n in lo..=hi {
            let total = m + n;
            if total < lo || total > hi {
                continue;
            }
            let gm = &groups[&m];
            let gn = &groups[&n];
            for i in 0..gm.dim {
                let mut x = vec![0u32; gm.dim];
                x[i] = 1;
                for jj in 0..gn.dim {
                    let mut y = vec![0u32; gn.dim];
                    y[jj] = 1;
                    let prod = cup(session, gm, &x, gn, &y)?;
                    if prod.element.class.len() != groups[&total].dim {
                        return Err(Error::Certificate(
                            "ring table product landed in a mismatched carrier".into(),
                        ));
                    }
                    results.insert((m, i, n, jj), prod.element.class.clone());
                    products.push(ProductEntry {
                        a: label(m, i),
                        b: label(n, jj),
                        result: coords_to_labels(total, &prod.element.class),
                    });
                }
            }
        }
    }
    // unit laws on every basis class in range (degree 0 must be in range for
    // the unit to be a table row, but the law itself is checked regardless)
    for d in lo..=hi {
        let g = &groups[&d];
        for i in 0..g.dim {
            let mut x = vec![0u32; g.dim];
            x[i] = 1;
            let left = cup(session, &unit.group, &unit.element.class, g, &x)?;
            let right = cup(session, g, &x, &unit.group, &unit.element.class)?;
            if left.element.class != x || right.element.class != x {
                return Err(Error::Certificate(format!(
                    "unit law fails on degree {} basis {}",
                    d, i
                )));
            }
        }
    }
    // associativity on all in-range triples
    for m in lo..=hi {
        for n in lo..=hi {
            for l in lo..=hi {
                let (mn, nl, total) = (m + n, n + l, m + n + l);
                if mn < lo || mn > hi || nl < lo || nl > hi || total < lo || total > hi {
                    continue;
                }
                for i in 0..groups[&m].dim {
                    for jj in 0..groups[&n].dim {
                        for u in 0..groups[&l].dim {
                            let xy = &results[&(m, i, n, jj)];
                            let yz = &results[&(n, jj, l, u)];
                            let mut zc = vec![0u32; groups[&l].dim];
                            zc[u] = 1;
                            let mut xc = vec![0u32; groups[&m].dim];
                            xc[i] = 1;
                            let lhs = cup(session, &groups[&mn], xy, &groups[&l], &zc)?;
                            let rhs = cup(session, &groups[&m], &xc, &groups[&nl], yz)?;
                            if lhs.element.class != rhs.element.class {
                                return Err(Error::Certificate(format!(
                                    "associativity fails at degrees ({}, {}, {})",
                                    m, n, l
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(GradedRingTable {
        group_name: group.name.clone(),
        prime: session.field.order(),
        lo,
        hi,
        dims,
        unit: unit_labels,
        products,
    })
}

pub fn ring_table_json(t: &GradedRingTable) -> serde_json::Value {
    let dims: serde_json::Map<String, serde_json::Value> = t
        .dims
        .iter()
        .map(|(n, d)| (n.to_string(), serde_json::json!(d)))
        .collect();
    let products: Vec<serde_json::Value> = t
        .products
        .iter()
        .map(|p| {
            let result: serde_json::Map<String, serde_json::Value> = p
                .result
                .iter()
                .map(|(lbl, c)| (lbl.clone(), serde_json::json!(c)))
                .collect();
            serde_json::json!({ "a": p.a, "b": p.b, "result": result })
        })
        .collect();
    serde_json::json!({
        "group": t.group_name,
        "prime": t.prime,
        "degrees": [t.lo, t.hi],
        "dims": dims,
        "unit": t.unit,
        "products": products,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::completion::{completed_naive, ext_ordinary};

    fn setup(name: &str, p: u32) -> (Session, Rc<FiniteGroup>, Module) {
        let session = Session::new(p).unwrap();
        let g = catalog::group(name).unwrap();
        let k = Module::trivial(g.clone(), session.field);
        (session, g, k)
    }

    #[test]
    fn even_shift_values() {
        assert_eq!(even_shift(3), 0);
        assert_eq!(even_shift(1), 0);
        assert_eq!(even_shift(0), 2);
        assert_eq!(even_shift(-1), 2);
        assert_eq!(even_shift(-2), 4);
        assert_eq!(even_shift(-3), 4);
    }

    #[test]
    fn tensor_square_of_trivial_is_trivial() {
        let (_, _, k) = setup("C2", 2);
        let kk = Module::tensor(&k, &k).unwrap();
        assert_eq!(kk.content_key(), k.content_key());
    }

    #[test]
    fn cup_on_c2_is_laurent() {
        let (session, _, k) = setup("C2", 2);
        let mut groups = std::collections::BTreeMap::new();
        for d in -2..=2i64 {
            let g = completed_naive(&session, &k, &k, d).unwrap();
            assert_eq!(g.dim, 1, "degree {}", d);
            groups.insert(d, g);
        }
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                let prod = cup(&session, &groups[&a], &[1], &groups[&b], &[1]).unwrap();
                assert_eq!(prod.element.n, a + b);
                assert_eq!(prod.element.class, vec![1], "{} * {}", a, b);
            }
        }
    }

    #[test]
    fn unit_laws_on_c2() {
        let (session, g, k) = setup("C2", 2);
        let unit = unit_class(&session, &g).unwrap();
        assert_eq!(unit.element.class, vec![1]);
        for d in -3..=3i64 {
            let grp = completed_naive(&session, &k, &k, d).unwrap();
            let left = cup(&session, &unit.group, &unit.element.class, &grp, &[1]).unwrap();
            let right = cup(&session, &grp, &[1], &unit.group, &unit.element.class).unwrap();
            assert_eq!(left.element.class, vec![1], "1 * x at degree {}", d);
            assert_eq!(right.element.class, vec![1], "x * 1 at degree {}", d);
        }
    }

    #[test]
    fn cup_on_c3_respects_graded_signs() {
        let (session, _, k) = setup("C3", 3);
        let g = |d: i64| completed_naive(&session, &k, &k, d).unwrap();
        let g1 = g(1);
        let gm1 = g(-1);
        let g2 = g(2);
        let gm2 = g(-2);
        assert!(g1.dim == 1 && gm1.dim == 1 && g2.dim == 1 && gm2.dim == 1);
        // odd-degree squares vanish at odd primes
        assert_eq!(cup(&session, &g1, &[1], &g1, &[1]).unwrap().element.class, vec![0]);
        assert_eq!(cup(&session, &gm1, &[1], &gm1, &[1]).unwrap().element.class, vec![0]);
        // even-degree classes are invertible in the Laurent direction
        assert_ne!(cup(&session, &g2, &[1], &gm2, &[1]).unwrap().element.class, vec![0]);
        assert_ne!(cup(&session, &g2, &[1], &g2, &[1]).unwrap().element.class, vec![0]);
        assert_ne!(cup(&session, &g1, &[1], &gm2, &[1]).unwrap().element.class, vec![0]);
        // commutativity reports
        assert!(swap_check(&session, &g1, &[1], &gm2, &[1]).unwrap().holds);
        assert!(swap_check(&session, &g1, &[1], &g1, &[1]).unwrap().holds);
        assert!(swap_check(&session, &g2, &[1], &g2, &[1]).unwrap().holds);
    }

    #[test]
    fn cup_on_v4_polynomial_part() {
        let (session, _, k) = setup("V4", 2);
        let g1 = completed_naive(&session, &k, &k, 1).unwrap();
        let g2 = completed_naive(&session, &k, &k, 2).unwrap();
        assert_eq!(g1.dim, 2);
        assert_eq!(g2.dim, 3);
        // squares of the two degree-one generators and their product are
        // distinct nonzero classes in degree two
        let e0 = cup(&session, &g1, &[1, 0], &g1, &[1, 0]).unwrap().element.class;
        let e1 = cup(&session, &g1, &[0, 1], &g1, &[0, 1]).unwrap().element.class;
        let mixed = cup(&session, &g1, &[1, 0], &g1, &[0, 1]).unwrap().element.class;
        assert_ne!(e0, vec![0, 0, 0]);
        assert_ne!(e1, vec![0, 0, 0]);
        assert_ne!(mixed, vec![0, 0, 0]);
        assert!(e0 != e1 && e0 != mixed && e1 != mixed);
        assert!(swap_check(&session, &g1, &[1, 0], &g1, &[0, 1]).unwrap().holds);
    }

    #[test]
    fn yoneda_composition_on_c2() {
        let (session, _, k) = setup("C2", 2);
        let g1 = completed_naive(&session, &k, &k, 1).unwrap();
        let square = yoneda(&session, &g1, &[1], &g1, &[1]).unwrap();
        assert_eq!(square.element.n, 2);
        assert_eq!(square.element.class, vec![1]);
        // independence of the common shift index
        let a = yoneda_at(&session, &g1, &[1], &g1, &[1], 2).unwrap();
        let b = yoneda_at(&session, &g1, &[1], &g1, &[1], 4).unwrap();
        assert_eq!(a.element.class, b.element.class);
        // zero composes to zero
        let z = yoneda(&session, &g1, &[0], &g1, &[1]).unwrap();
        assert_eq!(z.element.class, vec![0]);
    }

    #[test]
    fn yoneda_unit_acts_as_identity() {
        let (session, g, k) = setup("C2", 2);
        let unit = unit_class(&session, &g).unwrap();
        for d in [-2i64, 1, 3] {
            let grp = completed_naive(&session, &k, &k, d).unwrap();
            let out = yoneda(&session, &unit.group, &unit.element.class, &grp, &[1]).unwrap();
            assert_eq!(out.element.class, vec![1], "1 ∘ y at degree {}", d);
            let out2 = yoneda(&session, &grp, &[1], &unit.group, &unit.element.class).unwrap();
            assert_eq!(out2.element.class, vec![1], "y ∘ 1 at degree {}", d);
        }
    }

    #[test]
    fn yoneda_agrees_with_cup_on_c2() {
        let (session, _, k) = setup("C2", 2);
        for (m, n) in [(1i64, 1i64), (-1, -1), (2, -1)] {
            let gm = completed_naive(&session, &k, &k, m).unwrap();
            let gn = completed_naive(&session, &k, &k, n).unwrap();
            let via_cup = cup(&session, &gm, &[1], &gn, &[1]).unwrap();
            let via_yoneda = yoneda(&session, &gm, &[1], &gn, &[1]).unwrap();
            assert_eq!(via_cup.element.class, via_yoneda.element.class, "({}, {})", m, n);
        }
    }

    #[test]
    fn ordinary_cup_on_c2() {
        let (session, _, k) = setup("C2", 2);
        let e1 = ext_ordinary(&session, &k, &k, 1).unwrap();
        assert_eq!(e1.dim, 1);
        let (e2, class) = ordinary_cup(&session, &e1, &[1], &e1, &[1]).unwrap();
        assert_eq!(e2.j, 2);
        assert_eq!(e2.dim, 1);
        assert_eq!(class, vec![1]);
    }

    #[test]
    fn ring_table_on_c2_window() {
        let (session, g, _) = setup("C2", 2);
        let t = ring_table(&session, &g, -2, 2, 16).unwrap();
        assert_eq!(t.unit, vec!["u0_0".to_string()]);
        for d in -2..=2i64 {
            assert_eq!(t.dims[&d], 1);
        }
        // 5x5 degree pairs, those with total inside the window
        assert_eq!(t.products.len(), 19);
        for p in &t.products {
            assert_eq!(p.result.len(), 1, "{} * {}", p.a, p.b);
            assert!(p.result.values().all(|&c| c == 1));
        }
    }

    #[test]
    fn ring_table_on_v4_counts_dimensions() {
        let (session, g, _) = setup("V4", 2);
        let t = ring_table(&session, &g, 0, 3, 16).unwrap();
        assert_eq!(t.dims[&0], 1);
        assert_eq!(t.dims[&1], 2);
        assert_eq!(t.dims[&2], 3);
        assert_eq!(t.dims[&3], 4);
    }

    #[test]
    fn ring_table_semisimple_is_zero() {
        // 2 does not divide |C3|: the algebra is semisimple and every
        // completed group vanishes
        let (session, g, _) = setup("C3", 2);
        let t = ring_table(&session, &g, -2, 2, 16).unwrap();
        for d in -2..=2i64 {
            assert_eq!(t.dims[&d], 0);
        }
        assert!(t.products.is_empty());
        assert!(t.unit.is_empty());
    }

    #[test]
    fn ring_table_rejects_oversized_window() {
        let (session, g, _) = setup("C2", 2);
        match ring_table(&session, &g, -8, 8, 4) {
            Err(Error::Input(_)) => {}
            other => panic!("expected an input error, got {:?}", other.map(|t| t.dims)),
        }
    }

    #[test]
    fn ring_table_json_fields() {
        let (session, g, _) = setup("C2", 2);
        let t = ring_table(&session, &g, 0, 1, 16).unwrap();
        let v = ring_table_json(&t);
        assert_eq!(v["group"], "C2");
        assert_eq!(v["prime"], 2);
        assert_eq!(v["degrees"], serde_json::json!([0, 1]));
        assert_eq!(v["dims"]["0"], 1);
        assert_eq!(v["dims"]["1"], 1);
        assert_eq!(v["unit"], serde_json::json!(["u0_0"]));
        let prods = v["products"].as_array().unwrap();
        assert!(!prods.is_empty());
        for p in prods {
            assert!(p["a"].is_string() && p["b"].is_string() && p["result"].is_object());
        }
    }
}
