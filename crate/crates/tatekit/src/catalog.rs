//! Built-in groups and standard modules.
//!
//! Names: C2, C3, C4, C5, C6, C8, V4, D4, Q8, S3, A4.  Element 0 is the
//! identity everywhere; generator indices are stable across runs, so seeds
//! and output files are reproducible.

use std::rc::Rc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::linalg::{Matrix, PrimeField};
use crate::modrep::{FiniteGroup, Module, Subgroup};

pub const GROUP_NAMES: [&str; 11] = ["C2", "C3", "C4", "C5", "C6", "C8", "V4", "D4", "Q8", "S3", "A4"];

fn cyclic(n: usize, name: &str) -> Rc<FiniteGroup> {
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::new(name, table, if n == 1 { vec![] } else { vec![1] }).expect("cyclic table is valid")
}

fn klein_four() -> Rc<FiniteGroup> {
    // elements (x,y) in C2 x C2 at index 2x + y
    let idx = |x: usize, y: usize| 2 * x + y;
    let mut table = vec![vec![0usize; 4]; 4];
    for x1 in 0..2 {
        for y1 in 0..2 {
            for x2 in 0..2 {
                for y2 in 0..2 {
                    table[idx(x1, y1)][idx(x2, y2)] = idx((x1 + x2) % 2, (y1 + y2) % 2);
                }
            }
        }
    }
    FiniteGroup::new("V4", table, vec![1, 2]).expect("V4 table is valid")
}

fn quaternion() -> Rc<FiniteGroup> {
    // 0:1, 1:i, 2:j, 3:k, 4:-1, 5:-i, 6:-j, 7:-k
    // base x base -> (sign, base) with 0=1,1=i,2=j,3=k
    let base_mul = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, x) => (0, x),
            (x, 0) => (0, x),
            (1, 1) | (2, 2) | (3, 3) => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    let mut table = vec![vec![0usize; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (sa, ba) = (a / 4, a % 4);
            let (sb, bb) = (b / 4, b % 4);
            let (sm, bm) = base_mul(ba, bb);
            table[a][b] = ((sa + sb + sm) % 2) * 4 + bm;
        }
    }
    FiniteGroup::new("Q8", table, vec![1, 2]).expect("Q8 table is valid")
}

/// Look up a catalog group by name.
pub fn group(name: &str) -> Option<Rc<FiniteGroup>> {
    match name {
        "C2" => Some(cyclic(2, "C2")),
        "C3" => Some(cyclic(3, "C3")),
        "C4" => Some(cyclic(4, "C4")),
        "C5" => Some(cyclic(5, "C5")),
        "C6" => Some(cyclic(6, "C6")),
        "C8" => Some(cyclic(8, "C8")),
        "V4" => Some(klein_four()),
        "D4" => FiniteGroup::from_permutations("D4", &[vec![1, 2, 3, 0], vec![1, 0, 3, 2]]).ok(),
        "Q8" => Some(quaternion()),
        "S3" => FiniteGroup::from_permutations("S3", &[vec![1, 2, 0], vec![1, 0, 2]]).ok(),
        "A4" => FiniteGroup::from_permutations("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).ok(),
        _ => None,
    }
}

/// Primes dividing the group order — the modular (non-semisimple) cases.
pub fn modular_primes(g: &FiniteGroup) -> Vec<u32> {
    let mut out = Vec::new();
    let mut n = g.order;
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23] {
        if n as u32 % p == 0 {
            out.push(p);
            while n as u32 % p == 0 {
                n /= p as usize;
            }
        }
    }
    out
}

/// A random module: the submodule of F_pG^2 generated by two seeded random
/// vectors (closed under the action by construction).  Falls back to the
/// trivial module in the measure-zero case of an empty span.
pub fn random_two_generator_module(group: Rc<FiniteGroup>, field: PrimeField, seed: u64) -> Module {
    let ambient = Module::free(group.clone(), field, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.order();
    let rows: Vec<Vec<i64>> = (0..2)
        .map(|_| (0..ambient.dim).map(|_| rng.gen_range(0..p) as i64).collect())
        .collect();
    let gens = Matrix::from_rows(field, &rows);
    let (sub, _) = ambient.submodule_generated(&gens);
    if sub.dim == 0 {
        Module::trivial(group, field)
    } else {
        sub
    }
}

/// Resolve a standard module name: "trivial" (or "k"), "regular",
/// "random2" (seeded).
pub fn standard_module(group: Rc<FiniteGroup>, field: PrimeField, name: &str, seed: u64) -> Result<Module, Error> {
    match name {
        "trivial" | "k" => Ok(Module::trivial(group, field)),
        "regular" => Ok(Module::regular(group, field)),
        "random2" => Ok(random_two_generator_module(group, field, seed)),
        other => Err(Error::Input(format!(
            "unknown module name {:?} (expected trivial, regular, random2, or a file path)",
            other
        ))),
    }
}

fn element_order_profile(g: &FiniteGroup, elements: &[usize]) -> Vec<usize> {
    let mut orders: Vec<usize> = elements.iter().map(|&e| g.element_order(e)).collect();
    orders.sort_unstable();
    orders
}

/// Resolve a subgroup spec: either comma-separated element indices
/// ("2" or "1,4") or a catalog group name ("C2", "V4"), matched by order and
/// element-order profile over subgroups generated by one or two elements,
/// scanning in deterministic index order.
pub fn named_subgroup(parent: Rc<FiniteGroup>, spec: &str) -> Result<Subgroup, Error> {
    if spec.chars().all(|c| c.is_ascii_digit() || c == ',') && !spec.is_empty() {
        let gens: Vec<usize> = spec
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad element index {:?}", s))))
            .collect::<Result<_, _>>()?;
        return Subgroup::generated_by(parent, &gens);
    }
    let target = group(spec).ok_or_else(|| Error::Input(format!("unknown subgroup name {:?}", spec)))?;
    let target_profile = {
        let all: Vec<usize> = (0..target.order).collect();
        element_order_profile(&target, &all)
    };
    let matches = |sub: &Subgroup| -> bool {
        sub.elements.len() == target.order
            && element_order_profile(&sub.parent, &sub.elements) == target_profile
    };
    for i in 0..parent.order {
        if let Ok(sub) = Subgroup::generated_by(parent.clone(), &[i]) {
            if matches(&sub) {
                return Ok(sub);
            }
        }
    }
    for i in 0..parent.order {
        for j in (i + 1)..parent.order {
            if let Ok(sub) = Subgroup::generated_by(parent.clone(), &[i, j]) {
                if matches(&sub) {
                    return Ok(sub);
                }
            }
        }
    }
    Err(Error::Input(format!(
        "group {} has no subgroup isomorphic to {} reachable from one or two generators",
        parent.name, spec
    )))
}

/// Group resolver closure for module files.
pub fn group_resolver() -> impl Fn(&str) -> Option<Rc<FiniteGroup>> {
    |name: &str| group(name)
}

/// A seeded random short exact sequence 0 -> X -> Y -> Z -> 0 over F_pG:
/// Y is the free module of the given rank, X a random action-closed
/// submodule, Z the quotient.  Degenerate picks (X = 0 or X = Y) are
/// re-rolled by advancing the generator, so both ends are nonzero whenever
/// possible.
pub struct RandomSes {
    pub x: Module,
    pub y: Module,
    pub z: Module,
    pub include: crate::modrep::ModuleMap,
    pub project: crate::modrep::ModuleMap,
}

pub fn random_ses(group: Rc<FiniteGroup>, field: PrimeField, rank: usize, seed: u64) -> RandomSes {
    let y = Module::free(group.clone(), field, rank);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.order();
    for _attempt in 0..64 {
        let n_gens = 1 + (rng.gen_range(0..2u32) as usize);
        let rows: Vec<Vec<i64>> = (0..n_gens)
            .map(|_| (0..y.dim).map(|_| rng.gen_range(0..p) as i64).collect())
            .collect();
        let gens = Matrix::from_rows(field, &rows);
        let (x, include) = y.submodule_generated(&gens);
        if x.dim == 0 || x.dim == y.dim {
            continue;
        }
        let (z, project) = y.quotient_by(&include.matrix.transpose());
        return RandomSes { x, y, z, include, project };
    }
    // fall back to the split sequence 0 -> F -> F ⊕ F -> F -> 0 shape:
    // submodule = first free summand of F_pG^2 (always valid for rank >= 2),
    // or the zero-submodule sequence for rank 1
    let y2 = Module::free(group.clone(), field, rank.max(2));
    let mut basis = Matrix::zeros(field, group.order, y2.dim);
    for h in 0..group.order {
        basis.set(h, h, 1);
    }
    let (x, include) = y2.submodule_from_basis(basis);
    let (z, project) = y2.quotient_by(&include.matrix.transpose());
    RandomSes { x, y: y2, z, include, project }
}
