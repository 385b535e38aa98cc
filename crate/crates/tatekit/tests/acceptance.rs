//! Acceptance sweep: one test per advertised guarantee, with the runtime
//! budgets pinned.  Run with `--nocapture` to see the per-criterion timing
//! lines; the test names double as the criterion index.

use std::time::{Duration, Instant};

use tatekit::catalog::{self, random_two_generator_module};
use tatekit::completion::{
    completed_naive, dimension_shift, eckmann_shapiro_compare, pd_detect, PdVerdict, Session,
};
use tatekit::modrep::Module;
use tatekit::products::ring_table;
use tatekit::suites::{
    constructions_suite, les_suite, phi_suite, products_suite, CATALOG,
};

fn finish(criterion: u32, start: Instant, budget: Option<Duration>) {
    let dt = start.elapsed();
    if let Some(b) = budget {
        assert!(dt < b, "criterion {} exceeded its {:?} budget: took {:?}", criterion, b, dt);
    }
    println!("criterion {:2} PASS in {:.2?}", criterion, dt);
}

#[test]
fn criterion_01_c2_table_is_the_laurent_ring() {
    let t0 = Instant::now();
    let session = Session::new(2).unwrap();
    let c2 = catalog::group("C2").unwrap();
    let table = ring_table(&session, &c2, -6, 6, 12).unwrap();
    for n in -6i64..=6 {
        assert_eq!(table.dims[&n], 1, "dim at degree {}", n);
    }
    assert_eq!(table.unit, vec!["u0_0".to_string()]);
    let mut cells = 0usize;
    for e in &table.products {
        let (m, n) = (degree_of(&e.a), degree_of(&e.b));
        assert_eq!(e.result.len(), 1, "{} * {} is not a monomial", e.a, e.b);
        assert_eq!(
            e.result.get(&format!("u{}_0", m + n)),
            Some(&1),
            "{} * {} is not u^{}",
            e.a,
            e.b,
            m + n
        );
        cells += 1;
    }
    let expected_cells = (-6i64..=6)
        .flat_map(|m| (-6i64..=6).map(move |n| (m, n)))
        .filter(|(m, n)| (-6..=6).contains(&(m + n)))
        .count();
    assert_eq!(cells, expected_cells, "product table misses in-range pairs");
    finish(1, t0, Some(Duration::from_secs(5)));
}

fn degree_of(label: &str) -> i64 {
    label
        .strip_prefix('u')
        .and_then(|s| s.split('_').next())
        .and_then(|s| s.parse().ok())
        .unwrap()
}

#[test]
fn criterion_02_c3_at_the_odd_prime() {
    let t0 = Instant::now();
    let session = Session::new(3).unwrap();
    let c3 = catalog::group("C3").unwrap();
    let table = ring_table(&session, &c3, -4, 4, 8).unwrap();
    for n in -4i64..=4 {
        assert_eq!(table.dims[&n], 1, "dim at degree {}", n);
    }
    let cell = |a: &str, b: &str| {
        table
            .products
            .iter()
            .find(|e| e.a == a && e.b == b)
            .unwrap_or_else(|| panic!("missing product cell ({}, {})", a, b))
    };
    // graded commutativity at p = 3 forces the odd generator to square to 0
    assert!(cell("u1_0", "u1_0").result.is_empty(), "degree-1 generator does not square to 0");
    assert!(!cell("u2_0", "u-2_0").result.is_empty(), "u^2 * u^-2 vanished");
    assert!(!cell("u-2_0", "u2_0").result.is_empty(), "u^-2 * u^2 vanished");
    finish(2, t0, Some(Duration::from_secs(10)));
}

#[test]
fn criterion_03_three_constructions_agree() {
    let t0 = Instant::now();
    let rep = constructions_suite(17).unwrap();
    assert!(rep.ok(), "disagreements:\n{}", rep.failures.join("\n"));
    // 14 (group, prime) pairs x {trivial, regular, random2} x n in [-4, 4]
    assert_eq!(rep.passed, 14 * 3 * 9, "sweep did not cover the whole catalog");
    finish(3, t0, Some(Duration::from_secs(180)));
}

#[test]
fn criterion_04_projective_vanishing_and_pd_detection() {
    let t0 = Instant::now();
    for pair in tatekit::suites::catalog_pairs() {
        let session = Session::new(pair.prime).unwrap();
        let k = Module::trivial(pair.group.clone(), session.field);
        let reg = Module::regular(pair.group.clone(), session.field);
        for n in -3i64..=3 {
            let left = completed_naive(&session, &reg, &k, n).unwrap();
            let right = completed_naive(&session, &k, &reg, n).unwrap();
            assert_eq!(left.dim, 0, "{} p={}: Ext^{}(P, k) != 0", pair.name, pair.prime, n);
            assert_eq!(right.dim, 0, "{} p={}: Ext^{}(k, P) != 0", pair.name, pair.prime, n);
        }
        assert!(
            matches!(pd_detect(&session, &reg).unwrap(), PdVerdict::Finite(_)),
            "{} p={}: regular module not detected as finite-dimensional",
            pair.name,
            pair.prime
        );
        assert!(
            matches!(pd_detect(&session, &k).unwrap(), PdVerdict::Infinite(_)),
            "{} p={}: trivial module not detected as infinite-dimensional",
            pair.name,
            pair.prime
        );
    }
    // coprime characteristic: every module has finite projective dimension
    for (gname, p) in [("C3", 2u32), ("C5", 3u32)] {
        let session = Session::new(p).unwrap();
        let g = catalog::group(gname).unwrap();
        let k = Module::trivial(g.clone(), session.field);
        let m = random_two_generator_module(g.clone(), session.field, 23);
        for module in [&k, &m] {
            assert!(
                matches!(pd_detect(&session, module).unwrap(), PdVerdict::Finite(_)),
                "{} in coprime characteristic {} not detected as finite",
                gname,
                p
            );
        }
    }
    finish(4, t0, None);
}

#[test]
fn criterion_05_les_suite_with_naturality() {
    let t0 = Instant::now();
    let rep = les_suite(29, 100).unwrap();
    assert!(rep.ok(), "failures:\n{}", rep.failures.join("\n"));
    assert!(
        rep.summary.contains("100 sequences"),
        "unexpected coverage banner: {}",
        rep.summary
    );
    finish(5, t0, Some(Duration::from_secs(180)));
}

#[test]
fn criterion_06_phi_isomorphism_and_ring_morphism() {
    let t0 = Instant::now();
    let rep = phi_suite(31, &CATALOG).unwrap();
    assert!(rep.ok(), "failures:\n{}", rep.failures.join("\n"));
    finish(6, t0, None);
}

#[test]
fn criterion_07_eckmann_shapiro() {
    let t0 = Instant::now();
    for (gname, sname, p) in [("C4", "C2", 2u32), ("S3", "C3", 3u32)] {
        let session = Session::new(p).unwrap();
        let g = catalog::group(gname).unwrap();
        let sub = catalog::named_subgroup(g.clone(), sname).unwrap();
        let b_g = Module::trivial(g.clone(), session.field);
        let a_mods = [
            Module::trivial(sub.as_group.clone(), session.field),
            random_two_generator_module(sub.as_group.clone(), session.field, 41),
        ];
        for a_h in &a_mods {
            for n in -3i64..=3 {
                let rep = eckmann_shapiro_compare(&session, &sub, a_h, &b_g, n).unwrap();
                assert_eq!(
                    rep.dim_induced, rep.dim_subgroup,
                    "{} over {} p={} degree {}: dims differ",
                    gname, sname, p, n
                );
                assert!(rep.iso_verified, "{} over {} p={} degree {}", gname, sname, p, n);
            }
        }
    }
    finish(7, t0, None);
}

#[test]
fn criterion_08_dimension_shifting() {
    let t0 = Instant::now();
    for pair in tatekit::suites::catalog_pairs() {
        let session = Session::new(pair.prime).unwrap();
        let k = Module::trivial(pair.group.clone(), session.field);
        for n in -3i64..=3 {
            let s = dimension_shift(&session, &k, &k, n).unwrap();
            assert_eq!(
                s.source_dim, s.target_dim,
                "{} p={} degree {}: shifted dims differ",
                pair.name, pair.prime, n
            );
            assert!(
                s.matrix.inverse().is_some(),
                "{} p={} degree {}: shift matrix not invertible",
                pair.name,
                pair.prime,
                n
            );
        }
    }
    finish(8, t0, None);
}

#[test]
fn criterion_09_v4_and_q8_dimension_tables() {
    let t0 = Instant::now();
    let session = Session::new(2).unwrap();
    let v4 = catalog::group("V4").unwrap();
    let k4 = Module::trivial(v4, session.field);
    for n in -4i64..=4 {
        let expected = if n >= 0 { n + 1 } else { -n } as usize;
        let got = completed_naive(&session, &k4, &k4, n).unwrap().dim;
        assert_eq!(got, expected, "V4 degree {}", n);
    }
    let q8 = catalog::group("Q8").unwrap();
    let k8 = Module::trivial(q8, session.field);
    for n in -4i64..=7 {
        let expected = match n.rem_euclid(4) {
            0 | 3 => 1,
            _ => 2,
        };
        let got = completed_naive(&session, &k8, &k8, n).unwrap().dim;
        assert_eq!(got, expected, "Q8 degree {}", n);
    }
    finish(9, t0, Some(Duration::from_secs(300)));
}

#[test]
fn criterion_10_product_laws() {
    let t0 = Instant::now();
    // unit and associativity on every in-range triple are enforced inside
    // ring_table; V4 adds degrees of dimension > 1 to the C2/C3 windows
    let session = Session::new(2).unwrap();
    let v4 = catalog::group("V4").unwrap();
    ring_table(&session, &v4, -2, 2, 4).unwrap();
    let rep = products_suite(7).unwrap();
    assert!(rep.ok(), "failures:\n{}", rep.failures.join("\n"));
    finish(10, t0, None);
}
