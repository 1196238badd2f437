mod common;

use cartier_lab::bernstein::{bs_polynomial, expand_roots, gamma_set, gamma_set_direct, in_gamma, levels_compatible};
use cartier_lab::prelude::*;
use common::{budget, q, ring};

fn setup(p: u32, vars: usize, twist: &str, f: &str) -> (CartierModule, Polynomial) {
    let r = ring(p, vars);
    (CartierModule::parse(&r, twist, None, false).unwrap(), Polynomial::parse(f, &r).unwrap())
}

#[test]
fn cusp_at_seven() {
    let (m, f) = setup(7, 2, "1", "x^2 + y^3");
    let b = budget();
    let report = bs_polynomial(&m, &f, 1, &b).unwrap();
    assert!(report.gamma.contains(&5));
    assert_eq!(report.roots, report.gamma.iter().map(|&k| ExactRational::new(k, 7).unwrap()).collect::<Vec<_>>());
    assert_eq!(report.coefficients, expand_roots(&report.roots));
    let fine = bs_polynomial(&m, &f, 2, &b).unwrap();
    assert!(levels_compatible(&report.roots, &fine.roots, 7));
    assert!(fine.roots.iter().all(|r| *r >= q("0") && *r < q("1")));
}

#[test]
fn routes_agree_and_match_single_queries() {
    let b = budget();
    for (p, twist, f) in [(3u32, "1", "x^2 + y^3"), (2, "x*y", "x + y^2"), (5, "y^4", "x*y + y^2")] {
        let (m, f) = setup(p, 2, twist, f);
        for e in 1..=2 {
            let gamma = gamma_set(&m, &f, e, &b).unwrap();
            assert_eq!(gamma, gamma_set_direct(&m, &f, e, &b).unwrap());
            for k in 0..(p as u64).pow(e) {
                assert_eq!(gamma.contains(&k), in_gamma(&m, &f, e, k, &b).unwrap());
            }
        }
    }
}

#[test]
fn digits_spell_the_indices() {
    let (m, f) = setup(3, 2, "1", "x^2 + y^3");
    let r = bs_polynomial(&m, &f, 2, &budget()).unwrap();
    for (k, digits) in r.gamma.iter().zip(&r.digits) {
        let value: u64 = digits.iter().rev().fold(0, |acc, d| acc * 3 + *d as u64);
        assert_eq!(value, *k);
    }
}

#[test]
fn converse_failure() {
    for p in [2u32, 3, 5, 7] {
        let (m, f) = setup(p, 1, &format!("x^{}", p - 1), "x");
        assert!(!gamma_set(&m, &f, 1, &budget()).unwrap().contains(&(p as u64 - 1)));
        let s = SigmaFiltration::new(m, f, budget()).unwrap();
        assert!(s.gr_sigma(&q("1")).unwrap().nontrivial);
    }
}

#[test]
fn lasttheo_has_no_violations() {
    for (p, vars, twist, f) in [(7u32, 2, "1", "x^2 + y^3"), (3, 1, "x^2", "x^2"), (5, 2, "1", "x*y")] {
        let (m, f) = setup(p, vars, twist, f);
        for e in 1..=2 {
            let r = lasttheo_check(&m, &f, e, &budget()).unwrap();
            assert_eq!(r.violations, 0, "p={p} f={f} e={e}");
        }
    }
}
