mod common;

use cartier_lab::prelude::*;
use cartier_lab::sigma::SigmaRoute;
use common::{budget, q, ring};

fn sigma(p: u32, vars: usize, twist: &str, f: &str) -> SigmaFiltration {
    let r = ring(p, vars);
    let m = CartierModule::parse(&r, twist, None, false).unwrap();
    SigmaFiltration::new(m, Polynomial::parse(f, &r).unwrap(), budget()).unwrap()
}

#[test]
fn one_variable_half_threshold() {
    for p in [3u32, 5, 7] {
        let s = sigma(p, 1, &format!("x^{}", p - 1), "x^2");
        let at = s.sigma(&q("1/2")).unwrap();
        assert_eq!(at.route, SigmaRoute::Direct);
        assert_eq!(at.ideal.basis_strings(&budget()).unwrap(), vec!["x"]);
        let gr = s.gr_sigma(&q("1/2")).unwrap();
        assert!(gr.nontrivial);
        assert_eq!(gr.right.ideal.basis_strings(&budget()).unwrap(), vec!["x^2"]);
        assert!(!s.gr_sigma(&q("1/3")).unwrap().nontrivial);
    }
}

#[test]
fn p_divisible_denominators_use_the_right_limit() {
    let s = sigma(3, 2, "1", "x^2 + y^3");
    let l = q("2/3");
    let v = s.sigma(&l).unwrap();
    assert_eq!(v.route, SigmaRoute::RightLimit);
    assert!(v.evaluated_at > l);
    let other = s.right_limit_from(&l, 2).unwrap();
    assert!(v.ideal.equals(&other.ideal, &budget()).unwrap());
}

#[test]
fn right_limit_agrees_with_direct_route() {
    let s = sigma(7, 2, "1", "x^2 + y^3");
    for l in ["1/2", "5/6", "1", "4/3"] {
        let direct = s.sigma_direct(&q(l)).unwrap().ideal;
        let nudged = q(l) + ExactRational::new(1, 7u32.pow(6)).unwrap();
        let tiny_step = s.sigma(&nudged).unwrap().ideal;
        assert!(direct.contains(&tiny_step, &budget()).unwrap(), "λ={l}");
    }
}

#[test]
fn variants_agree_on_the_cusp() {
    let s = sigma(7, 2, "1", "x^2 + y^3");
    for l in ["1/2", "5/6", "1"] {
        let r = s.variants_check(&q(l), 3, 9).unwrap();
        assert!(r.all_equal(), "λ={l}");
    }
    assert!(s.variants_check(&q("1/7"), 2, 8).is_err());
    assert!(s.variants_check(&q("1/2"), 2, 1).is_err());
}

#[test]
fn nilpotence_on_sigma_pieces() {
    let s = sigma(5, 1, "x^4", "x^2");
    let v = s.sigma_nilpotence(&q("1/2"), 2, 64).unwrap();
    assert!(v.agree);
}

#[test]
fn sigma_matches_tau_for_the_cusp_at_jumps() {
    let r = ring(5, 2);
    let m = CartierModule::canonical(&r);
    let f = Polynomial::parse("x^2 + y^3", &r).unwrap();
    let t = TestModuleFiltration::new(m.clone(), f.clone(), budget()).unwrap();
    let s = SigmaFiltration::new(m, f, budget()).unwrap();
    for l in ["4/5", "1", "9/5"] {
        let c = s.sigma_tau_comparison(&t, &q(l)).unwrap();
        assert!(c.regular_identity && !c.breakdown, "λ={l}");
    }
}
