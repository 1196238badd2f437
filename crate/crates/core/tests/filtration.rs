mod common;

use cartier_lab::filtration::{validate_a_e, CandidateBounds, Prediction, TestModuleFiltration, Verdict};
use cartier_lab::prelude::*;
use common::{budget, q, ring};
use num_bigint::BigInt;

fn filtration(p: u32, vars: usize, twist: &str, c: Option<&str>, f: &str) -> TestModuleFiltration {
    let r = ring(p, vars);
    let m = CartierModule::parse(&r, twist, c, false).unwrap();
    TestModuleFiltration::new(m, Polynomial::parse(f, &r).unwrap(), budget()).unwrap()
}

fn gens(i: &Ideal) -> Vec<String> {
    i.basis_strings(&budget()).unwrap()
}

#[test]
fn cusp_thresholds_follow_the_residue_of_p() {
    // 5/6 when p ≡ 1 mod 3, 5/6 - 1/(6p) when p ≡ 2 mod 3, and the small primes separately.
    for p in [5u32, 7, 11, 13, 17, 19] {
        let t = filtration(p, 2, "1", None, "x^2 + y^3");
        let expected = if p % 3 == 1 {
            q("5/6")
        } else {
            q("5/6") - ExactRational::new(1, 6 * p).unwrap()
        };
        assert_eq!(t.fpt().unwrap(), expected, "p={p}");
    }
    assert_eq!(filtration(2, 2, "1", None, "x^2 + y^3").fpt().unwrap(), q("1/2"));
    assert_eq!(filtration(3, 2, "1", None, "x^2 + y^3").fpt().unwrap(), q("2/3"));
}

#[test]
fn cusp_jumps_and_graded_pieces() {
    let t = filtration(7, 2, "1", None, "x^2 + y^3");
    let report = t.jumping_numbers(&q("0"), &q("1"), CandidateBounds::default()).unwrap();
    assert!(report.complete, "{:?}", report.warnings);
    assert_eq!(report.lambdas(), vec![q("5/6"), q("1")]);
    assert_eq!(gens(&report.jumps[0].tau), vec!["x", "y"]);
    let extended = t.extend_periodically(&report, &q("2")).unwrap();
    assert_eq!(extended.lambdas(), vec![q("5/6"), q("1"), q("11/6"), q("2")]);
    let piece = t.graded_piece(&q("5/6")).unwrap();
    assert!(piece.is_jump);
    assert!(piece.tau_left.is_unit(&budget()).unwrap());
    assert!(!t.is_jump(&q("1/2")).unwrap());
}

#[test]
fn level_route_agrees_with_the_exact_route() {
    let t = filtration(5, 2, "1", None, "x^2 + y^3");
    for l in ["1/3", "4/5", "5/6", "1", "7/5"] {
        let lv = t.tau_by_levels(&TauRequest::new(q(l))).unwrap();
        assert!(lv.ideal.equals(&t.tau(&q(l)).unwrap(), &budget()).unwrap(), "λ={l}");
        assert!(lv.stabilization_level >= 1);
    }
}

#[test]
fn monomial_hypersurface_filtration() {
    let t = filtration(3, 2, "1", None, "x^2*y^3");
    // τ(x^2 y^3)^λ = (x^{⌊2λ⌋} y^{⌊3λ⌋}).
    for (l, g) in [("1/4", "1"), ("1/3", "y"), ("1/2", "x*y"), ("2/3", "x*y^2")] {
        assert_eq!(gens(&t.tau(&q(l)).unwrap()), vec![g.to_string()], "λ={l}");
    }
    assert_eq!(t.fpt().unwrap(), q("1/3"));
}

#[test]
fn twisted_module_translates_the_filtration() {
    let t = filtration(3, 2, "x^2", Some("x"), "y");
    assert_eq!(gens(t.base()), vec!["x"]);
    assert_eq!(gens(&t.tau(&q("1")).unwrap()), vec!["x*y"]);
    assert!(t.check_skoda(&q("1/2")).unwrap());
    assert!(t.check_kappa_division(&q("3/2")).unwrap());
}

#[test]
fn nilpotence_follows_integrality() {
    let t = filtration(7, 2, "1", None, "x^2 + y^3");
    let l = q("5/6");
    for e in 1..=3u32 {
        let m = BigInt::from(7).pow(e) - 1;
        let a = l.ceil_mul(&m);
        assert!(validate_a_e(&l, 7, e, &a));
        assert!(!validate_a_e(&l, 7, e, &(a.clone() - 1)));
        let v = t.nilpotence_verdict(&l, e, &a, 64).unwrap();
        assert_eq!(v.verdict, Verdict::NonNilpotent);
        assert_eq!(v.predicted, Prediction::NonNilpotent);
        let v = t.nilpotence_verdict(&l, e, &(a + 1), 64).unwrap().ensure_agreement().unwrap();
        assert!(matches!(v.verdict, Verdict::Nilpotent(_)));
    }
    let five = filtration(5, 2, "1", None, "x^2 + y^3");
    let v = five.nilpotence_verdict(&q("4/5"), 2, &BigInt::from(20), 64).unwrap();
    assert!(matches!(v.verdict, Verdict::Nilpotent(_)) && v.agree);
}

#[test]
fn invalid_requests_are_rejected() {
    let r = ring(5, 2);
    let m = CartierModule::canonical(&r);
    assert!(TestModuleFiltration::new(m.clone(), Polynomial::zero(&r), budget()).is_err());
    let t = TestModuleFiltration::new(m, Polynomial::parse("x", &r).unwrap(), budget()).unwrap();
    assert!(t.tau(&q("-1/2")).is_err());
    assert!(t.nilpotence_verdict(&q("1/2"), 1, &BigInt::from(1), 8).is_err());
    assert!(t.jumping_numbers(&q("1"), &q("1/2"), CandidateBounds::default()).is_err());
}

#[test]
fn twisted_module_without_test_element_needs_an_assertion() {
    let r = ring(3, 1);
    let m = CartierModule::parse(&r, "x^2", None, false).unwrap();
    assert!(matches!(tau_zero(&m, &budget()), Err(Error::MissingTestElement(_))));
    let asserted = m.asserting_f_regular(true);
    assert!(tau_zero(&asserted, &budget()).unwrap().is_unit(&budget()).unwrap());
}
