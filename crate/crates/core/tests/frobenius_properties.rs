mod common;

use cartier_lab::frobenius::{bracket_power, pe_root, FrobeniusLevel};
use cartier_lab::prelude::*;
use cartier_lab::ring::Monomial;
use common::{budget, build, prime, ring, terms};
use proptest::prelude::*;

fn level(p: u32, e: u32) -> FrobeniusLevel {
    FrobeniusLevel::new(e, &ring(p, 2), &budget()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// `I ⊆ J^{[q]}` exactly when the root of `I` lies in `J`.
    #[test]
    fn root_is_left_adjoint_to_bracket_power(
        p in prime(), e in 1u32..=2, a in terms(3, 9), b in terms(2, 9), j in terms(2, 3), k in terms(2, 3),
    ) {
        let r = ring(p, 2);
        let lvl = level(p, e);
        let i = Ideal::new(&r, vec![build(&r, &a), build(&r, &b)]);
        let j = Ideal::new(&r, vec![build(&r, &j), build(&r, &k)]);
        let bud = budget();
        let lhs = bracket_power(&j, lvl).contains(&i, &bud).unwrap();
        let rhs = j.contains(&pe_root(&i, lvl), &bud).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn roots_compose(p in prime(), a in terms(3, 12), b in terms(3, 12)) {
        let r = ring(p, 2);
        let i = Ideal::new(&r, vec![build(&r, &a), build(&r, &b)]);
        let once = pe_root(&pe_root(&i, level(p, 1)), level(p, 1));
        prop_assert!(once.equals(&pe_root(&i, level(p, 2)), &budget()).unwrap());
    }

    #[test]
    fn roots_are_monotone(p in prime(), a in terms(3, 8), b in terms(3, 8)) {
        let r = ring(p, 2);
        let lvl = level(p, 1);
        let small = Ideal::new(&r, vec![build(&r, &a)]);
        let big = Ideal::new(&r, vec![build(&r, &a), build(&r, &b)]);
        prop_assert!(pe_root(&big, lvl).contains(&pe_root(&small, lvl), &budget()).unwrap());
    }

    /// A monomial `x^a y^b` has root `x^{⌊a/q⌋} y^{⌊b/q⌋}`.
    #[test]
    fn monomial_roots(p in prime(), e in 1u32..=2, a in 0u32..40, b in 0u32..40) {
        let r = ring(p, 2);
        let lvl = level(p, e);
        let q = lvl.q();
        let m = Polynomial::monomial(&r, Monomial::from_exponents(&[a, b]), 1);
        let expected = Polynomial::monomial(&r, Monomial::from_exponents(&[a / q, b / q]), 1);
        prop_assert!(pe_root(&Ideal::principal(&m), lvl).equals(&Ideal::principal(&expected), &budget()).unwrap());
    }
}

#[test]
fn level_limits_are_enforced() {
    let r = ring(7, 2);
    let b = budget();
    assert!(FrobeniusLevel::new(0, &r, &b).is_err());
    assert!(FrobeniusLevel::new(b.e_max + 1, &r, &b).is_err());
    assert_eq!(FrobeniusLevel::new(3, &r, &b).unwrap().q(), 343);
}
