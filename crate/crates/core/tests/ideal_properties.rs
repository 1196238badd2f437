mod common;

use cartier_lab::prelude::*;
use cartier_lab::ring::Monomial;
use common::{budget, build, prime, ring, terms};
use proptest::prelude::*;

fn monomial_ideal(r: &cartier_lab::ring::Ring, gens: &[[u32; 2]]) -> Ideal {
    Ideal::new(r, gens.iter().map(|e| Polynomial::monomial(r, Monomial::from_exponents(e), 1)).collect())
}

/// Membership in a monomial ideal: every term is divisible by a generator.
fn monomial_member(gens: &[[u32; 2]], f: &Polynomial) -> bool {
    f.terms().iter().all(|(m, _)| {
        gens.iter().any(|g| Monomial::from_exponents(g).divides(m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_basis_ignores_presentation(p in prime(), a in terms(3, 3), b in terms(3, 3), c in terms(3, 3)) {
        let r = ring(p, 2);
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        let i = Ideal::new(&r, vec![a.clone(), b.clone()]);
        let j = Ideal::new(&r, vec![b.clone(), a.add(&b.mul(&c)), a.mul(&c)]);
        let bi = i.basis_strings(&budget()).unwrap();
        let bj = j.basis_strings(&budget()).unwrap();
        prop_assert_eq!(bi, bj);
    }

    #[test]
    fn monomial_membership_matches_divisibility(
        p in prime(),
        gens in prop::collection::vec(prop::array::uniform2(0u32..4), 1..4),
        f in terms(5, 5),
    ) {
        let r = ring(p, 2);
        let f = build(&r, &f);
        let i = monomial_ideal(&r, &gens);
        prop_assert_eq!(i.member(&f, &budget()).unwrap(), monomial_member(&gens, &f));
    }

    #[test]
    fn principal_membership_in_one_variable(p in prime(), g in terms(3, 4), h in terms(3, 4), rem in terms(2, 6)) {
        let r = ring(p, 1);
        let g = build(&r, &g);
        prop_assume!(!g.is_zero());
        let h = build(&r, &h);
        let i = Ideal::principal(&g);
        prop_assert!(i.member(&g.mul(&h), &budget()).unwrap());
        let deg = g.degree().unwrap();
        let rem: Polynomial = {
            let rem = build(&r, &rem);
            Polynomial::from_terms(&r, rem.terms().iter().filter(|(m, _)| m.degree() < deg).map(|(m, c)| (*m, *c as i64)))
        };
        prop_assert_eq!(i.member(&g.mul(&h).add(&rem), &budget()).unwrap(), rem.is_zero());
    }

    #[test]
    fn containment_is_a_partial_order(p in prime(), a in terms(3, 3), b in terms(3, 3), c in terms(2, 3)) {
        let r = ring(p, 2);
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        let i = Ideal::new(&r, vec![a.clone()]);
        let j = Ideal::new(&r, vec![a.clone(), b.clone()]);
        let k = j.sum(&Ideal::new(&r, vec![c])).unwrap();
        let bud = budget();
        prop_assert!(i.contains(&i, &bud).unwrap());
        prop_assert!(j.contains(&i, &bud).unwrap());
        prop_assert!(k.contains(&j, &bud).unwrap() && k.contains(&i, &bud).unwrap());
        let both = j.contains(&k, &bud).unwrap() && k.contains(&j, &bud).unwrap();
        prop_assert_eq!(both, j.equals(&k, &bud).unwrap());
        let prod = j.product_poly(&b).unwrap();
        prop_assert!(j.contains(&prod, &bud).unwrap());
    }
}

#[test]
fn unit_and_zero_ideals() {
    let r = ring(5, 2);
    let b = budget();
    let unit = Ideal::parse(&r, &["x + 1", "x"]).unwrap();
    assert!(unit.is_unit(&b).unwrap());
    assert_eq!(unit.basis_strings(&b).unwrap(), vec!["1".to_string()]);
    let zero = Ideal::zero(&r);
    assert!(zero.is_zero());
    assert!(unit.contains(&zero, &b).unwrap());
    assert!(!zero.contains(&unit, &b).unwrap());
}
