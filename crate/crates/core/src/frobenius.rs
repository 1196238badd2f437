//! Frobenius powers, `p^e`-th roots of ideals and twisted Cartier images.
//!
//! The canonical Cartier operator `κ` on `R = F_p[x]` sends an ideal `I` to
//! its Frobenius root `I^{[1/p]}`; a module descriptor with twist `g`
//! carries `κ_g = κ ∘ (g·)`, whose `e`-th iterate is `κ^e ∘ (g^{ν_e}·)` with
//! `ν_e = 1 + p + … + p^{e-1}`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::cartmod::CartierModule;
use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::ring::{base_p_digits, Monomial, Polynomial, Ring};

/// A Frobenius level `e` together with `q = p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrobeniusLevel {
    e: u32,
    q: u32,
}

impl FrobeniusLevel {
    pub fn new(e: u32, ring: &Ring, budget: &Budget) -> Result<Self> {
        if e == 0 || e > budget.e_max {
            return Err(Error::Config(format!(
                "Frobenius level {e} outside [1, {}]",
                budget.e_max
            )));
        }
        let q = (ring.p() as u64).checked_pow(e).filter(|&q| q <= budget.max_pe);
        match q {
            Some(q) => Ok(FrobeniusLevel { e, q: q as u32 }),
            None => Err(Error::Config(format!(
                "p^e = {}^{e} exceeds the limit {}",
                ring.p(),
                budget.max_pe
            ))),
        }
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `p^e`.
    pub fn q(&self) -> u32 {
        self.q
    }
}

/// `I^{[p^e]}`: generators raised to `p^e` by exponent scaling.
pub fn bracket_power(ideal: &Ideal, level: FrobeniusLevel) -> Ideal {
    let gens = ideal.generators().iter().map(|g| g.exponent_scale(level.q)).collect();
    Ideal::new(ideal.ring(), gens)
}

/// The components `g_a` in the unique expansion `g = Σ_a g_a^{q} x^a`,
/// `a ∈ [0, q)^n`, made monic and deduplicated.
pub fn root_components(g: &Polynomial, q: u32) -> Vec<Polynomial> {
    let ring = g.ring();
    let mut buckets: HashMap<Monomial, Vec<(Monomial, u32)>> = HashMap::new();
    for &(m, c) in g.terms() {
        let (quo, rem) = m.split(q);
        // descending order of the terms carries over to the quotients
        buckets.entry(rem).or_default().push((quo, c));
    }
    let mut comps: Vec<Polynomial> = buckets
        .into_values()
        .map(|terms| Polynomial::from_sorted_terms(ring, terms).monic())
        .collect();
    sort_canonically(&mut comps);
    comps
}

fn sort_canonically(polys: &mut Vec<Polynomial>) {
    polys.sort_by(|a, b| {
        a.len().cmp(&b.len()).then_with(|| {
            a.terms()
                .iter()
                .map(|t| (t.0, t.1))
                .cmp(b.terms().iter().map(|t| (t.0, t.1)))
        })
    });
    polys.dedup();
}

fn root_of_generators(ring: &Ring, gens: &[Polynomial], q: u32) -> Ideal {
    let mut comps: Vec<Polynomial> = gens.par_iter().flat_map(|g| root_components(g, q)).collect();
    if comps.iter().any(|c| c.is_constant()) {
        return Ideal::unit(ring);
    }
    sort_canonically(&mut comps);
    Ideal::new(ring, comps)
}

/// `I^{[1/p^e]}`, the smallest ideal `J` with `I ⊆ J^{[p^e]}`.
pub fn pe_root(ideal: &Ideal, level: FrobeniusLevel) -> Ideal {
    root_of_generators(ideal.ring(), ideal.generators(), level.q)
}

/// `g^{ν_e} = Π_{i<e} g^{[p^i]}`.
pub fn twist_power(twist: &Polynomial, e: u32, budget: &Budget) -> Result<Polynomial> {
    let p = twist.ring().p();
    let mut acc = Polynomial::one(twist.ring());
    let mut q: u32 = 1;
    for _ in 0..e {
        let piece = twist.exponent_scale(q);
        acc = acc.try_mul(&piece, budget)?;
        q = q.saturating_mul(p);
    }
    Ok(acc)
}

fn preferred_generators(ideal: &Ideal, budget: &Budget) -> Result<Vec<Polynomial>> {
    Ok(ideal.groebner(budget)?.to_vec())
}

/// `κ_g^e(h · I) = (g^{ν_e} · h · I)^{[1/p^e]}`, materialized directly.
pub fn cartier_image(
    module: &CartierModule,
    h: &Polynomial,
    ideal: &Ideal,
    level: FrobeniusLevel,
    budget: &Budget,
) -> Result<Ideal> {
    let ring = module.ring();
    if ideal.ring() != ring || h.ring() != ring {
        return Err(Error::RingMismatch);
    }
    if h.is_zero() || ideal.is_zero() {
        return Ok(Ideal::zero(ring));
    }
    let factor = twist_power(module.twist(), level.e, budget)?.try_mul(h, budget)?;
    let gens = preferred_generators(ideal, budget)?;
    let products = gens
        .iter()
        .map(|g| g.try_mul(&factor, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(root_of_generators(ring, &products, level.q))
}

/// `κ_g^steps(f^exponent · I)`, evaluated one Frobenius step at a time.
///
/// Uses `κ_g(f^{pa+b} X) = f^a κ_g(f^b X)`: only `f^d` with `d < p` is ever
/// formed, and the quotient `f^{⌊exponent / p^steps⌋}` is applied at the end.
/// The number of steps is not limited by `e_max`.
pub fn cartier_image_pow(
    module: &CartierModule,
    f: &Polynomial,
    exponent: &BigUint,
    ideal: &Ideal,
    steps: u32,
    budget: &Budget,
) -> Result<Ideal> {
    let ring = module.ring();
    if ideal.ring() != ring || f.ring() != ring {
        return Err(Error::RingMismatch);
    }
    if steps > budget.max_iterated_level {
        return Err(Error::Budget(format!(
            "{steps} composed Cartier steps exceed the limit {}",
            budget.max_iterated_level
        )));
    }
    if ideal.is_zero() {
        return Ok(Ideal::zero(ring));
    }
    let p = ring.p();
    let digits = base_p_digits(exponent, p);
    let mut powers: Vec<Option<Polynomial>> = vec![None; p as usize];
    let mut current = ideal.clone();
    for step in 0..steps as usize {
        let d = digits.get(step).copied().unwrap_or(0) as usize;
        if powers[d].is_none() {
            powers[d] = Some(module.twist().mul(&f.pow(d as u64)));
        }
        let factor = powers[d].as_ref().unwrap();
        let gens = preferred_generators(&current, budget)?;
        let products = gens
            .iter()
            .map(|g| g.try_mul(factor, budget))
            .collect::<Result<Vec<_>>>()?;
        current = root_of_generators(ring, &products, p);
        current = current.canonical(budget)?;
    }
    let rest = if digits.len() > steps as usize {
        let mut r = BigUint::zero();
        for &d in digits[steps as usize..].iter().rev() {
            r = r * p + d;
        }
        r
    } else {
        BigUint::zero()
    };
    if !rest.is_zero() {
        let k = rest
            .to_u64()
            .ok_or_else(|| Error::Budget(format!("residual power f^{rest} too large")))?;
        let fk = f.try_pow(&BigUint::from(k), budget)?;
        current = current.product_poly(&fk)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn one_var(p: u32) -> (Ring, Budget) {
        (RingSpec::new(p, &["x"]).unwrap(), Budget::default())
    }

    #[test]
    fn bracket_power_examples() {
        let b = Budget::default();
        let r = RingSpec::new(2, &["x", "y"]).unwrap();
        let m = Ideal::parse(&r, &["x", "y"]).unwrap();
        let lvl = FrobeniusLevel::new(1, &r, &b).unwrap();
        let sq = bracket_power(&m, lvl);
        assert!(sq.equals(&Ideal::parse(&r, &["x^2", "y^2"]).unwrap(), &b).unwrap());
        assert!(bracket_power(&Ideal::zero(&r), lvl).is_zero());
        let r3 = RingSpec::new(3, &["x", "y"]).unwrap();
        let lvl3 = FrobeniusLevel::new(1, &r3, &b).unwrap();
        let s = bracket_power(&Ideal::parse(&r3, &["x + y"]).unwrap(), lvl3);
        assert!(s.equals(&Ideal::parse(&r3, &["x^3 + y^3"]).unwrap(), &b).unwrap());
    }

    #[test]
    fn single_term_roots() {
        for p in [2u32, 3, 5, 7] {
            let (r, b) = one_var(p);
            let lvl = FrobeniusLevel::new(1, &r, &b).unwrap();
            for k in 0..5u32 {
                let i = Ideal::parse(&r, &[format!("x^{}", p * k)]).unwrap();
                let expected = Ideal::parse(&r, &[format!("x^{k}")]).unwrap();
                assert!(pe_root(&i, lvl).equals(&expected, &b).unwrap());
            }
            let unit = pe_root(&Ideal::parse(&r, &[format!("x^{}", p - 1)]).unwrap(), lvl);
            assert!(unit.is_unit(&b).unwrap());
        }
    }

    #[test]
    fn level_bounds() {
        let b = Budget::default();
        let r = RingSpec::new(2, &["x"]).unwrap();
        assert!(FrobeniusLevel::new(0, &r, &b).is_err());
        assert!(FrobeniusLevel::new(12, &r, &b).is_ok());
        assert!(FrobeniusLevel::new(13, &r, &b).is_err());
        let r97 = RingSpec::new(97, &["x"]).unwrap();
        assert!(FrobeniusLevel::new(3, &r97, &b).is_ok());
        assert!(FrobeniusLevel::new(4, &r97, &b).is_err());
    }

    #[test]
    fn twisted_image_single_variable() {
        // g = x^{p-1}: κ_g^e((x^m)) = (x^{⌊(p^e - 1 + m)/p^e⌋})
        for p in [2u32, 3, 5] {
            let (r, b) = one_var(p);
            let m = CartierModule::parse(&r, &format!("x^{}", p - 1), None, false).unwrap();
            for e in 1..=3u32 {
                let lvl = FrobeniusLevel::new(e, &r, &b).unwrap();
                let q = lvl.q();
                for k in 0..(2 * q) {
                    let i = Ideal::parse(&r, &[format!("x^{k}")]).unwrap();
                    let got = cartier_image(&m, &Polynomial::one(&r), &i, lvl, &b).unwrap();
                    let expected = Ideal::parse(&r, &[format!("x^{}", k.div_ceil(q))]).unwrap();
                    assert!(got.equals(&expected, &b).unwrap(), "p={p} e={e} k={k}");
                }
            }
        }
    }

    #[test]
    fn twist_x_in_char_two_is_surjective() {
        let (r, b) = one_var(2);
        let m = CartierModule::parse(&r, "x", None, false).unwrap();
        for e in 1..=6 {
            let lvl = FrobeniusLevel::new(e, &r, &b).unwrap();
            let img = cartier_image(&m, &Polynomial::one(&r), &Ideal::unit(&r), lvl, &b).unwrap();
            assert!(img.is_unit(&b).unwrap());
        }
    }

    #[test]
    fn untwisted_image_is_plain_root() {
        let b = Budget::default();
        let r = RingSpec::new(3, &["x", "y"]).unwrap();
        let m = CartierModule::canonical(&r);
        let i = Ideal::parse(&r, &["x^5*y^2 + y^7", "x^4"]).unwrap();
        for e in 1..=2 {
            let lvl = FrobeniusLevel::new(e, &r, &b).unwrap();
            let a = cartier_image(&m, &Polynomial::one(&r), &i, lvl, &b).unwrap();
            assert!(a.equals(&pe_root(&i, lvl), &b).unwrap());
        }
    }

    #[test]
    fn digitwise_route_matches_direct_route() {
        let b = Budget::default();
        let r = RingSpec::new(3, &["x", "y"]).unwrap();
        let m = CartierModule::parse(&r, "y^2 + x", None, false).unwrap();
        let f = Polynomial::parse("x^2 + y^3", &r).unwrap();
        let i = Ideal::parse(&r, &["x", "y^2"]).unwrap();
        for e in 1..=2u32 {
            let lvl = FrobeniusLevel::new(e, &r, &b).unwrap();
            for k in [0u64, 1, 2, 5, 9, 13, 20] {
                let direct = cartier_image(&m, &f.pow(k), &i, lvl, &b).unwrap();
                let fast = cartier_image_pow(&m, &f, &BigUint::from(k), &i, e, &b).unwrap();
                assert!(direct.equals(&fast, &b).unwrap(), "e={e} k={k}");
            }
        }
    }
}
