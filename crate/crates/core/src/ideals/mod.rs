//! Ideals of `F_p[x_1, …, x_n]` with decidable membership, containment and
//! equality through cached reduced Gröbner bases.

mod groebner;

use std::fmt;
use std::sync::OnceLock;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ring::{Polynomial, Ring};

pub use groebner::{normal_form, reduced_basis};

/// Finitely generated ideal. The reduced basis is filled at most once; racing
/// fills compute the same canonical basis and one of them is kept.
#[derive(Clone)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<Polynomial>,
    basis: OnceLock<Vec<Polynomial>>,
}

impl Ideal {
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> Self {
        let generators: Vec<Polynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &generators {
            assert!(g.ring() == ring, "generator from a different ring");
        }
        Ideal { ring: ring.clone(), generators, basis: OnceLock::new() }
    }

    /// Parses each generator string.
    pub fn parse<S: AsRef<str>>(ring: &Ring, generators: &[S]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| Polynomial::parse(g.as_ref(), ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring, gens))
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::with_basis(ring, Vec::new(), Vec::new())
    }

    pub fn unit(ring: &Ring) -> Self {
        let one = Polynomial::one(ring);
        Self::with_basis(ring, vec![one.clone()], vec![one])
    }

    pub fn principal(f: &Polynomial) -> Self {
        if f.is_zero() {
            return Self::zero(f.ring());
        }
        let monic = f.monic();
        Self::with_basis(f.ring(), vec![f.clone()], vec![monic])
    }

    fn with_basis(ring: &Ring, generators: Vec<Polynomial>, basis: Vec<Polynomial>) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(basis);
        Ideal { ring: ring.clone(), generators, basis: cell }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Reduced grevlex basis, computed on first use.
    pub fn groebner(&self, budget: &Budget) -> Result<&[Polynomial]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let computed = reduced_basis(&self.ring, &self.generators, budget)?;
        Ok(self.basis.get_or_init(|| computed))
    }

    /// Same as [`Ideal::groebner`] with default limits.
    pub fn reduced_basis(&self) -> Result<&[Polynomial]> {
        self.groebner(&Budget::default())
    }

    /// The same ideal presented by its reduced basis.
    pub fn canonical(&self, budget: &Budget) -> Result<Ideal> {
        let basis = self.groebner(budget)?.to_vec();
        Ok(Self::with_basis(&self.ring, basis.clone(), basis))
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool> {
        if self.generators.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        Ok(self.groebner(budget)?.first().is_some_and(|g| g.is_constant()))
    }

    pub fn member(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Ok(true);
        }
        let basis = self.groebner(budget)?;
        let reducers: Vec<&Polynomial> = basis.iter().collect();
        Ok(normal_form(f, &reducers).is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        if self.is_unit(budget)? {
            return Ok(true);
        }
        let basis = self.groebner(budget)?;
        let reducers: Vec<&Polynomial> = basis.iter().collect();
        // reduced generators of `other` are usually shorter when cached
        let gens = other.basis.get().map(|b| b.as_slice()).unwrap_or(&other.generators);
        Ok(gens.iter().all(|g| normal_form(g, &reducers).is_zero()))
    }

    pub fn equals(&self, other: &Ideal, budget: &Budget) -> Result<bool> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(self.groebner(budget)? == other.groebner(budget)?)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Ideal::new(&self.ring, gens))
    }

    /// `h · I`.
    pub fn product_poly(&self, h: &Polynomial) -> Result<Ideal> {
        if h.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if h.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let gens = self.generators.iter().map(|g| g.mul(h)).collect();
        let mut product = Ideal::new(&self.ring, gens);
        // h·(reduced basis) stays a Gröbner basis; only monic scaling is needed
        if let Some(b) = self.basis.get() {
            if b.len() == 1 {
                let _ = product.basis.set(vec![b[0].mul(h).monic()]);
                product.generators = vec![b[0].mul(h)];
            }
        }
        Ok(product)
    }

    /// Canonical generator strings, for reports and JSON.
    pub fn basis_strings(&self, budget: &Budget) -> Result<Vec<String>> {
        Ok(self.groebner(budget)?.iter().map(|g| g.to_string()).collect())
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.basis.get().unwrap_or(&self.generators);
        let shown: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", shown.join(", "))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn setup() -> (Ring, Budget) {
        (RingSpec::new(7, &["x", "y"]).unwrap(), Budget::default())
    }

    #[test]
    fn membership_examples() {
        let (r, b) = setup();
        let m = Ideal::parse(&r, &["x", "y"]).unwrap();
        let f = Polynomial::parse("x^2 + y^3", &r).unwrap();
        assert!(m.member(&f, &b).unwrap());
        assert!(!m.member(&Polynomial::one(&r), &b).unwrap());
    }

    #[test]
    fn equality_examples() {
        let (r, b) = setup();
        let x = Ideal::parse(&r, &["x"]).unwrap();
        let x2 = Ideal::parse(&r, &["x^2"]).unwrap();
        assert!(!x.equals(&x2, &b).unwrap());
        assert!(x.contains(&x2, &b).unwrap());
        assert!(!x2.contains(&x, &b).unwrap());
        let m1 = Ideal::parse(&r, &["x", "y"]).unwrap();
        let m2 = Ideal::parse(&r, &["y", "x + y"]).unwrap();
        assert!(m1.equals(&m2, &b).unwrap());
    }

    #[test]
    fn sum_and_product() {
        let (r, b) = setup();
        let sum = Ideal::parse(&r, &["x"]).unwrap().sum(&Ideal::parse(&r, &["y"]).unwrap()).unwrap();
        assert!(sum.equals(&Ideal::parse(&r, &["x", "y"]).unwrap(), &b).unwrap());
        let zero = sum.product_poly(&Polynomial::zero(&r)).unwrap();
        assert!(zero.is_zero());
        let f = Polynomial::parse("x^2 + y^3", &r).unwrap();
        let fm = sum.product_poly(&f).unwrap();
        assert!(fm.equals(&Ideal::parse(&r, &["x^3 + x*y^3", "x^2*y + y^4"]).unwrap(), &b).unwrap());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let (r, b) = setup();
        let s = RingSpec::new(5, &["x", "y"]).unwrap();
        let i = Ideal::parse(&r, &["x"]).unwrap();
        let j = Ideal::parse(&s, &["x"]).unwrap();
        assert_eq!(i.contains(&j, &b), Err(Error::RingMismatch));
        assert!(i.sum(&j).is_err());
        assert!(i.member(&Polynomial::one(&s), &b).is_err());
    }

    #[test]
    fn unit_ideal_caches_one() {
        let (r, b) = setup();
        let u = Ideal::unit(&r);
        assert_eq!(u.basis_strings(&b).unwrap(), ["1"]);
        let v = Ideal::parse(&r, &["x + 1", "x"]).unwrap();
        assert!(v.is_unit(&b).unwrap());
        assert_eq!(v.basis_strings(&b).unwrap(), ["1"]);
    }
}
