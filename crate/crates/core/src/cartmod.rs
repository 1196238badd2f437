//! Rank-one Cartier modules `(R, κ∘(g·))`, their stable image and the test
//! module at `λ = 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::frobenius::{cartier_image, FrobeniusLevel};
use crate::ideals::Ideal;
use crate::ring::{Polynomial, Ring, RingSpec};

/// The Cartier module `(R, κ_g)` with an optional test element.
#[derive(Clone, PartialEq, Eq)]
pub struct CartierModule {
    ring: Ring,
    twist: Polynomial,
    test_element: Option<Polynomial>,
    assert_f_regular: bool,
}

impl CartierModule {
    pub fn new(twist: Polynomial) -> Result<Self> {
        if twist.is_zero() {
            return Err(Error::Invalid("twist must be nonzero".into()));
        }
        Ok(CartierModule {
            ring: twist.ring().clone(),
            twist,
            test_element: None,
            assert_f_regular: false,
        })
    }

    /// The ring with its canonical Cartier structure (twist `1`).
    pub fn canonical(ring: &Ring) -> Self {
        CartierModule::new(Polynomial::one(ring)).expect("1 is nonzero")
    }

    /// Builds a descriptor from polynomial text.
    pub fn parse(
        ring: &Ring,
        twist: &str,
        test_element: Option<&str>,
        assert_f_regular: bool,
    ) -> Result<Self> {
        let mut m = CartierModule::new(Polynomial::parse(twist, ring)?)?;
        if let Some(c) = test_element {
            m = m.with_test_element(Polynomial::parse(c, ring)?)?;
        }
        m.assert_f_regular = assert_f_regular;
        Ok(m)
    }

    pub fn with_test_element(mut self, c: Polynomial) -> Result<Self> {
        if c.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if c.is_zero() {
            return Err(Error::Invalid("test element must be nonzero".into()));
        }
        self.test_element = Some(c);
        Ok(self)
    }

    pub fn asserting_f_regular(mut self, flag: bool) -> Self {
        self.assert_f_regular = flag;
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn twist(&self) -> &Polynomial {
        &self.twist
    }

    pub fn test_element(&self) -> Option<&Polynomial> {
        self.test_element.as_ref()
    }

    pub fn asserts_f_regular(&self) -> bool {
        self.assert_f_regular
    }

    /// A constant twist acts like the canonical structure on ideals.
    pub fn is_untwisted(&self) -> bool {
        self.twist.is_constant()
    }

    /// F-regular by construction (untwisted) or by assertion.
    pub fn is_f_regular(&self) -> bool {
        self.is_untwisted() || self.assert_f_regular
    }

    /// One application of `κ_g` to an ideal.
    pub fn kappa(&self, ideal: &Ideal, budget: &Budget) -> Result<Ideal> {
        let level = FrobeniusLevel::new(1, &self.ring, budget)?;
        cartier_image(self, &Polynomial::one(&self.ring), ideal, level, budget)?.canonical(budget)
    }

    pub fn descriptor(&self) -> Descriptor {
        Descriptor {
            p: self.ring.p(),
            vars: self.ring.vars().to_vec(),
            twist: self.twist.to_string(),
            test_element: self.test_element.as_ref().map(|c| c.to_string()),
            assert_f_regular: self.assert_f_regular,
        }
    }
}

impl fmt::Debug for CartierModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CartierModule(p={}, vars={:?}, twist={}", self.ring.p(), self.ring.vars(), self.twist)?;
        if let Some(c) = &self.test_element {
            write!(f, ", test_element={c}")?;
        }
        if self.assert_f_regular {
            write!(f, ", f-regular")?;
        }
        write!(f, ")")
    }
}

/// Serializable form of a [`CartierModule`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptor {
    pub p: u32,
    pub vars: Vec<String>,
    pub twist: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_element: Option<String>,
    #[serde(default)]
    pub assert_f_regular: bool,
}

impl Descriptor {
    pub fn build(&self) -> Result<CartierModule> {
        let ring = RingSpec::new(self.p, &self.vars)?;
        CartierModule::parse(&ring, &self.twist, self.test_element.as_deref(), self.assert_f_regular)
    }
}

/// A `κ_g`-stable ideal together with how it was reached.
#[derive(Debug, Clone)]
pub struct StableImage {
    pub ideal: Ideal,
    pub stabilization_level: usize,
    pub certified: bool,
}

/// The stable member `M̲` of `R ⊇ κ_g(R) ⊇ κ_g^2(R) ⊇ …`.
pub fn underline(module: &CartierModule, budget: &Budget) -> Result<StableImage> {
    let mut current = Ideal::unit(module.ring());
    for level in 0..=budget.max_iterations {
        let next = module.kappa(&current, budget)?;
        if next.equals(&current, budget)? {
            return Ok(StableImage { ideal: current, stabilization_level: level, certified: true });
        }
        if !current.contains(&next, budget)? {
            return Err(Error::Invariant("Cartier images of R are not decreasing".into()));
        }
        current = next;
    }
    Err(Error::Budget(format!(
        "stable image not reached after {} steps",
        budget.max_iterations
    )))
}

/// F-pure model used for eigenspace computations; it is the stable image.
pub fn fpure_replacement(module: &CartierModule, budget: &Budget) -> Result<StableImage> {
    underline(module, budget)
}

/// `τ(M, f^0) = Σ_{e≥0} κ_g^e(c·M̲)`.
pub fn tau_zero(module: &CartierModule, budget: &Budget) -> Result<Ideal> {
    let ring = module.ring();
    if module.is_untwisted() {
        return Ok(Ideal::unit(ring));
    }
    let stable = underline(module, budget)?;
    match module.test_element() {
        Some(c) => tau_zero_with(module, c, &stable.ideal, budget),
        None if module.asserts_f_regular() => Ok(stable.ideal),
        None => Err(Error::MissingTestElement(format!(
            "twist {} needs a test element or an F-regularity assertion",
            module.twist()
        ))),
    }
}

fn tau_zero_with(
    module: &CartierModule,
    c: &Polynomial,
    stable: &Ideal,
    budget: &Budget,
) -> Result<Ideal> {
    let mut term = stable.product_poly(c)?.canonical(budget)?;
    let mut sum = term.clone();
    for _ in 0..budget.max_iterations {
        term = module.kappa(&term, budget)?;
        let next = sum.sum(&term)?.canonical(budget)?;
        if next.equals(&sum, budget)? {
            let image = module.kappa(&sum, budget)?;
            if !sum.contains(&image, budget)? {
                return Err(Error::Invariant("test module at 0 is not κ-stable".into()));
            }
            return Ok(sum);
        }
        sum = next;
    }
    Err(Error::Budget(format!(
        "test module at 0 not reached after {} steps",
        budget.max_iterations
    )))
}

/// Outcome of recomputing `τ(M, f^0)` with several candidate test elements.
#[derive(Debug, Clone)]
pub struct TestElementReport {
    pub reference: Ideal,
    pub trials: Vec<(Polynomial, Ideal)>,
    pub all_agree: bool,
}

/// Agreement is evidence for `c`; any disagreement proves a candidate wrong.
pub fn validate_test_element(
    module: &CartierModule,
    c: &Polynomial,
    trials: &[Polynomial],
    budget: &Budget,
) -> Result<TestElementReport> {
    if c.is_zero() {
        return Err(Error::Invalid("test element must be nonzero".into()));
    }
    let stable = underline(module, budget)?.ideal;
    let reference = tau_zero_with(module, c, &stable, budget)?;
    let mut all_agree = true;
    let mut results = Vec::with_capacity(trials.len());
    for t in trials {
        if t.is_zero() {
            return Err(Error::Invalid("trial test element must be nonzero".into()));
        }
        let value = tau_zero_with(module, t, &stable, budget)?;
        all_agree &= value.equals(&reference, budget)?;
        results.push((t.clone(), value));
    }
    Ok(TestElementReport { reference, trials: results, all_agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Budget {
        Budget::default()
    }

    fn same(i: &Ideal, gens: &[&str]) -> bool {
        i.equals(&Ideal::parse(i.ring(), gens).unwrap(), &b()).unwrap()
    }

    #[test]
    fn stable_image_examples() {
        let r = RingSpec::new(5, &["x", "y"]).unwrap();
        let s = underline(&CartierModule::canonical(&r), &b()).unwrap();
        assert!(s.ideal.is_unit(&b()).unwrap());
        assert_eq!(s.stabilization_level, 0);

        for p in [2u32, 3, 5] {
            let r = RingSpec::new(p, &["x"]).unwrap();
            let m = CartierModule::parse(&r, &format!("x^{}", p - 1), None, false).unwrap();
            assert!(underline(&m, &b()).unwrap().ideal.is_unit(&b()).unwrap());
            for n in 2..=4u32 {
                let m = CartierModule::parse(&r, &format!("x^{}", n * (p - 1)), None, false).unwrap();
                let s = fpure_replacement(&m, &b()).unwrap();
                assert!(same(&s.ideal, &[&format!("x^{}", n - 1)]), "p={p} n={n}");
                assert!(m.kappa(&s.ideal, &b()).unwrap().equals(&s.ideal, &b()).unwrap());
            }
        }
    }

    #[test]
    fn tau_zero_examples() {
        let r = RingSpec::new(3, &["x", "y"]).unwrap();
        assert!(tau_zero(&CartierModule::canonical(&r), &b()).unwrap().is_unit(&b()).unwrap());

        for p in [2u32, 3, 5, 7] {
            let r = RingSpec::new(p, &["x"]).unwrap();
            for n in 1..=3u32 {
                let m = CartierModule::parse(&r, &format!("x^{}", n * (p - 1)), Some("x"), false).unwrap();
                assert!(same(&tau_zero(&m, &b()).unwrap(), &[&format!("x^{n}")]));
            }
            let r2 = RingSpec::new(p, &["x", "y"]).unwrap();
            let m = CartierModule::parse(&r2, &format!("y^{}", p - 1), Some("y"), false).unwrap();
            assert!(same(&tau_zero(&m, &b()).unwrap(), &["y"]));
        }
    }

    #[test]
    fn tau_zero_needs_test_element() {
        let r = RingSpec::new(3, &["x"]).unwrap();
        let m = CartierModule::parse(&r, "x^2", None, false).unwrap();
        assert!(matches!(tau_zero(&m, &b()), Err(Error::MissingTestElement(_))));
        let asserted = m.asserting_f_regular(true);
        assert!(tau_zero(&asserted, &b()).unwrap().is_unit(&b()).unwrap());
    }

    #[test]
    fn test_element_validation() {
        for p in [2u32, 3, 5] {
            let r = RingSpec::new(p, &["x"]).unwrap();
            let m = CartierModule::parse(&r, &format!("x^{}", p - 1), None, false).unwrap();
            let x = Polynomial::parse("x", &r).unwrap();
            let x2 = Polynomial::parse("x^2", &r).unwrap();
            let rep = validate_test_element(&m, &x, &[x.clone(), x2], &b()).unwrap();
            assert!(rep.all_agree);
            assert!(same(&rep.reference, &["x"]));
            assert!(validate_test_element(&m, &Polynomial::zero(&r), &[], &b()).is_err());
        }
        let r = RingSpec::new(5, &["x", "y"]).unwrap();
        let m = CartierModule::canonical(&r);
        let trials: Vec<_> = ["x", "y", "x + y"].iter().map(|t| Polynomial::parse(t, &r).unwrap()).collect();
        let rep = validate_test_element(&m, &trials[0], &trials, &b()).unwrap();
        assert!(rep.all_agree && rep.reference.is_unit(&b()).unwrap());
    }

    #[test]
    fn descriptor_round_trip() {
        let d = Descriptor {
            p: 7,
            vars: vec!["x".into(), "y".into()],
            twist: "y^6".into(),
            test_element: Some("y".into()),
            assert_f_regular: false,
        };
        let m = d.build().unwrap();
        assert_eq!(m.descriptor(), d);
        let json = serde_json::to_string(&d).unwrap();
        let back: Descriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
