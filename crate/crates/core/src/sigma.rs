//! Non-F-pure submodules `σ(M, f^λ)` and their graded pieces.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cartmod::{underline, CartierModule};
use crate::error::{Error, Result};
use crate::filtration::{iterate_nilpotence, NilpotenceVerdict, Prediction, TestModuleFiltration, Verdict};
use crate::frobenius::cartier_image_pow;
use crate::ideals::Ideal;
use crate::ring::{biguint, ceil_mul, multiplicative_order, pow_big, ExactRational, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaRoute {
    /// Stable value of `κ_g^a f^{λ(p^a-1)}` applied to `R`.
    Direct,
    /// Limit of direct values from the right.
    RightLimit,
}

#[derive(Debug, Clone)]
pub struct SigmaResult {
    pub lambda: ExactRational,
    pub ideal: Ideal,
    pub route: SigmaRoute,
    /// The level `a` of the structure map that was iterated.
    pub level: u32,
    /// Applications of the structure map before the value repeated.
    pub chain_length: usize,
    /// The point where the direct route was run (equal to `lambda` when direct).
    pub evaluated_at: ExactRational,
}

#[derive(Debug, Clone)]
pub struct GrSigma {
    pub at: SigmaResult,
    pub right: SigmaResult,
    pub nontrivial: bool,
}

#[derive(Debug, Clone)]
pub struct VariantsReport {
    pub sigma: Ideal,
    pub sigma_n: Ideal,
    pub sigma_prime: Ideal,
    pub n: u32,
    pub degree_cap: u32,
    pub sigma_n_equal: bool,
    pub sigma_prime_equal: bool,
}

impl VariantsReport {
    pub fn all_equal(&self) -> bool {
        self.sigma_n_equal && self.sigma_prime_equal
    }
}

#[derive(Debug, Clone)]
pub struct SigmaTauReport {
    pub lambda: ExactRational,
    pub f_regular: bool,
    pub sigma_right: Ideal,
    pub tau_at: Ideal,
    /// `σ(λ + ε) = τ(λ)`.
    pub regular_identity: bool,
    /// `σ(λ) = τ(λ - ε)`, checked when the denominator is prime to `p` and `λ > 0`.
    pub coprime_identity: Option<bool>,
    /// The first identity fails.
    pub breakdown: bool,
}

/// σ-filtration of `f` on a Cartier module, with memoized direct values.
pub struct SigmaFiltration {
    module: CartierModule,
    f: Polynomial,
    budget: Budget,
    direct: Mutex<HashMap<ExactRational, SigmaResult>>,
}

impl SigmaFiltration {
    pub fn new(module: CartierModule, f: Polynomial, budget: Budget) -> Result<Self> {
        if f.ring() != module.ring() {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Err(Error::Invalid("f must be nonzero".into()));
        }
        Ok(SigmaFiltration { module, f, budget, direct: Mutex::new(HashMap::new()) })
    }

    pub fn module(&self) -> &CartierModule {
        &self.module
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    fn p(&self) -> u32 {
        self.module.ring().p()
    }

    fn image(&self, steps: u32, m: &BigUint, ideal: &Ideal) -> Result<Ideal> {
        cartier_image_pow(&self.module, &self.f, m, ideal, steps, &self.budget)?.canonical(&self.budget)
    }

    /// `σ(M, f^λ)`.
    pub fn sigma(&self, lambda: &ExactRational) -> Result<SigmaResult> {
        if lambda.is_negative() {
            return Err(Error::Invalid(format!("λ = {lambda} is negative")));
        }
        if lambda.denominator_divisible_by(self.p()) {
            let mut r = self.right_limit(lambda)?;
            r.lambda = lambda.clone();
            Ok(r)
        } else {
            self.sigma_direct(lambda)
        }
    }

    /// Direct route; the denominator of `λ` must be prime to `p`.
    pub fn sigma_direct(&self, lambda: &ExactRational) -> Result<SigmaResult> {
        if let Some(v) = self.direct.lock().unwrap().get(lambda) {
            return Ok(v.clone());
        }
        let p = self.p();
        if lambda.denominator_divisible_by(p) {
            return Err(Error::Invalid(format!("denominator of {lambda} is divisible by {p}")));
        }
        if lambda.is_zero() {
            let s = underline(&self.module, &self.budget)?;
            let result = SigmaResult {
                lambda: lambda.clone(),
                ideal: s.ideal,
                route: SigmaRoute::Direct,
                level: 1,
                chain_length: s.stabilization_level,
                evaluated_at: lambda.clone(),
            };
            return Ok(result);
        }
        let a = multiplicative_order(p, lambda.denom(), self.budget.max_order_modulus)?;
        let n = exact_multiple(lambda, &(pow_big(p, a) - 1));
        let (ideal, chain_length) = self.stable_chain(a, &n, Ideal::unit(self.module.ring()))?;
        let result = SigmaResult {
            lambda: lambda.clone(),
            ideal,
            route: SigmaRoute::Direct,
            level: a,
            chain_length,
            evaluated_at: lambda.clone(),
        };
        self.direct.lock().unwrap().insert(lambda.clone(), result.clone());
        Ok(result)
    }

    /// Iterates `X ↦ κ_g^a(f^n X)` from `start` until it repeats.
    fn stable_chain(&self, a: u32, n: &BigUint, start: Ideal) -> Result<(Ideal, usize)> {
        let mut current = start;
        for k in 0..=self.budget.max_iterations {
            let next = self.image(a, n, &current)?;
            if next.equals(&current, &self.budget)? {
                return Ok((current, k));
            }
            if !current.contains(&next, &self.budget)? {
                return Err(Error::Invariant("σ chain is not decreasing".into()));
            }
            current = next;
        }
        Err(Error::Budget(format!("σ chain longer than {}", self.budget.max_iterations)))
    }

    /// `σ(M, f^{λ+ε})`, the common value of `σ` just to the right of `λ`.
    ///
    /// Probes are `(⌊λ(p^b-1)⌋ + 1)/(p^b - 1)`, the smallest grid point of
    /// denominator `p^b - 1` beyond `λ`; `b` runs through `b_0, 2b_0, 4b_0, …`,
    /// so the probes decrease, and the first repeated value is returned.
    pub fn right_limit(&self, lambda: &ExactRational) -> Result<SigmaResult> {
        let p = self.p();
        let b0 = if lambda.denominator_divisible_by(p) {
            1
        } else {
            multiplicative_order(p, lambda.denom(), self.budget.max_order_modulus)?
        };
        self.right_limit_from(lambda, b0)
    }

    /// Right limit with probe levels `b_0 · 2^k`.
    pub fn right_limit_from(&self, lambda: &ExactRational, b0: u32) -> Result<SigmaResult> {
        if b0 == 0 {
            return Err(Error::Invalid("probe level must be positive".into()));
        }
        let p = self.p();
        let mut previous: Option<SigmaResult> = None;
        let mut b = b0;
        for _ in 0..self.budget.max_probes.max(2) {
            let den = pow_big(p, b) - 1;
            let scaled: BigInt = lambda.numer() * &den;
            let floor = scaled.div_floor(lambda.denom());
            let probe = ExactRational::new(floor + 1, den)?;
            let value = self.sigma_direct(&probe)?;
            if let Some(prev) = &previous {
                if prev.ideal.equals(&value.ideal, &self.budget)? {
                    return Ok(SigmaResult {
                        lambda: lambda.clone(),
                        route: SigmaRoute::RightLimit,
                        ..value
                    });
                }
            }
            previous = Some(value);
            b = b
                .checked_mul(2)
                .filter(|&b| b <= self.budget.max_iterated_level)
                .ok_or_else(|| Error::Budget(format!("right-limit probes at λ = {lambda} exceed the level cap")))?;
        }
        Err(Error::NoStabilization(format!("right-limit probes at λ = {lambda}")))
    }

    /// `Gr_σ^λ = σ(λ)/σ(λ + ε)`.
    pub fn gr_sigma(&self, lambda: &ExactRational) -> Result<GrSigma> {
        let at = self.sigma(lambda)?;
        let right = self.right_limit(lambda)?;
        if !at.ideal.contains(&right.ideal, &self.budget)? {
            return Err(Error::Invariant(format!("σ is not decreasing at λ = {lambda}")));
        }
        let nontrivial = !at.ideal.equals(&right.ideal, &self.budget)?;
        Ok(GrSigma { at, right, nontrivial })
    }

    /// Truncated algebra iterations `σ_n` and the single-degree variant `σ'`.
    pub fn variants_check(&self, lambda: &ExactRational, n: u32, degree_cap: u32) -> Result<VariantsReport> {
        let p = self.p();
        if lambda.denominator_divisible_by(p) {
            return Err(Error::Invalid(format!("denominator of {lambda} must be prime to {p}")));
        }
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        let sigma = self.sigma_direct(lambda)?.ideal;
        let a = if lambda.is_zero() { 1 } else { multiplicative_order(p, lambda.denom(), self.budget.max_order_modulus)? };
        let big_e = a * n.div_ceil(a);
        if degree_cap < big_e {
            return Err(Error::Config(format!(
                "degree cap {degree_cap} must reach {big_e}, a multiple of {a} that is at least {n}"
            )));
        }
        let degrees: Vec<u32> = (n..=degree_cap).collect();
        let sigma_n = self.truncated_iteration(lambda, &degrees, &sigma)?;
        let sigma_prime = self.truncated_iteration(lambda, &[big_e, 2 * big_e], &sigma)?;
        Ok(VariantsReport {
            sigma_n_equal: sigma_n.equals(&sigma, &self.budget)?,
            sigma_prime_equal: sigma_prime.equals(&sigma, &self.budget)?,
            sigma,
            sigma_n,
            sigma_prime,
            n,
            degree_cap,
        })
    }

    /// `X ↦ Σ_{e ∈ degrees} κ_g^e(f^{⌈λ(p^e-1)⌉} X)` from `R` until stable;
    /// every iterate must contain `floor`.
    fn truncated_iteration(&self, lambda: &ExactRational, degrees: &[u32], floor: &Ideal) -> Result<Ideal> {
        let p = self.p();
        let mut current = Ideal::unit(self.module.ring());
        for _ in 0..=self.budget.max_iterations {
            let mut next = Ideal::zero(self.module.ring());
            for &e in degrees {
                let m = biguint(&ceil_mul(lambda, &(pow_big(p, e) - 1)));
                next = next.sum(&self.image(e, &m, &current)?)?;
            }
            let next = next.canonical(&self.budget)?;
            if !next.contains(floor, &self.budget)? || !current.contains(&next, &self.budget)? {
                return Err(Error::Invariant("truncated σ iterate left the sandwich".into()));
            }
            if next.equals(&current, &self.budget)? {
                return Ok(current);
            }
            current = next;
        }
        Err(Error::Budget("truncated σ iteration did not settle".into()))
    }

    /// Nilpotence of `κ_g^a f^{⌈λ(p^a-1)⌉}` on `Gr_σ^λ`.
    pub fn sigma_nilpotence(&self, lambda: &ExactRational, a: u32, k_max: usize) -> Result<NilpotenceVerdict> {
        if a == 0 {
            return Err(Error::Invalid("level must be positive".into()));
        }
        let p = self.p();
        let m = pow_big(p, a) - 1;
        let a_e = ceil_mul(lambda, &m);
        let gr = self.gr_sigma(lambda)?;
        if !gr.nontrivial {
            return Ok(NilpotenceVerdict {
                lambda: lambda.clone(),
                e: a,
                a_e,
                verdict: Verdict::Nilpotent(0),
                predicted: Prediction::Nilpotent,
                agree: true,
                nontrivial_piece: false,
            });
        }
        let predicted =
            if lambda.is_integer_mul(&m) { Prediction::NonNilpotent } else { Prediction::Nilpotent };
        let exponent = biguint(&a_e);
        let bottom = gr.right.ideal.clone();
        let verdict = iterate_nilpotence(&gr.at.ideal, &bottom, k_max, &self.budget, |j| {
            self.image(a, &exponent, j)?.sum(&bottom)?.canonical(&self.budget)
        })?;
        Ok(NilpotenceVerdict {
            lambda: lambda.clone(),
            e: a,
            a_e,
            verdict,
            predicted,
            agree: verdict.kind() == predicted,
            nontrivial_piece: true,
        })
    }

    /// Compares `σ` with the test module filtration `tau`.
    pub fn sigma_tau_comparison(&self, tau: &TestModuleFiltration, lambda: &ExactRational) -> Result<SigmaTauReport> {
        if tau.module() != &self.module || tau.f() != &self.f {
            return Err(Error::Invalid("σ and τ filtrations describe different data".into()));
        }
        let sigma_right = self.right_limit(lambda)?.ideal;
        let tau_at = tau.tau(lambda)?;
        let regular_identity = sigma_right.equals(&tau_at, &self.budget)?;
        let coprime_identity = if lambda.is_positive() && !lambda.denominator_divisible_by(self.p()) {
            let s = self.sigma_direct(lambda)?.ideal;
            Some(s.equals(&tau.tau_left(lambda)?, &self.budget)?)
        } else {
            None
        };
        Ok(SigmaTauReport {
            lambda: lambda.clone(),
            f_regular: self.module.is_f_regular(),
            sigma_right,
            tau_at,
            regular_identity,
            coprime_identity,
            breakdown: !regular_identity,
        })
    }
}

fn exact_multiple(lambda: &ExactRational, m: &BigInt) -> BigUint {
    let prod = lambda.numer() * m;
    debug_assert!((&prod % lambda.denom()).is_zero());
    biguint(&(prod / lambda.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn sigma_of(p: u32, vars: &[&str], twist: &str, f: &str) -> SigmaFiltration {
        let ring = RingSpec::new(p, vars).unwrap();
        let m = CartierModule::parse(&ring, twist, None, false).unwrap();
        SigmaFiltration::new(m, Polynomial::parse(f, &ring).unwrap(), Budget::default()).unwrap()
    }

    fn same(i: &Ideal, gens: &[&str]) -> bool {
        i.equals(&Ideal::parse(i.ring(), gens).unwrap(), &Budget::default()).unwrap()
    }

    #[test]
    fn half_threshold_in_one_variable() {
        for p in [3u32, 5, 7] {
            let s = sigma_of(p, &["x"], &format!("x^{}", p - 1), "x^2");
            assert!(same(&s.sigma(&r("1/2")).unwrap().ideal, &["x"]), "p={p}");
            let beyond = r("1/2") + ExactRational::new(1, p * p - 1).unwrap();
            assert!(same(&s.sigma(&beyond).unwrap().ideal, &["x^2"]), "p={p}");
            assert!(s.sigma(&r("0")).unwrap().ideal.is_unit(s.budget()).unwrap());
        }
    }

    #[test]
    fn characteristic_two_example() {
        let s = sigma_of(2, &["x"], "x", "x^2");
        let v = s.sigma(&r("1/2")).unwrap();
        assert_eq!(v.route, SigmaRoute::RightLimit);
        assert!(Ideal::parse(v.ideal.ring(), &["x^2"]).unwrap().contains(&v.ideal, s.budget()).unwrap());
        let nil = s.sigma_nilpotence(&r("1/2"), 1, 16).unwrap();
        assert!(nil.agree);
    }

    #[test]
    fn converse_example_graded_piece() {
        for p in [2u32, 3, 5] {
            let s = sigma_of(p, &["x"], &format!("x^{}", p - 1), "x");
            let gr = s.gr_sigma(&r("1")).unwrap();
            assert!(same(&gr.at.ideal, &["x"]));
            assert!(same(&gr.right.ideal, &["x^2"]));
            assert!(gr.nontrivial);
            let v = s.sigma_nilpotence(&r("1"), 1, 16).unwrap();
            assert_eq!(v.verdict, Verdict::NonNilpotent);
            assert!(v.agree);
        }
    }

    #[test]
    fn variants_agree() {
        let s = sigma_of(5, &["x"], "x^4", "x^2");
        let rep = s.variants_check(&r("1/2"), 3, 6).unwrap();
        assert!(rep.all_equal());
        assert!(same(&rep.sigma, &["x"]));
        let cusp = sigma_of(7, &["x", "y"], "1", "x^2 + y^3");
        assert!(cusp.variants_check(&r("5/6"), 2, 3).unwrap().all_equal());
        assert!(cusp.variants_check(&r("0"), 1, 2).unwrap().all_equal());
    }

    #[test]
    fn right_limit_agrees_with_direct_route_between_jumps() {
        let s = sigma_of(7, &["x", "y"], "1", "x^2 + y^3");
        let direct = s.sigma_direct(&r("1/2")).unwrap();
        let limit = s.right_limit(&r("1/2")).unwrap();
        assert!(direct.ideal.equals(&limit.ideal, s.budget()).unwrap());
    }
}
