//! Level-`e` Bernstein-Sato roots from jumps of Cartier images.
//!
//! `m ∈ Γ^e` exactly when `κ_g^e(f^m M̲) ≠ κ_g^e(f^{m+1} M̲)`; the
//! corresponding root is `m/p^e`.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::cartmod::{fpure_replacement, CartierModule};
use crate::error::{Error, Result};
use crate::frobenius::{cartier_image, cartier_image_pow, FrobeniusLevel};
use crate::ideals::Ideal;
use crate::ring::{base_p_digits, ExactRational, Polynomial};
use crate::sigma::SigmaFiltration;

#[derive(Debug, Clone)]
pub struct BsReport {
    pub e: u32,
    pub gamma: Vec<u64>,
    /// Base-`p` digits `(i_1, …, i_e)` of each `m`, least significant first.
    pub digits: Vec<Vec<u32>>,
    pub roots: Vec<ExactRational>,
    /// Coefficients of `Π (s - r)`, constant term first.
    pub coefficients: Vec<ExactRational>,
    pub fpure_model: Ideal,
}

#[derive(Debug, Clone)]
pub struct LastTheoEntry {
    pub m: u64,
    pub root: ExactRational,
    pub lambda: ExactRational,
    /// Whether `λ(p^{2e}-1)` is again in `Γ^{2e}`, i.e. the zero survives
    /// refinement. Levels beyond the budget count as persistent.
    pub persistent: bool,
    pub nontrivial: bool,
}

#[derive(Debug, Clone)]
pub struct LastTheoReport {
    pub e: u32,
    pub entries: Vec<LastTheoEntry>,
    pub violations: usize,
}

fn check_inputs(module: &CartierModule, f: &Polynomial, e: u32, budget: &Budget) -> Result<FrobeniusLevel> {
    if f.ring() != module.ring() {
        return Err(Error::RingMismatch);
    }
    if f.is_zero() {
        return Err(Error::Invalid("f must be nonzero".into()));
    }
    FrobeniusLevel::new(e, module.ring(), budget)
}

/// `Γ^e`, the `m ∈ [0, p^e - 1]` where consecutive Cartier images differ.
pub fn gamma_set(module: &CartierModule, f: &Polynomial, e: u32, budget: &Budget) -> Result<Vec<u64>> {
    let level = check_inputs(module, f, e, budget)?;
    let model = fpure_replacement(module, budget)?.ideal;
    let q = level.q() as u64;
    let images = (0..=q)
        .into_par_iter()
        .map(|m| cartier_image_pow(module, f, &BigUint::from(m), &model, e, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut gamma = Vec::new();
    for m in 0..q as usize {
        if !images[m].equals(&images[m + 1], budget)? {
            gamma.push(m as u64);
        }
    }
    Ok(gamma)
}

/// `Γ^e` from literal images `(g^{ν_e} f^m M̲)^{[1/p^e]}` with incremental
/// powers `f^{m+1} = f^m · f`.
pub fn gamma_set_direct(module: &CartierModule, f: &Polynomial, e: u32, budget: &Budget) -> Result<Vec<u64>> {
    let level = check_inputs(module, f, e, budget)?;
    let model = fpure_replacement(module, budget)?.ideal;
    let mut power = Polynomial::one(module.ring());
    let mut previous = cartier_image(module, &power, &model, level, budget)?;
    let mut gamma = Vec::new();
    for m in 0..level.q() as u64 {
        power = power.try_mul(f, budget)?;
        let next = cartier_image(module, &power, &model, level, budget)?;
        if !previous.equals(&next, budget)? {
            gamma.push(m);
        }
        previous = next;
    }
    Ok(gamma)
}

pub fn bs_polynomial(module: &CartierModule, f: &Polynomial, e: u32, budget: &Budget) -> Result<BsReport> {
    let gamma = gamma_set(module, f, e, budget)?;
    let p = module.ring().p();
    let q = (p as u64).pow(e);
    let digits = gamma
        .iter()
        .map(|&m| {
            let mut d = base_p_digits(&BigUint::from(m), p);
            d.resize(e as usize, 0);
            d
        })
        .collect();
    let roots: Vec<ExactRational> =
        gamma.iter().map(|&m| ExactRational::new(m, q).expect("positive denominator")).collect();
    if roots.iter().any(|r| r.is_negative() || r >= &ExactRational::one()) {
        return Err(Error::Invariant("Bernstein-Sato root outside [0, 1)".into()));
    }
    Ok(BsReport {
        e,
        coefficients: expand_roots(&roots),
        gamma,
        digits,
        roots,
        fpure_model: fpure_replacement(module, budget)?.ideal,
    })
}

/// Coefficients of `Π (s - r)`, constant term first.
pub fn expand_roots(roots: &[ExactRational]) -> Vec<ExactRational> {
    let mut coeffs = vec![ExactRational::one()];
    for r in roots {
        let mut next = vec![ExactRational::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone();
            next[k] = next[k].clone() - c.clone() * r.clone();
        }
        coeffs = next;
    }
    coeffs
}

/// Each level-`e` root lies within `1/p` of some level-`(e-1)` root.
pub fn levels_compatible(coarse: &[ExactRational], fine: &[ExactRational], p: u32) -> bool {
    let gap = ExactRational::new(1, p).expect("p > 0");
    coarse.iter().all(|r| fine.iter().any(|s| (s.clone() - r.clone()).abs() < gap))
}

/// For every `m ∈ Γ^e`, `λ = m/(p^e - 1)` must have a nonzero `Gr_σ^λ`.
///
/// The implication only concerns zeros present for all large levels, so an
/// `m` whose multiple `m(p^e+1)` drops out of `Γ^{2e}` is reported but not
/// counted as a violation.
pub fn lasttheo_check(module: &CartierModule, f: &Polynomial, e: u32, budget: &Budget) -> Result<LastTheoReport> {
    let gamma = gamma_set(module, f, e, budget)?;
    let q = (module.ring().p() as u64).pow(e);
    let sigma = SigmaFiltration::new(module.clone(), f.clone(), budget.clone())?;
    let mut entries = Vec::with_capacity(gamma.len());
    for &m in &gamma {
        let lambda = ExactRational::new(m, q - 1)?;
        let nontrivial = sigma.gr_sigma(&lambda)?.nontrivial;
        let persistent = match check_inputs(module, f, 2 * e, budget) {
            Ok(_) => in_gamma(module, f, 2 * e, m * (q + 1), budget)?,
            Err(Error::Config(_)) => true,
            Err(err) => return Err(err),
        };
        entries.push(LastTheoEntry { m, root: ExactRational::new(m, q)?, lambda, persistent, nontrivial });
    }
    let violations = entries.iter().filter(|x| x.persistent && !x.nontrivial).count();
    Ok(LastTheoReport { e, entries, violations })
}

/// `Γ^e` membership test for a single `m`, used for spot checks.
pub fn in_gamma(module: &CartierModule, f: &Polynomial, e: u32, m: u64, budget: &Budget) -> Result<bool> {
    check_inputs(module, f, e, budget)?;
    let model = fpure_replacement(module, budget)?.ideal;
    let a = cartier_image_pow(module, f, &BigUint::from(m), &model, e, budget)?;
    let b = cartier_image_pow(module, f, &(BigUint::from(m) + BigUint::one()), &model, e, budget)?;
    Ok(!a.equals(&b, budget)?)
}
