//! The test module filtration `λ ↦ τ(M, f^λ)`.
//!
//! Everything is evaluated through the identity `κ_g^e(f^m T_0) = τ(m/p^e)`
//! with `T_0 = τ(M, f^0)`, so grid values are exact. Values at an arbitrary
//! rational come from a fixed-point iteration that terminates exactly at
//! `τ(λ)` (or at the left limit), and jumps are located by refining the grid
//! inside every interval where the grid values drop.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cartmod::{tau_zero, CartierModule};
use crate::error::{Error, Result};
use crate::frobenius::cartier_image_pow;
use crate::ideals::Ideal;
use crate::ring::{biguint, ceil_mul, multiplicative_order, pow_big, ExactRational, Polynomial};

/// Largest right end of a jump-search window.
pub const MAX_WINDOW: i64 = 8;
/// Largest admissible value of either candidate-denominator bound.
pub const MAX_DENOMINATOR_BOUND: u32 = 12;
/// Candidate count below which an interval is tested directly.
const DIRECT_CANDIDATES: usize = 16;

/// Level-wise evaluation request `J_e = κ_g^e(f^{⌈λp^e⌉} T_0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauRequest {
    pub lambda: ExactRational,
    pub e_start: u32,
    pub e_cap: u32,
    pub consecutive_stable: u32,
}

impl TauRequest {
    pub fn new(lambda: ExactRational) -> Self {
        TauRequest { lambda, e_start: 1, e_cap: 12, consecutive_stable: 2 }
    }
}

/// Result of [`TestModuleFiltration::tau_by_levels`].
#[derive(Debug, Clone)]
pub struct LevelTau {
    pub ideal: Ideal,
    pub stabilization_level: u32,
    pub levels_tried: u32,
}

/// Candidate denominators `p^i (p^j - 1)` with `i ≤ a`, `1 ≤ j ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateBounds {
    pub a: u32,
    pub b: u32,
}

impl Default for CandidateBounds {
    fn default() -> Self {
        CandidateBounds { a: 4, b: 6 }
    }
}

#[derive(Debug, Clone)]
pub struct Jump {
    pub lambda: ExactRational,
    pub tau: Ideal,
    pub tau_left: Ideal,
}

#[derive(Debug, Clone)]
pub struct JumpReport {
    pub jumps: Vec<Jump>,
    pub window: (ExactRational, ExactRational),
    pub bounds: CandidateBounds,
    /// Every drop of the filtration inside the window was matched by candidates.
    pub complete: bool,
    pub warnings: Vec<String>,
    /// Finest grid level that was needed.
    pub max_level: u32,
}

impl JumpReport {
    pub fn lambdas(&self) -> Vec<ExactRational> {
        self.jumps.iter().map(|j| j.lambda.clone()).collect()
    }
}

/// `Gr^λ = τ(λ - ε) / τ(λ)`.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub lambda: ExactRational,
    pub tau_left: Ideal,
    pub tau_at: Ideal,
    pub is_jump: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Absorbed into the lower ideal after `k` applications.
    Nilpotent(usize),
    NonNilpotent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prediction {
    Nilpotent,
    NonNilpotent,
}

impl Verdict {
    pub fn kind(&self) -> Prediction {
        match self {
            Verdict::Nilpotent(_) => Prediction::Nilpotent,
            Verdict::NonNilpotent => Prediction::NonNilpotent,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NilpotenceVerdict {
    pub lambda: ExactRational,
    pub e: u32,
    pub a_e: BigInt,
    pub verdict: Verdict,
    pub predicted: Prediction,
    pub agree: bool,
    /// Whether the graded piece was nonzero.
    pub nontrivial_piece: bool,
}

impl NilpotenceVerdict {
    /// Turns a disagreement with the predicted verdict into an error.
    pub fn ensure_agreement(self) -> Result<Self> {
        if self.agree {
            Ok(self)
        } else {
            Err(Error::Invariant(format!(
                "nilpotence at λ={} e={} a={}: computed {:?}, predicted {:?}",
                self.lambda, self.e, self.a_e, self.verdict, self.predicted
            )))
        }
    }
}

/// `a_e ≥ ⌈λ(p^e - 1)⌉`: the map `κ^e f^{a_e}` descends to `Gr^λ`.
pub fn validate_a_e(lambda: &ExactRational, p: u32, e: u32, a_e: &BigInt) -> bool {
    *a_e >= ceil_mul(lambda, &(pow_big(p, e) - 1))
}

/// Nonnilpotent exactly when `a_e = λ(p^e - 1)` is an integer.
pub fn predicted_verdict(lambda: &ExactRational, p: u32, e: u32, a_e: &BigInt) -> Prediction {
    let m = pow_big(p, e) - 1;
    if lambda.is_integer_mul(&m) && (lambda.numer() * &m) / lambda.denom() == *a_e {
        Prediction::NonNilpotent
    } else {
        Prediction::Nilpotent
    }
}

/// Iterates `J_{k+1} = step(J_k)`, which must already include `bottom`,
/// starting from `top`.
pub(crate) fn iterate_nilpotence(
    top: &Ideal,
    bottom: &Ideal,
    k_max: usize,
    budget: &Budget,
    step: impl Fn(&Ideal) -> Result<Ideal>,
) -> Result<Verdict> {
    let mut current = top.clone();
    for k in 0..=k_max {
        if bottom.contains(&current, budget)? {
            return Ok(Verdict::Nilpotent(k));
        }
        let next = step(&current)?;
        if next.equals(&current, budget)? {
            return Ok(Verdict::NonNilpotent);
        }
        current = next;
    }
    Err(Error::NoStabilization(format!("nilpotence undecided after {k_max} steps")))
}

/// Test module filtration of `f` on a Cartier module, with memoized values.
pub struct TestModuleFiltration {
    module: CartierModule,
    f: Polynomial,
    budget: Budget,
    base: Ideal,
    grid: Mutex<HashMap<(u32, BigUint), Ideal>>,
    exact: Mutex<HashMap<ExactRational, Ideal>>,
    left: Mutex<HashMap<ExactRational, Ideal>>,
}

impl TestModuleFiltration {
    pub fn new(module: CartierModule, f: Polynomial, budget: Budget) -> Result<Self> {
        if f.ring() != module.ring() {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Err(Error::Invalid("f must be nonzero".into()));
        }
        let base = tau_zero(&module, &budget)?;
        Ok(TestModuleFiltration {
            module,
            f,
            budget,
            base,
            grid: Mutex::new(HashMap::new()),
            exact: Mutex::new(HashMap::new()),
            left: Mutex::new(HashMap::new()),
        })
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

    /// `τ(M, f^0)`.
    pub fn base(&self) -> &Ideal {
        &self.base
    }

    fn p(&self) -> u32 {
        self.module.ring().p()
    }

    /// `κ_g^steps(f^m · I)`.
    pub fn power_image(&self, steps: u32, m: &BigUint, ideal: &Ideal) -> Result<Ideal> {
        cartier_image_pow(&self.module, &self.f, m, ideal, steps, &self.budget)?.canonical(&self.budget)
    }

    /// `τ(m / p^e)`, read off the grid.
    pub fn grid(&self, e: u32, m: &BigUint) -> Result<Ideal> {
        let key = (e, m.clone());
        if let Some(v) = self.grid.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let value = self.power_image(e, m, &self.base)?;
        self.grid.lock().unwrap().insert(key, value.clone());
        Ok(value)
    }

    /// `τ(M, f^λ)`, exact.
    pub fn tau(&self, lambda: &ExactRational) -> Result<Ideal> {
        if lambda.is_negative() {
            return Err(Error::Invalid(format!("λ = {lambda} is negative")));
        }
        if lambda.is_zero() {
            return Ok(self.base.clone());
        }
        if let Some(v) = self.exact.lock().unwrap().get(lambda) {
            return Ok(v.clone());
        }
        let parts = Decomposition::new(lambda, self.p(), &self.budget)?;
        let inner = if parts.nu == ExactRational::one() {
            self.power_image(0, &BigUint::one(), &self.base)?
        } else {
            // X_k = τ(ν + (1 - ν)/p^{kb}) increases to τ(ν)
            let mut x = self.power_image(0, &BigUint::one(), &self.base)?;
            let mut settled = false;
            for _ in 0..self.budget.max_iterations {
                let next = self.power_image(parts.b, &parts.n, &x)?;
                if next.equals(&x, &self.budget)? {
                    settled = true;
                    break;
                }
                if !next.contains(&x, &self.budget)? {
                    return Err(Error::Invariant("ascending chain for τ decreased".into()));
                }
                x = next;
            }
            if !settled {
                return Err(Error::NoStabilization(format!("τ at λ = {lambda}")));
            }
            x
        };
        let value = self.assemble(&parts, inner)?;
        self.exact.lock().unwrap().insert(lambda.clone(), value.clone());
        Ok(value)
    }

    /// `f^{outer} κ_g^{shift}(f^{carry} X)`.
    fn assemble(&self, parts: &Decomposition, inner: Ideal) -> Result<Ideal> {
        let mut value = self.power_image(parts.shift, &parts.carry, &inner)?;
        if !parts.outer.is_zero() {
            value = self.power_image(0, &parts.outer, &value)?;
        }
        Ok(value)
    }

    /// Level route: `J_e = κ_g^e(f^{⌈λp^e⌉} T_0)` until `consecutive_stable`
    /// successive levels agree.
    pub fn tau_by_levels(&self, req: &TauRequest) -> Result<LevelTau> {
        if req.lambda.is_negative() {
            return Err(Error::Invalid(format!("λ = {} is negative", req.lambda)));
        }
        if req.e_start == 0 || req.e_start > req.e_cap || req.e_cap > self.budget.e_max {
            return Err(Error::Config(format!(
                "levels {}..={} must satisfy 1 ≤ e_start ≤ e_cap ≤ {}",
                req.e_start, req.e_cap, self.budget.e_max
            )));
        }
        let need = req.consecutive_stable.max(1);
        let p = self.p();
        let mut previous: Option<Ideal> = None;
        let mut run = 1;
        for e in req.e_start..=req.e_cap {
            let m = biguint(&ceil_mul(&req.lambda, &pow_big(p, e)));
            let value = self.grid(e, &m)?;
            if let Some(prev) = &previous {
                if !value.contains(prev, &self.budget)? {
                    return Err(Error::Invariant(format!("level {e} image is not increasing")));
                }
                if value.equals(prev, &self.budget)? {
                    run += 1;
                } else {
                    run = 1;
                }
            }
            if run >= need {
                return Ok(LevelTau {
                    ideal: value,
                    stabilization_level: e + 1 - need,
                    levels_tried: e - req.e_start + 1,
                });
            }
            previous = Some(value);
        }
        let last = previous.map(|i| format!("{i}")).unwrap_or_default();
        Err(Error::NoStabilization(format!(
            "τ at λ = {} did not stabilize by level {} (last value {last})",
            req.lambda, req.e_cap
        )))
    }

    /// `τ(M, f^{λ-ε})`, exact.
    pub fn tau_left(&self, lambda: &ExactRational) -> Result<Ideal> {
        if !lambda.is_positive() {
            return Err(Error::Invalid(format!("left limit needs λ > 0, got {lambda}")));
        }
        if let Some(v) = self.left.lock().unwrap().get(lambda) {
            return Ok(v.clone());
        }
        let parts = Decomposition::new(lambda, self.p(), &self.budget)?;
        // φ^k(T_0) = τ(ν - ν/p^{kb}) decreases to τ(ν - ε)
        let mut y = self.base.clone();
        let mut settled = false;
        for _ in 0..self.budget.max_iterations {
            let next = self.power_image(parts.b, &parts.n, &y)?;
            if next.equals(&y, &self.budget)? {
                settled = true;
                break;
            }
            y = next;
        }
        if !settled {
            return Err(Error::NoStabilization(format!("left limit at λ = {lambda}")));
        }
        let value = self.assemble(&parts, y)?;
        self.left.lock().unwrap().insert(lambda.clone(), value.clone());
        Ok(value)
    }

    /// Left limit by probing `(⌈λ(p^j-1)⌉ - 1)/(p^j - 1)` for `j = 1, 2, 4, …`
    /// until two probes agree.
    pub fn tau_left_probed(&self, lambda: &ExactRational) -> Result<(Ideal, ExactRational)> {
        if !lambda.is_positive() {
            return Err(Error::Invalid(format!("left limit needs λ > 0, got {lambda}")));
        }
        let p = self.p();
        let mut previous: Option<Ideal> = None;
        let mut j = 1u32;
        for _ in 0..self.budget.max_probes.max(2) {
            let den = pow_big(p, j) - 1;
            let probe = ExactRational::new(ceil_mul(lambda, &den) - 1, den)?;
            let value = self.tau(&probe)?;
            if let Some(prev) = &previous {
                if prev.equals(&value, &self.budget)? {
                    return Ok((value, probe));
                }
            }
            previous = Some(value);
            j *= 2;
        }
        Err(Error::NoStabilization(format!("left-limit probes at λ = {lambda}")))
    }

    pub fn graded_piece(&self, lambda: &ExactRational) -> Result<GradedPiece> {
        let tau_left = self.tau_left(lambda)?;
        let tau_at = self.tau(lambda)?;
        let is_jump = !tau_at.equals(&tau_left, &self.budget)?;
        if !tau_left.contains(&tau_at, &self.budget)? {
            return Err(Error::Invariant(format!("τ increased across λ = {lambda}")));
        }
        Ok(GradedPiece { lambda: lambda.clone(), tau_left, tau_at, is_jump })
    }

    /// Whether `λ` is an F-jumping number.
    pub fn is_jump(&self, lambda: &ExactRational) -> Result<bool> {
        Ok(self.graded_piece(lambda)?.is_jump)
    }

    /// All F-jumping numbers in `[lo, hi]`.
    pub fn jumping_numbers(
        &self,
        lo: &ExactRational,
        hi: &ExactRational,
        bounds: CandidateBounds,
    ) -> Result<JumpReport> {
        self.search(lo, hi, bounds, false)
    }

    /// Adds `λ + k` for every jump `λ ∈ (0, 1]`, using `τ(λ + 1) = f·τ(λ)`.
    pub fn extend_periodically(&self, report: &JumpReport, upto: &ExactRational) -> Result<JumpReport> {
        if !report.window.0.is_zero() || report.window.1 < ExactRational::one() {
            return Err(Error::Invalid("periodic extension needs a window containing (0, 1]".into()));
        }
        let one = ExactRational::one();
        let mut jumps: Vec<Jump> = report.jumps.clone();
        let base: Vec<Jump> = report.jumps.iter().filter(|j| j.lambda <= one).cloned().collect();
        let mut k = 1i64;
        loop {
            let shift = ExactRational::from_integer(k);
            let fk = self.f.pow(k as u64);
            let mut any = false;
            for j in &base {
                let lambda = j.lambda.clone() + shift.clone();
                if &lambda > upto {
                    continue;
                }
                any = true;
                if jumps.iter().any(|x| x.lambda == lambda) {
                    continue;
                }
                jumps.push(Jump {
                    lambda,
                    tau: j.tau.product_poly(&fk)?.canonical(&self.budget)?,
                    tau_left: j.tau_left.product_poly(&fk)?.canonical(&self.budget)?,
                });
            }
            if !any {
                break;
            }
            k += 1;
        }
        jumps.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        let mut out = report.clone();
        out.jumps = jumps;
        if upto > &out.window.1 {
            out.window.1 = upto.clone();
        }
        Ok(out)
    }

    /// The F-pure threshold: the smallest positive jump.
    pub fn fpt(&self) -> Result<ExactRational> {
        if self.f.is_constant() {
            return Err(Error::Invalid("f is a unit and has no F-pure threshold".into()));
        }
        let zero = ExactRational::zero();
        let one = ExactRational::one();
        let two = ExactRational::from_integer(2);
        let mut report = self.search(&zero, &one, CandidateBounds::default(), true)?;
        if report.jumps.is_empty() {
            report = self.search(&one, &two, CandidateBounds::default(), true)?;
        }
        let fpt = report
            .jumps
            .first()
            .map(|j| j.lambda.clone())
            .ok_or_else(|| Error::NoStabilization("no jump found in (0, 2]".into()))?;
        check_threshold_gaps(&fpt, self.p())?;
        Ok(fpt)
    }

    pub fn nilpotence_verdict(
        &self,
        lambda: &ExactRational,
        e: u32,
        a_e: &BigInt,
        k_max: usize,
    ) -> Result<NilpotenceVerdict> {
        let p = self.p();
        if !validate_a_e(lambda, p, e, a_e) {
            return Err(Error::Invalid(format!(
                "a_e = {a_e} is below ⌈λ(p^e − 1)⌉ for λ = {lambda}, e = {e}"
            )));
        }
        let piece = self.graded_piece(lambda)?;
        if !piece.is_jump {
            return Ok(NilpotenceVerdict {
                lambda: lambda.clone(),
                e,
                a_e: a_e.clone(),
                verdict: Verdict::Nilpotent(0),
                predicted: Prediction::Nilpotent,
                agree: true,
                nontrivial_piece: false,
            });
        }
        let predicted = predicted_verdict(lambda, p, e, a_e);
        let a = biguint(a_e);
        let verdict = iterate_nilpotence(&piece.tau_left, &piece.tau_at, k_max, &self.budget, |j| {
            self.power_image(e, &a, j)?.sum(&piece.tau_at)?.canonical(&self.budget)
        })?;
        Ok(NilpotenceVerdict {
            lambda: lambda.clone(),
            e,
            a_e: a_e.clone(),
            verdict,
            predicted,
            agree: verdict.kind() == predicted,
            nontrivial_piece: true,
        })
    }

    /// `τ(λ + 1) = f·τ(λ)`.
    pub fn check_skoda(&self, lambda: &ExactRational) -> Result<bool> {
        let shifted = self.tau(&(lambda.clone() + ExactRational::one()))?;
        let product = self.tau(lambda)?.product_poly(&self.f)?;
        shifted.equals(&product, &self.budget)
    }

    /// `κ_g(τ(λ)) = τ(λ/p)`.
    pub fn check_kappa_division(&self, lambda: &ExactRational) -> Result<bool> {
        let image = self.module.kappa(&self.tau(lambda)?, &self.budget)?;
        let divided = self.tau(&(lambda.clone() / ExactRational::from_integer(self.p() as i64)))?;
        image.equals(&divided, &self.budget)
    }

    fn search(
        &self,
        lo: &ExactRational,
        hi: &ExactRational,
        bounds: CandidateBounds,
        first_only: bool,
    ) -> Result<JumpReport> {
        if lo.is_negative() || lo >= hi || *hi > ExactRational::from_integer(MAX_WINDOW) {
            return Err(Error::Invalid(format!(
                "window [{lo}, {hi}] must satisfy 0 ≤ lo < hi ≤ {MAX_WINDOW}"
            )));
        }
        if bounds.a > MAX_DENOMINATOR_BOUND || bounds.b == 0 || bounds.b > MAX_DENOMINATOR_BOUND {
            return Err(Error::Config(format!(
                "denominator bounds ({}, {}) outside [0, {MAX_DENOMINATOR_BOUND}] × [1, {MAX_DENOMINATOR_BOUND}]",
                bounds.a, bounds.b
            )));
        }
        let p = self.p();
        let pb = BigInt::from(p);
        let m_lo = (ceil_mul(lo, &pb) - BigInt::one()).max(BigInt::zero());
        let m_hi = ceil_mul(hi, &pb);
        let points: Vec<BigUint> = num_iter(&biguint(&m_lo), &biguint(&m_hi));
        let values = points
            .par_iter()
            .map(|m| self.grid(1, m))
            .collect::<Result<Vec<_>>>()?;
        let mut state = SearchState::default();
        for k in 1..points.len() {
            if !values[k - 1].equals(&values[k], &self.budget)? {
                self.resolve(1, &points[k], &values[k - 1], &values[k], bounds, &mut state, first_only)?;
                if first_only && !state.jumps.is_empty() {
                    break;
                }
            }
        }
        let mut jumps: Vec<Jump> =
            state.jumps.into_iter().filter(|j| &j.lambda >= lo && &j.lambda <= hi && j.lambda.is_positive()).collect();
        jumps.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        jumps.dedup_by(|a, b| a.lambda == b.lambda);
        for pair in jumps.windows(2) {
            if pair[1].tau.contains(&pair[0].tau, &self.budget)? || !pair[0].tau.contains(&pair[1].tau, &self.budget)? {
                return Err(Error::Invariant("jump ideals are not strictly decreasing".into()));
            }
        }
        Ok(JumpReport {
            jumps,
            window: (lo.clone(), hi.clone()),
            bounds,
            complete: state.warnings.is_empty(),
            warnings: state.warnings,
            max_level: state.max_level.max(1),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn resolve(
        &self,
        e: u32,
        m: &BigUint,
        lo_ideal: &Ideal,
        hi_ideal: &Ideal,
        bounds: CandidateBounds,
        state: &mut SearchState,
        first_only: bool,
    ) -> Result<()> {
        state.max_level = state.max_level.max(e);
        let p = self.p();
        let q = pow_big(p, e);
        let m_int = BigInt::from(m.clone());
        let left = ExactRational::new(&m_int - 1, q.clone())?;
        let right = ExactRational::new(m_int.clone(), q)?;
        match candidates(&left, &right, p, bounds, DIRECT_CANDIDATES) {
            Some(cands) if cands.is_empty() => {
                state.warnings.push(format!(
                    "a jump in ({left}, {right}] has a denominator outside the candidate set"
                ));
            }
            Some(cands) => {
                let pieces = cands
                    .par_iter()
                    .map(|c| Ok((self.tau_left(c)?, self.tau(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                let mut consistent = pieces[0].0.equals(lo_ideal, &self.budget)?
                    && pieces[pieces.len() - 1].1.equals(hi_ideal, &self.budget)?;
                for k in 1..pieces.len() {
                    consistent &= pieces[k - 1].1.equals(&pieces[k].0, &self.budget)?;
                }
                if !consistent {
                    state.warnings.push(format!(
                        "candidates in ({left}, {right}] do not account for the whole drop"
                    ));
                }
                for (c, (tl, t)) in cands.into_iter().zip(pieces) {
                    if !tl.equals(&t, &self.budget)? {
                        state.jumps.push(Jump { lambda: c, tau: t, tau_left: tl });
                        if first_only {
                            return Ok(());
                        }
                    }
                }
            }
            None if e >= self.budget.max_refine_level => {
                state.warnings.push(format!(
                    "drop in ({left}, {right}] unresolved at the refinement limit {e}"
                ));
            }
            None => {
                let start = (m - 1u32) * p;
                let sub: Vec<BigUint> = num_iter(&start, &(m * p));
                let interior = sub[1..sub.len() - 1]
                    .par_iter()
                    .map(|k| self.grid(e + 1, k))
                    .collect::<Result<Vec<_>>>()?;
                let mut values = Vec::with_capacity(sub.len());
                values.push(lo_ideal.clone());
                values.extend(interior);
                values.push(hi_ideal.clone());
                for k in 1..sub.len() {
                    if !values[k - 1].equals(&values[k], &self.budget)? {
                        self.resolve(e + 1, &sub[k], &values[k - 1], &values[k], bounds, state, first_only)?;
                        if first_only && !state.jumps.is_empty() {
                            return Ok(());
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `λ = outer + (carry + ν)/p^shift` with `ν ∈ (0, 1]` of denominator `d`
/// prime to `p`; `b` is the order of `p` mod `d` and `n = ν(p^b - 1)`.
struct Decomposition {
    outer: BigUint,
    shift: u32,
    carry: BigUint,
    nu: ExactRational,
    b: u32,
    n: BigUint,
}

impl Decomposition {
    fn new(lambda: &ExactRational, p: u32, budget: &Budget) -> Result<Self> {
        let outer: BigInt = lambda.ceil() - 1;
        let rest = lambda.clone() - ExactRational::from_integer(outer.clone());
        let (shift, d) = rest.p_split(p);
        let mu = rest * ExactRational::from_integer(pow_big(p, shift));
        let carry: BigInt = mu.ceil() - 1;
        let nu = mu - ExactRational::from_integer(carry.clone());
        let b = multiplicative_order(p, &d, budget.max_order_modulus)?;
        let n = biguint(&(nu.numer() * (pow_big(p, b) - 1) / nu.denom()));
        Ok(Decomposition { outer: biguint(&outer), shift, carry: biguint(&carry), nu, b, n })
    }
}

#[derive(Default)]
struct SearchState {
    jumps: Vec<Jump>,
    warnings: Vec<String>,
    max_level: u32,
}

fn num_iter(lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut k = lo.clone();
    while &k <= hi {
        out.push(k.clone());
        k += 1u32;
    }
    out
}

/// Distinct candidates `a/(p^i(p^j - 1))` in `(left, right]`, or `None` when
/// there are more than `limit` of them.
fn candidates(
    left: &ExactRational,
    right: &ExactRational,
    p: u32,
    bounds: CandidateBounds,
    limit: usize,
) -> Option<Vec<ExactRational>> {
    let families = ((bounds.a + 1) * bounds.b) as usize;
    let mut ranges = Vec::new();
    let mut total = BigInt::zero();
    for i in 0..=bounds.a {
        for j in 1..=bounds.b {
            let den: BigInt = pow_big(p, i) * (pow_big(p, j) - 1);
            let (ln, rn): (BigInt, BigInt) = (left.numer() * &den, right.numer() * &den);
            let lo = ln.div_floor(left.denom());
            let hi = rn.div_floor(right.denom());
            total += &hi - &lo;
            // the same value recurs in several families, so this is only an upper bound
            if total > BigInt::from(limit * families) {
                return None;
            }
            ranges.push((lo, hi, den));
        }
    }
    let mut set = BTreeSet::new();
    for (lo, hi, den) in ranges {
        let mut a: BigInt = lo + 1;
        while a <= hi {
            set.insert(ExactRational::new(a.clone(), den.clone()).expect("positive denominator"));
            a += 1;
        }
    }
    (set.len() <= limit).then(|| set.into_iter().collect())
}

/// A threshold never lies strictly between `a/p^e` and `a/(p^e - 1)`.
fn check_threshold_gaps(fpt: &ExactRational, p: u32) -> Result<()> {
    for e in 1..=3u32 {
        let q = pow_big(p, e);
        // the only admissible a are the integers strictly between fpt·(q-1) and fpt·q
        let scaled: BigInt = fpt.numer() * (&q - 1);
        let a = scaled.div_floor(fpt.denom()) + 1;
        if a < q && &a * fpt.denom() < fpt.numer() * &q {
            return Err(Error::Invariant(format!(
                "threshold {fpt} lies inside ({a}/{q}, {a}/{})",
                &q - 1
            )));
        }
    }
    Ok(())
}
