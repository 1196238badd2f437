//! Verification suites: values from the literature, randomized properties and
//! cross-checks between independent algorithms.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use crate::bernstein::{gamma_set, gamma_set_direct, lasttheo_check};
use crate::budget::Budget;
use crate::cartmod::{tau_zero, underline, CartierModule};
use crate::error::{Error, Result};
use crate::filtration::{CandidateBounds, Prediction, TauRequest, TestModuleFiltration, Verdict};
use crate::frobenius::{bracket_power, cartier_image, cartier_image_pow, pe_root, root_components, FrobeniusLevel};
use crate::ideals::Ideal;
use crate::ring::{ceil_mul, pow_big, ExactRational, Polynomial, RingSpec};
use crate::sigma::SigmaFiltration;

pub const SUITES: &[&str] = &["paper-values", "properties", "oracles", "all"];

/// Randomized instances per property.
pub const INSTANCES: usize = 50;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} ({} ms){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.millis,
            if self.detail.is_empty() { String::new() } else { format!(": {}", self.detail) }
        )
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.checks.len() - self.failed(),
            "failed": self.failed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name, "passed": c.passed, "detail": c.detail, "millis": c.millis as u64,
            })).collect::<Vec<_>>(),
        })
    }
}

type Check = (&'static str, fn(&Budget) -> Result<(bool, String)>);

pub fn run_suite(name: &str, budget: &Budget, progress: Option<&(dyn Fn(&str) + Sync)>) -> Result<SuiteReport> {
    let checks: Vec<Check> = match name {
        "paper-values" => reference_values(),
        "properties" => properties(),
        "oracles" => oracles(),
        "all" => reference_values().into_iter().chain(properties()).chain(oracles()).collect(),
        other => return Err(Error::Invalid(format!("unknown suite `{other}`"))),
    };
    let mut results = Vec::with_capacity(checks.len());
    for (check_name, body) in checks {
        let start = Instant::now();
        let (passed, detail) = match body(budget) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let r = CheckResult { name: check_name.to_string(), passed, detail, millis: start.elapsed().as_millis() };
        if let Some(cb) = progress {
            cb(&r.line());
        }
        results.push(r);
    }
    Ok(SuiteReport { suite: name.to_string(), checks: results })
}

fn q(s: &str) -> ExactRational {
    s.parse().expect("literal rational")
}

fn module(p: u32, vars: &[&str], twist: &str, c: Option<&str>) -> Result<CartierModule> {
    CartierModule::parse(&RingSpec::new(p, vars)?, twist, c, false)
}

fn cusp(p: u32, budget: &Budget) -> Result<TestModuleFiltration> {
    let m = module(p, &["x", "y"], "1", None)?;
    let f = Polynomial::parse("x^2 + y^3", m.ring())?;
    TestModuleFiltration::new(m, f, budget.clone())
}

fn is(i: &Ideal, gens: &[&str], budget: &Budget) -> Result<bool> {
    i.equals(&Ideal::parse(i.ring(), gens)?, budget)
}

fn tally(failures: Vec<String>, total: usize) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("{total}/{total} instances"))
    } else {
        let shown: Vec<_> = failures.iter().take(3).cloned().collect();
        (false, format!("{} of {total} failed, e.g. {}", failures.len(), shown.join("; ")))
    }
}

fn reference_values() -> Vec<Check> {
    vec![
        ("cusp F-pure thresholds", |b| {
            let expected = [(2, "1/2"), (3, "2/3"), (5, "4/5"), (7, "5/6"), (13, "5/6")];
            let mut bad = Vec::new();
            for (p, v) in expected {
                let got = cusp(p, b)?.fpt()?;
                if got != q(v) {
                    bad.push(format!("p={p}: {got} ≠ {v}"));
                }
            }
            Ok(tally(bad, expected.len()))
        }),
        ("cusp test ideal at 5/6, p = 7", |b| {
            let t = cusp(7, b)?;
            Ok((is(&t.tau(&q("5/6"))?, &["x", "y"], b)?, String::new()))
        }),
        ("cusp nilpotence at 5/6 and 4/5", |b| {
            let t = cusp(7, b)?;
            let non = t.nilpotence_verdict(&q("5/6"), 1, &BigInt::from(5), 64)?;
            let nil = t.nilpotence_verdict(&q("5/6"), 1, &BigInt::from(6), 64)?;
            let t5 = cusp(5, b)?;
            let mut all_nil = true;
            for e in 1..=3 {
                let a = ceil_mul(&q("4/5"), &(pow_big(5, e) - 1));
                all_nil &= matches!(t5.nilpotence_verdict(&q("4/5"), e, &a, 64)?.verdict, Verdict::Nilpotent(_));
            }
            let ok = non.verdict == Verdict::NonNilpotent && matches!(nil.verdict, Verdict::Nilpotent(_)) && all_nil;
            Ok((ok, String::new()))
        }),
        ("Cartier image κ^e x^{2^e-1} k[x] = k[x]", |b| {
            let m = module(2, &["x"], "x", None)?;
            let mut ok = true;
            for e in 1..=8 {
                let lvl = FrobeniusLevel::new(e, m.ring(), b)?;
                ok &= cartier_image(&m, &Polynomial::one(m.ring()), &Ideal::unit(m.ring()), lvl, b)?.is_unit(b)?;
            }
            Ok((ok, "e = 1..8".into()))
        }),
        ("stable images and test modules at 0", |b| {
            let mut ok = true;
            for p in [2u32, 3, 5, 7] {
                for n in 2..=3u32 {
                    let m = module(p, &["x"], &format!("x^{}", n * (p - 1)), Some("x"))?;
                    ok &= is(&underline(&m, b)?.ideal, &[&format!("x^{}", n - 1)], b)?;
                    ok &= is(&tau_zero(&m, b)?, &[&format!("x^{n}")], b)?;
                }
                let m = module(p, &["x", "y"], &format!("y^{}", p - 1), Some("y"))?;
                ok &= is(&tau_zero(&m, b)?, &["y"], b)?;
            }
            Ok((ok, String::new()))
        }),
        ("σ of x^2 on (k[x], x^{p-1}), p = 3, 5, 7", |b| {
            let mut bad = Vec::new();
            for p in [3u32, 5, 7] {
                let m = module(p, &["x"], &format!("x^{}", p - 1), None)?;
                let s = SigmaFiltration::new(m.clone(), Polynomial::parse("x^2", m.ring())?, b.clone())?;
                let at = s.sigma(&q("1/2"))?.ideal;
                let beyond = s.sigma(&(q("1/2") + ExactRational::new(1, p * p - 1)?))?.ideal;
                if !is(&at, &["x"], b)? || !is(&beyond, &["x^2"], b)? {
                    bad.push(format!("p={p}: σ(1/2) = {at}, σ(1/2+) = {beyond}"));
                }
            }
            Ok(tally(bad, 3))
        }),
        ("σ of x^2 on (k[x], x) in characteristic 2", |b| {
            let m = module(2, &["x"], "x", None)?;
            let s = SigmaFiltration::new(m.clone(), Polynomial::parse("x^2", m.ring())?, b.clone())?;
            let v = s.sigma(&q("1/2"))?.ideal;
            Ok((Ideal::parse(m.ring(), &["x^2"])?.contains(&v, b)?, format!("σ(1/2) = {v}")))
        }),
        ("σ and τ diverge for (k[x,y], x^{p-1}), f = y", |b| {
            let mut ok = true;
            for p in [2u32, 3, 5] {
                let m = module(p, &["x", "y"], &format!("x^{}", p - 1), Some("x"))?;
                let f = Polynomial::parse("y", m.ring())?;
                let t = TestModuleFiltration::new(m.clone(), f.clone(), b.clone())?;
                let s = SigmaFiltration::new(m, f, b.clone())?;
                ok &= s.sigma_tau_comparison(&t, &q("1"))?.breakdown;
            }
            Ok((ok, String::new()))
        }),
        ("Bernstein-Sato roots of x and the converse failure", |b| {
            let mut ok = true;
            for p in [2u32, 3, 5, 7] {
                let plain = module(p, &["x"], "1", None)?;
                let x = Polynomial::parse("x", plain.ring())?;
                ok &= gamma_set(&plain, &x, 1, b)? == vec![p as u64 - 1];
                let twisted = module(p, &["x"], &format!("x^{}", p - 1), None)?;
                ok &= !gamma_set(&twisted, &x, 1, b)?.contains(&(p as u64 - 1));
                let s = SigmaFiltration::new(twisted, x, b.clone())?;
                ok &= s.gr_sigma(&q("1"))?.nontrivial;
            }
            Ok((ok, String::new()))
        }),
        ("nonzero σ graded pieces at Bernstein-Sato roots", |b| {
            let mut bad = Vec::new();
            let cases: [(u32, &[&str], &str, &str); 4] = [
                (7, &["x", "y"], "1", "x^2 + y^3"),
                (3, &["x"], "1", "x"),
                (5, &["x"], "x^4", "x"),
                (3, &["x"], "x^2", "x^2"),
            ];
            for (p, vars, twist, f) in cases {
                let m = module(p, vars, twist, None)?;
                let f = Polynomial::parse(f, m.ring())?;
                for e in 1..=2 {
                    let r = lasttheo_check(&m, &f, e, b)?;
                    if r.violations > 0 {
                        bad.push(format!("p={p} twist={twist} f={f} e={e}"));
                    }
                }
            }
            Ok(tally(bad, cases.len() * 2))
        }),
    ]
}

/// Random inputs, deterministic per seed.
pub mod sample {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::ideals::Ideal;
    use crate::ring::{ExactRational, Monomial, Polynomial, Ring, RingSpec};

    pub type SampleRng = ChaCha8Rng;

    pub fn rng(seed: u64) -> SampleRng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn prime(rng: &mut SampleRng) -> u32 {
        *[2u32, 3, 5, 7].choose(rng).expect("nonempty")
    }

    pub fn ring(rng: &mut SampleRng, p: u32) -> Ring {
        if rng.gen_bool(0.5) {
            RingSpec::new(p, &["x"]).expect("valid ring")
        } else {
            RingSpec::new(p, &["x", "y"]).expect("valid ring")
        }
    }

    pub fn monomial(rng: &mut SampleRng, ring: &Ring, max_deg: u32) -> Monomial {
        let n = ring.nvars();
        let mut exps = vec![0u32; n];
        let total = rng.gen_range(0..=max_deg);
        for _ in 0..total {
            exps[rng.gen_range(0..n)] += 1;
        }
        Monomial::from_exponents(&exps)
    }

    /// A nonzero polynomial with at most `max_terms` terms.
    pub fn polynomial(rng: &mut SampleRng, ring: &Ring, max_terms: usize, max_deg: u32) -> Polynomial {
        loop {
            let k = rng.gen_range(1..=max_terms);
            let terms: Vec<_> = (0..k)
                .map(|_| (monomial(rng, ring, max_deg), rng.gen_range(1..ring.p() as i64)))
                .collect();
            let f = Polynomial::from_terms(ring, terms);
            if !f.is_zero() {
                return f;
            }
        }
    }

    pub fn nonconstant(rng: &mut SampleRng, ring: &Ring, max_terms: usize, max_deg: u32) -> Polynomial {
        loop {
            let f = polynomial(rng, ring, max_terms, max_deg);
            if !f.is_constant() {
                return f;
            }
        }
    }

    /// Monomial or binomial generators.
    pub fn small_ideal(rng: &mut SampleRng, ring: &Ring, max_deg: u32) -> Ideal {
        let k = rng.gen_range(1..=2);
        let gens = (0..k).map(|_| polynomial(rng, ring, 2, max_deg)).collect();
        Ideal::new(ring, gens)
    }

    /// `a/b` in `[0, max]` with `b` among small denominators and the
    /// shapes `p^i(p^j - 1)`.
    pub fn rational(rng: &mut SampleRng, p: u32, max: u32) -> ExactRational {
        let den: u64 = match rng.gen_range(0..3) {
            0 => rng.gen_range(1..=12),
            1 => (p as u64).pow(rng.gen_range(0..=2)) * ((p as u64).pow(rng.gen_range(1..=2)) - 1),
            _ => (p as u64).pow(rng.gen_range(1..=2)),
        };
        let num = rng.gen_range(0..=den * max as u64);
        ExactRational::new(num, den).expect("positive denominator")
    }

    /// Like [`rational`] with a denominator prime to `p`.
    pub fn coprime_rational(rng: &mut SampleRng, p: u32, max: u32) -> ExactRational {
        loop {
            let r = rational(rng, p, max);
            if !r.denominator_divisible_by(p) {
                return r;
            }
        }
    }
}

/// A Cartier module for property checks: the untwisted ring, or a monomial
/// twist with the product of the variables as test element.
fn random_module(rng: &mut sample::SampleRng, p: u32) -> Result<CartierModule> {
    use rand::Rng;
    let ring = sample::ring(rng, p);
    if rng.gen_bool(0.6) {
        return Ok(CartierModule::canonical(&ring));
    }
    let twist = Polynomial::monomial(&ring, sample::monomial(rng, &ring, 2 * (p - 1)), 1).to_string();
    let c = ring.vars().join("*");
    CartierModule::parse(&ring, &twist, Some(&c), false)
}

fn random_filtration(rng: &mut sample::SampleRng, budget: &Budget) -> Result<TestModuleFiltration> {
    let p = sample::prime(rng);
    let m = random_module(rng, p)?;
    let f = sample::nonconstant(rng, &m.ring().clone(), 3, 3);
    TestModuleFiltration::new(m, f, budget.clone())
}

fn random_sigma(rng: &mut sample::SampleRng, budget: &Budget) -> Result<SigmaFiltration> {
    let p = sample::prime(rng);
    let m = random_module(rng, p)?;
    let f = sample::nonconstant(rng, &m.ring().clone(), 3, 3);
    SigmaFiltration::new(m, f, budget.clone())
}

fn over_instances(
    seed: u64,
    budget: &Budget,
    mut body: impl FnMut(&mut sample::SampleRng, &Budget) -> Result<Option<String>>,
) -> Result<(bool, String)> {
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for _ in 0..INSTANCES {
        if let Some(f) = body(&mut rng, budget)? {
            failures.push(f);
        }
    }
    Ok(tally(failures, INSTANCES))
}

fn properties() -> Vec<Check> {
    vec![
        ("Skoda periodicity τ(λ+1) = f·τ(λ)", |b| {
            over_instances(11, b, |rng, b| {
                let t = random_filtration(rng, b)?;
                let l = sample::rational(rng, t.module().ring().p(), 2);
                Ok((!t.check_skoda(&l)?).then(|| format!("f={} λ={l}", t.f())))
            })
        }),
        ("κ-division κ(τ(λ)) = τ(λ/p)", |b| {
            over_instances(12, b, |rng, b| {
                let t = random_filtration(rng, b)?;
                let l = sample::rational(rng, t.module().ring().p(), 2);
                Ok((!t.check_kappa_division(&l)?).then(|| format!("f={} λ={l}", t.f())))
            })
        }),
        ("τ is decreasing", |b| {
            over_instances(13, b, |rng, b| {
                let t = random_filtration(rng, b)?;
                let p = t.module().ring().p();
                let (x, y) = (sample::rational(rng, p, 2), sample::rational(rng, p, 2));
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                Ok((!t.tau(&lo)?.contains(&t.tau(&hi)?, b)?).then(|| format!("f={} {lo} ≤ {hi}", t.f())))
            })
        }),
        ("τ is right-continuous", |b| {
            over_instances(14, b, |rng, b| {
                let t = random_filtration(rng, b)?;
                let p = t.module().ring().p();
                let l = sample::rational(rng, p, 2);
                let nudged = l.clone() + ExactRational::from_integer(1) / ExactRational::from_integer(pow_big(p, 16));
                Ok((!t.tau(&l)?.equals(&t.tau(&nudged)?, b)?).then(|| format!("f={} λ={l}", t.f())))
            })
        }),
        ("Frobenius root adjunction", |b| {
            over_instances(15, b, |rng, b| {
                let p = sample::prime(rng);
                let ring = sample::ring(rng, p);
                let i = sample::small_ideal(rng, &ring, 10);
                let e = if p == 7 { rand::Rng::gen_range(rng, 1..=2) } else { rand::Rng::gen_range(rng, 1..=3) };
                let lvl = FrobeniusLevel::new(e, &ring, b)?;
                let up = bracket_power(&pe_root(&i, lvl), lvl);
                let ok = up.contains(&i, b)? && pe_root(&bracket_power(&i, lvl), lvl).equals(&i, b)?;
                Ok((!ok).then(|| format!("I={i} e={e}")))
            })
        }),
        ("Frobenius root minimality", |b| {
            over_instances(16, b, |rng, b| {
                let p = *rand::seq::SliceRandom::choose(&[2u32, 3, 5][..], rng).expect("nonempty");
                let ring = sample::ring(rng, p);
                let h = sample::polynomial(rng, &ring, 4, 12);
                let lvl = FrobeniusLevel::new(1, &ring, b)?;
                Ok((!root_is_minimal(&h, lvl, b)?).then(|| format!("h={h}")))
            })
        }),
        ("σ is decreasing and discrete", |b| {
            over_instances(17, b, |rng, b| {
                let s = random_sigma(rng, b)?;
                let p = s.module().ring().p();
                let (x, y) = (sample::coprime_rational(rng, p, 2), sample::coprime_rational(rng, p, 2));
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                let ok = s.sigma(&lo)?.ideal.contains(&s.sigma(&hi)?.ideal, b)?;
                Ok((!ok).then(|| format!("f={} {lo} ≤ {hi}", s.f())))
            })
        }),
        ("σ is right-continuous at p-divisible denominators", |b| {
            over_instances(18, b, |rng, b| {
                let s = random_sigma(rng, b)?;
                let p = s.module().ring().p();
                let k = rand::Rng::gen_range(rng, 1..=2 * p as u64);
                let l = ExactRational::new(k, p as u64 * rand::Rng::gen_range(rng, 1..=3u64))?;
                if !l.denominator_divisible_by(p) {
                    return Ok(None);
                }
                let a = s.sigma(&l)?.ideal;
                let other = s.right_limit_from(&l, 3)?.ideal;
                Ok((!a.equals(&other, b)?).then(|| format!("f={} λ={l}", s.f())))
            })
        }),
        ("nilpotence verdicts match the integrality criterion", |b| {
            over_instances(19, b, |rng, b| {
                let t = random_filtration(rng, b)?;
                let p = t.module().ring().p();
                let l = sample::rational(rng, p, 1);
                if l.is_zero() || !t.is_jump(&l)? {
                    return Ok(None);
                }
                let e = if p == 7 { 1 } else { rand::Rng::gen_range(rng, 1..=2) };
                let a = ceil_mul(&l, &(pow_big(p, e) - 1));
                let v = t.nilpotence_verdict(&l, e, &a, 64)?;
                Ok((!v.agree).then(|| format!("f={} λ={l} e={e}", t.f())))
            })
        }),
    ]
}

/// `pe_root((h))` is contained in every ideal generated by a subset of the
/// components whose Frobenius power contains `h`.
pub fn root_is_minimal(h: &Polynomial, lvl: FrobeniusLevel, budget: &Budget) -> Result<bool> {
    let ring = h.ring();
    let principal = Ideal::principal(h);
    let root = pe_root(&principal, lvl);
    if !bracket_power(&root, lvl).member(h, budget)? {
        return Ok(false);
    }
    let comps = root_components(h, lvl.q());
    for mask in 1u32..(1 << comps.len()) {
        let subset: Vec<_> = (0..comps.len()).filter(|i| mask & (1 << i) != 0).map(|i| comps[i].clone()).collect();
        let j = Ideal::new(ring, subset);
        if bracket_power(&j, lvl).member(h, budget)? && !j.contains(&root, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ν_f(q)`: the largest `r` with `f^r ∉ m^{[q]}`, by truncated powers;
/// `f` must vanish at the origin.
pub fn nu(f: &Polynomial, q: u32) -> u64 {
    let ring = f.ring();
    let n = ring.nvars();
    let keep = |g: &Polynomial| {
        Polynomial::from_terms(
            ring,
            g.terms()
                .iter()
                .filter(|(m, _)| (0..n).all(|i| m.exponent(i) < q))
                .map(|(m, c)| (*m, *c as i64)),
        )
    };
    let mut power = Polynomial::one(ring);
    let mut r = 0;
    loop {
        power = keep(&power.mul(f));
        if power.is_zero() {
            return r;
        }
        r += 1;
    }
}

fn oracles() -> Vec<Check> {
    vec![
        ("F-pure thresholds lie between ν(q)/q and (ν(q)+1)/q", |b| {
            let mut bad = Vec::new();
            let mut total = 0;
            for p in [2u32, 3, 5, 7] {
                let ring = RingSpec::new(p, &["x", "y"])?;
                for text in ["x^2 + y^3", "x^3 + y^4", "x*y*(x + y)", "x^2*y + y^5"] {
                    let f = Polynomial::parse(text, &ring)?;
                    let fpt = TestModuleFiltration::new(CartierModule::canonical(&ring), f.clone(), b.clone())?.fpt()?;
                    for e in 1..=3 {
                        let q = p.pow(e);
                        let v = nu(&f, q);
                        let lo = ExactRational::new(v, q)?;
                        let hi = ExactRational::new(v + 1, q)?;
                        total += 1;
                        if !(lo <= fpt && fpt <= hi) {
                            bad.push(format!("p={p} f={text} e={e}: {fpt} ∉ [{lo}, {hi}]"));
                        }
                    }
                }
            }
            Ok(tally(bad, total))
        }),
        ("Frobenius root of (x^2+y^3)^5 over F_7 is minimal", |b| {
            let ring = RingSpec::new(7, &["x", "y"])?;
            let h = Polynomial::parse("(x^2 + y^3)^5", &ring)?;
            Ok((root_is_minimal(&h, FrobeniusLevel::new(1, &ring, b)?, b)?, String::new()))
        }),
        ("digit-wise Cartier images match direct images", |b| {
            over_instances(21, b, |rng, b| {
                let p = sample::prime(rng);
                let m = random_module(rng, p)?;
                let ring = m.ring().clone();
                let f = sample::nonconstant(rng, &ring, 2, 3);
                let i = sample::small_ideal(rng, &ring, 4);
                let e = if p >= 5 { 1 } else { rand::Rng::gen_range(rng, 1..=2) };
                let k = rand::Rng::gen_range(rng, 0..(p as u64).pow(e) * 2);
                let lvl = FrobeniusLevel::new(e, &ring, b)?;
                let direct = cartier_image(&m, &f.pow(k), &i, lvl, b)?;
                let fast = cartier_image_pow(&m, &f, &BigUint::from(k), &i, e, b)?;
                Ok((!direct.equals(&fast, b)?).then(|| format!("f={f} k={k} e={e}")))
            })
        }),
        ("powers agree with repeated multiplication", |b| {
            over_instances(22, b, |rng, _| {
                let p = sample::prime(rng);
                let ring = sample::ring(rng, p);
                let f = sample::polynomial(rng, &ring, 3, 3);
                let k = rand::Rng::gen_range(rng, 0..=20u64);
                let mut naive = Polynomial::one(&ring);
                for _ in 0..k {
                    naive = naive.mul(&f);
                }
                Ok((f.pow(k) != naive).then(|| format!("f={f} k={k}")))
            })
        }),
        ("level-wise τ matches the exact value", |b| {
            over_instances(23, b, |rng, b| {
                let t = random_filtration(rng, b)?;
                let l = sample::rational(rng, t.module().ring().p(), 2);
                let mut req = TauRequest::new(l.clone());
                req.consecutive_stable = 3;
                let lv = t.tau_by_levels(&req)?;
                Ok((!lv.ideal.equals(&t.tau(&l)?, b)?).then(|| format!("f={} λ={l}", t.f())))
            })
        }),
        ("probed left limits match the exact value", |b| {
            over_instances(24, b, |rng, b| {
                let t = random_filtration(rng, b)?;
                let l = sample::rational(rng, t.module().ring().p(), 2);
                if l.is_zero() {
                    return Ok(None);
                }
                let (probed, _) = t.tau_left_probed(&l)?;
                Ok((!probed.equals(&t.tau_left(&l)?, b)?).then(|| format!("f={} λ={l}", t.f())))
            })
        }),
        ("Bernstein-Sato index sets agree between routes", |b| {
            let cases: [(u32, &[&str], &str, &str, u32); 5] = [
                (7, &["x", "y"], "1", "x^2 + y^3", 1),
                (3, &["x", "y"], "1", "x^2 + y^3", 2),
                (2, &["x", "y"], "x*y", "x + y^2", 2),
                (5, &["x"], "x^4", "x", 2),
                (3, &["x"], "x^4", "x^2 + x^3", 2),
            ];
            let mut bad = Vec::new();
            for (p, vars, twist, f, e) in cases {
                let m = module(p, vars, twist, None)?;
                let f = Polynomial::parse(f, m.ring())?;
                if gamma_set(&m, &f, e, b)? != gamma_set_direct(&m, &f, e, b)? {
                    bad.push(format!("p={p} f={f} e={e}"));
                }
            }
            Ok(tally(bad, cases.len()))
        }),
        ("Γ matches drops of τ for the untwisted cusp", |b| {
            let mut bad = Vec::new();
            for (p, e) in [(5u32, 1u32), (7, 1), (3, 2), (2, 3)] {
                let t = cusp(p, b)?;
                let gamma = gamma_set(t.module(), t.f(), e, b)?;
                let q = (p as u64).pow(e);
                let drops: Vec<u64> = (0..q)
                    .filter_map(|m| {
                        let a = t.grid(e, &BigUint::from(m));
                        let c = t.grid(e, &BigUint::from(m + 1));
                        match (a, c) {
                            (Ok(a), Ok(c)) => match a.equals(&c, b) {
                                Ok(false) => Some(Ok(m)),
                                Ok(true) => None,
                                Err(e) => Some(Err(e)),
                            },
                            (Err(e), _) | (_, Err(e)) => Some(Err(e)),
                        }
                    })
                    .collect::<Result<_>>()?;
                if gamma != drops {
                    bad.push(format!("p={p} e={e}"));
                }
            }
            Ok(tally(bad, 4))
        }),
        ("jump search on x over F_p[x] with periodic extension", |b| {
            let mut ok = true;
            for p in [2u32, 3, 5, 7] {
                let m = module(p, &["x"], "1", None)?;
                let t = TestModuleFiltration::new(m.clone(), Polynomial::parse("x", m.ring())?, b.clone())?;
                let r = t.jumping_numbers(&q("0"), &q("1"), CandidateBounds::default())?;
                let r = t.extend_periodically(&r, &q("3"))?;
                ok &= r.lambdas() == vec![q("1"), q("2"), q("3")];
                ok &= is(&r.jumps[2].tau, &["x^3"], b)?;
            }
            Ok((ok, String::new()))
        }),
        ("predicted verdicts along the cusp", |b| {
            let t = cusp(7, b)?;
            let mut ok = true;
            for (l, e) in [("5/6", 2u32), ("1", 1), ("11/6", 1)] {
                let lam = q(l);
                let a = ceil_mul(&lam, &(pow_big(7, e) - 1));
                let v = t.nilpotence_verdict(&lam, e, &a, 64)?;
                ok &= v.agree && v.predicted == Prediction::NonNilpotent;
            }
            Ok((ok, String::new()))
        }),
    ]
}
