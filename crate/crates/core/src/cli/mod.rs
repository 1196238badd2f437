//! Batch front end: job descriptions, dispatch, JSON documents, caching and
//! the verification suites.

mod args;
pub mod cache;
pub mod config;
pub mod json;
pub mod verify;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bernstein::{bs_polynomial, lasttheo_check};
use crate::budget::Budget;
use crate::cartmod::Descriptor;
use crate::error::{Error, Result};
use crate::filtration::{CandidateBounds, TauRequest, TestModuleFiltration};
use crate::frobenius::{cartier_image, FrobeniusLevel};
use crate::ideals::Ideal;
use crate::ring::{ceil_mul, multiplicative_order, pow_big, ExactRational, Polynomial};
use crate::sigma::SigmaFiltration;

pub use args::main_with_args;
use cache::Cache;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Root,
    Tau,
    Fpt,
    Jumps,
    Gr,
    Nilpotence,
    Sigma,
    Grsigma,
    Bspoly,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Root => "root",
            Command::Tau => "tau",
            Command::Fpt => "fpt",
            Command::Jumps => "jumps",
            Command::Gr => "gr",
            Command::Nilpotence => "nilpotence",
            Command::Sigma => "sigma",
            Command::Grsigma => "grsigma",
            Command::Bspoly => "bspoly",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauRoute {
    /// Fixed-point evaluation at `λ` itself.
    #[default]
    Exact,
    /// `κ^e f^{⌈λp^e⌉}` at increasing `e` until consecutive values agree.
    Levels,
}

/// Command parameters; which ones apply depends on the command.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_e: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(ExactRational, ExactRational)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<CandidateBounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extend_to: Option<ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<TauRoute>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_start: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_cap: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consecutive_stable: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<u32>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub variants: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub compare_tau: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub lasttheo: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

/// One unit of work for [`run`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<Descriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default)]
    pub params: Params,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec { command, module: None, f: None, params: Params::default() }
    }

    /// Validates the job and rewrites every polynomial in canonical form.
    pub fn canonical(&self) -> Result<JobSpec> {
        let mut out = self.clone();
        if self.command == Command::Verify {
            let suite = self.params.suite.clone().unwrap_or_else(|| "all".into());
            if !verify::SUITES.contains(&suite.as_str()) {
                return Err(Error::Invalid(format!("unknown suite `{suite}`")));
            }
            out.params = Params { suite: Some(suite), ..Params::default() };
            out.module = None;
            out.f = None;
            return Ok(out);
        }
        let module = self
            .module
            .as_ref()
            .ok_or_else(|| Error::Invalid("a module descriptor is required".into()))?
            .build()?;
        let ring = module.ring().clone();
        out.module = Some(module.descriptor());
        let needs_f = self.command != Command::Root;
        out.f = match (&self.f, needs_f) {
            (Some(f), true) => Some(Polynomial::parse(f, &ring)?.to_string()),
            (None, true) => return Err(Error::Invalid(format!("{} needs --f", self.command.name()))),
            (_, false) => None,
        };
        if let Some(gens) = &self.params.ideal {
            out.params.ideal = Some(
                gens.iter().map(|g| Ok(Polynomial::parse(g, &ring)?.to_string())).collect::<Result<_>>()?,
            );
        }
        if let Some(h) = &self.params.h {
            out.params.h = Some(Polynomial::parse(h, &ring)?.to_string());
        }
        if let Some(a) = &self.params.a_e {
            let v: BigInt = a.trim().parse().map_err(|_| Error::Invalid(format!("a_e `{a}` is not an integer")))?;
            out.params.a_e = Some(v.to_string());
        }
        let needs_lambda = matches!(
            self.command,
            Command::Tau | Command::Gr | Command::Nilpotence | Command::Sigma | Command::Grsigma
        );
        match &self.params.lambda {
            None if needs_lambda => {
                return Err(Error::Invalid(format!("{} needs --lambda", self.command.name())))
            }
            Some(l) if l.is_negative() => return Err(Error::Invalid(format!("λ = {l} is negative"))),
            _ => {}
        }
        if self.command == Command::Root && self.params.ideal.is_none() {
            return Err(Error::Invalid("root needs --ideal".into()));
        }
        Ok(out)
    }
}

/// Settings that shape a run without being part of the job.
#[derive(Default)]
pub struct RunContext<'a> {
    pub budget: Budget,
    pub cache: Option<&'a Cache>,
    /// Recompute cache hits and fail on any difference.
    pub cache_selftest: bool,
    /// Called with each verification line as it completes.
    pub progress: Option<&'a (dyn Fn(&str) + Sync)>,
}


#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub document: Value,
}

impl Outcome {
    /// Deterministic text: keys are sorted and no whitespace varies.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.document).expect("documents serialize")
    }
}

struct Computed {
    result: Value,
    warnings: Vec<String>,
    exit_code: i32,
}

/// Runs one job and wraps the result in a versioned document.
pub fn run(job: &JobSpec, ctx: &RunContext<'_>) -> Outcome {
    let canonical = match job.canonical() {
        Ok(c) => c,
        Err(e) => return failure(job.command, serde_json::to_value(job).unwrap_or(Value::Null), &e),
    };
    let inputs = serde_json::to_value(&canonical).expect("jobs serialize");
    let cacheable = canonical.command != Command::Verify;
    let key = Cache::key(&format!("{inputs}|{}", serde_json::to_string(&ctx.budget).expect("budget")));
    if let (true, Some(cache)) = (cacheable, ctx.cache) {
        if let Some(hit) = cache.get(&key) {
            if !ctx.cache_selftest {
                if let Ok(document) = serde_json::from_str(&hit) {
                    return Outcome { exit_code: 0, document };
                }
            } else {
                let fresh = compute_document(&canonical, &inputs, ctx);
                if fresh.exit_code == 0 && fresh.to_json_string() != hit {
                    let e = Error::Invariant("cached entry differs from recomputation".into());
                    return failure(canonical.command, inputs, &e);
                }
                return fresh;
            }
        }
    }
    let outcome = compute_document(&canonical, &inputs, ctx);
    if let (true, Some(cache), 0) = (cacheable, ctx.cache, outcome.exit_code) {
        if let Err(e) = cache.put(&key, &outcome.to_json_string()) {
            return failure(canonical.command, inputs, &e);
        }
    }
    outcome
}

fn compute_document(job: &JobSpec, inputs: &Value, ctx: &RunContext<'_>) -> Outcome {
    match compute(job, ctx) {
        Ok(c) => Outcome {
            exit_code: c.exit_code,
            document: json!({
                "schema": json::SCHEMA,
                "command": job.command.name(),
                "inputs": inputs,
                "result": c.result,
                "warnings": c.warnings,
            }),
        },
        Err(e) => failure(job.command, inputs.clone(), &e),
    }
}

fn failure(command: Command, inputs: Value, e: &Error) -> Outcome {
    Outcome {
        exit_code: e.exit_code(),
        document: json!({
            "schema": json::SCHEMA,
            "command": command.name(),
            "inputs": inputs,
            "error": json::error(e),
        }),
    }
}

fn ok(result: Value) -> Result<Computed> {
    Ok(Computed { result, warnings: Vec::new(), exit_code: 0 })
}

fn compute(job: &JobSpec, ctx: &RunContext<'_>) -> Result<Computed> {
    let budget = &ctx.budget;
    let params = &job.params;
    if job.command == Command::Verify {
        let suite = params.suite.as_deref().unwrap_or("all");
        let report = verify::run_suite(suite, budget, ctx.progress)?;
        let failed = report.failed();
        return Ok(Computed {
            result: report.to_json(),
            warnings: Vec::new(),
            exit_code: if failed == 0 { 0 } else { 4 },
        });
    }
    let module = job.module.as_ref().expect("validated").build()?;
    let ring = module.ring().clone();
    if job.command == Command::Root {
        let e = params.e.unwrap_or(1);
        let level = FrobeniusLevel::new(e, &ring, budget)?;
        let ideal = Ideal::parse(&ring, params.ideal.as_deref().unwrap_or_default())?;
        let h = Polynomial::parse(params.h.as_deref().unwrap_or("1"), &ring)?;
        let image = cartier_image(&module, &h, &ideal, level, budget)?;
        return ok(json!({"e": e, "image": json::ideal(&image, budget)?, "untwisted": module.is_untwisted()}));
    }
    let f = Polynomial::parse(job.f.as_deref().expect("validated"), &ring)?;
    let lambda = params.lambda.clone().unwrap_or_else(ExactRational::zero);
    let p = ring.p();
    match job.command {
        Command::Tau => {
            let t = TestModuleFiltration::new(module, f, budget.clone())?;
            match params.route.unwrap_or_default() {
                TauRoute::Exact => ok(json!({
                    "route": "exact",
                    "tau": json::ideal(&t.tau(&lambda)?, budget)?,
                    "tau_zero": json::ideal(t.base(), budget)?,
                })),
                TauRoute::Levels => {
                    let mut req = TauRequest::new(lambda.clone());
                    req.e_cap = budget.e_max;
                    if let Some(v) = params.e_start {
                        req.e_start = v;
                    }
                    if let Some(v) = params.e_cap {
                        req.e_cap = v;
                    }
                    if let Some(v) = params.consecutive_stable {
                        req.consecutive_stable = v;
                    }
                    let lv = t.tau_by_levels(&req)?;
                    ok(json!({
                        "route": "levels",
                        "tau": json::ideal(&lv.ideal, budget)?,
                        "tau_zero": json::ideal(t.base(), budget)?,
                        "stabilization_level": lv.stabilization_level,
                        "levels_tried": lv.levels_tried,
                    }))
                }
            }
        }
        Command::Fpt => {
            let t = TestModuleFiltration::new(module, f, budget.clone())?;
            ok(json!({"fpt": json::rational(&t.fpt()?)}))
        }
        Command::Jumps => {
            let t = TestModuleFiltration::new(module, f, budget.clone())?;
            let (lo, hi) = params.window.clone().unwrap_or((ExactRational::zero(), ExactRational::one()));
            let mut report = t.jumping_numbers(&lo, &hi, params.bounds.unwrap_or_default())?;
            if let Some(upto) = &params.extend_to {
                report = t.extend_periodically(&report, upto)?;
            }
            let mut warnings = report.warnings.clone();
            warnings.push(format!(
                "only jumps with denominators p^i(p^j-1), i ≤ {}, j ≤ {} are located exactly",
                report.bounds.a, report.bounds.b
            ));
            Ok(Computed { result: json::jump_report(&report, budget)?, warnings, exit_code: 0 })
        }
        Command::Gr => {
            let t = TestModuleFiltration::new(module, f, budget.clone())?;
            ok(json::graded_piece(&t.graded_piece(&lambda)?, budget)?)
        }
        Command::Nilpotence => {
            let t = TestModuleFiltration::new(module, f, budget.clone())?;
            let e = params.e.unwrap_or(1);
            let a_e = match &params.a_e {
                Some(a) => a.parse::<BigInt>().expect("validated"),
                None => ceil_mul(&lambda, &(pow_big(p, e) - 1)),
            };
            let v = t.nilpotence_verdict(&lambda, e, &a_e, params.k_max.unwrap_or(64))?;
            let exit_code = if v.agree { 0 } else { 4 };
            Ok(Computed { result: json::nilpotence(&v), warnings: Vec::new(), exit_code })
        }
        Command::Sigma => {
            let s = SigmaFiltration::new(module.clone(), f.clone(), budget.clone())?;
            let mut result = json!({"sigma": json::sigma(&s.sigma(&lambda)?, budget)?});
            if params.variants {
                let n = params.n.unwrap_or(2);
                let cap = match params.degree_cap {
                    Some(c) => c,
                    None if lambda.is_zero() => n,
                    None => {
                        let a = multiplicative_order(p, lambda.denom(), budget.max_order_modulus)?;
                        a * n.div_ceil(a)
                    }
                };
                result["variants"] = json::variants(&s.variants_check(&lambda, n, cap)?, budget)?;
            }
            if params.compare_tau {
                let t = TestModuleFiltration::new(module, f, budget.clone())?;
                result["tau_comparison"] = json::sigma_tau(&s.sigma_tau_comparison(&t, &lambda)?, budget)?;
            }
            ok(result)
        }
        Command::Grsigma => {
            let s = SigmaFiltration::new(module, f, budget.clone())?;
            let mut result = json::gr_sigma(&s.gr_sigma(&lambda)?, budget)?;
            let mut exit_code = 0;
            if let Some(a) = params.e {
                let v = s.sigma_nilpotence(&lambda, a, params.k_max.unwrap_or(64))?;
                exit_code = if v.agree { 0 } else { 4 };
                result["nilpotence"] = json::nilpotence(&v);
            }
            Ok(Computed { result, warnings: Vec::new(), exit_code })
        }
        Command::Bspoly => {
            let e = params.e.unwrap_or(1);
            let mut result = json::bs_report(&bs_polynomial(&module, &f, e, budget)?, budget)?;
            let mut exit_code = 0;
            if params.lasttheo {
                let lt = lasttheo_check(&module, &f, e, budget)?;
                if lt.violations > 0 {
                    exit_code = 4;
                }
                result["lasttheo"] = json::lasttheo(&lt);
            }
            Ok(Computed { result, warnings: Vec::new(), exit_code })
        }
        Command::Root | Command::Verify => unreachable!("handled above"),
    }
}
