//! JSON encodings of results. Ideals appear as their reduced Gröbner basis,
//! rationals as `{"num", "den"}` objects.

use serde_json::{json, Value};

use crate::bernstein::{BsReport, LastTheoReport};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::filtration::{GradedPiece, JumpReport, NilpotenceVerdict, Verdict};
use crate::ideals::Ideal;
use crate::ring::ExactRational;
use crate::sigma::{GrSigma, SigmaResult, SigmaRoute, SigmaTauReport, VariantsReport};

pub const SCHEMA: &str = "cartier-lab/1";

pub fn rational(r: &ExactRational) -> Value {
    serde_json::to_value(r).expect("rationals serialize")
}

pub fn ideal(i: &Ideal, budget: &Budget) -> Result<Value> {
    Ok(json!(i.basis_strings(budget)?))
}

pub fn verdict(v: &Verdict) -> Value {
    match v {
        Verdict::Nilpotent(k) => json!({"kind": "nilpotent", "index": k}),
        Verdict::NonNilpotent => json!({"kind": "non-nilpotent"}),
    }
}

pub fn jump_report(r: &JumpReport, budget: &Budget) -> Result<Value> {
    let jumps = r
        .jumps
        .iter()
        .map(|j| {
            Ok(json!({
                "lambda": rational(&j.lambda),
                "tau": ideal(&j.tau, budget)?,
                "tau_left": ideal(&j.tau_left, budget)?,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "jumps": jumps,
        "window": [rational(&r.window.0), rational(&r.window.1)],
        "denominator_bounds": [r.bounds.a, r.bounds.b],
        "complete": r.complete,
        "max_level": r.max_level,
    }))
}

pub fn graded_piece(g: &GradedPiece, budget: &Budget) -> Result<Value> {
    Ok(json!({
        "lambda": rational(&g.lambda),
        "tau_left": ideal(&g.tau_left, budget)?,
        "tau": ideal(&g.tau_at, budget)?,
        "jump": g.is_jump,
    }))
}

pub fn nilpotence(v: &NilpotenceVerdict) -> Value {
    json!({
        "lambda": rational(&v.lambda),
        "e": v.e,
        "a_e": v.a_e.to_string(),
        "verdict": verdict(&v.verdict),
        "predicted": serde_json::to_value(v.predicted).expect("enum serializes"),
        "agree": v.agree,
        "nontrivial_piece": v.nontrivial_piece,
    })
}

pub fn sigma(s: &SigmaResult, budget: &Budget) -> Result<Value> {
    Ok(json!({
        "lambda": rational(&s.lambda),
        "sigma": ideal(&s.ideal, budget)?,
        "route": match s.route { SigmaRoute::Direct => "direct", SigmaRoute::RightLimit => "right-limit" },
        "level": s.level,
        "chain_length": s.chain_length,
        "evaluated_at": rational(&s.evaluated_at),
    }))
}

pub fn gr_sigma(g: &GrSigma, budget: &Budget) -> Result<Value> {
    Ok(json!({
        "at": sigma(&g.at, budget)?,
        "right": sigma(&g.right, budget)?,
        "nontrivial": g.nontrivial,
    }))
}

pub fn variants(v: &VariantsReport, budget: &Budget) -> Result<Value> {
    Ok(json!({
        "sigma": ideal(&v.sigma, budget)?,
        "sigma_n": ideal(&v.sigma_n, budget)?,
        "sigma_prime": ideal(&v.sigma_prime, budget)?,
        "n": v.n,
        "degree_cap": v.degree_cap,
        "sigma_n_equal": v.sigma_n_equal,
        "sigma_prime_equal": v.sigma_prime_equal,
    }))
}

pub fn sigma_tau(r: &SigmaTauReport, budget: &Budget) -> Result<Value> {
    Ok(json!({
        "lambda": rational(&r.lambda),
        "f_regular": r.f_regular,
        "sigma_right": ideal(&r.sigma_right, budget)?,
        "tau": ideal(&r.tau_at, budget)?,
        "regular_identity": r.regular_identity,
        "coprime_identity": r.coprime_identity,
        "breakdown": r.breakdown,
    }))
}

pub fn bs_report(r: &BsReport, budget: &Budget) -> Result<Value> {
    Ok(json!({
        "e": r.e,
        "gamma": r.gamma,
        "digits": r.digits,
        "roots": r.roots.iter().map(rational).collect::<Vec<_>>(),
        "coefficients": r.coefficients.iter().map(rational).collect::<Vec<_>>(),
        "fpure_model": ideal(&r.fpure_model, budget)?,
    }))
}

pub fn lasttheo(r: &LastTheoReport) -> Value {
    json!({
        "e": r.e,
        "violations": r.violations,
        "entries": r.entries.iter().map(|x| json!({
            "m": x.m,
            "root": rational(&x.root),
            "lambda": rational(&x.lambda),
            "persistent": x.persistent,
            "nontrivial": x.nontrivial,
        })).collect::<Vec<_>>(),
    })
}

pub fn error(e: &Error) -> Value {
    let kind = match e {
        Error::Config(_) => "config",
        Error::Syntax { .. } => "syntax",
        Error::UnknownVariable(_) => "unknown-variable",
        Error::RingMismatch => "ring-mismatch",
        Error::Invalid(_) => "invalid",
        Error::MissingTestElement(_) => "missing-test-element",
        Error::Budget(_) => "budget",
        Error::NoStabilization(_) => "no-stabilization",
        Error::Invariant(_) => "invariant",
    };
    json!({"kind": kind, "message": e.to_string(), "exit_code": e.exit_code()})
}
