//! Drives the command-line layer in-process: a job document, the cache and
//! a verification suite.

use cartier_lab::cli::cache::Cache;
use cartier_lab::cli::verify::run_suite;
use cartier_lab::cli::{run, JobSpec, RunContext};
use cartier_lab::prelude::*;

const JOB: &str = r#"{
  "command": "jumps",
  "module": {"p": 7, "vars": ["x", "y"], "twist": "1"},
  "f": "x^2 + y^3",
  "params": {"window": ["0", "1"], "extend_to": "2"}
}"#;

fn main() -> Result<()> {
    let job: JobSpec = serde_json::from_str(JOB).map_err(|e| Error::Invalid(e.to_string()))?;
    let cache = Cache::in_memory();
    let ctx = RunContext { cache: Some(&cache), ..RunContext::default() };
    let first = run(&job, &ctx);
    let second = run(&job, &ctx);
    println!("{}", first.to_json_string());
    println!("exit {}, cached copy identical: {}", first.exit_code, first.to_json_string() == second.to_json_string());

    let report = run_suite("paper-values", &Budget::default(), None)?;
    for check in &report.checks {
        println!("{}", check.line());
    }
    Ok(())
}
