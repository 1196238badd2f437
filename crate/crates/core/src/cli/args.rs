use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::cache::Cache;
use super::config::Config;
use super::{run, Command, JobSpec, Params, RunContext, TauRoute};
use crate::cartmod::Descriptor;
use crate::error::{Error, Result};
use crate::filtration::CandidateBounds;
use crate::ring::ExactRational;

#[derive(Parser, Debug)]
#[command(name = "cartier-lab", version, about = "Frobenius and Cartier invariants of hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the persistent result cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Ignore the configured cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Recompute cache hits and fail when they differ.
    #[arg(long, global = true)]
    cache_selftest: bool,
    /// Write the JSON document here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug, Default)]
struct BudgetArgs {
    #[arg(long, global = true)]
    max_pairs: Option<usize>,
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    #[arg(long, global = true)]
    e_max: Option<u32>,
    #[arg(long, global = true)]
    max_iterations: Option<usize>,
    #[arg(long, global = true)]
    max_probes: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct ModuleArgs {
    /// The characteristic.
    #[arg(long)]
    p: u32,
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',', required = true)]
    vars: Vec<String>,
    /// Twist polynomial g of the structure map κ∘(g·).
    #[arg(long, default_value = "1")]
    twist: String,
    #[arg(long)]
    test_element: Option<String>,
    #[arg(long)]
    assert_f_regular: bool,
}

impl ModuleArgs {
    fn descriptor(&self) -> Descriptor {
        Descriptor {
            p: self.p,
            vars: self.vars.clone(),
            twist: self.twist.clone(),
            test_element: self.test_element.clone(),
            assert_f_regular: self.assert_f_regular,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct FArgs {
    #[command(flatten)]
    module: ModuleArgs,
    /// The hypersurface equation.
    #[arg(long)]
    f: String,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Twisted Cartier image κ_g^e(h·I); plain Frobenius root for twist 1.
    Root {
        #[command(flatten)]
        module: ModuleArgs,
        /// Comma-separated generators of I.
        #[arg(long, value_delimiter = ',', required = true)]
        ideal: Vec<String>,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long)]
        h: Option<String>,
    },
    /// Test module τ(M, f^λ).
    Tau {
        #[command(flatten)]
        target: FArgs,
        #[arg(long)]
        lambda: ExactRational,
        /// Evaluate level by level instead of exactly.
        #[arg(long)]
        levels: bool,
        #[arg(long)]
        e_start: Option<u32>,
        #[arg(long)]
        e_cap: Option<u32>,
        #[arg(long)]
        consecutive_stable: Option<u32>,
    },
    /// F-pure threshold.
    Fpt {
        #[command(flatten)]
        target: FArgs,
    },
    /// F-jumping numbers in a window.
    Jumps {
        #[command(flatten)]
        target: FArgs,
        /// `lo,hi`.
        #[arg(long, value_parser = pair::<ExactRational>)]
        window: Option<(ExactRational, ExactRational)>,
        /// `A,B`: denominators p^i(p^j-1) with i ≤ A, j ≤ B.
        #[arg(long, value_parser = pair::<u32>)]
        bounds: Option<(u32, u32)>,
        /// Extend periodically up to this value.
        #[arg(long)]
        extend_to: Option<ExactRational>,
    },
    /// Graded piece τ(λ-ε)/τ(λ).
    Gr {
        #[command(flatten)]
        target: FArgs,
        #[arg(long)]
        lambda: ExactRational,
    },
    /// Nilpotence of κ^e f^{a_e} on the graded piece.
    Nilpotence {
        #[command(flatten)]
        target: FArgs,
        #[arg(long)]
        lambda: ExactRational,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Defaults to ⌈λ(p^e-1)⌉.
        #[arg(long)]
        a_e: Option<String>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Non-F-pure submodule σ(M, f^λ).
    Sigma {
        #[command(flatten)]
        target: FArgs,
        #[arg(long)]
        lambda: ExactRational,
        /// Also compare with the truncated variants.
        #[arg(long)]
        variants: bool,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        degree_cap: Option<u32>,
        /// Also compare with τ.
        #[arg(long)]
        compare_tau: bool,
    },
    /// Graded piece σ(λ)/σ(λ+ε).
    Grsigma {
        #[command(flatten)]
        target: FArgs,
        #[arg(long)]
        lambda: ExactRational,
        /// Level of a nilpotence test on the piece.
        #[arg(long)]
        a: Option<u32>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Level-e Bernstein-Sato roots.
    Bspoly {
        #[command(flatten)]
        target: FArgs,
        #[arg(long, default_value_t = 1)]
        e: u32,
        /// Check that every root yields a nonzero σ graded piece.
        #[arg(long)]
        lasttheo: bool,
    },
    /// Run a verification suite: paper-values, properties, oracles or all.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Run a job given as a JSON file.
    Job { path: PathBuf },
}

/// Parses `a,b`.
fn pair<T: std::str::FromStr>(text: &str) -> std::result::Result<(T, T), String>
where
    T::Err: std::fmt::Display,
{
    let (a, b) = text.split_once(',').ok_or_else(|| format!("expected two comma-separated values, got `{text}`"))?;
    let parse = |v: &str| v.trim().parse::<T>().map_err(|e| format!("`{v}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn target_job(command: Command, target: FArgs) -> JobSpec {
    JobSpec { command, module: Some(target.module.descriptor()), f: Some(target.f), params: Params::default() }
}

fn job_of(sub: Sub) -> Result<JobSpec> {
    Ok(match sub {
        Sub::Root { module, ideal, e, h } => JobSpec {
            command: Command::Root,
            module: Some(module.descriptor()),
            f: None,
            params: Params { ideal: Some(ideal), e: Some(e), h, ..Params::default() },
        },
        Sub::Tau { target, lambda, levels, e_start, e_cap, consecutive_stable } => {
            let mut job = target_job(Command::Tau, target);
            job.params = Params {
                lambda: Some(lambda),
                route: Some(if levels { TauRoute::Levels } else { TauRoute::Exact }),
                e_start,
                e_cap,
                consecutive_stable,
                ..Params::default()
            };
            job
        }
        Sub::Fpt { target } => target_job(Command::Fpt, target),
        Sub::Jumps { target, window, bounds, extend_to } => {
            let mut job = target_job(Command::Jumps, target);
            job.params.window = window;
            job.params.bounds = bounds.map(|(a, b)| CandidateBounds { a, b });
            job.params.extend_to = extend_to;
            job
        }
        Sub::Gr { target, lambda } => {
            let mut job = target_job(Command::Gr, target);
            job.params.lambda = Some(lambda);
            job
        }
        Sub::Nilpotence { target, lambda, e, a_e, k_max } => {
            let mut job = target_job(Command::Nilpotence, target);
            job.params = Params { lambda: Some(lambda), e: Some(e), a_e, k_max, ..Params::default() };
            job
        }
        Sub::Sigma { target, lambda, variants, n, degree_cap, compare_tau } => {
            let mut job = target_job(Command::Sigma, target);
            job.params =
                Params { lambda: Some(lambda), variants, n, degree_cap, compare_tau, ..Params::default() };
            job
        }
        Sub::Grsigma { target, lambda, a, k_max } => {
            let mut job = target_job(Command::Grsigma, target);
            job.params = Params { lambda: Some(lambda), e: a, k_max, ..Params::default() };
            job
        }
        Sub::Bspoly { target, e, lasttheo } => {
            let mut job = target_job(Command::Bspoly, target);
            job.params = Params { e: Some(e), lasttheo, ..Params::default() };
            job
        }
        Sub::Verify { suite } => {
            let mut job = JobSpec::new(Command::Verify);
            job.params.suite = Some(suite);
            job
        }
        Sub::Job { path } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?
        }
    })
}

/// Entry point of the binary; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cartier-lab: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let mut config = Config::load(cli.config.as_deref())?;
    let b = &cli.budget;
    let budget = &mut config.budget;
    if let Some(v) = b.max_pairs {
        budget.max_pairs = v;
    }
    if let Some(v) = b.max_degree {
        budget.max_degree = v;
    }
    if let Some(v) = b.max_terms {
        budget.max_terms = v;
    }
    if let Some(v) = b.e_max {
        budget.e_max = v;
    }
    if let Some(v) = b.max_iterations {
        budget.max_iterations = v;
    }
    if let Some(v) = b.max_probes {
        budget.max_probes = v;
    }
    let cache_dir = if cli.no_cache { None } else { cli.cache_dir.clone().or(config.cache_dir.clone()) };
    let cache = cache_dir.map(Cache::persistent).transpose()?;
    let job = job_of(cli.command)?;
    let progress = |line: &str| eprintln!("{line}");
    let ctx = RunContext {
        budget: config.budget,
        cache: cache.as_ref(),
        cache_selftest: cli.cache_selftest,
        progress: Some(&progress),
    };
    let outcome = run(&job, &ctx);
    let text = outcome.to_json_string();
    match &cli.output {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(outcome.exit_code)
}
