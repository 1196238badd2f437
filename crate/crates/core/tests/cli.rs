use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cartier-lab"));
    cmd.env_remove("CARTIER_LAB_CACHE_DIR");
    cmd
}

fn run(args: &[&str]) -> (i32, Value, Output) {
    let out = bin().args(args).output().expect("binary runs");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), doc, out)
}

const CUSP7: [&str; 8] = ["--p", "7", "--vars", "x,y", "--twist", "1", "--f", "x^2+y^3"];

fn with<'a>(head: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(tail).copied().collect()
}

#[test]
fn tau_reports_the_maximal_ideal() {
    let (code, doc, _) = run(&with(&["--no-cache", "tau"], &with(&CUSP7, &["--lambda", "5/6"])));
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], "cartier-lab/1");
    assert_eq!(doc["result"]["tau"], serde_json::json!(["x", "y"]));
    assert_eq!(doc["inputs"]["params"]["lambda"], serde_json::json!({"num": 5, "den": 6}));
}

#[test]
fn fpt_is_an_exact_rational() {
    let (code, doc, _) = run(&["--no-cache", "fpt", "--p", "2", "--vars", "x,y", "--twist", "1", "--f", "x^2+y^3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["fpt"], serde_json::json!({"num": 1, "den": 2}));
}

#[test]
fn bspoly_converse_failure() {
    let (code, doc, _) = run(&["--no-cache", "bspoly", "--p", "5", "--vars", "x", "--twist", "x^4", "--f", "x", "--e", "1"]);
    assert_eq!(code, 0);
    let gamma: Vec<u64> = serde_json::from_value(doc["result"]["gamma"].clone()).unwrap();
    assert!(!gamma.contains(&4));
}

#[test]
fn jumps_nilpotence_and_sigma_commands() {
    let (code, doc, _) = run(&with(&["--no-cache", "jumps"], &with(&CUSP7, &["--window", "0,1", "--extend-to", "2"])));
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["jumps"].as_array().unwrap().len(), 4);
    let (code, doc, _) = run(&with(&["--no-cache", "nilpotence"], &with(&CUSP7, &["--lambda", "5/6", "--e", "2"])));
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["result"]["agree"], true);
    let (code, doc, _) = run(&with(&["--no-cache", "sigma"], &with(&CUSP7, &["--lambda", "5/6", "--variants", "--compare-tau"])));
    assert_eq!(code, 0, "{doc}");
    for cmd in [vec!["gr", "--lambda", "5/6"], vec!["grsigma", "--lambda", "1"]] {
        let (code, _, out) = run(&with(&["--no-cache"], &with(&cmd[..1], &with(&CUSP7, &cmd[1..]))));
        assert_eq!(code, 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (code, doc, _) = run(&["--no-cache", "root", "--p", "3", "--vars", "x,y", "--ideal", "x^5*y^2", "--e", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["image"], serde_json::json!(["x"]));
}

#[test]
fn exit_codes() {
    let (code, doc, _) = run(&["--no-cache", "fpt", "--p", "4", "--vars", "x", "--f", "x"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["exit_code"], 2);
    let (code, _, _) = run(&["--no-cache", "tau", "--p", "7", "--vars", "x", "--f", "x", "--lambda", "-1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&with(&["--no-cache", "--max-terms", "2", "tau"], &with(&CUSP7, &["--lambda", "5/6"])));
    assert_eq!(code, 3);
    let (code, _, _) = run(&["--no-cache", "verify", "nonsense"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_suites_pass() {
    for suite in ["paper-values", "oracles"] {
        let (code, doc, out) = run(&["--no-cache", "verify", suite]);
        assert_eq!(code, 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(doc["result"]["failed"], 0);
    }
}

fn cache_files(dir: &Path) -> usize {
    walk(dir).into_iter().filter(|p| p.extension().is_some_and(|e| e == "json")).count()
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

#[test]
fn cache_is_persistent_and_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = with(&["fpt"], &CUSP7);
    let plain = run(&with(&["--no-cache"], &args)).2.stdout;
    let first = run(&with(&["--cache-dir", cache], &args)).2.stdout;
    assert_eq!(cache_files(dir.path()), 1);
    let second = run(&with(&["--cache-dir", cache], &args)).2.stdout;
    let (code, _, checked) = run(&with(&["--cache-dir", cache, "--cache-selftest"], &args));
    assert_eq!(code, 0);
    assert_eq!(plain, first);
    assert_eq!(first, second);
    assert_eq!(second, checked.stdout);
    let env = bin().env("CARTIER_LAB_CACHE_DIR", cache).args(&args).output().unwrap();
    assert_eq!(env.stdout, plain);
    assert_eq!(cache_files(dir.path()), 1);
}

#[test]
fn jobs_configs_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    std::fs::write(
        &job,
        r#"{"command": "tau",
            "module": {"p": 7, "vars": ["x", "y"], "twist": "1"},
            "f": "x^2 + y^3",
            "params": {"lambda": "5/6"}}"#,
    )
    .unwrap();
    let out = dir.path().join("out.json");
    let (code, _, _) = run(&["--no-cache", "-o", out.to_str().unwrap(), "job", job.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["result"]["tau"], serde_json::json!(["x", "y"]));

    let config = dir.path().join("config.toml");
    std::fs::write(&config, "[budget]\nmax_terms = 2\n").unwrap();
    let (code, _, _) = run(&["--no-cache", "--config", config.to_str().unwrap(), "job", job.to_str().unwrap()]);
    assert_eq!(code, 3);
    let env = bin()
        .env("CARTIER_LAB_MAX_TERMS", "2")
        .args(["--no-cache", "job", job.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));

    std::fs::write(&job, r#"{"command": "tau", "bogus": 1}"#).unwrap();
    let (code, _, _) = run(&["--no-cache", "job", job.to_str().unwrap()]);
    assert_eq!(code, 2);
}
