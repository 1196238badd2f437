use cartier_lab::bernstein::{bs_polynomial, lasttheo_check};
use cartier_lab::prelude::*;

fn show(p: u32, vars: &[&str], twist: &str, f: &str, e: u32) -> Result<()> {
    let ring = RingSpec::new(p, vars)?;
    let module = CartierModule::parse(&ring, twist, None, false)?;
    let f = Polynomial::parse(f, &ring)?;
    let budget = Budget::default();
    let report = bs_polynomial(&module, &f, e, &budget)?;
    let roots: Vec<String> = report.roots.iter().map(|r| r.to_string()).collect();
    println!("p = {p}, twist {twist}, f = {f}, e = {e}");
    println!("  Γ = {:?}, roots [{}]", report.gamma, roots.join(", "));
    let check = lasttheo_check(&module, &f, e, &budget)?;
    for entry in &check.entries {
        println!(
            "  m = {:<3} λ = {:<6} persistent: {:<5} Gr_σ nonzero: {}",
            entry.m,
            entry.lambda.to_string(),
            entry.persistent,
            entry.nontrivial
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    show(5, &["x"], "1", "x", 1)?;
    show(5, &["x"], "x^4", "x", 1)?;
    show(7, &["x", "y"], "1", "x^2 + y^3", 1)?;
    show(3, &["x", "y"], "1", "x^2 + y^3", 2)
}
