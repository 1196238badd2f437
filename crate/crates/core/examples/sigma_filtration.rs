//! The non-F-pure filtration σ on (F_p[x], x^{p-1}) with f = x^2, its
//! variants, and its comparison with τ for a non-F-regular module.

use cartier_lab::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let p = 5;
    let ring = RingSpec::new(p, &["x"])?;
    let module = CartierModule::parse(&ring, "x^4", None, false)?;
    let sigma = SigmaFiltration::new(module, Polynomial::parse("x^2", &ring)?, budget.clone())?;
    for l in ["0", "1/4", "1/2", "13/24", "3/4", "1", "6/5"] {
        let lambda: ExactRational = l.parse().unwrap();
        let s = sigma.sigma(&lambda)?;
        println!("σ({l}) = {} via {:?}", s.ideal, s.route);
    }
    let half: ExactRational = "1/2".parse().unwrap();
    let variants = sigma.variants_check(&half, 2, 8)?;
    println!("σ = σ_n = σ' at 1/2: {}", variants.all_equal());

    let plane = RingSpec::new(3, &["x", "y"])?;
    let module = CartierModule::parse(&plane, "x^2", Some("x"), false)?;
    let f = Polynomial::parse("y", &plane)?;
    let tau = TestModuleFiltration::new(module.clone(), f.clone(), budget.clone())?;
    let sigma = SigmaFiltration::new(module, f, budget)?;
    let cmp = sigma.sigma_tau_comparison(&tau, &ExactRational::one())?;
    println!(
        "twist x^2, f = y at λ = 1: σ(1+ε) = {}, τ(1) = {}, breakdown: {}",
        cmp.sigma_right, cmp.tau_at, cmp.breakdown
    );
    Ok(())
}
