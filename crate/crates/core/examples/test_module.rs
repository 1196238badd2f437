//! Stable images and test modules at zero for twisted polynomial rings.

use cartier_lab::cartmod::validate_test_element;
use cartier_lab::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    for p in [2u32, 3, 5] {
        let ring = RingSpec::new(p, &["x"])?;
        let twist = format!("x^{}", 2 * (p - 1));
        let module = CartierModule::parse(&ring, &twist, Some("x"), false)?;
        let stable = underline(&module, &budget)?;
        let tau = tau_zero(&module, &budget)?;
        println!(
            "p = {p}, twist {twist}: stable image {} (level {}), τ(M, f^0) = {tau}",
            stable.ideal, stable.stabilization_level
        );
    }

    let ring = RingSpec::new(3, &["x", "y"])?;
    let module = CartierModule::parse(&ring, "x^2*y^2", Some("x*y"), false)?;
    let c = Polynomial::parse("x*y", &ring)?;
    let trials = [Polynomial::parse("x^2*y", &ring)?, Polynomial::parse("x*y^3", &ring)?];
    let report = validate_test_element(&module, &c, &trials, &budget)?;
    println!("τ(M, f^0) with c = xy: {}", report.reference);
    for (t, value) in &report.trials {
        println!("  with c = {t}: {value}");
    }
    println!("all agree: {}", report.all_agree);
    Ok(())
}
