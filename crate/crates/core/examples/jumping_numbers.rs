use cartier_lab::filtration::CandidateBounds;
use cartier_lab::prelude::*;

fn main() -> Result<()> {
    let ring = RingSpec::new(5, &["x", "y"])?;
    let budget = Budget::default();
    for text in ["x^2 + y^3", "x*y*(x + y)", "x^3 + y^4"] {
        let f = Polynomial::parse(text, &ring)?;
        let filtration = TestModuleFiltration::new(CartierModule::canonical(&ring), f, budget.clone())?;
        let zero = ExactRational::zero();
        let one = ExactRational::one();
        let report = filtration.jumping_numbers(&zero, &one, CandidateBounds::default())?;
        let report = filtration.extend_periodically(&report, &ExactRational::from_integer(2))?;
        println!("f = {text}  (complete: {})", report.complete);
        for jump in &report.jumps {
            println!("  λ = {:<6} τ = {}", jump.lambda.to_string(), jump.tau);
        }
        for w in &report.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
