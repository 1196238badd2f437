//! Nilpotence of κ^e f^{a_e} on graded pieces of the cusp filtration,
//! compared with the integrality prediction.

use cartier_lab::filtration::CandidateBounds;
use cartier_lab::prelude::*;
use num_bigint::BigInt;

fn main() -> Result<()> {
    for p in [5u32, 7] {
        let ring = RingSpec::new(p, &["x", "y"])?;
        let f = Polynomial::parse("x^2 + y^3", &ring)?;
        let t = TestModuleFiltration::new(CartierModule::canonical(&ring), f, Budget::default())?;
        let jumps = t.jumping_numbers(&ExactRational::zero(), &ExactRational::one(), CandidateBounds::default())?;
        for lambda in jumps.lambdas() {
            for e in 1..=3u32 {
                let a_e = lambda.ceil_mul(&(BigInt::from(p).pow(e) - 1));
                let v = t.nilpotence_verdict(&lambda, e, &a_e, 128)?.ensure_agreement()?;
                println!("p = {p} λ = {lambda} e = {e} a_e = {a_e}: {:?}", v.verdict);
            }
        }
    }
    Ok(())
}
