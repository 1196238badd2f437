//! F-pure thresholds of the cusp x^2 + y^3 across characteristics.
//!
//! The pattern is 1/2 and 2/3 for p = 2, 3, then 5/6 for p ≡ 1 mod 3 and
//! 5/6 - 1/(6p) for p ≡ 2 mod 3.

use cartier_lab::prelude::*;

fn main() -> Result<()> {
    let primes: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("prime"))
        .collect();
    let primes = if primes.is_empty() { vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] } else { primes };
    for p in primes {
        let ring = RingSpec::new(p, &["x", "y"])?;
        let f = Polynomial::parse("x^2 + y^3", &ring)?;
        let filtration = TestModuleFiltration::new(CartierModule::canonical(&ring), f, Budget::default())?;
        let fpt = filtration.fpt()?;
        let tau = filtration.tau(&fpt)?;
        println!("p = {p:>2}: fpt = {fpt:<7} τ(fpt) = {tau}");
    }
    Ok(())
}
