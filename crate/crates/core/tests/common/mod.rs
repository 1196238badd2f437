#![allow(dead_code)]

use cartier_lab::prelude::*;
use cartier_lab::ring::{Monomial, Ring};
use proptest::prelude::*;

pub const PRIMES: [u32; 4] = [2, 3, 5, 7];

pub fn ring(p: u32, nvars: usize) -> Ring {
    let names = ["x", "y", "z"];
    RingSpec::new(p, &names[..nvars]).unwrap()
}

/// Raw polynomial data: exponent pairs and integer coefficients.
pub type Terms = Vec<([u32; 2], i64)>;

pub fn terms(max_terms: usize, max_exp: u32) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::array::uniform2(0..=max_exp), -20i64..20), 0..=max_terms)
}

pub fn build(ring: &Ring, t: &Terms) -> Polynomial {
    let n = ring.nvars();
    Polynomial::from_terms(
        ring,
        t.iter().map(|(e, c)| (Monomial::from_exponents(&e[..n]), *c)),
    )
}

pub fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(PRIMES.to_vec())
}

pub fn budget() -> Budget {
    Budget::default()
}

pub fn q(s: &str) -> ExactRational {
    s.parse().unwrap()
}
