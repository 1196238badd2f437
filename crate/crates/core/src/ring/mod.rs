//! Exact arithmetic: sparse polynomials over `F_p` and arbitrary-precision
//! rationals.

mod monomial;
mod parse;
mod poly;
mod rational;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::{MAX_PRIME, MAX_VARS};
use crate::error::{Error, Result};

pub use monomial::Monomial;
pub use poly::{base_p_digits, Polynomial};
pub use rational::{ceil_mul, is_integer_mul, multiplicative_order, ExactRational};
pub(crate) use rational::{biguint, pow_big};

/// Shared handle to a ring description.
pub type Ring = Arc<RingSpec>;

/// The polynomial ring `F_p[x_1, …, x_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    p: u32,
    vars: Vec<String>,
}

impl RingSpec {
    pub fn new<S: AsRef<str>>(p: u32, vars: &[S]) -> Result<Ring> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p as u64) {
            return Err(Error::Config(format!(
                "characteristic must be a prime in [2, {MAX_PRIME}], got {p}"
            )));
        }
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(Error::Config(format!(
                "between 1 and {MAX_VARS} variables are supported, got {}",
                vars.len()
            )));
        }
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().trim().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            let valid = v
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Config(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Config(format!("duplicate variable name `{v}`")));
            }
        }
        Ok(Arc::new(RingSpec { p, vars }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub(crate) fn reduce(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub(crate) fn inv(&self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p));
        let mut result = 1u64;
        let mut base = a as u64 % self.p as u64;
        let mut exp = self.p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            exp >>= 1;
        }
        result as u32
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.p, self.vars.join(","))
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        assert!(RingSpec::new(4, &["x"]).is_err());
        assert!(RingSpec::new(101, &["x"]).is_err());
        assert!(RingSpec::new(7, &["x", "x"]).is_err());
        assert!(RingSpec::new(7, &[""]).is_err());
        assert!(RingSpec::new(7, &["1x"]).is_err());
        assert!(RingSpec::new(7, &["a", "b", "c", "d", "e", "f", "g"]).is_err());
        let none: [&str; 0] = [];
        assert!(RingSpec::new(7, &none).is_err());
        assert!(RingSpec::new(97, &["x", "y"]).is_ok());
    }

    #[test]
    fn field_inverse() {
        let r = RingSpec::new(13, &["x"]).unwrap();
        for a in 1..13 {
            assert_eq!(r.mul(a, r.inv(a)), 1);
        }
    }
}
