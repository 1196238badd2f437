use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};


use super::{Monomial, Ring};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Sparse polynomial over `F_p`.
///
/// Terms are kept sorted in strictly descending grevlex order and carry
/// coefficients in `[1, p-1]`; the zero polynomial has no terms.
#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        Self::monomial(ring, Monomial::one(), c)
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: i64) -> Self {
        let c = ring.reduce(c);
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn variable(ring: &Ring, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Self::monomial(ring, Monomial::var(i), 1)
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            let c = ring.reduce(c);
            let slot = acc.entry(m).or_insert(0);
            *slot = ring.add(*slot, c);
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Ring, acc: HashMap<Monomial, u32>) -> Self {
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Terms already sorted descending with nonzero reduced coefficients.
    pub(crate) fn from_sorted_terms(ring: &Ring, terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| *c != 0 && *c < ring.p()));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, u32)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, 1)) => self.clone(),
            Some(&(_, c)) => self.scale(self.ring.inv(c)),
        }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let c = c % self.ring.p();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|&(m, a)| (m, self.ring.mul(a, c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self.terms.iter().map(|&(m, a)| (m, self.ring.p() - a)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// `self + c * mono * other`, the workhorse of reduction.
    pub(crate) fn add_scaled(&self, c: u32, mono: &Monomial, other: &Polynomial) -> Polynomial {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|&(m, x)| (mono.mul(&m), ring.mul(x, c))).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(&&(ma, ca)), Some(&(mb, cb))) => match ma.cmp(&mb) {
                    std::cmp::Ordering::Greater => {
                        out.push((ma, ca));
                        a.next();
                    }
                    std::cmp::Ordering::Less => {
                        out.push((mb, cb));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        let s = ring.add(ca, cb);
                        if s != 0 {
                            out.push((ma, s));
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ring(other);
        self.add_scaled(1, &Monomial::one(), other)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ring(other);
        self.add_scaled(self.ring.p() - 1, &Monomial::one(), other)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let terms = self.terms.iter().map(|&(t, c)| (t.mul(m), c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ring(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms[0];
            return self.mul_monomial(&m).scale(c);
        }
        if self.terms.len() == 1 {
            return other.mul(self);
        }
        let ring = &self.ring;
        let p = ring.p() as u64;
        let mut acc: HashMap<Monomial, u64> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                let slot = acc.entry(ma.mul(&mb)).or_insert(0);
                *slot = (*slot + ca as u64 * cb as u64) % p;
            }
        }
        let mut terms: Vec<(Monomial, u32)> = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (m, c as u32))
            .collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn try_mul(&self, other: &Polynomial, budget: &Budget) -> Result<Polynomial> {
        budget.check_terms(self.len().saturating_mul(other.len()), "product")?;
        Ok(self.mul(other))
    }

    /// Frobenius twist: every exponent multiplied by `q`, coefficients fixed.
    ///
    /// Equals `self^q` whenever `q` is a power of the characteristic.
    pub fn exponent_scale(&self, q: u32) -> Polynomial {
        let terms = self.terms.iter().map(|&(m, c)| (m.scale(q), c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    fn small_pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        for _ in 0..k {
            result = result.mul(self);
        }
        result
    }

    /// `self^k` via the base-`p` digits of `k`: `f^k = Π (f^{k_i})^{[p^i]}`.
    pub fn pow(&self, k: u64) -> Polynomial {
        self.pow_digits(&base_p_digits_u64(k, self.ring.p()))
    }

    pub fn pow_big(&self, k: &BigUint) -> Polynomial {
        self.pow_digits(&base_p_digits(k, self.ring.p()))
    }

    /// `self^k` guarded by the term budget before any multiplication happens.
    pub fn try_pow(&self, k: &BigUint, budget: &Budget) -> Result<Polynomial> {
        let digits = base_p_digits(k, self.ring.p());
        let bound = self.power_term_bound(&digits);
        if bound > budget.max_terms as f64 {
            return Err(Error::Budget(format!(
                "power of a {}-term polynomial to exponent {k} may exceed the term budget",
                self.len()
            )));
        }
        Ok(self.pow_digits(&digits))
    }

    /// Upper bound on the number of terms of `self^k`, `k` given by its digits.
    fn power_term_bound(&self, digits: &[u32]) -> f64 {
        let t = self.len() as f64;
        if t <= 1.0 {
            return 1.0;
        }
        // each digit factor f^d has at most C(t-1+d, d) terms
        let mut sparse = 1.0f64;
        for &d in digits {
            let mut c = 1.0f64;
            for j in 1..=d {
                c *= (t - 1.0 + j as f64) / j as f64;
            }
            sparse *= c;
        }
        // all monomials of degree <= k * deg f
        let k: f64 = digits
            .iter()
            .rev()
            .fold(0.0, |acc, &d| acc * self.ring.p() as f64 + d as f64);
        let top = k * self.degree().unwrap_or(0) as f64;
        let n = self.ring.nvars();
        let mut dense = 1.0f64;
        for j in 1..=n {
            dense *= (top + j as f64) / j as f64;
        }
        sparse.min(dense)
    }

    fn pow_digits(&self, digits: &[u32]) -> Polynomial {
        let p = self.ring.p();
        let mut result = Polynomial::one(&self.ring);
        let mut q: u32 = 1;
        for (i, &d) in digits.iter().enumerate() {
            if d > 0 {
                let piece = self.small_pow(d).exponent_scale(q);
                result = result.mul(&piece);
            }
            if i + 1 < digits.len() {
                q = q.checked_mul(p).expect("exponent overflow in pow");
            }
        }
        result
    }

    pub fn evaluate_terms<F: FnMut(&Monomial, u32)>(&self, mut f: F) {
        for (m, c) in &self.terms {
            f(m, *c);
        }
    }

    fn assert_same_ring(&self, other: &Polynomial) {
        assert!(self.ring == other.ring, "polynomials from different rings");
    }
}

/// Little-endian base-`p` digits of `k` (empty for zero).
pub fn base_p_digits(k: &BigUint, p: u32) -> Vec<u32> {
    let mut digits = Vec::new();
    let mut rest = k.clone();
    let base = BigUint::from(p);
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&base);
        digits.push(r.to_u32().unwrap());
        rest = q;
    }
    digits
}

pub(crate) fn base_p_digits_u64(mut k: u64, p: u32) -> Vec<u32> {
    let mut digits = Vec::new();
    while k > 0 {
        digits.push((k % p as u64) as u32);
        k /= p as u64;
    }
    digits
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (v, name) in self.ring.vars().iter().enumerate() {
                match m.exponent(v) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
