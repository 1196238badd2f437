use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced fraction with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(ExactRational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Shorthand for small literals; panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// `⌈self · m⌉`.
    pub fn ceil_mul(&self, m: &BigInt) -> BigInt {
        ceil_mul(self, m)
    }

    /// Whether `self · m` is an integer.
    pub fn is_integer_mul(&self, m: &BigInt) -> bool {
        is_integer_mul(self, m)
    }

    /// Splits the denominator as `p^i · d` with `gcd(d, p) = 1`.
    pub fn p_split(&self, p: u32) -> (u32, BigInt) {
        let p = BigInt::from(p);
        let mut d = self.denom().clone();
        let mut i = 0;
        while d.is_multiple_of(&p) {
            d /= &p;
            i += 1;
        }
        (i, d)
    }

    pub fn denominator_divisible_by(&self, p: u32) -> bool {
        self.denom().is_multiple_of(&BigInt::from(p))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    /// Nonnegative integer part as `BigUint`; panics when negative.
    pub fn to_biguint_floor(&self) -> BigUint {
        self.floor().to_biguint().expect("nonnegative")
    }
}

/// `⌈λ · m⌉` computed exactly.
pub fn ceil_mul(lambda: &ExactRational, m: &BigInt) -> BigInt {
    let num = lambda.numer() * m;
    num.div_ceil(lambda.denom())
}

/// Whether `λ · m ∈ ℤ`.
pub fn is_integer_mul(lambda: &ExactRational, m: &BigInt) -> bool {
    (lambda.numer() * m).is_multiple_of(lambda.denom())
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("cannot parse rational `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Self::new(n, d)
            }
            None => Ok(Self::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl ExactRational {
    pub fn cmp_int(&self, n: i64) -> Ordering {
        self.0.cmp(&BigRational::from_integer(n.into()))
    }
}

fn int_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

/// Serialized as `{"num": …, "den": …}`; integers that overflow `i64` become strings.
impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("num", &int_json(self.numer()))?;
        map.serialize_entry("den", &int_json(self.denom()))?;
        map.end()
    }
}

/// Accepts either the `{"num","den"}` object or an `"a/b"` string.
impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        let as_int = |v: &serde_json::Value| -> Option<BigInt> {
            match v {
                serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
                serde_json::Value::String(s) => s.parse().ok(),
                _ => None,
            }
        };
        match &value {
            serde_json::Value::String(s) => s.parse().map_err(de::Error::custom),
            serde_json::Value::Object(map) => {
                let num = map.get("num").and_then(as_int).ok_or_else(|| de::Error::missing_field("num"))?;
                let den = map.get("den").and_then(as_int).ok_or_else(|| de::Error::missing_field("den"))?;
                ExactRational::new(num, den).map_err(de::Error::custom)
            }
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(ExactRational::from_integer)
                .ok_or_else(|| de::Error::custom("expected an integer")),
            _ => Err(de::Error::custom("expected a rational")),
        }
    }
}

/// Order of `p` in `(ℤ/d)^×`; `d` must be coprime to `p`. Orders up to 64
/// are found for any `d`; longer searches require `d ≤ guard`.
pub fn multiplicative_order(p: u32, d: &BigInt, guard: u64) -> Result<u32> {
    if !d.is_positive() {
        return Err(Error::Invalid(format!("modulus {d} must be positive")));
    }
    if d.is_one() {
        return Ok(1);
    }
    if !d.gcd(&BigInt::from(p)).is_one() {
        return Err(Error::Invalid(format!("{p} is not invertible modulo {d}")));
    }
    let p = BigInt::from(p);
    let mut acc = &p % d;
    let mut order = 1u64;
    let limit = if d.to_u64().is_some_and(|v| v <= guard) { d.to_u64().unwrap() } else { 64 };
    while !acc.is_one() {
        if order >= limit {
            return Err(Error::Budget(format!("order of {p} modulo {d} exceeds the search guard {guard}")));
        }
        acc = acc * &p % d;
        order += 1;
    }
    Ok(order as u32)
}

pub(crate) fn biguint(n: &BigInt) -> BigUint {
    match n.sign() {
        Sign::Minus => panic!("negative value where a natural number is required"),
        _ => n.magnitude().clone(),
    }
}

pub(crate) fn pow_big(p: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let g = 1_000_000;
        assert_eq!(multiplicative_order(7, &BigInt::from(6), g).unwrap(), 1);
        assert_eq!(multiplicative_order(5, &BigInt::from(6), g).unwrap(), 2);
        assert_eq!(multiplicative_order(2, &BigInt::from(7), g).unwrap(), 3);
        assert_eq!(multiplicative_order(3, &BigInt::from(1), g).unwrap(), 1);
        assert!(multiplicative_order(3, &BigInt::from(6), g).is_err());
        assert!(multiplicative_order(3, &BigInt::from(2_000_003), g).is_err());
        assert_eq!(multiplicative_order(11, &BigInt::from(1_771_560), g).unwrap(), 6);
    }

    #[test]
    fn ceil_and_integrality() {
        let l = ExactRational::frac(5, 6);
        assert_eq!(l.ceil_mul(&BigInt::from(6)), BigInt::from(5));
        assert!(l.is_integer_mul(&BigInt::from(6)));
        assert_eq!(l.ceil_mul(&BigInt::from(7)), BigInt::from(6));
        assert!(!l.is_integer_mul(&BigInt::from(7)));
        let four_fifths = ExactRational::frac(4, 5);
        for e in 1..=4u32 {
            let m = pow_big(5, e) - 1;
            assert!(!four_fifths.is_integer_mul(&m));
        }
    }

    #[test]
    fn parse_and_print() {
        let r: ExactRational = "10/12".parse().unwrap();
        assert_eq!(r.to_string(), "5/6");
        let n: ExactRational = " 3 ".parse().unwrap();
        assert_eq!(n, ExactRational::from_integer(3));
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("a/b".parse::<ExactRational>().is_err());
        assert_eq!("-2/-4".parse::<ExactRational>().unwrap(), ExactRational::frac(1, 2));
    }

    #[test]
    fn json_shape() {
        let r = ExactRational::frac(1, 2);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"num":1,"den":2}"#);
        let back: ExactRational = serde_json::from_str(r#"{"num":1,"den":2}"#).unwrap();
        assert_eq!(back, r);
        let s: ExactRational = serde_json::from_str(r#""5/6""#).unwrap();
        assert_eq!(s, ExactRational::frac(5, 6));
    }

    #[test]
    fn p_split_denominators() {
        let r = ExactRational::frac(7, 2 * 2 * 2 * 3);
        assert_eq!(r.p_split(2), (3, BigInt::from(3)));
        assert_eq!(r.p_split(5), (0, BigInt::from(24)));
    }
}
