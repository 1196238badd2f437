//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expression := ['-'] term { ('+' | '-') term }
//! term       := factor { '*' factor }
//! factor     := base [ '^' uint ]
//! base       := uint | var | '(' expression ')'
//! ```

use super::{Polynomial, Ring};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

impl Polynomial {
    /// Parses `text`, reducing integer coefficients modulo `p`.
    pub fn parse(text: &str, ring: &Ring) -> Result<Polynomial> {
        let mut parser = Parser { src: text.as_bytes(), pos: 0, ring };
        let poly = parser.expression()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(poly)
    }
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expression(&mut self) -> Result<Polynomial> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                self.pos = start;
                return Err(self.error("expected an exponent"));
            }
            let k: u64 = digits
                .parse()
                .map_err(|_| Error::Syntax { position: start, message: "exponent too large".into() })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expression()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.ring.p() as u64;
                let residue = self
                    .digits()
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Polynomial::constant(self.ring, residue as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.var_index(name) {
                    Some(i) => Ok(Polynomial::variable(self.ring, i)),
                    None => Err(Error::UnknownVariable(name.to_string())),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::ring::{Monomial, Polynomial, RingSpec};

    #[test]
    fn parse_literal() {
        let r = RingSpec::new(7, &["x", "y"]).unwrap();
        let f = Polynomial::parse("x^2+y^3", &r).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coefficient(&Monomial::from_exponents(&[2, 0])), 1);
        assert_eq!(f.coefficient(&Monomial::from_exponents(&[0, 3])), 1);
    }

    #[test]
    fn coefficients_reduce() {
        let r = RingSpec::new(7, &["x", "y"]).unwrap();
        let f = Polynomial::parse("7*x + y", &r).unwrap();
        assert_eq!(f, Polynomial::variable(&r, 1));
        let g = Polynomial::parse("1000000000000000000000001*x", &r).unwrap();
        // 10^24 + 1 mod 7 = 2
        assert_eq!(g.to_string(), "2*x");
    }

    #[test]
    fn freshman_dream_at_two() {
        let r = RingSpec::new(2, &["x", "y"]).unwrap();
        let f = Polynomial::parse("(x+y)^2", &r).unwrap();
        assert_eq!(f, Polynomial::parse("x^2 + y^2", &r).unwrap());
    }

    #[test]
    fn errors_carry_position() {
        let r = RingSpec::new(7, &["x", "y"]).unwrap();
        match Polynomial::parse("x + * y", &r) {
            Err(crate::Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Polynomial::parse("x + z", &r),
            Err(crate::Error::UnknownVariable(v)) if v == "z"
        ));
        assert!(Polynomial::parse("(x + y", &r).is_err());
        assert!(Polynomial::parse("x^", &r).is_err());
        assert!(Polynomial::parse("", &r).is_err());
    }

    #[test]
    fn unary_minus_and_whitespace() {
        let r = RingSpec::new(5, &["x", "y"]).unwrap();
        let f = Polynomial::parse("  - x *  y ^ 2 ", &r).unwrap();
        assert_eq!(f.to_string(), "4*x*y^2");
    }
}
