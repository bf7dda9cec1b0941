//! A small expression language for entries of forms.
//!
//! Grammar: sums, differences, products and quotients of `t`, `z`
//! (`zeta_m`), `i` (needs `4 | m`), rationals and parenthesised
//! subexpressions; `^` takes an integer exponent, e.g. `z^-1` or
//! `(1 - t)^(-2)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ratfunc::RationalFunction;
use crate::field_arith::CyclotomicNumber;
use crate::{Error, Result};

pub fn parse_expression(m: u64, s: &str) -> Result<RationalFunction> {
    let mut p = Parser {
        m,
        src: s,
        chars: s.char_indices().collect(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    m: u64,
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        let at = self.chars.get(self.pos).map_or(self.src.len(), |c| c.0);
        Error::Parse(format!("{what} at offset {at} in {:?}", self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.checked_mul(&self.unary()?)?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.checked_div(&d).map_err(|_| self.error("division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = self.integer()?;
        if paren && !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        let e: i64 = i64::try_from(e).map_err(|_| self.error("exponent too large"))?;
        base.pow(if neg { -e } else { e })
            .map_err(|_| self.error("zero raised to a negative power"))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        Ok(text.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some('t') => {
                self.pos += 1;
                Ok(RationalFunction::t(self.m))
            }
            Some('z') => {
                self.pos += 1;
                Ok(RationalFunction::constant(CyclotomicNumber::zeta_power(self.m, 1)))
            }
            Some('i') => {
                self.pos += 1;
                let i = CyclotomicNumber::imaginary_unit(self.m)
                    .map_err(|_| self.error("'i' needs a conductor divisible by 4"))?;
                Ok(RationalFunction::constant(i))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFunction::from_rational(self.m, &BigRational::from_integer(n)))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::LaurentPoly;

    #[test]
    fn parses_laurent_expressions() {
        let a = parse_expression(1, "t + t^-1 - 2").unwrap();
        let b = RationalFunction::from_laurent(&LaurentPoly::from_integer_terms(1, &[(1, 1), (-1, 1), (0, -2)]));
        assert_eq!(a, b);
    }

    #[test]
    fn parses_cyclotomic_constants() {
        let a = parse_expression(5, "z + z^-1").unwrap();
        let g = &CyclotomicNumber::zeta_power(5, 1) + &CyclotomicNumber::zeta_power(5, 4);
        assert_eq!(a.as_constant(), Some(g));
        let b = parse_expression(4, "i*(1 - t^-1)/(1 - i) - i*(1 - t)/(1 + i)").unwrap();
        assert_eq!(b.bar(), b);
        assert_eq!(parse_expression(3, "1/2").unwrap().as_constant().unwrap().as_rational(), Some(BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expression(1, "t +").is_err());
        assert!(parse_expression(1, "i").is_err());
        assert!(parse_expression(1, "1/(t - t)").is_err());
        assert!(parse_expression(1, "(t").is_err());
    }
}
