//! Parser for the canonical expression syntax: integers, generator names,
//! `+ - * / ^` and parentheses.

use num_bigint::BigInt;

use super::{AlgebraError, Gens, LaurentPoly, RationalFunction};

pub fn parse_rational(gens: &Gens, src: &str) -> Result<RationalFunction, AlgebraError> {
    let mut p = Parser { gens, chars: src.chars().collect(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses an expression that must reduce to a Laurent polynomial.
pub fn parse_laurent(gens: &Gens, src: &str) -> Result<LaurentPoly, AlgebraError> {
    let r = parse_rational(gens, src)?;
    match r.den().as_constant() {
        Some(c) if c == BigInt::from(1) => Ok(r.num().clone()),
        _ => Err(AlgebraError::Parse(format!("not a Laurent polynomial: {src}"))),
    }
}

struct Parser<'a> {
    gens: &'a Gens,
    chars: Vec<char>,
    pos: usize,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | ':' | '\'' | '[' | ']' | '.')
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            if c == '+' || c == '-' {
                self.pos += 1;
                let t = self.term()?;
                acc = if c == '+' { &acc + &t } else { &acc - &t };
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, AlgebraError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            if c == '*' || c == '/' {
                self.pos += 1;
                let t = self.unary()?;
                if c == '*' {
                    acc = &acc * &t;
                } else {
                    if t.is_zero() {
                        return Err(AlgebraError::DivisionByZero);
                    }
                    acc = &acc / &t;
                }
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, AlgebraError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(-&v);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = if self.peek() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let k = self.integer()?;
            let k: i64 = k.try_into().map_err(|_| self.err("exponent too large"))?;
            if neg && base.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
            return Ok(base.pow(if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn atom(&mut self) -> Result<RationalFunction, AlgebraError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFunction::from_poly(LaurentPoly::constant(self.gens, n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && ident_char(self.chars[self.pos]) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let i = self
                    .gens
                    .iter()
                    .position(|g| *g == name)
                    .ok_or_else(|| AlgebraError::Parse(format!("unknown generator {name}")))?;
                Ok(RationalFunction::var(self.gens, i))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::gens;

    #[test]
    fn round_trips_canonical_form() {
        let g = gens(&["a", "b:1", "c'"]);
        let r = parse_rational(&g, "(1 + a*b:1^2)/(c'*(a - 1)) - 3").unwrap();
        let again = parse_rational(&g, &r.to_canonical()).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn unknown_generator_errors() {
        let g = gens(&["a"]);
        assert!(parse_rational(&g, "a + z").is_err());
    }
}
