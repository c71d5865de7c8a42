use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::gcd::gcd;
use super::{AlgebraError, Gens, LaurentPoly};

/// Quotient of Laurent polynomials kept in a canonical reduced form.
///
/// After normalization the denominator is a polynomial with no monomial
/// factor and positive leading coefficient, and it is coprime to the
/// numerator; all monomial content sits in the numerator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let den = LaurentPoly::one(p.gens());
        Self::normalized(p, den)
    }

    pub fn zero(gens: &Gens) -> Self {
        RationalFunction { num: LaurentPoly::zero(gens), den: LaurentPoly::one(gens) }
    }

    pub fn one(gens: &Gens) -> Self {
        RationalFunction { num: LaurentPoly::one(gens), den: LaurentPoly::one(gens) }
    }

    pub fn var(gens: &Gens, i: usize) -> Self {
        RationalFunction { num: LaurentPoly::var(gens, i), den: LaurentPoly::one(gens) }
    }

    pub fn constant(gens: &Gens, c: i64) -> Self {
        RationalFunction { num: LaurentPoly::constant(gens, BigInt::from(c)), den: LaurentPoly::one(gens) }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn gens(&self) -> &Gens {
        self.num.gens()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Canonical representative; idempotent.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        let gens = num.gens().clone();
        if num.is_zero() {
            return Self::zero(&gens);
        }
        if let Some((de, dc)) = den.as_monomial() {
            let inv: Vec<i32> = de.iter().map(|x| -x).collect();
            let mut n = num.shift(&inv);
            let g = n.content();
            let g = num_integer::Integer::gcd(&g, dc);
            let mut d = dc / &g;
            n = n.div_scalar(&g);
            if d.is_negative() {
                n = -&n;
                d = -d;
            }
            let den = LaurentPoly::constant(&gens, d);
            return RationalFunction { num: n, den };
        }
        let mn = num.min_exps();
        let md = den.min_exps();
        let neg_mn: Vec<i32> = mn.iter().map(|x| -x).collect();
        let neg_md: Vec<i32> = md.iter().map(|x| -x).collect();
        let pn = num.shift(&neg_mn);
        let pd = den.shift(&neg_md);
        let g = gcd(&pn, &pd);
        let (mut pn, mut pd) = if g.is_one() {
            (pn, pd)
        } else {
            (pn.exact_div(&g).expect("gcd divides"), pd.exact_div(&g).expect("gcd divides"))
        };
        if pd.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            pn = -&pn;
            pd = -&pd;
        }
        let m: Vec<i32> = mn.iter().zip(&md).map(|(a, b)| a - b).collect();
        RationalFunction { num: pn.shift(&m), den: pd }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.num.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, k: i64) -> Self {
        if k >= 0 {
            RationalFunction { num: self.num.pow(k as u32), den: self.den.pow(k as u32) }.normalize_cheap()
        } else {
            let inv = self.inv().expect("power of zero with negative exponent");
            inv.pow(-k)
        }
    }

    /// Powers of a reduced fraction stay reduced; only the sign may need fixing.
    fn normalize_cheap(self) -> Self {
        let neg = self.den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false);
        if neg {
            RationalFunction { num: -&self.num, den: -&self.den }
        } else {
            self
        }
    }

    /// Equality by cross-multiplication, independent of normal form.
    pub fn cross_eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Substitutes each generator by a rational function of a common ring.
    pub fn substitute(&self, values: &[RationalFunction]) -> RationalFunction {
        let n = subst_poly(&self.num, values);
        let d = subst_poly(&self.den, values);
        &n / &d
    }

    pub fn eval(&self, point: &[(BigInt, BigInt)]) -> Option<(BigInt, BigInt)> {
        let (a, b) = self.num.eval(point);
        let (c, d) = self.den.eval(point);
        if c.is_zero() {
            return None;
        }
        let mut n = a * d;
        let mut m = b * c;
        let g = num_integer::Integer::gcd(&n, &m);
        if !g.is_zero() {
            n /= &g;
            m /= &g;
        }
        if m.is_negative() {
            n = -n;
            m = -m;
        }
        Some((n, m))
    }

    pub fn to_canonical(&self) -> String {
        if self.den.is_one() {
            return self.num.to_canonical();
        }
        let wrap = |p: &LaurentPoly| {
            if p.num_terms() > 1 {
                format!("({})", p.to_canonical())
            } else {
                p.to_canonical()
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }

    pub fn to_json(&self) -> Value {
        json!({"num": self.num.to_json(), "den": self.den.to_json()})
    }

    pub fn from_json(gens: &Gens, v: &Value) -> Result<Self, AlgebraError> {
        let n = LaurentPoly::from_json(gens, &v["num"])?;
        let d = LaurentPoly::from_json(gens, &v["den"])?;
        Self::new(n, d)
    }
}

fn subst_poly(p: &LaurentPoly, values: &[RationalFunction]) -> RationalFunction {
    let gens = values[0].gens().clone();
    let mut acc = RationalFunction::zero(&gens);
    for (e, c) in p.terms() {
        let mut t = RationalFunction::from_poly(LaurentPoly::constant(&gens, c.clone()));
        for (i, &x) in e.iter().enumerate() {
            if x != 0 {
                t = &t * &values[i].pow(x as i64);
            }
        }
        acc = &acc + &t;
    }
    acc
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.to_canonical())
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::normalized(n, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction { num: &self.num * &rhs.num, den: self.den.clone() };
        }
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RationalFunction::normalized(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::gens;

    #[test]
    fn monomial_cancellation() {
        let g = gens(&["x", "y"]);
        let x = LaurentPoly::var(&g, 0);
        let y = LaurentPoly::var(&g, 1);
        let r = RationalFunction::new(&(&x * &x) * &y, &x * &y).unwrap();
        assert_eq!(r.to_canonical(), "x");
    }

    #[test]
    fn gcd_cancellation() {
        let g = gens(&["x"]);
        let x = LaurentPoly::var(&g, 0);
        let one = LaurentPoly::one(&g);
        let r = RationalFunction::new(&(&x * &x) - &one, &x - &one).unwrap();
        assert_eq!(r.to_canonical(), "x + 1");
    }

    #[test]
    fn zero_denominator_rejected() {
        let g = gens(&["x"]);
        let x = LaurentPoly::var(&g, 0);
        assert_eq!(RationalFunction::new(x, LaurentPoly::zero(&g)), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn sign_and_monomial_in_denominator() {
        let g = gens(&["x", "y"]);
        let x = LaurentPoly::var(&g, 0);
        let y = LaurentPoly::var(&g, 1);
        let one = LaurentPoly::one(&g);
        let r = RationalFunction::new(one.clone(), &(-&x) * &(&y + &one)).unwrap();
        assert_eq!(r.to_canonical(), "-x^-1/(y + 1)");
    }
}
