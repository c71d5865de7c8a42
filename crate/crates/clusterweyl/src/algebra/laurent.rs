use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::AlgebraError;

/// Ordered list of generator names shared between polynomials of one ring.
pub type Gens = Arc<Vec<String>>;

pub fn gens<S: AsRef<str>>(names: &[S]) -> Gens {
    Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
}

/// Multivariate Laurent polynomial with arbitrary-precision integer coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by dense exponent vectors, so the
/// representation is canonical and equality is structural.
#[derive(Clone)]
pub struct LaurentPoly {
    gens: Gens,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_gens(&self.gens, &other.gens)
    }
}

impl Eq for LaurentPoly {}

fn same_gens(a: &Gens, b: &Gens) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl LaurentPoly {
    pub fn zero(gens: &Gens) -> Self {
        LaurentPoly { gens: gens.clone(), terms: BTreeMap::new() }
    }

    pub fn one(gens: &Gens) -> Self {
        Self::constant(gens, BigInt::one())
    }

    pub fn constant(gens: &Gens, c: BigInt) -> Self {
        Self::monomial(gens, vec![0; gens.len()], c)
    }

    pub fn var(gens: &Gens, i: usize) -> Self {
        let mut e = vec![0; gens.len()];
        e[i] = 1;
        Self::monomial(gens, e, BigInt::one())
    }

    pub fn monomial(gens: &Gens, exps: Vec<i32>, c: BigInt) -> Self {
        assert_eq!(exps.len(), gens.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { gens: gens.clone(), terms }
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms(gens: &Gens, raw: impl IntoIterator<Item = (Vec<i32>, BigInt)>) -> Self {
        let mut p = Self::zero(gens);
        for (e, c) in raw {
            assert_eq!(e.len(), gens.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn gens(&self) -> &Gens {
        &self.gens
    }

    pub fn nvars(&self) -> usize {
        self.gens.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
                .unwrap_or(false)
    }

    /// Returns the single term when the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&Vec<i32>, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        match self.as_monomial() {
            Some((e, c)) if e.iter().all(|&x| x == 0) => Some(c.clone()),
            _ => None,
        }
    }

    fn add_term(&mut self, e: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check(&self, other: &Self) {
        assert!(same_gens(&self.gens, &other.gens), "generator lists differ");
    }

    /// Leading term in lexicographic order of exponent vectors.
    pub fn leading(&self) -> Option<(&Vec<i32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn min_exps(&self) -> Vec<i32> {
        let mut m = vec![i32::MAX; self.nvars()];
        for e in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        if self.is_zero() {
            m.iter_mut().for_each(|a| *a = 0);
        }
        m
    }

    pub fn max_exps(&self) -> Vec<i32> {
        let mut m = vec![i32::MIN; self.nvars()];
        for e in self.terms.keys() {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).max(*b);
            }
        }
        if self.is_zero() {
            m.iter_mut().for_each(|a| *a = 0);
        }
        m
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly { gens: self.gens.clone(), terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.gens);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        LaurentPoly { gens: self.gens.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.gens);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Gcd of all coefficients, positive; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v / c)).collect();
        LaurentPoly { gens: self.gens.clone(), terms }
    }

    /// Exact quotient `self / b`.
    ///
    /// Uses leading-term division in lex order; quotient exponents are
    /// confined to the box forced by per-variable degree additivity, which
    /// makes the loop terminate on non-divisible input.
    pub fn exact_div(&self, b: &Self) -> Result<Self, AlgebraError> {
        self.check(b);
        if b.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.gens));
        }
        if let Some((be, bc)) = b.as_monomial() {
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(bc);
                if !r.is_zero() {
                    return Err(AlgebraError::NotDivisible);
                }
                terms.insert(e.iter().zip(be).map(|(x, y)| x - y).collect(), q);
            }
            return Ok(LaurentPoly { gens: self.gens.clone(), terms });
        }
        let lo: Vec<i32> = self.min_exps().iter().zip(b.min_exps()).map(|(a, c)| a - c).collect();
        let hi: Vec<i32> = self.max_exps().iter().zip(b.max_exps()).map(|(a, c)| a - c).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(AlgebraError::NotDivisible);
        }
        let (blead_e, blead_c) = b.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.gens);
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let (qc, r) = rc.div_rem(&blead_c);
            if !r.is_zero() {
                return Err(AlgebraError::NotDivisible);
            }
            let qe: Vec<i32> = re.iter().zip(&blead_e).map(|(x, y)| x - y).collect();
            if qe.iter().zip(lo.iter().zip(&hi)).any(|(q, (l, h))| q < l || q > h) {
                return Err(AlgebraError::NotDivisible);
            }
            for (e, c) in &b.terms {
                let ne: Vec<i32> = e.iter().zip(&qe).map(|(x, y)| x + y).collect();
                rem.add_term(ne, -(c * &qc));
            }
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }

    /// Evaluates at rational points given as (numerator, denominator) pairs.
    pub fn eval(&self, point: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
        use num_bigint::BigInt as B;
        let mut num = B::zero();
        let mut den = B::one();
        for (e, c) in &self.terms {
            let mut tn = c.clone();
            let mut td = B::one();
            for (k, &x) in e.iter().enumerate() {
                let (pn, pd) = &point[k];
                let (a, b) = if x >= 0 { (pn, pd) } else { (pd, pn) };
                let p = x.unsigned_abs();
                tn *= num_traits::pow(a.clone(), p as usize);
                td *= num_traits::pow(b.clone(), p as usize);
            }
            num = num * &td + tn * &den;
            den *= td;
            let g = num.gcd(&den);
            if !g.is_zero() && !g.is_one() {
                num /= &g;
                den /= &g;
            }
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        (num, den)
    }

    /// Moves the polynomial into another ring by mapping variable `i` to
    /// variable `map[i]` of `target`; unmapped variables are set to 1.
    pub fn remap(&self, target: &Gens, map: &[Option<usize>]) -> Self {
        let mut p = Self::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] += x;
                }
            }
            p.add_term(ne, c.clone());
        }
        p
    }

    /// Canonical string form: terms in descending lex order, `*` products,
    /// explicit `^` powers.
    pub fn to_canonical(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_string(&self.gens, e);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&abs.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    /// Structured JSON: list of `[exponent-vector, coefficient-string]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!([e, c.to_string()]))
                .collect(),
        )
    }

    pub fn from_json(gens: &Gens, v: &Value) -> Result<Self, AlgebraError> {
        let arr = v.as_array().ok_or_else(|| AlgebraError::Parse("expected term list".into()))?;
        let mut p = Self::zero(gens);
        for t in arr {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| AlgebraError::Parse("bad term".into()))?;
            let e: Vec<i32> = serde_json::from_value(pair[0].clone()).map_err(|e| AlgebraError::Parse(e.to_string()))?;
            if e.len() != gens.len() {
                return Err(AlgebraError::Parse("exponent length".into()));
            }
            let c: BigInt = pair[1]
                .as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| AlgebraError::Parse("bad coefficient".into()))?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Splits into coefficients of powers of variable `v`.
    pub(crate) fn split_by(&self, v: usize) -> BTreeMap<i32, LaurentPoly> {
        let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne[v];
            ne[v] = 0;
            out.entry(d).or_insert_with(|| Self::zero(&self.gens)).add_term(ne, c.clone());
        }
        out
    }
}

fn monomial_string(gens: &Gens, e: &[i32]) -> String {
    let mut parts = Vec::new();
    for (i, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if x == 1 {
            parts.push(gens[i].clone());
        } else {
            parts.push(format!("{}^{}", gens[i], x));
        }
    }
    parts.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.to_canonical())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check(rhs);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check(rhs);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        LaurentPoly { gens: self.gens.clone(), terms }
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check(rhs);
        let mut p = LaurentPoly::zero(&self.gens);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Gens {
        gens(&["x", "y"])
    }

    #[test]
    fn difference_of_squares() {
        let g = xy();
        let x = LaurentPoly::var(&g, 0);
        let y = LaurentPoly::var(&g, 1);
        let a = &(&x * &x) - &(&y * &y);
        let b = &x - &y;
        assert_eq!(a.exact_div(&b).unwrap(), &x + &y);
        assert_eq!(x.exact_div(&x).unwrap(), LaurentPoly::one(&g));
    }

    #[test]
    fn monomial_division_shifts_exponents() {
        let g = gens(&["x1", "x2", "x3"]);
        let x1 = LaurentPoly::var(&g, 0);
        let x3 = LaurentPoly::var(&g, 2);
        let one = LaurentPoly::one(&g);
        let a = &(&one + &x1) + &(&x1 * &x3);
        let inv = LaurentPoly::monomial(&g, vec![0, 0, -1], BigInt::one());
        let q = a.exact_div(&inv).unwrap();
        assert_eq!(q.to_canonical(), "x1*x3^2 + x1*x3 + x3");
        assert_eq!(&q * &inv, a);
    }

    #[test]
    fn non_divisible_is_reported() {
        let g = xy();
        let x = LaurentPoly::var(&g, 0);
        let y = LaurentPoly::var(&g, 1);
        let one = LaurentPoly::one(&g);
        let a = &x + &one;
        let b = &y + &one;
        assert_eq!(a.exact_div(&b), Err(AlgebraError::NotDivisible));
        let two = LaurentPoly::constant(&g, BigInt::from(2));
        assert_eq!(x.exact_div(&two), Err(AlgebraError::NotDivisible));
    }

    #[test]
    fn canonical_string_orders_terms() {
        let g = xy();
        let x = LaurentPoly::var(&g, 0);
        let y = LaurentPoly::var(&g, 1);
        let p = &(&y - &(&x * &x)) + &LaurentPoly::constant(&g, BigInt::from(3));
        assert_eq!(p.to_canonical(), "-x^2 + y + 3");
    }
}
