//! Multivariate polynomial gcd over the integers by recursive
//! content / primitive-part decomposition with primitive pseudo-remainders.
//!
//! Inputs must be genuine polynomials (all exponents nonnegative).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::LaurentPoly;

fn main_var(a: &LaurentPoly, b: &LaurentPoly) -> Option<usize> {
    let ma = a.max_exps();
    let mb = b.max_exps();
    (0..a.nvars()).find(|&i| (!a.is_zero() && ma[i] > 0) || (!b.is_zero() && mb[i] > 0))
}

fn deg(p: &LaurentPoly, v: usize) -> i32 {
    if p.is_zero() {
        -1
    } else {
        p.max_exps()[v]
    }
}

/// Positive leading coefficient in lex order.
pub(crate) fn normalize_sign(p: LaurentPoly) -> LaurentPoly {
    match p.leading() {
        Some((_, c)) if c.is_negative() => -&p,
        _ => p,
    }
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let mut g = LaurentPoly::zero(p.gens());
    for (_, c) in p.split_by(v) {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides")
}

fn leading_coeff_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let parts = p.split_by(v);
    parts.into_iter().next_back().map(|(_, c)| c).unwrap()
}

fn x_pow(p: &LaurentPoly, v: usize, k: i32) -> LaurentPoly {
    let mut e = vec![0; p.nvars()];
    e[v] = k;
    LaurentPoly::monomial(p.gens(), e, BigInt::one())
}

/// Sparse pseudo-remainder of `f` by `g` in variable `v`.
fn prem(f: &LaurentPoly, g: &LaurentPoly, v: usize) -> LaurentPoly {
    let dg = deg(g, v);
    let lg = leading_coeff_in(g, v);
    let mut r = f.clone();
    while !r.is_zero() && deg(&r, v) >= dg {
        let dr = deg(&r, v);
        let lr = leading_coeff_in(&r, v);
        let t = &lr * &x_pow(&r, v, dr - dg);
        r = &(&lg * &r) - &(&t * g);
    }
    r
}

/// Gcd with positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    if a.is_one() || b.is_one() {
        return LaurentPoly::one(a.gens());
    }
    let v = match main_var(a, b) {
        None => {
            let ca = a.as_constant().unwrap();
            let cb = b.as_constant().unwrap();
            return LaurentPoly::constant(a.gens(), ca.gcd(&cb));
        }
        Some(v) => v,
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let (mut f, mut g) = if deg(&pa, v) >= deg(&pb, v) { (pa, pb) } else { (pb, pa) };
    loop {
        if g.is_zero() {
            break;
        }
        if deg(&g, v) == 0 {
            f = LaurentPoly::one(a.gens());
            break;
        }
        let r = prem(&f, &g, v);
        f = g;
        g = primitive_in(&r, v);
    }
    let h = primitive_in(&f, v);
    normalize_sign(&c * &h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::gens;

    #[test]
    fn gcd_of_products() {
        let g = gens(&["x", "y", "z"]);
        let x = LaurentPoly::var(&g, 0);
        let y = LaurentPoly::var(&g, 1);
        let z = LaurentPoly::var(&g, 2);
        let one = LaurentPoly::one(&g);
        let common = &(&x * &y) + &(&z + &one);
        let a = &common * &(&x + &y);
        let b = &common * &(&(&x * &x) - &z);
        assert_eq!(gcd(&a, &b), common);
    }

    #[test]
    fn gcd_tracks_integer_content() {
        let g = gens(&["x"]);
        let x = LaurentPoly::var(&g, 0);
        let two = LaurentPoly::constant(&g, BigInt::from(2));
        let six = LaurentPoly::constant(&g, BigInt::from(6));
        let a = &two * &(&x + &LaurentPoly::one(&g));
        let b = &six * &(&(&x * &x) - &LaurentPoly::one(&g));
        assert_eq!(gcd(&a, &b), &two * &(&x + &LaurentPoly::one(&g)));
    }

    #[test]
    fn coprime_gives_one() {
        let g = gens(&["x", "y"]);
        let x = LaurentPoly::var(&g, 0);
        let y = LaurentPoly::var(&g, 1);
        let one = LaurentPoly::one(&g);
        assert!(gcd(&(&x + &one), &(&y + &one)).is_one());
    }
}
