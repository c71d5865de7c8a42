use serde::Serialize;

use crate::algebra::{LaurentPoly, RationalFunction};
use crate::quiver::{VertexId, WeightedQuiver};

use super::{MutationSequence, Seed, SeedError, Step, Tracking};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Mixed,
}

/// Sign of a tropical coordinate given by its exponent vector.
pub fn tropical_sign(c: &[i64]) -> Sign {
    let pos = c.iter().all(|&x| x >= 0);
    let neg = c.iter().all(|&x| x <= 0);
    match (pos, neg) {
        (true, false) | (true, true) => Sign::Positive,
        (false, true) => Sign::Negative,
        (false, false) => Sign::Mixed,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreenReport {
    pub green: bool,
    /// All unfrozen coordinates negative at the end.
    pub maximal: bool,
    /// Sign of each mutated vertex at mutation time.
    pub trace: Vec<(VertexId, Sign)>,
    /// First step whose target was not positive.
    pub first_red: Option<usize>,
    /// Some c-vector was not sign-coherent along the way.
    pub incoherent: bool,
}

pub fn is_green_sequence(q: &WeightedQuiver, seq: &MutationSequence) -> Result<GreenReport, SeedError> {
    let mut s = Seed::new(q, Tracking::tropical());
    let mut trace = Vec::new();
    let mut first_red = None;
    let mut incoherent = false;
    for (k, st) in seq.steps.iter().enumerate() {
        if let Step::Mutate(v) = st {
            let sg = tropical_sign(s.c_vector(v)?);
            if sg != Sign::Positive && first_red.is_none() {
                first_red = Some(k);
            }
            trace.push((v.clone(), sg));
        }
        s = s.apply_step(st)?;
        incoherent |= s.c_matrix().iter().any(|c| tropical_sign(c) == Sign::Mixed);
    }
    let unfrozen = s.quiver().unfrozen();
    let maximal = !unfrozen.is_empty() && unfrozen.iter().all(|&i| tropical_sign(&s.c_matrix()[i]) == Sign::Negative);
    Ok(GreenReport { green: first_red.is_none(), maximal, trace, first_red, incoherent })
}

/// Tropical periodicity test: the labeled quiver and every unfrozen
/// c-vector (restricted to unfrozen coordinates) return to the start.
pub fn is_trivial_sequence(q: &WeightedQuiver, seq: &MutationSequence) -> Result<bool, SeedError> {
    let s = Seed::new(q, Tracking::tropical()).apply(seq)?;
    if s.quiver() != q {
        return Ok(false);
    }
    let unf = q.unfrozen();
    Ok(unf.iter().all(|&i| unf.iter().all(|&j| s.c_matrix()[i][j] == i64::from(i == j))))
}

/// F-polynomial at `v` after running `seq` from principal coefficients.
pub fn f_polynomial(q: &WeightedQuiver, seq: &MutationSequence, v: &VertexId) -> Result<LaurentPoly, SeedError> {
    let t = Tracking { principal: true, ..Default::default() };
    Seed::new(q, t).apply(seq)?.f_polynomial(v)
}

/// `p*(X_k) = ∏_i A_i^{ε_ki}` for unfrozen `k`, in the initial A-variables.
pub fn ensemble_map(s: &Seed) -> Result<Vec<(VertexId, RationalFunction)>, SeedError> {
    let q = s.quiver();
    let g = s.a_gens();
    let mut out = Vec::new();
    for k in q.unfrozen() {
        let mut r = RationalFunction::one(&g);
        for j in 0..q.len() {
            let e = q.eps2(k, j);
            if e != 0 {
                let a = RationalFunction::from_poly(s.a(q.id(j))?.clone());
                r = &r * &a.pow(e / 2);
            }
        }
        out.push((q.id(k).clone(), r));
    }
    Ok(out)
}

/// Compares directly mutated X-variables with their reconstruction
/// `X^{c_j} ∏_i F_i(X)^{ε_ji}` from c-vectors and F-polynomials.
pub fn separation_crosscheck(q: &WeightedQuiver, seq: &MutationSequence) -> Result<bool, SeedError> {
    let t = Tracking { x: true, principal: true, ..Default::default() };
    let s = Seed::new(q, t).apply(seq)?;
    let gx = s.x_gens();
    let n = q.len();
    let to_x: Vec<Option<usize>> = (0..n).map(Some).collect();
    let cur = s.quiver();
    let fx: Vec<RationalFunction> = (0..n)
        .map(|i| s.f_polynomial(cur.id(i)).map(|f| RationalFunction::from_poly(f.remap(&gx, &to_x))))
        .collect::<Result<_, _>>()?;
    for j in 0..n {
        let c = &s.c_matrix()[j];
        let mono = LaurentPoly::monomial(&gx, c.iter().map(|&x| x as i32).collect(), 1.into());
        let mut r = RationalFunction::from_poly(mono);
        for (i, f) in fx.iter().enumerate() {
            let e = cur.eps2(j, i);
            if e != 0 && !f.is_one() {
                r = &r * &f.pow(e / 2);
            }
        }
        if &r != s.x(cur.id(j))? {
            return Ok(false);
        }
    }
    Ok(true)
}
