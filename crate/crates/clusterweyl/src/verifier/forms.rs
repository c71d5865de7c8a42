//! Closed forms for the action of `R(s)` on `Q_m` and `Q̃`.

use crate::algebra::{Gens, RationalFunction};
use crate::quiver::{VertexId, WeightedQuiver};
use crate::roots::CartanData;
use crate::seed::{MutationSequence, Step};

/// `ε_st` of the Coxeter quiver, by labels.
pub struct CoxeterEps {
    labels: Vec<usize>,
    e: Vec<Vec<i64>>,
}

impl CoxeterEps {
    pub fn new(cd: &CartanData, cox: &WeightedQuiver) -> Self {
        let n = cd.rank();
        let e = (0..n).map(|i| (0..n).map(|j| cox.eps(i, j)).collect()).collect();
        CoxeterEps { labels: cd.labels.clone(), e }
    }

    pub fn get(&self, s: usize, t: usize) -> i64 {
        let p = |x| self.labels.iter().position(|&l| l == x).expect("label");
        self.e[p(s)][p(t)]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

/// 1-based index on `Z_m`.
pub fn wrap(j: i64, m: usize) -> usize {
    ((j - 1).rem_euclid(m as i64) + 1) as usize
}

fn var(q: &WeightedQuiver, g: &Gens, v: &VertexId) -> RationalFunction {
    RationalFunction::var(g, q.idx(v).expect("vertex of the initial quiver"))
}

/// `f_A(s)`, or `f̃_A(s)` when `deco` supplies `y(s,i)`.
pub fn f_a(q: &WeightedQuiver, g: &Gens, eps: &CoxeterEps, s: usize, m: usize, deco: &dyn Fn(usize) -> Option<VertexId>) -> RationalFunction {
    let mut sum = RationalFunction::zero(g);
    for i in 1..=m {
        let a = |t: usize, j: usize| var(q, g, &VertexId::v(t, wrap(j as i64, m)));
        let mut term = (&a(s, i) * &a(s, i + 1)).inv().expect("nonzero");
        if let Some(y) = deco(i) {
            term = &term * &var(q, g, &y);
        }
        for &t in eps.labels() {
            let e = eps.get(s, t);
            if t == s || e == 0 {
                continue;
            }
            term = if e < 0 { &term * &a(t, i).pow(-e) } else { &term * &a(t, i + 1).pow(e) };
        }
        sum = &sum + &term;
    }
    sum
}

/// `f_X(s,i) = 1 + Σ_{k=0}^{m−2} X^s_i X^s_{i−1} ⋯ X^s_{i−k}`.
pub fn f_x(q: &WeightedQuiver, g: &Gens, s: usize, i: i64, m: usize) -> RationalFunction {
    let mut sum = RationalFunction::one(g);
    let mut prod = RationalFunction::one(g);
    for k in 0..=(m as i64 - 2) {
        prod = &prod * &var(q, g, &VertexId::v(s, wrap(i - k, m)));
        sum = &sum + &prod;
    }
    sum
}

/// Expected `R(s)*(X^t_j)`.
pub fn r_on_x(q: &WeightedQuiver, g: &Gens, eps: &CoxeterEps, s: usize, t: usize, j: usize, m: usize) -> RationalFunction {
    let j = j as i64;
    let x = |t: usize, j: i64| var(q, g, &VertexId::v(t, wrap(j, m)));
    let f = |i: i64| f_x(q, g, s, i, m);
    let ets = eps.get(t, s);
    if t == s {
        &f(j) / &(&x(s, j - 1) * &f(j - 2))
    } else if ets < 0 {
        let base = &(&x(s, j - 1) * &f(j - 2)) / &f(j - 1);
        &x(t, j) * &base.pow(-ets)
    } else if ets > 0 {
        let base = &(&x(s, j) * &f(j - 1)) / &f(j);
        &x(t, j) * &base.pow(ets)
    } else {
        x(t, j)
    }
}

/// Expected tropical image on the region where the cycle `P_s` is positive.
pub fn r_trop(eps: &CoxeterEps, s: usize, m: usize, x: &dyn Fn(usize, usize) -> i64, t: usize, j: usize) -> i64 {
    let ets = eps.get(t, s);
    let prev = wrap(j as i64 - 1, m);
    if t == s {
        -x(s, prev)
    } else if ets < 0 {
        x(t, j) - ets * x(s, prev)
    } else if ets > 0 {
        x(t, j) + ets * x(s, j)
    } else {
        x(t, j)
    }
}

/// Integer tropical point under a sequence, with the `min` convention
/// `x'_i = x_i − ε_ik·min(0, −sgn(ε_ik)·x_k)`.
pub fn tropical_apply(q: &WeightedQuiver, seq: &MutationSequence, point: &[i64]) -> Result<(WeightedQuiver, Vec<i64>), crate::quiver::QuiverError> {
    let mut q = q.clone();
    let mut x = point.to_vec();
    for st in &seq.steps {
        match st {
            Step::Mutate(v) => {
                let k = q.idx(v)?;
                let xk = x[k];
                for i in 0..q.len() {
                    let e = q.eps(i, k);
                    if i != k && e != 0 {
                        x[i] -= e * (-e.signum() * xk).min(0);
                    }
                }
                x[k] = -xk;
                q = q.mutate(k)?;
            }
            Step::Permute(p) => {
                let sigma = q.perm_indices(p)?;
                let mut nx = x.clone();
                for (a, &b) in sigma.iter().enumerate() {
                    nx[b] = x[a];
                }
                x = nx;
                q = q.permute(&sigma)?;
            }
        }
    }
    Ok((q, x))
}

/// The decoration `y` with `v^s_{i+1} → y → v^s_i`, if any.
pub fn decoration_between(q: &WeightedQuiver, s: usize, i: usize, m: usize) -> Option<VertexId> {
    let a = q.idx(&VertexId::v(s, wrap(i as i64 + 1, m))).ok()?;
    let b = q.idx(&VertexId::v(s, i)).ok()?;
    (0..q.len()).find(|&y| q.is_frozen(y) && q.eps(a, y) > 0 && q.eps(y, b) > 0).map(|y| q.id(y).clone())
}
