//! Seeds: quiver plus cluster variables, coefficients and tropical data.

mod checks;
mod sequence;

pub use checks::{
    ensemble_map, f_polynomial, is_green_sequence, is_trivial_sequence, separation_crosscheck, tropical_sign, GreenReport, Sign,
};
pub use sequence::{MutationSequence, Step};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{gens, AlgebraError, Gens, LaurentPoly, RationalFunction, SemifieldElem, SemifieldKind};
use crate::quiver::{QuiverError, VertexId, WeightedQuiver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0} is not tracked by this seed")]
    NotTracked(&'static str),
}

/// Generator name for the initial A-variable at `v`.
pub fn a_name(v: &VertexId) -> String {
    format!("A[{v}]")
}

pub fn x_name(v: &VertexId) -> String {
    format!("X[{v}]")
}

pub fn u_name(v: &VertexId) -> String {
    format!("u[{v}]")
}

pub fn y_name(v: &VertexId) -> String {
    format!("y[{v}]")
}

/// Which families a seed tracks besides the tropical c-vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tracking {
    pub a: bool,
    pub x: bool,
    pub principal: bool,
    pub coeffs: Option<SemifieldKind>,
}

impl Tracking {
    pub fn tropical() -> Self {
        Self::default()
    }

    pub fn all() -> Self {
        Tracking { a: true, x: true, principal: true, coeffs: None }
    }
}

/// Seed data, indexed by the current position of each vertex in the quiver.
///
/// Variables are expressed in generators named after the initial labels.
#[derive(Clone, Debug)]
pub struct Seed {
    quiver: WeightedQuiver,
    initial: WeightedQuiver,
    a: Option<Vec<LaurentPoly>>,
    x: Option<Vec<RationalFunction>>,
    principal: Option<Vec<LaurentPoly>>,
    coeffs: Option<Vec<SemifieldElem>>,
    c: Vec<Vec<i64>>,
}

impl Seed {
    pub fn new(q: &WeightedQuiver, tracking: Tracking) -> Self {
        let n = q.len();
        let names = |f: fn(&VertexId) -> String| q.ids().iter().map(f).collect::<Vec<_>>();
        let ga = gens(&names(a_name));
        let a = tracking.a.then(|| (0..n).map(|i| LaurentPoly::var(&ga, i)).collect());
        let x = tracking.x.then(|| {
            let gx = gens(&names(x_name));
            (0..n).map(|i| RationalFunction::var(&gx, i)).collect()
        });
        let principal = tracking.principal.then(|| {
            let mut all = names(a_name);
            all.extend(names(u_name));
            let gp = gens(&all);
            (0..n).map(|i| LaurentPoly::var(&gp, i)).collect()
        });
        let coeffs = tracking.coeffs.map(|kind| {
            let gy = gens(&names(y_name));
            (0..n).map(|i| SemifieldElem::generator(kind, &gy, i)).collect()
        });
        let c = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Seed { quiver: q.clone(), initial: q.clone(), a, x, principal, coeffs, c }
    }

    pub fn quiver(&self) -> &WeightedQuiver {
        &self.quiver
    }

    pub fn initial_quiver(&self) -> &WeightedQuiver {
        &self.initial
    }

    fn pos(&self, v: &VertexId) -> Result<usize, SeedError> {
        Ok(self.quiver.idx(v)?)
    }

    pub fn a(&self, v: &VertexId) -> Result<&LaurentPoly, SeedError> {
        let i = self.pos(v)?;
        self.a.as_ref().map(|a| &a[i]).ok_or(SeedError::NotTracked("A"))
    }

    pub fn x(&self, v: &VertexId) -> Result<&RationalFunction, SeedError> {
        let i = self.pos(v)?;
        self.x.as_ref().map(|x| &x[i]).ok_or(SeedError::NotTracked("X"))
    }

    pub fn coeff(&self, v: &VertexId) -> Result<&SemifieldElem, SeedError> {
        let i = self.pos(v)?;
        self.coeffs.as_ref().map(|c| &c[i]).ok_or(SeedError::NotTracked("coeff"))
    }

    pub fn principal_a(&self, v: &VertexId) -> Result<&LaurentPoly, SeedError> {
        let i = self.pos(v)?;
        self.principal.as_ref().map(|p| &p[i]).ok_or(SeedError::NotTracked("principal A"))
    }

    pub fn a_gens(&self) -> Gens {
        gens(&self.initial.ids().iter().map(a_name).collect::<Vec<_>>())
    }

    pub fn x_gens(&self) -> Gens {
        gens(&self.initial.ids().iter().map(x_name).collect::<Vec<_>>())
    }

    pub fn u_gens(&self) -> Gens {
        gens(&self.initial.ids().iter().map(u_name).collect::<Vec<_>>())
    }

    /// c-vector of `v`: exponents of its tropical principal coefficient
    /// over the initial vertices.
    pub fn c_vector(&self, v: &VertexId) -> Result<&[i64], SeedError> {
        let i = self.pos(v)?;
        Ok(&self.c[i])
    }

    pub fn c_matrix(&self) -> &Vec<Vec<i64>> {
        &self.c
    }

    /// F-polynomial at `v` in the `u` generators: the principal A-variable
    /// with all initial A-variables set to 1.
    pub fn f_polynomial(&self, v: &VertexId) -> Result<LaurentPoly, SeedError> {
        let p = self.principal_a(v)?;
        let n = self.initial.len();
        let map: Vec<Option<usize>> = (0..2 * n).map(|k| if k < n { None } else { Some(k - n) }).collect();
        Ok(p.remap(&self.u_gens(), &map))
    }

    pub fn mutate(&self, v: &VertexId) -> Result<Seed, SeedError> {
        let k = self.pos(v)?;
        let q = &self.quiver;
        let nq = q.mutate(k)?;
        let n = q.len();
        let mut out = self.clone();
        out.quiver = nq;

        let ck = self.c[k].clone();
        for i in 0..n {
            if i == k {
                out.c[i] = ck.iter().map(|x| -x).collect();
                continue;
            }
            let e = q.eps2(i, k) / 2;
            if e == 0 {
                continue;
            }
            let s = e.signum();
            for (j, &ckj) in ck.iter().enumerate() {
                out.c[i][j] = self.c[i][j] - e * (-s * ckj).min(0);
            }
        }

        let (plus, minus) = exchange_exponents(q, k);
        if let Some(a) = &self.a {
            let g = a[k].gens().clone();
            let p = monomial_product(&g, a, &plus);
            let m = monomial_product(&g, a, &minus);
            let new = (&p + &m).exact_div(&a[k])?;
            out.a.as_mut().unwrap()[k] = new;
        }
        if let Some(a) = &self.principal {
            let g = a[k].gens().clone();
            let nv = self.initial.len();
            let mut cp = vec![0i32; 2 * nv];
            let mut cm = vec![0i32; 2 * nv];
            for (j, &x) in ck.iter().enumerate() {
                cp[nv + j] = x.max(0) as i32;
                cm[nv + j] = (-x).max(0) as i32;
            }
            let up = LaurentPoly::monomial(&g, cp, BigInt::one());
            let um = LaurentPoly::monomial(&g, cm, BigInt::one());
            let p = &up * &monomial_product(&g, a, &plus);
            let m = &um * &monomial_product(&g, a, &minus);
            let new = (&p + &m).exact_div(&a[k])?;
            out.principal.as_mut().unwrap()[k] = new;
        }
        if let Some(x) = &self.x {
            let g = x[k].gens().clone();
            let one = RationalFunction::one(&g);
            let xk_inv = x[k].inv()?;
            let nx = out.x.as_mut().unwrap();
            for i in 0..n {
                if i == k {
                    nx[i] = xk_inv.clone();
                    continue;
                }
                let e = q.eps2(i, k) / 2;
                if e == 0 {
                    continue;
                }
                let base = if e > 0 { &one + &xk_inv } else { &one + &x[k] };
                nx[i] = &x[i] * &base.pow(-e);
            }
        }
        if let Some(c) = &self.coeffs {
            let yk_inv = c[k].inv();
            let one = c[k].one_like();
            let nc = out.coeffs.as_mut().unwrap();
            for i in 0..n {
                if i == k {
                    nc[i] = yk_inv.clone();
                    continue;
                }
                let e = q.eps2(i, k) / 2;
                if e == 0 {
                    continue;
                }
                let t = if e > 0 { &yk_inv } else { &c[k] };
                nc[i] = c[i].mul(&one.add(t)?.pow(-e))?;
            }
        }
        Ok(out)
    }

    /// Seed permutation: content at `a` moves to `b`.
    pub fn permute(&self, pairs: &[(VertexId, VertexId)]) -> Result<Seed, SeedError> {
        let sigma = self.quiver.perm_indices(pairs)?;
        let mut out = self.clone();
        out.quiver = self.quiver.permute(&sigma)?;
        fn move_vec<T: Clone>(v: &[T], sigma: &[usize]) -> Vec<T> {
            let mut out = v.to_vec();
            for (a, &b) in sigma.iter().enumerate() {
                out[b] = v[a].clone();
            }
            out
        }
        out.c = move_vec(&self.c, &sigma);
        out.a = self.a.as_ref().map(|v| move_vec(v, &sigma));
        out.x = self.x.as_ref().map(|v| move_vec(v, &sigma));
        out.principal = self.principal.as_ref().map(|v| move_vec(v, &sigma));
        out.coeffs = self.coeffs.as_ref().map(|v| move_vec(v, &sigma));
        Ok(out)
    }

    pub fn apply_step(&self, step: &Step) -> Result<Seed, SeedError> {
        match step {
            Step::Mutate(v) => self.mutate(v),
            Step::Permute(p) => self.permute(p),
        }
    }

    pub fn apply(&self, seq: &MutationSequence) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for st in &seq.steps {
            s = s.apply_step(st)?;
        }
        Ok(s)
    }

    /// Deterministic dump: quiver JSON plus per-vertex strings.
    pub fn dump(&self) -> serde_json::Value {
        let mut vars = serde_json::Map::new();
        for (i, v) in self.quiver.ids().iter().enumerate() {
            let mut e = serde_json::Map::new();
            if let Some(a) = &self.a {
                e.insert("A".into(), a[i].to_canonical().into());
            }
            if let Some(x) = &self.x {
                e.insert("X".into(), x[i].to_canonical().into());
            }
            if let Some(c) = &self.coeffs {
                e.insert("coeff".into(), c[i].to_canonical(&gens(&self.initial.ids().iter().map(y_name).collect::<Vec<_>>())).into());
            }
            e.insert("c".into(), serde_json::json!(self.c[i]));
            vars.insert(v.to_string(), serde_json::Value::Object(e));
        }
        serde_json::json!({"quiver": self.quiver.to_json_struct(), "variables": vars})
    }
}

/// Exponent vectors of the two exchange monomials at `k`.
fn exchange_exponents(q: &WeightedQuiver, k: usize) -> (Vec<i32>, Vec<i32>) {
    let n = q.len();
    let mut plus = vec![0; n];
    let mut minus = vec![0; n];
    for j in 0..n {
        let e = (q.eps2(k, j) / 2) as i32;
        if e > 0 {
            plus[j] = e;
        } else {
            minus[j] = -e;
        }
    }
    (plus, minus)
}

fn monomial_product(g: &Gens, vars: &[LaurentPoly], exps: &[i32]) -> LaurentPoly {
    let mut acc = LaurentPoly::one(g);
    for (v, &e) in vars.iter().zip(exps) {
        if e > 0 {
            acc = &acc * &v.pow(e as u32);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank2() -> WeightedQuiver {
        let ids = vec![VertexId::num(1), VertexId::num(2)];
        WeightedQuiver::new(ids, vec![false; 2], vec![vec![0, 2], vec![-2, 0]], vec![1, 1]).unwrap()
    }

    #[test]
    fn isolated_vertex_exchange() {
        let q = WeightedQuiver::empty(vec![VertexId::num(1)], vec![false], vec![1]).unwrap();
        let s = Seed::new(&q, Tracking::all()).mutate(&VertexId::num(1)).unwrap();
        assert_eq!(s.a(&VertexId::num(1)).unwrap().to_canonical(), "2*A[1]^-1");
        assert_eq!(s.f_polynomial(&VertexId::num(1)).unwrap().to_canonical(), "u[1] + 1");
    }

    #[test]
    fn x_mutation_rank2() {
        let s = Seed::new(&rank2(), Tracking::all()).mutate(&VertexId::num(1)).unwrap();
        assert_eq!(s.x(&VertexId::num(1)).unwrap().to_canonical(), "X[1]^-1");
        assert_eq!(s.x(&VertexId::num(2)).unwrap().to_canonical(), "X[1]*X[2] + X[2]");
    }

    #[test]
    fn universal_coefficients_follow_x_rule() {
        let t = Tracking { coeffs: Some(SemifieldKind::Universal), x: true, ..Default::default() };
        let s = Seed::new(&rank2(), t);
        let seq = MutationSequence::mutations([VertexId::num(1), VertexId::num(2), VertexId::num(1)]);
        let s = s.apply(&seq).unwrap();
        for v in [VertexId::num(1), VertexId::num(2)] {
            let x = s.x(&v).unwrap().to_canonical().replace('X', "y");
            let SemifieldElem::Universal(c) = s.coeff(&v).unwrap() else { panic!() };
            assert_eq!(c.to_canonical(), x);
        }
    }

    #[test]
    fn pentagon_period() {
        let s0 = Seed::new(&rank2(), Tracking::all());
        let step = MutationSequence::mutations([VertexId::num(1)]).swap(VertexId::num(1), VertexId::num(2));
        let s = s0.apply(&step.power(5)).unwrap();
        assert_eq!(s.quiver(), s0.quiver());
        assert_eq!(s.c_matrix(), s0.c_matrix());
        for v in [VertexId::num(1), VertexId::num(2)] {
            assert_eq!(s.a(&v).unwrap(), s0.a(&v).unwrap());
            assert_eq!(s.x(&v).unwrap(), s0.x(&v).unwrap());
        }
    }
}
