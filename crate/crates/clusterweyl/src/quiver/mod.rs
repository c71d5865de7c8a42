//! Weighted quivers with frozen vertices.
//!
//! Exchange matrices are stored doubled (`eps2 = 2ε`) so that the
//! half-integral entries between frozen vertices stay integral.

mod amalgam;
mod format;
mod iso;
mod vertex;

pub use amalgam::{amalgamate, identify, AmalgamationSpec, DefrostPolicy};
pub use format::{QuiverJson, VertexJson};
pub use iso::{find_isomorphism, IsoOptions};
pub use vertex::VertexId;

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("mutation at frozen vertex {0}")]
    FrozenVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("not skew-symmetrizable at ({0}, {1})")]
    NotSkewSymmetrizable(VertexId, VertexId),
    #[error("half-integral entry at ({0}, {1}) touches an unfrozen vertex")]
    HalfIntegral(VertexId, VertexId),
    #[error("weights must be positive")]
    BadWeights,
    #[error("nonzero diagonal at {0}")]
    Diagonal(VertexId),
    #[error("permutation is not a bijection or moves the frozen set")]
    BadPermutation,
    #[error("weight mismatch on glued pair ({0}, {1})")]
    WeightMismatch(VertexId, VertexId),
    #[error("gluing map is not injective or uses an unfrozen vertex")]
    BadGluing,
    #[error("inconsistent structure data: {0}")]
    Inconsistent(String),
    #[error("invalid quiver description: {0}")]
    Format(String),
    #[error("arrow multiplicity overflow")]
    Overflow,
}

/// Vertex set, frozen subset, doubled exchange matrix and weights.
#[derive(Clone, Debug)]
pub struct WeightedQuiver {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    frozen: Vec<bool>,
    eps2: Vec<Vec<i64>>,
    d: Vec<u32>,
}

impl PartialEq for WeightedQuiver {
    /// Label-sensitive equality, independent of vertex order.
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let map: Option<Vec<usize>> = self.ids.iter().map(|v| other.index.get(v).copied()).collect();
        let Some(map) = map else { return false };
        (0..self.len()).all(|i| {
            self.frozen[i] == other.frozen[map[i]]
                && self.d[i] == other.d[map[i]]
                && (0..self.len()).all(|j| self.eps2[i][j] == other.eps2[map[i]][map[j]])
        })
    }
}

impl Eq for WeightedQuiver {}

impl WeightedQuiver {
    /// Validated constructor.
    pub fn new(ids: Vec<VertexId>, frozen: Vec<bool>, eps2: Vec<Vec<i64>>, d: Vec<u32>) -> Result<Self, QuiverError> {
        let q = Self::from_parts(ids, frozen, eps2, d)?;
        q.validate()?;
        Ok(q)
    }

    fn from_parts(ids: Vec<VertexId>, frozen: Vec<bool>, eps2: Vec<Vec<i64>>, d: Vec<u32>) -> Result<Self, QuiverError> {
        let n = ids.len();
        if frozen.len() != n || d.len() != n || eps2.len() != n || eps2.iter().any(|r| r.len() != n) {
            return Err(QuiverError::Format("dimension mismatch".into()));
        }
        let mut index = HashMap::new();
        for (i, v) in ids.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        Ok(WeightedQuiver { ids, index, frozen, eps2, d })
    }

    /// Empty quiver on the given vertices; arrows are added afterwards.
    pub fn empty(ids: Vec<VertexId>, frozen: Vec<bool>, d: Vec<u32>) -> Result<Self, QuiverError> {
        let n = ids.len();
        Self::from_parts(ids, frozen, vec![vec![0; n]; n], d)
    }

    pub fn validate(&self) -> Result<(), QuiverError> {
        let n = self.len();
        if self.d.contains(&0) {
            return Err(QuiverError::BadWeights);
        }
        for i in 0..n {
            if self.eps2[i][i] != 0 {
                return Err(QuiverError::Diagonal(self.ids[i].clone()));
            }
            for j in 0..n {
                let lhs = self.eps2[i][j] * self.d[j] as i64;
                let rhs = -self.eps2[j][i] * self.d[i] as i64;
                if lhs != rhs {
                    return Err(QuiverError::NotSkewSymmetrizable(self.ids[i].clone(), self.ids[j].clone()));
                }
                if self.eps2[i][j] % 2 != 0 && !(self.frozen[i] && self.frozen[j]) {
                    return Err(QuiverError::HalfIntegral(self.ids[i].clone(), self.ids[j].clone()));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &VertexId {
        &self.ids[i]
    }

    pub fn idx(&self, v: &VertexId) -> Result<usize, QuiverError> {
        self.index.get(v).copied().ok_or_else(|| QuiverError::UnknownVertex(v.clone()))
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.d[i]
    }

    pub fn weights(&self) -> &[u32] {
        &self.d
    }

    pub fn eps2(&self, i: usize, j: usize) -> i64 {
        self.eps2[i][j]
    }

    pub fn eps2_matrix(&self) -> &Vec<Vec<i64>> {
        &self.eps2
    }

    /// Integral ε entry; panics on a half-integral one.
    pub fn eps(&self, i: usize, j: usize) -> i64 {
        let e = self.eps2[i][j];
        assert!(e % 2 == 0, "half-integral entry requested as integer");
        e / 2
    }

    pub fn unfrozen(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.frozen[i]).collect()
    }

    pub fn unfrozen_ids(&self) -> Vec<VertexId> {
        self.unfrozen().into_iter().map(|i| self.ids[i].clone()).collect()
    }

    /// Adds `delta` to the doubled entry (i, j) and the skew partner (j, i).
    ///
    /// The partner entry is `-delta * d_j / d_i`, which must be integral.
    pub fn add_eps2(&mut self, i: usize, j: usize, delta: i64) -> Result<(), QuiverError> {
        let di = self.d[i] as i64;
        let dj = self.d[j] as i64;
        if (delta * dj) % di != 0 {
            return Err(QuiverError::NotSkewSymmetrizable(self.ids[i].clone(), self.ids[j].clone()));
        }
        self.eps2[i][j] += delta;
        self.eps2[j][i] -= delta * dj / di;
        Ok(())
    }

    /// Adds arrows in structure-matrix units: `sigma2 = 2σ_ij`.
    pub fn add_sigma2(&mut self, i: usize, j: usize, sigma2: i64) -> Result<(), QuiverError> {
        let di = self.d[i] as i64;
        let dj = self.d[j] as i64;
        let g = di.gcd(&dj);
        if (sigma2 * di) % g != 0 {
            return Err(QuiverError::Inconsistent("non-integral ε from σ".into()));
        }
        self.add_eps2(i, j, sigma2 * di / g)
    }

    pub fn set_frozen(&mut self, i: usize, f: bool) {
        self.frozen[i] = f;
    }

    /// Mutation at vertex index `k`; the weight vector is unchanged.
    pub fn mutate(&self, k: usize) -> Result<Self, QuiverError> {
        if self.frozen[k] {
            return Err(QuiverError::FrozenVertex(self.ids[k].clone()));
        }
        let n = self.len();
        let mut e = self.eps2.clone();
        for i in 0..n {
            for j in 0..n {
                if i == k || j == k {
                    e[i][j] = -self.eps2[i][j];
                } else {
                    let a = self.eps2[i][k] / 2;
                    let b = self.eps2[k][j] / 2;
                    e[i][j] = a
                        .abs()
                        .checked_mul(b)
                        .zip(a.checked_mul(b.abs()))
                        .and_then(|(x, y)| x.checked_add(y))
                        .and_then(|x| x.checked_add(self.eps2[i][j]))
                        .ok_or(QuiverError::Overflow)?;
                }
            }
        }
        let q = WeightedQuiver { ids: self.ids.clone(), index: self.index.clone(), frozen: self.frozen.clone(), eps2: e, d: self.d.clone() };
        debug_assert!(q.validate().is_ok());
        Ok(q)
    }

    pub fn mutate_at(&self, v: &VertexId) -> Result<Self, QuiverError> {
        self.mutate(self.idx(v)?)
    }

    /// Applies a seed permutation: the data at `a` moves to `σ(a)`, so
    /// `ε'_{σ(a),σ(b)} = ε_{a,b}`. Labels are not moved.
    pub fn permute(&self, sigma: &[usize]) -> Result<Self, QuiverError> {
        let n = self.len();
        if sigma.len() != n {
            return Err(QuiverError::BadPermutation);
        }
        let mut seen = vec![false; n];
        for &s in sigma {
            if s >= n || seen[s] {
                return Err(QuiverError::BadPermutation);
            }
            seen[s] = true;
        }
        if (0..n).any(|a| self.frozen[a] != self.frozen[sigma[a]]) {
            return Err(QuiverError::BadPermutation);
        }
        let mut e = vec![vec![0; n]; n];
        let mut d = vec![0; n];
        for a in 0..n {
            d[sigma[a]] = self.d[a];
            for b in 0..n {
                e[sigma[a]][sigma[b]] = self.eps2[a][b];
            }
        }
        Ok(WeightedQuiver { ids: self.ids.clone(), index: self.index.clone(), frozen: self.frozen.clone(), eps2: e, d })
    }

    /// Index form of a permutation given as `a -> b` pairs; unmentioned
    /// vertices are fixed.
    pub fn perm_indices(&self, pairs: &[(VertexId, VertexId)]) -> Result<Vec<usize>, QuiverError> {
        let mut sigma: Vec<usize> = (0..self.len()).collect();
        let mut dom = vec![false; self.len()];
        let mut img = vec![false; self.len()];
        for (a, b) in pairs {
            let ia = self.idx(a)?;
            let ib = self.idx(b)?;
            if dom[ia] || img[ib] {
                return Err(QuiverError::BadPermutation);
            }
            dom[ia] = true;
            img[ib] = true;
            sigma[ia] = ib;
        }
        if dom != img {
            return Err(QuiverError::BadPermutation);
        }
        Ok(sigma)
    }

    pub fn apply_permutation(&self, pairs: &[(VertexId, VertexId)]) -> Result<Self, QuiverError> {
        self.permute(&self.perm_indices(pairs)?)
    }

    /// Renames vertices; ids not in the map are kept.
    pub fn rename(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Self, QuiverError> {
        let ids: Vec<VertexId> = self.ids.iter().map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone())).collect();
        Self::from_parts(ids, self.frozen.clone(), self.eps2.clone(), self.d.clone())
    }

    /// Doubled structure matrix `2σ_ij = 2ε_ij·gcd(d_i,d_j)/d_i`.
    pub fn structure_matrix2(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut s = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let g = (self.d[i] as i64).gcd(&(self.d[j] as i64));
                s[i][j] = self.eps2[i][j] * g / self.d[i] as i64;
            }
        }
        s
    }

    /// Rebuilds a quiver from a doubled structure matrix and weights.
    pub fn from_structure2(ids: Vec<VertexId>, sigma2: &[Vec<i64>], d: Vec<u32>, frozen: Vec<bool>) -> Result<Self, QuiverError> {
        let n = ids.len();
        let mut e = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let g = (d[i] as i64).gcd(&(d[j] as i64));
                let num = sigma2[i][j] * d[i] as i64;
                if num % g != 0 {
                    return Err(QuiverError::Inconsistent(format!("σ entry ({i},{j})")));
                }
                e[i][j] = num / g;
            }
        }
        Self::new(ids, frozen, e, d)
    }

    /// Rank of ε over the rationals.
    pub fn rank(&self) -> usize {
        matrix_rank(&self.eps2)
    }

    /// Subquiver on the kept vertices.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let ids = keep.iter().map(|&i| self.ids[i].clone()).collect();
        let frozen = keep.iter().map(|&i| self.frozen[i]).collect();
        let d = keep.iter().map(|&i| self.d[i]).collect();
        let eps2 = keep.iter().map(|&i| keep.iter().map(|&j| self.eps2[i][j]).collect()).collect();
        Self::from_parts(ids, frozen, eps2, d).expect("subset of valid ids")
    }

    /// Removes the given vertices.
    pub fn without(&self, drop: &[VertexId]) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !drop.contains(&self.ids[i])).collect();
        self.induced(&keep)
    }

    /// Copy with all entries among the given vertices set to zero.
    pub fn mask_among(&self, among: &[VertexId]) -> Self {
        let mut q = self.clone();
        let idx: Vec<usize> = among.iter().filter_map(|v| self.index.get(v).copied()).collect();
        for &i in &idx {
            for &j in &idx {
                q.eps2[i][j] = 0;
            }
        }
        q
    }

    /// Entries that differ between two quivers on the same labels.
    pub fn diff(&self, other: &Self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, v) in self.ids.iter().enumerate() {
            let Some(&oi) = other.index.get(v) else {
                out.push(format!("vertex {v} missing on the right"));
                continue;
            };
            if self.frozen[i] != other.frozen[oi] {
                out.push(format!("frozen flag differs at {v}"));
            }
            if self.d[i] != other.d[oi] {
                out.push(format!("weight differs at {v}"));
            }
            for (j, w) in self.ids.iter().enumerate() {
                if let Some(&oj) = other.index.get(w) {
                    if self.eps2[i][j] != other.eps2[oi][oj] {
                        out.push(format!("eps2[{v}][{w}]: {} vs {}", self.eps2[i][j], other.eps2[oi][oj]));
                    }
                }
            }
        }
        for v in &other.ids {
            if !self.index.contains_key(v) {
                out.push(format!("vertex {v} missing on the left"));
            }
        }
        out
    }

    /// Arrow list with doubled multiplicities: (from, to, 2σ) for 2σ > 0.
    pub fn arrows2(&self) -> Vec<(VertexId, VertexId, i64)> {
        let s = self.structure_matrix2();
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if s[i][j] > 0 {
                    out.push((self.ids[i].clone(), self.ids[j].clone(), s[i][j]));
                }
            }
        }
        out
    }
}

fn matrix_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                let g = a[rank][c];
                for k in 0..cols {
                    a[r][k] = a[r][k] * g - a[rank][k] * f;
                }
                let content = a[r].iter().fold(0i128, |acc, &x| acc.gcd(&x));
                if content > 1 {
                    a[r].iter_mut().for_each(|x| *x /= content);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<VertexId> {
        (1..=n).map(|i| VertexId::num(i as i64)).collect()
    }

    fn c3() -> WeightedQuiver {
        let e = [vec![0, -2, 0], vec![1, 0, -1], vec![0, 1, 0]];
        let e2 = e.iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
        WeightedQuiver::new(ids(3), vec![false; 3], e2, vec![2, 1, 1]).unwrap()
    }

    #[test]
    fn c3_mutation_at_2() {
        let q = c3().mutate(1).unwrap();
        let want = [[0, 2, -2], [-1, 0, 1], [1, -1, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(q.eps2(i, j), 2 * want[i][j]);
            }
        }
        assert_eq!(q.mutate(1).unwrap(), c3());
    }

    #[test]
    fn c3_structure_matrix() {
        let s = c3().structure_matrix2();
        let want = [[0, -1, 0], [1, 0, -1], [0, 1, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s[i][j], 2 * want[i][j]);
            }
        }
        let back = WeightedQuiver::from_structure2(ids(3), &s, vec![2, 1, 1], vec![false; 3]).unwrap();
        assert_eq!(back, c3());
    }

    #[test]
    fn frozen_mutation_rejected() {
        let mut q = c3();
        q.set_frozen(0, true);
        assert!(matches!(q.mutate(0), Err(QuiverError::FrozenVertex(_))));
    }

    #[test]
    fn transposition_on_two_vertices() {
        let q = WeightedQuiver::new(ids(2), vec![false; 2], vec![vec![0, 2], vec![-2, 0]], vec![1, 1]).unwrap();
        let p = q.permute(&[1, 0]).unwrap();
        assert_eq!(p.eps2(0, 1), -2);
        assert_eq!(p.permute(&[0, 1]).unwrap(), p);
    }

    #[test]
    fn rank_of_zero_matrix() {
        let q = WeightedQuiver::empty(ids(3), vec![false; 3], vec![1; 3]).unwrap();
        assert_eq!(q.rank(), 0);
        assert_eq!(c3().rank(), 2);
    }

    #[test]
    fn rank_one_vertex() {
        let q = WeightedQuiver::empty(ids(1), vec![false], vec![1]).unwrap();
        assert_eq!(q.mutate(0).unwrap(), q);
    }

    #[test]
    fn validation_catches_half_integral_unfrozen() {
        let r = WeightedQuiver::new(ids(2), vec![false, true], vec![vec![0, 1], vec![-1, 0]], vec![1, 1]);
        assert!(matches!(r, Err(QuiverError::HalfIntegral(..))));
    }
}
