use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{QuiverError, VertexId, WeightedQuiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DefrostPolicy {
    /// Unfreeze a glued vertex when all its incident entries are integral.
    #[default]
    MinimalK0,
    /// Glued vertices stay frozen.
    KeepFrozen,
}

/// Two quivers and a partial bijection between their frozen vertices.
#[derive(Clone, Debug)]
pub struct AmalgamationSpec {
    pub left: WeightedQuiver,
    pub right: WeightedQuiver,
    /// `(left vertex, right vertex)`; the glued vertex keeps the left label.
    pub gluing: Vec<(VertexId, VertexId)>,
    pub policy: DefrostPolicy,
}

/// Glues `right` onto `left`, summing exchange entries on glued pairs.
///
/// Non-glued right vertices keep their labels, which must not clash with
/// labels on the left.
pub fn amalgamate(spec: &AmalgamationSpec) -> Result<WeightedQuiver, QuiverError> {
    let (l, r) = (&spec.left, &spec.right);
    let mut to_left: HashMap<usize, usize> = HashMap::new();
    let mut used_left = HashSet::new();
    for (a, b) in &spec.gluing {
        let ia = l.idx(a)?;
        let ib = r.idx(b)?;
        if !l.is_frozen(ia) || !r.is_frozen(ib) {
            return Err(QuiverError::BadGluing);
        }
        if l.weight(ia) != r.weight(ib) {
            return Err(QuiverError::WeightMismatch(a.clone(), b.clone()));
        }
        if !used_left.insert(ia) || to_left.insert(ib, ia).is_some() {
            return Err(QuiverError::BadGluing);
        }
    }
    let mut ids = l.ids().to_vec();
    let mut frozen = l.frozen().to_vec();
    let mut d = l.weights().to_vec();
    let mut pos = vec![0usize; r.len()];
    for j in 0..r.len() {
        match to_left.get(&j) {
            Some(&i) => pos[j] = i,
            None => {
                if l.contains(r.id(j)) {
                    return Err(QuiverError::DuplicateVertex(r.id(j).clone()));
                }
                pos[j] = ids.len();
                ids.push(r.id(j).clone());
                frozen.push(r.is_frozen(j));
                d.push(r.weight(j));
            }
        }
    }
    let n = ids.len();
    let mut e = vec![vec![0i64; n]; n];
    for i in 0..l.len() {
        for j in 0..l.len() {
            e[i][j] += l.eps2(i, j);
        }
    }
    for i in 0..r.len() {
        for j in 0..r.len() {
            e[pos[i]][pos[j]] += r.eps2(i, j);
        }
    }
    if spec.policy == DefrostPolicy::MinimalK0 {
        for &i in used_left.iter() {
            if (0..n).all(|j| e[i][j] % 2 == 0 && e[j][i] % 2 == 0) {
                frozen[i] = false;
            }
        }
    }
    WeightedQuiver::new(ids, frozen, e, d)
}

/// Glues pairs of frozen vertices inside one quiver; each pair `(a, b)`
/// merges `b` into `a`.
pub fn identify(q: &WeightedQuiver, pairs: &[(VertexId, VertexId)], policy: DefrostPolicy) -> Result<WeightedQuiver, QuiverError> {
    let n = q.len();
    let mut target: Vec<usize> = (0..n).collect();
    let mut merged = HashSet::new();
    for (a, b) in pairs {
        let ia = q.idx(a)?;
        let ib = q.idx(b)?;
        if ia == ib || !q.is_frozen(ia) || !q.is_frozen(ib) || target[ib] != ib || target[ia] != ia {
            return Err(QuiverError::BadGluing);
        }
        if q.weight(ia) != q.weight(ib) {
            return Err(QuiverError::WeightMismatch(a.clone(), b.clone()));
        }
        target[ib] = ia;
        merged.insert(ia);
    }
    let keep: Vec<usize> = (0..n).filter(|&i| target[i] == i).collect();
    let mut pos = vec![0usize; n];
    for (k, &i) in keep.iter().enumerate() {
        pos[i] = k;
    }
    let m = keep.len();
    let mut e = vec![vec![0i64; m]; m];
    for i in 0..n {
        for j in 0..n {
            e[pos[target[i]]][pos[target[j]]] += q.eps2(i, j);
        }
    }
    let ids = keep.iter().map(|&i| q.id(i).clone()).collect();
    let mut frozen: Vec<bool> = keep.iter().map(|&i| q.is_frozen(i)).collect();
    let d = keep.iter().map(|&i| q.weight(i)).collect();
    if policy == DefrostPolicy::MinimalK0 {
        for &i in &merged {
            let k = pos[i];
            if (0..m).all(|j| e[k][j] % 2 == 0 && e[j][k] % 2 == 0) {
                frozen[k] = false;
            }
        }
    }
    WeightedQuiver::new(ids, frozen, e, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow(a: &str, b: &str, fa: bool, fb: bool, e2: i64) -> WeightedQuiver {
        let ids = vec![a.parse().unwrap(), b.parse().unwrap()];
        WeightedQuiver::new(ids, vec![fa, fb], vec![vec![0, e2], vec![-e2, 0]], vec![1, 1]).unwrap()
    }

    #[test]
    fn empty_gluing_is_disjoint_union() {
        let spec = AmalgamationSpec {
            left: arrow("1", "2", true, true, 1),
            right: arrow("3", "4", true, false, 2),
            gluing: vec![],
            policy: DefrostPolicy::MinimalK0,
        };
        let q = amalgamate(&spec).unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(q.unfrozen().len(), 1);
    }

    #[test]
    fn half_arrows_sum_and_defrost() {
        let spec = AmalgamationSpec {
            left: arrow("1", "2", true, true, 1),
            right: arrow("3", "4", true, true, 1),
            gluing: vec![("1".parse().unwrap(), "3".parse().unwrap()), ("2".parse().unwrap(), "4".parse().unwrap())],
            policy: DefrostPolicy::MinimalK0,
        };
        let q = amalgamate(&spec).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.eps2(0, 1), 2);
        assert_eq!(q.unfrozen().len(), 2);
        let keep = amalgamate(&AmalgamationSpec { policy: DefrostPolicy::KeepFrozen, ..spec }).unwrap();
        assert!(keep.unfrozen().is_empty());
    }

    #[test]
    fn weight_mismatch_rejected() {
        let mut right = arrow("3", "4", true, true, 2);
        right = WeightedQuiver::new(right.ids().to_vec(), vec![true, true], vec![vec![0, 2], vec![-1, 0]], vec![2, 1]).unwrap();
        let spec = AmalgamationSpec {
            left: arrow("1", "2", true, true, 1),
            right,
            gluing: vec![("1".parse().unwrap(), "3".parse().unwrap())],
            policy: DefrostPolicy::MinimalK0,
        };
        assert!(matches!(amalgamate(&spec), Err(QuiverError::WeightMismatch(..))));
    }
}
