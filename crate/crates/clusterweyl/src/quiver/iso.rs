use std::collections::HashSet;

use super::{VertexId, WeightedQuiver};

/// Options for [`find_isomorphism`].
#[derive(Clone, Debug, Default)]
pub struct IsoOptions {
    /// Entries between two vertices of this set (left side) are ignored.
    pub mask_left: Vec<VertexId>,
    /// Same for the right side.
    pub mask_right: Vec<VertexId>,
    /// Forced assignments `left -> right`.
    pub fixed: Vec<(VertexId, VertexId)>,
    /// Require masked vertices to map to masked vertices.
    pub mask_to_mask: bool,
}

type Sig = (bool, u32, bool, Vec<(i64, i64)>);

fn signature(q: &WeightedQuiver, masked: &[bool], i: usize) -> Sig {
    let mut row: Vec<(i64, i64)> = (0..q.len())
        .filter(|&j| !(masked[i] && masked[j]))
        .map(|j| (q.eps2(i, j), q.eps2(j, i)))
        .filter(|&(a, b)| a != 0 || b != 0)
        .collect();
    row.sort_unstable();
    (q.is_frozen(i), q.weight(i), masked[i], row)
}

/// Label-free isomorphism preserving frozen flags, weights and exchange
/// entries; returns `map[left index] = right index`.
pub fn find_isomorphism(a: &WeightedQuiver, b: &WeightedQuiver, opts: &IsoOptions) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let ma: HashSet<&VertexId> = opts.mask_left.iter().collect();
    let mb: HashSet<&VertexId> = opts.mask_right.iter().collect();
    let masked_a: Vec<bool> = a.ids().iter().map(|v| ma.contains(v)).collect();
    let masked_b: Vec<bool> = b.ids().iter().map(|v| mb.contains(v)).collect();
    let sig_cmp = |s: &Sig| if opts.mask_to_mask { s.clone() } else { (s.0, s.1, false, s.3.clone()) };
    let sa: Vec<Sig> = (0..n).map(|i| sig_cmp(&signature(a, &masked_a, i))).collect();
    let sb: Vec<Sig> = (0..n).map(|i| sig_cmp(&signature(b, &masked_b, i))).collect();
    let mut ca = sa.clone();
    let mut cb = sb.clone();
    ca.sort();
    cb.sort();
    if ca != cb {
        return None;
    }
    let mut cand: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| sa[i] == sb[j]).collect()).collect();
    for (x, y) in &opts.fixed {
        let i = a.idx(x).ok()?;
        let j = b.idx(y).ok()?;
        if !cand[i].contains(&j) {
            return None;
        }
        cand[i] = vec![j];
    }
    let order = search_order(a, &cand);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let ctx = Ctx { a, b, masked_a: &masked_a, masked_b: &masked_b, cand: &cand, order: &order };
    if ctx.extend(0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Most constrained first, then neighbours of already placed vertices.
fn search_order(a: &WeightedQuiver, cand: &[Vec<usize>]) -> Vec<usize> {
    let n = a.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let links = order.iter().filter(|&&j| a.eps2(i, j) != 0 || a.eps2(j, i) != 0).count();
                (links, usize::MAX - cand[i].len(), usize::MAX - i)
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

struct Ctx<'a> {
    a: &'a WeightedQuiver,
    b: &'a WeightedQuiver,
    masked_a: &'a [bool],
    masked_b: &'a [bool],
    cand: &'a [Vec<usize>],
    order: &'a [usize],
}

impl Ctx<'_> {
    fn consistent(&self, i: usize, j: usize, map: &[usize]) -> bool {
        for &k in self.order {
            let l = map[k];
            if l == usize::MAX {
                continue;
            }
            let ignore_a = self.masked_a[i] && self.masked_a[k];
            let ignore_b = self.masked_b[j] && self.masked_b[l];
            if ignore_a && ignore_b {
                continue;
            }
            let ea = if ignore_a { (0, 0) } else { (self.a.eps2(i, k), self.a.eps2(k, i)) };
            let eb = if ignore_b { (0, 0) } else { (self.b.eps2(j, l), self.b.eps2(l, j)) };
            if ea != eb {
                return false;
            }
        }
        true
    }

    fn extend(&self, depth: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let i = self.order[depth];
        for &j in &self.cand[i] {
            if used[j] || !self.consistent(i, j, map) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if self.extend(depth + 1, map, used) {
                return true;
            }
            map[i] = usize::MAX;
            used[j] = false;
        }
        false
    }
}

impl WeightedQuiver {
    /// Isomorphic up to relabeling.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        find_isomorphism(self, other, &IsoOptions::default()).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(labels: [&str; 3], rev: bool) -> WeightedQuiver {
        let ids = labels.iter().map(|s| s.parse().unwrap()).collect();
        let mut q = WeightedQuiver::empty(ids, vec![false; 3], vec![1; 3]).unwrap();
        for k in 0..3 {
            let (a, b) = if rev { ((k + 1) % 3, k) } else { (k, (k + 1) % 3) };
            q.add_eps2(a, b, 2).unwrap();
        }
        q
    }

    #[test]
    fn relabeled_cycle_found() {
        let a = cycle(["1", "2", "3"], false);
        let b = cycle(["x:1", "x:2", "x:3"], true);
        let m = find_isomorphism(&a, &b, &IsoOptions::default()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.eps2(i, j), b.eps2(m[i], m[j]));
            }
        }
    }

    #[test]
    fn fixed_assignment_respected() {
        let a = cycle(["1", "2", "3"], false);
        let opts = IsoOptions { fixed: vec![("1".parse().unwrap(), "2".parse().unwrap())], ..Default::default() };
        let m = find_isomorphism(&a, &a, &opts).unwrap();
        assert_eq!(m[0], 1);
    }

    #[test]
    fn frozen_flag_distinguishes() {
        let a = cycle(["1", "2", "3"], false);
        let mut b = a.clone();
        b.set_frozen(0, true);
        assert!(!a.is_isomorphic(&b));
    }
}
