use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::word::{build, decorated_word};
use super::{seq_t, word_quiver, ConstructionError};
use crate::quiver::{find_isomorphism, IsoOptions, VertexId, WeightedQuiver};
use crate::roots::{longest_word, CartanData, CartanType, WordFlavor};
use crate::seed::{MutationSequence, Seed, Tracking};

/// A braid or commutation move on the window starting at `pos` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BraidMove {
    Commute(usize),
    Braid3(usize),
    Braid4(usize),
}

impl fmt::Display for BraidMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidMove::Commute(p) => write!(f, "commute@{}", p + 1),
            BraidMove::Braid3(p) => write!(f, "braid3@{}", p + 1),
            BraidMove::Braid4(p) => write!(f, "braid4@{}", p + 1),
        }
    }
}

fn moves_at(cd: &CartanData, w: &[usize]) -> Vec<(BraidMove, Vec<usize>)> {
    let mut out = Vec::new();
    for p in 0..w.len().saturating_sub(1) {
        let (s, t) = (w[p], w[p + 1]);
        if s == t {
            continue;
        }
        let alt = |len: usize| p + len <= w.len() && (0..len).all(|k| w[p + k] == if k % 2 == 0 { s } else { t });
        let flip = |len: usize| {
            let mut v = w.to_vec();
            for k in 0..len {
                v[p + k] = if k % 2 == 0 { t } else { s };
            }
            v
        };
        match cd.m(s, t) {
            Some(2) => out.push((BraidMove::Commute(p), flip(2))),
            Some(3) if alt(3) => out.push((BraidMove::Braid3(p), flip(3))),
            Some(4) if alt(4) => out.push((BraidMove::Braid4(p), flip(4))),
            _ => {}
        }
    }
    out
}

/// Shortest sequence of braid and commutation moves between two words.
pub fn braid_path(cd: &CartanData, from: &[usize], to: &[usize]) -> Option<Vec<BraidMove>> {
    let mut prev: HashMap<Vec<usize>, (Vec<usize>, BraidMove)> = HashMap::new();
    let mut queue = VecDeque::from([from.to_vec()]);
    let mut seen = std::collections::HashSet::from([from.to_vec()]);
    while let Some(w) = queue.pop_front() {
        if w == to {
            let mut path = Vec::new();
            let mut cur = w;
            while let Some((p, mv)) = prev.get(&cur) {
                path.push(*mv);
                cur = p.clone();
            }
            path.reverse();
            return Some(path);
        }
        for (mv, next) in moves_at(cd, &w) {
            if seen.insert(next.clone()) {
                prev.insert(next.clone(), (w.clone(), mv));
                queue.push_back(next);
            }
        }
    }
    None
}

/// A quiver mutation-equivalent to `J(word)`, with the current vertex
/// sitting in each slot of the word: slot `r` for `r < rank` is the initial
/// vertex of row `r`, slot `rank + p` the vertex created at position `p`.
#[derive(Clone, Debug)]
pub struct WordState {
    pub cd: CartanData,
    pub word: Vec<usize>,
    pub slots: Vec<VertexId>,
    pub quiver: WeightedQuiver,
    pub sequence: MutationSequence,
    pub moves: Vec<BraidMove>,
}

fn slot_labels(cd: &CartanData, word: &[usize]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = cd.labels.iter().map(|&s| VertexId::v(s, 1)).collect();
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in word {
        let c = count.entry(s).or_insert(1);
        *c += 1;
        out.push(VertexId::v(s, *c));
    }
    out
}

impl WordState {
    /// Starts from a quiver whose row vertices carry the `J(word)` labels.
    pub fn new(cd: &CartanData, word: &[usize], quiver: WeightedQuiver) -> Result<Self, ConstructionError> {
        let st = WordState { cd: cd.clone(), word: word.to_vec(), slots: slot_labels(cd, word), quiver, sequence: MutationSequence::new(), moves: vec![] };
        st.check()?;
        Ok(st)
    }

    /// Current vertex → `J(word)` label.
    pub fn relabeling(&self) -> BTreeMap<VertexId, VertexId> {
        self.slots.iter().cloned().zip(slot_labels(&self.cd, &self.word)).collect()
    }

    /// Current vertex playing the role of `J(word)` label `v`.
    pub fn actual(&self, v: &VertexId) -> Option<VertexId> {
        slot_labels(&self.cd, &self.word).iter().position(|x| x == v).map(|k| self.slots[k].clone())
    }

    fn rows_renamed(&self) -> Result<WeightedQuiver, ConstructionError> {
        let keep: Vec<usize> = self.slots.iter().map(|v| self.quiver.idx(v)).collect::<Result<_, _>>()?;
        Ok(self.quiver.induced(&keep).rename(&self.relabeling())?)
    }

    /// Compares the row part with a freshly built `J(word)`.
    pub fn check(&self) -> Result<(), ConstructionError> {
        let want = word_quiver(&self.cd, &self.word)?;
        let got = self.rows_renamed()?;
        if got != want {
            return Err(ConstructionError::Invalid(format!("row part differs from J({:?}): {:?}", self.word, got.diff(&want))));
        }
        Ok(())
    }

    /// Whole quiver with row vertices renamed to `J(word)` labels.
    pub fn renamed(&self) -> Result<WeightedQuiver, ConstructionError> {
        Ok(self.quiver.rename(&self.relabeling())?)
    }

    fn mutate_all(&self, vs: &[VertexId]) -> Result<WeightedQuiver, ConstructionError> {
        let mut q = self.quiver.clone();
        for v in vs {
            q = q.mutate_at(v)?;
        }
        Ok(q)
    }

    pub fn apply(&mut self, mv: BraidMove) -> Result<(), ConstructionError> {
        let n = self.cd.rank();
        let (p, len) = match mv {
            BraidMove::Commute(p) => (p, 2),
            BraidMove::Braid3(p) => (p, 3),
            BraidMove::Braid4(p) => (p, 4),
        };
        let Some((_, next)) = moves_at(&self.cd, &self.word).into_iter().find(|(m, _)| *m == mv) else {
            return Err(ConstructionError::Invalid(format!("{mv} does not apply to {:?}", self.word)));
        };
        let old = self.slots.clone();
        let at = |k: usize| old[n + p + k].clone();
        let candidates: Vec<(Vec<VertexId>, Vec<VertexId>)> = match len {
            2 => vec![(vec![], vec![at(1), at(0)])],
            3 => vec![(vec![at(0)], vec![at(0), at(2), at(1)])],
            _ => {
                let (a, b) = (at(0), at(1));
                let mut c = Vec::new();
                for seq in [vec![a.clone(), b.clone(), a.clone()], vec![b.clone(), a.clone(), b.clone()]] {
                    c.push((seq.clone(), vec![a.clone(), b.clone(), at(3), at(2)]));
                    c.push((seq, vec![b.clone(), a.clone(), at(3), at(2)]));
                }
                c
            }
        };
        for (muts, window) in candidates {
            let q = self.mutate_all(&muts)?;
            let mut trial = self.clone();
            trial.quiver = q;
            trial.word = next.clone();
            for (k, v) in window.into_iter().enumerate() {
                trial.slots[n + p + k] = v;
            }
            if trial.check().is_ok() {
                trial.sequence = trial.sequence.then(&MutationSequence::mutations(muts));
                trial.moves.push(mv);
                *self = trial;
                return Ok(());
            }
        }
        Err(ConstructionError::Invalid(format!("no mutation realizes {mv} on {:?}", self.word)))
    }

    /// Applies the literal mutations (given by `J(word)` labels) and
    /// returns the mutated quiver without changing the state.
    pub fn literal(&self, labels: &[VertexId]) -> Result<(WeightedQuiver, MutationSequence), ConstructionError> {
        let actual: Vec<VertexId> = labels
            .iter()
            .map(|v| self.actual(v).ok_or_else(|| ConstructionError::Invalid(format!("no slot for {v}"))))
            .collect::<Result<_, _>>()?;
        Ok((self.mutate_all(&actual)?, MutationSequence::mutations(actual)))
    }
}

/// Outcome of a mutation-equivalence pipeline between decorated quivers.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub moves: Vec<String>,
    pub sequence: MutationSequence,
    /// Current vertex → target label, rows and decorations.
    pub relabeling: Vec<(VertexId, VertexId)>,
    /// Row part equals the target word quiver.
    pub rows_match: bool,
    /// Decorations attach to the target rows after relabeling.
    pub decorations_match: bool,
    /// Entries among decorations that differ from the target.
    pub half_arrow_deviations: Vec<String>,
    /// Literal sub-sequences that reproduced the engine output.
    pub literal_checks: Vec<(String, bool)>,
}

fn decoration_ids(q: &WeightedQuiver) -> Vec<VertexId> {
    q.ids().iter().filter(|v| v.tag.starts_with('y')).cloned().collect()
}

fn finish(st: &WordState, from: Vec<usize>, target: &WeightedQuiver, literal_checks: Vec<(String, bool)>) -> Result<EquivalenceReport, ConstructionError> {
    let cur = st.renamed()?;
    let rows_match = st.check().is_ok();
    let (ml, mr) = (decoration_ids(&cur), decoration_ids(target));
    let fixed: Vec<(VertexId, VertexId)> = cur.ids().iter().filter(|v| !v.tag.starts_with('y')).map(|v| (v.clone(), v.clone())).collect();
    let opts = IsoOptions { mask_left: ml.clone(), mask_right: mr.clone(), fixed, mask_to_mask: true };
    let iso = find_isomorphism(&cur, target, &opts);
    let back: BTreeMap<VertexId, VertexId> = st.relabeling();
    let mut relabeling: Vec<(VertexId, VertexId)> = back.into_iter().collect();
    let mut deviations = Vec::new();
    if let Some(map) = &iso {
        let ymap: BTreeMap<VertexId, VertexId> = ml.iter().map(|v| (v.clone(), target.id(map[cur.idx(v).unwrap()]).clone())).collect();
        relabeling.extend(ymap.iter().map(|(a, b)| (a.clone(), b.clone())));
        let moved = cur.rename(&ymap)?;
        for a in &mr {
            for b in &mr {
                let x = moved.eps2(moved.idx(a)?, moved.idx(b)?);
                let y = target.eps2(target.idx(a)?, target.idx(b)?);
                if a < b && x != y {
                    deviations.push(format!("eps2[{a}][{b}]: {x} vs {y}"));
                }
            }
        }
    }
    Ok(EquivalenceReport {
        from,
        to: st.word.clone(),
        moves: st.moves.iter().map(|m| m.to_string()).collect(),
        sequence: st.sequence.clone(),
        relabeling,
        rows_match,
        decorations_match: iso.is_some(),
        half_arrow_deviations: deviations,
        literal_checks,
    })
}

/// `M_{D→Q}`: braid moves from `i_D(n)` to `i_Q(n)` acting on `J̃(i_D(n))`.
pub fn m_d_to_q(cd: &CartanData) -> Result<EquivalenceReport, ConstructionError> {
    if !matches!(cd.kind, CartanType::A | CartanType::B | CartanType::C | CartanType::D) {
        return Err(ConstructionError::Unsupported(cd.kind.to_string()));
    }
    let from = longest_word(cd, WordFlavor::ID)?;
    let to = longest_word(cd, WordFlavor::IQ)?;
    let start = build(cd, &decorated_word(cd, WordFlavor::ID)?, "v")?;
    let target = build(cd, &decorated_word(cd, WordFlavor::IQ)?, "v")?;
    let mut st = WordState::new(cd, &from, start)?;
    let path = braid_path(cd, &from, &to).ok_or_else(|| ConstructionError::Invalid("words not braid-equivalent".into()))?;
    for mv in path {
        st.apply(mv)?;
    }
    finish(&st, from, &target, vec![])
}

fn shifted_iq(n: usize, j: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (1..=n - j).flat_map(|k| (1..=k).rev()).map(|s| s + j).collect();
    for p in (1..=j).rev() {
        w.extend(p..=n);
    }
    w
}

/// `T(n−1), T(n−2), …, T(1)` on `J̃(i_Q(n))` for `A_n`. At each level the
/// engine rewrites `i_Q^{(j)}(n−j) i_j ⋯ i_1` one step further and the
/// literal `T(k)`, read in the labels of the embedded `J(i_Q(k+1))`, is
/// compared with the engine result.
pub fn t_pipeline(n: usize) -> Result<EquivalenceReport, ConstructionError> {
    let cd = CartanData::of(CartanType::A, n)?;
    let from = longest_word(&cd, WordFlavor::IQ)?;
    let start = build(&cd, &decorated_word(&cd, WordFlavor::IQ)?, "v")?;
    let target = build(&cd, &decorated_word(&cd, WordFlavor::IQStar)?, "v")?;
    let mut st = WordState::new(&cd, &from, start)?;
    let mut literal_seq = MutationSequence::new();
    let mut checks = Vec::new();
    for j in 0..n.saturating_sub(1) {
        let k = n - 1 - j;
        let labels: Vec<VertexId> = seq_t(k)
            .sequence
            .targets()
            .iter()
            .map(|v| {
                let (s, i) = v.row_col().expect("row label");
                VertexId::v(s + j, i)
            })
            .collect();
        let (lq, lseq) = st.literal(&labels)?;
        let before = st.clone();
        let next = shifted_iq(n, j + 1);
        for mv in braid_path(&cd, &st.word, &next).ok_or_else(|| ConstructionError::Invalid("no braid path".into()))? {
            st.apply(mv)?;
        }
        let engine_seq = MutationSequence { steps: st.sequence.steps[before.sequence.len()..].to_vec() };
        let same = lq == st.quiver && same_c_vectors(&before.quiver, &lseq, &engine_seq)?;
        checks.push((format!("T({k})"), same));
        literal_seq = literal_seq.then(&lseq);
    }
    let mut report = finish(&st, from, &target, checks)?;
    report.sequence = literal_seq;
    Ok(report)
}

fn same_c_vectors(q: &WeightedQuiver, a: &MutationSequence, b: &MutationSequence) -> Result<bool, ConstructionError> {
    let run = |s: &MutationSequence| Seed::new(q, Tracking::tropical()).apply(s).map(|x| x.c_matrix().clone());
    let map = |e| ConstructionError::Invalid(format!("{e}"));
    Ok(run(a).map_err(map)? == run(b).map_err(map)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_braid3_is_one_mutation() {
        let a2 = CartanData::of(CartanType::A, 2).unwrap();
        let mut st = WordState::new(&a2, &[1, 2, 1], word_quiver(&a2, &[1, 2, 1]).unwrap()).unwrap();
        st.apply(BraidMove::Braid3(0)).unwrap();
        assert_eq!(st.word, vec![2, 1, 2]);
        assert_eq!(st.sequence.to_json_string(), r#"[{"mut":"v:1:2"}]"#);
        assert_eq!(st.actual(&VertexId::v(2, 2)), Some(VertexId::v(1, 2)));
    }

    #[test]
    fn braid4_uses_three_mutations() {
        let c2 = CartanData::of(CartanType::C, 2).unwrap();
        let mut st = WordState::new(&c2, &[1, 2, 1, 2], word_quiver(&c2, &[1, 2, 1, 2]).unwrap()).unwrap();
        st.apply(BraidMove::Braid4(0)).unwrap();
        assert_eq!(st.word, vec![2, 1, 2, 1]);
        assert_eq!(st.sequence.mutation_count(), 3);
    }

    #[test]
    fn path_between_c3_words() {
        let c3 = CartanData::of(CartanType::C, 3).unwrap();
        let from = longest_word(&c3, WordFlavor::ID).unwrap();
        let to = longest_word(&c3, WordFlavor::IQ).unwrap();
        let p = braid_path(&c3, &from, &to).unwrap();
        assert_eq!(p, vec![BraidMove::Braid3(3), BraidMove::Commute(2)]);
        assert_eq!(shifted_iq(3, 1), vec![2, 3, 2, 1, 2, 3]);
        assert_eq!(shifted_iq(3, 2), vec![3, 2, 3, 1, 2, 3]);
    }
}
