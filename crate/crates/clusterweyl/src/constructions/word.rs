use serde::Serialize;

use super::ConstructionError;
use crate::quiver::{VertexId, WeightedQuiver};
use crate::roots::{longest_word, CartanData, CartanType, WordFlavor};

/// A word with frozen decorations: `deco[p] = Some(y)` attaches `y` to the
/// row edge created at position `p` as `v_k ← y ← v_{k+1}`, and `half`
/// lists half arrows `y_a ⇢ y_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoratedWord {
    pub letters: Vec<usize>,
    pub deco: Vec<Option<VertexId>>,
    pub half: Vec<(VertexId, VertexId)>,
}

impl DecoratedWord {
    pub fn plain(letters: Vec<usize>) -> Self {
        let deco = vec![None; letters.len()];
        DecoratedWord { letters, deco, half: vec![] }
    }
}

fn row_vertex(tag: &str, s: usize, i: usize) -> VertexId {
    VertexId::new(tag, &[s as i64, i as i64])
}

/// `J(s)`: vertices `v^t_1` for `t ≠ s`, `s₋ = v^s_1`, `s₊ = v^s_2`, all frozen.
pub fn elementary_quiver(cd: &CartanData, s: usize) -> Result<WeightedQuiver, ConstructionError> {
    word_quiver(cd, &[s])
}

/// `J(word)` by left-to-right amalgamation of elementary quivers.
pub fn word_quiver(cd: &CartanData, word: &[usize]) -> Result<WeightedQuiver, ConstructionError> {
    build(cd, &DecoratedWord::plain(word.to_vec()), "v")
}

pub(crate) fn build(cd: &CartanData, w: &DecoratedWord, tag: &str) -> Result<WeightedQuiver, ConstructionError> {
    let n = cd.rank();
    for &s in &w.letters {
        cd.pos(s)?;
    }
    let mut count = vec![1usize; n];
    for &s in &w.letters {
        count[cd.pos(s)?] += 1;
    }
    let mut ids = Vec::new();
    let mut d = Vec::new();
    let mut start = vec![0usize; n];
    for p in 0..n {
        start[p] = ids.len();
        for i in 1..=count[p] {
            ids.push(row_vertex(tag, cd.labels[p], i));
            d.push(cd.d[p]);
        }
    }
    let ny = ids.len();
    for (p, y) in w.deco.iter().enumerate() {
        if let Some(y) = y {
            ids.push(y.clone());
            d.push(cd.weight(w.letters[p]));
        }
    }
    let total = ids.len();
    let mut q = WeightedQuiver::empty(ids, vec![true; total], d)?;
    let mut pieces = vec![0usize; ny];
    let mut front = vec![1usize; n];
    let mut ycur = ny;
    for (p, &s) in w.letters.iter().enumerate() {
        let ps = cd.pos(s)?;
        let minus = start[ps] + front[ps] - 1;
        let plus = minus + 1;
        q.add_eps2(minus, plus, 2)?;
        for pt in 0..n {
            let c = cd.c[pt][ps];
            if pt == ps || c == 0 {
                continue;
            }
            let t = start[pt] + front[pt] - 1;
            q.add_eps2(plus, t, -c)?;
            q.add_eps2(minus, t, c)?;
        }
        for pt in 0..n {
            pieces[start[pt] + front[pt] - 1] += 1;
        }
        pieces[plus] += 1;
        front[ps] += 1;
        if w.deco[p].is_some() {
            q.add_sigma2(plus, ycur, 2)?;
            q.add_sigma2(ycur, minus, 2)?;
            ycur += 1;
        }
    }
    for (a, b) in &w.half {
        let (ia, ib) = (q.idx(a)?, q.idx(b)?);
        q.add_sigma2(ia, ib, 1)?;
    }
    for i in 0..ny {
        if pieces[i] >= 2 && (0..total).all(|j| q.eps2(i, j) % 2 == 0 && q.eps2(j, i) % 2 == 0) {
            q.set_frozen(i, false);
        }
    }
    q.validate()?;
    Ok(q)
}

/// Decorations of the tabulated words; `IDBar` is the mirror of `ID`
/// and is built through [`decorated_word_quiver`].
pub fn decorated_word(cd: &CartanData, flavor: WordFlavor) -> Result<DecoratedWord, ConstructionError> {
    let n = cd.rank();
    let flavor = if flavor == WordFlavor::IDBar { WordFlavor::ID } else { flavor };
    let letters = longest_word(cd, flavor)?;
    let mut deco = vec![None; letters.len()];
    let occurrence = |s: usize, k: usize| -> usize {
        letters.iter().enumerate().filter(|(_, &x)| x == s).nth(k - 1).map(|(p, _)| p).expect("occurrence")
    };
    let ylabel = |j: usize| if flavor == WordFlavor::IQStar { VertexId::y_prime(j) } else { VertexId::y(j) };
    let mut place = |s: usize, k: usize, j: usize| deco[occurrence(s, k)] = Some(ylabel(j));
    let chain = |from: usize| (from..n).map(|j| (ylabel(j), ylabel(j + 1))).collect::<Vec<_>>();
    let half = match (cd.kind, flavor) {
        (CartanType::A, WordFlavor::IQ | WordFlavor::ID) => {
            (1..=n).for_each(|i| place(1, i, i));
            chain(1)
        }
        (CartanType::A, WordFlavor::IQStar) => {
            (1..=n).for_each(|i| place(n, i, i));
            chain(1)
        }
        (CartanType::B | CartanType::C, WordFlavor::IQ) => {
            place(1, 1, 1);
            (2..=n).for_each(|i| place(n, i, i));
            chain(1)
        }
        (CartanType::D, WordFlavor::IQ) => {
            place(1, 1, 1);
            place(2, 1, 2);
            (3..=n).for_each(|i| place(n, i - 1, i));
            let mut h = vec![(ylabel(1), ylabel(3))];
            h.extend(chain(2));
            h
        }
        (CartanType::B | CartanType::C, WordFlavor::ID) => {
            place(1, 1, 1);
            (2..=n).for_each(|s| place(s, 2, s));
            chain(1)
        }
        (CartanType::D, WordFlavor::ID) => {
            place(1, 1, 1);
            place(2, 1, 2);
            (3..=n).for_each(|s| place(s, 2, s));
            let mut h = vec![(ylabel(1), ylabel(3))];
            h.extend(chain(2));
            h
        }
        _ => return Err(ConstructionError::Unsupported(format!("decorations for {}{n} {flavor:?}", cd.kind))),
    };
    Ok(DecoratedWord { letters, deco, half })
}

/// `J̃` for a tabulated word; `IQStar` uses `u`/`y'` labels and `IDBar`
/// is the mirror image of the `ID` quiver.
pub fn decorated_word_quiver(cd: &CartanData, flavor: WordFlavor) -> Result<WeightedQuiver, ConstructionError> {
    match flavor {
        WordFlavor::IDBar => Ok(super::mirror(&decorated_word_quiver(cd, WordFlavor::ID)?)?),
        WordFlavor::IQStar => build(cd, &decorated_word(cd, flavor)?, "u"),
        _ => build(cd, &decorated_word(cd, flavor)?, "v"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unfrozen(q: &WeightedQuiver) -> Vec<String> {
        let mut v: Vec<String> = q.unfrozen_ids().iter().map(|v| v.to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn elementary_quiver_is_frozen() {
        let cd = CartanData::of(CartanType::C, 2).unwrap();
        for s in [1, 2] {
            let q = elementary_quiver(&cd, s).unwrap();
            assert_eq!(q.len(), 3);
            assert!(q.unfrozen().is_empty());
        }
        let q = elementary_quiver(&cd, 2).unwrap();
        let i = |v: VertexId| q.idx(&v).unwrap();
        assert_eq!(q.eps2(i(VertexId::v(2, 1)), i(VertexId::v(2, 2))), 2);
        assert_eq!(q.eps2(i(VertexId::v(2, 2)), i(VertexId::v(1, 1))), 1);
        assert_eq!(q.eps2(i(VertexId::v(2, 1)), i(VertexId::v(1, 1))), -1);
    }

    #[test]
    fn word_quiver_unfrozen_sets() {
        let a3 = CartanData::of(CartanType::A, 3).unwrap();
        let q = word_quiver(&a3, &[1, 2, 3, 1, 2, 1]).unwrap();
        assert_eq!(unfrozen(&q), vec!["v:1:2", "v:1:3", "v:2:2"]);
        let c2 = CartanData::of(CartanType::C, 2).unwrap();
        let q = word_quiver(&c2, &[1, 2, 1, 2]).unwrap();
        assert_eq!(unfrozen(&q), vec!["v:1:2", "v:2:2"]);
    }

    #[test]
    fn decorated_iq_a3() {
        let a3 = CartanData::of(CartanType::A, 3).unwrap();
        let q = decorated_word_quiver(&a3, WordFlavor::IQ).unwrap();
        assert_eq!(q.len(), 12);
        let i = |v: VertexId| q.idx(&v).unwrap();
        for k in 1..=3 {
            assert_eq!(q.eps(i(VertexId::y(k)), i(VertexId::v(1, k))), 1);
            assert_eq!(q.eps(i(VertexId::v(1, k + 1)), i(VertexId::y(k))), 1);
        }
        assert_eq!(q.eps2(i(VertexId::y(1)), i(VertexId::y(2))), 1);
        assert_eq!(unfrozen(&q), vec!["v:1:2", "v:1:3", "v:2:2"]);
    }

    #[test]
    fn decorated_d4_half_arrows() {
        let d4 = CartanData::of(CartanType::D, 4).unwrap();
        let w = decorated_word(&d4, WordFlavor::IQ).unwrap();
        assert_eq!(w.half.len(), 3);
        assert!(w.half.contains(&(VertexId::y(2), VertexId::y(3))));
        assert!(w.half.contains(&(VertexId::y(1), VertexId::y(3))));
        assert!(decorated_word_quiver(&d4, WordFlavor::ID).is_ok());
        let g2 = CartanData::of(CartanType::G, 2).unwrap();
        assert!(decorated_word(&g2, WordFlavor::IQ).is_err());
    }
}
