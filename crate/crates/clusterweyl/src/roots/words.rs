use std::collections::VecDeque;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CartanData, CartanType, RootError};

/// Which tabulated reduced word of `w₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordFlavor {
    IQ,
    IQStar,
    ID,
    IDBar,
}

impl FromStr for WordFlavor {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "iQ" | "iq" => WordFlavor::IQ,
            "iQ*" | "iqstar" | "iQstar" => WordFlavor::IQStar,
            "iD" | "id" => WordFlavor::ID,
            "iDbar" | "idbar" => WordFlavor::IDBar,
            _ => return Err(RootError::Invalid(format!("word flavor {s}"))),
        })
    }
}

pub fn longest_word(cd: &CartanData, flavor: WordFlavor) -> Result<Vec<usize>, RootError> {
    let n = cd.rank();
    let unsupported = || RootError::Unsupported(format!("{}{} {:?}", cd.kind, n, flavor));
    let iq: Vec<usize> = match cd.kind {
        CartanType::A => (1..=n).flat_map(|k| (1..=k).rev()).collect(),
        CartanType::B | CartanType::C => (0..n).flat_map(|_| 1..=n).collect(),
        CartanType::D => (0..n - 1).flat_map(|_| 1..=n).collect(),
        _ => return Err(unsupported()),
    };
    let id: Vec<usize> = match cd.kind {
        CartanType::A => iq.clone(),
        CartanType::B | CartanType::C => {
            let mut w = vec![1];
            for k in 2..=n {
                w.extend((1..=k).rev());
                w.extend(2..=k);
            }
            w
        }
        CartanType::D => {
            let mut w = vec![1, 2];
            for k in 3..=n {
                w.extend((3..=k).rev());
                w.push(1);
                w.push(2);
                w.extend(3..=k);
            }
            w
        }
        _ => unreachable!(),
    };
    match flavor {
        WordFlavor::IQ => Ok(iq),
        WordFlavor::IQStar if cd.kind == CartanType::A => Ok(iq.iter().map(|&s| n + 1 - s).collect()),
        WordFlavor::IQStar => Err(unsupported()),
        WordFlavor::ID => Ok(id),
        WordFlavor::IDBar => Ok(id.into_iter().rev().collect()),
    }
}

/// `s*` with `α_{s*} = −w₀ α_s`.
pub fn dynkin_involution(cd: &CartanData, s: usize) -> usize {
    let n = cd.rank();
    match cd.kind {
        CartanType::A => n + 1 - s,
        CartanType::D if n % 2 == 1 && s <= 2 => 3 - s,
        _ => s,
    }
}

/// Reverses all arrows at a sink or source.
pub fn reflection_functor(arrows: &[(usize, usize)], s: usize) -> Result<Vec<(usize, usize)>, RootError> {
    let out_deg = arrows.iter().filter(|a| a.0 == s).count();
    let in_deg = arrows.iter().filter(|a| a.1 == s).count();
    if out_deg > 0 && in_deg > 0 {
        return Err(RootError::Reflection(format!("{s} is neither a sink nor a source")));
    }
    Ok(arrows.iter().map(|&(a, b)| if a == s || b == s { (b, a) } else { (a, b) }).collect())
}

fn is_sink(arrows: &[(usize, usize)], s: usize) -> bool {
    arrows.iter().all(|a| a.0 != s)
}

/// Each letter is a sink of the quiver reflected at the previous letters.
pub fn is_adapted(arrows: &[(usize, usize)], word: &[usize]) -> bool {
    let mut q = arrows.to_vec();
    for &s in word {
        if !is_sink(&q, s) {
            return false;
        }
        q = reflection_functor(&q, s).expect("sink");
    }
    true
}

/// Reduced words of `w₀` adapted to the orientation, in lexicographic
/// order of choices, at most `limit` of them.
pub fn adapted_words(cd: &CartanData, arrows: &[(usize, usize)], limit: usize) -> Vec<Vec<usize>> {
    let Some(h) = cd.coxeter_number() else { return vec![] };
    let target = cd.rank() * h / 2;
    let mut out = Vec::new();
    let mut word = Vec::new();
    dfs(cd, arrows.to_vec(), target, &mut word, &mut out, limit);
    out
}

fn dfs(cd: &CartanData, q: Vec<(usize, usize)>, target: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
    if out.len() >= limit {
        return;
    }
    if word.len() == target {
        out.push(word.clone());
        return;
    }
    for &s in &cd.labels {
        if !is_sink(&q, s) {
            continue;
        }
        let root = cd.act(word, &cd.simple_root(s));
        if root.iter().any(|&x| x < 0) {
            continue;
        }
        word.push(s);
        dfs(cd, reflection_functor(&q, s).expect("sink"), target, word, out, limit);
        word.pop();
        if out.len() >= limit {
            return;
        }
    }
}

/// `n_s = (h + a_s − a_{s*}) / 2`, where `a_s` counts arrows on the tree
/// path from `s` to `s*` that point toward `s`.
pub fn shift_ns(cd: &CartanData, arrows: &[(usize, usize)]) -> Result<Vec<(usize, usize)>, RootError> {
    let h = cd.coxeter_number().ok_or_else(|| RootError::Unsupported(cd.kind.to_string()))?;
    let a = |s: usize| -> Result<i64, RootError> {
        let t = dynkin_involution(cd, s);
        let path = tree_path(cd, s, t)?;
        let toward = path
            .windows(2)
            .filter(|w| arrows.contains(&(w[1], w[0])))
            .count();
        Ok(toward as i64)
    };
    cd.labels
        .iter()
        .map(|&s| {
            let v = h as i64 + a(s)? - a(dynkin_involution(cd, s))?;
            Ok((s, (v / 2) as usize))
        })
        .collect()
}

fn tree_path(cd: &CartanData, s: usize, t: usize) -> Result<Vec<usize>, RootError> {
    let n = cd.rank();
    let start = cd.pos(s)?;
    let goal = cd.pos(t)?;
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        for y in 0..n {
            if y != x && cd.c[x][y] != 0 && !seen[y] {
                seen[y] = true;
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    if !seen[goal] {
        return Err(RootError::Invalid("disconnected diagram".into()));
    }
    let mut path = vec![goal];
    while *path.last().unwrap() != start {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    Ok(path.into_iter().map(|p| cd.labels[p]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_words() {
        let a3 = CartanData::of(CartanType::A, 3).unwrap();
        assert_eq!(longest_word(&a3, WordFlavor::IQ).unwrap(), vec![1, 2, 1, 3, 2, 1]);
        let c3 = CartanData::of(CartanType::C, 3).unwrap();
        assert_eq!(longest_word(&c3, WordFlavor::ID).unwrap(), vec![1, 2, 1, 2, 3, 2, 1, 2, 3]);
        let d4 = CartanData::of(CartanType::D, 4).unwrap();
        assert_eq!(longest_word(&d4, WordFlavor::ID).unwrap(), vec![1, 2, 3, 1, 2, 3, 4, 3, 1, 2, 3, 4]);
    }

    #[test]
    fn involution() {
        let a3 = CartanData::of(CartanType::A, 3).unwrap();
        assert_eq!(dynkin_involution(&a3, 1), 3);
        let d5 = CartanData::of(CartanType::D, 5).unwrap();
        assert_eq!(dynkin_involution(&d5, 1), 2);
        let c3 = CartanData::of(CartanType::C, 3).unwrap();
        assert_eq!(dynkin_involution(&c3, 2), 2);
    }

    #[test]
    fn reflection_twice() {
        let q = vec![(2, 1), (3, 2)];
        let r = reflection_functor(&q, 1).unwrap();
        assert_eq!(reflection_functor(&r, 1).unwrap(), q);
        assert!(reflection_functor(&q, 2).is_err());
        assert!(!is_adapted(&q, &[3]));
    }

    #[test]
    fn shift_examples() {
        let a5 = CartanData::of(CartanType::A, 5).unwrap();
        let q = vec![(2, 1), (3, 2), (4, 3), (4, 5)];
        let ns: Vec<usize> = shift_ns(&a5, &q).unwrap().into_iter().map(|p| p.1).collect();
        assert_eq!(ns, vec![4, 4, 3, 2, 2]);
        let d5 = CartanData::of(CartanType::D, 5).unwrap();
        let q = vec![(5, 4), (4, 3), (3, 2), (3, 1)];
        let ns: Vec<usize> = shift_ns(&d5, &q).unwrap().into_iter().map(|p| p.1).collect();
        assert_eq!(ns, vec![4; 5]);
    }

    #[test]
    fn adapted_word_counts_match_shifts() {
        let a5 = CartanData::of(CartanType::A, 5).unwrap();
        let q = vec![(2, 1), (3, 2), (4, 3), (4, 5)];
        let w = &adapted_words(&a5, &q, 1)[0];
        assert_eq!(w.len(), 15);
        assert!(a5.is_reduced(w) && is_adapted(&q, w));
        for (s, n) in shift_ns(&a5, &q).unwrap() {
            assert_eq!(w.iter().filter(|&&x| x == s).count(), n);
        }
    }
}
