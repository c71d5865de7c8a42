//! Cartan data, Weyl words and the root-lattice action.

mod words;

pub use words::{adapted_words, dynkin_involution, is_adapted, longest_word, reflection_functor, shift_ns, WordFlavor};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("unsupported type {0}")]
    Unsupported(String),
    #[error("invalid Cartan data: {0}")]
    Invalid(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("{0}")]
    Reflection(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    G,
    /// `A1 × A1`
    A1A1,
    /// Affine `Ã_n`, generators labeled `0..=n`.
    At,
    Custom,
}

impl FromStr for CartanType {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "A" | "a" => CartanType::A,
            "B" | "b" => CartanType::B,
            "C" | "c" => CartanType::C,
            "D" | "d" => CartanType::D,
            "G" | "g" => CartanType::G,
            "A1A1" | "a1a1" => CartanType::A1A1,
            "At" | "at" => CartanType::At,
            _ => return Err(RootError::Unsupported(s.to_string())),
        })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::B => "B",
            CartanType::C => "C",
            CartanType::D => "D",
            CartanType::G => "G",
            CartanType::A1A1 => "A1A1",
            CartanType::At => "At",
            CartanType::Custom => "Custom",
        };
        f.write_str(s)
    }
}

/// Generalized Cartan matrix with symmetrizer, indexed by position; `labels`
/// gives the generator name at each position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    pub kind: CartanType,
    pub labels: Vec<usize>,
    pub c: Vec<Vec<i64>>,
    pub d: Vec<u32>,
}

impl CartanData {
    pub fn new(kind: CartanType, labels: Vec<usize>, c: Vec<Vec<i64>>, d: Vec<u32>) -> Result<Self, RootError> {
        let cd = CartanData { kind, labels, c, d };
        cd.validate()?;
        Ok(cd)
    }

    fn validate(&self) -> Result<(), RootError> {
        let n = self.labels.len();
        if self.c.len() != n || self.d.len() != n || self.c.iter().any(|r| r.len() != n) {
            return Err(RootError::Invalid("dimension mismatch".into()));
        }
        for s in 0..n {
            if self.c[s][s] != 2 {
                return Err(RootError::Invalid("diagonal must be 2".into()));
            }
            for t in 0..n {
                if s == t {
                    continue;
                }
                if self.c[s][t] > 0 || ((self.c[s][t] == 0) != (self.c[t][s] == 0)) {
                    return Err(RootError::Invalid(format!("entry ({s},{t})")));
                }
                if self.d[s] as i64 * self.c[s][t] != self.d[t] as i64 * self.c[t][s] {
                    return Err(RootError::Invalid("DC not symmetric".into()));
                }
            }
        }
        Ok(())
    }

    /// Standard data for the named types; `n` is the rank (ignored for
    /// `G` and `A1A1`, and the affine rank for `At`).
    pub fn of(kind: CartanType, n: usize) -> Result<Self, RootError> {
        let chain = |n: usize| {
            let mut c = vec![vec![0i64; n]; n];
            for i in 0..n {
                c[i][i] = 2;
                if i + 1 < n {
                    c[i][i + 1] = -1;
                    c[i + 1][i] = -1;
                }
            }
            c
        };
        let labels: Vec<usize> = (1..=n).collect();
        match kind {
            CartanType::A if n >= 1 => Self::new(kind, labels, chain(n), vec![1; n]),
            CartanType::B if n >= 2 => {
                let mut c = chain(n);
                c[0][1] = -2;
                let mut d = vec![2; n];
                d[0] = 1;
                Self::new(kind, labels, c, d)
            }
            CartanType::C if n >= 2 => {
                let mut c = chain(n);
                c[1][0] = -2;
                let mut d = vec![1; n];
                d[0] = 2;
                Self::new(kind, labels, c, d)
            }
            CartanType::D if n >= 3 => {
                let mut c = vec![vec![0i64; n]; n];
                for i in 0..n {
                    c[i][i] = 2;
                }
                let mut link = |a: usize, b: usize| {
                    c[a][b] = -1;
                    c[b][a] = -1;
                };
                link(0, 2);
                link(1, 2);
                for i in 2..n - 1 {
                    link(i, i + 1);
                }
                Self::new(kind, labels, c, vec![1; n])
            }
            CartanType::G => Self::new(kind, vec![1, 2], vec![vec![2, -1], vec![-3, 2]], vec![3, 1]),
            CartanType::A1A1 => Self::new(kind, vec![1, 2], vec![vec![2, 0], vec![0, 2]], vec![1, 1]),
            CartanType::At if n >= 2 => {
                let m = n + 1;
                let mut c = vec![vec![-1i64; m]; m];
                for i in 0..m {
                    c[i][i] = 2;
                }
                if m > 3 {
                    for i in 0..m {
                        for j in 0..m {
                            let gap = (i as i64 - j as i64).rem_euclid(m as i64);
                            if i != j && gap != 1 && gap != m as i64 - 1 {
                                c[i][j] = 0;
                            }
                        }
                    }
                }
                Self::new(kind, (0..m).collect(), c, vec![1; m])
            }
            _ => Err(RootError::Unsupported(format!("{kind}{n}"))),
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn pos(&self, s: usize) -> Result<usize, RootError> {
        self.labels.iter().position(|&l| l == s).ok_or(RootError::UnknownGenerator(s))
    }

    /// Entry `C_st` by generator labels.
    pub fn entry(&self, s: usize, t: usize) -> i64 {
        self.c[self.pos(s).unwrap()][self.pos(t).unwrap()]
    }

    pub fn weight(&self, s: usize) -> u32 {
        self.d[self.pos(s).unwrap()]
    }

    pub fn is_finite_classical(&self) -> bool {
        matches!(self.kind, CartanType::A | CartanType::B | CartanType::C | CartanType::D)
    }

    pub fn coxeter_number(&self) -> Option<usize> {
        let n = self.rank();
        match self.kind {
            CartanType::A => Some(n + 1),
            CartanType::B | CartanType::C => Some(2 * n),
            CartanType::D => Some(2 * n - 2),
            CartanType::G => Some(6),
            CartanType::A1A1 => Some(2),
            _ => None,
        }
    }

    /// Coxeter matrix by positions; `None` stands for ∞.
    pub fn coxeter_matrix(&self) -> Vec<Vec<Option<u32>>> {
        let n = self.rank();
        (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| {
                        if s == t {
                            return Some(1);
                        }
                        match self.c[s][t] * self.c[t][s] {
                            0 => Some(2),
                            1 => Some(3),
                            2 => Some(4),
                            3 => Some(6),
                            _ => None,
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `m_st` by labels.
    pub fn m(&self, s: usize, t: usize) -> Option<u32> {
        self.coxeter_matrix()[self.pos(s).unwrap()][self.pos(t).unwrap()]
    }

    /// `r_s v` on root vectors in the simple-root basis:
    /// `r_s α_t = α_t − C_st α_s`.
    pub fn reflect(&self, s: usize, v: &[i64]) -> Vec<i64> {
        let p = self.pos(s).unwrap();
        let mut out = v.to_vec();
        let shift: i64 = (0..self.rank()).map(|t| self.c[p][t] * v[t]).sum();
        out[p] -= shift;
        out
    }

    pub fn simple_root(&self, s: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[self.pos(s).unwrap()] = 1;
        v
    }

    /// Applies `r_{w_1} ⋯ r_{w_k}` to `v`.
    pub fn act(&self, word: &[usize], v: &[i64]) -> Vec<i64> {
        word.iter().rev().fold(v.to_vec(), |acc, &s| self.reflect(s, &acc))
    }

    /// Reducedness by root positivity: `r_{s_1}⋯r_{s_j} α_{s_{j+1}} > 0`.
    pub fn is_reduced(&self, word: &[usize]) -> bool {
        (0..word.len()).all(|j| {
            let r = self.act(&word[..j], &self.simple_root(word[j]));
            r.iter().all(|&x| x >= 0)
        })
    }

    /// Coxeter quiver exchange matrix with the default orientation
    /// (arrows `s+1 → s`, and `3 → 1`, `3 → 2` for `D`); cyclic for `Ã_n`.
    pub fn default_orientation(&self) -> Vec<(usize, usize)> {
        let n = self.rank();
        let mut out = Vec::new();
        match self.kind {
            CartanType::D => {
                out.push((3, 1));
                out.push((3, 2));
                for s in 3..n {
                    out.push((s + 1, s));
                }
            }
            CartanType::At => {
                for i in 0..n {
                    out.push((self.labels[i], self.labels[(i + 1) % n]));
                }
            }
            _ => {
                for a in 0..n {
                    for b in 0..a {
                        if self.c[a][b] != 0 {
                            out.push((self.labels[a], self.labels[b]));
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn parse_word(s: &str) -> Result<Vec<usize>, RootError> {
    let t = s.trim();
    if t.contains(char::is_whitespace) || t.contains(',') {
        t.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().map_err(|_| RootError::Invalid(format!("bad letter {p}"))))
            .collect()
    } else {
        t.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| RootError::Invalid(format!("bad letter {c}")))).collect()
    }
}

pub fn format_word(w: &[usize]) -> String {
    w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coxeter_matrix_c3() {
        let cd = CartanData::of(CartanType::C, 3).unwrap();
        assert_eq!(cd.m(1, 2), Some(4));
        assert_eq!(cd.m(2, 3), Some(3));
        assert_eq!(cd.m(1, 3), Some(2));
        let a2 = CartanData::of(CartanType::A, 2).unwrap();
        assert_eq!(a2.m(1, 2), Some(3));
        let at1 = CartanData::new(CartanType::Custom, vec![0, 1], vec![vec![2, -2], vec![-2, 2]], vec![1, 1]).unwrap();
        assert_eq!(at1.m(0, 1), None);
        let g2 = CartanData::of(CartanType::G, 2).unwrap();
        assert_eq!(g2.m(1, 2), Some(6));
    }

    #[test]
    fn reflection_c3() {
        let cd = CartanData::of(CartanType::C, 3).unwrap();
        assert_eq!(cd.reflect(2, &cd.simple_root(1)), vec![1, 2, 0]);
        assert_eq!(cd.reflect(2, &cd.simple_root(2)), vec![0, -1, 0]);
        let v = vec![3, -1, 4];
        assert_eq!(cd.reflect(1, &cd.reflect(1, &v)), v);
    }

    #[test]
    fn reducedness() {
        let a2 = CartanData::of(CartanType::A, 2).unwrap();
        assert!(a2.is_reduced(&[1, 2, 1]));
        assert!(!a2.is_reduced(&[1, 1]));
        let c3 = CartanData::of(CartanType::C, 3).unwrap();
        assert!(c3.is_reduced(&[1, 2, 3, 1, 2, 3, 1, 2, 3]));
    }

    #[test]
    fn affine_a2_is_cyclic() {
        let cd = CartanData::of(CartanType::At, 2).unwrap();
        assert_eq!(cd.labels, vec![0, 1, 2]);
        assert_eq!(cd.entry(0, 2), -1);
        assert_eq!(cd.m(0, 1), Some(3));
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("121").unwrap(), vec![1, 2, 1]);
        assert_eq!(parse_word("1 2 10").unwrap(), vec![1, 2, 10]);
        assert_eq!(format_word(&[1, 2]), "1 2");
    }
}
