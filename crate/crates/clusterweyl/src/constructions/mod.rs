//! Builders for the named quivers and mutation sequences.

mod braid;
mod sequences;
mod surface;
mod word;

pub use braid::{braid_path, m_d_to_q, t_pipeline, BraidMove, EquivalenceReport, WordState};
pub use sequences::{seq_cycle_r, seq_m_dtoq_cn_block, seq_r, seq_r_word, seq_rd, seq_t, sigma_q, NamedSequence};
pub use surface::{build_d, build_d_cycle, build_d_power, build_tilde_q, d_cycle, mirror};
pub use word::{decorated_word, decorated_word_quiver, elementary_quiver, word_quiver, DecoratedWord};

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::quiver::{QuiverError, VertexId, WeightedQuiver};
use crate::roots::{CartanData, RootError};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// A quiver together with the name and parameters of its construction.
#[derive(Clone, Debug, Serialize)]
pub struct NamedQuiver {
    pub tag: String,
    pub params: Value,
    #[serde(skip)]
    pub quiver: WeightedQuiver,
}

impl NamedQuiver {
    pub fn new(tag: &str, params: Value, quiver: WeightedQuiver) -> Self {
        NamedQuiver { tag: tag.into(), params, quiver }
    }
}

/// Coxeter quiver: `ε_st = −C_ts > 0` for every arrow `s → t`.
pub fn coxeter_quiver(cd: &CartanData, orientation: Option<&[(usize, usize)]>) -> Result<WeightedQuiver, ConstructionError> {
    let arrows = match orientation {
        Some(a) => a.to_vec(),
        None => cd.default_orientation(),
    };
    let n = cd.rank();
    let mut covered = vec![vec![false; n]; n];
    let mut e = vec![vec![0i64; n]; n];
    for &(s, t) in &arrows {
        let (ps, pt) = (cd.pos(s)?, cd.pos(t)?);
        if ps == pt || cd.c[ps][pt] == 0 || covered[ps][pt] {
            return Err(ConstructionError::Invalid(format!("orientation arrow {s}->{t}")));
        }
        covered[ps][pt] = true;
        covered[pt][ps] = true;
        e[ps][pt] = -2 * cd.c[pt][ps];
        e[pt][ps] = 2 * cd.c[ps][pt];
    }
    for s in 0..n {
        for t in 0..n {
            if s != t && cd.c[s][t] != 0 && !covered[s][t] {
                return Err(ConstructionError::Invalid(format!("edge {}-{} not oriented", cd.labels[s], cd.labels[t])));
            }
        }
    }
    let ids = cd.labels.iter().map(|&s| VertexId::num(s as i64)).collect();
    Ok(WeightedQuiver::new(ids, vec![false; n], e, cd.d.clone())?)
}

/// `Q_m`: vertices `v^s_i`, `i = 1..m`, with the cycles `P_s` and the
/// arrows `v^s_i → v^t_i → v^s_{i+1}`... for every Coxeter arrow `s → t`.
pub fn build_qm(cd: &CartanData, orientation: Option<&[(usize, usize)]>, m: usize) -> Result<WeightedQuiver, ConstructionError> {
    if m < 2 {
        return Err(ConstructionError::Invalid("m must be at least 2".into()));
    }
    let cox = coxeter_quiver(cd, orientation)?;
    let sigma = cox.structure_matrix2();
    let mut ids = Vec::new();
    let mut d = Vec::new();
    for (p, &s) in cd.labels.iter().enumerate() {
        for i in 1..=m {
            ids.push(VertexId::v(s, i));
            d.push(cd.d[p]);
        }
    }
    let mut q = WeightedQuiver::empty(ids, vec![false; cd.rank() * m], d)?;
    let at = |p: usize, i: usize| p * m + (i - 1) % m;
    for p in 0..cd.rank() {
        for i in 1..=m {
            q.add_sigma2(at(p, i), at(p, i + 1), 2)?;
        }
    }
    for ps in 0..cd.rank() {
        for pt in 0..cd.rank() {
            if sigma[ps][pt] > 0 {
                for i in 1..=m {
                    q.add_sigma2(at(ps, i), at(pt, i), sigma[ps][pt])?;
                    q.add_sigma2(at(pt, i + 1), at(ps, i), sigma[ps][pt])?;
                }
            }
        }
    }
    q.validate()?;
    Ok(q)
}

/// Vertices of the cycle `P_s` in `Q_m`.
pub fn cycle_vertices(s: usize, m: usize) -> Vec<VertexId> {
    (1..=m).map(|i| VertexId::v(s, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::CartanType;

    #[test]
    fn coxeter_c3() {
        let cd = CartanData::of(CartanType::C, 3).unwrap();
        let q = coxeter_quiver(&cd, None).unwrap();
        let e: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| q.eps(i, j)).collect()).collect();
        assert_eq!(e, vec![vec![0, -2, 0], vec![1, 0, -1], vec![0, 1, 0]]);
        assert!(coxeter_quiver(&cd, Some(&[(1, 2)])).is_err());
        assert!(coxeter_quiver(&cd, Some(&[(1, 3), (2, 3)])).is_err());
    }

    #[test]
    fn qm_entries_follow_cartan_matrix() {
        let cd = CartanData::of(CartanType::C, 3).unwrap();
        let q = build_qm(&cd, None, 4).unwrap();
        assert_eq!(q.len(), 12);
        for s in 1..=3 {
            for t in 1..=3 {
                for i in 1..=4 {
                    let e = q.eps(q.idx(&VertexId::v(s, i)).unwrap(), q.idx(&VertexId::v(t, i)).unwrap());
                    let want = if s == t { 0 } else { cd.entry(t, s).abs() };
                    assert_eq!(e.abs(), want);
                }
            }
        }
    }

    #[test]
    fn qm_two_layers_drop_the_cycle() {
        let cd = CartanData::of(CartanType::A, 2).unwrap();
        let q = build_qm(&cd, None, 2).unwrap();
        assert_eq!(q.eps(q.idx(&VertexId::v(1, 1)).unwrap(), q.idx(&VertexId::v(1, 2)).unwrap()), 0);
        assert!(build_qm(&cd, None, 1).is_err());
    }

    #[test]
    fn affine_a2_ranks() {
        let cd = CartanData::of(CartanType::At, 2).unwrap();
        let cyclic = build_qm(&cd, None, 3).unwrap();
        let acyclic = build_qm(&cd, Some(&[(0, 1), (2, 1), (2, 0)]), 3).unwrap();
        assert_eq!(cyclic.rank(), 2);
        assert_eq!(acyclic.rank(), 6);
    }

    #[test]
    fn orientation_change_is_a_relabeling() {
        for (kind, n) in [(CartanType::A, 3), (CartanType::C, 3)] {
            let cd = CartanData::of(kind, n).unwrap();
            let a = build_qm(&cd, None, 4).unwrap();
            let other: Vec<(usize, usize)> = cd.default_orientation().iter().map(|&(s, t)| if s == 2 || t == 2 { (t, s) } else { (s, t) }).collect();
            if let Ok(b) = build_qm(&cd, Some(&other), 4) {
                assert!(a.is_isomorphic(&b));
            }
        }
    }
}
