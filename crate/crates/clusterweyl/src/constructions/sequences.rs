use serde::Serialize;
use serde_json::{json, Value};

use super::{d_cycle, ConstructionError};
use crate::quiver::VertexId;
use crate::roots::{dynkin_involution, shift_ns, CartanData};
use crate::seed::{MutationSequence, Step};

/// A mutation sequence with the name and parameters of its construction.
#[derive(Clone, Debug, Serialize)]
pub struct NamedSequence {
    pub tag: String,
    pub params: Value,
    pub sequence: MutationSequence,
}

impl NamedSequence {
    fn new(tag: &str, params: Value, sequence: MutationSequence) -> Self {
        NamedSequence { tag: tag.into(), params, sequence }
    }
}

/// Cycle operator on `v_1 → v_2 → ⋯ → v_m → v_1` started at `v_i`
/// (1-based): `N⁻¹ ∘ (v_{m+i−2}, v_{m+i−1}) ∘ μ_{m+i−1} μ_{m+i−2} ∘ N`
/// with `N = μ_{m+i−3} ⋯ μ_i`.
pub fn seq_cycle_r(cycle: &[VertexId], i: usize) -> Result<NamedSequence, ConstructionError> {
    let m = cycle.len();
    if m < 2 {
        return Err(ConstructionError::Invalid("cycle needs at least two vertices".into()));
    }
    for a in 0..m {
        if cycle[a + 1..].contains(&cycle[a]) {
            return Err(ConstructionError::Invalid(format!("repeated cycle vertex {}", cycle[a])));
        }
    }
    if i == 0 || i > m {
        return Err(ConstructionError::Invalid(format!("start {i} outside 1..{m}")));
    }
    let v = |j: usize| cycle[(j - 1) % m].clone();
    let n: Vec<VertexId> = (i..=m + i - 3).map(v).collect();
    let mut seq = MutationSequence::mutations(n.iter().cloned());
    seq = seq.mutate(v(m + i - 2)).mutate(v(m + i - 1)).swap(v(m + i - 2), v(m + i - 1));
    seq = seq.then(&MutationSequence::mutations(n.into_iter().rev()));
    let names: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
    Ok(NamedSequence::new("cycleR", json!({"cycle": names, "start": i}), seq))
}

/// `R(s,i)` on `Q_m`.
pub fn seq_r(s: usize, i: usize, m: usize) -> Result<NamedSequence, ConstructionError> {
    let cycle: Vec<VertexId> = (1..=m).map(|j| VertexId::v(s, j)).collect();
    let mut r = seq_cycle_r(&cycle, i)?;
    r.tag = "R".into();
    r.params = json!({"s": s, "i": i, "m": m});
    Ok(r)
}

/// `R(w) = R(s_1,i) ⋯ R(s_k,i)`, executing `R(s_1,i)` first.
pub fn seq_r_word(word: &[usize], i: usize, m: usize) -> Result<NamedSequence, ConstructionError> {
    let mut seq = MutationSequence::new();
    for &s in word {
        seq = seq.then(&seq_r(s, i, m)?.sequence);
    }
    Ok(NamedSequence::new("Rword", json!({"word": word, "i": i, "m": m}), seq))
}

/// `R_D(s,i)` on the cycle `ρ_s` of the cycle form of `D(A_n)`.
pub fn seq_rd(s: usize, i: usize, n: usize) -> Result<NamedSequence, ConstructionError> {
    if s == 0 || s > n {
        return Err(ConstructionError::Invalid(format!("generator {s} outside 1..{n}")));
    }
    let mut r = seq_cycle_r(&d_cycle(n, s), i)?;
    r.tag = "R_D".into();
    r.params = json!({"s": s, "i": i, "n": n});
    Ok(r)
}

/// `T(k) = μ(k) ⋯ μ(1)` with `μ(j) = μ¹_{j+1} μ²_j ⋯ μ^j_2`; `μ^j_2` runs first.
pub fn seq_t(k: usize) -> NamedSequence {
    let mut seq = MutationSequence::new();
    for j in 1..=k {
        for s in (1..=j).rev() {
            seq = seq.mutate(VertexId::v(s, j + 2 - s));
        }
    }
    NamedSequence::new("T", json!({"k": k}), seq)
}

/// First level of the `C_n` recursion from `J̃(i_D(n))` towards
/// `J̃(i_Q(n))`: blocks `μ^{k+1}_3, μ^k_5, …, μ^2_{2k+1}` for `k = 1..n−2`.
pub fn seq_m_dtoq_cn_block(n: usize) -> NamedSequence {
    let mut seq = MutationSequence::new();
    for k in 1..n.saturating_sub(1) {
        for s in (2..=k + 1).rev() {
            seq = seq.mutate(VertexId::v(s, 3 + 2 * (k + 1 - s)));
        }
    }
    NamedSequence::new("M_DtoQ_block", json!({"n": n}), seq)
}

/// `σ_Q` as a seed permutation: the content at `v^{s*}_{i+n_{s*}}` moves
/// to `v^s_i`.
pub fn sigma_q(cd: &CartanData, arrows: &[(usize, usize)], m: usize) -> Result<NamedSequence, ConstructionError> {
    let ns = shift_ns(cd, arrows)?;
    let n_of = |s: usize| ns.iter().find(|p| p.0 == s).map(|p| p.1).expect("generator");
    let mut pairs = Vec::new();
    for &s in &cd.labels {
        let t = dynkin_involution(cd, s);
        for i in 1..=m {
            let from = VertexId::v(t, (i - 1 + n_of(t)) % m + 1);
            pairs.push((from, VertexId::v(s, i)));
        }
    }
    let seq = MutationSequence::from_steps(vec![Step::Permute(pairs)]);
    Ok(NamedSequence::new("sigma_Q", json!({"type": cd.kind.to_string(), "n": cd.rank(), "m": m, "shifts": ns}), seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_qm;
    use crate::roots::CartanType;

    #[test]
    fn r_shapes() {
        let r = seq_r(1, 1, 2).unwrap().sequence;
        assert_eq!(r.to_json_string(), r#"[{"mut":"v:1:1"},{"mut":"v:1:2"},{"perm":{"v:1:1":"v:1:2","v:1:2":"v:1:1"}}]"#);
        let r = seq_r(2, 1, 3).unwrap().sequence;
        let t: Vec<String> = r.targets().iter().map(|v| v.to_string()).collect();
        assert_eq!(t, vec!["v:2:1", "v:2:2", "v:2:3", "v:2:1"]);
        let r = seq_r(1, 2, 5).unwrap().sequence;
        assert_eq!(r.mutation_count(), 2 * 3 + 2);
        assert!(seq_cycle_r(&[VertexId::v(1, 1)], 1).is_err());
        assert!(seq_cycle_r(&[VertexId::v(1, 1), VertexId::v(1, 1)], 1).is_err());
    }

    #[test]
    fn r_preserves_q4_c3() {
        let cd = CartanData::of(CartanType::C, 3).unwrap();
        let q = build_qm(&cd, None, 4).unwrap();
        for s in 1..=3 {
            for i in 1..=4 {
                let r = seq_r(s, i, 4).unwrap().sequence;
                let mut p = q.clone();
                for st in &r.steps {
                    p = match st {
                        Step::Mutate(v) => p.mutate_at(v).unwrap(),
                        Step::Permute(pp) => p.apply_permutation(pp).unwrap(),
                    };
                }
                assert_eq!(p, q, "s={s} i={i}");
            }
        }
    }

    #[test]
    fn t_and_block_targets() {
        let t: Vec<String> = seq_t(2).sequence.targets().iter().map(|v| v.to_string()).collect();
        assert_eq!(t, vec!["v:1:2", "v:2:2", "v:1:3"]);
        let b: Vec<String> = seq_m_dtoq_cn_block(4).sequence.targets().iter().map(|v| v.to_string()).collect();
        assert_eq!(b, vec!["v:2:3", "v:3:3", "v:2:5"]);
        assert_eq!(seq_rd(3, 1, 3).unwrap().sequence.mutation_count(), 2);
    }

    #[test]
    fn sigma_rotates_self_dual_types() {
        let cd = CartanData::of(CartanType::C, 3).unwrap();
        let s = sigma_q(&cd, &cd.default_orientation(), 3).unwrap();
        let Step::Permute(p) = &s.sequence.steps[0] else { panic!() };
        assert!(p.contains(&(VertexId::v(1, 1), VertexId::v(1, 1))));
        let q = build_qm(&cd, None, 3).unwrap();
        assert_eq!(q.apply_permutation(p).unwrap(), q);
    }
}
