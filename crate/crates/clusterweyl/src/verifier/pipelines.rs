use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::checks::run_quiver;
use super::forms::f_x;
use super::{engine_error, type_params, Certificate, Mode, Outcome, Run};
use crate::algebra::{AlgebraError, RationalFunction};
use crate::constructions::{
    build_d, build_d_cycle, build_d_power, build_qm, build_tilde_q, d_cycle, m_d_to_q, seq_rd, seq_r, t_pipeline, word_quiver,
    EquivalenceReport,
};
use crate::quiver::{VertexId, WeightedQuiver};
use crate::roots::{CartanData, CartanType};
use crate::seed::{separation_crosscheck, tropical_sign, is_trivial_sequence, MutationSequence, Seed, SeedError, Sign, Tracking};

fn report_outcome(r: &EquivalenceReport) -> Outcome {
    let summary = json!({
        "from": r.from,
        "to": r.to,
        "moves": r.moves,
        "mutations": r.sequence.mutation_count(),
        "sequence": r.sequence,
        "relabeling": r.relabeling.iter().filter(|(a, b)| a != b).map(|(a, b)| format!("{a} -> {b}")).collect::<Vec<_>>(),
        "literal_checks": r.literal_checks,
        "half_arrow_deviations": r.half_arrow_deviations,
    });
    let literal_ok = r.literal_checks.iter().all(|(_, ok)| *ok);
    if r.rows_match && r.decorations_match && r.half_arrow_deviations.is_empty() && literal_ok {
        Ok(summary)
    } else {
        let mut w = summary;
        w["rows_match"] = json!(r.rows_match);
        w["decorations_match"] = json!(r.decorations_match);
        Err(w)
    }
}

/// `J̃(i_D(n))` is carried to `J̃(i_Q(n))` by braid-move mutations.
pub fn check_m_d_to_q(cd: &CartanData) -> Certificate {
    let run = Run::new("M_DtoQ", json!({ "type": cd.kind.to_string(), "n": cd.rank() }), Mode::Tropical);
    run.finish(m_d_to_q(cd).map_err(engine_error).and_then(|r| report_outcome(&r)))
}

/// `T(n−1) ⋯ T(1)` carries `J̃(i_Q(n))` to `J̃(i_Q*(n))` in type `A_n`.
pub fn check_t_pipeline(n: usize) -> Certificate {
    let run = Run::new("T_pipeline", json!({ "type": "A", "n": n }), Mode::Tropical);
    run.finish(t_pipeline(n).map_err(engine_error).and_then(|r| report_outcome(&r)))
}

/// `R_D(s,i)` preserves the cycle form of `D(A_n)`, which is isomorphic
/// to `D(A_n)` as glued from `J̃(i_D)` and its mirror.
pub fn check_rd_preserves(n: usize) -> Certificate {
    let run = Run::new("R_D_preserves_quiver", json!({ "type": "A", "n": n }), Mode::Tropical);
    let body = || -> Outcome {
        let cd = CartanData::of(CartanType::A, n).map_err(engine_error)?;
        let q = build_d_cycle(&cd).map_err(engine_error)?;
        if !q.is_isomorphic(&build_d(&cd).map_err(engine_error)?) {
            return Err(json!({ "error": "cycle form is not isomorphic to D(A_n)" }));
        }
        let mut count = 0;
        for s in 1..=n {
            for i in 1..=d_cycle(n, s).len() {
                let seq = seq_rd(s, i, n).map_err(engine_error)?;
                let p = run_quiver(&q, &seq.sequence).map_err(engine_error)?;
                if p != q {
                    return Err(json!({ "s": s, "i": i, "diff": p.diff(&q) }));
                }
                count += 1;
            }
        }
        Ok(json!({ "vertices": q.len(), "sequences": count }))
    };
    run.finish(body())
}

fn sorted_unfrozen(q: &WeightedQuiver) -> Vec<String> {
    let mut v: Vec<String> = q.unfrozen_ids().iter().map(|v| v.to_string()).collect();
    v.sort();
    v
}

fn strip_decorations(q: &WeightedQuiver) -> WeightedQuiver {
    let drop: Vec<VertexId> = q.ids().iter().filter(|v| v.tag.starts_with('y')).cloned().collect();
    let mut r = q.without(&drop);
    for i in 0..r.len() {
        r.set_frozen(i, false);
    }
    r
}

/// Fixed facts about the builders: unfrozen sets of word quivers, `Q̃`
/// forgetting to `Q_m`, and the ranks of the two `Q_3(Ã_2)`.
pub fn check_construction_pins() -> Certificate {
    let run = Run::new("construction_pins", json!({}), Mode::Tropical);
    let body = || -> Outcome {
        let a3 = CartanData::of(CartanType::A, 3).map_err(engine_error)?;
        let c2 = CartanData::of(CartanType::C, 2).map_err(engine_error)?;
        let c3 = CartanData::of(CartanType::C, 3).map_err(engine_error)?;
        let pins = [
            (word_quiver(&a3, &[1, 2, 3, 1, 2, 1]).map_err(engine_error)?, vec!["v:1:2", "v:1:3", "v:2:2"], "J(123121) A3"),
            (word_quiver(&c2, &[1, 2, 1, 2]).map_err(engine_error)?, vec!["v:1:2", "v:2:2"], "J(1212) C2"),
        ];
        for (q, want, name) in &pins {
            if sorted_unfrozen(q) != *want {
                return Err(json!({ "pin": name, "got": sorted_unfrozen(q), "want": want }));
            }
        }
        let mut tilde = Vec::new();
        for (cd, k) in [(&a3, 1), (&c3, 1), (&c3, 2)] {
            let h = cd.coxeter_number().expect("finite");
            let m = if cd.kind == CartanType::A { k * h } else { k * h / 2 };
            let got = strip_decorations(&build_tilde_q(cd, k).map_err(engine_error)?);
            let want = build_qm(cd, None, m).map_err(engine_error)?;
            if got != want {
                return Err(json!({ "pin": format!("tilde Q {}{} k={k}", cd.kind, cd.rank()), "diff": got.diff(&want) }));
            }
            tilde.push(format!("{}{} k={k}", cd.kind, cd.rank()));
        }
        let at = CartanData::of(CartanType::At, 2).map_err(engine_error)?;
        let cyclic = build_qm(&at, None, 3).map_err(engine_error)?.rank();
        let acyclic = build_qm(&at, Some(&[(0, 1), (2, 1), (2, 0)]), 3).map_err(engine_error)?.rank();
        if (cyclic, acyclic) != (2, 6) {
            return Err(json!({ "pin": "affine A2 ranks", "got": [cyclic, acyclic], "want": [2, 6] }));
        }
        Ok(json!({ "word_pins": 2, "tilde_equals_qm": tilde, "affine_ranks": [cyclic, acyclic] }))
    };
    run.finish(body())
}

/// All mutation-equivalence and construction certificates.
pub fn check_equivalences() -> Vec<Certificate> {
    let mut out = Vec::new();
    for kind in [CartanType::B, CartanType::C] {
        out.push(check_m_d_to_q(&CartanData::of(kind, 3).expect("rank 3")));
    }
    for n in [3, 4] {
        out.push(check_t_pipeline(n));
    }
    for n in 1..=3 {
        out.push(check_rd_preserves(n));
    }
    out.push(check_construction_pins());
    out
}

/// `D(A_1)²` with vertices renamed `1..7` as in the standard picture:
/// `1 → 2 → 4 → 3 → 1` and `4 → 5 → 7 → 6 → 4`, with `1` and `7` frozen.
pub fn d_a1_squared() -> WeightedQuiver {
    let a1 = CartanData::of(CartanType::A, 1).expect("A1");
    let q = build_d_power(&a1, 2).expect("D(A1)^2");
    let names = ["v:1:1:1", "v:1:1:2", "y:1:1", "u:1:1:2", "v:2:1:2", "y:2:1", "u:2:1:2"];
    let map: BTreeMap<VertexId, VertexId> = names.iter().enumerate().map(|(k, s)| (s.parse().expect("label"), VertexId::num(k as i64 + 1))).collect();
    q.rename(&map).expect("rename")
}

/// Reading of the generators as mutation sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BraidWeylConvention {
    /// Products compose right to left, `g h` runs `h` first; transpositions
    /// in a product likewise run right to left.
    Composition,
    /// Products run left to right.
    Execution,
}

fn n(i: i64) -> VertexId {
    VertexId::num(i)
}

fn generators(conv: BraidWeylConvention) -> (MutationSequence, MutationSequence, MutationSequence) {
    let r1 = MutationSequence::new().mutate(n(2)).mutate(n(3)).swap(n(2), n(3));
    let r2 = MutationSequence::new().mutate(n(5)).mutate(n(6)).swap(n(5), n(6));
    let mut b = MutationSequence::mutations([4, 2, 6, 4].map(n));
    let swaps = [(3, 6), (2, 5), (3, 5)];
    let order: Vec<(i64, i64)> = match conv {
        BraidWeylConvention::Composition => swaps.to_vec(),
        BraidWeylConvention::Execution => swaps.iter().rev().cloned().collect(),
    };
    for (a, c) in order {
        b = b.swap(n(a), n(c));
    }
    (r1, r2, b)
}

/// `g h g⁻¹ k⁻¹` as a sequence to be tested for triviality.
fn conjugation(conv: BraidWeylConvention, g: &MutationSequence, h: &MutationSequence, k: &MutationSequence) -> MutationSequence {
    match conv {
        BraidWeylConvention::Composition => g.inverse().then(h).then(g).then(&k.inverse()),
        BraidWeylConvention::Execution => g.clone().then(h).then(&g.inverse()).then(&k.inverse()),
    }
}

/// Braid–Weyl relations on `D(A_1)²`: `b r⁽¹⁾ b⁻¹ = r⁽²⁾`,
/// `b r⁽²⁾ b⁻¹ = r⁽¹⁾`, the involutions, and the failing plain commutator.
pub fn check_braid_weyl_d(conv: BraidWeylConvention) -> Certificate {
    let run = Run::new("braid_weyl_D", json!({ "type": "A", "n": 1, "p": 2, "convention": conv }), Mode::Tropical);
    let body = || -> Outcome {
        let q = d_a1_squared();
        let (r1, r2, b) = generators(conv);
        let trivial = |s: &MutationSequence| is_trivial_sequence(&q, s).map_err(engine_error);
        let bq = run_quiver(&q, &b).map_err(engine_error)?;
        if bq != q {
            return Err(json!({ "generator": "b", "preserves_quiver": false, "diff": bq.diff(&q) }));
        }
        let rels = [
            ("b r1 b^-1 = r2", conjugation(conv, &b, &r1, &r2), true),
            ("b r2 b^-1 = r1", conjugation(conv, &b, &r2, &r1), true),
            ("r1^2 = 1", r1.power(2), true),
            ("r2^2 = 1", r2.power(2), true),
            ("b r1 b^-1 = r1", conjugation(conv, &b, &r1, &r1), false),
        ];
        let mut results = Vec::new();
        for (name, seq, expected) in rels {
            let got = trivial(&seq)?;
            if got != expected {
                return Err(json!({ "relation": name, "trivial": got, "expected": expected }));
            }
            results.push(json!({ "relation": name, "trivial": got }));
        }
        Ok(json!({ "relations": results }))
    };
    run.finish(body())
}

/// F-polynomials after `R(s,1)` on `Q_m`: the one at `v^s_j` is
/// `f_X(s, j−1)` with `u ↦ X`, the others are `1`.
pub fn check_f_polynomial(cd: &CartanData, m: usize) -> Certificate {
    let run = Run::new("f_polynomial", type_params(cd, m), Mode::Symbolic);
    let body = || -> Outcome {
        let q = build_qm(cd, None, m).map_err(engine_error)?;
        let start = Seed::new(&q, Tracking { principal: true, ..Default::default() });
        let gx = start.x_gens();
        let to_x: Vec<Option<usize>> = (0..q.len()).map(Some).collect();
        for &s in &cd.labels {
            let seq = seq_r(s, 1, m).map_err(engine_error)?.sequence;
            let after = start.apply(&seq).map_err(engine_error)?;
            for v in q.ids() {
                let f = after.f_polynomial(v).map_err(engine_error)?.remap(&gx, &to_x);
                let got = RationalFunction::from_poly(f);
                let want = match v.row_col() {
                    Some((t, j)) if t == s => f_x(&q, &gx, s, j as i64 - 1, m),
                    _ => RationalFunction::one(&gx),
                };
                if got != want {
                    return Err(json!({ "s": s, "vertex": v.to_string(), "got": got.to_canonical(), "want": want.to_canonical() }));
                }
            }
        }
        Ok(json!({ "generators": cd.labels }))
    };
    run.finish(body())
}

/// Deterministic random sequence of unfrozen mutations, no immediate repeats.
pub fn random_sequence(q: &WeightedQuiver, rng: &mut ChaCha8Rng, max_len: usize) -> MutationSequence {
    let unf = q.unfrozen_ids();
    let len = rng.gen_range(1..=max_len);
    let mut seq = MutationSequence::new();
    let mut last: Option<usize> = None;
    for _ in 0..len {
        let mut k = rng.gen_range(0..unf.len());
        if unf.len() > 1 && Some(k) == last {
            k = (k + 1 + rng.gen_range(0..unf.len() - 1)) % unf.len();
        }
        last = Some(k);
        seq = seq.mutate(unf[k].clone());
    }
    seq
}

/// Exact division never fails along random mutation sequences, and every
/// c-vector is sign-coherent at every step.
pub fn check_laurent(q: &WeightedQuiver, name: &str, count: usize, max_len: usize, seed: u64) -> Certificate {
    let run = Run::new("laurent", json!({ "quiver": name, "sequences": count, "max_len": max_len, "seed": seed }), Mode::Symbolic);
    let body = || -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = Vec::new();
        let mut steps = 0;
        for n_seq in 0..count {
            let seq = random_sequence(q, &mut rng, max_len);
            let mut s = Seed::new(q, Tracking { a: true, ..Default::default() });
            for (k, st) in seq.steps.iter().enumerate() {
                s = match s.apply_step(st) {
                    Ok(next) => next,
                    Err(SeedError::Algebra(AlgebraError::NotDivisible)) => {
                        failures.push(json!({ "sequence": n_seq, "step": k, "prefix": MutationSequence::from_steps(seq.steps[..=k].to_vec()) }));
                        break;
                    }
                    Err(e) => return Err(engine_error(e)),
                };
                steps += 1;
                if let Some(i) = s.c_matrix().iter().position(|c| tropical_sign(c) == Sign::Mixed) {
                    return Err(json!({
                        "sequence": n_seq,
                        "step": k,
                        "vertex": s.quiver().id(i).to_string(),
                        "c_vector": s.c_matrix()[i],
                        "prefix": MutationSequence::from_steps(seq.steps[..=k].to_vec()),
                    }));
                }
            }
        }
        if let Some(first) = failures.first() {
            return Err(json!({ "division_failures": failures.len(), "first": first }));
        }
        Ok(json!({ "division_failures": 0, "mutations": steps }))
    };
    run.finish(body())
}

/// X-variables from direct mutation agree with their reconstruction from
/// c-vectors and F-polynomials along random sequences.
pub fn check_separation(q: &WeightedQuiver, name: &str, count: usize, max_len: usize, seed: u64) -> Certificate {
    let run = Run::new("separation", json!({ "quiver": name, "sequences": count, "max_len": max_len, "seed": seed }), Mode::Symbolic);
    let body = || -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in 0..count {
            let seq = random_sequence(q, &mut rng, max_len);
            if !separation_crosscheck(q, &seq).map_err(engine_error)? {
                return Err(json!({ "sequence": k, "steps": seq }));
            }
        }
        Ok(json!({ "sequences": count }))
    };
    run.finish(body())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_a1_squared_matches_the_picture() {
        let q = d_a1_squared();
        let arrows = [(3, 1), (1, 2), (2, 4), (4, 3), (6, 4), (4, 5), (5, 7), (7, 6)];
        for (a, b) in arrows {
            assert_eq!(q.eps(q.idx(&n(a)).unwrap(), q.idx(&n(b)).unwrap()), 1, "{a}->{b}");
        }
        assert_eq!(q.unfrozen().len(), 5);
    }

    #[test]
    fn laurent_small() {
        let a2 = CartanData::of(CartanType::A, 2).unwrap();
        let q = build_qm(&a2, None, 2).unwrap();
        let c = check_laurent(&q, "Q2(A2)", 10, 8, 7);
        assert!(c.passed(), "{}", c.to_json_string());
        let again = check_laurent(&q, "Q2(A2)", 10, 8, 7);
        assert_eq!(c.without_timing(), again.without_timing());
    }
}
