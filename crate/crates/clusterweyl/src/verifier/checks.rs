use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::forms::{decoration_between, f_a, f_x, r_on_x, r_trop, tropical_apply, CoxeterEps};
use super::{engine_error, type_params, Certificate, Mode, Outcome, Run};
use crate::algebra::RationalFunction;
use crate::constructions::{build_qm, build_tilde_q, coxeter_quiver, seq_r, seq_r_word, sigma_q, NamedSequence};
use crate::quiver::{QuiverError, VertexId, WeightedQuiver};
use crate::roots::{adapted_words, is_adapted, shift_ns, CartanData, CartanType};
use crate::seed::{ensemble_map, is_green_sequence, is_trivial_sequence, MutationSequence, Seed, Step, Tracking};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormMode {
    A,
    X,
    Tropical,
    Decorated,
}

impl std::str::FromStr for FormMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(FormMode::A),
            "X" | "x" => Ok(FormMode::X),
            "tropical" | "trop" => Ok(FormMode::Tropical),
            "decorated" => Ok(FormMode::Decorated),
            _ => Err(format!("unknown mode {s}")),
        }
    }
}

pub(crate) fn run_quiver(q: &WeightedQuiver, seq: &MutationSequence) -> Result<WeightedQuiver, QuiverError> {
    let mut p = q.clone();
    for st in &seq.steps {
        p = match st {
            Step::Mutate(v) => p.mutate_at(v)?,
            Step::Permute(pp) => p.apply_permutation(pp)?,
        };
    }
    Ok(p)
}

/// `k` with `m = k·h` (type A) or `m = k·h/2` (B, C, D), if any.
pub fn tilde_multiple(cd: &CartanData, m: usize) -> Option<usize> {
    let h = cd.coxeter_number()?;
    let len = match cd.kind {
        CartanType::A => h,
        CartanType::B | CartanType::C | CartanType::D => h / 2,
        _ => return None,
    };
    m.is_multiple_of(len).then_some(m / len)
}

fn preserves(q: &WeightedQuiver, name: &str, seqs: &[NamedSequence]) -> Outcome {
    for ns in seqs {
        let p = run_quiver(q, &ns.sequence).map_err(engine_error)?;
        if &p != q {
            return Err(json!({ "quiver": name, "sequence": ns.params, "diff": p.diff(q) }));
        }
    }
    Ok(json!({ "quiver": name, "sequences": seqs.len() }))
}

fn all_r(cd: &CartanData, m: usize) -> Result<Vec<NamedSequence>, Value> {
    let mut out = Vec::new();
    for &s in &cd.labels {
        for i in 1..=m {
            out.push(seq_r(s, i, m).map_err(engine_error)?);
        }
    }
    Ok(out)
}

/// `R(s,i)` returns `Q_m` to itself for all `s, i`; also `Q̃` when `m` is
/// a multiple of the Coxeter number (half of it outside type A).
pub fn check_r_preserves_quiver(cd: &CartanData, m: usize) -> Certificate {
    let run = Run::new("R_preserves_quiver", type_params(cd, m), Mode::Tropical);
    let body = || -> Outcome {
        let q = build_qm(cd, None, m).map_err(engine_error)?;
        let seqs = all_r(cd, m)?;
        let plain = preserves(&q, "Q_m", &seqs)?;
        let tilde = match tilde_multiple(cd, m) {
            Some(k) => {
                let qt = build_tilde_q(cd, k).map_err(engine_error)?;
                preserves(&qt, "tilde Q", &seqs)?;
                json!({ "k": k, "vertices": qt.len() })
            }
            None => json!("no decorated variant for this m"),
        };
        Ok(json!({ "plain": plain, "decorated": tilde }))
    };
    run.finish(body())
}

/// Whether a single sequence returns the labeled quiver to itself.
pub fn check_sequence_preserves(q: &WeightedQuiver, seq: &NamedSequence) -> Certificate {
    let run = Run::new("sequence_preserves_quiver", json!({ "sequence": seq.tag, "params": seq.params }), Mode::Tropical);
    run.finish(preserves(q, "input", std::slice::from_ref(seq)))
}

fn mismatch(s: usize, i: usize, v: &VertexId, got: &RationalFunction, want: &RationalFunction) -> Value {
    json!({ "s": s, "i": i, "vertex": v.to_string(), "got": got.to_canonical(), "want": want.to_canonical() })
}

fn a_images(q: &WeightedQuiver, seq: &MutationSequence) -> Result<(Seed, Vec<RationalFunction>), Value> {
    let s = Seed::new(q, Tracking { a: true, ..Default::default() }).apply(seq).map_err(engine_error)?;
    let imgs = q.ids().iter().map(|v| s.a(v).map(|p| RationalFunction::from_poly(p.clone()))).collect::<Result<_, _>>().map_err(engine_error)?;
    Ok((s, imgs))
}

fn x_images(q: &WeightedQuiver, seq: &MutationSequence) -> Result<Vec<RationalFunction>, Value> {
    let s = Seed::new(q, Tracking { x: true, ..Default::default() }).apply(seq).map_err(engine_error)?;
    q.ids().iter().map(|v| s.x(v).cloned()).collect::<Result<_, _>>().map_err(engine_error)
}

fn closed_a(q: &WeightedQuiver, cd: &CartanData, eps: &CoxeterEps, m: usize, decorated: bool) -> Outcome {
    let g = Seed::new(q, Tracking::tropical()).a_gens();
    let mut count = 0;
    for &s in &cd.labels {
        let deco = |i: usize| if decorated { decoration_between(q, s, i, m) } else { None };
        let fa = f_a(q, &g, eps, s, m, &deco);
        for i in 1..=m {
            let (_, imgs) = a_images(q, &seq_r(s, i, m).map_err(engine_error)?.sequence)?;
            for (k, v) in q.ids().iter().enumerate() {
                let var = RationalFunction::var(&g, k);
                let want = match v.row_col() {
                    Some((t, _)) if t == s && v.tag == "v" => &fa * &var,
                    _ => var,
                };
                if imgs[k] != want {
                    return Err(mismatch(s, i, v, &imgs[k], &want));
                }
                count += 1;
            }
        }
    }
    Ok(json!({ "compared": count }))
}

fn closed_x(q: &WeightedQuiver, cd: &CartanData, eps: &CoxeterEps, m: usize) -> Outcome {
    let g = Seed::new(q, Tracking::tropical()).x_gens();
    let mut count = 0;
    for &s in &cd.labels {
        let fx = |i: i64| f_x(q, &g, s, i, m);
        for i in 1..=m {
            let imgs = x_images(q, &seq_r(s, i, m).map_err(engine_error)?.sequence)?;
            for (k, v) in q.ids().iter().enumerate() {
                let want = match v.row_col() {
                    Some((t, j)) if v.tag == "v" => r_on_x(q, &g, eps, s, t, j, m),
                    _ => {
                        let var = RationalFunction::var(&g, k);
                        match (1..=m).find(|&j| decoration_between(q, s, j, m).as_ref() == Some(v)) {
                            Some(j) => {
                                let xs = RationalFunction::var(&g, q.idx(&VertexId::v(s, j)).map_err(engine_error)?);
                                &(&(&var * &xs) * &fx(j as i64 - 1)) / &fx(j as i64)
                            }
                            None => var,
                        }
                    }
                };
                if imgs[k] != want {
                    return Err(mismatch(s, i, v, &imgs[k], &want));
                }
                count += 1;
            }
        }
    }
    Ok(json!({ "compared": count }))
}

/// Deterministic integer points, nonnegative on `P_s`.
fn sample_points(q: &WeightedQuiver, s: usize, count: usize) -> Vec<Vec<i64>> {
    let n = q.len();
    let on_cycle = |i: usize| q.id(i).row_col().map(|(t, _)| t == s).unwrap_or(false);
    let mut rng = ChaCha8Rng::seed_from_u64(s as u64);
    let mut out = vec![vec![0; n], (0..n).map(|i| i64::from(on_cycle(i))).collect()];
    while out.len() < count {
        out.push((0..n).map(|i| if on_cycle(i) { rng.gen_range(0..=4) } else { rng.gen_range(-4..=4) }).collect());
    }
    out
}

fn closed_tropical(q: &WeightedQuiver, cd: &CartanData, eps: &CoxeterEps, m: usize) -> Outcome {
    let mut points = 0;
    for &s in &cd.labels {
        let seqs: Vec<MutationSequence> = (1..=m).map(|i| seq_r(s, i, m).map(|r| r.sequence)).collect::<Result<_, _>>().map_err(engine_error)?;
        for p in sample_points(q, s, 24) {
            let at = |t: usize, j: usize| p[q.idx(&VertexId::v(t, j)).expect("row vertex")];
            let want: Vec<i64> = q.ids().iter().map(|v| v.row_col().map(|(t, j)| r_trop(eps, s, m, &at, t, j)).expect("row vertex")).collect();
            let mut first: Option<Vec<i64>> = None;
            for (i, seq) in seqs.iter().enumerate() {
                let (_, got) = tropical_apply(q, seq, &p).map_err(engine_error)?;
                if got != want {
                    let k = (0..got.len()).find(|&k| got[k] != want[k]).unwrap_or(0);
                    return Err(json!({ "s": s, "i": i + 1, "point": p, "vertex": q.id(k).to_string(), "got": got[k], "want": want[k] }));
                }
                match &first {
                    None => first = Some(got),
                    Some(f) if *f != got => return Err(json!({ "s": s, "i": i + 1, "point": p, "i_dependent": true })),
                    _ => {}
                }
            }
            points += 1;
        }
        // The c-vectors of R(s,i) are the same linear map, read off the engine.
        let mut reference: Option<Vec<Vec<i64>>> = None;
        for (i, seq) in seqs.iter().enumerate() {
            let c = Seed::new(q, Tracking::tropical()).apply(seq).map_err(engine_error)?.c_matrix().clone();
            match &reference {
                None => reference = Some(c),
                Some(r) if *r != c => return Err(json!({ "s": s, "i": i + 1, "c_matrix_differs_from_i": 1 })),
                _ => {}
            }
        }
    }
    Ok(json!({ "points": points, "i_independent": true }))
}

/// Engine output of `R(s,i)` against the closed forms.
pub fn check_closed_forms(cd: &CartanData, m: usize, mode: FormMode) -> Certificate {
    let engine = if mode == FormMode::Tropical { Mode::Tropical } else { Mode::Symbolic };
    let mut params = type_params(cd, m);
    params["mode"] = json!(mode);
    let run = Run::new("closed_forms", params, engine);
    let body = || -> Outcome {
        if m < 2 {
            return Err(json!({ "error": "m must be at least 2" }));
        }
        let cox = coxeter_quiver(cd, None).map_err(engine_error)?;
        let eps = CoxeterEps::new(cd, &cox);
        match mode {
            FormMode::A => closed_a(&build_qm(cd, None, m).map_err(engine_error)?, cd, &eps, m, false),
            FormMode::X => closed_x(&build_qm(cd, None, m).map_err(engine_error)?, cd, &eps, m),
            FormMode::Tropical => closed_tropical(&build_qm(cd, None, m).map_err(engine_error)?, cd, &eps, m),
            FormMode::Decorated => {
                let k = tilde_multiple(cd, m).ok_or_else(|| json!({ "error": "no decorated quiver for this m" }))?;
                let q = build_tilde_q(cd, k).map_err(engine_error)?;
                let a = closed_a(&q, cd, &eps, m, true)?;
                let x = closed_x(&q, cd, &eps, m)?;
                Ok(json!({ "k": k, "A": a, "X": x }))
            }
        }
    };
    run.finish(body())
}

fn pair_relation(s: usize, t: usize, m: usize, power: usize) -> Result<MutationSequence, Value> {
    let st = seq_r_word(&[s, t], 1, m).map_err(engine_error)?.sequence;
    Ok(st.power(power))
}

fn symbolic_trivial(q: &WeightedQuiver, seq: &MutationSequence) -> Result<bool, Value> {
    let (s, imgs) = a_images(q, seq)?;
    let g = s.a_gens();
    Ok(s.quiver() == q && imgs.iter().enumerate().all(|(k, r)| *r == RationalFunction::var(&g, k)))
}

/// Coxeter relations among the `R(s)` on `Q_m`: tropical periodicity by
/// default, symbolic A-variables when `symbolic` is set.
pub fn check_braid(cd: &CartanData, m: usize, symbolic: bool) -> Certificate {
    let run = Run::new("braid", type_params(cd, m), if symbolic { Mode::Symbolic } else { Mode::Tropical });
    let body = || -> Outcome {
        let q = build_qm(cd, None, m).map_err(engine_error)?;
        let trivial = |seq: &MutationSequence| -> Result<bool, Value> {
            if symbolic {
                symbolic_trivial(&q, seq)
            } else {
                is_trivial_sequence(&q, seq).map_err(engine_error)
            }
        };
        let mut checked = Vec::new();
        let mut skipped = Vec::new();
        for &s in &cd.labels {
            let sq = seq_r(s, 1, m).map_err(engine_error)?.sequence.power(2);
            if !trivial(&sq)? {
                return Err(json!({ "relation": format!("R({s})^2"), "trivial": false }));
            }
            checked.push(format!("R({s})^2"));
        }
        for (a, &s) in cd.labels.iter().enumerate() {
            for &t in &cd.labels[a + 1..] {
                let Some(mst) = cd.m(s, t) else {
                    skipped.push(format!("({s},{t}): m = infinity"));
                    continue;
                };
                let rel = format!("(R({s})R({t}))^{mst}");
                if !trivial(&pair_relation(s, t, m, mst as usize)?)? {
                    return Err(json!({ "relation": rel, "trivial": false }));
                }
                checked.push(rel);
            }
        }
        Ok(json!({ "relations": checked, "skipped": skipped }))
    };
    run.finish(body())
}

fn a_substitution(s: &Seed, q: &WeightedQuiver) -> Result<Vec<RationalFunction>, Value> {
    q.ids().iter().map(|v| s.a(v).map(|p| RationalFunction::from_poly(p.clone()))).collect::<Result<_, _>>().map_err(engine_error)
}

fn cycle_product(x: &dyn Fn(&VertexId) -> Result<RationalFunction, Value>, t: usize, m: usize) -> Result<RationalFunction, Value> {
    let mut p = x(&VertexId::v(t, 1))?;
    for i in 2..=m {
        p = &p * &x(&VertexId::v(t, i))?;
    }
    Ok(p)
}

/// Peripherality of `R(s)` (it fixes `p*(X)`), the transformation of the
/// cycle products `𝕏_t` and of the functions `f_A(t)`.
pub fn check_peripheral_and_casimir(cd: &CartanData, m: usize) -> Certificate {
    let run = Run::new("peripheral_and_casimir", type_params(cd, m), Mode::Symbolic);
    let body = || -> Outcome {
        let q = build_qm(cd, None, m).map_err(engine_error)?;
        let cox = coxeter_quiver(cd, None).map_err(engine_error)?;
        let eps = CoxeterEps::new(cd, &cox);
        let initial = Seed::new(&q, Tracking { a: true, x: true, ..Default::default() });
        let p0 = ensemble_map(&initial).map_err(engine_error)?;
        let ga = initial.a_gens();
        let gx = initial.x_gens();
        let fa = |t: usize| f_a(&q, &ga, &eps, t, m, &|_| None);
        let mut exponents = Vec::new();
        for &s in &cd.labels {
            let seq = seq_r(s, 1, m).map_err(engine_error)?.sequence;
            let after = initial.apply(&seq).map_err(engine_error)?;
            let p1 = ensemble_map(&after).map_err(engine_error)?;
            for (v, r) in &p1 {
                let r0 = &p0.iter().find(|(w, _)| w == v).expect("same vertices").1;
                if r != r0 {
                    return Err(json!({ "family": "p*", "s": s, "vertex": v.to_string(), "got": r.to_canonical(), "want": r0.to_canonical() }));
                }
            }
            let x0 = |v: &VertexId| Ok(RationalFunction::var(&gx, q.idx(v).map_err(engine_error)?));
            let x1 = |v: &VertexId| after.x(v).cloned().map_err(engine_error);
            let xs = cycle_product(&x0, s, m)?;
            let subst = a_substitution(&after, &q)?;
            let fs = fa(s);
            for &t in &cd.labels {
                let e = -cd.entry(s, t);
                let got = cycle_product(&x1, t, m)?;
                let want = if t == s { xs.inv().map_err(engine_error)? } else { &cycle_product(&x0, t, m)? * &xs.pow(e) };
                if got != want {
                    return Err(json!({ "family": "casimir", "s": s, "t": t, "got": got.to_canonical(), "want": want.to_canonical() }));
                }
                if t != s && e != 0 {
                    exponents.push(json!({ "s": s, "t": t, "exponent": e }));
                }
                let got = fa(t).substitute(&subst);
                let want = if t == s { fs.inv().map_err(engine_error)? } else { &fa(t) * &fs.pow(e) };
                if got != want {
                    return Err(json!({ "family": "f_A", "s": s, "t": t, "got": got.to_canonical(), "want": want.to_canonical() }));
                }
            }
        }
        Ok(json!({ "families": ["p*", "casimir", "f_A"], "casimir_exponents": exponents }))
    };
    run.finish(body())
}

/// `R(word)` is green on `Q_m` and, for an adapted reduced word of `w₀`,
/// `σ_Q ∘ R(w₀)` sends every unfrozen c-vector `e_i` to `−e_i`.
pub fn check_green_and_dt(cd: &CartanData, arrows: &[(usize, usize)], m: usize, word: Option<&[usize]>) -> Certificate {
    let mut params = type_params(cd, m);
    params["orientation"] = json!(arrows);
    let run = Run::new("green_and_DT", params, Mode::Tropical);
    let body = || -> Outcome {
        let h = cd.coxeter_number().ok_or_else(|| json!({ "error": "finite type required", "envelope": "finite types only" }))?;
        let word: Vec<usize> = match word {
            Some(w) => w.to_vec(),
            None => adapted_words(cd, arrows, 1).into_iter().next().ok_or_else(|| json!({ "error": "no adapted word" }))?,
        };
        if !cd.is_reduced(&word) {
            return Err(json!({ "word": word, "error": "word is not reduced" }));
        }
        let q = build_qm(cd, Some(arrows), m).map_err(engine_error)?;
        let seq = seq_r_word(&word, 1, m).map_err(engine_error)?.sequence;
        let green = is_green_sequence(&q, &seq).map_err(engine_error)?;
        if !green.green {
            return Err(json!({ "word": word, "green": false, "first_red": green.first_red }));
        }
        let longest = word.len() == cd.rank() * h / 2;
        if !longest {
            return Err(json!({ "word": word, "green": true, "dt": false, "reason": "word is not a reduced word of w0" }));
        }
        if !is_adapted(arrows, &word) {
            return Err(json!({ "word": word, "green": true, "dt": false, "reason": "word is not adapted to the orientation" }));
        }
        let sigma = sigma_q(cd, arrows, m).map_err(engine_error)?;
        let full = seq.then(&sigma.sequence);
        let end = Seed::new(&q, Tracking::tropical()).apply(&full).map_err(engine_error)?;
        let unf = q.unfrozen();
        let c = end.c_matrix();
        for &i in &unf {
            for &j in &unf {
                if c[i][j] != -i64::from(i == j) {
                    return Err(json!({ "word": word, "green": true, "dt": false, "vertex": q.id(i).to_string(), "c_vector": c[i] }));
                }
            }
        }
        if end.quiver() != &q {
            return Err(json!({ "word": word, "green": true, "dt": false, "diff": end.quiver().diff(&q) }));
        }
        Ok(json!({
            "word": word,
            "green": true,
            "maximal": green.maximal,
            "dt": true,
            "mutations": full.mutation_count(),
            "shifts": shift_ns(cd, arrows).map_err(engine_error)?,
            "envelope": "finite type at the given m",
        }))
    };
    run.finish(body())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::forms::wrap;

    fn cd(t: CartanType, n: usize) -> CartanData {
        CartanData::of(t, n).unwrap()
    }

    #[test]
    fn wrap_is_one_based() {
        assert_eq!(wrap(0, 3), 3);
        assert_eq!(wrap(4, 3), 1);
        assert_eq!(wrap(-1, 3), 2);
    }

    #[test]
    fn tilde_multiples() {
        assert_eq!(tilde_multiple(&cd(CartanType::A, 2), 6), Some(2));
        assert_eq!(tilde_multiple(&cd(CartanType::A, 2), 2), None);
        assert_eq!(tilde_multiple(&cd(CartanType::C, 3), 3), Some(1));
        assert_eq!(tilde_multiple(&cd(CartanType::G, 2), 3), None);
    }

    #[test]
    fn quiver_invariance_small() {
        let c = check_r_preserves_quiver(&cd(CartanType::A, 2), 3);
        assert!(c.passed(), "{}", c.to_json_string());
        assert!(c.witness["decorated"].is_object());
    }

    #[test]
    fn dropped_permutation_is_caught() {
        let q = build_qm(&cd(CartanType::A, 2), None, 2).unwrap();
        let mut r = seq_r(1, 1, 2).unwrap();
        r.sequence.steps.retain(|s| matches!(s, Step::Mutate(_)));
        let c = check_sequence_preserves(&q, &r);
        assert!(!c.passed());
        assert!(!c.witness["diff"].as_array().unwrap().is_empty());
    }

    #[test]
    fn closed_forms_a2() {
        for mode in [FormMode::A, FormMode::X, FormMode::Tropical] {
            let c = check_closed_forms(&cd(CartanType::A, 2), 3, mode);
            assert!(c.passed(), "{}", c.to_json_string());
        }
    }

    #[test]
    fn braid_a2_both_modes_agree() {
        let t = check_braid(&cd(CartanType::A, 2), 2, false);
        let s = check_braid(&cd(CartanType::A, 2), 2, true);
        assert!(t.passed() && s.passed(), "{}\n{}", t.to_json_string(), s.to_json_string());
    }

    #[test]
    fn peripheral_a2() {
        let c = check_peripheral_and_casimir(&cd(CartanType::A, 2), 2);
        assert!(c.passed(), "{}", c.to_json_string());
    }

    #[test]
    fn green_prefix_is_not_dt() {
        let a2 = cd(CartanType::A, 2);
        let c = check_green_and_dt(&a2, &[(2, 1)], 2, Some(&[1]));
        assert!(!c.passed());
        assert_eq!(c.witness["green"], json!(true));
        assert_eq!(c.witness["dt"], json!(false));
        let c = check_green_and_dt(&a2, &[(2, 1)], 2, Some(&[1, 1]));
        assert_eq!(c.witness["error"], json!("word is not reduced"));
    }
}
