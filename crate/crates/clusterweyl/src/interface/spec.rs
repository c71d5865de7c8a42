//! Construction and sequence requests shared by the CLI and the service.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::constructions::{
    build_d, build_d_cycle, build_d_power, build_qm, build_tilde_q, coxeter_quiver, decorated_word_quiver, seq_cycle_r, seq_m_dtoq_cn_block, seq_r,
    seq_r_word, seq_rd, seq_t, sigma_q, word_quiver, ConstructionError, NamedSequence,
};
use crate::quiver::{QuiverError, QuiverJson, VertexId, WeightedQuiver};
use crate::roots::{adapted_words, parse_word, CartanData, CartanType, RootError, WordFlavor};
use crate::seed::MutationSequence;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

fn invalid(msg: impl Into<String>) -> SpecError {
    SpecError::Invalid(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildKind {
    Coxeter,
    Qm,
    Word,
    Tilde,
    D,
}

/// Parameters of a named quiver. Unused fields are ignored by each kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildSpec {
    pub kind: BuildKind,
    #[serde(rename = "type")]
    pub cartan: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Arrows `s → t` of the Coxeter quiver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    /// `iQ`, `iQ*`, `iD` or `iDbar`: the tabulated decorated word.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<String>,
    /// Number of copies for `d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<usize>,
    /// Cycle form of `D(A_n)`.
    #[serde(default)]
    pub cycle: bool,
}

impl BuildSpec {
    pub fn new(kind: BuildKind, cartan: &str, n: usize) -> Self {
        BuildSpec { kind, cartan: cartan.into(), n, m: None, k: None, orientation: None, word: None, flavor: None, power: None, cycle: false }
    }

    pub fn cartan_data(&self) -> Result<CartanData, SpecError> {
        let t: CartanType = self.cartan.parse()?;
        Ok(CartanData::of(t, self.n)?)
    }

    pub fn build(&self) -> Result<WeightedQuiver, SpecError> {
        let cd = self.cartan_data()?;
        let orient = self.orientation.as_deref();
        Ok(match self.kind {
            BuildKind::Coxeter => coxeter_quiver(&cd, orient)?,
            BuildKind::Qm => {
                let m = self.m.ok_or_else(|| invalid("qm needs m"))?;
                if m < 2 {
                    return Err(invalid(format!("m must be at least 2, got {m}")));
                }
                build_qm(&cd, orient, m)?
            }
            BuildKind::Word => match (&self.word, &self.flavor) {
                (Some(w), None) => word_quiver(&cd, &parse_word(w)?)?,
                (None, Some(f)) => decorated_word_quiver(&cd, f.parse::<WordFlavor>()?)?,
                _ => return Err(invalid("word needs exactly one of word or flavor")),
            },
            BuildKind::Tilde => build_tilde_q(&cd, self.k.ok_or_else(|| invalid("tilde needs k"))?)?,
            BuildKind::D => match (self.power, self.cycle) {
                (Some(p), false) => build_d_power(&cd, p)?,
                (None, true) => build_d_cycle(&cd)?,
                (None, false) => build_d(&cd)?,
                (Some(_), true) => return Err(invalid("cycle form has no powers")),
            },
        })
    }
}

/// Where a session's quiver comes from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuiverSource {
    Build { build: BuildSpec },
    Raw { quiver: QuiverJson },
}

impl QuiverSource {
    pub fn quiver(&self) -> Result<WeightedQuiver, SpecError> {
        match self {
            QuiverSource::Build { build } => build.build(),
            QuiverSource::Raw { quiver } => Ok(WeightedQuiver::from_json_struct(quiver)?),
        }
    }

    pub fn build_spec(&self) -> Option<&BuildSpec> {
        match self {
            QuiverSource::Build { build } => Some(build),
            QuiverSource::Raw { .. } => None,
        }
    }
}

fn get_usize(params: &Value, key: &str, fallback: Option<usize>) -> Result<usize, SpecError> {
    match params.get(key) {
        Some(v) => v.as_u64().map(|x| x as usize).ok_or_else(|| invalid(format!("parameter {key} must be a nonnegative integer"))),
        None => fallback.ok_or_else(|| invalid(format!("missing parameter {key}"))),
    }
}

fn get_word(params: &Value, key: &str) -> Result<Vec<usize>, SpecError> {
    match params.get(key) {
        Some(Value::String(s)) => Ok(parse_word(s)?),
        Some(Value::Array(a)) => a.iter().map(|x| x.as_u64().map(|v| v as usize).ok_or_else(|| invalid("word letters must be integers"))).collect(),
        _ => Err(invalid(format!("missing parameter {key}"))),
    }
}

fn get_orientation(params: &Value, cd: &CartanData) -> Result<Vec<(usize, usize)>, SpecError> {
    match params.get("orientation") {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| invalid(format!("orientation: {e}"))),
        None => Ok(cd.default_orientation()),
    }
}

fn get_vertices(params: &Value, key: &str) -> Result<Vec<VertexId>, SpecError> {
    serde_json::from_value(params.get(key).cloned().ok_or_else(|| invalid(format!("missing parameter {key}")))?).map_err(|e| invalid(format!("{key}: {e}")))
}

fn cartan_of(params: &Value, ctx: Option<&BuildSpec>) -> Result<CartanData, SpecError> {
    let t = params.get("type").and_then(Value::as_str).map(str::to_string).or_else(|| ctx.map(|c| c.cartan.clone()));
    let n = get_usize(params, "n", ctx.map(|c| c.n))?;
    let t: CartanType = t.ok_or_else(|| invalid("missing parameter type"))?.parse()?;
    Ok(CartanData::of(t, n)?)
}

/// Resolves a sequence by name. Missing `m`, `n` and `type` default to the
/// session's construction parameters when known.
///
/// Names: `R {s,i,m}`, `Rword {word,i,m}`, `R_D {s,i,n}`, `cycleR {cycle,start}`,
/// `T {k}`, `M_DtoQ_block {n}`, `sigma_Q {type,n,m,orientation}`,
/// `DT {type,n,m,orientation,word}`, `mutations {vertices}`, `steps {steps}`.
pub fn named_sequence(name: &str, params: &Value, ctx: Option<&BuildSpec>) -> Result<NamedSequence, SpecError> {
    let m_ctx = ctx.and_then(|c| c.m);
    let n_ctx = ctx.map(|c| c.n);
    Ok(match name {
        "R" => seq_r(get_usize(params, "s", None)?, get_usize(params, "i", Some(1))?, get_usize(params, "m", m_ctx)?)?,
        "Rword" => seq_r_word(&get_word(params, "word")?, get_usize(params, "i", Some(1))?, get_usize(params, "m", m_ctx)?)?,
        "R_D" => seq_rd(get_usize(params, "s", None)?, get_usize(params, "i", Some(1))?, get_usize(params, "n", n_ctx)?)?,
        "cycleR" => seq_cycle_r(&get_vertices(params, "cycle")?, get_usize(params, "start", Some(1))?)?,
        "T" => seq_t(get_usize(params, "k", None)?),
        "M_DtoQ_block" => seq_m_dtoq_cn_block(get_usize(params, "n", n_ctx)?),
        "sigma_Q" => {
            let cd = cartan_of(params, ctx)?;
            sigma_q(&cd, &get_orientation(params, &cd)?, get_usize(params, "m", m_ctx)?)?
        }
        "DT" => {
            let cd = cartan_of(params, ctx)?;
            let arrows = get_orientation(params, &cd)?;
            let m = get_usize(params, "m", m_ctx)?;
            let word = match params.get("word") {
                Some(_) => get_word(params, "word")?,
                None => adapted_words(&cd, &arrows, 1).into_iter().next().ok_or_else(|| invalid("no adapted word"))?,
            };
            let seq = seq_r_word(&word, 1, m)?.sequence.then(&sigma_q(&cd, &arrows, m)?.sequence);
            NamedSequence { tag: "DT".into(), params: json!({ "type": cd.kind.to_string(), "n": cd.rank(), "m": m, "word": word }), sequence: seq }
        }
        "mutations" => NamedSequence {
            tag: "mutations".into(),
            params: params.clone(),
            sequence: MutationSequence::mutations(get_vertices(params, "vertices")?),
        },
        "steps" => NamedSequence {
            tag: "steps".into(),
            params: params.clone(),
            sequence: serde_json::from_value(params.get("steps").cloned().ok_or_else(|| invalid("missing parameter steps"))?)
                .map_err(|e| invalid(format!("steps: {e}")))?,
        },
        _ => return Err(invalid(format!("unknown sequence {name}"))),
    })
}

/// Drawing position of a vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutHint {
    pub vertex: VertexId,
    pub x: f64,
    pub y: f64,
    /// `grid` for row vertices, `boundary` for decorations, `free` otherwise.
    pub role: String,
}

/// Row vertices `v^s_i` on a grid (column `i`, row `s`), mirrored `u`
/// vertices to the right, copies side by side, decorations on the boundary
/// between their neighbours, anything else on a circle.
pub fn layout(q: &WeightedQuiver) -> Vec<LayoutHint> {
    let split = |v: &VertexId| -> Option<(i64, i64, i64)> {
        match v.idx.len() {
            2 => Some((0, v.idx[0], v.idx[1])),
            3 => Some((v.idx[0] - 1, v.idx[1], v.idx[2])),
            _ => None,
        }
    };
    let mut row_end = std::collections::BTreeMap::new();
    for v in q.ids().iter().filter(|v| v.tag == "v") {
        if let Some((c, s, i)) = split(v) {
            let e = row_end.entry((c, s)).or_insert(i);
            *e = (*e).max(i);
        }
    }
    let grid = |v: &VertexId| -> Option<(usize, f64, f64)> {
        let (copy, s, i) = split(v)?;
        match v.tag.as_str() {
            "v" => Some((copy as usize, i as f64, s as f64)),
            "u" => Some((copy as usize, (row_end.get(&(copy, s)).copied().unwrap_or(1) + i - 1) as f64, s as f64)),
            _ => None,
        }
    };
    let width = q.ids().iter().filter_map(|v| grid(v).map(|g| g.1)).fold(0.0f64, f64::max) + 1.0;
    let mut pos: Vec<Option<(f64, f64, &str)>> = q.ids().iter().map(|v| grid(v).map(|(c, x, y)| (c as f64 * width + x, y, "grid"))).collect();
    for i in 0..q.len() {
        if pos[i].is_some() || !q.id(i).tag.starts_with('y') {
            continue;
        }
        let nb: Vec<(f64, f64)> = (0..q.len()).filter(|&j| q.eps2(i, j) != 0).filter_map(|j| pos[j].map(|p| (p.0, p.1))).collect();
        if !nb.is_empty() {
            let x = nb.iter().map(|p| p.0).sum::<f64>() / nb.len() as f64;
            let y = nb.iter().map(|p| p.1).fold(f64::INFINITY, f64::min) - 0.5;
            pos[i] = Some((x, y, "boundary"));
        }
    }
    let free: Vec<usize> = (0..q.len()).filter(|&i| pos[i].is_none()).collect();
    for (k, &i) in free.iter().enumerate() {
        let a = std::f64::consts::TAU * k as f64 / free.len() as f64;
        pos[i] = Some((a.cos(), a.sin(), "free"));
    }
    q.ids()
        .iter()
        .zip(pos)
        .map(|(v, p)| {
            let (x, y, role) = p.expect("every vertex placed");
            LayoutHint { vertex: v.clone(), x: (x * 1000.0).round() / 1000.0, y: (y * 1000.0).round() / 1000.0, role: role.into() }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qm_spec_rejects_small_m() {
        let mut s = BuildSpec::new(BuildKind::Qm, "C", 3);
        s.m = Some(1);
        assert!(matches!(s.build(), Err(SpecError::Invalid(_))));
        s.m = Some(4);
        assert_eq!(s.build().unwrap().len(), 12);
    }

    #[test]
    fn spec_round_trips_through_json() {
        let j = json!({ "kind": "word", "type": "A", "n": 3, "flavor": "iQ" });
        let s: BuildSpec = serde_json::from_value(j).unwrap();
        assert_eq!(s.build().unwrap().len(), 12);
        let src: QuiverSource = serde_json::from_value(json!({ "build": s })).unwrap();
        assert!(src.build_spec().is_some());
    }

    #[test]
    fn named_sequences_use_context() {
        let mut ctx = BuildSpec::new(BuildKind::Qm, "C", 3);
        ctx.m = Some(3);
        let r = named_sequence("R", &json!({ "s": 1 }), Some(&ctx)).unwrap();
        assert_eq!(r.sequence, seq_r(1, 1, 3).unwrap().sequence);
        assert!(named_sequence("R", &json!({ "s": 1 }), None).is_err());
        assert!(named_sequence("nope", &json!({}), None).is_err());
        let dt = named_sequence("DT", &json!({}), Some(&ctx)).unwrap();
        assert_eq!(dt.sequence.mutation_count(), 36);
    }

    #[test]
    fn layout_places_rows_on_a_grid() {
        let mut s = BuildSpec::new(BuildKind::Qm, "C", 3);
        s.m = Some(4);
        let l = layout(&s.build().unwrap());
        let v = l.iter().find(|h| h.vertex == VertexId::v(2, 3)).unwrap();
        assert_eq!((v.x, v.y, v.role.as_str()), (3.0, 2.0, "grid"));
        let q = BuildSpec { kind: BuildKind::Word, flavor: Some("iQ".into()), ..BuildSpec::new(BuildKind::Word, "A", 3) }.build().unwrap();
        assert!(layout(&q).iter().any(|h| h.role == "boundary"));
    }
}
