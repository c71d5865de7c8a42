use std::collections::BTreeMap;

use super::{decorated_word_quiver, ConstructionError};
use crate::quiver::{VertexId, WeightedQuiver};
use crate::roots::{CartanData, CartanType, WordFlavor};

fn row_lengths(q: &WeightedQuiver, tag: &str) -> BTreeMap<usize, usize> {
    let mut r = BTreeMap::new();
    for v in q.ids() {
        if v.tag == tag {
            if let Some((s, i)) = v.row_col() {
                let e = r.entry(s).or_insert(0);
                *e = (*e).max(i);
            }
        }
    }
    r
}

fn swap_tag(t: &str) -> &str {
    match t {
        "v" => "u",
        "u" => "v",
        "y" => "y'",
        "y'" => "y",
        other => other,
    }
}

/// Mirror image: `v^s_i ↦ u^s_{R_s+1−i}`, `y_j ↦ y'_j`, all entries negated.
pub fn mirror(q: &WeightedQuiver) -> Result<WeightedQuiver, ConstructionError> {
    let rv = row_lengths(q, "v");
    let ru = row_lengths(q, "u");
    let ids: Vec<VertexId> = q
        .ids()
        .iter()
        .map(|v| match v.row_col() {
            Some((s, i)) => {
                let r = if v.tag == "v" { rv[&s] } else { ru[&s] };
                VertexId::new(swap_tag(&v.tag), &[s as i64, (r + 1 - i) as i64])
            }
            None => VertexId::new(swap_tag(&v.tag), &v.idx),
        })
        .collect();
    let e: Vec<Vec<i64>> = q.eps2_matrix().iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    Ok(WeightedQuiver::new(ids, q.frozen().to_vec(), e, q.weights().to_vec())?)
}

/// Amalgamates pieces along equal labels. Shared vertices must be frozen
/// in every piece; they are defrosted when all their entries are integral.
/// Each piece comes with the glued label of every vertex; a label may
/// repeat inside one piece.
pub(crate) fn glue_by_label(pieces: &[(WeightedQuiver, Vec<VertexId>)]) -> Result<WeightedQuiver, ConstructionError> {
    let mut index: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut ids = Vec::new();
    let mut d: Vec<u32> = Vec::new();
    let mut frozen: Vec<bool> = Vec::new();
    let mut count: Vec<usize> = Vec::new();
    for (q, labels) in pieces {
        for i in 0..q.len() {
            let v = &labels[i];
            match index.get(v) {
                Some(&k) => {
                    if !frozen[k] || !q.is_frozen(i) {
                        return Err(ConstructionError::Invalid(format!("glued vertex {v} is not frozen")));
                    }
                    if d[k] != q.weight(i) {
                        return Err(ConstructionError::Invalid(format!("weight mismatch at {v}")));
                    }
                    count[k] += 1;
                }
                None => {
                    index.insert(v.clone(), ids.len());
                    ids.push(v.clone());
                    d.push(q.weight(i));
                    frozen.push(q.is_frozen(i));
                    count.push(1);
                }
            }
        }
    }
    let n = ids.len();
    let mut e = vec![vec![0i64; n]; n];
    for (q, labels) in pieces {
        let pos: Vec<usize> = labels.iter().map(|v| index[v]).collect();
        for i in 0..q.len() {
            for j in 0..q.len() {
                e[pos[i]][pos[j]] += q.eps2(i, j);
            }
        }
    }
    for k in 0..n {
        if count[k] >= 2 && (0..n).all(|j| e[k][j] % 2 == 0 && e[j][k] % 2 == 0) {
            frozen[k] = false;
        }
    }
    Ok(WeightedQuiver::new(ids, frozen, e, d)?)
}

fn relabel(q: &WeightedQuiver, f: impl Fn(&VertexId) -> VertexId) -> Result<(WeightedQuiver, Vec<VertexId>), ConstructionError> {
    Ok((q.clone(), q.ids().iter().map(f).collect()))
}

fn keep(q: WeightedQuiver) -> (WeightedQuiver, Vec<VertexId>) {
    let ids = q.ids().to_vec();
    (q, ids)
}

fn copy_label(v: &VertexId, copy: usize) -> VertexId {
    let mut idx = vec![copy as i64];
    idx.extend(&v.idx);
    VertexId::new(&v.tag, &idx)
}

/// `Q̃_{kh}(A_n)` or `Q̃_{kh/2}(g)`: copies of the decorated word quivers
/// glued along their row ends. Row vertices get their `Q_m` labels and the
/// decoration of copy `ℓ` is named `y:ℓ:j` (`y':ℓ:j`).
pub fn build_tilde_q(cd: &CartanData, k: usize) -> Result<WeightedQuiver, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::Invalid("k must be positive".into()));
    }
    let n = cd.rank();
    let h = cd.coxeter_number().ok_or_else(|| ConstructionError::Unsupported(cd.kind.to_string()))?;
    let mut pieces = Vec::new();
    match cd.kind {
        CartanType::A => {
            let m = k * h;
            let jq = decorated_word_quiver(cd, WordFlavor::IQ)?;
            let jstar = decorated_word_quiver(cd, WordFlavor::IQStar)?;
            for l in 0..k {
                let place = |s: usize, i: usize| VertexId::v(s, (l * h + i - 1) % m + 1);
                pieces.push(relabel(&jq, |v| match v.row_col() {
                    Some((s, i)) => place(s, i),
                    None => copy_label(v, l + 1),
                })?);
                pieces.push(relabel(&jstar, |v| match v.row_col() {
                    Some((s, j)) => place(s, n + 1 - s + j),
                    None => copy_label(v, l + 1),
                })?);
            }
        }
        CartanType::B | CartanType::C | CartanType::D => {
            let len = h / 2;
            let m = k * len;
            let jq = decorated_word_quiver(cd, WordFlavor::IQ)?;
            for l in 0..k {
                pieces.push(relabel(&jq, |v| match v.row_col() {
                    Some((s, i)) => VertexId::v(s, (l * len + i - 1) % m + 1),
                    None => copy_label(v, l + 1),
                })?);
            }
        }
        _ => return Err(ConstructionError::Unsupported(format!("{}{n}", cd.kind))),
    }
    glue_by_label(&pieces)
}

fn last_in_row(q: &WeightedQuiver, tag: &str) -> BTreeMap<usize, usize> {
    row_lengths(q, tag)
}

/// `D(g)`: `J̃(i_D)` glued to its mirror along `v^s_R ↔ u^s_1` and
/// `y_s ↔ y'_s`.
pub fn build_d(cd: &CartanData) -> Result<WeightedQuiver, ConstructionError> {
    let left = decorated_word_quiver(cd, WordFlavor::ID)?;
    let right = mirror(&left)?;
    let r = last_in_row(&left, "v");
    let right = relabel(&right, |v| match v.row_col() {
        Some((s, 1)) if v.tag == "u" => VertexId::v(s, r[&s]),
        _ if v.tag == "y'" => VertexId::new("y", &v.idx),
        _ => v.clone(),
    })?;
    glue_by_label(&[keep(left), right])
}

/// Variant of `D(A_n)` glued along `v^s_R ↔ u^s_1` and `v^s_1 ↔ u^s_R`
/// with all decorations kept apart; it carries the cycles `ρ_s`.
pub fn build_d_cycle(cd: &CartanData) -> Result<WeightedQuiver, ConstructionError> {
    if cd.kind != CartanType::A {
        return Err(ConstructionError::Unsupported(format!("cycle form of D for {}", cd.kind)));
    }
    let left = decorated_word_quiver(cd, WordFlavor::ID)?;
    let right = mirror(&left)?;
    let r = last_in_row(&left, "v");
    let right = relabel(&right, |v| match v.row_col() {
        Some((s, 1)) if v.tag == "u" => VertexId::v(s, r[&s]),
        Some((s, i)) if v.tag == "u" && i == r[&s] => VertexId::v(s, 1),
        _ => v.clone(),
    })?;
    glue_by_label(&[keep(left), right])
}

/// The cycle `ρ_s` of [`build_d_cycle`] for `A_n`.
pub fn d_cycle(n: usize, s: usize) -> Vec<VertexId> {
    let r = n + 2 - s;
    let mut out: Vec<VertexId> = (1..=r).map(|i| VertexId::v(s, i)).collect();
    out.extend((2..r).map(|i| VertexId::u(s, i)));
    out
}

/// `D(g)^p`: copy `ℓ` glued to copy `ℓ+1` along `u^s_R ↔ v^s_1`. Labels of
/// copy `ℓ` carry `ℓ` as their first index.
pub fn build_d_power(cd: &CartanData, p: usize) -> Result<WeightedQuiver, ConstructionError> {
    if p == 0 {
        return Err(ConstructionError::Invalid("p must be positive".into()));
    }
    let one = build_d(cd)?;
    let ru = last_in_row(&one, "u");
    let mut pieces = Vec::new();
    for l in 1..=p {
        pieces.push(relabel(&one, |v| match v.row_col() {
            Some((s, 1)) if v.tag == "v" && l > 1 => copy_label(&VertexId::u(s, ru[&s]), l - 1),
            _ => copy_label(v, l),
        })?);
    }
    glue_by_label(&pieces)
}
