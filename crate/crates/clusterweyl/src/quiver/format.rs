use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{QuiverError, VertexId, WeightedQuiver};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: VertexId,
    pub weight: u32,
    pub frozen: bool,
}

/// Interchange form: vertices in order, nonzero doubled entries by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<VertexJson>,
    pub eps2: Vec<(usize, usize, i64)>,
}

impl WeightedQuiver {
    pub fn to_json_struct(&self) -> QuiverJson {
        let vertices = (0..self.len())
            .map(|i| VertexJson { id: self.id(i).clone(), weight: self.weight(i), frozen: self.is_frozen(i) })
            .collect();
        let mut eps2 = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.eps2(i, j) != 0 {
                    eps2.push((i, j, self.eps2(i, j)));
                }
            }
        }
        QuiverJson { vertices, eps2 }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_struct()).expect("serializable")
    }

    /// Accepts full or one-sided entry lists; missing partners are filled
    /// in by skew-symmetrizability.
    pub fn from_json_struct(j: &QuiverJson) -> Result<Self, QuiverError> {
        let ids = j.vertices.iter().map(|v| v.id.clone()).collect();
        let frozen = j.vertices.iter().map(|v| v.frozen).collect();
        let d: Vec<u32> = j.vertices.iter().map(|v| v.weight).collect();
        let n = d.len();
        if d.contains(&0) {
            return Err(QuiverError::BadWeights);
        }
        let mut e = vec![vec![None::<i64>; n]; n];
        for &(a, b, x) in &j.eps2 {
            if a >= n || b >= n {
                return Err(QuiverError::Format(format!("entry ({a},{b}) out of range")));
            }
            if e[a][b].is_some_and(|y| y != x) {
                return Err(QuiverError::Format(format!("conflicting entry ({a},{b})")));
            }
            e[a][b] = Some(x);
        }
        let mut full = vec![vec![0i64; n]; n];
        for a in 0..n {
            for b in 0..n {
                full[a][b] = match (e[a][b], e[b][a]) {
                    (Some(x), _) => x,
                    (None, Some(y)) => {
                        let num = -y * d[a] as i64;
                        if num % d[b] as i64 != 0 {
                            return Err(QuiverError::Format(format!("cannot infer entry ({a},{b})")));
                        }
                        num / d[b] as i64
                    }
                    (None, None) => 0,
                };
            }
        }
        WeightedQuiver::new(ids, frozen, full, d)
    }

    pub fn from_json_str(s: &str) -> Result<Self, QuiverError> {
        let j: QuiverJson = serde_json::from_str(s).map_err(|e| QuiverError::Format(e.to_string()))?;
        Self::from_json_struct(&j)
    }

    /// Graphviz rendering: solid arrows for integral σ, dashed for half.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n");
        for i in 0..self.len() {
            let shape = if self.is_frozen(i) { "box" } else { "circle" };
            let _ = writeln!(out, "  \"{}\" [shape={}, label=\"{}\\nd={}\"];", self.id(i), shape, self.id(i), self.weight(i));
        }
        for (a, b, s2) in self.arrows2() {
            let style = if s2 % 2 == 0 { "solid" } else { "dashed" };
            let mult = if s2 % 2 == 0 { format!("{}", s2 / 2) } else { format!("{}/2", s2) };
            let label = if s2 == 2 || s2 == 1 { String::new() } else { format!(", label=\"{mult}\"") };
            let _ = writeln!(out, "  \"{a}\" -> \"{b}\" [style={style}{label}];");
        }
        out.push_str("}\n");
        out
    }
}
