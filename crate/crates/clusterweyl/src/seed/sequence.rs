use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::quiver::VertexId;

/// One step of a mutation sequence, in execution order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "mut")]
    Mutate(VertexId),
    /// Content at `a` moves to `b` for each pair; unlisted vertices are fixed.
    #[serde(rename = "perm", with = "perm_map")]
    Permute(Vec<(VertexId, VertexId)>),
}

mod perm_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &[(VertexId, VertexId)], s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = p.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        m.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(VertexId, VertexId)>, D::Error> {
        let m: BTreeMap<VertexId, VertexId> = BTreeMap::deserialize(d)?;
        Ok(m.into_iter().collect())
    }
}

impl Step {
    pub fn inverse(&self) -> Step {
        match self {
            Step::Mutate(v) => Step::Mutate(v.clone()),
            Step::Permute(p) => Step::Permute(p.iter().map(|(a, b)| (b.clone(), a.clone())).collect()),
        }
    }
}

/// Ordered steps, executed left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MutationSequence {
    pub steps: Vec<Step>,
}

impl MutationSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        MutationSequence { steps }
    }

    pub fn mutations(vs: impl IntoIterator<Item = VertexId>) -> Self {
        MutationSequence { steps: vs.into_iter().map(Step::Mutate).collect() }
    }

    pub fn mutate(mut self, v: VertexId) -> Self {
        self.steps.push(Step::Mutate(v));
        self
    }

    pub fn permute(mut self, p: Vec<(VertexId, VertexId)>) -> Self {
        self.steps.push(Step::Permute(p));
        self
    }

    /// Swap of two vertices.
    pub fn swap(self, a: VertexId, b: VertexId) -> Self {
        self.permute(vec![(a.clone(), b.clone()), (b, a)])
    }

    pub fn then(mut self, other: &MutationSequence) -> Self {
        self.steps.extend(other.steps.iter().cloned());
        self
    }

    pub fn inverse(&self) -> Self {
        MutationSequence { steps: self.steps.iter().rev().map(Step::inverse).collect() }
    }

    pub fn power(&self, k: usize) -> Self {
        let mut out = MutationSequence::new();
        for _ in 0..k {
            out = out.then(self);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn mutation_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Mutate(_))).count()
    }

    /// Mutation targets in order.
    pub fn targets(&self) -> Vec<&VertexId> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Mutate(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_format() {
        let seq = MutationSequence::new().mutate(VertexId::v(2, 1)).swap(VertexId::v(1, 1), VertexId::v(1, 2));
        let s = seq.to_json_string();
        assert_eq!(s, r#"[{"mut":"v:2:1"},{"perm":{"v:1:1":"v:1:2","v:1:2":"v:1:1"}}]"#);
        assert_eq!(MutationSequence::from_json_str(&s).unwrap(), seq);
    }

    #[test]
    fn inverse_reverses_and_inverts() {
        let p = vec![(VertexId::num(1), VertexId::num(2)), (VertexId::num(2), VertexId::num(3)), (VertexId::num(3), VertexId::num(1))];
        let seq = MutationSequence::new().mutate(VertexId::num(1)).permute(p);
        let inv = seq.inverse();
        assert_eq!(inv.steps[1], Step::Mutate(VertexId::num(1)));
        match &inv.steps[0] {
            Step::Permute(q) => assert!(q.contains(&(VertexId::num(2), VertexId::num(1)))),
            _ => panic!(),
        }
    }
}
