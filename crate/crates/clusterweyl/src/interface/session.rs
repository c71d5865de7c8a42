use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::spec::{layout, named_sequence, BuildSpec, LayoutHint, QuiverSource, SpecError};
use crate::quiver::{QuiverError, QuiverJson, VertexId, WeightedQuiver};
use crate::seed::{tropical_sign, MutationSequence, Seed, SeedError, Sign, Tracking};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("mutation at frozen vertex {0}")]
    Frozen(VertexId),
    #[error("nothing to {0}")]
    EmptyHistory(&'static str),
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Seed(SeedError),
}

impl From<SeedError> for SessionError {
    fn from(e: SeedError) -> Self {
        match e {
            SeedError::Quiver(QuiverError::FrozenVertex(v)) => SessionError::Frozen(v),
            SeedError::Quiver(q) => SessionError::Spec(SpecError::Quiver(q)),
            e => SessionError::Seed(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tracks {
    #[serde(default = "yes")]
    pub a: bool,
    #[serde(default)]
    pub x: bool,
}

fn yes() -> bool {
    true
}

impl Default for Tracks {
    fn default() -> Self {
        Tracks { a: true, x: false }
    }
}

/// Body of a session creation request: exactly one of `build` or `quiver`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CreateRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub build: Option<BuildSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<QuiverJson>,
    #[serde(default)]
    pub track: Tracks,
}

impl CreateRequest {
    pub fn source(&self) -> Result<QuiverSource, SpecError> {
        match (&self.build, &self.quiver) {
            (Some(b), None) => Ok(QuiverSource::Build { build: b.clone() }),
            (None, Some(q)) => Ok(QuiverSource::Raw { quiver: q.clone() }),
            _ => Err(SpecError::Invalid("give exactly one of build or quiver".into())),
        }
    }
}

/// A user action and the steps it expanded to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum Action {
    Mutate { vertex: VertexId },
    Sequence { name: String, #[serde(default)] params: Value },
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    #[serde(flatten)]
    pub action: Action,
    pub steps: MutationSequence,
}

/// One line of the on-disk journal.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum JournalEvent {
    Create { id: String, request: CreateRequest },
    Apply { action: Action },
    Undo,
    Redo,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignEntry {
    pub vertex: VertexId,
    pub sign: String,
    pub frozen: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuiverView {
    pub quiver: QuiverJson,
    pub signs: Vec<SignEntry>,
    pub layout: Vec<LayoutHint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateView {
    pub id: String,
    #[serde(flatten)]
    pub view: QuiverView,
    pub history: usize,
    pub redo: usize,
}

pub fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "+",
        Sign::Negative => "-",
        Sign::Mixed => "mixed",
    }
}

pub fn quiver_view(seed: &Seed) -> QuiverView {
    let q = seed.quiver();
    let signs = q
        .ids()
        .iter()
        .enumerate()
        .map(|(i, v)| SignEntry { vertex: v.clone(), sign: sign_str(tropical_sign(&seed.c_matrix()[i])).into(), frozen: q.is_frozen(i) })
        .collect();
    QuiverView { quiver: q.to_json_struct(), signs, layout: layout(q) }
}

/// Interactive state: snapshots after every entry, so undo is a pop.
pub struct Session {
    pub id: String,
    pub request: CreateRequest,
    initial: Seed,
    states: Vec<Seed>,
    entries: Vec<Entry>,
    redo: Vec<Entry>,
}

impl Session {
    pub fn new(id: String, request: CreateRequest) -> Result<Self, SessionError> {
        let q = request.source()?.quiver()?;
        let tracking = Tracking { a: request.track.a, x: request.track.x, ..Default::default() };
        let initial = Seed::new(&q, tracking);
        Ok(Session { id, request, states: vec![initial.clone()], initial, entries: vec![], redo: vec![] })
    }

    pub fn current(&self) -> &Seed {
        self.states.last().expect("initial state")
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn redo_len(&self) -> usize {
        self.redo.len()
    }

    fn context(&self) -> Option<&BuildSpec> {
        self.request.build.as_ref()
    }

    pub fn expand(&self, action: &Action) -> Result<MutationSequence, SessionError> {
        match action {
            Action::Mutate { vertex } => Ok(MutationSequence::new().mutate(vertex.clone())),
            Action::Sequence { name, params } => Ok(named_sequence(name, params, self.context())?.sequence),
        }
    }

    fn push(&mut self, entry: Entry) -> Result<(), SessionError> {
        let next = self.current().apply(&entry.steps)?;
        self.states.push(next);
        self.entries.push(entry);
        Ok(())
    }

    /// Applies a new action; the redo stack is cleared on success.
    pub fn apply(&mut self, action: Action) -> Result<(), SessionError> {
        let steps = self.expand(&action)?;
        self.push(Entry { action, steps })?;
        self.redo.clear();
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), SessionError> {
        let e = self.entries.pop().ok_or(SessionError::EmptyHistory("undo"))?;
        self.states.pop();
        self.redo.push(e);
        Ok(())
    }

    pub fn redo(&mut self) -> Result<(), SessionError> {
        let e = self.redo.pop().ok_or(SessionError::EmptyHistory("redo"))?;
        self.push(e)
    }

    pub fn all_steps(&self) -> MutationSequence {
        let mut s = MutationSequence::new();
        for e in &self.entries {
            s = s.then(&e.steps);
        }
        s
    }

    /// Current seed rebuilt from the initial seed and the recorded steps.
    pub fn replay(&self) -> Result<Seed, SessionError> {
        Ok(self.initial.apply(&self.all_steps())?)
    }

    pub fn state(&self) -> StateView {
        StateView { id: self.id.clone(), view: quiver_view(self.current()), history: self.entries.len(), redo: self.redo.len() }
    }

    pub fn quiver(&self) -> &WeightedQuiver {
        self.current().quiver()
    }

    /// `A`, `X` or `coeff` at a vertex; untracked families are computed by
    /// replaying the history with that family switched on.
    pub fn variable(&self, v: &VertexId, kind: &str) -> Result<Value, SessionError> {
        let cur = self.current();
        cur.quiver().idx(v).map_err(|e| SessionError::Spec(SpecError::Quiver(e)))?;
        let with = |t: Tracking| -> Result<Seed, SessionError> { Ok(Seed::new(self.initial.initial_quiver(), t).apply(&self.all_steps())?) };
        let expr = match kind {
            "A" => match cur.a(v) {
                Ok(a) => a.to_canonical(),
                Err(_) => with(Tracking { a: true, ..Default::default() })?.a(v)?.to_canonical(),
            },
            "X" => match cur.x(v) {
                Ok(x) => x.to_canonical(),
                Err(_) => with(Tracking { x: true, ..Default::default() })?.x(v)?.to_canonical(),
            },
            "coeff" => {
                let c = cur.c_vector(v)?;
                let names = self.initial.initial_quiver().ids();
                let mono: Vec<String> = c
                    .iter()
                    .zip(names)
                    .filter(|(e, _)| **e != 0)
                    .map(|(e, w)| if *e == 1 { format!("y[{w}]") } else { format!("y[{w}]^{e}") })
                    .collect();
                let expr = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
                return Ok(json!({ "vertex": v, "kind": kind, "expression": expr, "c_vector": c, "sign": sign_str(tropical_sign(c)) }));
            }
            _ => return Err(SessionError::Spec(SpecError::Invalid(format!("unknown variable kind {kind}")))),
        };
        Ok(json!({ "vertex": v, "kind": kind, "expression": expr }))
    }

    /// Rebuilds a session from its journal lines.
    pub fn from_journal(events: &[JournalEvent]) -> Result<Self, SessionError> {
        let mut it = events.iter();
        let Some(JournalEvent::Create { id, request }) = it.next() else {
            return Err(SessionError::Spec(SpecError::Invalid("journal must start with create".into())));
        };
        let mut s = Session::new(id.clone(), request.clone())?;
        for ev in it {
            match ev {
                JournalEvent::Create { .. } => return Err(SessionError::Spec(SpecError::Invalid("repeated create".into()))),
                JournalEvent::Apply { action } => s.apply(action.clone())?,
                JournalEvent::Undo => s.undo()?,
                JournalEvent::Redo => s.redo()?,
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interface::spec::BuildKind;

    fn q4c3() -> Session {
        let mut b = BuildSpec::new(BuildKind::Qm, "C", 3);
        b.m = Some(4);
        Session::new("s".into(), CreateRequest { build: Some(b), quiver: None, track: Tracks::default() }).unwrap()
    }

    #[test]
    fn mutate_undo_redo() {
        let mut s = q4c3();
        let q0 = s.quiver().clone();
        s.apply(Action::Mutate { vertex: VertexId::v(2, 2) }).unwrap();
        assert_ne!(s.quiver(), &q0);
        let sign = s.state().view.signs.iter().find(|e| e.vertex == VertexId::v(2, 2)).unwrap().sign.clone();
        assert_eq!(sign, "-");
        s.undo().unwrap();
        assert_eq!(s.quiver(), &q0);
        s.redo().unwrap();
        assert_eq!(s.entries().len(), 1);
        assert!(matches!(s.redo(), Err(SessionError::EmptyHistory("redo"))));
    }

    #[test]
    fn r_keeps_the_quiver_and_rescales_row_one() {
        let mut s = q4c3();
        let q0 = s.quiver().clone();
        s.apply(Action::Sequence { name: "R".into(), params: json!({ "s": 1, "i": 1 }) }).unwrap();
        assert_eq!(s.quiver(), &q0);
        let a = s.variable(&VertexId::v(1, 1), "A").unwrap();
        assert!(a["expression"].as_str().unwrap().contains("^-1"));
        let a2 = s.variable(&VertexId::v(2, 1), "A").unwrap();
        assert_eq!(a2["expression"], json!("A[v:2:1]"));
        let x = s.variable(&VertexId::v(3, 1), "X").unwrap();
        assert_eq!(x["expression"], json!("X[v:3:1]"));
    }

    #[test]
    fn frozen_and_unknown_vertices() {
        let req: CreateRequest = serde_json::from_value(json!({ "build": { "kind": "word", "type": "A", "n": 2, "word": "121" } })).unwrap();
        let mut s = Session::new("w".into(), req).unwrap();
        assert!(matches!(s.apply(Action::Mutate { vertex: VertexId::v(1, 1) }), Err(SessionError::Frozen(_))));
        assert!(matches!(s.apply(Action::Mutate { vertex: VertexId::v(9, 9) }), Err(SessionError::Spec(_))));
        assert!(s.entries().is_empty());
    }

    #[test]
    fn journal_replay() {
        let mut s = q4c3();
        let mut log = vec![JournalEvent::Create { id: s.id.clone(), request: s.request.clone() }];
        for a in [Action::Mutate { vertex: VertexId::v(1, 2) }, Action::Sequence { name: "R".into(), params: json!({ "s": 2 }) }] {
            s.apply(a.clone()).unwrap();
            log.push(JournalEvent::Apply { action: a });
        }
        s.undo().unwrap();
        log.push(JournalEvent::Undo);
        let text: Vec<String> = log.iter().map(|e| serde_json::to_string(e).unwrap()).collect();
        let back: Vec<JournalEvent> = text.iter().map(|l| serde_json::from_str(l).unwrap()).collect();
        let r = Session::from_journal(&back).unwrap();
        assert_eq!(r.quiver(), s.quiver());
        assert_eq!(r.current().dump(), s.current().dump());
        assert_eq!(r.redo_len(), 1);
    }
}
