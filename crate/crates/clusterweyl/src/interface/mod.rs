//! Command line and JSON service.

pub mod cli;
pub mod service;
pub mod session;
pub mod spec;

pub use session::{Action, CreateRequest, Session, SessionError, StateView, Tracks};
pub use spec::{layout, named_sequence, BuildKind, BuildSpec, LayoutHint, QuiverSource, SpecError};
