//! Exact cluster-algebra engine for Weyl group actions by mutation
//! sequences on weighted quivers.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod constructions;
pub mod interface;
pub mod quiver;
pub mod seed;
pub mod roots;
pub mod verifier;
