//! Exact arithmetic: Laurent polynomials, reduced rational functions and
//! semifields.

mod gcd;
pub mod laurent;
mod parse;
mod rational;
mod semifield;

pub use gcd::gcd;
pub use laurent::{gens, Gens, LaurentPoly};
pub use parse::{parse_laurent, parse_rational};
pub use rational::RationalFunction;
pub use semifield::{SemifieldElem, SemifieldKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("exact division failed: not divisible")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("semifield or generator mismatch")]
    SemifieldMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}
