use thiserror::Error;

use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    Domain {
        x: Rational,
        lo: Rational,
        hi: Rational,
    },

    #[error("bad arguments: {0}")]
    BadArgs(String),

    #[error("substitution range [{g_lo}, {g_hi}] escapes the outer domain [{lo}, {hi}]")]
    DomainMismatch {
        g_lo: Rational,
        g_hi: Rational,
        lo: Rational,
        hi: Rational,
    },

    #[error("primitive is not exactly evaluable at {0}")]
    UndecidedEvaluation(Rational),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
