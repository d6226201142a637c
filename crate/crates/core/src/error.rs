use thiserror::Error;

use crate::dsl::ParseError;
use crate::polyring::IntPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("non-exact division: ({numerator}) / ({denominator}) leaves remainder {remainder}")]
    NonExactDivision {
        numerator: IntPoly,
        denominator: IntPoly,
        remainder: IntPoly,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("negative Betti number at step `{label}`: coefficient of q^{degree} is {value}")]
    NegativeBetti {
        label: String,
        degree: usize,
        value: String,
    },

    #[error("dimension mismatch at step `{label}`: center dim {center_dim} + codim {codim} != space dim {space_dim}")]
    DimensionMismatch {
        label: String,
        center_dim: usize,
        codim: usize,
        space_dim: usize,
    },

    #[error("{what} has degree {found}, expected {expected}")]
    DegreeMismatch {
        what: String,
        expected: usize,
        found: String,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("while evaluating {path}: {source}")]
    Eval { path: String, source: Box<Error> },
}

impl Error {
    /// Strips any `Eval` wrappers and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Eval { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for errors raised by the arithmetic itself (as opposed to bad input).
    pub fn is_arithmetic(&self) -> bool {
        matches!(
            self.root(),
            Error::NonExactDivision { .. }
                | Error::DivisionByZero
                | Error::NegativeBetti { .. }
                | Error::DimensionMismatch { .. }
                | Error::DegreeMismatch { .. }
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }
}
