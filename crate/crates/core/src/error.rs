use std::fmt;

use thiserror::Error;

use crate::ternary::SemanticsId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A syntax error in program text, with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("interpretations range over different universes ({0} vs {1} atoms)")]
    UniverseMismatch(usize, usize),

    #[error("universe has {0} atoms; at most {max} are supported", max = crate::MAX_UNIVERSE)]
    UniverseCapacity(usize),

    #[error("interpretation pair is inconsistent (lower bound is not a subset of the upper bound)")]
    InconsistentPair,

    #[error("semantics `{semantics}` does not support {what}")]
    Unsupported {
        semantics: SemanticsId,
        what: &'static str,
    },

    #[error("semantics `{0}` has no three-valued truth function")]
    NoTruthFunction(SemanticsId),

    #[error("semantics `{0}` does not induce a monotone lower operator; use the minimal-model check")]
    NonMonotone(SemanticsId),

    #[error("program contains aggregate atoms")]
    AggregatesPresent,

    #[error("arithmetic overflow while evaluating an aggregate")]
    ArithmeticOverflow,

    #[error("{what} has size {size}, above the exhaustive-enumeration limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("unknown semantics `{0}`")]
    UnknownSemantics(String),
}
