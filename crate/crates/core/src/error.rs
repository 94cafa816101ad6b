use thiserror::Error;

use crate::automaton::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter {letter} is out of range for an alphabet of size {k}")]
    InvalidWord { letter: usize, k: usize },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("automaton is not strongly connected")]
    NotStronglyConnected,

    /// Carries an incompressible pair when one is known.
    #[error("automaton is not synchronizing{}", match .pair { Some((p, q)) => format!(" (pair {{{p}, {q}}} is incompressible)"), None => String::new() })]
    NotSynchronizing { pair: Option<(usize, usize)> },

    #[error("no extension word found: {0}")]
    CriterionViolated(String),

    #[error("word set is not primitive on the induced state set")]
    NotPrimitive,

    #[error("word set is not factor-closed: `{word}` present but factor `{missing}` absent")]
    NotFactorClosed { word: Word, missing: Word },

    #[error("automaton is not in the requested class: {0}")]
    ClassMismatch(String),

    #[error("invalid prefix code: {0}")]
    InvalidCode(String),

    #[error("premise does not hold: {0}")]
    Precondition(String),

    #[error("size cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: u128 },

    /// Distinct-sum enumeration aborted; `bound` is the trivial upper bound `2^n - 1`.
    #[error("distinct-sum set exceeded its cap; trivial bound is {bound}")]
    DsCapExceeded { bound: u128 },

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
