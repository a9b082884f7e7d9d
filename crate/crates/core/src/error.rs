use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("ill-formed formula: {0}")]
    IllFormed(String),
    #[error("sort violation: {0}")]
    SortViolation(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("expected a sentence, found free variables {0:?}")]
    NotASentence(Vec<String>),
    #[error("resource limit exceeded: more than {limit} {what}")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("empty cut")]
    EmptyCut,
    #[error("cut is not bounded above")]
    UnboundedCut,
    #[error("set is not downward closed")]
    NotDownwardClosed,
    #[error("set has a maximum, so it is not an open cut")]
    HasMaximum,
    #[error("epsilon must be positive")]
    InvalidEpsilon,
    #[error("dimension {n} exceeds the limit {max}")]
    DimensionLimit { n: usize, max: usize },
    #[error("point is not in the base of the cell")]
    NotInBase,
    #[error("set is not open")]
    NotOpen,
    #[error("internal consistency check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Errors a caller caused by asking something ill-posed of a
    /// well-formed input, as opposed to syntax or resource problems.
    pub fn is_semantic(&self) -> bool {
        !matches!(
            self,
            Error::Syntax { .. } | Error::IllFormed(_) | Error::ResourceLimit { .. }
        )
    }
}
