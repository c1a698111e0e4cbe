use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("every input form is zero")]
    AllZero,
    #[error("coordinate change is singular (determinant zero)")]
    SingularChange,
    #[error("degree bound violated: {0}")]
    DegreeViolation(String),
    #[error("marked divisor does not divide the intersection equation")]
    NotASubscheme,
    #[error("the line lies inside the variety (every restriction vanishes)")]
    LineInsideX,
    #[error("instance generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },
    #[error("colength did not stabilize: {low} at twist {twist}, {high} at twist {next}", next = twist + 1)]
    NotStabilized { twist: i64, low: i64, high: i64 },
    #[error("recovered splitting type is inconsistent: {0}")]
    InconsistentSequence(String),
    #[error("evaluation point lies on the marked subscheme")]
    PointOnZ,
    #[error("partition {proper} is not a degeneration of {postulated}")]
    NotReachable { proper: String, postulated: String },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
