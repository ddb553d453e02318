use thiserror::Error;

/// Errors raised while building or evaluating decision problems.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("state space must contain at least one state")]
    EmptySpace,

    #[error("duplicate state id `{0}`")]
    DuplicateState(String),

    #[error("unknown state id `{0}`")]
    UnknownState(String),

    #[error("objects are defined over different state spaces")]
    SpaceMismatch,

    #[error("invalid credence: {0}")]
    InvalidCredence(String),

    #[error("cannot condition on an event of probability zero ({0})")]
    ZeroProbability(String),

    #[error("not a partition: {0}")]
    Partition(String),

    #[error("invalid outcome space: {0}")]
    Outcomes(String),

    #[error("invalid action `{action}`: {reason}")]
    Action { action: String, reason: String },

    #[error("invalid choice set: {0}")]
    ChoiceSet(String),

    #[error("tie between best actions: {}", maximizers.join(", "))]
    Tie { maximizers: Vec<String> },

    #[error("invalid update policy at state `{state}`: {reason}")]
    Policy { state: String, reason: String },

    #[error(
        "certainty constraint P_E(ω)(E) = 1 violated at state `{state}`: posterior puts {outside} outside its cell"
    )]
    Certainty { state: String, outside: String },

    #[error("invalid deviation spec: {0}")]
    Deviation(String),

    #[error("disposition label collision: {0}")]
    LabelCollision(String),

    #[error("policy conditionalizes with probability one; no deviation exists")]
    NoDeviation,

    #[error(
        "evidential independence fails in cell {cell}: conditioning on `choose {action}` shifts the expected utility of `{witness}`"
    )]
    IndependenceBroken {
        cell: usize,
        action: String,
        witness: String,
    },

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("scenario configuration: {0}")]
    Config(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid rational `{value}`: {reason}")]
    Rational { value: String, reason: String },

    #[error("{context}: {message}")]
    Format { context: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
