//! Crate-wide error type. Every fallible operation returns `Result<T, Error>`.

use crate::game::Side;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("state {state} is out of range (game has {count} states)")]
    BadState { state: usize, count: usize },

    #[error("action {action} is invalid for {side} at state {state} ({count} available)")]
    BadAction {
        side: Side,
        state: usize,
        action: usize,
        count: usize,
    },

    #[error("payoff {value} at state {state} is outside [0, 1]")]
    PayoffOutOfRange { state: usize, value: f64 },

    #[error("expected a {expected} schedule, got {got}")]
    WrongSide { expected: Side, got: Side },

    #[error("schedules are on the same side ({0}); simulation needs one per side")]
    SidesCoincide(Side),

    #[error("schedules mix sides ({0} vs {1})")]
    MixedSides(Side, Side),

    #[error("switch schedule is invalid: {0}")]
    BadSchedule(String),

    #[error("embedding offset {0} is outside [0, 1)")]
    BadOffset(f64),

    #[error("trajectory holds {have} states but the evaluation needs {need}")]
    TrajectoryTooShort { have: usize, need: usize },

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("parameter chain violated: {0}")]
    ChainViolated(String),

    #[error("value family does not cover {0}; tabulate it first")]
    MissingTable(String),

    #[error("value tables are incomparable: {0}")]
    TableMismatch(String),

    #[error("parameter grid too small: {0}")]
    GridTooSmall(String),

    #[error("instance file, line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown instance {name:?}; catalog: {catalog}")]
    UnknownInstance { name: String, catalog: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
