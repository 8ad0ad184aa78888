//! The IPRO main loop: bound-set maintenance, referent selection, stopping,
//! the two-objective specialisation and replay after oracle faults.

mod replay;
mod run;
mod run2d;
mod select;
mod state;
mod update;

pub use replay::replay_correction;
pub use run::{run, step, Budget, FrontResult, RunOptions, Termination};
pub use run2d::run_2d;
pub use select::{hv_improvement, select_referent, SelectionStrategy, Selector};
pub use state::{
    ContradictionEvent, FrontEntry, IterationRecord, LogRecord, SearchState,
};
pub use update::{update_lower, update_upper, worst_case_iterations};

use thiserror::Error;

use crate::geometry::{GeometryError, ValueVec};
use crate::oracle::OracleError;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("initial front has {0} distinct point(s); at least two are needed")]
    DegenerateFront(usize),
    #[error("expected {expected} maximal points, got {got}")]
    WrongMaxPointCount { expected: usize, got: usize },
    #[error("max point {0} does not maximise objective {0}")]
    NotMaximal(usize),
    #[error("no minimal points given")]
    NoMinPoints,
    #[error("tolerance must be finite and non-negative, got {0}")]
    InvalidTolerance(f64),
    #[error("random-pick probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    #[error("lower bound set is empty")]
    EmptyLower,
    #[error("front is empty")]
    EmptyFront,
    #[error("referent {0} is not a current lower bound")]
    NotALowerBound(ValueVec),
    #[error("oracle reported success without a value vector")]
    MissingValue,
    #[error("oracle value {value} does not strictly dominate referent {referent}")]
    OracleContract { referent: ValueVec, value: ValueVec },
    #[error("value {value} strictly dominates {} earlier result(s)", contradicted.len())]
    ContradictionDetected {
        value: ValueVec,
        contradicted: Vec<ValueVec>,
    },
    #[error("value {0} contradicts no recorded outcome")]
    NoContradiction(ValueVec),
    #[error("value {0} contradicts an initial front point, which cannot be replayed")]
    InitialPointContradicted(ValueVec),
    #[error("search has already terminated")]
    AlreadyTerminated,
    #[error("a tolerance of zero needs an explicit iteration budget")]
    MissingBudget,
    #[error("the rectangle search needs exactly two objectives, got {0}")]
    NotTwoDimensional(usize),
    #[error("the rectangle search only supports greedy selection")]
    UnsupportedStrategy,
    #[error("the rectangle search cannot recover from contradicting oracle answers")]
    ContradictionIn2d,
}
