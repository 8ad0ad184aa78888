//! Pareto oracles: given a referent, return a (weakly) Pareto optimal value
//! vector that strictly dominates it, or report that none exists.

mod asf;
mod external;
mod noisy;
mod policy;
mod set;

pub use asf::{asf_chebyshev, default_lambda, AsfParams, DEFAULT_RHO};
pub use external::{serve, ExternalOracle, WireRequest, WireResponse};
pub use noisy::NoisyOracle;
pub use policy::PolicyOracle;
pub use set::{OracleMode, SetOracle};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, ValueVec};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("feasible set is empty")]
    EmptyFeasibleSet,
    #[error("invalid ASF parameters: {0}")]
    InvalidParams(String),
    #[error("fault probability must lie in [0, 1), got {0}")]
    InvalidFaultProbability(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("external oracle: {0}")]
    External(String),
    #[error(transparent)]
    Momdp(#[from] crate::momdp::MomdpError),
}

/// Opaque handle to the solution behind a value vector (a policy id or a set
/// index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SolutionId(pub u64);

#[derive(Debug, Clone, PartialEq)]
pub struct OracleQuery {
    pub referent: ValueVec,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResponse {
    pub success: bool,
    pub value: Option<ValueVec>,
    pub solution: Option<SolutionId>,
    /// Trusted (exact) oracle, as opposed to a heuristic one.
    pub exact: bool,
}

impl OracleResponse {
    pub fn found(value: ValueVec, solution: Option<SolutionId>, exact: bool) -> Self {
        OracleResponse {
            success: true,
            value: Some(value),
            solution,
            exact,
        }
    }

    pub fn not_found(exact: bool) -> Self {
        OracleResponse {
            success: false,
            value: None,
            solution: None,
            exact,
        }
    }
}

pub trait ParetoOracle {
    fn query(&mut self, query: &OracleQuery) -> Result<OracleResponse, OracleError>;
}

impl<O: ParetoOracle + ?Sized> ParetoOracle for Box<O> {
    fn query(&mut self, query: &OracleQuery) -> Result<OracleResponse, OracleError> {
        (**self).query(query)
    }
}

impl<O: ParetoOracle + ?Sized> ParetoOracle for &mut O {
    fn query(&mut self, query: &OracleQuery) -> Result<OracleResponse, OracleError> {
        (**self).query(query)
    }
}

/// Oracles that optimise over an explicitly enumerated feasible set.
pub trait EnumerableOracle: ParetoOracle {
    fn feasible(&self) -> &[ValueVec];
    /// Scalarised value the oracle assigns to `v` for the query.
    fn score(&self, v: &ValueVec, query: &OracleQuery) -> f64;
}
