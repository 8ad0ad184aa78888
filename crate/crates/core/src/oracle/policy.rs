use super::{
    AsfParams, EnumerableOracle, OracleError, OracleMode, OracleQuery, OracleResponse,
    ParetoOracle, SetOracle, SolutionId,
};
use crate::geometry::ValueVec;
use crate::momdp::{enumerate_returns, PolicyTable, TabularMomdp};

/// Exact oracle over the achievable returns of deterministic time-indexed
/// policies of a tabular MOMDP. Solution handles index [`PolicyOracle::policy`].
#[derive(Debug, Clone)]
pub struct PolicyOracle {
    set: SetOracle,
    policies: Vec<PolicyTable>,
}

impl PolicyOracle {
    /// Enumerates the return set up front; `cap` bounds the fallback
    /// enumeration on stochastic instances.
    pub fn new(
        m: &TabularMomdp,
        params: AsfParams,
        mode: OracleMode,
        cap: u64,
    ) -> Result<Self, OracleError> {
        let pairs = enumerate_returns(m, cap)?;
        Self::from_pairs(pairs, params, mode)
    }

    pub fn from_pairs(
        pairs: Vec<(ValueVec, PolicyTable)>,
        params: AsfParams,
        mode: OracleMode,
    ) -> Result<Self, OracleError> {
        let (values, policies): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Ok(PolicyOracle {
            set: SetOracle::new(values, params, mode)?,
            policies,
        })
    }

    pub fn policy(&self, id: SolutionId) -> Option<&PolicyTable> {
        self.policies.get(id.0 as usize)
    }

    pub fn set_oracle(&self) -> &SetOracle {
        &self.set
    }
}

impl ParetoOracle for PolicyOracle {
    fn query(&mut self, q: &OracleQuery) -> Result<OracleResponse, OracleError> {
        self.set.query(q)
    }
}

impl EnumerableOracle for PolicyOracle {
    fn feasible(&self) -> &[ValueVec] {
        self.set.feasible()
    }

    fn score(&self, v: &ValueVec, q: &OracleQuery) -> f64 {
        self.set.score(v, q)
    }
}
