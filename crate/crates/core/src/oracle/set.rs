use std::cmp::Ordering;

use super::asf::asf_unchecked;
use super::{
    AsfParams, EnumerableOracle, OracleError, OracleQuery, OracleResponse, ParetoOracle,
    SolutionId,
};
use crate::geometry::{GeometryError, ValueVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Plain Chebyshev (ρ = 0) at the referent; success iff the maximiser
    /// strictly dominates the referent.
    Weak,
    /// Augmented Chebyshev at `r + τ`; success iff the maximiser weakly
    /// dominates `r + τ`. With τ = 0 the test falls back to strict dominance
    /// of `r`.
    Approximate,
}

/// Exact oracle over an explicit, finite feasible set.
#[derive(Debug, Clone)]
pub struct SetOracle {
    feasible: Vec<ValueVec>,
    params: AsfParams,
    mode: OracleMode,
}

impl SetOracle {
    pub fn new(
        feasible: Vec<ValueVec>,
        params: AsfParams,
        mode: OracleMode,
    ) -> Result<Self, OracleError> {
        let first = feasible.first().ok_or(OracleError::EmptyFeasibleSet)?;
        let d = first.dim();
        for v in &feasible {
            if v.dim() != d {
                return Err(GeometryError::DimensionMismatch(d, v.dim()).into());
            }
        }
        if params.lambda().dim() != d {
            return Err(GeometryError::DimensionMismatch(d, params.lambda().dim()).into());
        }
        Ok(SetOracle {
            feasible,
            params,
            mode,
        })
    }

    pub fn params(&self) -> &AsfParams {
        &self.params
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    /// Index of the ASF maximiser for the given shifted referent. Ties go to
    /// the lexicographically greatest vector, then to the lowest index.
    pub(crate) fn argmax(&self, target: &ValueVec, params: &AsfParams) -> usize {
        let mut best = 0usize;
        let mut best_score = f64::NEG_INFINITY;
        for (i, v) in self.feasible.iter().enumerate() {
            let score = asf_unchecked(v, target, params);
            let better = match score.partial_cmp(&best_score) {
                Some(Ordering::Greater) => true,
                Some(Ordering::Equal) => v.lex_cmp(&self.feasible[best]) == Ordering::Greater,
                _ => false,
            };
            if better {
                best = i;
                best_score = score;
            }
        }
        best
    }

    /// Referent shift and ASF parameters actually used for a query.
    pub(crate) fn scalarisation(&self, q: &OracleQuery) -> Result<(ValueVec, AsfParams), OracleError> {
        match self.mode {
            OracleMode::Weak => Ok((q.referent.clone(), self.params.with_rho(0.0)?)),
            OracleMode::Approximate => {
                Ok((q.referent.add_scalar(q.tolerance.max(0.0)), self.params.clone()))
            }
        }
    }

    pub(crate) fn accepts(&self, v: &ValueVec, q: &OracleQuery) -> bool {
        match self.mode {
            OracleMode::Approximate if q.tolerance > 0.0 => {
                v.weakly_dominates(&q.referent.add_scalar(q.tolerance))
            }
            _ => v.strictly_dominates(&q.referent),
        }
    }
}

impl ParetoOracle for SetOracle {
    fn query(&mut self, q: &OracleQuery) -> Result<OracleResponse, OracleError> {
        let d = self.feasible[0].dim();
        if q.referent.dim() != d {
            return Err(GeometryError::DimensionMismatch(d, q.referent.dim()).into());
        }
        let (target, params) = self.scalarisation(q)?;
        let best = self.argmax(&target, &params);
        let v = &self.feasible[best];
        if self.accepts(v, q) {
            Ok(OracleResponse::found(v.clone(), Some(SolutionId(best as u64)), true))
        } else {
            Ok(OracleResponse::not_found(true))
        }
    }
}

impl EnumerableOracle for SetOracle {
    fn feasible(&self) -> &[ValueVec] {
        &self.feasible
    }

    fn score(&self, v: &ValueVec, q: &OracleQuery) -> f64 {
        let (target, params) = self
            .scalarisation(q)
            .expect("parameters were validated at construction");
        asf_unchecked(v, &target, &params)
    }
}
