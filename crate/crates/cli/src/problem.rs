use ipro_core::engine::{FrontEntry, SearchState};
use ipro_core::geometry::{extreme_points, pprune, ValueVec};
use ipro_core::momdp::{
    dst_env, enumerate_returns, scalar_value_iteration, MomdpDocument, Sense, TabularMomdp,
    DEFAULT_ENUMERATION_CAP, DST_MAX_POINTS, DST_MIN_POINT,
};
use ipro_core::oracle::{
    default_lambda, AsfParams, ExternalOracle, NoisyOracle, OracleMode, ParetoOracle, SetOracle,
    SolutionId,
};

use crate::config::{EnvironmentConfig, OracleConfig};
use crate::CliError;

/// Feasible value set of an environment plus the points that seed the
/// search box.
#[derive(Debug, Clone)]
pub struct Problem {
    /// Achievable values; for MOMDPs the non-dominated returns of
    /// deterministic time-indexed policies. Indices double as solution ids.
    pub feasible: Vec<ValueVec>,
    pub max_points: Vec<FrontEntry>,
    pub min_points: Vec<ValueVec>,
}

impl Problem {
    pub fn load(env: &EnvironmentConfig) -> Result<Self, CliError> {
        match env {
            EnvironmentConfig::Dst => {
                let feasible = policy_values(&dst_env())?;
                let maxes = DST_MAX_POINTS
                    .iter()
                    .map(|p| ValueVec::new(p.to_vec()))
                    .collect::<Result<Vec<_>, _>>()?;
                let min = ValueVec::new(DST_MIN_POINT.to_vec())?;
                Ok(Self::with_points(feasible, maxes, vec![min]))
            }
            EnvironmentConfig::Momdp { path } => {
                let m = MomdpDocument::load(path)?.build()?;
                let feasible = policy_values(&m)?;
                let (maxes, _) = extreme_points(&feasible)?;
                let min = (0..m.num_objectives())
                    .map(|j| scalar_value_iteration(&m, j, Sense::Min).map(|(x, _)| x))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self::with_points(feasible, maxes, vec![ValueVec::new(min)?]))
            }
            EnvironmentConfig::Vectors { path } => {
                let feasible = crate::files::read_points(path)?;
                let (maxes, min) = extreme_points(&feasible)?;
                Ok(Self::with_points(feasible, maxes, vec![min]))
            }
        }
    }

    pub fn from_points(feasible: Vec<ValueVec>) -> Result<Self, CliError> {
        let (maxes, min) = extreme_points(&feasible)?;
        Ok(Self::with_points(feasible, maxes, vec![min]))
    }

    fn with_points(feasible: Vec<ValueVec>, maxes: Vec<ValueVec>, min_points: Vec<ValueVec>) -> Self {
        let max_points = maxes
            .into_iter()
            .map(|value| FrontEntry {
                solution: feasible
                    .iter()
                    .position(|f| *f == value)
                    .map(|i| SolutionId(i as u64)),
                value,
            })
            .collect();
        Problem {
            feasible,
            max_points,
            min_points,
        }
    }

    /// Pareto front of the feasible set.
    pub fn truth(&self) -> Result<Vec<ValueVec>, CliError> {
        Ok(pprune(&self.feasible)?)
    }

    pub fn init_state(&self, tolerance: f64) -> Result<SearchState, CliError> {
        Ok(SearchState::init_with_solutions(
            &self.max_points,
            &self.min_points,
            tolerance,
        )?)
    }

    pub fn set_oracle(&self, state: &SearchState, rho: f64, mode: OracleMode) -> Result<SetOracle, CliError> {
        let rho = if mode == OracleMode::Weak { 0.0 } else { rho };
        let params = AsfParams::new(default_lambda(state.bbox()), rho)?;
        Ok(SetOracle::new(self.feasible.clone(), params, mode)?)
    }

    pub fn oracle(
        &self,
        cfg: &OracleConfig,
        state: &SearchState,
        rho: f64,
        seed: u64,
    ) -> Result<Box<dyn ParetoOracle>, CliError> {
        Ok(match cfg {
            OracleConfig::ExactWeak => Box::new(self.set_oracle(state, rho, OracleMode::Weak)?),
            OracleConfig::ExactApprox { .. } => {
                Box::new(self.set_oracle(state, rho, OracleMode::Approximate)?)
            }
            OracleConfig::Noisy {
                p_fault,
                approximate,
            } => {
                let mode = if *approximate {
                    OracleMode::Approximate
                } else {
                    OracleMode::Weak
                };
                let inner = self.set_oracle(state, rho, mode)?;
                Box::new(NoisyOracle::new(inner, *p_fault, seed)?)
            }
            OracleConfig::External { command } => Box::new(ExternalOracle::spawn(command)?),
        })
    }
}

fn policy_values(m: &TabularMomdp) -> Result<Vec<ValueVec>, CliError> {
    Ok(enumerate_returns(m, DEFAULT_ENUMERATION_CAP)?
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> ValueVec {
        ValueVec::new(c.to_vec()).unwrap()
    }

    #[test]
    fn dst_problem() {
        let p = Problem::load(&EnvironmentConfig::Dst).unwrap();
        assert_eq!(p.truth().unwrap().len(), 10);
        assert_eq!(p.max_points[0].value.as_slice(), &[124.0, -50.0]);
        assert_eq!(p.max_points[0].solution, None);
        assert!(p.max_points[1].solution.is_some());
        let s = p.init_state(0.0).unwrap();
        assert_eq!(s.bbox().ideal().as_slice(), &[124.0, -1.0]);
    }

    #[test]
    fn vector_problem_picks_pareto_extremes() {
        let pts = vec![v(&[1., 5.]), v(&[3., 5.]), v(&[4., 0.]), v(&[4., 2.])];
        let p = Problem::from_points(pts).unwrap();
        let maxes: Vec<_> = p.max_points.iter().map(|e| e.value.clone()).collect();
        assert_eq!(maxes, vec![v(&[4., 2.]), v(&[3., 5.])]);
        assert_eq!(p.min_points, vec![v(&[1., 0.])]);
    }
}
