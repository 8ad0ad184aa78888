use serde::{Deserialize, Serialize};

use super::replay::replay_correction;
use super::select::{SelectionStrategy, Selector};
use super::update::worst_case_iterations;
use super::{EngineError, FrontEntry, IterationRecord, SearchState};
use crate::geometry::{maximal_indices, ValueVec};
use crate::oracle::{OracleQuery, ParetoOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Error bound at or below the tolerance.
    Converged,
    BudgetExhausted,
}

/// Maximum number of oracle queries. `Auto` uses the worst-case iteration
/// count, which needs τ > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Auto,
    Queries(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub strategy: SelectionStrategy,
    pub seed: u64,
    pub budget: Budget,
}

impl RunOptions {
    pub fn greedy(budget: Budget) -> Self {
        RunOptions {
            strategy: SelectionStrategy::HypervolumeImprovement,
            seed: 0,
            budget,
        }
    }

    pub(crate) fn resolve_budget(&self, state: &SearchState) -> Result<u64, EngineError> {
        match self.budget {
            Budget::Queries(n) => Ok(n),
            Budget::Auto if state.tolerance > 0.0 => {
                let n = worst_case_iterations(&state.bbox, state.tolerance)?;
                Ok(u64::try_from(n).unwrap_or(u64::MAX))
            }
            Budget::Auto => Err(EngineError::MissingBudget),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontResult {
    /// Pareto non-dominated members of the final V.
    pub front: Vec<FrontEntry>,
    pub termination: Termination,
    /// Oracle queries issued during the run.
    pub iterations: u64,
    pub error_bound: f64,
    pub contradictions: usize,
}

impl FrontResult {
    pub fn values(&self) -> Vec<ValueVec> {
        self.front.iter().map(|e| e.value.clone()).collect()
    }

    pub(crate) fn collect(
        state: &SearchState,
        termination: Termination,
        iterations: u64,
        error_bound: f64,
    ) -> Self {
        let values = state.front_values();
        let front = maximal_indices(&values)
            .into_iter()
            .map(|i| state.front[i].clone())
            .collect();
        FrontResult {
            front,
            termination,
            iterations,
            error_bound,
            contradictions: state.contradictions.len(),
        }
    }
}

/// One loop iteration: select, query, then apply success or failure. A
/// contradicting answer triggers a replay of the history.
pub fn step<O: ParetoOracle + ?Sized>(
    state: &mut SearchState,
    oracle: &mut O,
    selector: &mut Selector,
) -> Result<IterationRecord, EngineError> {
    if state.is_done()? {
        return Err(EngineError::AlreadyTerminated);
    }
    let referent = selector.select(state)?;
    let response = oracle.query(&OracleQuery {
        referent: referent.clone(),
        tolerance: state.tolerance,
    })?;
    state.queries += 1;
    if response.success {
        match state.apply_success(&referent, response.clone()) {
            Err(EngineError::ContradictionDetected { .. }) => {
                replay_correction(state, response)?;
            }
            other => other?,
        }
    } else {
        state.apply_failure(&referent, response.exact)?;
    }
    Ok(state.history.last().expect("an operation was recorded").clone())
}

/// Runs until the bound reaches τ or the budget is spent.
pub fn run<O: ParetoOracle + ?Sized>(
    state: &mut SearchState,
    oracle: &mut O,
    options: &RunOptions,
) -> Result<FrontResult, EngineError> {
    let budget = options.resolve_budget(state)?;
    let mut selector = Selector::new(options.strategy, options.seed)?;
    let start = state.queries;
    loop {
        let bound = state.error_upper_bound()?;
        let used = state.queries - start;
        let termination = if bound <= state.tolerance {
            Some(Termination::Converged)
        } else if used >= budget {
            Some(Termination::BudgetExhausted)
        } else {
            None
        };
        if let Some(t) = termination {
            return Ok(FrontResult::collect(state, t, used, bound));
        }
        step(state, oracle, &mut selector)?;
    }
}
