use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::run::{FrontResult, RunOptions, Termination};
use super::select::SelectionStrategy;
use super::{EngineError, SearchState};
use crate::geometry::ValueVec;
use crate::oracle::{OracleQuery, ParetoOracle};

/// Open search rectangle between a lower and an upper corner.
#[derive(Debug, Clone, PartialEq)]
struct Rect {
    lower: ValueVec,
    upper: ValueVec,
    area: f64,
}

impl Rect {
    fn new(lower: ValueVec, upper: ValueVec) -> Option<Rect> {
        let area = (upper[0] - lower[0]) * (upper[1] - lower[1]);
        (upper.strictly_dominates(&lower)).then_some(Rect { lower, upper, area })
    }

    /// Largest distance from a point inside to the front points spanning
    /// the rectangle, i.e. its longer side.
    fn error(&self) -> f64 {
        (self.upper[0] - self.lower[0]).max(self.upper[1] - self.lower[1])
    }
}

impl Eq for Rect {}

impl Ord for Rect {
    // Larger area first, then the lexicographically smaller lower corner.
    fn cmp(&self, other: &Self) -> Ordering {
        self.area
            .total_cmp(&other.area)
            .then_with(|| other.lower.lex_cmp(&self.lower))
    }
}

impl PartialOrd for Rect {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Two-objective search over a priority queue of disjoint rectangles,
/// largest first. Queries the same referents as [`super::run`] with greedy
/// selection and leaves the state in the same place.
pub fn run_2d<O: ParetoOracle + ?Sized>(
    state: &mut SearchState,
    oracle: &mut O,
    options: &RunOptions,
) -> Result<FrontResult, EngineError> {
    if state.dim() != 2 {
        return Err(EngineError::NotTwoDimensional(state.dim()));
    }
    if options.strategy != SelectionStrategy::HypervolumeImprovement {
        return Err(EngineError::UnsupportedStrategy);
    }
    let budget = options.resolve_budget(state)?;
    let mut queue: BinaryHeap<Rect> = state
        .lower
        .iter()
        .filter_map(|l| {
            state
                .upper
                .iter()
                .filter_map(|u| Rect::new(l.clone(), u.clone()))
                .max_by(|a, b| a.area.total_cmp(&b.area))
        })
        .collect();
    let start = state.queries;
    loop {
        let bound = queue.iter().map(Rect::error).fold(0.0, f64::max);
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
        let rect = queue.pop().expect("a positive bound needs a rectangle");
        let response = oracle.query(&OracleQuery {
            referent: rect.lower.clone(),
            tolerance: state.tolerance,
        })?;
        state.queries += 1;
        if response.success {
            let v = response.value.clone().ok_or(EngineError::MissingValue)?;
            match state.apply_success(&rect.lower, response) {
                Err(EngineError::ContradictionDetected { .. }) => {
                    return Err(EngineError::ContradictionIn2d)
                }
                other => other?,
            }
            let (l, u) = (&rect.lower, &rect.upper);
            let above = Rect::new(
                ValueVec::from_raw(vec![l[0], v[1]]),
                ValueVec::from_raw(vec![v[0], u[1]]),
            );
            let right = Rect::new(
                ValueVec::from_raw(vec![v[0], l[1]]),
                ValueVec::from_raw(vec![u[0], v[1]]),
            );
            queue.extend(above);
            queue.extend(right);
        } else {
            state.apply_failure(&rect.lower, response.exact)?;
        }
    }
}
