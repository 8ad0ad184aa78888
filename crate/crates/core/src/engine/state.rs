use serde::{Deserialize, Serialize};

use super::update::{update_lower, update_upper};
use super::EngineError;
use crate::geometry::{linf, pprune, BoundingBox, GeometryError, ValueVec};
use crate::oracle::{OracleResponse, SolutionId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontEntry {
    pub value: ValueVec,
    pub solution: Option<SolutionId>,
}

/// One applied engine operation: the referent `l_t` and what the oracle said.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub referent: ValueVec,
    pub response: OracleResponse,
    pub error_bound: f64,
    pub front_size: usize,
    pub lower_size: usize,
    pub upper_size: usize,
}

/// Flat line of the iteration log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogRecord {
    pub t: usize,
    pub referent: Vec<f64>,
    pub success: bool,
    pub value: Option<Vec<f64>>,
    pub error_bound: f64,
    pub front_size: usize,
    pub lower_size: usize,
    pub upper_size: usize,
}

impl From<&IterationRecord> for LogRecord {
    fn from(r: &IterationRecord) -> Self {
        LogRecord {
            t: r.t,
            referent: r.referent.to_vec(),
            success: r.response.success,
            value: r.response.value.as_ref().map(|v| v.to_vec()),
            error_bound: r.error_bound,
            front_size: r.front_size,
            lower_size: r.lower_size,
            upper_size: r.upper_size,
        }
    }
}

/// A detected inconsistency and how replay resolved it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContradictionEvent {
    /// Oracle query (0-based) that produced the contradicting value.
    pub query: u64,
    pub value: ValueVec,
    /// Earliest contradicted history index before the replay.
    pub t_bar: usize,
    pub contradicted: Vec<ValueVec>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Snapshot {
    pub front: Vec<FrontEntry>,
    pub lower: Vec<ValueVec>,
    pub upper: Vec<ValueVec>,
}

/// Mutable core of the search.
///
/// `front` is V, `completed` C, `lower` L and `upper` U. Every remaining
/// solution strictly dominates some `l ∈ L` and is weakly dominated by some
/// `u ∈ U`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchState {
    pub(crate) bbox: BoundingBox,
    pub(crate) front: Vec<FrontEntry>,
    pub(crate) completed: Vec<ValueVec>,
    pub(crate) lower: Vec<ValueVec>,
    pub(crate) upper: Vec<ValueVec>,
    pub(crate) history: Vec<IterationRecord>,
    pub(crate) contradictions: Vec<ContradictionEvent>,
    pub(crate) tolerance: f64,
    pub(crate) queries: u64,
    pub(crate) initial: Snapshot,
}

impl SearchState {
    /// Builds the bounding box and the initial bound sets.
    ///
    /// `max_points[j]` must maximise objective `j`. The nadir is the
    /// componentwise minimum of `min_points` lowered by
    /// `1e-6 · max(1, span_j)` so that it is a strict lower bound.
    pub fn init(
        max_points: &[ValueVec],
        min_points: &[ValueVec],
        tolerance: f64,
    ) -> Result<Self, EngineError> {
        let entries: Vec<FrontEntry> = max_points
            .iter()
            .map(|v| FrontEntry {
                value: v.clone(),
                solution: None,
            })
            .collect();
        Self::init_with_solutions(&entries, min_points, tolerance)
    }

    /// As [`SearchState::init`], keeping a solution handle per max point.
    pub fn init_with_solutions(
        max_points: &[FrontEntry],
        min_points: &[ValueVec],
        tolerance: f64,
    ) -> Result<Self, EngineError> {
        if !tolerance.is_finite() || tolerance < 0.0 {
            return Err(EngineError::InvalidTolerance(tolerance));
        }
        let first = max_points.first().ok_or(EngineError::WrongMaxPointCount {
            expected: 2,
            got: 0,
        })?;
        let d = first.value.dim();
        if max_points.len() != d {
            return Err(EngineError::WrongMaxPointCount {
                expected: d,
                got: max_points.len(),
            });
        }
        if min_points.is_empty() {
            return Err(EngineError::NoMinPoints);
        }
        for p in max_points.iter().map(|e| &e.value).chain(min_points) {
            if p.dim() != d {
                return Err(GeometryError::DimensionMismatch(d, p.dim()).into());
            }
        }
        for (j, e) in max_points.iter().enumerate() {
            if max_points.iter().any(|o| o.value[j] > e.value[j]) {
                return Err(EngineError::NotMaximal(j));
            }
        }

        let ideal: Vec<f64> = (0..d).map(|j| max_points[j].value[j]).collect();
        let low: Vec<f64> = (0..d)
            .map(|j| min_points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
            .collect();
        let nadir: Vec<f64> = (0..d)
            .map(|j| {
                let span = ideal[j] - low[j];
                low[j] - 1e-6 * span.max(1.0)
            })
            .collect();
        let bbox = BoundingBox::new(ValueVec::new(nadir)?, ValueVec::new(ideal)?)?;

        let values: Vec<ValueVec> = max_points.iter().map(|e| e.value.clone()).collect();
        let distinct = pprune(&values)?;
        if distinct.len() <= 1 {
            return Err(EngineError::DegenerateFront(distinct.len()));
        }
        let mut front: Vec<FrontEntry> = Vec::new();
        for v in &distinct {
            let entry = max_points.iter().find(|e| e.value == *v).expect("pruned from these");
            front.push(entry.clone());
        }

        let mut lower = vec![bbox.nadir().clone()];
        for e in max_points {
            lower = update_lower(&e.value, &lower);
        }
        let upper = vec![bbox.ideal().clone()];
        let initial = Snapshot {
            front: front.clone(),
            lower: lower.clone(),
            upper: upper.clone(),
        };
        Ok(SearchState {
            bbox,
            front,
            completed: Vec::new(),
            lower,
            upper,
            history: Vec::new(),
            contradictions: Vec::new(),
            tolerance,
            queries: 0,
            initial,
        })
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn dim(&self) -> usize {
        self.bbox.dim()
    }

    pub fn front(&self) -> &[FrontEntry] {
        &self.front
    }

    pub fn front_values(&self) -> Vec<ValueVec> {
        self.front.iter().map(|e| e.value.clone()).collect()
    }

    pub fn completed(&self) -> &[ValueVec] {
        &self.completed
    }

    pub fn lower(&self) -> &[ValueVec] {
        &self.lower
    }

    pub fn upper(&self) -> &[ValueVec] {
        &self.upper
    }

    pub fn history(&self) -> &[IterationRecord] {
        &self.history
    }

    pub fn contradictions(&self) -> &[ContradictionEvent] {
        &self.contradictions
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Oracle queries issued so far. Differs from the history length once a
    /// replay has rewritten the history.
    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Front values present right after initialisation.
    pub fn initial_front(&self) -> Vec<ValueVec> {
        self.initial.front.iter().map(|e| e.value.clone()).collect()
    }

    /// Upper bound on the distance from any undiscovered Pareto optimal
    /// vector to V, zero when no lower bound is left.
    ///
    /// Every remaining vector `p` satisfies `l < p ⪯ u` for a live pair
    /// (`u > l`), so it is at most `max_j max(u_j − v_j, v_j − l_j)` from any
    /// `v`. The bound takes the largest such box distance after choosing the
    /// best `v` per box. It never increases, since each pair created by an
    /// update lies inside a pair it replaces.
    pub fn error_upper_bound(&self) -> Result<f64, EngineError> {
        if self.front.is_empty() {
            return Err(EngineError::EmptyFront);
        }
        let mut worst: f64 = 0.0;
        for l in &self.lower {
            for u in self.upper.iter().filter(|u| u.strictly_dominates(l)) {
                let best = self
                    .front
                    .iter()
                    .map(|e| box_distance(l, u, &e.value))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(best);
            }
        }
        Ok(worst)
    }

    /// `max_{u∈U} min_{v∈V} ‖u − v‖∞`, zero when U is empty. Only looks at
    /// upper corners, so it can fall below the true error once `d ≥ 3`.
    pub fn corner_distance(&self) -> Result<f64, EngineError> {
        if self.front.is_empty() {
            return Err(EngineError::EmptyFront);
        }
        Ok(self
            .upper
            .iter()
            .map(|u| {
                self.front
                    .iter()
                    .map(|e| linf(u, &e.value))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max))
    }

    /// Stopping rule: bound within tolerance.
    pub fn is_done(&self) -> Result<bool, EngineError> {
        Ok(self.error_upper_bound()? <= self.tolerance)
    }

    /// Front and completed values that `value` strictly dominates.
    pub fn contradicted_by(&self, value: &ValueVec) -> Vec<ValueVec> {
        self.front
            .iter()
            .map(|e| &e.value)
            .chain(&self.completed)
            .filter(|x| value.strictly_dominates(x))
            .cloned()
            .collect()
    }

    /// Success branch: add the value to V and tighten L and U.
    ///
    /// Fails with [`EngineError::ContradictionDetected`] (leaving the state
    /// untouched) when the value strictly dominates an earlier result.
    pub fn apply_success(
        &mut self,
        referent: &ValueVec,
        response: OracleResponse,
    ) -> Result<(), EngineError> {
        let value = response.value.clone().ok_or(EngineError::MissingValue)?;
        self.check_lower(referent)?;
        if value.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch(self.dim(), value.dim()).into());
        }
        if !value.strictly_dominates(referent) {
            return Err(EngineError::OracleContract {
                referent: referent.clone(),
                value,
            });
        }
        let contradicted = self.contradicted_by(&value);
        if !contradicted.is_empty() {
            return Err(EngineError::ContradictionDetected {
                value,
                contradicted,
            });
        }
        self.front.push(FrontEntry {
            value: value.clone(),
            solution: response.solution,
        });
        self.lower = update_lower(&value, &self.lower);
        self.upper = update_upper(&value, &self.upper);
        self.record(referent, response)
    }

    /// Failure branch: move the referent from L to C and carve U with it.
    pub fn apply_failure(&mut self, referent: &ValueVec, exact: bool) -> Result<(), EngineError> {
        let at = self.check_lower(referent)?;
        let l = self.lower.remove(at);
        self.upper = update_upper(&l, &self.upper);
        self.completed.push(l);
        self.record(referent, OracleResponse::not_found(exact))
    }

    fn check_lower(&self, referent: &ValueVec) -> Result<usize, EngineError> {
        self.lower
            .iter()
            .position(|l| l == referent)
            .ok_or_else(|| EngineError::NotALowerBound(referent.clone()))
    }

    fn record(&mut self, referent: &ValueVec, response: OracleResponse) -> Result<(), EngineError> {
        let error_bound = self.error_upper_bound()?;
        self.history.push(IterationRecord {
            t: self.history.len(),
            referent: referent.clone(),
            response,
            error_bound,
            front_size: self.front.len(),
            lower_size: self.lower.len(),
            upper_size: self.upper.len(),
        });
        Ok(())
    }

    /// Returns to the post-initialisation state, keeping the query counter
    /// and the contradiction log.
    pub(crate) fn reset(&mut self) {
        self.front = self.initial.front.clone();
        self.lower = self.initial.lower.clone();
        self.upper = self.initial.upper.clone();
        self.completed.clear();
        self.history.clear();
    }

    /// Re-applies logged records to a freshly initialised state.
    pub fn replay_log(&mut self, records: &[LogRecord]) -> Result<(), EngineError> {
        for r in records {
            let referent = ValueVec::new(r.referent.clone())?;
            if r.success {
                let value = r.value.clone().ok_or(EngineError::MissingValue)?;
                let response = OracleResponse::found(ValueVec::new(value)?, None, true);
                self.apply_success(&referent, response)?;
            } else {
                self.apply_failure(&referent, true)?;
            }
        }
        Ok(())
    }

    /// True when V, C, L and U coincide with `other`'s.
    pub fn same_sets(&self, other: &SearchState) -> bool {
        self.front_values() == other.front_values()
            && self.completed == other.completed
            && self.lower == other.lower
            && self.upper == other.upper
    }
}

/// Largest L∞ distance from `v` to a point of the box `[l, u]`.
pub(crate) fn box_distance(l: &ValueVec, u: &ValueVec, v: &ValueVec) -> f64 {
    (0..v.dim())
        .map(|j| (u[j] - v[j]).max(v[j] - l[j]))
        .fold(0.0, f64::max)
}
