//! Finite-horizon tabular multi-objective MDPs.
//!
//! Policies are deterministic and time-indexed. On instances with
//! deterministic transitions the trajectory is a function of time, so a
//! time-indexed table carries the same information as conditioning on the
//! accrued reward.

mod dst;
mod enumerate;
mod io;
mod solve;

pub use dst::{dst_env, DST_MAX_POINTS, DST_MIN_POINT, DST_TREASURES};
pub use enumerate::{enumerate_returns, DEFAULT_ENUMERATION_CAP};
pub use io::MomdpDocument;
pub use solve::{policy_return, scalar_value_iteration, simulate_episode, Sense};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::ValueVec;

const ROW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MomdpError {
    #[error("malformed MOMDP: {0}")]
    Malformed(String),
    #[error("invalid MOMDP:\n{0}")]
    Invalid(Violations),
    #[error("fallback enumeration needs {needed} policies, cap is {cap}")]
    CapacityExceeded { needed: String, cap: u64 },
    #[error("policy table does not fit the MOMDP: {0}")]
    BadPolicy(String),
    #[error("objective index {0} out of range")]
    BadObjective(usize),
    #[error("cannot read MOMDP file: {0}")]
    Io(String),
}

/// Every invariant violation found by [`TabularMomdp::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violations(pub Vec<String>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub next: usize,
    pub prob: f64,
    pub reward: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabularMomdp {
    num_states: usize,
    num_actions: usize,
    num_objectives: usize,
    /// `transitions[s][a]` is the sparse distribution over successors.
    transitions: Vec<Vec<Vec<Transition>>>,
    initial: Vec<f64>,
    gamma: f64,
    horizon: usize,
    terminal: Vec<bool>,
}

impl TabularMomdp {
    /// Assembles a model. Only structural problems (indices out of range,
    /// ragged reward vectors) are rejected here; numeric invariants are
    /// reported by [`validate`](Self::validate).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        num_states: usize,
        num_actions: usize,
        num_objectives: usize,
        transitions: Vec<Vec<Vec<Transition>>>,
        initial: Vec<f64>,
        gamma: f64,
        horizon: usize,
        terminals: &[usize],
    ) -> Result<Self, MomdpError> {
        let bad = |m: String| Err(MomdpError::Malformed(m));
        if num_states == 0 || num_actions == 0 {
            return bad("need at least one state and one action".into());
        }
        if num_objectives < 2 {
            return bad(format!("need at least two objectives, got {num_objectives}"));
        }
        if transitions.len() != num_states {
            return bad(format!("{} transition rows for {num_states} states", transitions.len()));
        }
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != num_actions {
                return bad(format!("state {s} has {} actions, expected {num_actions}", row.len()));
            }
            for (a, dist) in row.iter().enumerate() {
                for t in dist {
                    if t.next >= num_states {
                        return bad(format!("transition ({s},{a}) leads to unknown state {}", t.next));
                    }
                    if t.reward.len() != num_objectives {
                        return bad(format!(
                            "reward on ({s},{a},{}) has {} objectives, expected {num_objectives}",
                            t.next,
                            t.reward.len()
                        ));
                    }
                }
            }
        }
        if initial.len() != num_states {
            return bad(format!("mu has {} entries for {num_states} states", initial.len()));
        }
        let mut terminal = vec![false; num_states];
        for &s in terminals {
            if s >= num_states {
                return bad(format!("terminal state {s} out of range"));
            }
            terminal[s] = true;
        }
        Ok(TabularMomdp {
            num_states,
            num_actions,
            num_objectives,
            transitions,
            initial,
            gamma,
            horizon,
            terminal,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_objectives(&self) -> usize {
        self.num_objectives
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn is_terminal(&self, s: usize) -> bool {
        self.terminal[s]
    }

    pub fn outcomes(&self, s: usize, a: usize) -> &[Transition] {
        &self.transitions[s][a]
    }

    /// Lists every invariant violation instead of stopping at the first.
    pub fn validate(&self) -> Result<(), Violations> {
        let mut out = Vec::new();
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            out.push(format!("gamma = {} is outside (0, 1]", self.gamma));
        }
        if self.horizon < 1 {
            out.push("horizon must be at least 1".to_string());
        }
        if self.initial.iter().any(|p| !p.is_finite() || *p < 0.0) {
            out.push("mu has negative or non-finite entries".to_string());
        }
        let mu_sum: f64 = self.initial.iter().sum();
        if (mu_sum - 1.0).abs() > ROW_TOLERANCE {
            out.push(format!("mu sums to {mu_sum}, expected 1"));
        }
        for s in 0..self.num_states {
            if self.terminal[s] {
                continue;
            }
            for a in 0..self.num_actions {
                let dist = &self.transitions[s][a];
                if dist.iter().any(|t| !t.prob.is_finite() || t.prob < 0.0) {
                    out.push(format!("P(.|{s},{a}) has negative or non-finite entries"));
                }
                let sum: f64 = dist.iter().map(|t| t.prob).sum();
                if (sum - 1.0).abs() > ROW_TOLERANCE {
                    out.push(format!("P(.|{s},{a}) sums to {sum}, expected 1"));
                }
                if dist.iter().any(|t| t.reward.iter().any(|r| !r.is_finite())) {
                    out.push(format!("non-finite reward on ({s},{a})"));
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(Violations(out))
        }
    }

    /// Successor and reward when `(s, a)` is a point mass.
    pub(crate) fn deterministic_step(&self, s: usize, a: usize) -> Option<&Transition> {
        let mut live = self.transitions[s][a].iter().filter(|t| t.prob > 0.0);
        let first = live.next()?;
        if live.next().is_none() && (first.prob - 1.0).abs() <= ROW_TOLERANCE {
            Some(first)
        } else {
            None
        }
    }

    pub fn has_deterministic_transitions(&self) -> bool {
        (0..self.num_states)
            .filter(|&s| !self.terminal[s])
            .all(|s| (0..self.num_actions).all(|a| self.deterministic_step(s, a).is_some()))
    }

    /// The start state when μ is a point mass.
    pub fn deterministic_start(&self) -> Option<usize> {
        let mut live = self.initial.iter().enumerate().filter(|(_, p)| **p > 0.0);
        let (s, p) = live.next()?;
        (live.next().is_none() && (p - 1.0).abs() <= ROW_TOLERANCE).then_some(s)
    }
}

/// Deterministic time-indexed policy: `action(s, t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyTable {
    /// `actions[t][s]`
    actions: Vec<Vec<usize>>,
}

impl PolicyTable {
    pub fn new(actions: Vec<Vec<usize>>) -> Self {
        PolicyTable { actions }
    }

    pub fn constant(horizon: usize, num_states: usize, action: usize) -> Self {
        PolicyTable {
            actions: vec![vec![action; num_states]; horizon],
        }
    }

    pub fn action(&self, s: usize, t: usize) -> usize {
        self.actions[t][s]
    }

    pub fn set(&mut self, s: usize, t: usize, a: usize) {
        self.actions[t][s] = a;
    }

    pub fn horizon(&self) -> usize {
        self.actions.len()
    }

    pub(crate) fn check(&self, m: &TabularMomdp) -> Result<(), MomdpError> {
        if self.actions.len() != m.horizon {
            return Err(MomdpError::BadPolicy(format!(
                "{} timesteps for horizon {}",
                self.actions.len(),
                m.horizon
            )));
        }
        for (t, row) in self.actions.iter().enumerate() {
            if row.len() != m.num_states {
                return Err(MomdpError::BadPolicy(format!("timestep {t} covers {} states", row.len())));
            }
            if let Some(s) = row.iter().position(|&a| a >= m.num_actions) {
                return Err(MomdpError::BadPolicy(format!("action {} at ({s},{t})", row[s])));
            }
        }
        Ok(())
    }
}

/// Discounted reward collected so far, `Σ_{k<t} γ^k r_k`. This is the memory
/// a deterministic policy may condition on.
#[derive(Debug, Clone, PartialEq)]
pub struct AccruedReward {
    value: ValueVec,
    discount: f64,
}

impl AccruedReward {
    pub fn zero(num_objectives: usize) -> Self {
        AccruedReward {
            value: ValueVec::zeros(num_objectives),
            discount: 1.0,
        }
    }

    /// Adds the reward of the next step and advances the discount.
    pub fn push(&mut self, reward: &[f64], gamma: f64) {
        let next: Vec<f64> = self
            .value
            .iter()
            .zip(reward)
            .map(|(acc, r)| acc + self.discount * r)
            .collect();
        self.value = ValueVec::from_raw(next);
        self.discount *= gamma;
    }

    pub fn value(&self) -> &ValueVec {
        &self.value
    }
}
