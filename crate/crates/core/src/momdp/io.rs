use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{MomdpError, TabularMomdp, Transition};

/// On-disk MOMDP description (TOML, or JSON when the extension is `.json`).
///
/// ```toml
/// states = 2
/// actions = 1
/// transitions = [[0, 0, 1, 1.0], [1, 0, 1, 1.0]]   # (s, a, s', p)
/// rewards = [[0, 0, 1, [1.0, 0.0]]]                # (s, a, s', r)
/// mu = [1.0, 0.0]
/// gamma = 0.9
/// horizon = 5
/// terminals = [1]
/// ```
///
/// Transitions without a reward entry pay the zero vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomdpDocument {
    pub states: usize,
    pub actions: usize,
    pub transitions: Vec<(usize, usize, usize, f64)>,
    pub rewards: Vec<(usize, usize, usize, Vec<f64>)>,
    pub mu: Vec<f64>,
    pub gamma: f64,
    pub horizon: usize,
    #[serde(default)]
    pub terminals: Vec<usize>,
}

impl MomdpDocument {
    pub fn load(path: &Path) -> Result<Self, MomdpError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MomdpError::Io(format!("{}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e == "json");
        if is_json {
            serde_json::from_str(&text).map_err(|e| MomdpError::Io(e.to_string()))
        } else {
            toml::from_str(&text).map_err(|e| MomdpError::Io(e.to_string()))
        }
    }

    pub fn build(&self) -> Result<TabularMomdp, MomdpError> {
        let d = self
            .rewards
            .first()
            .map(|r| r.3.len())
            .ok_or_else(|| MomdpError::Malformed("no rewards given".into()))?;
        let mut rewards = BTreeMap::new();
        for (s, a, n, r) in &self.rewards {
            if rewards.insert((*s, *a, *n), r.clone()).is_some() {
                return Err(MomdpError::Malformed(format!("duplicate reward for ({s},{a},{n})")));
            }
        }
        let mut table: Vec<Vec<Vec<Transition>>> =
            vec![vec![Vec::new(); self.actions]; self.states];
        for &(s, a, n, p) in &self.transitions {
            if s >= self.states || a >= self.actions {
                return Err(MomdpError::Malformed(format!("transition ({s},{a},{n}) out of range")));
            }
            let reward = rewards.remove(&(s, a, n)).unwrap_or_else(|| vec![0.0; d]);
            table[s][a].push(Transition {
                next: n,
                prob: p,
                reward,
            });
        }
        if let Some((s, a, n)) = rewards.keys().next() {
            return Err(MomdpError::Malformed(format!(
                "reward for ({s},{a},{n}) has no matching transition"
            )));
        }
        TabularMomdp::new(
            self.states,
            self.actions,
            d,
            table,
            self.mu.clone(),
            self.gamma,
            self.horizon,
            &self.terminals,
        )
    }

    pub fn from_momdp(m: &TabularMomdp) -> Self {
        let mut transitions = Vec::new();
        let mut rewards = Vec::new();
        for s in 0..m.num_states {
            for a in 0..m.num_actions {
                for t in &m.transitions[s][a] {
                    transitions.push((s, a, t.next, t.prob));
                    if t.reward.iter().any(|r| *r != 0.0) || rewards.is_empty() {
                        rewards.push((s, a, t.next, t.reward.clone()));
                    }
                }
            }
        }
        MomdpDocument {
            states: m.num_states,
            actions: m.num_actions,
            transitions,
            rewards,
            mu: m.initial.clone(),
            gamma: m.gamma,
            horizon: m.horizon,
            terminals: (0..m.num_states).filter(|&s| m.terminal[s]).collect(),
        }
    }
}
