use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EngineError, SearchState};
use crate::geometry::ValueVec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SelectionStrategy {
    /// Largest box between a lower bound and a dominating upper bound.
    HypervolumeImprovement,
    UniformRandom,
    /// Uniform pick with probability `p`, greedy otherwise.
    EpsilonMixed { p: f64 },
}

impl Default for SelectionStrategy {
    fn default() -> Self {
        SelectionStrategy::HypervolumeImprovement
    }
}

/// Score of `l`: the largest volume `∏ (u_j − l_j)` over `u ∈ U` with `u > l`,
/// or zero if no upper bound strictly dominates it.
pub fn hv_improvement(l: &ValueVec, upper: &[ValueVec]) -> f64 {
    upper
        .iter()
        .filter(|u| u.strictly_dominates(l))
        .map(|u| u.iter().zip(l.iter()).map(|(a, b)| a - b).product::<f64>())
        .fold(0.0, f64::max)
}

fn greedy(state: &SearchState) -> Result<ValueVec, EngineError> {
    let mut best: Option<(f64, &ValueVec)> = None;
    for l in &state.lower {
        let s = hv_improvement(l, &state.upper);
        let better = match best {
            None => true,
            Some((bs, bl)) => match s.total_cmp(&bs) {
                Ordering::Greater => true,
                Ordering::Equal => l.lex_cmp(bl) == Ordering::Less,
                Ordering::Less => false,
            },
        };
        if better {
            best = Some((s, l));
        }
    }
    best.map(|(_, l)| l.clone()).ok_or(EngineError::EmptyLower)
}

/// Picks the next referent from `L` using `rng` for the random strategies.
pub fn select_referent<R: Rng>(
    state: &SearchState,
    strategy: SelectionStrategy,
    rng: &mut R,
) -> Result<ValueVec, EngineError> {
    if state.lower.is_empty() {
        return Err(EngineError::EmptyLower);
    }
    let uniform = |rng: &mut R| state.lower[rng.gen_range(0..state.lower.len())].clone();
    match strategy {
        SelectionStrategy::HypervolumeImprovement => greedy(state),
        SelectionStrategy::UniformRandom => Ok(uniform(rng)),
        SelectionStrategy::EpsilonMixed { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(EngineError::InvalidProbability(p));
            }
            if rng.gen::<f64>() < p {
                Ok(uniform(rng))
            } else {
                greedy(state)
            }
        }
    }
}

/// Strategy plus its seeded generator.
#[derive(Debug, Clone)]
pub struct Selector {
    strategy: SelectionStrategy,
    rng: ChaCha8Rng,
}

impl Selector {
    pub fn new(strategy: SelectionStrategy, seed: u64) -> Result<Self, EngineError> {
        if let SelectionStrategy::EpsilonMixed { p } = strategy {
            if !(0.0..=1.0).contains(&p) {
                return Err(EngineError::InvalidProbability(p));
            }
        }
        Ok(Selector {
            strategy,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn strategy(&self) -> SelectionStrategy {
        self.strategy
    }

    pub fn select(&mut self, state: &SearchState) -> Result<ValueVec, EngineError> {
        select_referent(state, self.strategy, &mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> ValueVec {
        ValueVec::new(c.to_vec()).unwrap()
    }

    fn with_bounds(lower: &[&[f64]], upper: &[&[f64]]) -> SearchState {
        let mut s =
            SearchState::init(&[v(&[10., -10.]), v(&[-10., 10.])], &[v(&[-10., -10.])], 0.0).unwrap();
        s.lower = lower.iter().map(|c| v(c)).collect();
        s.upper = upper.iter().map(|c| v(c)).collect();
        s
    }

    #[test]
    fn single_candidate_score() {
        assert_eq!(hv_improvement(&v(&[0., 0.]), &[v(&[4., 2.])]), 8.0);
    }

    #[test]
    fn picks_largest_box() {
        let s = with_bounds(&[&[0., 0.], &[3., 0.]], &[&[2., 2.], &[4., 1.]]);
        assert_eq!(hv_improvement(&v(&[0., 0.]), s.upper()), 4.0);
        assert_eq!(hv_improvement(&v(&[3., 0.]), s.upper()), 1.0);
        let mut sel = Selector::new(SelectionStrategy::HypervolumeImprovement, 0).unwrap();
        assert_eq!(sel.select(&s).unwrap(), v(&[0., 0.]));
    }

    #[test]
    fn ties_go_to_lexicographically_smallest() {
        let s = with_bounds(&[&[1., 0.], &[0., 1.]], &[&[2., 2.]]);
        let mut sel = Selector::new(SelectionStrategy::HypervolumeImprovement, 0).unwrap();
        assert_eq!(sel.select(&s).unwrap(), v(&[0., 1.]));
    }

    #[test]
    fn empty_lower_is_an_error() {
        let s = with_bounds(&[], &[&[2., 2.]]);
        let mut sel = Selector::new(SelectionStrategy::UniformRandom, 0).unwrap();
        assert!(matches!(sel.select(&s), Err(EngineError::EmptyLower)));
    }

    #[test]
    fn bad_probability_rejected() {
        assert!(Selector::new(SelectionStrategy::EpsilonMixed { p: 1.5 }, 0).is_err());
    }
}
