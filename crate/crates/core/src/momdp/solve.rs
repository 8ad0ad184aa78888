use rand::Rng;

use super::{AccruedReward, MomdpError, PolicyTable, TabularMomdp};
use crate::geometry::ValueVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

/// Finite-horizon backward induction on objective `objective` alone.
///
/// Returns the optimal expected value from μ and an optimal deterministic
/// time-indexed policy. Ties go to the lowest action index.
pub fn scalar_value_iteration(
    m: &TabularMomdp,
    objective: usize,
    sense: Sense,
) -> Result<(f64, PolicyTable), MomdpError> {
    if objective >= m.num_objectives {
        return Err(MomdpError::BadObjective(objective));
    }
    let sign = match sense {
        Sense::Max => 1.0,
        Sense::Min => -1.0,
    };
    let (ns, na, h) = (m.num_states, m.num_actions, m.horizon);
    let mut policy = PolicyTable::constant(h, ns, 0);
    let mut next = vec![0.0; ns];
    for t in (0..h).rev() {
        let mut cur = vec![0.0; ns];
        for s in 0..ns {
            if m.terminal[s] {
                continue;
            }
            let mut best = f64::NEG_INFINITY;
            for a in 0..na {
                let q: f64 = m.transitions[s][a]
                    .iter()
                    .map(|tr| tr.prob * (sign * tr.reward[objective] + m.gamma * next[tr.next]))
                    .sum();
                if q > best {
                    best = q;
                    policy.set(s, t, a);
                }
            }
            cur[s] = best;
        }
        next = cur;
    }
    let value: f64 = m.initial.iter().zip(&next).map(|(p, v)| p * v).sum();
    Ok((sign * value, policy))
}

/// Exact expected discounted return of `policy` from μ, by pushing the state
/// distribution forward one timestep at a time.
pub fn policy_return(m: &TabularMomdp, policy: &PolicyTable) -> Result<ValueVec, MomdpError> {
    policy.check(m)?;
    let mut occupancy = m.initial.clone();
    let mut total = vec![0.0; m.num_objectives];
    let mut discount = 1.0;
    for t in 0..m.horizon {
        let mut next = vec![0.0; m.num_states];
        for (s, &mass) in occupancy.iter().enumerate() {
            if mass == 0.0 || m.terminal[s] {
                continue;
            }
            for tr in &m.transitions[s][policy.action(s, t)] {
                let w = mass * tr.prob;
                for (acc, r) in total.iter_mut().zip(&tr.reward) {
                    *acc += discount * w * r;
                }
                next[tr.next] += w;
            }
        }
        occupancy = next;
        discount *= m.gamma;
    }
    Ok(ValueVec::from_raw(total))
}

/// Samples one episode under `policy`, returning the final accrued reward.
pub fn simulate_episode<R: Rng>(
    m: &TabularMomdp,
    policy: &PolicyTable,
    rng: &mut R,
) -> Result<AccruedReward, MomdpError> {
    policy.check(m)?;
    let mut s = sample(&m.initial, rng);
    let mut acc = AccruedReward::zero(m.num_objectives);
    for t in 0..m.horizon {
        if m.terminal[s] {
            break;
        }
        let dist = &m.transitions[s][policy.action(s, t)];
        let probs: Vec<f64> = dist.iter().map(|tr| tr.prob).collect();
        let tr = &dist[sample(&probs, rng)];
        acc.push(&tr.reward, m.gamma);
        s = tr.next;
    }
    Ok(acc)
}

fn sample<R: Rng>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut cum = 0.0;
    for (i, p) in probs.iter().enumerate() {
        cum += p;
        if u < cum {
            return i;
        }
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momdp::{dst_env, Transition};

    fn chain() -> TabularMomdp {
        // 0 -> 1 -> 2 (terminal), rewards (1,0), (0,2); discount 0.5.
        let t = |next, reward: Vec<f64>| {
            vec![Transition {
                next,
                prob: 1.0,
                reward,
            }]
        };
        let transitions = vec![
            vec![t(1, vec![1., 0.])],
            vec![t(2, vec![0., 2.])],
            vec![t(2, vec![0., 0.])],
        ];
        TabularMomdp::new(3, 1, 2, transitions, vec![1., 0., 0.], 0.5, 5, &[2]).unwrap()
    }

    #[test]
    fn chain_return_by_hand() {
        let m = chain();
        let v = policy_return(&m, &PolicyTable::constant(5, 3, 0)).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn one_step_undiscounted_is_expected_reward() {
        let transitions = vec![vec![vec![
            Transition { next: 0, prob: 0.25, reward: vec![4., 0.] },
            Transition { next: 0, prob: 0.75, reward: vec![0., 8.] },
        ]]];
        let m = TabularMomdp::new(1, 1, 2, transitions, vec![1.], 1.0, 1, &[]).unwrap();
        let v = policy_return(&m, &PolicyTable::constant(1, 1, 0)).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 6.0]);
    }

    #[test]
    fn dst_scalar_extremes() {
        let m = dst_env();
        assert_eq!(scalar_value_iteration(&m, 0, Sense::Max).unwrap().0, 124.0);
        assert_eq!(scalar_value_iteration(&m, 1, Sense::Max).unwrap().0, -1.0);
        assert_eq!(scalar_value_iteration(&m, 0, Sense::Min).unwrap().0, 0.0);
        assert_eq!(scalar_value_iteration(&m, 1, Sense::Min).unwrap().0, -50.0);
    }

    #[test]
    fn optimal_policy_attains_value() {
        let m = dst_env();
        for (j, sense) in [(0, Sense::Max), (1, Sense::Max), (1, Sense::Min)] {
            let (value, policy) = scalar_value_iteration(&m, j, sense).unwrap();
            assert_eq!(policy_return(&m, &policy).unwrap()[j], value);
        }
    }

    #[test]
    fn identical_rewards_make_policy_irrelevant() {
        let transitions = vec![
            vec![
                vec![Transition { next: 1, prob: 1.0, reward: vec![1., 2.] }],
                vec![Transition { next: 0, prob: 1.0, reward: vec![1., 2.] }],
            ],
            vec![
                vec![Transition { next: 0, prob: 1.0, reward: vec![1., 2.] }],
                vec![Transition { next: 1, prob: 1.0, reward: vec![1., 2.] }],
            ],
        ];
        let m = TabularMomdp::new(2, 2, 2, transitions, vec![0.5, 0.5], 0.9, 4, &[]).unwrap();
        let (vmax, _) = scalar_value_iteration(&m, 1, Sense::Max).unwrap();
        let (vmin, _) = scalar_value_iteration(&m, 1, Sense::Min).unwrap();
        assert!((vmax - vmin).abs() < 1e-12);
        let a = policy_return(&m, &PolicyTable::constant(4, 2, 0)).unwrap();
        let b = policy_return(&m, &PolicyTable::constant(4, 2, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_policy_shape_rejected() {
        let m = chain();
        assert!(policy_return(&m, &PolicyTable::constant(4, 3, 0)).is_err());
        assert!(policy_return(&m, &PolicyTable::constant(5, 3, 1)).is_err());
        assert!(scalar_value_iteration(&m, 2, Sense::Max).is_err());
    }
}
