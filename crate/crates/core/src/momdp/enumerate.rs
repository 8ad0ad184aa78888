use super::{policy_return, MomdpError, PolicyTable, TabularMomdp};
use crate::geometry::{maximal_indices, ValueVec};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

struct Entry {
    value: ValueVec,
    action: usize,
    /// Index into the successor cell's entries.
    next: usize,
}

/// Pareto non-dominated returns over deterministic time-indexed policies,
/// each with a witness policy.
///
/// Deterministic instances (point-mass transitions and start state) use
/// nondominated backward induction, pruning every `(state, timestep)` cell.
/// Anything else falls back to enumerating all `|A|^(|S|·H)` policies, which
/// fails with [`MomdpError::CapacityExceeded`] above `cap`.
pub fn enumerate_returns(
    m: &TabularMomdp,
    cap: u64,
) -> Result<Vec<(ValueVec, PolicyTable)>, MomdpError> {
    m.validate().map_err(MomdpError::Invalid)?;
    let front = match m.deterministic_start() {
        Some(start) if m.has_deterministic_transitions() => backward_induction(m, start),
        _ => brute_force(m, cap)?,
    };
    // Report the forward-evaluated return of each witness so the value and
    // the policy agree bit for bit.
    let evaluated = front
        .into_iter()
        .map(|policy| Ok((policy_return(m, &policy)?, policy)))
        .collect::<Result<Vec<_>, MomdpError>>()?;
    let values: Vec<ValueVec> = evaluated.iter().map(|(v, _)| v.clone()).collect();
    let keep = maximal_indices(&values);
    let mut slots: Vec<_> = evaluated.into_iter().map(Some).collect();
    Ok(keep.into_iter().filter_map(|i| slots[i].take()).collect())
}

fn backward_induction(m: &TabularMomdp, start: usize) -> Vec<PolicyTable> {
    let (ns, na, h, d) = (m.num_states, m.num_actions, m.horizon, m.num_objectives);
    let zero = || {
        vec![Entry {
            value: ValueVec::zeros(d),
            action: 0,
            next: 0,
        }]
    };
    // cells[t][s]; the extra row t = H holds the empty continuation.
    let mut cells: Vec<Vec<Vec<Entry>>> = Vec::with_capacity(h + 1);
    cells.push((0..ns).map(|_| zero()).collect());
    for _t in (0..h).rev() {
        let later = cells.last().expect("seeded with the terminal row");
        let mut row = Vec::with_capacity(ns);
        for s in 0..ns {
            if m.terminal[s] {
                row.push(zero());
                continue;
            }
            let mut candidates = Vec::new();
            for a in 0..na {
                let step = m
                    .deterministic_step(s, a)
                    .expect("checked for deterministic transitions");
                for (k, cont) in later[step.next].iter().enumerate() {
                    let value = step
                        .reward
                        .iter()
                        .zip(cont.value.iter())
                        .map(|(r, w)| r + m.gamma * w)
                        .collect();
                    candidates.push(Entry {
                        value: ValueVec::from_raw(value),
                        action: a,
                        next: k,
                    });
                }
            }
            let values: Vec<ValueVec> = candidates.iter().map(|e| e.value.clone()).collect();
            let keep = maximal_indices(&values);
            let mut slots: Vec<_> = candidates.into_iter().map(Some).collect();
            row.push(keep.into_iter().filter_map(|i| slots[i].take()).collect());
        }
        cells.push(row);
    }
    cells.reverse();

    (0..cells[0][start].len())
        .map(|root| {
            let mut policy = PolicyTable::constant(h, ns, 0);
            let (mut s, mut k) = (start, root);
            for t in 0..h {
                if m.terminal[s] {
                    break;
                }
                let entry = &cells[t][s][k];
                policy.set(s, t, entry.action);
                s = m
                    .deterministic_step(s, entry.action)
                    .expect("checked for deterministic transitions")
                    .next;
                k = entry.next;
            }
            policy
        })
        .collect()
}

fn brute_force(m: &TabularMomdp, cap: u64) -> Result<Vec<PolicyTable>, MomdpError> {
    let (ns, na, h) = (m.num_states, m.num_actions, m.horizon);
    let slots = ns * h;
    let count = (na as u128).checked_pow(slots as u32);
    match count {
        Some(c) if c <= cap as u128 => {}
        _ => {
            return Err(MomdpError::CapacityExceeded {
                needed: format!("{na}^{slots}"),
                cap,
            })
        }
    }
    let mut digits = vec![0usize; slots];
    let mut best: Vec<(ValueVec, PolicyTable)> = Vec::new();
    loop {
        let table = PolicyTable::new(digits.chunks(ns).map(|c| c.to_vec()).collect());
        let v = policy_return(m, &table)?;
        if !best.iter().any(|(b, _)| b.weakly_dominates(&v)) {
            best.retain(|(b, _)| !v.pareto_dominates(b));
            best.push((v, table));
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == slots {
                return Ok(best.into_iter().map(|(_, p)| p).collect());
            }
            digits[i] += 1;
            if digits[i] < na {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
