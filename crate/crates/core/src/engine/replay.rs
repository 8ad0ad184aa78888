use super::{ContradictionEvent, EngineError, IterationRecord, SearchState};
use crate::oracle::OracleResponse;

/// Rebuilds the state after `response` contradicted an earlier outcome.
///
/// The offending step `t̄` is the earliest record whose value (success) or
/// referent (failure) the new value strictly dominates. Records before `t̄`
/// are replayed verbatim, the new value becomes the answer for `l_t̄`, and
/// later records are re-applied where they still make sense:
///
/// * a success `v_t` is skipped when the front already weakly dominates it,
///   and otherwise applied to the lexicographically first `l' < v_t`;
/// * a failure at `l_t` is skipped when the front strictly dominates `l_t`,
///   and otherwise completes every lower bound `l' ⪰ l_t`.
///
/// The event is attributed to the most recent oracle query.
pub fn replay_correction(
    state: &mut SearchState,
    response: OracleResponse,
) -> Result<(), EngineError> {
    let query = state.queries.saturating_sub(1);
    let value = response.value.clone().ok_or(EngineError::MissingValue)?;
    let contradicted = state.contradicted_by(&value);
    if contradicted.is_empty() {
        return Err(EngineError::NoContradiction(value));
    }
    let t_bar = state
        .history
        .iter()
        .position(|r| contradicts(&value, r))
        .ok_or_else(|| EngineError::InitialPointContradicted(value.clone()))?;

    let old = std::mem::take(&mut state.history);
    state.reset();
    for r in &old[..t_bar] {
        if r.response.success {
            state.apply_success(&r.referent, r.response.clone())?;
        } else {
            state.apply_failure(&r.referent, r.response.exact)?;
        }
    }
    match state.apply_success(&old[t_bar].referent, response) {
        Err(EngineError::ContradictionDetected { .. }) => {
            return Err(EngineError::InitialPointContradicted(value));
        }
        other => other?,
    }

    for r in &old[t_bar + 1..] {
        if r.response.success {
            let vt = r.response.value.as_ref().ok_or(EngineError::MissingValue)?;
            if state.front.iter().any(|f| f.value.weakly_dominates(vt)) {
                continue;
            }
            let target = state
                .lower
                .iter()
                .filter(|l| vt.strictly_dominates(l))
                .min_by(|a, b| a.lex_cmp(b))
                .cloned();
            if let Some(l) = target {
                match state.apply_success(&l, r.response.clone()) {
                    Err(EngineError::ContradictionDetected { .. }) => continue,
                    other => other?,
                }
            }
        } else {
            if state.front.iter().any(|f| f.value.strictly_dominates(&r.referent)) {
                continue;
            }
            let mut targets: Vec<_> = state
                .lower
                .iter()
                .filter(|l| l.weakly_dominates(&r.referent))
                .cloned()
                .collect();
            targets.sort_by(|a, b| a.lex_cmp(b));
            for l in targets {
                state.apply_failure(&l, r.response.exact)?;
            }
        }
    }

    state.contradictions.push(ContradictionEvent {
        query,
        value,
        t_bar,
        contradicted,
    });
    Ok(())
}

fn contradicts(value: &crate::geometry::ValueVec, r: &IterationRecord) -> bool {
    match (&r.response.value, r.response.success) {
        (Some(v), true) => value.strictly_dominates(v),
        _ => value.strictly_dominates(&r.referent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ValueVec;

    fn v(c: &[f64]) -> ValueVec {
        ValueVec::new(c.to_vec()).unwrap()
    }

    fn fresh() -> SearchState {
        SearchState::init(&[v(&[4., 0.]), v(&[0., 4.])], &[v(&[0., 0.])], 0.0).unwrap()
    }

    #[test]
    fn dominated_fault_is_removed() {
        let mut s = fresh();
        s.apply_success(&v(&[0., 0.]), OracleResponse::found(v(&[1., 1.]), None, false)).unwrap();
        let l = s.lower().iter().find(|l| v(&[2., 2.]).strictly_dominates(l)).unwrap().clone();
        let resp = OracleResponse::found(v(&[2., 2.]), None, false);
        assert!(s.apply_success(&l, resp.clone()).is_err());
        replay_correction(&mut s, resp).unwrap();
        assert!(!s.front_values().contains(&v(&[1., 1.])));
        assert!(s.front_values().contains(&v(&[2., 2.])));
        assert_eq!(s.contradictions().len(), 1);
        assert_eq!(s.contradictions()[0].t_bar, 0);

        let mut direct = fresh();
        direct
            .apply_success(&v(&[0., 0.]), OracleResponse::found(v(&[2., 2.]), None, true))
            .unwrap();
        assert!(s.same_sets(&direct));
    }

    #[test]
    fn completed_referent_is_reopened() {
        let mut s = fresh();
        s.apply_failure(&v(&[0., 0.]), false).unwrap();
        assert_eq!(s.completed(), &[v(&[0., 0.])]);
        let resp = OracleResponse::found(v(&[1., 1.]), None, false);
        replay_correction(&mut s, resp).unwrap();
        assert!(s.completed().is_empty());
        assert!(s.front_values().contains(&v(&[1., 1.])));
    }

    #[test]
    fn later_records_are_reapplied() {
        let mut s = fresh();
        s.apply_success(&v(&[0., 0.]), OracleResponse::found(v(&[1., 1.]), None, false)).unwrap();
        // (3,0.5) lies above the lower bound (1,0) left by the fault.
        let l = v(&[1., 0.]);
        s.apply_success(&l, OracleResponse::found(v(&[3., 0.5]), None, false)).unwrap();
        let resp = OracleResponse::found(v(&[2., 2.]), None, false);
        replay_correction(&mut s, resp).unwrap();
        let front = s.front_values();
        assert!(front.contains(&v(&[3., 0.5])));
        assert!(!front.contains(&v(&[1., 1.])));
        assert_eq!(s.history().len(), 2);
    }

    #[test]
    fn no_contradiction_is_an_error() {
        let mut s = fresh();
        let resp = OracleResponse::found(v(&[1., 1.]), None, true);
        assert!(matches!(
            replay_correction(&mut s, resp),
            Err(EngineError::NoContradiction(_))
        ));
    }
}
