use super::EngineError;
use crate::geometry::{keep_maximal, keep_minimal, BoundingBox, ValueVec};

/// Lower-bound update: every `l` strictly dominated by `vstar` is replaced by
/// its `d` projections onto the faces of `vstar`, then the set is reduced to
/// its minimal antichain.
pub fn update_lower(vstar: &ValueVec, lower: &[ValueVec]) -> Vec<ValueVec> {
    keep_minimal(substitute(vstar, lower, |x| vstar.strictly_dominates(x)))
}

/// Mirror of [`update_lower`]: every `u` strictly dominating `vstar` is
/// replaced by its projections and the maximal antichain is kept.
pub fn update_upper(vstar: &ValueVec, upper: &[ValueVec]) -> Vec<ValueVec> {
    keep_maximal(substitute(vstar, upper, |x| x.strictly_dominates(vstar)))
}

fn substitute(vstar: &ValueVec, xs: &[ValueVec], hit: impl Fn(&ValueVec) -> bool) -> Vec<ValueVec> {
    let mut out = Vec::with_capacity(xs.len() + vstar.dim());
    for x in xs {
        if hit(x) {
            out.extend((0..vstar.dim()).map(|j| x.with_component(j, vstar[j])));
        } else {
            out.push(x.clone());
        }
    }
    out
}

/// Iteration bound for an exact approximate oracle with tolerance `tau`:
/// with `k_j = ceil(span_j / tau)`, at most `∏ k_j − ∏ (k_j − 1)` queries.
/// Saturates at `u128::MAX`.
pub fn worst_case_iterations(bbox: &BoundingBox, tau: f64) -> Result<u128, EngineError> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(EngineError::InvalidTolerance(tau));
    }
    let ks: Vec<u128> = (0..bbox.dim())
        .map(|j| {
            let k = (bbox.span(j) / tau).ceil();
            if k >= u128::MAX as f64 {
                u128::MAX
            } else {
                k as u128
            }
        })
        .collect();
    let all = ks.iter().try_fold(1u128, |acc, k| acc.checked_mul(*k));
    let inner = ks
        .iter()
        .try_fold(1u128, |acc, k| acc.checked_mul(k.saturating_sub(1)));
    match (all, inner) {
        (Some(a), Some(b)) => Ok(a - b),
        _ => Ok(u128::MAX),
    }
}
