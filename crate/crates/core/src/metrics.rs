//! Front quality: exact hypervolume, maximum utility loss over random
//! monotone utilities, and the ε approximation error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{keep_maximal, linf, BoundingBox, GeometryError, ValueVec};

/// Cells per axis of a generated utility.
pub const UTILITY_CELLS: usize = 6;
/// Upper end (exclusive) of the per-cell gradient range.
pub const MAX_GRADIENT: f64 = 5.0;
pub const DEFAULT_UTILITY_COUNT: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("{0} set is empty")]
    Empty(&'static str),
    #[error("at least one utility function is required")]
    NoUtilities,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn check_dims(points: &[ValueVec], d: usize) -> Result<(), MetricsError> {
    match points.iter().find(|p| p.dim() != d) {
        Some(p) => Err(GeometryError::DimensionMismatch(d, p.dim()).into()),
        None => Ok(()),
    }
}

/// Volume of the union of boxes `[reference, v]`. Points that do not strictly
/// dominate the reference contribute nothing; an empty front gives 0.
pub fn hypervolume(front: &[ValueVec], reference: &ValueVec) -> Result<f64, MetricsError> {
    check_dims(front, reference.dim())?;
    let pts: Vec<ValueVec> = front
        .iter()
        .filter(|p| p.strictly_dominates(reference))
        .cloned()
        .collect();
    let pts: Vec<Vec<f64>> = keep_maximal(pts).into_iter().map(ValueVec::into_vec).collect();
    Ok(sweep(pts, reference))
}

// Slices along the last axis and recurses on the projection of the points
// above each slice.
fn sweep(mut pts: Vec<Vec<f64>>, r: &[f64]) -> f64 {
    if pts.is_empty() {
        return 0.0;
    }
    let d = r.len();
    if d == 1 {
        return pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max) - r[0];
    }
    let last = d - 1;
    pts.sort_by(|a, b| b[last].total_cmp(&a[last]));
    let mut total = 0.0;
    for i in 0..pts.len() {
        let top = pts[i][last];
        let bottom = pts.get(i + 1).map_or(r[last], |p| p[last]);
        if top > bottom {
            let slice: Vec<Vec<f64>> = pts[..=i].iter().map(|p| p[..last].to_vec()).collect();
            total += sweep(project_front(slice), &r[..last]) * (top - bottom);
        }
    }
    total
}

fn project_front(pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if pts[0].len() < 2 {
        return pts;
    }
    keep_maximal(pts.into_iter().map(ValueVec::from_raw).collect())
        .into_iter()
        .map(ValueVec::into_vec)
        .collect()
}

/// Monotone piecewise-linear utility on a box, separable across axes.
///
/// Each axis is cut into [`UTILITY_CELLS`] equal cells with a gradient per
/// cell. The utility of `v` sums, per axis, the gradients of the cells below
/// `v_j` plus the covered fraction of the current cell, and divides by the
/// total so that `u(nadir) = 0` and `u(ideal) = 1`. Inputs are clamped to
/// the box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityFn {
    nadir: ValueVec,
    ideal: ValueVec,
    gradients: Vec<[f64; UTILITY_CELLS]>,
    total: f64,
}

impl UtilityFn {
    pub fn new(bbox: &BoundingBox, gradients: Vec<[f64; UTILITY_CELLS]>) -> Result<Self, MetricsError> {
        if gradients.len() != bbox.dim() {
            return Err(GeometryError::DimensionMismatch(bbox.dim(), gradients.len()).into());
        }
        let total: f64 = gradients.iter().flatten().sum();
        if gradients.iter().flatten().any(|g| !g.is_finite() || *g < 0.0) || !(total > 0.0) {
            return Err(GeometryError::NonFinite(0).into());
        }
        Ok(UtilityFn {
            nadir: bbox.nadir().clone(),
            ideal: bbox.ideal().clone(),
            gradients,
            total,
        })
    }

    pub fn gradients(&self) -> &[[f64; UTILITY_CELLS]] {
        &self.gradients
    }

    pub fn eval(&self, v: &ValueVec) -> f64 {
        let mut acc = 0.0;
        for (j, grads) in self.gradients.iter().enumerate() {
            let span = self.ideal[j] - self.nadir[j];
            let t = ((v[j] - self.nadir[j]) / span * UTILITY_CELLS as f64)
                .clamp(0.0, UTILITY_CELLS as f64);
            let full = (t.floor() as usize).min(UTILITY_CELLS);
            acc += grads[..full].iter().sum::<f64>();
            if full < UTILITY_CELLS {
                acc += (t - full as f64) * grads[full];
            }
        }
        (acc / self.total).clamp(0.0, 1.0)
    }
}

/// `count` utilities with gradients drawn uniformly from `[0, 5)`.
pub fn generate_utilities(
    bbox: &BoundingBox,
    count: usize,
    seed: u64,
) -> Result<Vec<UtilityFn>, MetricsError> {
    if count == 0 {
        return Err(MetricsError::NoUtilities);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let gradients: Vec<[f64; UTILITY_CELLS]> = (0..bbox.dim())
            .map(|_| std::array::from_fn(|_| rng.gen_range(0.0..MAX_GRADIENT)))
            .collect();
        // An all-zero draw cannot be rescaled; draw again.
        if let Ok(u) = UtilityFn::new(bbox, gradients) {
            out.push(u);
        }
    }
    Ok(out)
}

fn best_utility(u: &UtilityFn, set: &[ValueVec]) -> f64 {
    set.iter().map(|v| u.eval(v)).fold(f64::NEG_INFINITY, f64::max)
}

/// Largest gap, over `utilities`, between the best utility on `truth` and the
/// best utility on `approx`.
pub fn max_utility_loss(
    approx: &[ValueVec],
    truth: &[ValueVec],
    utilities: &[UtilityFn],
) -> Result<f64, MetricsError> {
    if approx.is_empty() {
        return Err(MetricsError::Empty("approximate"));
    }
    if truth.is_empty() {
        return Err(MetricsError::Empty("true"));
    }
    if utilities.is_empty() {
        return Err(MetricsError::NoUtilities);
    }
    let d = truth[0].dim();
    check_dims(approx, d)?;
    check_dims(truth, d)?;
    for u in utilities {
        if u.gradients.len() != d {
            return Err(GeometryError::DimensionMismatch(d, u.gradients.len()).into());
        }
    }
    Ok(utilities
        .iter()
        .map(|u| best_utility(u, truth) - best_utility(u, approx))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `max_{t∈truth} min_{a∈approx} ‖t − a‖∞`.
pub fn epsilon_error(approx: &[ValueVec], truth: &[ValueVec]) -> Result<f64, MetricsError> {
    if approx.is_empty() {
        return Err(MetricsError::Empty("approximate"));
    }
    if truth.is_empty() {
        return Err(MetricsError::Empty("true"));
    }
    let d = truth[0].dim();
    check_dims(approx, d)?;
    check_dims(truth, d)?;
    Ok(truth
        .iter()
        .map(|t| approx.iter().map(|a| linf(t, a)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> ValueVec {
        ValueVec::new(c.to_vec()).unwrap()
    }

    #[test]
    fn hypervolume_hand_cases() {
        let r = v(&[0., 0.]);
        assert_eq!(hypervolume(&[v(&[1., 1.])], &r).unwrap(), 1.0);
        assert_eq!(hypervolume(&[v(&[2., 1.]), v(&[1., 2.])], &r).unwrap(), 3.0);
        assert_eq!(hypervolume(&[], &r).unwrap(), 0.0);
        assert_eq!(hypervolume(&[v(&[-1., 5.])], &r).unwrap(), 0.0);
        let r3 = v(&[0., 0., 0.]);
        let cube = [v(&[2., 1., 1.]), v(&[1., 2., 1.]), v(&[1., 1., 2.])];
        // Unit cube plus three unit protrusions.
        assert_eq!(hypervolume(&cube, &r3).unwrap(), 4.0);
    }

    #[test]
    fn utilities_span_unit_range() {
        let b = BoundingBox::new(v(&[0., -5.]), v(&[10., 5.])).unwrap();
        for u in generate_utilities(&b, 20, 7).unwrap() {
            assert_eq!(u.eval(b.nadir()), 0.0);
            assert!((u.eval(b.ideal()) - 1.0).abs() < 1e-12);
            assert_eq!(u.eval(&v(&[20., 20.])), u.eval(b.ideal()));
        }
        assert_eq!(generate_utilities(&b, 3, 1).unwrap(), generate_utilities(&b, 3, 1).unwrap());
        assert!(generate_utilities(&b, 0, 1).is_err());
    }

    #[test]
    fn utility_is_piecewise_linear() {
        let b = BoundingBox::new(v(&[0., 0.]), v(&[6., 6.])).unwrap();
        let u = UtilityFn::new(&b, vec![[1.; 6], [0., 0., 0., 0., 0., 2.]]).unwrap();
        // total = 8; at (1.5, 5.5): 1.5 + 0.5 * 2 = 2.5.
        assert!((u.eval(&v(&[1.5, 5.5])) - 2.5 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn mul_and_epsilon_basics() {
        let truth = [v(&[1., -1.]), v(&[2., -3.])];
        assert_eq!(epsilon_error(&truth, &truth).unwrap(), 0.0);
        assert_eq!(epsilon_error(&[v(&[1., -1.])], &truth).unwrap(), 2.0);
        let b = BoundingBox::new(v(&[0., -4.]), v(&[3., 0.])).unwrap();
        let us = generate_utilities(&b, 10, 3).unwrap();
        assert_eq!(max_utility_loss(&truth, &truth, &us).unwrap(), 0.0);
        assert!(epsilon_error(&[], &truth).is_err());
        assert!(max_utility_loss(&truth, &[], &us).is_err());
    }

    #[test]
    fn missing_point_costs_utility() {
        let b = BoundingBox::new(v(&[0., 0.]), v(&[6., 6.])).unwrap();
        // Only the first objective matters.
        let u = UtilityFn::new(&b, vec![[1.; 6], [0.; 6]]).unwrap();
        let truth = [v(&[6., 0.]), v(&[0., 6.])];
        let loss = max_utility_loss(&[v(&[0., 6.])], &truth, &[u]).unwrap();
        assert_eq!(loss, 1.0);
    }
}
