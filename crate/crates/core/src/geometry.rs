//! Dominance relations, antichain pruning, distances and box arithmetic.
//!
//! All objectives are maximised. Comparisons are exact: no epsilon is ever
//! applied here, tolerances only enter at the engine's stopping rule.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("a value vector needs at least two objectives, got {0}")]
    TooFewObjectives(usize),
    #[error("non-finite component at index {0}")]
    NonFinite(usize),
    #[error("cannot prune an empty set")]
    EmptySet,
    #[error("ideal must exceed nadir in every objective (axis {axis}: nadir {nadir}, ideal {ideal})")]
    InvalidBox { axis: usize, nadir: f64, ideal: f64 },
}

/// A point in objective space.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ValueVec(Vec<f64>);

impl ValueVec {
    pub fn new(components: Vec<f64>) -> Result<Self, GeometryError> {
        if components.len() < 2 {
            return Err(GeometryError::TooFewObjectives(components.len()));
        }
        if let Some(i) = components.iter().position(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        Ok(ValueVec(components))
    }

    /// Internal constructor for vectors derived from already validated ones.
    pub(crate) fn from_raw(components: Vec<f64>) -> Self {
        debug_assert!(components.len() >= 2);
        debug_assert!(components.iter().all(|c| c.is_finite()));
        ValueVec(components)
    }

    pub fn zeros(dim: usize) -> Self {
        ValueVec::from_raw(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Copy of `self` with component `axis` replaced by `value`.
    pub fn with_component(&self, axis: usize, value: f64) -> Self {
        let mut out = self.0.clone();
        out[axis] = value;
        ValueVec(out)
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        ValueVec(self.0.iter().map(|c| c + s).collect())
    }

    pub fn neg(&self) -> Self {
        ValueVec(self.0.iter().map(|c| -c).collect())
    }

    /// `v > w` in every component.
    pub fn strictly_dominates(&self, other: &ValueVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a > b)
    }

    /// `v ⪰ w`: at least as good everywhere (includes equality).
    pub fn weakly_dominates(&self, other: &ValueVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Pareto dominance: `v ⪰ w` and `v != w`.
    pub fn pareto_dominates(&self, other: &ValueVec) -> bool {
        self.weakly_dominates(other) && self != other
    }

    /// Total lexicographic order used for every tie-break in the crate.
    pub fn lex_cmp(&self, other: &ValueVec) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl TryFrom<Vec<f64>> for ValueVec {
    type Error = GeometryError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        ValueVec::new(v)
    }
}

impl From<ValueVec> for Vec<f64> {
    fn from(v: ValueVec) -> Self {
        v.0
    }
}

impl Deref for ValueVec {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for ValueVec {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for ValueVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for ValueVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Relation of `v` to `w` under the Pareto order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dominance {
    StrictlyDominates,
    /// Dominates, but ties in at least one objective.
    ParetoDominates,
    Equal,
    ParetoDominatedBy,
    StrictlyDominatedBy,
    Incomparable,
}

impl Dominance {
    pub fn mirror(self) -> Self {
        match self {
            Dominance::StrictlyDominates => Dominance::StrictlyDominatedBy,
            Dominance::ParetoDominates => Dominance::ParetoDominatedBy,
            Dominance::Equal => Dominance::Equal,
            Dominance::ParetoDominatedBy => Dominance::ParetoDominates,
            Dominance::StrictlyDominatedBy => Dominance::StrictlyDominates,
            Dominance::Incomparable => Dominance::Incomparable,
        }
    }
}

fn check_dims(v: &[f64], w: &[f64]) -> Result<(), GeometryError> {
    if v.len() != w.len() {
        return Err(GeometryError::DimensionMismatch(v.len(), w.len()));
    }
    Ok(())
}

pub fn compare(v: &ValueVec, w: &ValueVec) -> Result<Dominance, GeometryError> {
    check_dims(v, w)?;
    let (mut greater, mut less, mut equal) = (0usize, 0usize, 0usize);
    for (a, b) in v.iter().zip(w.iter()) {
        match a.partial_cmp(b) {
            Some(Ordering::Greater) => greater += 1,
            Some(Ordering::Less) => less += 1,
            _ => equal += 1,
        }
    }
    let d = v.dim();
    Ok(match (greater, less) {
        _ if equal == d => Dominance::Equal,
        (g, 0) if g == d => Dominance::StrictlyDominates,
        (_, 0) => Dominance::ParetoDominates,
        (0, l) if l == d => Dominance::StrictlyDominatedBy,
        (0, _) => Dominance::ParetoDominatedBy,
        _ => Dominance::Incomparable,
    })
}

pub fn linf_dist(v: &ValueVec, w: &ValueVec) -> Result<f64, GeometryError> {
    check_dims(v, w)?;
    Ok(linf(v, w))
}

/// Unchecked L∞ distance for callers that already validated dimensions.
pub(crate) fn linf(v: &[f64], w: &[f64]) -> f64 {
    v.iter()
        .zip(w)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn uniform_dim(points: &[ValueVec]) -> Result<usize, GeometryError> {
    let first = points.first().ok_or(GeometryError::EmptySet)?;
    for p in points {
        check_dims(first, p)?;
    }
    Ok(first.dim())
}

/// Pareto non-dominated subset (maximisation). Duplicates collapse to the
/// first occurrence and the survivors keep their input order.
pub fn pprune(points: &[ValueVec]) -> Result<Vec<ValueVec>, GeometryError> {
    uniform_dim(points)?;
    Ok(keep_maximal(points.to_vec()))
}

pub(crate) fn keep_maximal(points: Vec<ValueVec>) -> Vec<ValueVec> {
    select(points, &maximal_indices)
}

/// Minimal antichain: drop every element that Pareto-dominates another one.
pub(crate) fn keep_minimal(points: Vec<ValueVec>) -> Vec<ValueVec> {
    select(points, &minimal_indices)
}

fn select(points: Vec<ValueVec>, pick: &dyn Fn(&[ValueVec]) -> Vec<usize>) -> Vec<ValueVec> {
    let keep = pick(&points);
    let mut slots: Vec<Option<ValueVec>> = points.into_iter().map(Some).collect();
    keep.into_iter()
        .map(|i| slots[i].take().expect("indices are unique"))
        .collect()
}

/// Indices (ascending) of the Pareto non-dominated points, first occurrence
/// of duplicates only.
pub(crate) fn maximal_indices(points: &[ValueVec]) -> Vec<usize> {
    antichain_indices(points, |a, b| a.pareto_dominates(b))
}

pub(crate) fn minimal_indices(points: &[ValueVec]) -> Vec<usize> {
    antichain_indices(points, |a, b| b.pareto_dominates(a))
}

// `beats(a, b)` is true when `a` should evict `b`.
fn antichain_indices(points: &[ValueVec], beats: impl Fn(&ValueVec, &ValueVec) -> bool) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points.iter().enumerate().any(|(j, p)| {
                beats(p, &points[i]) || (j < i && *p == points[i])
            })
        })
        .collect()
}

/// Closed axis-aligned box `[nadir, ideal]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    nadir: ValueVec,
    ideal: ValueVec,
}

impl BoundingBox {
    pub fn new(nadir: ValueVec, ideal: ValueVec) -> Result<Self, GeometryError> {
        check_dims(&nadir, &ideal)?;
        for axis in 0..nadir.dim() {
            if ideal[axis] <= nadir[axis] {
                return Err(GeometryError::InvalidBox {
                    axis,
                    nadir: nadir[axis],
                    ideal: ideal[axis],
                });
            }
        }
        Ok(BoundingBox { nadir, ideal })
    }

    pub fn nadir(&self) -> &ValueVec {
        &self.nadir
    }

    pub fn ideal(&self) -> &ValueVec {
        &self.ideal
    }

    pub fn dim(&self) -> usize {
        self.nadir.dim()
    }

    pub fn span(&self, axis: usize) -> f64 {
        self.ideal[axis] - self.nadir[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|j| self.span(j)).product()
    }

    pub fn contains(&self, v: &ValueVec) -> Result<bool, GeometryError> {
        check_dims(&self.nadir, v)?;
        Ok((0..v.dim()).all(|j| self.nadir[j] <= v[j] && v[j] <= self.ideal[j]))
    }
}

pub fn box_contains(b: &BoundingBox, v: &ValueVec) -> Result<bool, GeometryError> {
    b.contains(v)
}

/// Initial points for an explicit set: per objective the maximiser (ties to
/// the lexicographically greatest, hence Pareto optimal) and the
/// componentwise minimum.
pub fn extreme_points(points: &[ValueVec]) -> Result<(Vec<ValueVec>, ValueVec), GeometryError> {
    let d = uniform_dim(points)?;
    let maxes = (0..d)
        .map(|j| {
            points
                .iter()
                .max_by(|a, b| a[j].total_cmp(&b[j]).then_with(|| a.lex_cmp(b)))
                .expect("non-empty")
                .clone()
        })
        .collect();
    let min = (0..d)
        .map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
        .collect();
    Ok((maxes, ValueVec::from_raw(min)))
}
