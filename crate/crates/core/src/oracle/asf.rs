use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::geometry::{BoundingBox, GeometryError, ValueVec};

pub const DEFAULT_RHO: f64 = 0.01;

/// Weights and augmentation strength of the augmented Chebyshev ASF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsfParams {
    lambda: ValueVec,
    rho: f64,
}

impl AsfParams {
    pub fn new(lambda: ValueVec, rho: f64) -> Result<Self, OracleError> {
        if let Some(j) = lambda.iter().position(|&l| l <= 0.0) {
            return Err(OracleError::InvalidParams(format!(
                "lambda[{j}] = {} is not positive",
                lambda[j]
            )));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(OracleError::InvalidParams(format!("rho = {rho} must be >= 0")));
        }
        Ok(AsfParams { lambda, rho })
    }

    /// Weights normalised to the bounding box.
    pub fn for_box(bbox: &BoundingBox, rho: f64) -> Result<Self, OracleError> {
        AsfParams::new(default_lambda(bbox), rho)
    }

    pub fn lambda(&self) -> &ValueVec {
        &self.lambda
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self, OracleError> {
        AsfParams::new(self.lambda.clone(), rho)
    }
}

/// `min_j λ_j (v_j - r_j) + ρ Σ_j λ_j (v_j - r_j)`
pub fn asf_chebyshev(v: &ValueVec, r: &ValueVec, params: &AsfParams) -> Result<f64, OracleError> {
    if v.dim() != r.dim() {
        return Err(GeometryError::DimensionMismatch(v.dim(), r.dim()).into());
    }
    if v.dim() != params.lambda.dim() {
        return Err(GeometryError::DimensionMismatch(v.dim(), params.lambda.dim()).into());
    }
    Ok(asf_unchecked(v, r, params))
}

pub(crate) fn asf_unchecked(v: &[f64], r: &[f64], params: &AsfParams) -> f64 {
    let mut min = f64::INFINITY;
    let mut sum = 0.0;
    for ((vj, rj), lj) in v.iter().zip(r).zip(params.lambda.iter()) {
        let term = lj * (vj - rj);
        min = min.min(term);
        sum += term;
    }
    if params.rho == 0.0 {
        min
    } else {
        min + params.rho * sum
    }
}

/// `λ_j = 1 / (ideal_j - nadir_j)`.
pub fn default_lambda(bbox: &BoundingBox) -> ValueVec {
    ValueVec::from_raw((0..bbox.dim()).map(|j| 1.0 / bbox.span(j)).collect())
}
