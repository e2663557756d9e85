//! Numerical tolerances shared by the kernel and the pipeline.

use serde::{Deserialize, Serialize};

/// Hyperboloid membership slack for `|<v,v> -/+ 1|`.
pub const EPS_MODEL: f64 = 1e-12;
/// Margin around the unit sphere for ball predicates.
pub const EPS_BALL: f64 = 1e-10;
/// "Equal" regime for derived quantities.
pub const EQUALITY: f64 = 1e-10;
/// Exact identities such as round trips and evenness.
pub const EXACT: f64 = 1e-12;
/// Lower bound for "distinct" quantities at t = 0.01.
pub const DISTINCT: f64 = 1e-4;
/// Curvature and Gauss-Bonnet residuals.
pub const CURVATURE: f64 = 1e-9;
/// Labeled distance-matrix comparison.
pub const CONGRUENCE: f64 = 1e-9;
/// Rigid fit residual for the isometry transport check.
pub const ISOMETRY_FIT: f64 = 1e-8;
/// Angle guard for degenerate triangles.
pub const DEGENERATE_SIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub model: f64,
    pub ball: f64,
    pub equality: f64,
    pub exact: f64,
    pub distinct: f64,
    pub curvature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            model: EPS_MODEL,
            ball: EPS_BALL,
            equality: EQUALITY,
            exact: EXACT,
            distinct: DISTINCT,
            curvature: CURVATURE,
        }
    }
}
