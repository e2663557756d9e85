//! Minkowski space R⁴₁ with the (−,+,+,+) form, the hyperbolic and upper de
//! Sitter hyperboloids, and their Klein projective charts.
//!
//! A point `A` of R³ outside the closed unit ball corresponds to exactly one
//! point of the upper de Sitter sheet, its canonical lift `(1, A)/√(|A|²−1)`.
//! The Klein chart `x ↦ (x1, x2, x3)/x0` inverts the lift.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, Rotation3, Unit, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::tolerance::{EPS_BALL, EPS_MODEL};

/// Points of R³ in unit-ball scale.
pub type EuclideanPoint3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorentzVec {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl LorentzVec {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub fn from_parts(x0: f64, spatial: &Vector3<f64>) -> Self {
        Self::new(x0, spatial.x, spatial.y, spatial.z)
    }

    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.x1, self.x2, self.x3)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn to_vector4(&self) -> Vector4<f64> {
        Vector4::new(self.x0, self.x1, self.x2, self.x3)
    }

    pub fn from_vector4(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn inner(&self, other: &LorentzVec) -> f64 {
        minkowski_inner(self, other)
    }

    /// Minkowski square `<x,x>`.
    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn max_abs_diff(&self, other: &LorentzVec) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for LorentzVec {
    type Output = LorentzVec;
    fn add(self, o: LorentzVec) -> LorentzVec {
        LorentzVec::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for LorentzVec {
    type Output = LorentzVec;
    fn sub(self, o: LorentzVec) -> LorentzVec {
        LorentzVec::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Mul<f64> for LorentzVec {
    type Output = LorentzVec;
    fn mul(self, s: f64) -> LorentzVec {
        LorentzVec::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Neg for LorentzVec {
    type Output = LorentzVec;
    fn neg(self) -> LorentzVec {
        self * -1.0
    }
}

/// `−x0y0 + x1y1 + x2y2 + x3y3`.
pub fn minkowski_inner(x: &LorentzVec, y: &LorentzVec) -> f64 {
    -x.x0 * y.x0 + x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3
}

/// A point of the upper de Sitter sheet `<v,v> = 1, x0 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LorentzVec", into = "LorentzVec")]
pub struct DeSitterPoint(LorentzVec);

impl DeSitterPoint {
    pub fn new(v: LorentzVec) -> Result<Self> {
        Self::with_tolerance(v, EPS_MODEL)
    }

    pub fn with_tolerance(v: LorentzVec, eps_model: f64) -> Result<Self> {
        let norm_sq = v.norm_sq();
        if !v.is_finite() || (norm_sq - 1.0).abs() > eps_model || v.x0 <= 0.0 {
            return Err(GeomError::NotDeSitter { norm_sq, x0: v.x0 });
        }
        Ok(Self(v))
    }

    /// Canonical lift of a Klein-exterior point.
    pub fn lift(a: &EuclideanPoint3) -> Result<Self> {
        hyperboloid_lift(a)
    }

    pub fn vec(&self) -> &LorentzVec {
        &self.0
    }

    pub fn inner(&self, other: &DeSitterPoint) -> f64 {
        self.0.inner(&other.0)
    }

    pub fn klein(&self) -> EuclideanPoint3 {
        klein_project(self)
    }
}

impl TryFrom<LorentzVec> for DeSitterPoint {
    type Error = GeomError;
    fn try_from(v: LorentzVec) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DeSitterPoint> for LorentzVec {
    fn from(p: DeSitterPoint) -> LorentzVec {
        p.0
    }
}

/// A point of the upper hyperbolic sheet `<v,v> = −1, x0 > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicPoint(LorentzVec);

impl HyperbolicPoint {
    pub fn new(v: LorentzVec) -> Result<Self> {
        let norm_sq = v.norm_sq();
        if !v.is_finite() || (norm_sq + 1.0).abs() > EPS_MODEL || v.x0 <= 0.0 {
            return Err(GeomError::NotHyperbolic { norm_sq, x0: v.x0 });
        }
        Ok(Self(v))
    }

    /// Inverse of the Klein chart for a point strictly inside the ball.
    pub fn from_klein(p: &EuclideanPoint3) -> Result<Self> {
        let r2 = p.norm_squared();
        if r2 >= 1.0 {
            return Err(GeomError::NotHyperbolic { norm_sq: f64::NAN, x0: f64::NAN });
        }
        let s = 1.0 / (1.0 - r2).sqrt();
        Self::new(LorentzVec::from_parts(s, &(p * s)))
    }

    pub fn vec(&self) -> &LorentzVec {
        &self.0
    }
}

/// Inverse of the Klein chart on the exterior of the unit ball, with the
/// default ball margin.
pub fn hyperboloid_lift(a: &EuclideanPoint3) -> Result<DeSitterPoint> {
    hyperboloid_lift_with(a, EPS_BALL)
}

pub fn hyperboloid_lift_with(a: &EuclideanPoint3, eps_ball: f64) -> Result<DeSitterPoint> {
    let norm = a.norm();
    if !(norm - 1.0 >= eps_ball) {
        return Err(GeomError::PointInsideBall { point: [a.x, a.y, a.z], norm });
    }
    // |A|² − 1 = (|A| − 1)(|A| + 1) keeps precision close to the sphere.
    let s = 1.0 / ((norm - 1.0) * (norm + 1.0)).sqrt();
    Ok(DeSitterPoint(LorentzVec::from_parts(s, &(a * s))))
}

pub fn klein_project(x: &DeSitterPoint) -> EuclideanPoint3 {
    x.0.spatial() / x.0.x0
}

pub fn klein_project_hyperbolic(x: &HyperbolicPoint) -> EuclideanPoint3 {
    x.0.spatial() / x.0.x0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationClass {
    TimeLike,
    SpaceLike,
    Coincident,
    DegenerateTangent,
}

/// Sign of `<x,y>` for a time-like pair: `Aligned` when `<x,y> > 1`,
/// `AntiAligned` when `<x,y> < −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignFlag {
    Aligned,
    AntiAligned,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DsSeparation {
    pub class: SeparationClass,
    /// `arcosh|q|` for time-like pairs, `arccos q` (the modulus of the
    /// imaginary distance) for space-like pairs.
    pub value: f64,
    pub sign_flag: Option<SignFlag>,
}

pub fn ds_separation(x: &DeSitterPoint, y: &DeSitterPoint) -> DsSeparation {
    ds_separation_with(x, y, EPS_MODEL)
}

pub fn ds_separation_with(x: &DeSitterPoint, y: &DeSitterPoint, eps_model: f64) -> DsSeparation {
    if x.0.max_abs_diff(&y.0) <= eps_model {
        return DsSeparation { class: SeparationClass::Coincident, value: 0.0, sign_flag: None };
    }
    let q = x.inner(y);
    if (q.abs() - 1.0).abs() <= eps_model {
        return DsSeparation {
            class: SeparationClass::DegenerateTangent,
            value: 0.0,
            sign_flag: None,
        };
    }
    if q > 1.0 {
        DsSeparation {
            class: SeparationClass::TimeLike,
            value: q.acosh(),
            sign_flag: Some(SignFlag::Aligned),
        }
    } else if q < -1.0 {
        DsSeparation {
            class: SeparationClass::TimeLike,
            value: (-q).acosh(),
            sign_flag: Some(SignFlag::AntiAligned),
        }
    } else {
        DsSeparation { class: SeparationClass::SpaceLike, value: q.acos(), sign_flag: None }
    }
}

/// A linear map of R⁴ in the (x0, x1, x2, x3) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMap(pub Matrix4<f64>);

impl LorentzMap {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Spatial rotation by `angle` about `axis`.
    pub fn rotation(axis: &Vector3<f64>, angle: f64) -> Self {
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle);
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(r.matrix());
        Self(m)
    }

    /// Spatial reflection `x_k ↦ −x_k` (time orientation preserved).
    pub fn reflection(k: usize) -> Self {
        let mut m = Matrix4::identity();
        m[(k + 1, k + 1)] = -1.0;
        Self(m)
    }

    /// Boost with the given rapidity along `direction`.
    pub fn boost(direction: &Vector3<f64>, rapidity: f64) -> Self {
        let n = direction.normalize();
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = ch;
        for i in 0..3 {
            m[(0, i + 1)] = sh * n[i];
            m[(i + 1, 0)] = sh * n[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] += (ch - 1.0) * n[i] * n[j];
            }
        }
        Self(m)
    }

    pub fn compose(&self, other: &LorentzMap) -> Self {
        Self(self.0 * other.0)
    }

    pub fn apply(&self, v: &LorentzVec) -> LorentzVec {
        LorentzVec::from_vector4(&(self.0 * v.to_vector4()))
    }

    /// Maximum entry of `MᵀJM − J`.
    pub fn form_defect(&self) -> f64 {
        let j = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
        (self.0.transpose() * j * self.0 - j).amax()
    }

    pub fn preserves_form(&self, tol: f64) -> bool {
        self.form_defect() <= tol
    }

    pub fn is_time_orientation_preserving(&self) -> bool {
        self.0[(0, 0)] > 0.0
    }
}
