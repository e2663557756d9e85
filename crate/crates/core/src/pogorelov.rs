//! The de Sitter Pogorelov map
//!
//! ```text
//! Φ(x, y) = 2 (x⃗, y⃗) / (x0 + y0)
//! ```
//!
//! from pairs of upper de Sitter points to pairs of points of R³, its
//! inverse, and sampled checks of its transport properties.
//!
//! For pairs `(xᵢ, yᵢ) = Φ⁻¹(ξᵢ, ηᵢ)` one has
//!
//! ```text
//! <xᵢ,xⱼ> − <yᵢ,yⱼ> = −(sᵢsⱼ/8) (|ξᵢ−ξⱼ|² − |ηᵢ−ηⱼ|²),   sᵢ = x0ᵢ + y0ᵢ,
//! ```
//!
//! so equal de Sitter products correspond exactly to equal Euclidean
//! distances between the two factors.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::lorentz::{
    ds_separation, klein_project, DeSitterPoint, EuclideanPoint3, LorentzMap, LorentzVec,
    SeparationClass,
};
use crate::sampling;
use crate::tolerance::{EPS_MODEL, EQUALITY, ISOMETRY_FIT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointPairE3 {
    pub xi: EuclideanPoint3,
    pub eta: EuclideanPoint3,
}

impl PointPairE3 {
    pub fn new(xi: EuclideanPoint3, eta: EuclideanPoint3) -> Self {
        Self { xi, eta }
    }

    pub fn diagonal(p: EuclideanPoint3) -> Self {
        Self { xi: p, eta: p }
    }

    /// `|ξ|² − |η|²`
    pub fn norm_gap(&self) -> f64 {
        self.xi.norm_squared() - self.eta.norm_squared()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointPairDS {
    pub first: DeSitterPoint,
    pub second: DeSitterPoint,
}

impl PointPairDS {
    pub fn new(first: DeSitterPoint, second: DeSitterPoint) -> Self {
        Self { first, second }
    }
}

pub fn phi(pair: &PointPairDS) -> PointPairE3 {
    let (x, y) = (pair.first.vec(), pair.second.vec());
    let s = 2.0 / (x.x0 + y.x0);
    PointPairE3 { xi: x.spatial() * s, eta: y.spatial() * s }
}

/// `g(a, b) = −(a² − b²)² + 8(a² + b² − 2)`; positive exactly when the
/// pre-normalized vectors of the inverse map are space-like.
pub fn domain_g(a: f64, b: f64) -> f64 {
    let d = a * a - b * b;
    -d * d + 8.0 * (a * a + b * b - 2.0)
}

pub fn in_phi_image(pair: &PointPairE3) -> bool {
    let (a, b) = (pair.xi.norm(), pair.eta.norm());
    let gap = pair.norm_gap();
    let inside = a > 1.0 && b > 1.0 && gap > -4.0 && gap < 4.0;
    if inside {
        assert!(domain_g(a, b) > 0.0, "g({a}, {b}) must be positive on the Φ-image");
    }
    inside
}

/// Positive rescaling onto `<v,v> = 1`.
fn normalize_space_like(v: LorentzVec) -> Result<DeSitterPoint> {
    let n2 = v.norm_sq();
    if !(n2 > 0.0) || !(v.x0 > 0.0) {
        return Err(GeomError::NormalizationFailure { norm_sq: n2 });
    }
    DeSitterPoint::new(v * (1.0 / n2.sqrt()))
}

/// Inverse of [`phi`]: `(ρ(4 + |ξ|² − |η|², 4ξ), ρ(4 − |ξ|² + |η|², 4η))`.
pub fn phi_inverse(pair: &PointPairE3) -> Result<PointPairDS> {
    if !in_phi_image(pair) {
        return Err(GeomError::OutOfDomain { difference: pair.norm_gap() });
    }
    let gap = pair.norm_gap();
    let first = normalize_space_like(LorentzVec::from_parts(4.0 + gap, &(pair.xi * 4.0)))?;
    let second = normalize_space_like(LorentzVec::from_parts(4.0 - gap, &(pair.eta * 4.0)))?;
    Ok(PointPairDS { first, second })
}

/// Best orthogonal map `R` and translation `c` with `R·yᵢ + c ≈ y'ᵢ`
/// (orthogonal Procrustes on centred point sets; reflections allowed).
pub fn fit_rigid_motion(
    from: &[EuclideanPoint3],
    to: &[EuclideanPoint3],
) -> (Matrix3<f64>, Vector3<f64>) {
    assert_eq!(from.len(), to.len());
    let n = from.len() as f64;
    let cf = from.iter().sum::<Vector3<f64>>() / n;
    let ct = to.iter().sum::<Vector3<f64>>() / n;
    let mut h = Matrix3::zeros();
    for (p, q) in from.iter().zip(to) {
        h += (p - cf) * (q - ct).transpose();
    }
    let svd = h.svd(true, true);
    let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
    let r = v_t.transpose() * u.transpose();
    (r, ct - r * cf)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryTransportReport {
    pub samples: usize,
    pub rejected: usize,
    pub max_residual: f64,
    pub threshold: f64,
    /// Row-major fitted orthogonal part of β.
    pub rotation: [[f64; 3]; 3],
    pub translation: [f64; 3],
    pub determinant: f64,
    pub passed: bool,
}

/// Samples `x` with `x, α(x)` on the upper sheet, forms `Φ(x, α(x)) = (y, y')`
/// and fits a Euclidean isometry `β` with `y' = β(y)`.
pub fn verify_isometry_transport(
    alpha: &LorentzMap,
    samples: usize,
    seed: u64,
) -> Result<IsometryTransportReport> {
    if !alpha.preserves_form(1e-10) || !alpha.is_time_orientation_preserving() {
        return Err(GeomError::InvalidParams(
            "alpha must preserve the Minkowski form and have positive (0,0) entry".into(),
        ));
    }
    let mut rng = sampling::rng(seed);
    let (mut from, mut to) = (Vec::new(), Vec::new());
    let mut rejected = 0;
    let mut attempts = 0;
    while from.len() < samples && attempts < 20 * samples.max(1) {
        attempts += 1;
        let x = sampling::de_sitter_point(&mut rng, 1.05, 3.0);
        let image = alpha.apply(x.vec());
        let Ok(ax) = DeSitterPoint::with_tolerance(image, 1e-10) else {
            rejected += 1;
            continue;
        };
        if !in_phi_image(&PointPairE3::new(klein_project(&x), klein_project(&ax))) {
            rejected += 1;
            continue;
        }
        let PointPairE3 { xi, eta } = phi(&PointPairDS::new(x, ax));
        from.push(xi);
        to.push(eta);
    }
    if from.len() < 4 {
        return Err(GeomError::InsufficientSamples { found: from.len(), needed: 4 });
    }
    let (r, c) = fit_rigid_motion(&from, &to);
    let max_residual = from
        .iter()
        .zip(&to)
        .map(|(p, q)| (r * p + c - q).norm())
        .fold(0.0, f64::max);
    let mut rotation = [[0.0; 3]; 3];
    for (i, row) in rotation.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = r[(i, j)];
        }
    }
    Ok(IsometryTransportReport {
        samples: from.len(),
        rejected,
        max_residual,
        threshold: ISOMETRY_FIT,
        rotation,
        translation: [c.x, c.y, c.z],
        determinant: r.determinant(),
        passed: max_residual <= ISOMETRY_FIT,
    })
}

/// `| |p₁Φ(x,x′) − p₁Φ(y,y′)| − |p₂Φ(x,x′) − p₂Φ(y,y′)| |`
pub fn segment_transport_deviation(
    x: &DeSitterPoint,
    y: &DeSitterPoint,
    x2: &DeSitterPoint,
    y2: &DeSitterPoint,
) -> f64 {
    let px = phi(&PointPairDS::new(*x, *x2));
    let py = phi(&PointPairDS::new(*y, *y2));
    ((px.xi - py.xi).norm() - (px.eta - py.eta).norm()).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportReport {
    pub checked: usize,
    pub discarded: usize,
    pub max_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Reasons for discarded samples.
    pub log: Vec<String>,
}

impl TransportReport {
    fn finish(checked: usize, discarded: usize, max_deviation: f64, log: Vec<String>) -> Self {
        Self {
            checked,
            discarded,
            max_deviation,
            threshold: EQUALITY,
            passed: checked > 0 && max_deviation <= EQUALITY,
            log,
        }
    }
}

/// For each time-like segment `[x, y]`, draws a seeded time-orientation
/// preserving Lorentz map `α`, sets `[x′, y′] = α[x, y]` (same length) and
/// compares the Euclidean lengths of the two Φ-factors.
pub fn verify_timelike_length_transport(
    segments: &[(DeSitterPoint, DeSitterPoint)],
    seed: u64,
) -> Result<TransportReport> {
    let mut rng = sampling::rng(seed);
    let (mut checked, mut discarded, mut worst) = (0, 0, 0.0f64);
    let mut log = Vec::new();
    for (k, (x, y)) in segments.iter().enumerate() {
        let sep = ds_separation(x, y);
        if sep.class != SeparationClass::TimeLike {
            return Err(GeomError::NotTimeLike(format!("segment {k}: {:?}", sep.class)));
        }
        let alpha = sampling::orthochronous_map(&mut rng, 0.5);
        let moved = (
            DeSitterPoint::with_tolerance(alpha.apply(x.vec()), 1e-10),
            DeSitterPoint::with_tolerance(alpha.apply(y.vec()), 1e-10),
        );
        let (Ok(x2), Ok(y2)) = moved else {
            discarded += 1;
            log.push(format!("segment {k}: image left the upper sheet"));
            continue;
        };
        checked += 1;
        worst = worst.max(segment_transport_deviation(x, y, &x2, &y2));
    }
    Ok(TransportReport::finish(checked, discarded, worst, log))
}

/// `s ↦ cos(θs)·start + sin(θs)·tangent` with `<tangent,tangent> = 1` and
/// `<start,tangent> = 0`; θ is the speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacelikeGeodesic {
    pub start: DeSitterPoint,
    pub tangent: LorentzVec,
    pub speed: f64,
}

impl SpacelikeGeodesic {
    /// Projects `direction` onto the tangent space at `start`; fails unless
    /// the projection is space-like.
    pub fn new(start: DeSitterPoint, direction: LorentzVec, speed: f64) -> Result<Self> {
        let u = direction - *start.vec() * direction.inner(start.vec());
        let n2 = u.norm_sq();
        if !(n2 > EPS_MODEL) {
            return Err(GeomError::NotTimeLike(format!(
                "tangent has Minkowski square {n2}, not space-like"
            )));
        }
        Ok(Self { start, tangent: u * (1.0 / n2.sqrt()), speed })
    }

    pub fn at(&self, s: f64) -> Result<DeSitterPoint> {
        let (c, sn) = ((self.speed * s).cos(), (self.speed * s).sin());
        DeSitterPoint::with_tolerance(*self.start.vec() * c + self.tangent * sn, 1e-10)
    }
}

pub const SPEED_SAMPLES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedDeviation {
    /// Largest distance of an image point to the chord through its endpoints.
    pub collinearity: f64,
    /// Largest mismatch between consecutive gaps of the two factors.
    pub speed: f64,
}

fn chord_deviation(points: &[EuclideanPoint3]) -> f64 {
    let (p, q) = (points[0], points[points.len() - 1]);
    let d = q - p;
    let len = d.norm();
    points
        .iter()
        .map(|x| {
            if len < 1e-14 {
                (x - p).norm()
            } else {
                (x - p).cross(&d).norm() / len
            }
        })
        .fold(0.0, f64::max)
}

/// Image of two equal-speed geodesics under `p₁Φ` and `p₂Φ` at
/// [`SPEED_SAMPLES`].
pub fn speed_transport_deviation(
    g1: &SpacelikeGeodesic,
    g2: &SpacelikeGeodesic,
) -> Result<SpeedDeviation> {
    let mut first = Vec::with_capacity(SPEED_SAMPLES.len());
    let mut second = Vec::with_capacity(SPEED_SAMPLES.len());
    for &s in &SPEED_SAMPLES {
        let img = phi(&PointPairDS::new(g1.at(s)?, g2.at(s)?));
        first.push(img.xi);
        second.push(img.eta);
    }
    let speed = first
        .windows(2)
        .zip(second.windows(2))
        .map(|(a, b)| ((a[1] - a[0]).norm() - (b[1] - b[0]).norm()).abs())
        .fold(0.0, f64::max);
    Ok(SpeedDeviation {
        collinearity: chord_deviation(&first).max(chord_deviation(&second)),
        speed,
    })
}

fn random_geodesic<R: Rng>(rng: &mut R, speed: f64) -> Result<SpacelikeGeodesic> {
    loop {
        let start = sampling::de_sitter_point(rng, 1.2, 3.0);
        let w = LorentzVec::from_parts(
            rng.random_range(-0.3..0.3),
            &sampling::unit_vector(rng),
        );
        if let Ok(g) = SpacelikeGeodesic::new(start, w, speed) {
            return Ok(g);
        }
    }
}

/// Pairs of independent space-like geodesics with a shared seeded speed,
/// drawn until `samples` pairs stay on the upper sheet.
pub fn verify_spacelike_speed_transport(seed: u64, samples: usize) -> Result<TransportReport> {
    let mut rng = sampling::rng(seed);
    let (mut checked, mut discarded, mut worst) = (0, 0, 0.0f64);
    let mut log = Vec::new();
    let mut k = 0;
    while checked < samples && k < 20 * samples.max(1) {
        k += 1;
        let speed = rng.random_range(0.0..1.0);
        let g1 = random_geodesic(&mut rng, speed)?;
        let g2 = random_geodesic(&mut rng, speed)?;
        match speed_transport_deviation(&g1, &g2) {
            Ok(dev) => {
                checked += 1;
                worst = worst.max(dev.collinearity).max(dev.speed);
            }
            Err(e) => {
                discarded += 1;
                log.push(format!("sample {k}: {e}"));
            }
        }
    }
    Ok(TransportReport::finish(checked, discarded, worst, log))
}
