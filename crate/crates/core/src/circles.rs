//! Circles on the unit sphere dual to de Sitter points, inversive distances
//! and Gram-matrix Möbius equivalence.
//!
//! A Klein-exterior point `A` is the pole of the plane `u·A = 1`, which cuts
//! the unit sphere in the circle with center `A/|A|` and spherical radius
//! `arccos(1/|A|)`. With the inversive distance taken as
//! `(cos r₁ cos r₂ − cos l)/(sin r₁ sin r₂)` (tangent circles give 1,
//! orthogonal circles 0, identical circles −1), the inversive distance of two
//! dual circles equals `−<x,y>`.

use nalgebra::{DMatrix, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::lorentz::{hyperboloid_lift, klein_project, DeSitterPoint, LorentzMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCircle {
    center: Vector3<f64>,
    radius: f64,
}

impl SphericalCircle {
    pub fn new(center: Vector3<f64>, radius: f64) -> Result<Self> {
        if !((center.norm() - 1.0).abs() <= 1e-12) {
            return Err(GeomError::InvalidCircle(format!("center norm {}", center.norm())));
        }
        if !(radius > 0.0 && radius < std::f64::consts::PI) {
            return Err(GeomError::InvalidCircle(format!("radius {radius} outside (0, π)")));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> Vector3<f64> {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Spherical distance between the centers.
    pub fn center_distance(&self, other: &SphericalCircle) -> f64 {
        self.center.dot(&other.center).clamp(-1.0, 1.0).acos()
    }

    /// Canonical de Sitter lift, defined for radii below π/2.
    pub fn lift(&self) -> Result<DeSitterPoint> {
        if !(self.radius < std::f64::consts::FRAC_PI_2) {
            return Err(GeomError::InvalidCircle(format!(
                "radius {} has no Klein-exterior pole",
                self.radius
            )));
        }
        hyperboloid_lift(&(self.center / self.radius.cos()))
    }

    /// Point on the circle at angle `phi` in a fixed tangent frame.
    pub fn point_at(&self, phi: f64) -> Vector3<f64> {
        let c = self.center;
        let helper = if c.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = c.cross(&helper).normalize();
        let e2 = c.cross(&e1);
        c * self.radius.cos() + (e1 * phi.cos() + e2 * phi.sin()) * self.radius.sin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Tangent = 1, orthogonal = 0, identical = −1.
    #[default]
    Corrected,
    /// The opposite global sign.
    PaperVerbatim,
}

impl Convention {
    pub fn apply(self, corrected: f64) -> f64 {
        match self {
            Convention::Corrected => corrected,
            Convention::PaperVerbatim => -corrected,
        }
    }
}

pub fn dual_circle(x: &DeSitterPoint) -> SphericalCircle {
    let a = klein_project(x);
    let norm = a.norm();
    SphericalCircle { center: a / norm, radius: (1.0 / norm).acos() }
}

/// Inversive distance from the center distance `l` and the two radii.
pub fn inversive_from_lengths(l: f64, r1: f64, r2: f64) -> f64 {
    (r1.cos() * r2.cos() - l.cos()) / (r1.sin() * r2.sin())
}

pub fn inversive_distance(c1: &SphericalCircle, c2: &SphericalCircle) -> f64 {
    inversive_distance_with(c1, c2, Convention::Corrected)
}

pub fn inversive_distance_with(c1: &SphericalCircle, c2: &SphericalCircle, conv: Convention) -> f64 {
    let cos_l = c1.center.dot(&c2.center).clamp(-1.0, 1.0);
    let value = (c1.radius.cos() * c2.radius.cos() - cos_l) / (c1.radius.sin() * c2.radius.sin());
    conv.apply(value)
}

pub fn inversive_distance_via_gram(x: &DeSitterPoint, y: &DeSitterPoint) -> f64 {
    -x.inner(y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleConfiguration {
    circles: Vec<SphericalCircle>,
    lifts: Vec<DeSitterPoint>,
}

impl CircleConfiguration {
    pub fn from_lifts(lifts: Vec<DeSitterPoint>) -> Self {
        let circles = lifts.iter().map(dual_circle).collect();
        Self { circles, lifts }
    }

    pub fn from_circles(circles: Vec<SphericalCircle>) -> Result<Self> {
        let lifts = circles.iter().map(|c| c.lift()).collect::<Result<Vec<_>>>()?;
        Ok(Self { circles, lifts })
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn circles(&self) -> &[SphericalCircle] {
        &self.circles
    }

    pub fn lifts(&self) -> &[DeSitterPoint] {
        &self.lifts
    }

    /// Image under a form-preserving map that keeps every lift on the upper sheet.
    pub fn transformed(&self, map: &LorentzMap) -> Result<Self> {
        let lifts = self
            .lifts
            .iter()
            .map(|x| DeSitterPoint::with_tolerance(map.apply(x.vec()), 1e-10))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_lifts(lifts))
    }

    /// Rank of the n×4 matrix of lifts.
    pub fn lift_rank(&self) -> usize {
        if self.lifts.is_empty() {
            return 0;
        }
        let m = DMatrix::from_fn(self.lifts.len(), 4, |i, j| self.lifts[i].vec().to_array()[j]);
        let sv = m.singular_values();
        let smax = sv.max();
        sv.iter().filter(|&&s| s > 1e-9 * smax).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(pub DMatrix<f64>);

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn max_abs_diff(&self, other: &GramMatrix) -> f64 {
        (&self.0 - &other.0).amax()
    }
}

pub fn gram_matrix(config: &CircleConfiguration) -> GramMatrix {
    let n = config.len();
    GramMatrix(DMatrix::from_fn(n, n, |i, j| config.lifts[i].inner(&config.lifts[j])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MobiusVerdict {
    Equivalent {
        permutation: Vec<usize>,
        max_deviation: f64,
    },
    Inequivalent {
        /// Relabeling with the smallest worst-entry deviation.
        best_permutation: Vec<usize>,
        /// `min_σ max_{i,j} |G1[i,j] − G2[σi,σj]|`.
        min_max_deviation: f64,
        /// Entry `(i, j)` realizing the deviation for the best relabeling.
        witness: (usize, usize),
    },
}

impl MobiusVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, MobiusVerdict::Equivalent { .. })
    }

    pub fn deviation(&self) -> f64 {
        match self {
            MobiusVerdict::Equivalent { max_deviation, .. } => *max_deviation,
            MobiusVerdict::Inequivalent { min_max_deviation, .. } => *min_max_deviation,
        }
    }
}

/// Möbius equivalence up to the relabelings in `autos`, decided on Gram
/// matrices. Both configurations must have lifts spanning R⁴₁.
pub fn mobius_equivalent(
    cfg1: &CircleConfiguration,
    cfg2: &CircleConfiguration,
    autos: &[Vec<usize>],
    tol: f64,
) -> Result<MobiusVerdict> {
    let n = cfg1.len();
    if cfg2.len() != n {
        return Err(GeomError::SizeMismatch(n, cfg2.len()));
    }
    for cfg in [cfg1, cfg2] {
        let rank = cfg.lift_rank();
        if rank < 4 {
            return Err(GeomError::RankDeficient { rank });
        }
    }
    let identity: Vec<usize> = (0..n).collect();
    let candidates: Vec<&Vec<usize>> = if autos.is_empty() { vec![&identity] } else { autos.iter().collect() };
    let (g1, g2) = (gram_matrix(cfg1), gram_matrix(cfg2));

    let mut best: Option<(f64, &Vec<usize>, (usize, usize))> = None;
    for sigma in candidates {
        let mut worst = (0.0, (0, 0));
        for i in 0..n {
            for j in i..n {
                let dev = (g1.get(i, j) - g2.get(sigma[i], sigma[j])).abs();
                if dev > worst.0 {
                    worst = (dev, (i, j));
                }
            }
        }
        if best.is_none_or(|b| worst.0 < b.0) {
            best = Some((worst.0, sigma, worst.1));
        }
    }
    let (dev, sigma, witness) = best.expect("at least one candidate");
    Ok(if dev <= tol {
        MobiusVerdict::Equivalent { permutation: sigma.clone(), max_deviation: dev }
    } else {
        MobiusVerdict::Inequivalent { best_permutation: sigma.clone(), min_max_deviation: dev, witness }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::LorentzVec;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn circle(c: [f64; 3], r: f64) -> SphericalCircle {
        SphericalCircle::new(Vector3::from(c).normalize(), r).unwrap()
    }

    #[test]
    fn dual_circle_examples() {
        let x = hyperboloid_lift(&Vector3::new(2.0, 0.0, 0.0)).unwrap();
        let c = dual_circle(&x);
        assert!((c.center() - Vector3::x()).norm() < 1e-15);
        assert!((c.radius() - FRAC_PI_3).abs() < 1e-15);

        let near = hyperboloid_lift(&Vector3::new(1.0 + 1e-8, 0.0, 0.0)).unwrap();
        assert!(dual_circle(&near).radius() < 2e-4);
    }

    #[test]
    fn dual_circle_lies_on_polar_plane() {
        let a = Vector3::new(0.7, -1.3, 0.4);
        let c = dual_circle(&hyperboloid_lift(&a).unwrap());
        for k in 0..16 {
            let u = c.point_at(k as f64 * 0.4);
            assert!((u.norm() - 1.0).abs() < 1e-12);
            assert!((u.dot(&a) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn inversive_distance_examples() {
        let c = circle([0.0, 0.0, 1.0], 0.4);
        assert!((inversive_distance(&c, &c) + 1.0).abs() < 1e-12);

        let p = circle([1.0, 0.0, 0.0], FRAC_PI_4);
        let q = circle([0.0, 1.0, 0.0], FRAC_PI_4);
        assert!((inversive_distance(&p, &q) - 1.0).abs() < 1e-15);
        assert!((inversive_distance_with(&p, &q, Convention::PaperVerbatim) + 1.0).abs() < 1e-15);

        // cos l = cos r1 cos r2
        let (r1, r2) = (0.5f64, 0.9f64);
        let l = (r1.cos() * r2.cos()).acos();
        let o1 = circle([1.0, 0.0, 0.0], r1);
        let o2 = SphericalCircle::new(Vector3::new(l.cos(), l.sin(), 0.0), r2).unwrap();
        assert!(inversive_distance(&o1, &o2).abs() < 1e-15);
    }

    #[test]
    fn inversive_distance_of_opposite_duals() {
        let x = hyperboloid_lift(&Vector3::new(2.0, 0.0, 0.0)).unwrap();
        let y = hyperboloid_lift(&Vector3::new(-2.0, 0.0, 0.0)).unwrap();
        let i = inversive_distance(&dual_circle(&x), &dual_circle(&y));
        assert!((i - 5.0 / 3.0).abs() < 1e-12);
        assert!((inversive_distance_via_gram(&x, &y) - 5.0 / 3.0).abs() < 1e-15);
        assert!((i - (2.0 * 0.5f64.atanh()).cosh()).abs() < 1e-12);
        assert!((inversive_distance_via_gram(&x, &x) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn circle_lift_round_trip() {
        let c = circle([0.3, 0.4, -0.2], 0.7);
        let back = dual_circle(&c.lift().unwrap());
        assert!((back.center() - c.center()).norm() < 1e-12);
        assert!((back.radius() - c.radius()).abs() < 1e-12);
        assert!(circle([1.0, 0.0, 0.0], FRAC_PI_2 + 0.1).lift().is_err());
    }

    #[test]
    fn circle_validation() {
        assert!(SphericalCircle::new(Vector3::new(2.0, 0.0, 0.0), 0.1).is_err());
        assert!(SphericalCircle::new(Vector3::x(), 0.0).is_err());
        assert!(SphericalCircle::new(Vector3::x(), 3.2).is_err());
    }

    fn octahedral_config() -> CircleConfiguration {
        let centers = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let radii = [0.6, 0.7, 0.65, 0.5, 0.72, 0.55];
        CircleConfiguration::from_circles(
            centers.iter().zip(radii).map(|(c, r)| circle(*c, r)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn gram_matrix_basics() {
        let single = CircleConfiguration::from_lifts(vec![
            DeSitterPoint::new(LorentzVec::new(1.0, 2f64.sqrt(), 0.0, 0.0)).unwrap(),
        ]);
        let g = gram_matrix(&single);
        assert_eq!(g.size(), 1);
        assert!((g.get(0, 0) - 1.0).abs() < 1e-15);

        let cfg = octahedral_config();
        let g = gram_matrix(&cfg);
        for i in 0..6 {
            assert!((g.get(i, i) - 1.0).abs() < 1e-12);
            for j in 0..6 {
                assert_eq!(g.get(i, j), g.get(j, i));
            }
        }
    }

    #[test]
    fn gram_is_lorentz_invariant() {
        let cfg = octahedral_config();
        let map = LorentzMap::boost(&Vector3::new(0.2, -0.4, 1.0), 0.3)
            .compose(&LorentzMap::rotation(&Vector3::new(1.0, 1.0, 1.0), 0.8));
        let moved = cfg.transformed(&map).unwrap();
        assert!(gram_matrix(&cfg).max_abs_diff(&gram_matrix(&moved)) <= 1e-10);

        let id: Vec<usize> = (0..6).collect();
        let v = mobius_equivalent(&cfg, &moved, std::slice::from_ref(&id), 1e-10).unwrap();
        assert!(v.is_equivalent());
        assert!(mobius_equivalent(&cfg, &cfg, &[id], 1e-10).unwrap().is_equivalent());
    }

    #[test]
    fn mobius_detects_changed_radius_and_relabeling() {
        let cfg = octahedral_config();
        let mut circles = cfg.circles().to_vec();
        circles[4] = circle([0.0, 0.0, 1.0], 0.75);
        let other = CircleConfiguration::from_circles(circles).unwrap();
        let id: Vec<usize> = (0..6).collect();
        match mobius_equivalent(&cfg, &other, std::slice::from_ref(&id), 1e-10).unwrap() {
            MobiusVerdict::Inequivalent { witness, min_max_deviation, .. } => {
                assert!(witness.0 == 4 || witness.1 == 4);
                assert!(min_max_deviation > 1e-3);
            }
            v => panic!("expected inequivalent, got {v:?}"),
        }

        // swapping labels 0 and 1 is undone by the matching permutation
        let mut swapped = cfg.circles().to_vec();
        swapped.swap(0, 1);
        let swapped = CircleConfiguration::from_circles(swapped).unwrap();
        assert!(!mobius_equivalent(&cfg, &swapped, std::slice::from_ref(&id), 1e-10).unwrap().is_equivalent());
        let sigma = vec![1, 0, 2, 3, 4, 5];
        assert!(mobius_equivalent(&cfg, &swapped, &[id, sigma], 1e-10).unwrap().is_equivalent());
    }

    #[test]
    fn mobius_rejects_low_rank() {
        let flat = CircleConfiguration::from_circles(vec![
            circle([1.0, 0.0, 0.0], 0.3),
            circle([0.0, 1.0, 0.0], 0.3),
            circle([-1.0, 0.0, 0.0], 0.3),
        ])
        .unwrap();
        assert!(matches!(
            mobius_equivalent(&flat, &flat, &[], 1e-10),
            Err(GeomError::RankDeficient { .. })
        ));
    }
}
