//! Seeded property suites over every module, as run by `prl verify`.

use nalgebra::Vector3;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circles::{dual_circle, gram_matrix, inversive_distance, inversive_from_lengths, CircleConfiguration};
use crate::flexahedron::{
    admissibility_check, build_schonhardt, diagonal_lengths, edge_lengths, first_order_flex_residual, flexed,
};
use crate::lorentz::{
    ds_separation, hyperboloid_lift, klein_project, klein_project_hyperbolic, DeSitterPoint, HyperbolicPoint,
    LorentzMap, LorentzVec, SeparationClass, SignFlag,
};
use crate::packing::{
    edge_length_euclidean, edge_length_spherical, gauss_bonnet_residual, octahedron, tetrahedron, Geometry,
    PolyhedralMetric,
};
use crate::pogorelov::{
    in_phi_image, phi, phi_inverse, verify_isometry_transport, verify_spacelike_speed_transport,
    verify_timelike_length_transport, PointPairDS, PointPairE3,
};
use crate::sampling::{self, de_sitter_point, orthochronous_map, shell_point, unit_vector};
use crate::tolerance::{CURVATURE, EPS_MODEL, EQUALITY, EXACT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub module: String,
    pub name: String,
    pub samples: usize,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn at_most(module: &str, name: &str, samples: usize, worst: f64, threshold: f64) -> Self {
        Self {
            module: module.into(),
            name: name.into(),
            samples,
            worst,
            threshold,
            passed: samples > 0 && worst <= threshold,
        }
    }
}

pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        bilinearity(seed, 1000),
        lift_norm(seed, 1000),
        klein_round_trip(seed, 100),
        hyperbolic_klein_image(seed, 100),
        chord_classification(seed, 1000),
        line_classification(seed, 1000),
        phi_round_trip_e3(seed, 1000),
        phi_round_trip_ds(seed, 1000),
        isometry_transport(seed, 200),
        timelike_transport(seed, 200),
        spacelike_transport(seed, 100),
        flex_evenness(),
        first_order_flex(),
        dual_inversive_identity(seed, 1000),
        gram_invariance(seed, 100),
        tangency_boundary(seed, 1000),
        edge_length_round_trip(),
        euclidean_limit(),
        gauss_bonnet(seed, 100),
    ]
}

fn random_lorentz<R: Rng>(rng: &mut R) -> LorentzVec {
    LorentzVec::new(
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
        rng.random_range(-3.0..3.0),
    )
}

fn abs_products(x: &LorentzVec, y: &LorentzVec) -> f64 {
    x.to_array().iter().zip(y.to_array()).map(|(a, b)| (a * b).abs()).sum()
}

/// Relative error of linearity in the first slot and of symmetry.
pub fn bilinearity(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (x, y, z) = (random_lorentz(&mut rng), random_lorentz(&mut rng), random_lorentz(&mut rng));
        let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let lhs = (x * a + y * b).inner(&z);
        let rhs = a * x.inner(&z) + b * y.inner(&z);
        let scale = a.abs() * abs_products(&x, &z) + b.abs() * abs_products(&y, &z) + abs_products(&(x * a + y * b), &z);
        worst = worst.max((lhs - rhs).abs() / scale.max(f64::MIN_POSITIVE));
        worst = worst.max((x.inner(&y) - y.inner(&x)).abs());
    }
    CheckOutcome::at_most("lorentz", "bilinearity and symmetry (relative)", n, worst, 1e-14)
}

pub fn lift_norm(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 1);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let a = shell_point(&mut rng, 1.001, 10.0);
        worst = worst.max(match hyperboloid_lift(&a) {
            Ok(x) if x.vec().x0 > 0.0 => (x.vec().norm_sq() - 1.0).abs(),
            _ => f64::INFINITY,
        });
    }
    CheckOutcome::at_most("lorentz", "lift lies on the upper de Sitter sheet", n, worst, EPS_MODEL)
}

/// `lift(klein(x)) = x` for de Sitter points with `x0 > 0` not built as lifts.
pub fn klein_round_trip(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 2);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let v = unit_vector(&mut rng) * rng.random_range(0.2..5.0);
        let x0 = rng.random_range(0.05..0.95) * v.norm();
        let raw = LorentzVec::from_parts(x0, &v);
        let x = DeSitterPoint::new(raw * (1.0 / raw.norm_sq().sqrt())).expect("normalized");
        worst = worst.max(match hyperboloid_lift(&klein_project(&x)) {
            Ok(y) => y.vec().max_abs_diff(x.vec()),
            Err(_) => f64::INFINITY,
        });
    }
    CheckOutcome::at_most("lorentz", "Klein projection round trip", n, worst, EXACT)
}

/// Largest Klein norm of hyperbolic points; must stay below 1.
pub fn hyperbolic_klein_image(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 3);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let v = unit_vector(&mut rng) * rng.random_range(0.0..5.0);
        let x = HyperbolicPoint::new(LorentzVec::from_parts((1.0 + v.norm_squared()).sqrt(), &v)).expect("on H³");
        worst = worst.max(klein_project_hyperbolic(&x).norm());
    }
    let mut out = CheckOutcome::at_most("lorentz", "hyperbolic Klein image inside the ball", n, worst, 1.0);
    out.passed = worst < 1.0;
    out
}

fn min_norm_sq(p: &Vector3<f64>, q: &Vector3<f64>, clamp: bool) -> f64 {
    let d = q - p;
    let s = -p.dot(&d) / d.norm_squared();
    let s = if clamp { s.clamp(0.0, 1.0) } else { s };
    (p + d * s).norm_squared()
}

fn exterior_pairs(seed: u64, n: usize) -> Vec<(Vector3<f64>, Vector3<f64>)> {
    let mut rng = sampling::rng(seed);
    (0..n).map(|_| (shell_point(&mut rng, 1.01, 3.0), shell_point(&mut rng, 1.01, 3.0))).collect()
}

/// Mismatches between "segment meets the open ball" and "time-like with
/// opposite time orientation". Near-tangent pairs are skipped.
pub fn chord_classification(seed: u64, n: usize) -> CheckOutcome {
    let mut mismatches = 0;
    let mut checked = 0;
    for (p, q) in exterior_pairs(seed ^ 4, n) {
        let m = min_norm_sq(&p, &q, true);
        let s = ds_separation(&hyperboloid_lift(&p).unwrap(), &hyperboloid_lift(&q).unwrap());
        if (m - 1.0).abs() < 1e-9 || s.class == SeparationClass::DegenerateTangent {
            continue;
        }
        checked += 1;
        let crosses = m < 1.0;
        let anti = s.class == SeparationClass::TimeLike && s.sign_flag == Some(SignFlag::AntiAligned);
        if crosses != anti {
            mismatches += 1;
        }
    }
    CheckOutcome::at_most("lorentz", "segment meets ball iff anti-aligned time-like", checked, mismatches as f64, 0.0)
}

/// Same for the full line through the two points and any time-like pair.
pub fn line_classification(seed: u64, n: usize) -> CheckOutcome {
    let mut mismatches = 0;
    let mut checked = 0;
    for (p, q) in exterior_pairs(seed ^ 5, n) {
        let m = min_norm_sq(&p, &q, false);
        let s = ds_separation(&hyperboloid_lift(&p).unwrap(), &hyperboloid_lift(&q).unwrap());
        if (m - 1.0).abs() < 1e-9 || s.class == SeparationClass::DegenerateTangent {
            continue;
        }
        checked += 1;
        if (m < 1.0) != (s.class == SeparationClass::TimeLike) {
            mismatches += 1;
        }
    }
    CheckOutcome::at_most("lorentz", "line meets ball iff time-like", checked, mismatches as f64, 0.0)
}

pub fn phi_round_trip_e3(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 6);
    let (mut checked, mut worst) = (0, 0.0f64);
    while checked < n {
        let pair = PointPairE3::new(shell_point(&mut rng, 1.05, 2.5), shell_point(&mut rng, 1.05, 2.5));
        if !in_phi_image(&pair) {
            continue;
        }
        checked += 1;
        worst = worst.max(match phi_inverse(&pair) {
            Ok(ds) => {
                let back = phi(&ds);
                (back.xi - pair.xi).amax().max((back.eta - pair.eta).amax())
            }
            Err(_) => f64::INFINITY,
        });
    }
    CheckOutcome::at_most("pogorelov", "phi(phi_inverse(p)) = p", checked, worst, EXACT)
}

pub fn phi_round_trip_ds(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 7);
    let (mut checked, mut worst) = (0, 0.0f64);
    let mut attempts = 0;
    while checked < n && attempts < 50 * n {
        attempts += 1;
        let pair = PointPairDS::new(de_sitter_point(&mut rng, 1.05, 3.0), de_sitter_point(&mut rng, 1.05, 3.0));
        let image = phi(&pair);
        if !in_phi_image(&image) {
            continue;
        }
        checked += 1;
        worst = worst.max(match phi_inverse(&image) {
            Ok(back) => back.first.vec().max_abs_diff(pair.first.vec()).max(back.second.vec().max_abs_diff(pair.second.vec())),
            Err(_) => f64::INFINITY,
        });
    }
    CheckOutcome::at_most("pogorelov", "phi_inverse(phi(x, y)) = (x, y)", checked, worst, EXACT)
}

/// A rotation, a boost and their composition.
pub fn transport_maps() -> [LorentzMap; 3] {
    let rot = LorentzMap::rotation(&Vector3::new(1.0, 2.0, 2.0).normalize(), 0.7);
    let boost = LorentzMap::boost(&Vector3::new(0.0, 1.0, 1.0).normalize(), 0.3);
    [rot, boost, rot.compose(&boost)]
}

pub fn isometry_transport(seed: u64, n: usize) -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for (k, alpha) in transport_maps().iter().enumerate() {
        match verify_isometry_transport(alpha, n, seed ^ (8 + k as u64)) {
            Ok(r) => {
                samples += r.samples;
                worst = worst.max(r.max_residual);
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    CheckOutcome::at_most("pogorelov", "isometries transport to Euclidean isometries", samples, worst, crate::tolerance::ISOMETRY_FIT)
}

pub fn timelike_segments(seed: u64, n: usize) -> Vec<(DeSitterPoint, DeSitterPoint)> {
    let mut rng = sampling::rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (x, y) = (de_sitter_point(&mut rng, 1.05, 3.0), de_sitter_point(&mut rng, 1.05, 3.0));
        if ds_separation(&x, &y).class == SeparationClass::TimeLike {
            out.push((x, y));
        }
    }
    out
}

pub fn timelike_transport(seed: u64, n: usize) -> CheckOutcome {
    let segments = timelike_segments(seed ^ 11, n);
    match verify_timelike_length_transport(&segments, seed ^ 12) {
        Ok(r) => CheckOutcome::at_most("pogorelov", "time-like lengths transport", r.checked, r.max_deviation, r.threshold),
        Err(_) => CheckOutcome::at_most("pogorelov", "time-like lengths transport", 0, f64::INFINITY, EQUALITY),
    }
}

pub fn spacelike_transport(seed: u64, n: usize) -> CheckOutcome {
    match verify_spacelike_speed_transport(seed ^ 13, n) {
        Ok(r) => CheckOutcome::at_most("pogorelov", "space-like speeds transport", r.checked, r.max_deviation, r.threshold),
        Err(_) => CheckOutcome::at_most("pogorelov", "space-like speeds transport", 0, f64::INFINITY, EQUALITY),
    }
}

/// Admissible `(a, h)` on a coarse grid.
pub fn admissible_grid() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..=12 {
        for j in 0..=12 {
            let (a, h) = (1.0 + 0.06 * i as f64, 0.1 + 0.07 * j as f64);
            if admissibility_check(a, h).passes() {
                out.push((a, h));
            }
        }
    }
    out
}

/// Edge lengths of `Q_t` and `Q_−t` agree for `|t| ≤ 0.05`.
pub fn flex_evenness() -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for (a, h) in admissible_grid() {
        let q = build_schonhardt(a, h);
        for t in [0.001, 0.01, 0.03, 0.05] {
            let (Ok(p), Ok(m)) = (flexed(&q, t), flexed(&q, -t)) else {
                worst = f64::INFINITY;
                continue;
            };
            samples += 1;
            let (lp, lm) = (edge_lengths(&p), edge_lengths(&m));
            worst = worst.max(lp.iter().zip(&lm).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
            // diagonals must move, or the pair is congruent
            let (dp, dm) = (diagonal_lengths(&p), diagonal_lengths(&m));
            if dp.iter().zip(&dm).all(|(x, y)| (x - y).abs() < 1e-9) {
                worst = f64::INFINITY;
            }
        }
    }
    CheckOutcome::at_most("flexahedron", "edge lengths even in t, diagonals not", samples, worst, EXACT)
}

pub fn first_order_flex() -> CheckOutcome {
    let grid = admissible_grid();
    let worst = grid
        .iter()
        .map(|&(a, h)| first_order_flex_residual(&build_schonhardt(a, h)).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    CheckOutcome::at_most("flexahedron", "first-order flex residual", grid.len(), worst, EQUALITY)
}

/// Inversive distance of dual circles equals `−<x,y>`.
pub fn dual_inversive_identity(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 14);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (x, y) = (de_sitter_point(&mut rng, 1.05, 3.0), de_sitter_point(&mut rng, 1.05, 3.0));
        let via_gram = -x.inner(&y);
        let direct = inversive_distance(&dual_circle(&x), &dual_circle(&y));
        worst = worst.max((direct - via_gram).abs());
    }
    CheckOutcome::at_most("circles", "inversive distance of duals equals -<x,y>", n, worst, EXACT)
}

/// Gram matrices are unchanged by Lorentz maps (relative to the largest entry).
pub fn gram_invariance(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 15);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let lifts: Vec<DeSitterPoint> = (0..6).map(|_| de_sitter_point(&mut rng, 1.05, 3.0)).collect();
        let cfg = CircleConfiguration::from_lifts(lifts);
        let alpha = orthochronous_map(&mut rng, 0.5);
        let Ok(moved) = cfg.transformed(&alpha) else {
            continue;
        };
        let (g1, g2) = (gram_matrix(&cfg), gram_matrix(&moved));
        let scale = g1.0.amax().max(1.0);
        worst = worst.max(g1.max_abs_diff(&g2) / scale);
    }
    CheckOutcome::at_most("circles", "Gram matrix invariant under Lorentz maps", n, worst, EQUALITY)
}

/// `I = 1` at external tangency and `I = −1` at internal tangency.
pub fn tangency_boundary(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 16);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (r1, r2) = (rng.random_range(0.05..1.5), rng.random_range(0.05..1.5));
        worst = worst.max((inversive_from_lengths(r1 + r2, r1, r2) - 1.0).abs());
        worst = worst.max((inversive_from_lengths((r1 - r2).abs(), r1, r2) + 1.0).abs());
    }
    CheckOutcome::at_most("circles", "tangency gives inversive distance +-1", n, worst, EQUALITY)
}

/// Lengths recovered from `(r_u, r_v, I(l))` on a grid of radii and lengths.
pub fn edge_length_round_trip() -> CheckOutcome {
    let (mut samples, mut worst) = (0, 0.0f64);
    for i in 1..=14 {
        for j in 1..=14 {
            let (ru, rv) = (0.1 * i as f64, 0.1 * j as f64);
            let mut l = (ru - rv).abs() + 0.05;
            while l < 3.0 {
                let inv = inversive_from_lengths(l, ru, rv);
                samples += 1;
                worst = worst.max(match edge_length_spherical(ru, rv, inv) {
                    Ok(back) => (back - l).abs(),
                    Err(_) => f64::INFINITY,
                });
                l += 0.1;
            }
        }
    }
    CheckOutcome::at_most("packing", "edge length round trip through I", samples, worst, EXACT)
}

/// Spherical lengths for radii scaled by `s → 0` approach the Euclidean ones.
pub fn euclidean_limit() -> CheckOutcome {
    let s = 1e-3;
    let (mut samples, mut worst) = (0, 0.0f64);
    for &(ru, rv) in &[(1.0, 1.0), (0.5, 2.0), (1.3, 0.7)] {
        for &inv in &[-0.5, 0.0, 0.5, 1.0, 3.0] {
            let sph = edge_length_spherical(s * ru, s * rv, inv).map(|l| l / s).unwrap_or(f64::INFINITY);
            let euc = edge_length_euclidean(ru, rv, inv);
            samples += 1;
            worst = worst.max((sph - euc).abs() / euc);
        }
    }
    CheckOutcome::at_most("packing", "Euclidean limit of spherical lengths", samples, worst, 1e-4)
}

/// Gauss-Bonnet on perturbed regular metrics of the octahedron and tetrahedron.
pub fn gauss_bonnet(seed: u64, n: usize) -> CheckOutcome {
    let mut rng = sampling::rng(seed ^ 17);
    let base = [(octahedron(), std::f64::consts::FRAC_PI_2), (tetrahedron(), (-1.0f64 / 3.0).acos())];
    let (mut samples, mut worst) = (0, 0.0f64);
    for _ in 0..n {
        for (tri, l0) in &base {
            let lengths = tri.edges().iter().map(|_| l0 + rng.random_range(-0.05..0.05)).collect();
            let metric = PolyhedralMetric { lengths, geometry: Geometry::Spherical };
            samples += 1;
            worst = worst.max(gauss_bonnet_residual(tri, &metric).map(f64::abs).unwrap_or(f64::INFINITY));
        }
    }
    CheckOutcome::at_most("packing", "Gauss-Bonnet residual", samples, worst, CURVATURE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_with_default_seed() {
        for outcome in run_all(sampling::DEFAULT_SEED) {
            assert!(outcome.passed, "{outcome:?}");
        }
    }

    #[test]
    fn admissible_grid_is_nonempty() {
        assert!(admissible_grid().len() > 10);
    }
}
