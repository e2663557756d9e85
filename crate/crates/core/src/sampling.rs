//! Seeded generators for the sampled property checks.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lorentz::{hyperboloid_lift, DeSitterPoint, EuclideanPoint3, LorentzMap};

/// Default seed when `PRL_SEED` is not set.
pub const DEFAULT_SEED: u64 = 0x5eed_2011;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere.
pub fn unit_vector<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Point with uniform direction and norm drawn uniformly from `[r_min, r_max)`.
pub fn shell_point<R: Rng>(rng: &mut R, r_min: f64, r_max: f64) -> EuclideanPoint3 {
    unit_vector(rng) * rng.random_range(r_min..r_max)
}

/// Canonical lift of a random Klein-exterior point with norm in `[r_min, r_max)`.
pub fn de_sitter_point<R: Rng>(rng: &mut R, r_min: f64, r_max: f64) -> DeSitterPoint {
    assert!(r_min > 1.0, "Klein-exterior points need norm > 1");
    hyperboloid_lift(&shell_point(rng, r_min, r_max)).expect("exterior point lifts")
}

/// Rotation ∘ boost with rapidity below `max_rapidity`; preserves the form
/// and the time orientation.
pub fn orthochronous_map<R: Rng>(rng: &mut R, max_rapidity: f64) -> LorentzMap {
    let rot = LorentzMap::rotation(&unit_vector(rng), rng.random_range(0.0..std::f64::consts::PI));
    let boost = LorentzMap::boost(&unit_vector(rng), rng.random_range(0.0..max_rapidity));
    rot.compose(&boost)
}
