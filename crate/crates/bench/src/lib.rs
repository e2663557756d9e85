//! Fixtures shared by the benchmarks.

use prl_core::lorentz::DeSitterPoint;
use prl_core::sampling;

/// Seeded de Sitter points with Klein norms in `[1.05, 3)`.
pub fn de_sitter_points(n: usize, seed: u64) -> Vec<DeSitterPoint> {
    let mut rng = sampling::rng(seed);
    (0..n).map(|_| sampling::de_sitter_point(&mut rng, 1.05, 3.0)).collect()
}
