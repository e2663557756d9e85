//! Numerical construction of two spherical inversive-distance circle packings
//! on the octahedral triangulation that share all radii-independent data
//! (inversive distances on edges, zero vertex curvature) yet are not Möbius
//! equivalent.
//!
//! The chain is: a flexible Schönhardt octahedron `Q_t` in R³, the de Sitter
//! Pogorelov map that turns the pair `(Q_t, Q_−t)` into two de Sitter
//! polyhedra with equal edge Gram entries, and the circles dual to their
//! vertices.

// `!(x > y)` is used on purpose so that NaN fails the guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circles;
pub mod error;
pub mod flexahedron;
pub mod lorentz;
pub mod packing;
pub mod pipeline;
pub mod pogorelov;
pub mod sampling;
pub mod tolerance;
pub mod verify;

pub use circles::{CircleConfiguration, Convention, GramMatrix, MobiusVerdict, SphericalCircle};
pub use error::{GeomError, Result};
pub use flexahedron::{Label, LabeledPolyhedron, SchonhardtParams};
pub use lorentz::{DeSitterPoint, DsSeparation, EuclideanPoint3, HyperbolicPoint, LorentzMap, LorentzVec};
pub use packing::{Geometry, PackingData, Triangulation};
pub use pipeline::{
    run_counterexample, CounterexampleParams, CounterexampleReport, HyperidealReport, SweepRow, Verdict,
};
pub use pogorelov::{PointPairDS, PointPairE3};
pub use tolerance::Tolerances;
