//! Schönhardt's twisted octahedron and its infinitesimal flex.
//!
//! The bottom triangle `ABC` sits at height `−h` at azimuths 90°, 210°, 330°
//! with circumradius `a/√3`; the top triangle `A⁰B⁰C⁰` is its image under a
//! quarter-turn screw motion about the vertical axis, at height `+h`. The
//! flexed polyhedron `Q_t` keeps the bottom fixed and moves each top vertex
//! along the outward unit normal of its face with two bottom neighbours.

use std::fmt;

use nalgebra::{DMatrix, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::lorentz::EuclideanPoint3;
use crate::packing::Triangulation;
use crate::tolerance::{CONGRUENCE, EPS_BALL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    C,
    A0,
    B0,
    C0,
}

impl Label {
    pub const ALL: [Label; 6] = [Label::A, Label::B, Label::C, Label::A0, Label::B0, Label::C0];
    pub const TOP: [Label; 3] = [Label::A0, Label::B0, Label::C0];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_top(self) -> bool {
        self.index() >= 3
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::A => "A",
            Label::B => "B",
            Label::C => "C",
            Label::A0 => "A0",
            Label::B0 => "B0",
            Label::C0 => "C0",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

use Label::*;

pub const EDGES: [(Label, Label); 12] = [
    (A, B),
    (B, C),
    (C, A),
    (A0, B0),
    (B0, C0),
    (C0, A0),
    (A, B0),
    (A, C0),
    (B, A0),
    (B, C0),
    (C, A0),
    (C, B0),
];

pub const FACES: [[Label; 3]; 8] = [
    [A, B, C],
    [A0, B0, C0],
    [A, B, C0],
    [A0, B, C],
    [A, B0, C],
    [A0, B0, C],
    [A, B0, C0],
    [A0, B, C0],
];

pub const DIAGONALS: [(Label, Label); 3] = [(A, A0), (B, B0), (C, C0)];

/// Face through each top vertex and two bottom vertices.
const FLEX_FACES: [[Label; 3]; 3] = [[A0, B, C], [B0, C, A], [C0, A, B]];

pub fn edge_name((p, q): (Label, Label)) -> String {
    format!("{p}{q}")
}

/// The octahedral triangulation on labels `A, B, C, A0, B0, C0` (indices 0..6).
pub fn schonhardt_triangulation() -> Triangulation {
    let faces = FACES.iter().map(|f| [f[0].index(), f[1].index(), f[2].index()]).collect();
    Triangulation::new(6, faces).expect("octahedron is a closed surface")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchonhardtParams {
    pub a: f64,
    pub h: f64,
    pub t: f64,
}

impl Default for SchonhardtParams {
    fn default() -> Self {
        Self { a: 1.55, h: 0.5, t: 0.01 }
    }
}

impl SchonhardtParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) || !(self.h.is_finite() && self.h > 0.0) {
            return Err(GeomError::InvalidParams(format!(
                "a and h must be finite and positive (a = {}, h = {})",
                self.a, self.h
            )));
        }
        if !self.t.is_finite() {
            return Err(GeomError::InvalidParams(format!("t must be finite (t = {})", self.t)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPolyhedron {
    pub vertices: [EuclideanPoint3; 6],
}

impl LabeledPolyhedron {
    pub fn vertex(&self, l: Label) -> EuclideanPoint3 {
        self.vertices[l.index()]
    }

    pub fn distance(&self, p: Label, q: Label) -> f64 {
        (self.vertex(p) - self.vertex(q)).norm()
    }

    pub fn centroid(&self) -> EuclideanPoint3 {
        self.vertices.iter().sum::<Vector3<f64>>() / 6.0
    }

    pub fn map(&self, f: impl Fn(&EuclideanPoint3) -> EuclideanPoint3) -> Self {
        Self { vertices: self.vertices.map(|v| f(&v)) }
    }
}

pub fn build_schonhardt(a: f64, h: f64) -> LabeledPolyhedron {
    let r = a / 3f64.sqrt();
    let at = |deg: f64, z: f64| {
        let th = deg.to_radians();
        Vector3::new(r * th.cos(), r * th.sin(), z)
    };
    let bottom = [90.0, 210.0, 330.0];
    let mut vertices = [Vector3::zeros(); 6];
    for (k, &az) in bottom.iter().enumerate() {
        vertices[k] = at(az, -h);
        vertices[k + 3] = at(az + 90.0, h);
    }
    LabeledPolyhedron { vertices }
}

/// Strict inequalities must hold with at least this slack, so that points
/// on the boundary up to rounding are rejected.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub lhs: f64,
    pub bound: f64,
    /// Signed slack, positive when the inequality holds.
    pub margin: f64,
    pub holds: bool,
}

impl InequalityVerdict {
    fn greater(lhs: f64, bound: f64) -> Self {
        Self { lhs, bound, margin: lhs - bound, holds: lhs - bound > BOUNDARY_SLACK }
    }

    fn less(lhs: f64, bound: f64) -> Self {
        Self { lhs, bound, margin: bound - lhs, holds: bound - lhs > BOUNDARY_SLACK }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallCheck {
    /// Smallest `|v| − 1` over vertices, or `1 − max_e min |e|²` over edges;
    /// positive when the check holds.
    pub margin: f64,
    pub holds: bool,
}

/// Vertices strictly outside the ball and every edge meeting the open ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallConditions {
    pub vertex_check: BallCheck,
    pub edge_check: BallCheck,
}

impl BallConditions {
    pub fn holds(&self) -> bool {
        self.vertex_check.holds && self.edge_check.holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    /// `h² + a²/3 > 1`
    pub ineq1: InequalityVerdict,
    /// `h² + a²/12 < 1`
    pub ineq2: InequalityVerdict,
    /// `a²/3 < 1`
    pub ineq3: InequalityVerdict,
    pub vertex_check: BallCheck,
    pub edge_check: BallCheck,
}

impl Admissibility {
    pub fn inequalities_hold(&self) -> bool {
        self.ineq1.holds && self.ineq2.holds && self.ineq3.holds
    }

    pub fn geometry_holds(&self) -> bool {
        self.vertex_check.holds && self.edge_check.holds
    }

    pub fn passes(&self) -> bool {
        self.inequalities_hold() && self.geometry_holds()
    }
}

/// Minimum of `|p + s(q − p)|²` over `s ∈ [0, 1]`.
pub fn segment_min_norm_sq(p: &EuclideanPoint3, q: &EuclideanPoint3) -> f64 {
    let d = q - p;
    let dd = d.norm_squared();
    let s = if dd == 0.0 { 0.0 } else { (-p.dot(&d) / dd).clamp(0.0, 1.0) };
    (p + d * s).norm_squared()
}

pub fn ball_conditions(poly: &LabeledPolyhedron, eps_ball: f64) -> BallConditions {
    let vertex_margin = poly
        .vertices
        .iter()
        .map(|v| v.norm() - 1.0)
        .fold(f64::INFINITY, f64::min);
    let edge_margin = EDGES
        .iter()
        .map(|&(p, q)| 1.0 - segment_min_norm_sq(&poly.vertex(p), &poly.vertex(q)))
        .fold(f64::INFINITY, f64::min);
    BallConditions {
        vertex_check: BallCheck { margin: vertex_margin, holds: vertex_margin > eps_ball },
        edge_check: BallCheck { margin: edge_margin, holds: edge_margin > eps_ball },
    }
}

pub fn admissibility_check(a: f64, h: f64) -> Admissibility {
    let (a2, h2) = (a * a, h * h);
    let ball = ball_conditions(&build_schonhardt(a, h), EPS_BALL);
    Admissibility {
        ineq1: InequalityVerdict::greater(h2 + a2 / 3.0, 1.0),
        ineq2: InequalityVerdict::less(h2 + a2 / 12.0, 1.0),
        ineq3: InequalityVerdict::less(a2 / 3.0, 1.0),
        vertex_check: ball.vertex_check,
        edge_check: ball.edge_check,
    }
}

/// Outward unit normals `η_{A⁰}, η_{B⁰}, η_{C⁰}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlexField {
    pub eta: [EuclideanPoint3; 3],
}

impl FlexField {
    /// Velocity of each labeled vertex; zero on the bottom triangle.
    pub fn velocity(&self, l: Label) -> EuclideanPoint3 {
        if l.is_top() {
            self.eta[l.index() - 3]
        } else {
            Vector3::zeros()
        }
    }

    pub fn as_vector(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for (k, e) in self.eta.iter().enumerate() {
            out[3 * k..3 * k + 3].copy_from_slice(e.as_slice());
        }
        out
    }
}

pub fn flex_directions(q: &LabeledPolyhedron) -> Result<FlexField> {
    let centroid = q.centroid();
    let mut eta = [Vector3::zeros(); 3];
    for (k, face) in FLEX_FACES.iter().enumerate() {
        let [top, p, r] = face.map(|l| q.vertex(l));
        let n = (p - top).cross(&(r - top));
        let len = n.norm();
        if len < 1e-12 {
            return Err(GeomError::DegenerateFace(format!("{}{}{}", face[0], face[1], face[2])));
        }
        let mut n = n / len;
        let face_centroid = (top + p + r) / 3.0;
        if n.dot(&(centroid - face_centroid)) > 0.0 {
            n = -n;
        }
        eta[k] = n;
    }
    Ok(FlexField { eta })
}

pub fn flexed_with(q: &LabeledPolyhedron, field: &FlexField, t: f64) -> LabeledPolyhedron {
    let mut out = *q;
    for l in Label::TOP {
        out.vertices[l.index()] += field.velocity(l) * t;
    }
    out
}

pub fn flexed(q: &LabeledPolyhedron, t: f64) -> Result<LabeledPolyhedron> {
    Ok(flexed_with(q, &flex_directions(q)?, t))
}

/// Lengths in [`EDGES`] order.
pub fn edge_lengths(p: &LabeledPolyhedron) -> [f64; 12] {
    EDGES.map(|(a, b)| p.distance(a, b))
}

pub fn diagonal_lengths(p: &LabeledPolyhedron) -> [f64; 3] {
    DIAGONALS.map(|(a, b)| p.distance(a, b))
}

/// `max_e |<p − q, v_p − v_q>|` for the face-normal flex.
pub fn first_order_flex_residual(q: &LabeledPolyhedron) -> Result<f64> {
    let field = flex_directions(q)?;
    Ok(EDGES
        .iter()
        .map(|&(p, r)| {
            let d = q.vertex(p) - q.vertex(r);
            d.dot(&(field.velocity(p) - field.velocity(r))).abs()
        })
        .fold(0.0, f64::max))
}

/// Rigidity matrix restricted to the top-vertex velocities (bottom pinned):
/// one row per edge, 9 columns.
pub fn pinned_rigidity_matrix(q: &LabeledPolyhedron) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(EDGES.len(), 9);
    for (row, &(p, r)) in EDGES.iter().enumerate() {
        for (me, other) in [(p, r), (r, p)] {
            if me.is_top() {
                let d = q.vertex(me) - q.vertex(other);
                let col = 3 * (me.index() - 3);
                for k in 0..3 {
                    m[(row, col + k)] = d[k];
                }
            }
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSpace {
    pub singular_values: Vec<f64>,
    pub dimension: usize,
    /// Orthonormal basis vectors of length 9.
    pub basis: Vec<Vec<f64>>,
}

/// Null space of the pinned rigidity matrix via SVD; singular values below
/// `rel_tol · σ_max` count as zero.
pub fn rigidity_null_space(q: &LabeledPolyhedron, rel_tol: f64) -> NullSpace {
    let svd = pinned_rigidity_matrix(q).svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..9)
        .map(|k| (svd.singular_values[k], v_t.row(k).iter().copied().collect()))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let smax = pairs[0].0;
    let singular_values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let basis: Vec<Vec<f64>> = pairs
        .into_iter()
        .filter(|p| p.0 <= rel_tol * smax)
        .map(|p| p.1)
        .collect();
    NullSpace { singular_values, dimension: basis.len(), basis }
}

/// Distance from the normalized flex vector to the null space (projection
/// residual); zero when the flex lies in it.
pub fn flex_null_space_alignment(field: &FlexField, null: &NullSpace) -> f64 {
    let v = field.as_vector();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let unit: Vec<f64> = v.iter().map(|x| x / norm).collect();
    let mut residual = unit.clone();
    for b in &null.basis {
        let c: f64 = unit.iter().zip(b).map(|(x, y)| x * y).sum();
        for (r, y) in residual.iter_mut().zip(b) {
            *r -= c * y;
        }
    }
    residual.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CongruenceVerdict {
    pub congruent: bool,
    pub max_deviation: f64,
    /// Label pair with the largest distance discrepancy.
    pub witness: (Label, Label),
    /// Difference of squared distances at the witness.
    pub delta_sq: f64,
}

/// Labeled congruence: full 6×6 distance matrices agree within `tol`.
pub fn congruence_test(p: &LabeledPolyhedron, q: &LabeledPolyhedron, tol: f64) -> CongruenceVerdict {
    let mut best = CongruenceVerdict { congruent: true, max_deviation: 0.0, witness: (A, A), delta_sq: 0.0 };
    for (i, &li) in Label::ALL.iter().enumerate() {
        for &lj in &Label::ALL[i + 1..] {
            let (dp, dq) = (p.distance(li, lj), q.distance(li, lj));
            let dev = (dp - dq).abs();
            if dev > best.max_deviation {
                best.max_deviation = dev;
                best.witness = (li, lj);
                best.delta_sq = dp * dp - dq * dq;
            }
        }
    }
    best.congruent = best.max_deviation <= tol;
    best
}

pub fn is_congruent(p: &LabeledPolyhedron, q: &LabeledPolyhedron) -> bool {
    congruence_test(p, q, CONGRUENCE).congruent
}

/// Rotation by 120° about the vertical axis.
pub fn third_turn() -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), 2.0 * std::f64::consts::PI / 3.0)
}

/// Image of each label under the third turn: A→B→C→A on both triangles.
pub fn cyclic_relabel(l: Label) -> Label {
    match l {
        A => B,
        B => C,
        C => A,
        A0 => B0,
        B0 => C0,
        C0 => A0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_q() -> LabeledPolyhedron {
        build_schonhardt(1.55, 0.5)
    }

    #[test]
    fn unit_circumradius_example() {
        let q = build_schonhardt(3f64.sqrt(), 1.0);
        assert!((q.vertex(A) - Vector3::new(0.0, 1.0, -1.0)).norm() < 1e-15);
        for v in &q.vertices {
            assert!(((v.x * v.x + v.y * v.y).sqrt() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn vertex_norms_and_side_lengths() {
        let q = paper_q();
        let expected = 1.55f64 * 1.55 / 3.0 + 0.25;
        assert!((expected - 1.0508333333333333).abs() < 1e-15);
        for v in &q.vertices {
            assert!((v.norm_squared() - expected).abs() < 1e-14);
        }
        let lengths = edge_lengths(&q);
        for l in &lengths[..6] {
            assert!((l - 1.55).abs() < 1e-12);
        }
        assert!(q.centroid().norm() < 1e-15);
    }

    #[test]
    fn diagonals_are_not_edges() {
        for (p, q) in DIAGONALS {
            assert!(!EDGES.iter().any(|&(x, y)| (x, y) == (p, q) || (y, x) == (p, q)));
        }
        let tri = schonhardt_triangulation();
        assert_eq!(tri.edges().len(), 12);
        assert_eq!(tri.faces().len(), 8);
        assert_eq!(tri.euler_characteristic(), 2);
    }

    #[test]
    fn every_face_is_spanned_by_edges() {
        let has = |p: Label, q: Label| EDGES.iter().any(|&(x, y)| (x, y) == (p, q) || (y, x) == (p, q));
        for f in FACES {
            assert!(has(f[0], f[1]) && has(f[1], f[2]) && has(f[0], f[2]));
        }
    }

    #[test]
    fn slant_edges_follow_chord_formula() {
        let (a, h) = (1.55f64, 0.5f64);
        let r = a / 3f64.sqrt();
        let q = build_schonhardt(a, h);
        let slant = |gap_deg: f64| {
            let chord = 2.0 * r * (gap_deg.to_radians() / 2.0).sin();
            (chord * chord + 4.0 * h * h).sqrt()
        };
        assert!((q.distance(A, C0) - slant(30.0)).abs() < 1e-14);
        assert!((q.distance(A, B0) - slant(150.0)).abs() < 1e-14);
        assert!((q.distance(A, A0) - slant(90.0)).abs() < 1e-14);
        assert!(q.distance(A, C0) < q.distance(A, B0));
    }

    #[test]
    fn admissibility_at_default_parameters() {
        let adm = admissibility_check(1.55, 0.5);
        assert!(adm.passes());
        assert!((adm.ineq1.lhs - 1.0508333333333333).abs() < 1e-15);
        assert!((adm.ineq2.lhs - 0.450_208_333_333_333_3).abs() < 1e-15);
        assert!((adm.ineq3.lhs - 0.8008333333333333).abs() < 1e-15);
    }

    #[test]
    fn admissibility_boundary_fails_ineq3() {
        let adm = admissibility_check(3f64.sqrt(), 1.0);
        assert!(!adm.ineq3.holds);
        assert!(!adm.passes());
    }

    #[test]
    fn edge_check_matches_closed_form_midpoints() {
        let (a, h) = (1.55f64, 0.5f64);
        let q = build_schonhardt(a, h);
        let r2 = a * a / 3.0;
        // bottom and top edges: closest point is the midpoint
        let flat = h * h + a * a / 12.0;
        for &(p, s) in &EDGES[..6] {
            assert!((segment_min_norm_sq(&q.vertex(p), &q.vertex(s)) - flat).abs() < 1e-14);
        }
        // slant edges: midpoint at height 0, radius r cos(gap/2)
        let near = r2 * 15f64.to_radians().cos().powi(2);
        let far = r2 * 75f64.to_radians().cos().powi(2);
        assert!((segment_min_norm_sq(&q.vertex(A), &q.vertex(C0)) - near).abs() < 1e-14);
        assert!((segment_min_norm_sq(&q.vertex(A), &q.vertex(B0)) - far).abs() < 1e-14);
    }

    #[test]
    fn flex_normals_are_orthogonal_to_their_faces() {
        let q = paper_q();
        let f = flex_directions(&q).unwrap();
        let eta_a0 = f.velocity(A0);
        assert!((eta_a0.norm() - 1.0).abs() < 1e-12);
        assert!(eta_a0.dot(&(q.vertex(B) - q.vertex(A0))).abs() < 1e-12);
        assert!(eta_a0.dot(&(q.vertex(C) - q.vertex(A0))).abs() < 1e-12);
        assert!(eta_a0.dot(&(q.vertex(A) - q.vertex(A0))).abs() > 1e-3);
    }

    #[test]
    fn flex_normals_are_rotation_images() {
        let q = paper_q();
        let f = flex_directions(&q).unwrap();
        let rot = third_turn();
        assert!((rot * f.velocity(A0) - f.velocity(B0)).norm() < 1e-12);
        assert!((rot * f.velocity(B0) - f.velocity(C0)).norm() < 1e-12);
    }

    #[test]
    fn flexed_identity_and_symmetry() {
        let q = paper_q();
        assert_eq!(flexed(&q, 0.0).unwrap(), q);
        let plus = flexed(&q, 0.02).unwrap();
        let minus = flexed(&q, -0.02).unwrap();
        for l in Label::ALL {
            let mid = (plus.vertex(l) + minus.vertex(l)) / 2.0;
            assert!((mid - q.vertex(l)).norm() < 1e-15);
        }
        for t in [0.01, -0.01] {
            let qt = flexed(&q, t).unwrap();
            assert!(ball_conditions(&qt, EPS_BALL).holds());
        }
    }

    #[test]
    fn flex_residual_and_null_space() {
        let q = paper_q();
        assert!(first_order_flex_residual(&q).unwrap() <= 1e-10);
        let ns = rigidity_null_space(&q, 1e-9);
        assert_eq!(ns.dimension, 1);
        let f = flex_directions(&q).unwrap();
        assert!(flex_null_space_alignment(&f, &ns) <= 1e-8);
    }

    #[test]
    fn congruence_examples() {
        let q = paper_q();
        assert!(congruence_test(&q, &q, 1e-9).congruent);
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let moved = q.map(|v| rot * v + Vector3::new(0.5, -2.0, 1.0));
        assert!(congruence_test(&q, &moved, 1e-9).congruent);

        let f = flex_directions(&q).unwrap();
        let t = 0.01;
        let verdict = congruence_test(&flexed_with(&q, &f, t), &flexed_with(&q, &f, -t), 1e-9);
        assert!(!verdict.congruent);
        let (p, r) = verdict.witness;
        assert!(DIAGONALS.contains(&(p, r)));
        // |A − A⁰ ∓ tη|²: the linear term −/+ 2t<A − A⁰, η> survives
        let expected = -4.0 * t * (q.vertex(p) - q.vertex(r)).dot(&f.velocity(r));
        assert!((verdict.delta_sq - expected).abs() < 1e-14);
    }
}
