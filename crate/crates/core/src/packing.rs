//! Triangulated closed surfaces, inversive-distance packing metrics and
//! discrete curvature.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::circles::{inversive_distance, CircleConfiguration};
use crate::error::{GeomError, Result};
use crate::tolerance::DEGENERATE_SIN;

pub type Edge = (usize, usize);

fn edge_key(i: usize, j: usize) -> Edge {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Combinatorics of a closed triangulated surface.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    n: usize,
    faces: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    edge_ids: BTreeMap<Edge, usize>,
}

impl Triangulation {
    /// Validates that every edge lies on exactly two faces and that every
    /// vertex star is a single cycle.
    pub fn new(n: usize, faces: Vec<[usize; 3]>) -> Result<Self> {
        let bad = |msg: String| Err(GeomError::Triangulation(msg));
        let mut seen_faces = BTreeSet::new();
        let mut incidence: BTreeMap<Edge, usize> = BTreeMap::new();
        for (k, f) in faces.iter().enumerate() {
            if let Some(&v) = f.iter().find(|&&v| v >= n) {
                return bad(format!("face {k} {f:?} references vertex {v} >= {n}"));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return bad(format!("face {k} {f:?} repeats a vertex"));
            }
            let mut key = *f;
            key.sort_unstable();
            if !seen_faces.insert(key) {
                return bad(format!("face {k} {f:?} is a duplicate"));
            }
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                *incidence.entry(edge_key(a, b)).or_default() += 1;
            }
        }
        if let Some((e, c)) = incidence.iter().find(|(_, &c)| c != 2) {
            return bad(format!("edge {e:?} lies on {c} faces (closed surfaces need 2)"));
        }
        let edges: Vec<Edge> = incidence.keys().copied().collect();
        let edge_ids = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let tri = Self { n, faces, edges, edge_ids };
        for v in 0..n {
            tri.check_star(v)?;
        }
        Ok(tri)
    }

    fn check_star(&self, v: usize) -> Result<()> {
        let link: Vec<Edge> = self
            .faces
            .iter()
            .filter(|f| f.contains(&v))
            .map(|f| {
                let others: Vec<usize> = f.iter().copied().filter(|&u| u != v).collect();
                (others[0], others[1])
            })
            .collect();
        if link.is_empty() {
            return Err(GeomError::Triangulation(format!("vertex {v} is not on any face")));
        }
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(a, b) in &link {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        // walk the link once around
        let start = link[0].0;
        let (mut prev, mut cur, mut steps) = (start, link[0].1, 1);
        while cur != start {
            let next = adj[&cur].iter().copied().find(|&u| u != prev);
            match next {
                Some(u) => {
                    prev = cur;
                    cur = u;
                    steps += 1;
                }
                None => break,
            }
            if steps > link.len() {
                break;
            }
        }
        if steps != link.len() || adj.values().any(|nb| nb.len() != 2) {
            return Err(GeomError::Triangulation(format!(
                "star of vertex {v} is not a single cycle (non-manifold vertex)"
            )));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_id(&self, i: usize, j: usize) -> Option<usize> {
        self.edge_ids.get(&edge_key(i, j)).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Edge ids of a face, opposite to its 1st, 2nd and 3rd vertex.
    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        let [a, b, c] = self.faces[f];
        [(b, c), (c, a), (a, b)].map(|(i, j)| self.edge_ids[&edge_key(i, j)])
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.edge_id(i, j).is_some()
    }

    /// All vertex permutations preserving adjacency (backtracking search).
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        self.extend_automorphism(0, &mut image, &mut used, &mut out);
        out
    }

    fn extend_automorphism(
        &self,
        v: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == self.n {
            out.push(image.clone());
            return;
        }
        for w in 0..self.n {
            if used[w] {
                continue;
            }
            let consistent = (0..v).all(|u| self.is_adjacent(u, v) == self.is_adjacent(image[u], w));
            if consistent {
                image[v] = w;
                used[w] = true;
                self.extend_automorphism(v + 1, image, used, out);
                used[w] = false;
            }
        }
        image[v] = usize::MAX;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    #[default]
    Spherical,
    Euclidean,
}

/// Per-edge inversive distances and per-vertex radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingData {
    /// Indexed by edge id.
    pub inversive: Vec<f64>,
    pub radii: Vec<f64>,
}

impl PackingData {
    pub fn new(tri: &Triangulation, inversive: Vec<f64>, radii: Vec<f64>, geometry: Geometry) -> Result<Self> {
        let bad = |msg: String| Err(GeomError::PackingInput(msg));
        if inversive.len() != tri.edges().len() {
            return bad(format!("{} inversive values for {} edges", inversive.len(), tri.edges().len()));
        }
        if radii.len() != tri.vertex_count() {
            return bad(format!("{} radii for {} vertices", radii.len(), tri.vertex_count()));
        }
        if let Some((k, i)) = inversive.iter().enumerate().find(|(_, &i)| !(i >= -1.0) || !i.is_finite()) {
            return bad(format!("edge {:?} has inversive distance {i} < -1", tri.edges()[k]));
        }
        let upper = match geometry {
            Geometry::Spherical => FRAC_PI_2,
            Geometry::Euclidean => f64::INFINITY,
        };
        if let Some((v, r)) = radii.iter().enumerate().find(|(_, &r)| !(r > 0.0 && r < upper)) {
            return bad(format!("vertex {v} has radius {r} outside (0, {upper})"));
        }
        Ok(Self { inversive, radii })
    }

    pub fn metric(&self, tri: &Triangulation, geometry: Geometry) -> Result<PolyhedralMetric> {
        let lengths = tri
            .edges()
            .iter()
            .zip(&self.inversive)
            .map(|(&(u, v), &i)| match geometry {
                Geometry::Spherical => edge_length_spherical(self.radii[u], self.radii[v], i),
                Geometry::Euclidean => Ok(edge_length_euclidean(self.radii[u], self.radii[v], i)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyhedralMetric { lengths, geometry })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralMetric {
    /// Indexed by edge id.
    pub lengths: Vec<f64>,
    pub geometry: Geometry,
}

/// Spherical distance between the centers of circles with radii `r_u, r_v`
/// at inversive distance `i`.
pub fn edge_length_spherical(r_u: f64, r_v: f64, i: f64) -> Result<f64> {
    if !(i >= -1.0) {
        return Err(GeomError::PackingInput(format!("inversive distance {i} < -1")));
    }
    let mut cos_l = r_u.cos() * r_v.cos() - i * r_u.sin() * r_v.sin();
    // I >= -1 bounds cos l by cos(r_u - r_v) <= 1; anything above is rounding
    if cos_l > 1.0 && cos_l <= 1.0 + 4.0 * f64::EPSILON {
        cos_l = 1.0;
    }
    // antipodal centers count as infeasible, with the same rounding slack
    if !(cos_l > -1.0 + 4.0 * f64::EPSILON && cos_l <= 1.0) {
        return Err(GeomError::Infeasible { cos_l });
    }
    Ok(cos_l.acos())
}

pub fn edge_length_euclidean(r_u: f64, r_v: f64, i: f64) -> f64 {
    (r_u * r_u + r_v * r_v + 2.0 * r_u * r_v * i).max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceCheck {
    pub face: usize,
    pub vertices: [usize; 3],
    pub lengths: [f64; 3],
    /// `min(lᵢ + lⱼ − l_k)`.
    pub triangle_margin: f64,
    /// `2π − (l₁ + l₂ + l₃)`, spherical only.
    pub perimeter_margin: Option<f64>,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralVerdict {
    pub faces: Vec<FaceCheck>,
    pub violations: Vec<String>,
    pub valid: bool,
}

pub fn validate_polyhedral(tri: &Triangulation, metric: &PolyhedralMetric) -> PolyhedralVerdict {
    let mut faces = Vec::with_capacity(tri.faces().len());
    let mut violations = Vec::new();
    for (f, verts) in tri.faces().iter().enumerate() {
        let lengths = tri.face_edges(f).map(|e| metric.lengths[e]);
        let [l1, l2, l3] = lengths;
        let triangle_margin = (l1 + l2 - l3).min(l2 + l3 - l1).min(l3 + l1 - l2);
        let perimeter_margin = match metric.geometry {
            Geometry::Spherical => Some(TAU - (l1 + l2 + l3)),
            Geometry::Euclidean => None,
        };
        let mut valid = true;
        if !(triangle_margin > 0.0) {
            valid = false;
            violations.push(format!(
                "face {f} {verts:?}: triangle inequality fails (margin {triangle_margin:.3e})"
            ));
        }
        if let Some(m) = perimeter_margin.filter(|m| !(*m > 0.0)) {
            valid = false;
            violations.push(format!("face {f} {verts:?}: perimeter exceeds 2π (margin {m:.3e})"));
        }
        faces.push(FaceCheck { face: f, vertices: *verts, lengths, triangle_margin, perimeter_margin, valid });
    }
    let valid = violations.is_empty();
    PolyhedralVerdict { faces, violations, valid }
}

/// Angles opposite to the sides `l1, l2, l3` by the spherical law of cosines.
pub fn triangle_angles_spherical(l1: f64, l2: f64, l3: f64) -> Result<[f64; 3]> {
    let l = [l1, l2, l3];
    let mut out = [0.0; 3];
    for k in 0..3 {
        let (a, b, c) = (l[k], l[(k + 1) % 3], l[(k + 2) % 3]);
        let denom = b.sin() * c.sin();
        if denom <= DEGENERATE_SIN {
            return Err(GeomError::DegenerateTriangle(l));
        }
        out[k] = ((a.cos() - b.cos() * c.cos()) / denom).clamp(-1.0, 1.0).acos();
    }
    Ok(out)
}

pub fn triangle_angles_euclidean(l1: f64, l2: f64, l3: f64) -> Result<[f64; 3]> {
    let l = [l1, l2, l3];
    let mut out = [0.0; 3];
    for k in 0..3 {
        let (a, b, c) = (l[k], l[(k + 1) % 3], l[(k + 2) % 3]);
        let denom = 2.0 * b * c;
        if denom <= DEGENERATE_SIN {
            return Err(GeomError::DegenerateTriangle(l));
        }
        out[k] = ((b * b + c * c - a * a) / denom).clamp(-1.0, 1.0).acos();
    }
    Ok(out)
}

/// Angles of every face at its three corners, in face-vertex order.
pub fn face_angles(tri: &Triangulation, metric: &PolyhedralMetric) -> Result<Vec<[f64; 3]>> {
    (0..tri.faces().len())
        .map(|f| {
            let [l1, l2, l3] = tri.face_edges(f).map(|e| metric.lengths[e]);
            match metric.geometry {
                Geometry::Spherical => triangle_angles_spherical(l1, l2, l3),
                Geometry::Euclidean => triangle_angles_euclidean(l1, l2, l3),
            }
        })
        .collect()
}

/// `k(v) = 2π − Σ θ` over the corners at `v`.
pub fn discrete_curvature(tri: &Triangulation, metric: &PolyhedralMetric) -> Result<Vec<f64>> {
    let angles = face_angles(tri, metric)?;
    let mut k = vec![TAU; tri.vertex_count()];
    for (f, corner) in tri.faces().iter().zip(&angles) {
        for (v, theta) in f.iter().zip(corner) {
            k[*v] -= theta;
        }
    }
    Ok(k)
}

/// `Σ k(v) + Σ_f (angle sum − π) − 2πχ`.
pub fn gauss_bonnet_residual(tri: &Triangulation, metric: &PolyhedralMetric) -> Result<f64> {
    let angles = face_angles(tri, metric)?;
    let curvature = discrete_curvature(tri, metric)?;
    let excess: f64 = angles.iter().map(|a| a.iter().sum::<f64>() - PI).sum();
    Ok(curvature.iter().sum::<f64>() + excess - TAU * tri.euler_characteristic() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirclePacking {
    pub data: PackingData,
    pub metric: PolyhedralMetric,
    /// Largest gap between the center distance and the length recomputed
    /// from `(r, I)`.
    pub rederivation_error: f64,
}

/// Radii, inversive distances and center distances of a circle configuration
/// on a triangulation of the sphere.
pub fn packing_from_circles(tri: &Triangulation, config: &CircleConfiguration) -> Result<CirclePacking> {
    if config.len() != tri.vertex_count() {
        return Err(GeomError::SizeMismatch(config.len(), tri.vertex_count()));
    }
    let circles = config.circles();
    let radii: Vec<f64> = circles.iter().map(|c| c.radius()).collect();
    let inversive: Vec<f64> = tri
        .edges()
        .iter()
        .map(|&(u, v)| inversive_distance(&circles[u], &circles[v]))
        .collect();
    let lengths: Vec<f64> = tri
        .edges()
        .iter()
        .map(|&(u, v)| circles[u].center_distance(&circles[v]))
        .collect();
    let data = PackingData::new(tri, inversive, radii, Geometry::Spherical)?;
    let rederived = data.metric(tri, Geometry::Spherical)?;
    let rederivation_error = rederived
        .lengths
        .iter()
        .zip(&lengths)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(CirclePacking {
        data,
        metric: PolyhedralMetric { lengths, geometry: Geometry::Spherical },
        rederivation_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeValue {
    pub edge: [usize; 2],
    pub value: f64,
}

/// JSON input of `packing-eval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingInput {
    pub faces: Vec<[usize; 3]>,
    pub inversive: Vec<EdgeValue>,
    pub radii: Vec<f64>,
    #[serde(default)]
    pub geometry: Geometry,
}

impl PackingInput {
    pub fn into_parts(&self) -> Result<(Triangulation, PackingData)> {
        let tri = Triangulation::new(self.radii.len(), self.faces.clone())?;
        let mut values: Vec<Option<f64>> = vec![None; tri.edges().len()];
        for ev in &self.inversive {
            let [i, j] = ev.edge;
            let id = tri.edge_id(i, j).ok_or_else(|| {
                GeomError::PackingInput(format!("edge [{i}, {j}] is not an edge of the triangulation"))
            })?;
            if values[id].replace(ev.value).is_some() {
                return Err(GeomError::PackingInput(format!("edge [{i}, {j}] is listed twice")));
            }
        }
        let inversive = values
            .iter()
            .zip(tri.edges())
            .map(|(v, e)| v.ok_or_else(|| GeomError::PackingInput(format!("edge {e:?} has no inversive distance"))))
            .collect::<Result<Vec<_>>>()?;
        let data = PackingData::new(&tri, inversive, self.radii.clone(), self.geometry)?;
        Ok((tri, data))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub edge: [usize; 2],
    pub inversive: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingEvaluation {
    pub geometry: Geometry,
    pub vertices: usize,
    pub euler_characteristic: i64,
    pub edges: Vec<EdgeRow>,
    pub faces: PolyhedralVerdict,
    pub curvature: Option<Vec<f64>>,
    pub gauss_bonnet_residual: Option<f64>,
}

pub fn evaluate_packing(input: &PackingInput) -> Result<PackingEvaluation> {
    let (tri, data) = input.into_parts()?;
    let metric = data.metric(&tri, input.geometry)?;
    let faces = validate_polyhedral(&tri, &metric);
    let (curvature, gauss_bonnet_residual) = if faces.valid {
        (Some(discrete_curvature(&tri, &metric)?), Some(gauss_bonnet_residual(&tri, &metric)?))
    } else {
        (None, None)
    };
    let edges = tri
        .edges()
        .iter()
        .enumerate()
        .map(|(k, &(u, v))| EdgeRow { edge: [u, v], inversive: data.inversive[k], length: metric.lengths[k] })
        .collect();
    Ok(PackingEvaluation {
        geometry: input.geometry,
        vertices: tri.vertex_count(),
        euler_characteristic: tri.euler_characteristic(),
        edges,
        faces,
        curvature,
        gauss_bonnet_residual,
    })
}

/// Boundary of the octahedron with vertices `±e₁, ±e₂, ±e₃` in the order
/// `+x, −x, +y, −y, +z, −z`.
pub fn octahedron() -> Triangulation {
    let mut faces = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                faces.push([x, y, z]);
            }
        }
    }
    Triangulation::new(6, faces).expect("octahedron")
}

pub fn tetrahedron() -> Triangulation {
    Triangulation::new(4, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).expect("tetrahedron")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circles::SphericalCircle;
    use nalgebra::Vector3;
    use std::f64::consts::FRAC_PI_4;

    fn uniform(tri: &Triangulation, l: f64) -> PolyhedralMetric {
        PolyhedralMetric { lengths: vec![l; tri.edges().len()], geometry: Geometry::Spherical }
    }

    #[test]
    fn spherical_edge_length_examples() {
        let l = edge_length_spherical(FRAC_PI_4, FRAC_PI_4, 1.0).unwrap();
        assert!((l - FRAC_PI_2).abs() < 1e-15);
        let l = edge_length_spherical(FRAC_PI_4, FRAC_PI_4, -1.0).unwrap();
        assert!(l.abs() < 1e-7);
        assert!(matches!(
            edge_length_spherical(FRAC_PI_4, FRAC_PI_4, 3.0),
            Err(GeomError::Infeasible { .. })
        ));
    }

    #[test]
    fn euclidean_edge_length_examples() {
        assert_eq!(edge_length_euclidean(0.7, 0.7, -1.0), 0.0);
        assert!((edge_length_euclidean(0.7, 0.7, 1.0) - 1.4).abs() < 1e-15);
        assert_eq!(edge_length_euclidean(3.0, 4.0, 0.0), 5.0);
    }

    #[test]
    fn validation_examples() {
        let oct = octahedron();
        assert!(validate_polyhedral(&oct, &uniform(&oct, FRAC_PI_2)).valid);

        let tet = tetrahedron();
        let mut m = uniform(&tet, 1.0);
        m.lengths[tet.edge_id(0, 1).unwrap()] = 2.5;
        let v = validate_polyhedral(&tet, &m);
        assert!(!v.valid);
        assert!(v.violations.iter().any(|s| s.contains("triangle inequality")));

        let v = validate_polyhedral(&tet, &uniform(&tet, 2.2));
        assert!(!v.valid);
        assert!(v.violations.iter().all(|s| s.contains("perimeter")));
        assert_eq!(v.violations.len(), 4);
    }

    #[test]
    fn angle_examples() {
        let a = triangle_angles_spherical(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        for x in a {
            assert!((x - FRAC_PI_2).abs() < 1e-15);
        }
        let l = (-1.0f64 / 3.0).acos();
        for x in triangle_angles_spherical(l, l, l).unwrap() {
            assert!((x - 2.0 * PI / 3.0).abs() < 1e-14);
        }
        assert!(triangle_angles_spherical(1e-13, 1.0, 1.0).is_err());
    }

    #[test]
    fn small_equilateral_matches_lhuilier() {
        let l = 0.1f64;
        let angles = triangle_angles_spherical(l, l, l).unwrap();
        // L'Huilier: tan(E/4)² = tan(s/2) tan((s−a)/2)³
        let s = 1.5 * l;
        let e = 4.0 * ((s / 2.0).tan() * ((s - l) / 2.0).tan().powi(3)).sqrt().atan();
        for x in angles {
            assert!(x > PI / 3.0);
            assert!((x - (PI + e) / 3.0).abs() < 1e-13);
            assert!((x - PI / 3.0).abs() < 2e-3);
        }
    }

    #[test]
    fn curvature_examples() {
        let oct = octahedron();
        for k in discrete_curvature(&oct, &uniform(&oct, FRAC_PI_2)).unwrap() {
            assert!(k.abs() < 1e-14);
        }
        let tet = tetrahedron();
        for k in discrete_curvature(&tet, &uniform(&tet, (-1.0f64 / 3.0).acos())).unwrap() {
            assert!(k.abs() < 1e-13);
        }
        let ks = discrete_curvature(&oct, &uniform(&oct, 1.0)).unwrap();
        // four corners of the equilateral triangle with side 1
        let theta = ((1f64.cos() - 1f64.cos().powi(2)) / 1f64.sin().powi(2)).acos();
        for k in &ks {
            assert!(*k > 0.0);
            assert!((k - (TAU - 4.0 * theta)).abs() < 1e-13);
        }
    }

    #[test]
    fn gauss_bonnet_on_regular_solids() {
        let oct = octahedron();
        assert!(gauss_bonnet_residual(&oct, &uniform(&oct, FRAC_PI_2)).unwrap().abs() < 1e-9);
        assert!(gauss_bonnet_residual(&oct, &uniform(&oct, 0.8)).unwrap().abs() < 1e-9);
        let tet = tetrahedron();
        let l = (-1.0f64 / 3.0).acos();
        assert!(gauss_bonnet_residual(&tet, &uniform(&tet, l)).unwrap().abs() < 1e-9);
    }

    #[test]
    fn octahedral_packing_from_circles() {
        let oct = octahedron();
        let centers = [Vector3::x(), -Vector3::x(), Vector3::y(), -Vector3::y(), Vector3::z(), -Vector3::z()];
        let cfg = CircleConfiguration::from_circles(
            centers.iter().map(|c| SphericalCircle::new(*c, FRAC_PI_4).unwrap()).collect(),
        )
        .unwrap();
        let p = packing_from_circles(&oct, &cfg).unwrap();
        for (i, l) in p.data.inversive.iter().zip(&p.metric.lengths) {
            assert!((i - 1.0).abs() < 1e-15);
            assert!((l - FRAC_PI_2).abs() < 1e-15);
        }
        assert!(p.rederivation_error < 1e-10);

        let rot = nalgebra::Rotation3::from_euler_angles(0.4, 0.1, -0.9);
        let turned = CircleConfiguration::from_circles(
            cfg.circles().iter().map(|c| SphericalCircle::new(rot * c.center(), c.radius()).unwrap()).collect(),
        )
        .unwrap();
        let q = packing_from_circles(&oct, &turned).unwrap();
        for (a, b) in p.data.inversive.iter().zip(&q.data.inversive) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn octahedron_has_48_automorphisms() {
        assert_eq!(octahedron().automorphisms().len(), 48);
        assert_eq!(tetrahedron().automorphisms().len(), 24);
    }

    #[test]
    fn triangulation_rejects_bad_input() {
        let err = Triangulation::new(4, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap_err();
        assert!(err.to_string().contains("lies on 1 faces"));
        let err = Triangulation::new(4, vec![[0, 1, 2], [2, 1, 0], [0, 2, 3], [1, 2, 3]]).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
        let err = Triangulation::new(3, vec![[0, 1, 5]]).unwrap_err();
        assert!(err.to_string().contains("vertex 5"));
        // two tetrahedra glued at a vertex: edges are fine, the star of 0 is not a cycle
        let mut faces = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        faces.extend([[0, 4, 5], [0, 4, 6], [0, 5, 6], [4, 5, 6]]);
        let err = Triangulation::new(7, faces).unwrap_err();
        assert!(err.to_string().contains("star of vertex 0"));
    }

    #[test]
    fn json_input_diagnostics() {
        let doc = r#"{"faces": [[0,1,2],[0,1,3],[0,2,3],[1,2,3]],
            "inversive": [{"edge":[0,1],"value":1.0},{"edge":[1,0],"value":1.0}],
            "radii": [0.5,0.5,0.5,0.5], "geometry": "spherical"}"#;
        let input: PackingInput = serde_json::from_str(doc).unwrap();
        assert!(input.into_parts().unwrap_err().to_string().contains("listed twice"));

        let doc = r#"{"faces": [[0,1,2],[0,1,3],[0,2,3],[1,2,3]],
            "inversive": [{"edge":[0,1],"value":1.0}],
            "radii": [0.5,0.5,0.5,0.5], "geometry": "spherical"}"#;
        let input: PackingInput = serde_json::from_str(doc).unwrap();
        assert!(input.into_parts().unwrap_err().to_string().contains("no inversive distance"));
    }
}
