//! Report types emitted by the pipeline. Field names are part of the JSON
//! schema and must stay fixed.

use serde::{Deserialize, Serialize};

use crate::circles::{Convention, MobiusVerdict};
use crate::flexahedron::{Admissibility, BallConditions, CongruenceVerdict};
use crate::lorentz::DsSeparation;
use crate::packing::PolyhedralVerdict;
use crate::tolerance::Tolerances;

/// A report section that is either computed or skipped because an earlier
/// stage failed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "kebab-case")]
pub enum Section<T> {
    Evaluated(T),
    #[default]
    NotEvaluated,
}

impl<T> Section<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Section::Evaluated(v) => Some(v),
            Section::NotEvaluated => None,
        }
    }

    pub fn is_evaluated(&self) -> bool {
        matches!(self, Section::Evaluated(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageStatus {
    Passed,
    Failed,
    NotEvaluated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub status: StageStatus,
    /// Signed slack of the stage's deciding check; negative on failure.
    pub margin: Option<f64>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every stage passed and the two packings are Möbius-inequivalent.
    Certified,
    /// Every stage passed but the packings are Möbius-equivalent.
    NotACounterexample,
    /// Inequivalent, but by less than the distinctness threshold.
    Inconclusive,
    /// A verification stage failed.
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub a: f64,
    pub h: f64,
    pub t: f64,
    pub tolerances: Tolerances,
    pub convention: Convention,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlexSection {
    pub eta: [[f64; 3]; 3],
    pub first_order_residual: f64,
    pub null_space_dimension: usize,
    pub singular_values: Vec<f64>,
    pub null_space_alignment: f64,
    pub flexed_plus: BallConditions,
    pub flexed_minus: BallConditions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthRow {
    pub edge: String,
    pub plus: f64,
    pub minus: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclideanSection {
    pub vertices_plus: Vec<LabeledPoint>,
    pub vertices_minus: Vec<LabeledPoint>,
    pub edges: Vec<LengthRow>,
    pub diagonals: Vec<LengthRow>,
    pub max_edge_deviation: f64,
    pub min_diagonal_deviation: f64,
    pub congruence: CongruenceVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiDomainRow {
    pub label: String,
    /// `|ξ|² − |η|²`, must lie in (−4, 4).
    pub norm_gap: f64,
    pub g: f64,
    pub in_image: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledLift {
    pub label: String,
    pub coords: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeSitterSection {
    pub lifts_plus: Vec<LabeledLift>,
    pub lifts_minus: Vec<LabeledLift>,
    /// `max |Φ(P_t, P_−t) − (v_t, v_−t)|` over the vertices.
    pub round_trip_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationRow {
    pub edge: String,
    pub plus: DsSeparation,
    pub minus: DsSeparation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSection {
    pub plus: Vec<Vec<f64>>,
    pub minus: Vec<Vec<f64>>,
    pub edge_max_deviation: f64,
    pub diagonal_min_deviation: f64,
    /// `diagonal_min_deviation / |t|`, the measured constant `c` in `≥ c·t`.
    pub diagonal_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleRow {
    pub label: String,
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSection {
    pub plus: Vec<CircleRow>,
    pub minus: Vec<CircleRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversiveRow {
    pub edge: String,
    pub plus: f64,
    pub minus: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub label: String,
    pub plus: f64,
    pub minus: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingSection {
    /// Inversive distances in the report's convention.
    pub inversive: Vec<InversiveRow>,
    pub radii: Vec<RadiusRow>,
    pub max_inversive_deviation: f64,
    pub bottom_radius_max_deviation: f64,
    pub top_radius_min_deviation: f64,
    pub faces_plus: PolyhedralVerdict,
    pub faces_minus: PolyhedralVerdict,
    pub rederivation_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub label: String,
    pub plus: f64,
    pub minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSection {
    pub curvature: Vec<CurvatureRow>,
    pub max_abs_curvature: f64,
    pub gauss_bonnet_plus: f64,
    pub gauss_bonnet_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobiusSection {
    pub relabelings: usize,
    pub lift_rank_plus: usize,
    pub lift_rank_minus: usize,
    pub result: MobiusVerdict,
    /// Witness entry as labels, when inequivalent.
    pub witness_labels: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub tool_version: String,
    pub params: ReportParams,
    pub stages: Vec<StageRecord>,
    pub admissibility: Section<Admissibility>,
    pub flex: Section<FlexSection>,
    pub euclidean: Section<EuclideanSection>,
    pub phi_domain: Section<Vec<PhiDomainRow>>,
    pub de_sitter: Section<DeSitterSection>,
    pub separations: Section<Vec<SeparationRow>>,
    pub gram: Section<GramSection>,
    pub circles: Section<CircleSection>,
    pub packing: Section<PackingSection>,
    pub curvature: Section<CurvatureSection>,
    pub mobius: Section<MobiusSection>,
    pub verdict: Verdict,
    pub failed_stage: Option<String>,
}

impl CounterexampleReport {
    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperidealRow {
    pub edge: String,
    /// `arcosh(−<xᵢ,xⱼ>)` for `P_t`.
    pub plus: f64,
    pub minus: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperidealReport {
    pub params: ReportParams,
    pub edges: Vec<HyperidealRow>,
    pub diagonals: Vec<HyperidealRow>,
    pub max_edge_discrepancy: f64,
    pub max_diagonal_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub h: f64,
    pub t: f64,
    pub verdict: Option<Verdict>,
    pub failed_stage: Option<String>,
    pub max_inversive_deviation: Option<f64>,
    pub diagonal_gram_min_deviation: Option<f64>,
    pub mobius_deviation: Option<f64>,
    pub error: Option<String>,
}
