//! The end-to-end construction: flexed Schönhardt octahedra, their Pogorelov
//! lifts to de Sitter space, the dual circle packings, and the comparison
//! that certifies non-rigidity.

mod export;
mod report;
mod sweep;

pub use export::{
    export_circles, stereographic_circle, CircleSet, ExportDocument, ExportFormat, LabeledCircle,
    PlaneImage,
};
pub use report::*;
pub use sweep::sweep;

use serde::{Deserialize, Serialize};

use crate::circles::{
    dual_circle, gram_matrix, inversive_distance_with, mobius_equivalent, CircleConfiguration,
    Convention, GramMatrix,
};
use crate::error::{GeomError, Result};
use crate::flexahedron::{
    admissibility_check, ball_conditions, build_schonhardt, congruence_test, diagonal_lengths,
    edge_lengths, edge_name, flex_directions, flex_null_space_alignment, flexed_with,
    first_order_flex_residual, rigidity_null_space, schonhardt_triangulation, Label,
    LabeledPolyhedron, SchonhardtParams, DIAGONALS, EDGES,
};
use crate::lorentz::{ds_separation_with, DeSitterPoint, SeparationClass, SignFlag};
use crate::packing::{discrete_curvature, gauss_bonnet_residual, packing_from_circles, validate_polyhedral};
use crate::pogorelov::{domain_g, in_phi_image, phi, phi_inverse, PointPairDS, PointPairE3};
use crate::tolerance::{Tolerances, CONGRUENCE, ISOMETRY_FIT};

/// Relative singular-value cutoff for the rigidity null space.
const NULL_SPACE_REL_TOL: f64 = 1e-9;

pub const STAGES: [&str; 11] = [
    "admissibility",
    "flex",
    "euclidean-edges",
    "phi-domain",
    "pogorelov-inverse",
    "time-likeness",
    "gram",
    "circles",
    "packing",
    "curvature",
    "mobius",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub a: f64,
    pub h: f64,
    pub t: f64,
    pub tol: Tolerances,
    pub convention: Convention,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        let s = SchonhardtParams::default();
        Self { a: s.a, h: s.h, t: s.t, tol: Tolerances::default(), convention: Convention::default() }
    }
}

impl CounterexampleParams {
    pub fn new(a: f64, h: f64, t: f64) -> Self {
        Self { a, h, t, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        SchonhardtParams { a: self.a, h: self.h, t: self.t }.validate()?;
        let tol = &self.tol;
        let all = [tol.model, tol.ball, tol.equality, tol.exact, tol.distinct, tol.curvature];
        if all.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(GeomError::InvalidParams("tolerances must be finite and positive".into()));
        }
        Ok(())
    }

    fn report_params(&self) -> ReportParams {
        ReportParams { a: self.a, h: self.h, t: self.t, tolerances: self.tol, convention: self.convention }
    }
}

struct Builder {
    report: CounterexampleReport,
}

impl Builder {
    fn new(params: &CounterexampleParams) -> Self {
        let stages = STAGES
            .iter()
            .map(|n| StageRecord { name: n.to_string(), status: StageStatus::NotEvaluated, margin: None, detail: None })
            .collect();
        Self {
            report: CounterexampleReport {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                params: params.report_params(),
                stages,
                admissibility: Section::NotEvaluated,
                flex: Section::NotEvaluated,
                euclidean: Section::NotEvaluated,
                phi_domain: Section::NotEvaluated,
                de_sitter: Section::NotEvaluated,
                separations: Section::NotEvaluated,
                gram: Section::NotEvaluated,
                circles: Section::NotEvaluated,
                packing: Section::NotEvaluated,
                curvature: Section::NotEvaluated,
                mobius: Section::NotEvaluated,
                verdict: Verdict::Failed,
                failed_stage: None,
            },
        }
    }

    /// Records the stage outcome; returns whether the pipeline may continue.
    fn record(&mut self, name: &str, passed: bool, margin: Option<f64>, detail: Option<String>) -> bool {
        let stage = self.report.stages.iter_mut().find(|s| s.name == name).expect("known stage");
        stage.status = if passed { StageStatus::Passed } else { StageStatus::Failed };
        stage.margin = margin;
        stage.detail = detail;
        if !passed {
            self.report.failed_stage = Some(name.to_string());
            self.report.verdict = Verdict::Failed;
        }
        passed
    }

    fn fail(mut self, name: &str, detail: String) -> CounterexampleReport {
        self.record(name, false, None, Some(detail));
        self.report
    }
}

fn labeled_points(p: &LabeledPolyhedron) -> Vec<LabeledPoint> {
    Label::ALL
        .iter()
        .map(|&l| {
            let v = p.vertex(l);
            LabeledPoint { label: l.name().to_string(), position: [v.x, v.y, v.z] }
        })
        .collect()
}

fn length_rows(pairs: &[(Label, Label)], plus: &[f64], minus: &[f64]) -> Vec<LengthRow> {
    pairs
        .iter()
        .zip(plus.iter().zip(minus))
        .map(|(&e, (&p, &m))| LengthRow { edge: edge_name(e), plus: p, minus: m, deviation: (p - m).abs() })
        .collect()
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn min_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

/// Flexed pair `(Q_t, Q_−t)` and the Pogorelov lift `(P_t, P_−t)`.
struct Lifted {
    plus: Vec<DeSitterPoint>,
    minus: Vec<DeSitterPoint>,
}

fn lift_pairs(q_plus: &LabeledPolyhedron, q_minus: &LabeledPolyhedron) -> Result<Lifted> {
    let mut plus = Vec::with_capacity(6);
    let mut minus = Vec::with_capacity(6);
    for l in Label::ALL {
        let pair = phi_inverse(&PointPairE3::new(q_plus.vertex(l), q_minus.vertex(l)))?;
        plus.push(pair.first);
        minus.push(pair.second);
    }
    Ok(Lifted { plus, minus })
}

fn gram_of(points: &[DeSitterPoint]) -> GramMatrix {
    gram_matrix(&CircleConfiguration::from_lifts(points.to_vec()))
}

/// Runs every stage of the construction. `Err` only for invalid parameters;
/// stage failures are recorded in the report with `verdict = failed`.
pub fn run_counterexample(params: &CounterexampleParams) -> Result<CounterexampleReport> {
    params.validate()?;
    let tol = params.tol;
    let t = params.t;
    let mut b = Builder::new(params);

    // admissibility
    let adm = admissibility_check(params.a, params.h);
    b.report.admissibility = Section::Evaluated(adm);
    let margin = [adm.ineq1.margin, adm.ineq2.margin, adm.ineq3.margin, adm.vertex_check.margin, adm.edge_check.margin]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let detail = (!adm.passes()).then(|| {
        let mut failed = Vec::new();
        for (name, ok) in [
            ("h^2 + a^2/3 > 1", adm.ineq1.holds),
            ("h^2 + a^2/12 < 1", adm.ineq2.holds),
            ("a^2/3 < 1", adm.ineq3.holds),
            ("vertices outside the ball", adm.vertex_check.holds),
            ("edges meet the ball", adm.edge_check.holds),
        ] {
            if !ok {
                failed.push(name);
            }
        }
        format!("violated: {}", failed.join(", "))
    });
    if !b.record("admissibility", adm.passes(), Some(margin), detail) {
        return Ok(b.report);
    }

    // flex
    let q = build_schonhardt(params.a, params.h);
    let field = match flex_directions(&q) {
        Ok(f) => f,
        Err(e) => return Ok(b.fail("flex", e.to_string())),
    };
    let residual = match first_order_flex_residual(&q) {
        Ok(r) => r,
        Err(e) => return Ok(b.fail("flex", e.to_string())),
    };
    let null = rigidity_null_space(&q, NULL_SPACE_REL_TOL);
    let alignment = flex_null_space_alignment(&field, &null);
    let q_plus = flexed_with(&q, &field, t);
    let q_minus = flexed_with(&q, &field, -t);
    let (flexed_plus, flexed_minus) = (ball_conditions(&q_plus, tol.ball), ball_conditions(&q_minus, tol.ball));
    b.report.flex = Section::Evaluated(FlexSection {
        eta: field.eta.map(|v| [v.x, v.y, v.z]),
        first_order_residual: residual,
        null_space_dimension: null.dimension,
        singular_values: null.singular_values.clone(),
        null_space_alignment: alignment,
        flexed_plus,
        flexed_minus,
    });
    let mut problems = Vec::new();
    if residual > tol.equality {
        problems.push(format!("first-order residual {residual:e} exceeds {:e}", tol.equality));
    }
    if null.dimension == 0 {
        problems.push("rigidity matrix has trivial null space".to_string());
    }
    if alignment > ISOMETRY_FIT {
        problems.push(GeomError::FlexMismatch(alignment).to_string());
    }
    if !flexed_plus.holds() || !flexed_minus.holds() {
        problems.push("flexed polyhedron violates the ball conditions".to_string());
    }
    let margin = [
        tol.equality - residual,
        ISOMETRY_FIT - alignment,
        flexed_plus.vertex_check.margin,
        flexed_plus.edge_check.margin,
        flexed_minus.vertex_check.margin,
        flexed_minus.edge_check.margin,
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    if !b.record("flex", problems.is_empty(), Some(margin), (!problems.is_empty()).then(|| problems.join("; "))) {
        return Ok(b.report);
    }

    // Euclidean edge lengths
    let (el_plus, el_minus) = (edge_lengths(&q_plus), edge_lengths(&q_minus));
    let (dl_plus, dl_minus) = (diagonal_lengths(&q_plus), diagonal_lengths(&q_minus));
    let edges = length_rows(&EDGES, &el_plus, &el_minus);
    let diagonals = length_rows(&DIAGONALS, &dl_plus, &dl_minus);
    let max_edge_deviation = max_of(edges.iter().map(|r| r.deviation));
    let min_diagonal_deviation = min_of(diagonals.iter().map(|r| r.deviation));
    b.report.euclidean = Section::Evaluated(EuclideanSection {
        vertices_plus: labeled_points(&q_plus),
        vertices_minus: labeled_points(&q_minus),
        edges,
        diagonals,
        max_edge_deviation,
        min_diagonal_deviation,
        congruence: congruence_test(&q_plus, &q_minus, CONGRUENCE),
    });
    let ok = max_edge_deviation <= tol.exact;
    let detail = (!ok).then(|| format!("edge lengths of Q_t and Q_-t differ by {max_edge_deviation:e}"));
    if !b.record("euclidean-edges", ok, Some(tol.exact - max_edge_deviation), detail) {
        return Ok(b.report);
    }

    // Φ-domain
    let rows: Vec<PhiDomainRow> = Label::ALL
        .iter()
        .map(|&l| {
            let pair = PointPairE3::new(q_plus.vertex(l), q_minus.vertex(l));
            PhiDomainRow {
                label: l.name().to_string(),
                norm_gap: pair.norm_gap(),
                g: domain_g(pair.xi.norm(), pair.eta.norm()),
                in_image: in_phi_image(&pair),
            }
        })
        .collect();
    let ok = rows.iter().all(|r| r.in_image);
    let margin = min_of(rows.iter().map(|r| 4.0 - r.norm_gap.abs()));
    let detail = (!ok).then(|| {
        let bad: Vec<&str> = rows.iter().filter(|r| !r.in_image).map(|r| r.label.as_str()).collect();
        format!("vertex pairs outside the image of the Pogorelov map: {}", bad.join(", "))
    });
    b.report.phi_domain = Section::Evaluated(rows);
    if !b.record("phi-domain", ok, Some(margin), detail) {
        return Ok(b.report);
    }

    // Φ⁻¹
    let lifted = match lift_pairs(&q_plus, &q_minus) {
        Ok(l) => l,
        Err(e) => return Ok(b.fail("pogorelov-inverse", e.to_string())),
    };
    let round_trip_error = max_of(Label::ALL.iter().map(|&l| {
        let k = l.index();
        let back = phi(&PointPairDS::new(lifted.plus[k], lifted.minus[k]));
        (back.xi - q_plus.vertex(l)).amax().max((back.eta - q_minus.vertex(l)).amax())
    }));
    let lifts = |points: &[DeSitterPoint]| {
        Label::ALL
            .iter()
            .map(|&l| LabeledLift { label: l.name().to_string(), coords: points[l.index()].vec().to_array() })
            .collect()
    };
    b.report.de_sitter = Section::Evaluated(DeSitterSection {
        lifts_plus: lifts(&lifted.plus),
        lifts_minus: lifts(&lifted.minus),
        round_trip_error,
    });
    let ok = round_trip_error <= tol.equality;
    let detail = (!ok).then(|| format!("Pogorelov round trip error {round_trip_error:e}"));
    if !b.record("pogorelov-inverse", ok, Some(tol.equality - round_trip_error), detail) {
        return Ok(b.report);
    }

    // time-likeness of the edges
    let rows: Vec<SeparationRow> = EDGES
        .iter()
        .map(|&(p, q)| SeparationRow {
            edge: edge_name((p, q)),
            plus: ds_separation_with(&lifted.plus[p.index()], &lifted.plus[q.index()], tol.model),
            minus: ds_separation_with(&lifted.minus[p.index()], &lifted.minus[q.index()], tol.model),
        })
        .collect();
    let anti = |s: &crate::lorentz::DsSeparation| {
        s.class == SeparationClass::TimeLike && s.sign_flag == Some(SignFlag::AntiAligned)
    };
    let bad: Vec<String> = rows.iter().filter(|r| !(anti(&r.plus) && anti(&r.minus))).map(|r| r.edge.clone()).collect();
    let margin = min_of(rows.iter().flat_map(|r| [r.plus.value, r.minus.value]));
    let detail = (!bad.is_empty()).then(|| format!("edges not time-like through the ball: {}", bad.join(", ")));
    b.report.separations = Section::Evaluated(rows);
    if !b.record("time-likeness", bad.is_empty(), Some(margin), detail) {
        return Ok(b.report);
    }

    // Gram matrices
    let (g_plus, g_minus) = (gram_of(&lifted.plus), gram_of(&lifted.minus));
    let entry_dev = |(p, q): (Label, Label)| (g_plus.get(p.index(), q.index()) - g_minus.get(p.index(), q.index())).abs();
    let edge_max_deviation = max_of(EDGES.iter().map(|&e| entry_dev(e)));
    let diagonal_min_deviation = min_of(DIAGONALS.iter().map(|&e| entry_dev(e)));
    b.report.gram = Section::Evaluated(GramSection {
        plus: g_plus.to_rows(),
        minus: g_minus.to_rows(),
        edge_max_deviation,
        diagonal_min_deviation,
        diagonal_slope: (t != 0.0).then(|| diagonal_min_deviation / t.abs()),
    });
    let ok = edge_max_deviation <= tol.equality;
    let detail = (!ok).then(|| format!("edge Gram entries differ by {edge_max_deviation:e}"));
    if !b.record("gram", ok, Some(tol.equality - edge_max_deviation), detail) {
        return Ok(b.report);
    }

    // dual circles
    let circles_plus: Vec<_> = lifted.plus.iter().map(dual_circle).collect();
    let circles_minus: Vec<_> = lifted.minus.iter().map(dual_circle).collect();
    let rows = |cs: &[crate::circles::SphericalCircle]| {
        Label::ALL
            .iter()
            .map(|&l| {
                let c = &cs[l.index()];
                let v = c.center();
                CircleRow { label: l.name().to_string(), center: [v.x, v.y, v.z], radius: c.radius() }
            })
            .collect()
    };
    b.report.circles = Section::Evaluated(CircleSection { plus: rows(&circles_plus), minus: rows(&circles_minus) });
    let cfg_plus = match CircleConfiguration::from_circles(circles_plus) {
        Ok(c) => c,
        Err(e) => return Ok(b.fail("circles", e.to_string())),
    };
    let cfg_minus = match CircleConfiguration::from_circles(circles_minus) {
        Ok(c) => c,
        Err(e) => return Ok(b.fail("circles", e.to_string())),
    };
    let dual_error = max_of(
        cfg_plus
            .lifts()
            .iter()
            .zip(&lifted.plus)
            .chain(cfg_minus.lifts().iter().zip(&lifted.minus))
            .map(|(x, y)| x.vec().max_abs_diff(y.vec())),
    );
    let ok = dual_error <= tol.equality;
    let detail = (!ok).then(|| format!("dual circles do not reproduce the lifts ({dual_error:e})"));
    if !b.record("circles", ok, Some(tol.equality - dual_error), detail) {
        return Ok(b.report);
    }

    // packings on the octahedral triangulation
    let tri = schonhardt_triangulation();
    let pk_plus = match packing_from_circles(&tri, &cfg_plus) {
        Ok(p) => p,
        Err(e) => return Ok(b.fail("packing", e.to_string())),
    };
    let pk_minus = match packing_from_circles(&tri, &cfg_minus) {
        Ok(p) => p,
        Err(e) => return Ok(b.fail("packing", e.to_string())),
    };
    let inversive: Vec<InversiveRow> = EDGES
        .iter()
        .map(|&(p, q)| {
            let (i, j) = (p.index(), q.index());
            let ip = inversive_distance_with(&cfg_plus.circles()[i], &cfg_plus.circles()[j], params.convention);
            let im = inversive_distance_with(&cfg_minus.circles()[i], &cfg_minus.circles()[j], params.convention);
            InversiveRow { edge: edge_name((p, q)), plus: ip, minus: im, deviation: (ip - im).abs() }
        })
        .collect();
    let radii: Vec<RadiusRow> = Label::ALL
        .iter()
        .map(|&l| {
            let (rp, rm) = (pk_plus.data.radii[l.index()], pk_minus.data.radii[l.index()]);
            RadiusRow { label: l.name().to_string(), plus: rp, minus: rm, deviation: (rp - rm).abs() }
        })
        .collect();
    let max_inversive_deviation = max_of(inversive.iter().map(|r| r.deviation));
    let bottom_radius_max_deviation = max_of(radii.iter().filter(|r| !label_is_top(&r.label)).map(|r| r.deviation));
    let top_radius_min_deviation = min_of(radii.iter().filter(|r| label_is_top(&r.label)).map(|r| r.deviation));
    let faces_plus = validate_polyhedral(&tri, &pk_plus.metric);
    let faces_minus = validate_polyhedral(&tri, &pk_minus.metric);
    let rederivation_error = pk_plus.rederivation_error.max(pk_minus.rederivation_error);
    let mut problems = Vec::new();
    if max_inversive_deviation > tol.equality {
        problems.push(format!("inversive distances differ by {max_inversive_deviation:e}"));
    }
    if !faces_plus.valid || !faces_minus.valid {
        problems.push("a face violates the spherical triangle inequalities".to_string());
    }
    if rederivation_error > tol.equality {
        problems.push(format!("edge lengths rederived from (r, I) off by {rederivation_error:e}"));
    }
    b.report.packing = Section::Evaluated(PackingSection {
        inversive,
        radii,
        max_inversive_deviation,
        bottom_radius_max_deviation,
        top_radius_min_deviation,
        faces_plus: faces_plus.clone(),
        faces_minus: faces_minus.clone(),
        rederivation_error,
    });
    let margin = tol.equality - max_inversive_deviation.max(rederivation_error);
    if !b.record("packing", problems.is_empty(), Some(margin), (!problems.is_empty()).then(|| problems.join("; "))) {
        return Ok(b.report);
    }

    // curvature
    let curv = discrete_curvature(&tri, &pk_plus.metric).and_then(|kp| {
        let km = discrete_curvature(&tri, &pk_minus.metric)?;
        let gp = gauss_bonnet_residual(&tri, &pk_plus.metric)?;
        let gm = gauss_bonnet_residual(&tri, &pk_minus.metric)?;
        Ok((kp, km, gp, gm))
    });
    let (k_plus, k_minus, gb_plus, gb_minus) = match curv {
        Ok(c) => c,
        Err(e) => return Ok(b.fail("curvature", e.to_string())),
    };
    let max_abs_curvature = max_of(k_plus.iter().chain(&k_minus).map(|k| k.abs()));
    b.report.curvature = Section::Evaluated(CurvatureSection {
        curvature: Label::ALL
            .iter()
            .map(|&l| CurvatureRow { label: l.name().to_string(), plus: k_plus[l.index()], minus: k_minus[l.index()] })
            .collect(),
        max_abs_curvature,
        gauss_bonnet_plus: gb_plus,
        gauss_bonnet_minus: gb_minus,
    });
    let ok = max_abs_curvature <= tol.curvature;
    let detail = (!ok).then(|| format!("vertex curvature {max_abs_curvature:e} exceeds {:e}", tol.curvature));
    if !b.record("curvature", ok, Some(tol.curvature - max_abs_curvature), detail) {
        return Ok(b.report);
    }

    // Möbius equivalence up to relabeling
    let autos = tri.automorphisms();
    let verdict = match mobius_equivalent(&cfg_plus, &cfg_minus, &autos, tol.equality) {
        Ok(v) => v,
        Err(e) => return Ok(b.fail("mobius", e.to_string())),
    };
    let witness_labels = match &verdict {
        crate::circles::MobiusVerdict::Inequivalent { witness: (i, j), .. } => {
            Some((Label::ALL[*i].name().to_string(), Label::ALL[*j].name().to_string()))
        }
        _ => None,
    };
    let deviation = verdict.deviation();
    let equivalent = verdict.is_equivalent();
    b.report.mobius = Section::Evaluated(MobiusSection {
        relabelings: autos.len(),
        lift_rank_plus: cfg_plus.lift_rank(),
        lift_rank_minus: cfg_minus.lift_rank(),
        result: verdict,
        witness_labels,
    });
    b.record("mobius", true, Some(deviation - tol.distinct), None);
    b.report.verdict = if equivalent {
        Verdict::NotACounterexample
    } else if deviation >= tol.distinct {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    };
    Ok(b.report)
}

fn label_is_top(name: &str) -> bool {
    name.ends_with('0')
}

/// Hyperideal edge lengths `arcosh(−<xᵢ,xⱼ>)` of `P_t` and `P_−t`.
pub fn hyperideal_report(params: &CounterexampleParams) -> Result<HyperidealReport> {
    params.validate()?;
    let adm = admissibility_check(params.a, params.h);
    if !adm.passes() {
        return Err(GeomError::InvalidParams(format!(
            "parameters are not admissible (a = {}, h = {})",
            params.a, params.h
        )));
    }
    let q = build_schonhardt(params.a, params.h);
    let field = flex_directions(&q)?;
    let q_plus = flexed_with(&q, &field, params.t);
    let q_minus = flexed_with(&q, &field, -params.t);
    let lifted = lift_pairs(&q_plus, &q_minus)?;
    let length = |pts: &[DeSitterPoint], p: Label, q: Label| -> Result<f64> {
        let c = -pts[p.index()].inner(&pts[q.index()]);
        if c < 1.0 {
            return Err(GeomError::NotTimeLike(format!("{p}{q}: -<x,y> = {c}")));
        }
        Ok(c.acosh())
    };
    let rows = |pairs: &[(Label, Label)]| -> Result<Vec<HyperidealRow>> {
        pairs
            .iter()
            .map(|&(p, q)| {
                let (lp, lm) = (length(&lifted.plus, p, q)?, length(&lifted.minus, p, q)?);
                Ok(HyperidealRow { edge: edge_name((p, q)), plus: lp, minus: lm, deviation: (lp - lm).abs() })
            })
            .collect()
    };
    let edges = rows(&EDGES)?;
    let diagonals = rows(&DIAGONALS)?;
    Ok(HyperidealReport {
        params: params.report_params(),
        max_edge_discrepancy: max_of(edges.iter().map(|r| r.deviation)),
        max_diagonal_discrepancy: max_of(diagonals.iter().map(|r| r.deviation)),
        edges,
        diagonals,
    })
}
