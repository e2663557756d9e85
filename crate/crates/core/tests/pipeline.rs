use prl_core::circles::CircleConfiguration;
use prl_core::pipeline::{
    export_circles, run_counterexample, sweep, CircleSet, CounterexampleParams, CounterexampleReport, ExportFormat,
    StageStatus, Verdict, STAGES,
};
use prl_core::tolerance::Tolerances;
use prl_core::Convention;

#[test]
fn stages_are_recorded_in_order() {
    let report = run_counterexample(&CounterexampleParams::default()).unwrap();
    let names: Vec<&str> = report.stages.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, STAGES);
    assert!(report.stages.iter().all(|s| s.status == StageStatus::Passed && s.margin.unwrap() > 0.0));
}

#[test]
fn diagonal_gram_gap_is_linear_in_t() {
    let slope = |t: f64| {
        let r = run_counterexample(&CounterexampleParams::new(1.55, 0.5, t)).unwrap();
        r.gram.value().unwrap().diagonal_slope.unwrap()
    };
    let (s1, s2) = (slope(0.01), slope(0.005));
    assert!(s1 > 0.0);
    assert!((s1 / s2 - 1.0).abs() < 0.01, "{s1} vs {s2}");
}

#[test]
fn negative_t_swaps_the_packings() {
    let plus = run_counterexample(&CounterexampleParams::new(1.55, 0.5, 0.01)).unwrap();
    let minus = run_counterexample(&CounterexampleParams::new(1.55, 0.5, -0.01)).unwrap();
    assert_eq!(minus.verdict, Verdict::Certified);
    let (a, b) = (plus.circles.value().unwrap(), minus.circles.value().unwrap());
    for (x, y) in a.plus.iter().zip(&b.minus) {
        assert!((x.radius - y.radius).abs() < 1e-12);
    }
}

#[test]
fn failed_reports_still_serialize() {
    let report = run_counterexample(&CounterexampleParams::new(1.9, 0.3, 0.01)).unwrap();
    assert_eq!(report.verdict, Verdict::Failed);
    let text = report.to_json();
    let back: CounterexampleReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.failed_stage.as_deref(), Some("admissibility"));
    assert!(text.contains("\"status\": \"not-evaluated\""));
}

#[test]
fn sweep_over_admissible_points_certifies_nonzero_flexes() {
    let rows = sweep(&[1.55, 1.6, 1.65], &[0.5, 0.6], &[-0.02, 0.01], Tolerances::default(), Convention::Corrected);
    assert_eq!(rows.len(), 12);
    for row in rows {
        assert_eq!(row.verdict, Some(Verdict::Certified), "{row:?}");
        assert!(row.mobius_deviation.unwrap() >= 1e-4);
    }
}

#[test]
fn exported_circles_match_the_report() {
    let report = run_counterexample(&CounterexampleParams::default()).unwrap();
    let sets = CircleSet::from_report(&report).unwrap();
    let doc = export_circles(&sets, ExportFormat::Json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&doc.content).unwrap();
    let r0 = v["sets"][0]["circles"][0]["radius"].as_f64().unwrap();
    let expected = report.circles.value().unwrap().plus[0].radius;
    assert!((r0 - expected).abs() <= 1e-9 * expected);

    let cfg = CircleConfiguration::from_circles(vec![]).unwrap();
    let empty = CircleSet::from_configuration("empty", &cfg, &[]);
    assert!(export_circles(&[empty], ExportFormat::Svg).unwrap().content.contains("</svg>"));
}
