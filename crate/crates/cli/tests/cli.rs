use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn prl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prl")).args(args).output().expect("binary runs")
}

fn prl_path(args: &[&str], path: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prl")).args(args).arg(path).output().expect("binary runs")
}

fn json(bytes: &[u8]) -> serde_json::Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

#[test]
fn default_run_certifies_and_exits_zero() {
    let out = prl(&["counterexample"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out.stdout);
    assert_eq!(report["verdict"], "certified");
    assert_eq!(report["mobius"]["status"], "evaluated");
    assert_eq!(report["mobius"]["value"]["relabelings"], 48);
}

#[test]
fn inadmissible_parameters_exit_one() {
    let out = prl(&["counterexample", "--a", "2.0"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out.stdout);
    assert_eq!(report["verdict"], "failed");
    assert_eq!(report["failed_stage"], "admissibility");
    assert_eq!(report["flex"]["status"], "not-evaluated");
}

#[test]
fn zero_flex_exits_one() {
    let out = prl(&["counterexample", "--t", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stdout)["verdict"], "not-a-counterexample");
}

#[test]
fn invalid_parameters_exit_two() {
    assert_eq!(prl(&["counterexample", "--a", "-1"]).status.code(), Some(2));
    assert_eq!(prl(&["counterexample", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(prl(&["counterexample", "--convention", "sideways"]).status.code(), Some(2));
    assert_eq!(prl(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn paper_convention_negates_reported_inversive_distances() {
    let a = json(&prl(&["counterexample"]).stdout);
    let b = json(&prl(&["counterexample", "--convention", "paper-verbatim"]).stdout);
    let (ia, ib) = (&a["packing"]["value"]["inversive"][0]["plus"], &b["packing"]["value"]["inversive"][0]["plus"]);
    assert_eq!(ia.as_f64().unwrap(), -ib.as_f64().unwrap());
    assert_eq!(b["verdict"], "certified");
}

#[test]
fn hyperideal_table_has_all_edges() {
    let out = prl(&["hyperideal"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out.stdout);
    assert_eq!(r["edges"].as_array().unwrap().len(), 12);
    assert!(r["max_edge_discrepancy"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn export_writes_svg_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    assert_eq!(prl_path(&["counterexample", "--out"], &report).status.code(), Some(0));

    let svg = dir.path().join("circles.svg");
    let out = Command::new(env!("CARGO_BIN_EXE_prl"))
        .args(["export", "--format", "svg", "--in"])
        .arg(&report)
        .arg("--out")
        .arg(&svg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<circle").count(), 12);
    assert!(text.contains("class=\"set-plus\"") && text.contains("class=\"set-minus\""));

    let circles = dir.path().join("circles.json");
    let out = Command::new(env!("CARGO_BIN_EXE_prl"))
        .args(["export", "--format", "json", "--in"])
        .arg(&report)
        .arg("--out")
        .arg(&circles)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&fs::read(&circles).unwrap());
    assert_eq!(v["sets"][0]["circles"].as_array().unwrap().len(), 6);
}

#[test]
fn export_rejects_unknown_format_and_failed_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    prl_path(&["counterexample", "--out"], &report);
    let target = dir.path().join("x.png");
    let out = Command::new(env!("CARGO_BIN_EXE_prl"))
        .args(["export", "--format", "png", "--in"])
        .arg(&report)
        .arg("--out")
        .arg(&target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let failed = dir.path().join("failed.json");
    prl_path(&["counterexample", "--a", "2.0", "--out"], &failed);
    let out = Command::new(env!("CARGO_BIN_EXE_prl"))
        .args(["export", "--format", "svg", "--in"])
        .arg(&failed)
        .arg("--out")
        .arg(dir.path().join("f.svg"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

const OCTANT: &str = r#"{
  "faces": [[0,2,4],[2,1,4],[1,3,4],[3,0,4],[2,0,5],[1,2,5],[3,1,5],[0,3,5]],
  "inversive": [
    {"edge":[0,2],"value":1},{"edge":[0,3],"value":1},{"edge":[0,4],"value":1},{"edge":[0,5],"value":1},
    {"edge":[1,2],"value":1},{"edge":[1,3],"value":1},{"edge":[1,4],"value":1},{"edge":[1,5],"value":1},
    {"edge":[2,4],"value":1},{"edge":[2,5],"value":1},{"edge":[3,4],"value":1},{"edge":[3,5],"value":1}
  ],
  "radii": [0.7853981633974483,0.7853981633974483,0.7853981633974483,0.7853981633974483,0.7853981633974483,0.7853981633974483]
}"#;

#[test]
fn packing_eval_reports_zero_curvature_for_octant_packing() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("octant.json");
    fs::write(&input, OCTANT).unwrap();
    let out = prl_path(&["packing-eval", "--in"], &input);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    for k in v["curvature"].as_array().unwrap() {
        assert!(k.as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn packing_eval_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    fs::write(&input, OCTANT.replace("{\"edge\":[3,5],\"value\":1}", "{\"edge\":[3,5],\"value\":-2}")).unwrap();
    assert_eq!(prl_path(&["packing-eval", "--in"], &input).status.code(), Some(2));
    fs::write(&input, "{ not json").unwrap();
    assert_eq!(prl_path(&["packing-eval", "--in"], &input).status.code(), Some(2));
    assert_eq!(prl(&["packing-eval", "--in", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn sweep_emits_one_row_per_grid_point() {
    let out = prl(&["sweep", "--a", "1.55,2.0", "--h", "0.5", "--t", "0.01,-0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out.stdout);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["verdict"], "certified");
    assert_eq!(rows[1]["t"], -0.01);
    assert_eq!(rows[1]["verdict"], "certified");
    assert_eq!(rows[2]["failed_stage"], "admissibility");
}

#[test]
fn verify_passes_and_honours_seed() {
    let out = Command::new(env!("CARGO_BIN_EXE_prl")).arg("verify").env("PRL_SEED", "7").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.starts_with("seed 7"));
    assert!(!text.contains("FAIL"));

    let out = Command::new(env!("CARGO_BIN_EXE_prl")).arg("verify").env("PRL_SEED", "abc").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
