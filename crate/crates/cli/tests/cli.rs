use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flatcensus"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON record per line"))
        .collect()
}

fn fixture(name: &str, body: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn torus_origami() -> String {
    fixture("torus_origami.json", r#"{"sigma_h":[1],"sigma_v":[1]}"#)
}

fn torus_surface() -> String {
    fixture("torus_surface.json", r#"{"sigma1":[1],"sigma2":[1],"widths":[["1"]],"heights":[["1"]]}"#)
}

fn l_surface() -> String {
    fixture(
        "l_surface.json",
        r#"{"sigma1":[2,1,3],"sigma2":[3,2,1],"widths":[["1"],["1"],["1"]],"heights":[["1"],["1"],["1"]]}"#,
    )
}

fn summary(recs: &[Value]) -> &Value {
    let last = recs.last().expect("summary line");
    assert_eq!(last["kind"], "summary");
    last
}

#[test]
fn enum_cusps_small_threshold() {
    let out = run(&["enum-cusps", "-m", "1", "-T", "3"]);
    assert!(out.status.success());
    let recs = records(&out);
    assert_eq!(summary(&recs)["pairs"], 3);
    assert_eq!(summary(&recs)["count"], 3);
    let cusps: Vec<_> = recs.iter().filter(|r| r["kind"] == "cusp").collect();
    assert_eq!(cusps.len(), 3);
    assert!(cusps.iter().all(|r| r["genus"] == 1));

    let out = run(&["enum-cusps", "-m", "1", "-T", "1"]);
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(summary(&recs)["count"], 0);
}

#[test]
fn enum_cusps_contains_the_two_by_two_family() {
    let out = run(&["enum-cusps", "-m", "2", "-T", "2.1", "--oracle"]);
    assert!(out.status.success());
    let found = records(&out)
        .iter()
        .any(|r| r["A"] == serde_json::json!([[1, 1], [1, 1]]) && r["D"] == serde_json::json!([1, 1]));
    assert!(found);
}

#[test]
fn enum_pa_examples() {
    let recs = records(&run(&["enum-pa", "-p", "2", "-T", "2.1", "--positive", "--oracle"]));
    let mats: Vec<_> = recs.iter().filter(|r| r["kind"] == "matrix").map(|r| r["matrix"].clone()).collect();
    assert_eq!(mats, vec![serde_json::json!([[1, 1], [1, 1]])]);

    let recs = records(&run(&["enum-pa", "-p", "1", "-T", "2"]));
    assert_eq!(recs[0]["matrix"], serde_json::json!([[1]]));
    assert_eq!(recs[0]["reconstruction"]["widths"], serde_json::json!([["1"]]));

    let recs = records(&run(&["enum-pa", "-p", "2", "-T", "1"]));
    assert_eq!(summary(&recs)["count"], 0);
}

#[test]
fn enum_matrices_oracle_and_csv() {
    let out = run(&["enum-matrices", "-p", "2", "-T", "2.1", "--oracle", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind,"));
    assert!(text.lines().last().unwrap().starts_with("summary"));
}

#[test]
fn enum_gluings_of_two_by_two() {
    let recs = records(&run(&["enum-gluings", "--matrix", "[[1,1],[1,1]]", "--oracle"]));
    assert_eq!(summary(&recs)["count"], 1);
}

#[test]
fn markov_cat_map() {
    let out = run(&["markov", "--origami", &torus_origami(), "--matrix", "[[2,1],[1,1]]"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &records(&out)[0];
    assert_eq!(r["p"], 2);
    assert_eq!(r["lambda_minpoly"], serde_json::json!([1, -3, 1]));
    assert_eq!(r["bounds"], serde_json::json!(["1/2", "2"]));
    assert_eq!(r["verified"], true);
    assert!(r["B"].is_array() && r["C"].is_array());
}

#[test]
fn markov_errors_are_structured() {
    let out = run(&["markov", "--origami", &torus_origami(), "--matrix", "[[1,1],[0,1]]"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(records(&out)[0]["error"], "NotHyperbolic");

    let two = fixture("two_squares.json", r#"{"sigma_h":[2,1],"sigma_v":[1,2]}"#);
    let out = run(&["markov", "--origami", &two, "--matrix", "[[1,1],[0,1]]"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(records(&out)[0]["error"], "NotInVeechGroup");

    let out = run(&["markov", "--origami", &torus_origami(), "--matrix", "[[2,1],[1,2]]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn markov_svg() {
    let out = run(&["markov", "--origami", &torus_origami(), "--matrix", "[[2,1],[1,1]]", "--no-refine", "--format", "svg"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("<rect").count(), 2);
}

#[test]
fn surface_info_examples() {
    let r = &records(&run(&["surface-info", &torus_surface()]))[0];
    assert_eq!(r["genus"], 1);
    assert_eq!(r["horizontal"]["cylinders"].as_array().unwrap().len(), 1);
    assert_eq!(r["vertical"]["cylinders"].as_array().unwrap().len(), 1);

    let r = &records(&run(&["surface-info", &l_surface()]))[0];
    assert_eq!(r["genus"], 2);
    assert_eq!(r["cone_angles"], serde_json::json!(["6π"]));

    let bad = fixture("corrupt.json", "{\"sigma1\": [1],\n \"sigma2\": [1");
    let out = run(&["surface-info", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn render_writes_svg_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("l.svg");
    let out = run(&["render", &l_surface(), "--format", "svg", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<rect").count(), 3);
}

#[test]
fn hyp_tools() {
    let r = &records(&run(&["hyp", "cusp-area", "--bound", "3"]))[0];
    assert_eq!(r["t0"], "1");
    assert_eq!(r["certified"], true);
    let r = &records(&run(&["hyp", "commutator", "-t", "1/2", "--param", "1/3"]))[0];
    // 2 + 4 t² sin² with sin = 3/5
    assert_eq!(r["trace"], "59/25");
    let r = &records(&run(&["hyp", "cone", "--fixed", r#"{"x":"0","y":"1"}"#, "--points", r#"[{"x":"0","y":"2"}]"#]))[0];
    assert_eq!(r["cosh_radius"], "5/4");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["enum-cusps"]).status.code(), Some(1));
    assert_eq!(run(&["enum-cusps", "-m", "1", "-T", "abc"]).status.code(), Some(1));
    assert_eq!(run(&["enum-cusps", "-m", "1", "-T", "-3"]).status.code(), Some(1));
    assert_eq!(run(&["enum-cusps", "-m", "1", "-T", "3", "--format", "svg"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_identical_across_runs_and_worker_counts() {
    let origami = torus_origami();
    let jobs: Vec<Vec<&str>> = vec![
        vec!["enum-cusps", "-m", "1", "-T", "3"],
        vec!["enum-cusps", "-m", "2", "-T", "3"],
        vec!["enum-matrices", "-p", "2", "-T", "4"],
        vec!["enum-pa", "-p", "2", "-T", "2.1", "--positive"],
        vec!["markov", "--origami", &origami, "--matrix", "[[2,1],[1,1]]"],
    ];
    for job in jobs {
        let outs: Vec<Vec<u8>> = ["1", "8", "1", "8"]
            .iter()
            .map(|w| {
                let mut args = job.clone();
                args.extend(["--workers", w]);
                run(&args).stdout
            })
            .collect();
        assert!(!outs[0].is_empty());
        assert!(outs.iter().all(|o| *o == outs[0]), "{job:?}");
    }
}
