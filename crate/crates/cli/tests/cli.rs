use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn cdk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdk")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn equilateral_polygon() {
    let out = cdk(&["polygon", "2", "2", "2"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["schema"], "centered-dual/1");
    assert_eq!(r["results"]["class"]["tag"], "Centered");
    let j = r["results"]["J"].as_f64().unwrap();
    let expected = (1f64.sinh() / (std::f64::consts::PI / 3.0).sin()).asinh();
    assert!((j - expected).abs() < 1e-12, "{j}");
}

#[test]
fn horocyclic_ideal_polygon() {
    let r = report(&cdk(&["polygon", "inf", "2", "inf"]));
    let area = r["results"]["area"].as_f64().unwrap();
    let expected = std::f64::consts::PI - 2.0 * (1.0 / 1f64.cosh()).asin();
    assert!((area - expected).abs() < 1e-12);
    assert_eq!(r["results"]["J"], "inf");
}

#[test]
fn outside_tuple_fails_only_when_strict() {
    let out = cdk(&["polygon", "10", "0.1", "0.1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["class"]["tag"], "Outside");
    assert_eq!(code(&cdk(&["polygon", "10", "0.1", "0.1", "--strict"])), 1);
}

#[test]
fn input_errors_exit_two_with_pointer() {
    let out = cdk(&["polygon", "2", "x", "2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lengths[1]"));
    let out = cdk(&["tessellate", &data("bad_site.json")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sites[1].xy"));
    let out = cdk(&["polygon", "inf", "2", "2"]);
    assert_eq!(code(&out), 2);
    let out = cdk(&["extremal", "--g", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tolerance_override_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_cdk"))
        .args(["polygon", "2", "2", "2"])
        .env("CDK_TOLERANCE_CLASS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("CDK_TOLERANCE_CLASS"));
    let out = Command::new(env!("CARGO_BIN_EXE_cdk"))
        .args(["polygon", "2", "2", "2"])
        .env("CDK_TOLERANCE_CLASS", "1e-6")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn tessellate_equilateral_sites() {
    let out = cdk(&["tessellate", &data("equilateral.json")]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let cells = r["results"]["centered_dual"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0]["kind"], "geometric_dual");
    let edges = r["results"]["voronoi"]["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    assert!(edges.iter().all(|e| e["class"] == "centered"));
    assert_eq!(r["results"]["geometric_dual"]["cells"][0]["class"]["tag"], "Centered");
}

#[test]
fn tessellate_obtuse_sites_gives_one_tree_cell() {
    let r = report(&cdk(&["tessellate", &data("obtuse.json")]));
    assert_eq!(r["passed"], true);
    let cells = r["results"]["centered_dual"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0]["kind"], "tree_cell");
    assert_eq!(cells[0]["vertices"], serde_json::json!([0, 1]));
    assert_eq!(cells[0]["tree_edges"].as_array().unwrap().len(), 1);
    assert_eq!(cells[0]["bound"]["holds"], true);
}

#[test]
fn sites_on_a_horocycle_warn() {
    let out = cdk(&["tessellate", &data("horocycle.json")]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["centered_dual"]["cells"].as_array().unwrap().len(), 0);
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn stdin_input_and_atomic_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("out.json");
    let svg_path = dir.path().join("out.svg");
    let mut child = Command::new(env!("CARGO_BIN_EXE_cdk"))
        .args(["tessellate", "-", "-o", json_path.to_str().unwrap(), "--svg", svg_path.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let text = std::fs::read_to_string(data("obtuse.json")).unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("marker-end"));
}

#[test]
fn reports_are_deterministic() {
    let a = cdk(&["tessellate", &data("obtuse.json")]);
    let b = cdk(&["tessellate", &data("obtuse.json")]);
    assert_eq!(a.stdout, b.stdout);
    let a = cdk(&["admissible", "--verify-bound", "--trials", "6", "--seed", "9"]);
    let b = cdk(&["admissible", "--verify-bound", "--trials", "6", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("timing_ms"));
    assert!(String::from_utf8_lossy(&cdk(&["--timing", "polygon", "2", "2", "2"]).stdout).contains("timing_ms"));
}

#[test]
fn one_edge_tree_has_singleton_closure() {
    let r = report(&cdk(&["admissible", &data("one_edge.json")]));
    let res = &r["results"];
    let b = res["edges"][0]["b"].as_f64().unwrap();
    let expected = 2.0 * (2f64.sqrt() * 0.5f64.sinh()).asinh();
    assert!((b - expected).abs() < 1e-10);
    assert_eq!(res["minimizer"]["membership"]["tag"], "InAdBarOnly");
    assert!((res["minimizer"]["edges"][0].as_f64().unwrap() - b).abs() < 1e-9);
    // any longer edge leaves the closure
    let mut tree: Value = serde_json::from_str(&std::fs::read_to_string(data("one_edge.json")).unwrap()).unwrap();
    tree["edges"] = serde_json::json!([b + 0.1]);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    std::fs::write(&p, tree.to_string()).unwrap();
    let r = report(&cdk(&["admissible", p.to_str().unwrap()]));
    assert_eq!(r["results"]["membership"]["tag"], "Outside");
}

#[test]
fn single_vertex_tree_is_trivial() {
    let r = report(&cdk(&["admissible", &data("single_vertex.json")]));
    assert_eq!(r["passed"], true);
    assert_eq!(r["results"]["edges"].as_array().unwrap().len(), 0);
    let poly = cdk(&["polygon", "1.0", "1.2", "0.9", "1.1"]);
    let area = report(&poly)["results"]["area"].as_f64().unwrap();
    assert!((r["results"]["minimizer"]["value"].as_f64().unwrap() - area).abs() < 1e-12);
}

#[test]
fn verify_bound_fuzz_passes() {
    let out = cdk(&["admissible", "--verify-bound", "--trials", "20"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["verify_bound"]["failures"].as_array().unwrap().len(), 0);
    assert!(r["results"]["verify_bound"]["feasible"].as_u64().unwrap() > 0);
}

#[test]
fn rmax_single_and_table() {
    let r = report(&cdk(&["rmax", "--g", "2", "--n", "0"]));
    let row = &r["results"]["rows"][0];
    let cf = (1.0 / (2.0 * (std::f64::consts::PI / 18.0).sin())).acosh();
    assert!((row["r"].as_f64().unwrap() - cf).abs() < 1e-12);
    assert!(row["residual"].as_f64().unwrap().abs() < 1e-12);
    let out = cdk(&["rmax", "--table", "4", "4"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!(r["results"]["chain"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    assert_eq!(code(&cdk(&["rmax", "--g", "1", "--n", "0"])), 2);
}

#[test]
fn extremal_octagon_and_closed_sequence() {
    let out = cdk(&["extremal", "--g", "2", "--n", "0"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["polygon"]["vertices"].as_array().unwrap().len(), 8);
    assert!(r["results"]["polygon"]["angle_residual"].as_f64().unwrap().abs() < 1e-9);
    let out = cdk(&["extremal", "--g", "1", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let out = cdk(&["extremal", "--g", "2", "--closed-seq", "1.65"]);
    assert_eq!(code(&out), 0);
    let x = report(&out)["results"]["x"].as_f64().unwrap();
    assert!(x > 3.3);
    assert_eq!(code(&cdk(&["extremal", "--g", "2", "--closed-seq", "1.9"])), 2);
}
