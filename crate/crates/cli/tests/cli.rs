//! End-to-end runs of the gh-forge binary through its file interfaces.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gh_forge_core::graph_spaces::{build_circle_graph, circle_angle_to_point};
use gh_forge_core::metric_core::{validate_metric, FiniteMetricSpace};

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gh-forge-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gh-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn spaces_build_emits_valid_documents() {
    let dir = workdir("spaces");
    let metric = dir.join("e.json");
    let graph = dir.join("e-graph.json");
    let out = run(&[
        "spaces",
        "build",
        "e",
        "--eps",
        "0.2",
        "--out",
        metric.to_str().unwrap(),
        "--graph-out",
        graph.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let loaded = FiniteMetricSpace::load(&metric).unwrap();
    assert!(validate_metric(&loaded).is_ok());
    assert!(gh_forge_core::graph_spaces::MetricGraph::load(&graph).is_ok());
    let _ = std::fs::remove_dir_all(&dir);
}

fn write_metric(path: &Path, dist: Vec<Vec<f64>>) {
    FiniteMetricSpace::from_matrix(dist).unwrap().save(path).unwrap();
}

#[test]
fn gh_commands_compute_expected_values() {
    let dir = workdir("gh");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let r = dir.join("r.json");
    write_metric(&a, vec![vec![0.0, 3.0], vec![3.0, 0.0]]);
    write_metric(&b, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    std::fs::write(&r, r#"{"pairs": [[0, 0], [1, 1]]}"#).unwrap();

    let out = run(&["gh", "distortion", a.to_str().unwrap(), b.to_str().unwrap(), r.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("a-b,2,"), "stdout: {}", stdout(&out));

    let out = run(&["gh", "exact", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    // |3 - 1| / 2 = 1
    assert!(stdout(&out).contains("a-b,1,1,"), "stdout: {}", stdout(&out));

    let glued = dir.join("z.json");
    let out = run(&[
        "gh",
        "glue",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        r.to_str().unwrap(),
        "--eta",
        "1e-6",
        "--out",
        glued.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let loaded = FiniteMetricSpace::load(&glued).unwrap();
    assert_eq!(loaded.len(), 4);
    assert!(validate_metric(&loaded).is_ok());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn phi_verify_reports_half_pi() {
    let out = run(&["phi", "verify", "--n", "64"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("64,1.57079632"), "stdout: {}", stdout(&out));
}

#[test]
fn topo_flow_transfers_a_loop_between_circles() {
    let dir = workdir("topo");
    let left = dir.join("left.json");
    let right = dir.join("right.json");
    build_circle_graph(8, std::f64::consts::FRAC_PI_4).unwrap().save(&left).unwrap();
    build_circle_graph(8, 1.02 * std::f64::consts::FRAC_PI_4).unwrap().save(&right).unwrap();

    let glued = dir.join("glued.json");
    let out = run(&[
        "topo",
        "make-glued",
        "--left-graph",
        left.to_str().unwrap(),
        "--right-graph",
        right.to_str().unwrap(),
        "--eps",
        "0.1",
        "--out",
        glued.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // a loop once around the left circle
    let graph = build_circle_graph(8, std::f64::consts::FRAC_PI_4).unwrap();
    let points: Vec<_> = (0..64)
        .map(|k| {
            circle_angle_to_point(&graph, 2.0 * std::f64::consts::PI * k as f64 / 64.0).unwrap()
        })
        .collect();
    let loop_path = dir.join("loop.json");
    std::fs::write(
        &loop_path,
        serde_json::to_string(&serde_json::json!({ "points": points })).unwrap(),
    )
    .unwrap();

    let out = run(&[
        "topo",
        "class",
        "--graph",
        left.to_str().unwrap(),
        "--loop",
        loop_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("nulhomotopic: false"), "stdout: {}", stdout(&out));

    let beta = dir.join("beta.json");
    let out = run(&[
        "topo",
        "transfer",
        "--glued",
        glued.to_str().unwrap(),
        "--loop",
        loop_path.to_str().unwrap(),
        "--D",
        "0.8",
        "--out",
        beta.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("transferred class: e"), "stdout: {text}");
    assert!(beta.exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn reproduce_formats_agree_bit_for_bit() {
    let dir = workdir("reproduce");
    let csv_path = dir.join("rows.csv");
    let json_path = dir.join("rows.json");

    let out = run(&[
        "reproduce",
        "--n",
        "64",
        "--format",
        "csv",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = run(&[
        "reproduce",
        "--n",
        "64",
        "--format",
        "json",
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let rows = json.as_array().unwrap();
    let csv_lines: Vec<&str> = csv.lines().skip(1).filter(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), csv_lines.len());
    for (row, line) in rows.iter().zip(&csv_lines) {
        let fields: Vec<&str> = line.splitn(6, ',').collect();
        assert_eq!(row["id"].as_str().unwrap(), fields[0]);
        let csv_value: f64 = fields[1].parse().unwrap();
        let json_value = row["value"].as_f64().unwrap();
        assert_eq!(csv_value.to_bits(), json_value.to_bits(), "row {}", fields[0]);
        assert!(row["pass"].as_bool().unwrap(), "row {} failed", fields[0]);
    }
    let _ = std::fs::remove_dir_all(&dir);
}
