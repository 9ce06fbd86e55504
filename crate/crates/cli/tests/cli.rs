use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ripsparse")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ripsparse"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Pipeline {
    dir: TempDir,
}

impl Pipeline {
    fn new() -> Self {
        Pipeline { dir: TempDir::new().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn cloud(&self, n: usize, seed: u64) -> PathBuf {
        let out = self.path("cloud.txt");
        ok(&run(&["generate", "cloud", "--n", &n.to_string(), "--seed", &seed.to_string(), "--out", s(&out)]));
        out
    }

    fn tree(&self, input: &Path, format: &str) -> PathBuf {
        let out = self.path("tree.txt");
        ok(&run(&["tree", "--input", s(input), "--format", format, "--out", s(&out)]));
        out
    }

    fn sparsify(&self, input: &Path, format: &str, eps1: &str) -> PathBuf {
        let tree = self.tree(input, format);
        let out = self.path(&format!("edges-{eps1}.txt"));
        ok(&run(&[
            "sparsify", "--input", s(input), "--format", format, "--tree", s(&tree), "--eps1", eps1, "--out", s(&out),
        ]));
        out
    }

    fn persist(&self, input: &Path, format: &str, name: &str) -> PathBuf {
        let out = self.path(name);
        ok(&run(&["persist", "--input", s(input), "--format", format, "--out", s(&out)]));
        out
    }
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tree_is_deterministic() {
    let p = Pipeline::new();
    let cloud = p.cloud(50, 3);
    let a = fs::read_to_string(p.tree(&cloud, "points")).unwrap();
    let b = fs::read_to_string(p.tree(&cloud, "points")).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("# {"));
}

#[test]
fn empty_input_is_an_input_error() {
    let p = Pipeline::new();
    let empty = p.path("empty.txt");
    fs::write(&empty, "").unwrap();
    let out = run(&["tree", "--input", s(&empty)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no points"));
}

#[test]
fn zero_precision_keeps_every_edge() {
    let p = Pipeline::new();
    let cloud = p.cloud(30, 1);
    let edges = p.sparsify(&cloud, "points", "0");
    let text = fs::read_to_string(&edges).unwrap();
    let count = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count();
    assert_eq!(count, 30 * 29 / 2);
    let meta = json(&edges.with_extension("meta.json"));
    assert_eq!(meta["eps0"], 0.0);
    assert_eq!(meta["N"], 30);
}

#[test]
fn circle_diagram_has_the_expected_loop() {
    let p = Pipeline::new();
    let circle = p.path("circle.txt");
    ok(&run(&["generate", "circle", "--n", "32", "--out", s(&circle)]));
    let diagram = json(&p.persist(&circle, "circle", "d.json"));
    let h1: Vec<&serde_json::Value> = diagram["entries"].as_array().unwrap().iter().filter(|e| e["dim"] == 1).collect();
    assert_eq!(h1.len(), 1);
    assert_eq!(h1[0]["birth"], 0.03125);
    assert_eq!(h1[0]["death"], 0.34375);
    let essential = diagram["entries"].as_array().unwrap().iter().filter(|e| e["death"] == "inf").count();
    assert_eq!(essential, 1);
}

#[test]
fn composite_field_is_rejected() {
    let p = Pipeline::new();
    let cloud = p.cloud(10, 0);
    let out = run(&["persist", "--input", s(&cloud), "--format", "points", "--field", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));
}

#[test]
fn export_only_writes_edges_without_reducing() {
    let p = Pipeline::new();
    let cloud = p.cloud(12, 0);
    let out = p.path("full.txt");
    ok(&run(&["persist", "--input", s(&cloud), "--format", "points", "--export-only", "--out", s(&out)]));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 66);
    assert!(out.with_extension("meta.json").exists());
}

#[test]
fn verify_passes_on_the_pipeline_and_fails_on_a_moved_entry() {
    let p = Pipeline::new();
    let cloud = p.cloud(35, 9);
    let full = p.persist(&cloud, "points", "full.json");
    let edges = p.sparsify(&cloud, "points", "0.5");
    let sparse = p.persist(&edges, "sparse", "sparse.json");

    let report = p.path("report.json");
    ok(&run(&["verify", "--full", s(&full), "--sparse", s(&sparse), "--out", s(&report)]));
    assert_eq!(json(&report)["violation_count"], 0);

    ok(&run(&["verify", "--full", s(&full), "--sparse", s(&full)]));

    // stretch one finite H0 death far beyond psi
    let mut moved = json(&sparse);
    let entries = moved["entries"].as_array_mut().unwrap();
    let k = entries.iter().position(|e| e["dim"] == 0 && e["death"].is_number()).unwrap();
    entries[k]["death"] = serde_json::json!(100.0);
    let bad = p.path("bad.json");
    fs::write(&bad, serde_json::to_string(&moved).unwrap()).unwrap();
    let out = run(&["verify", "--full", s(&full), "--sparse", s(&bad)]);
    assert_eq!(out.status.code(), Some(1), "stdout: {}", String::from_utf8_lossy(&out.stdout));
}

fn coordinates(svg: &str, attr: &str) -> Vec<f64> {
    let key = format!(" {attr}=\"");
    svg.match_indices(&key)
        .map(|(i, _)| {
            let rest = &svg[i + key.len()..];
            rest[..rest.find('"').unwrap()].parse().unwrap()
        })
        .collect()
}

#[test]
fn log_plot_with_clip_stays_in_frame() {
    let p = Pipeline::new();
    let cloud = p.cloud(30, 4);
    let edges = p.sparsify(&cloud, "points", "0.25");
    let sparse = p.persist(&edges, "sparse", "sparse.json");
    let svg_path = p.path("plot.svg");
    let approx = p.path("approx.json");
    ok(&run(&[
        "plot", "--input", s(&sparse), "--out", s(&svg_path), "--log-plot", "--clip", "0.01",
        "--overlay-eps0", "0.05", "--overlay-eps1", "0.5", "--approx-out", s(&approx),
    ]));
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert!(svg.contains("class=\"psi-overlay\""));
    for v in coordinates(&svg, "cx").into_iter().chain(coordinates(&svg, "cy")) {
        assert!((60.0..=580.0).contains(&v), "{v} outside the frame");
    }
    let approx = json(&approx);
    assert!(approx["entries"].as_array().unwrap().iter().all(|e| e["rect"].as_array().unwrap().len() == 4));
}

#[test]
fn simplex_limit_maps_to_its_own_exit_code() {
    let p = Pipeline::new();
    let cloud = p.cloud(40, 2);
    let out = run_env(&["persist", "--input", s(&cloud), "--format", "points"], "RIPSPARSE_MAX_SIMPLICES", "100");
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("export-only"));
}
