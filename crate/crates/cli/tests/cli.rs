use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use apartness_lab::{Space, SpaceDocument};

const METRIC: &str = r#"{"version": 1, "kind": "metric",
 "dist": [["0", "1/2", "1"], ["1/2", "0", "1/2"], ["1", "1/2", "0"]]}"#;

const B5_FAILING: &str = r#"{"version": 1, "kind": "abstract",
 "neq": [[0,1,0],[1,0,0],[0,0,0]],
 "p":   [[0,1,0],[1,0,0],[0,0,0]]}"#;

const TWO_POINT: &str = r#"{"version": 1, "kind": "abstract", "neq": [[0,1],[1,0]], "p": [[0,1],[1,0]]}"#;

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("apartness-lab-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_apartness-lab"));
    for a in args {
        cmd.arg(a);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn load(p: &Path) -> Space {
    SpaceDocument::load(p).unwrap().to_space().unwrap()
}

#[test]
fn check_metric_document_passes() {
    let s = Scratch::new("metric");
    let f = s.file("m.json", METRIC);
    let o = run(&[&"check", &f]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("WSS"));
}

#[test]
fn check_b5_failure_prints_witness() {
    let s = Scratch::new("b5");
    let f = s.file("b5.json", B5_FAILING);
    let o = run(&[&"check", &f, &"--properties", &"B5"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("A={0} x=1"), "{}", stdout(&o));

    let o = run(&[&"check", &f, &"--properties", &"B5", &"--brute-force", &"--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"][0]["holds"], false);
    assert_eq!(v["results"][0]["witness"]["x"], 1);
}

#[test]
fn malformed_row_is_a_parse_error_with_line() {
    let s = Scratch::new("malformed");
    let f = s.file(
        "bad.json",
        "{\"version\": 1,\n \"kind\": \"abstract\",\n \"neq\": [[0,1],\n [1]],\n \"p\": [[0,0],[0,0]]}\n",
    );
    let o = run(&[&"check", &f]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn asymmetric_matrix_is_an_invariant_violation() {
    let s = Scratch::new("asym");
    let f = s.file("a.json", r#"{"version": 1, "kind": "abstract", "neq": [[0,1],[0,0]], "p": [[0,0],[0,0]]}"#);
    assert_eq!(code(&run(&[&"check", &f])), 3);
}

#[test]
fn wss_reading_flag_changes_the_verdict() {
    // neq complete on 4 points; p joins 0–1 and 2–3 only.
    let s = Scratch::new("wss");
    let f = s.file(
        "w.json",
        r#"{"version": 1, "kind": "abstract",
            "neq": [[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]],
            "p":   [[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]}"#,
    );
    let nbhd = run(&[&"check", &f, &"--properties", &"WSS", &"--wss-reading", &"neighborhood"]);
    let diff = run(&[&"check", &f, &"--properties", &"WSS", &"--wss-reading", &"difference"]);
    assert_ne!(code(&nbhd), code(&diff), "{}\n{}", stdout(&nbhd), stdout(&diff));
    assert_eq!(code(&run(&[&"check", &f, &"--wss-reading", &"sideways"])), 2);
}

#[test]
fn union_with_verify_round_trips() {
    let s = Scratch::new("union");
    let a = s.file("a.json", METRIC);
    let b = s.file("b.json", TWO_POINT);
    let out = s.path("u.json");
    let o = run(&[&"construct", &"union", &a, &b, &"--verify", &"--out", &out]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let u = load(&out);
    assert_eq!(u.n(), 5);
    let again = SpaceDocument::from_space(&u);
    assert_eq!(again.to_space().unwrap(), u);
}

#[test]
fn product_is_documented_row_major() {
    let s = Scratch::new("product");
    let a = s.file("a.json", TWO_POINT);
    let b = s.file("b.json", METRIC);
    let out = s.path("p.json");
    assert_eq!(code(&run(&[&"construct", &"product", &a, &b, &"-o", &out])), 0);
    let doc = SpaceDocument::load(&out).unwrap();
    assert_eq!(doc.to_space().unwrap().n(), 6);
    assert!(doc.metadata["order"].contains("row-major"));
}

#[test]
fn empty_subspace_carrier_exits_three() {
    let s = Scratch::new("subspace");
    let a = s.file("a.json", METRIC);
    assert_eq!(code(&run(&[&"construct", &"subspace", &a, &"--carrier", &""])), 3);
    let o = run(&[&"construct", &"subspace", &a, &"--carrier", &"0,2"]);
    assert_eq!(code(&o), 0);
    let doc = SpaceDocument::from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.to_space().unwrap().n(), 2);
}

#[test]
fn cantor_construction() {
    let o = run(&[&"construct", &"cantor", &"--depth", &"3", &"--verify", &"--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 8);
    assert_eq!(v["version"], 1);
}

#[test]
fn identity_map_is_strongly_continuous() {
    let s = Scratch::new("sc");
    let a = s.file("a.json", METRIC);
    let m = s.file("map.json", "[0, 1, 2]");
    assert_eq!(code(&run(&[&"sc", &m, &a, &a])), 0);
    // The identity from a space with no apart pairs into a discrete one.
    let flat = s.file(
        "flat.json",
        r#"{"version": 1, "kind": "abstract", "neq": [[0,1],[1,0]], "p": [[0,0],[0,0]]}"#,
    );
    let disc = s.file("disc.json", TWO_POINT);
    let id = s.file("id.json", "[0, 1]");
    assert_eq!(code(&run(&[&"sc", &id, &flat, &disc])), 1);
    assert_eq!(code(&run(&[&"sc", &id, &flat, &disc, &"--brute-force"])), 1);
    let bad = s.file("bad.json", "[0, 5]");
    assert_eq!(code(&run(&[&"sc", &bad, &disc, &disc])), 3);
}

#[test]
fn search_streams_b5_separating_models() {
    let o = run(&[&"search", &"--n", &"3", &"--require", &"B1,B2,B3,B4", &"--forbid", &"B5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().filter(|l| l.starts_with("model")).count() >= 1);

    let o = run(&[&"search", &"--n", &"3", &"--require", &"B1,B2,B3,B4", &"--forbid", &"B5", &"--json"]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l["model"]["witnesses"]["B5"].is_object()));
}

#[test]
fn search_output_is_deterministic_across_thread_counts() {
    let args = ["search", "--n", "4", "--require", "B4", "--forbid", "EF", "--json"];
    let with = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_apartness-lab"))
            .args(args)
            .env("APARTNESS_LAB_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    assert_eq!(with("1"), with("4"));
}

#[test]
fn escalation_reports_empty_outcome() {
    let o = run(&[
        &"search", &"--n", &"2", &"--require", &"B1,B2,B3,B4,B5", &"--forbid", &"EF", &"--escalate-to", &"4", &"--json",
    ]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["found_at"].is_null());
    assert_eq!(v["tried"].as_array().unwrap().len(), 3);
}

#[test]
fn conflicting_query_is_rejected() {
    let o = run(&[&"search", &"--n", &"3", &"--require", &"B5", &"--forbid", &"B5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn harness_depth_three_passes() {
    let start = std::time::Instant::now();
    let o = run(&[&"harness", &"--depth", &"3", &"--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(start.elapsed() < std::time::Duration::from_secs(5));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn harness_with_collapsed_h1_fails_density() {
    let o = run(&[&"harness", &"--depth", &"2", &"--h1", &"0,0,0,0"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("range(w) dense FAIL"), "{}", stdout(&o));
}

#[test]
fn json_reports_are_stable() {
    let a = stdout(&run(&[&"catalog", &"--nmax", &"3", &"--json"]));
    let b = stdout(&run(&[&"catalog", &"--nmax", &"3", &"--json"]));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["catalog"]["levels"][2]["classes"], 10);
}

#[test]
fn net_option_reports_total_cauchyness() {
    let s = Scratch::new("net");
    let f = s.file("m.json", METRIC);
    let net = s.file("net.json", r#"{"preceq": [[1,1],[0,1]], "values": [0, 2]}"#);
    let o = run(&[&"check", &f, &"--properties", &"B1", &"--net", &net, &"--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["net"]["converges_to"], serde_json::json!([2]));
    assert_eq!(v["options"]["tc_variant"], "corrected");
}
