use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn hdx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdx")).args(args).env_remove("HDX_CAPS").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

struct Dir(PathBuf);

impl Dir {
    fn new(tag: &str) -> Dir {
        let p = std::env::temp_dir().join(format!("hdx-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        Dir(p)
    }
    fn file(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
    fn write(&self, name: &str, text: &str) -> String {
        let p = self.file(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn read(p: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(Path::new(p)).unwrap()).unwrap()
}

const HOLLOW: &str = r#"{"vertices":["a","b","c"],"maximal_faces":[[0,1],[1,2],[0,2]]}"#;

#[test]
fn build_opposition_complex() {
    let v = json(&hdx(&["build", "--kind", "an-opposition", "--q", "3", "--dim", "3", "--flag", "full"]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 18);
    assert_eq!(v["metadata"]["counts"], serde_json::json!([18, 27]));
    assert_eq!(v["metadata"]["pure"], true);
}

#[test]
fn build_octahedron_counts() {
    let v = json(&hdx(&["--json", "build", "--kind", "octahedron"]));
    assert_eq!(v["metadata"]["counts"], serde_json::json!([6, 12, 8]));
}

#[test]
fn build_round_trip_is_byte_stable() {
    let d = Dir::new("rt");
    let a = d.file("a.json");
    let b = d.file("b.json");
    assert!(hdx(&["build", "--kind", "cn-building", "--q", "3", "--dim", "4", "--out", &a]).status.success());
    assert!(hdx(&["build", "--kind", "cn-building", "--q", "3", "--dim", "4", "--out", &b]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let j = read(&a);
    assert_eq!(j["metadata"]["counts"], serde_json::json!([24, 32]));
    let again = json(&hdx(&["--json", "report", "--in", &a]));
    assert_eq!(again["counts"], serde_json::json!([24, 32]));
}

#[test]
fn solve_on_hollow_triangle_has_no_one_cone() {
    let d = Dir::new("hollow");
    let x = d.write("x.json", HOLLOW);
    let out = hdx(&["cone", "--in", &x, "--method", "solve", "--k", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("H~_1"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn bfs_on_hexagon() {
    let d = Dir::new("c6");
    let faces: Vec<String> = (0..6).map(|i| format!("[{},{}]", i, (i + 1) % 6)).collect();
    let x = d.write("c6.json", &format!(r#"{{"vertices":["0","1","2","3","4","5"],"maximal_faces":[{}]}}"#, faces.join(",")));
    let cone = d.file("cone.json");
    let v = json(&hdx(&["--json", "cone", "--in", &x, "--method", "bfs", "--out", &cone]));
    assert_eq!(v["radii"], serde_json::json!([1, 3]));
    assert_eq!(v["verdict"], "ok");
    let check = json(&hdx(&["--json", "verify-cone", "--in", &x, "--cone", &cone]));
    assert_eq!(check["verdict"], "ok");
}

#[test]
fn tampered_cone_fails_verification() {
    let d = Dir::new("tamper");
    let x = d.write("x.json", r#"{"vertices":["a","b","c"],"maximal_faces":[[0,1,2]]}"#);
    let cone = d.file("cone.json");
    assert!(hdx(&["cone", "--in", &x, "--method", "apex", "--k", "1", "--out", &cone]).status.success());
    let mut c = read(&cone);
    let table = c["table"].as_array_mut().unwrap();
    let last = table.last_mut().unwrap();
    last["chain"][0]["coeff"] = serde_json::json!(2);
    std::fs::write(&cone, c.to_string()).unwrap();
    let out = hdx(&["--json", "verify-cone", "--in", &x, "--cone", &cone]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["verdict"]["violation"].is_array());
}

#[test]
fn coboundary_on_filled_triangle() {
    let v = json(&hdx(&["--json", "expansion", "--kind", "simplex", "--dim", "2", "--mode", "coboundary", "--k", "0", "--coeff", "2"]));
    assert_eq!(v["coboundary"]["value"], "2/1");
    assert_eq!(v["cosystolic"]["value"], "2/1");
}

#[test]
fn spectral_on_octahedron() {
    let v = json(&hdx(&["--json", "expansion", "--kind", "octahedron", "--mode", "spectral"]));
    let links = v["links"].as_array().unwrap();
    let vertex_links: Vec<&Value> = links.iter().filter(|l| l["face"].as_array().unwrap().len() == 1).collect();
    assert_eq!(vertex_links.len(), 6);
    for l in vertex_links {
        assert!(l["second"]["value"].as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn bound_with_cone_file() {
    let d = Dir::new("bound");
    let x = d.file("o.json");
    let cone = d.file("c.json");
    assert!(hdx(&["build", "--kind", "octahedron", "--out", &x]).status.success());
    assert!(hdx(&["cone", "--in", &x, "--method", "solve", "--k", "1", "--out", &cone]).status.success());
    let v = json(&hdx(&["--json", "expansion", "--in", &x, "--mode", "bound", "--k", "1", "--cone", &cone]));
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["measured"], "1/1");
    let assumed = json(&hdx(&["--json", "expansion", "--in", &x, "--mode", "bound", "--k", "0", "--assume-transitive"]));
    assert_eq!(assumed["verdict"], "holds");
}

#[test]
fn filtration_from_recorded_build() {
    let d = Dir::new("filt");
    let x = d.file("a.json");
    assert!(hdx(&["build", "--kind", "an-opposition", "--q", "3", "--dim", "3", "--flag", "full", "--out", &x]).status.success());
    let v = json(&hdx(&["--json", "cone", "--in", &x, "--method", "filtration"]));
    assert_eq!(v["verdict"], "ok");
    assert!(v["violations"].as_array().unwrap().is_empty());
    let r: Vec<u64> = v["radii"].as_array().unwrap().iter().map(|r| r.as_u64().unwrap()).collect();
    assert!(r.iter().all(|&r| r <= 18), "{r:?}");
    let plain = d.write("plain.json", HOLLOW);
    assert_eq!(hdx(&["cone", "--in", &plain, "--method", "filtration"]).status.code(), Some(2));
}

#[test]
fn join_extend_and_transport() {
    let d = Dir::new("ops");
    let s0 = d.write("s0.json", r#"{"vertices":["p","q"],"maximal_faces":[[0],[1]]}"#);
    let v = json(&hdx(&["--json", "cone", "--in", &s0, "--method", "join", "--with", &s0]));
    assert_eq!(v["verdict"], "ok");
    assert_eq!(v["k"], 0);
    let o = d.file("o.json");
    assert!(hdx(&["build", "--kind", "octahedron", "--out", &o]).status.success());
    let v = json(&hdx(&["--json", "cone", "--in", &o, "--method", "extend", "--w", "5", "--k", "1"]));
    assert_eq!(v["verdict"], "ok");
    let v = json(&hdx(&["--json", "cone", "--in", &o, "--method", "transport", "--coeff", "Z/2+Z", "--k", "1"]));
    assert_eq!(v["support_contained"], true);
    assert_eq!(v["cone"]["coeff"], serde_json::json!(["Z/2", "Z"]));
}

#[test]
fn exit_codes() {
    assert_eq!(hdx(&["build", "--kind", "nope"]).status.code(), Some(2));
    assert_eq!(hdx(&["build"]).status.code(), Some(2));
    assert_eq!(hdx(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hdx(&["cone", "--in", "/nonexistent/x.json", "--method", "solve"]).status.code(), Some(5));
    assert_eq!(
        hdx(&["cone", "--in", "x.json", "--kind", "octahedron", "--method", "solve"]).status.code(),
        Some(2),
        "--in and --kind together"
    );
    assert_eq!(hdx(&["--caps", "brute=4", "expansion", "--kind", "octahedron", "--mode", "coboundary"]).status.code(), Some(3));
    assert_eq!(hdx(&["--caps", "bogus=1", "build", "--kind", "octahedron"]).status.code(), Some(2));
    let env = Command::new(env!("CARGO_BIN_EXE_hdx"))
        .args(["build", "--kind", "an-building", "--q", "3", "--dim", "3"])
        .env("HDX_CAPS", "subspaces=5")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn threads_flag_keeps_output_identical() {
    let a = hdx(&["--json", "--threads", "1", "expansion", "--kind", "cn-building", "--q", "3", "--dim", "4", "--mode", "spectral"]);
    let b = hdx(&["--json", "--threads", "4", "expansion", "--kind", "cn-building", "--q", "3", "--dim", "4", "--mode", "spectral"]);
    assert_eq!(json(&a), json(&b));
}

#[test]
fn report_on_kms_complex_states_threshold_context() {
    let v = json(&hdx(&["--json", "report", "--kind", "unipotent-opposition", "--q", "2", "--n", "2"]));
    assert_eq!(v["counts"], serde_json::json!([8, 8]));
    assert_eq!(v["facet_transitive"], true);
    assert!(v["local_to_global"]["conclusion"].as_str().unwrap().contains("not computed"));
}
