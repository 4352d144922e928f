use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hybzono"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn square(dir: &Path, name: &str, cx: f64) -> String {
    let text = format!(r#"{{"type":"zono","form":"pm1","Gc":[[0.5,0],[0,0.5]],"c":[{cx},0]}}"#);
    write(dir, name, &text).to_str().unwrap().to_string()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn minksum_writes_a_set() {
    let d = TempDir::new().unwrap();
    let a = square(d.path(), "a.json", 0.0);
    let b = square(d.path(), "b.json", 3.0);
    let out = d.path().join("out.json");
    let o = run(&["op", "minksum", &a, &b, "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("complexity (4, 0, 0)"));
    let v = json(&std::fs::read_to_string(out).unwrap());
    assert_eq!(v["c"], serde_json::json!([3.0, 0.0]));
}

#[test]
fn union_of_three_has_formula_complexity() {
    let d = TempDir::new().unwrap();
    let files: Vec<String> = (0..3).map(|i| square(d.path(), &format!("s{i}.json"), 2.0 * i as f64)).collect();
    let mut args = vec!["op", "union"];
    args.extend(files.iter().map(String::as_str));
    let o = run(&args);
    assert_eq!(code(&o), 0);
    // Each square contributes (4, 1, 2); plus 3 binaries and 1 constraint.
    assert!(stderr(&o).contains("complexity (12, 3, 7)"), "{}", stderr(&o));
    let v = json(&stdout(&o));
    assert_eq!(v["type"], "hz");
    assert_eq!(v["form"], "01");
}

#[test]
fn relax_writes_constrained_zonotope() {
    let d = TempDir::new().unwrap();
    let a = square(d.path(), "a.json", 0.0);
    let b = square(d.path(), "b.json", 3.0);
    let u = d.path().join("u.json");
    assert_eq!(code(&run(&["op", "union", &a, &b, "-o", u.to_str().unwrap()])), 0);
    let o = run(&["op", "relax", u.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&stdout(&o));
    assert_eq!(v["type"], "cz");
    assert!(v.get("Gb").is_none() || v["Gb"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().is_empty()));
}

#[test]
fn map_halfspace_point_and_form() {
    let d = TempDir::new().unwrap();
    let a = square(d.path(), "a.json", 0.0);
    let o = run(&["op", "map", &a, "--matrix", "[[2,0],[0,1],[1,1]]", "--offset", "[1,1,1]"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&stdout(&o))["c"], serde_json::json!([1.0, 1.0, 1.0]));
    let o = run(&["op", "halfspace", &a, "--normal", "[1,0]", "--k", "-0.25"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("complexity (3, 0, 1)"));
    let o = run(&["op", "union-point", &a, "--point", "[5,5]"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("complexity (4, 1, 2)"));
    let o = run(&["op", "convert-form", &a, "--form", "zo"]);
    assert_eq!(json(&stdout(&o))["c"], serde_json::json!([-0.5, -0.5]));
    let o = run(&["op", "intersect", &a, &a]);
    assert!(stderr(&o).contains("complexity (4, 0, 2)"));
}

#[test]
fn parse_and_dimension_errors() {
    let d = TempDir::new().unwrap();
    let bad = write(d.path(), "bad.json", "{not json");
    assert_eq!(code(&run(&["op", "relax", bad.to_str().unwrap()])), 2);
    let missing = d.path().join("missing.json");
    assert_eq!(code(&run(&["op", "relax", missing.to_str().unwrap()])), 2);
    let a = square(d.path(), "a.json", 0.0);
    let line = write(d.path(), "line.json", r#"{"type":"zono","form":"pm1","Gc":[[1]],"c":[0]}"#);
    let o = run(&["op", "minksum", &a, line.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).is_empty());
    let zo = write(d.path(), "zo.json", r#"{"type":"zono","form":"01","Gc":[[1,0],[0,1]],"c":[0,0]}"#);
    assert_eq!(code(&run(&["op", "minksum", &a, zo.to_str().unwrap()])), 3);
    assert_eq!(code(&run(&["op", "map", &a, "--matrix", "[[1,0,0]]"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

/// A (21, 5, 14) hybrid zonotope in one dimension with all-zero data; only
/// the shape matters for the complexity report.
fn shape_only(dir: &Path) -> String {
    let zeros = |r: usize, c: usize| vec![vec![0.0; c]; r];
    let v = serde_json::json!({
        "type": "hz", "form": "01",
        "Gc": zeros(1, 21), "Gb": zeros(1, 5), "c": [0.0],
        "Ac": zeros(14, 21), "Ab": zeros(14, 5), "b": vec![0.0; 14],
    });
    write(dir, "shape.json", &v.to_string()).to_str().unwrap().to_string()
}

#[test]
fn rlt_reports_complexity() {
    let d = TempDir::new().unwrap();
    let h = shape_only(d.path());
    let o = run(&["rlt", &h, "--level", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&stdout(&o));
    assert_eq!(r["level"], 1);
    assert_eq!(r["nominal"], serde_json::json!({"n_g": 1118, "n_b": 5, "n_c": 504}));
    let o = run(&["rlt", &h, "--level", "5"]);
    assert_eq!(json(&stdout(&o))["nominal"], serde_json::json!({"n_g": 2042, "n_b": 5, "n_c": 1792}));
    assert_eq!(code(&run(&["rlt", &h, "--level", "6"])), 4);
    assert_eq!(code(&run(&["rlt", &h, "--level", "0"])), 4);
}

#[test]
fn rlt_hull_and_sharpness_codes() {
    let d = TempDir::new().unwrap();
    let a = square(d.path(), "a.json", 0.0);
    let b = square(d.path(), "b.json", 3.0);
    let u = d.path().join("u.json");
    run(&["op", "union", &a, &b, "-o", u.to_str().unwrap()]);
    let u = u.to_str().unwrap();
    // The union construction is sharp already.
    assert_eq!(code(&run(&["check-sharp", u])), 0);
    assert_eq!(code(&run(&["check-sharp", &a])), 0);
    assert_eq!(code(&run(&["check-sharp", u, "--cap", "1"])), 5);

    let hull = d.path().join("hull.json");
    let o = run(&["rlt", u, "--hull", "-o", hull.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&std::fs::read_to_string(&hull).unwrap());
    assert_eq!(v["type"], "cz");
    let o = run(&["plot2d", hull.to_str().unwrap(), "--angles", "64", "--format", "json"]);
    let verts = json(&stdout(&o))["polygons"][0]["vertices"].as_array().unwrap().len();
    assert_eq!(verts, 4);
}

#[test]
fn demo_level_set_not_sharp_then_sharp() {
    let d = TempDir::new().unwrap();
    let net = concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_network.json");
    let out = d.path().join("demo");
    let o = run(&[
        "demo-levelset", net, "--rlt-levels", "4", "--angles", "360",
        "--out-dir", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&stdout(&o));
    assert_eq!(r["pre_rlt"]["verdict"], "NotSharp");
    assert_eq!(r["levels"][0]["sharpness"]["verdict"], "Sharp");
    assert!((r["levels"][0]["area_ratio"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert_eq!(json(&std::fs::read_to_string(out.join("report.json")).unwrap()), r);
    let csv = std::fs::read_to_string(out.join("polygons.csv")).unwrap();
    assert!(csv.starts_with("tag,index,x,y"));
    assert!(csv.contains("\nhull,0,") && csv.contains("\nrlt,4,") && csv.contains("\nleaf,1,"));

    let pre = run(&["check-sharp", out.join("levelset.json").to_str().unwrap()]);
    assert_eq!(code(&pre), 1);
    let lifted = d.path().join("lifted.json");
    run(&["rlt", out.join("levelset.json").to_str().unwrap(), "--level", "4", "-o", lifted.to_str().unwrap()]);
    assert_eq!(code(&run(&["check-sharp", lifted.to_str().unwrap()])), 0);
}

#[test]
fn demo_below_minimum_is_the_box() {
    let o = run(&["demo-levelset", "--threshold", "-1", "--rlt-levels", "1", "--angles", "64"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&stdout(&o));
    assert!((r["hull_area"].as_f64().unwrap() - 16.0).abs() < 1e-6);
    assert!((r["levels"][0]["area_ratio"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn shipped_network_is_the_builtin_one() {
    let net = concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_network.json");
    let a = run(&["demo-levelset", net, "--rlt-levels", "1", "--angles", "32"]);
    let b = run(&["demo-levelset", "--rlt-levels", "1", "--angles", "32"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn plot2d_outputs() {
    let d = TempDir::new().unwrap();
    let a = square(d.path(), "a.json", 0.0);
    let o = run(&["plot2d", &a, "--angles", "8"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tag,index,x,y");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.starts_with("set,0,")));

    let b = square(d.path(), "b.json", 3.0);
    let u = d.path().join("u.json");
    run(&["op", "union", &a, &b, "-o", u.to_str().unwrap()]);
    let o = run(&["plot2d", u.to_str().unwrap(), "--angles", "16", "--format", "json"]);
    let v = json(&stdout(&o));
    let tags: Vec<&str> = v["polygons"].as_array().unwrap().iter().map(|p| p["tag"].as_str().unwrap()).collect();
    assert_eq!(tags, ["leaf", "leaf", "relax", "hull"]);

    let empty = write(d.path(), "e.json", r#"{"type":"cz","form":"pm1","Gc":[[1],[0]],"c":[0,0],"Ac":[[1]],"b":[3]}"#);
    let o = run(&["plot2d", empty.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&stdout(&o))["polygons"], serde_json::json!([]));
    assert!(stderr(&o).contains("warning"));

    let line = write(d.path(), "line.json", r#"{"type":"zono","form":"pm1","Gc":[[1]],"c":[0]}"#);
    assert_eq!(code(&run(&["plot2d", line.to_str().unwrap()])), 6);
}
