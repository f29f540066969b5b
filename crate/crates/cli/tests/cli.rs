use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crshadow")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn verdicts(o: &Output) -> Vec<(String, bool)> {
    json(o)["report"]["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["property"].as_str().unwrap().to_string(), v["holds"].as_bool().unwrap()))
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn decide_inverse_example() {
    let o = run(&["decide", "--in", &data("inverse_example.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let all: Vec<(String, bool)> = ["2,1", "1,1", "2,2", "1,2"].iter().map(|p| (p.to_string(), true)).collect();
    assert_eq!(verdicts(&o), all);

    let o = run(&["decide", "--in", &data("inverse_example.json"), "--inverse"]);
    assert_eq!(code(&o), 0);
    let v = &json(&o)["report"]["verdicts"][0];
    assert_eq!(v["property"], "2,1");
    assert_eq!(v["holds"], false);
    assert!(v["witness"]["cycle"].as_array().is_some_and(|c| !c.is_empty()));
    assert_eq!(verdicts(&o)[1..].iter().filter(|(_, h)| *h).count(), 3);
}

#[test]
fn decide_k2_single_property() {
    let o = run(&["decide", "--in", &data("k2.json"), "--property", "2,1"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let vs = r["report"]["verdicts"].as_array().unwrap();
    assert_eq!(vs.len(), 1);
    assert_eq!(vs[0]["holds"], false);
    assert_eq!(vs[0]["epsilonStar"], "1");
    assert_eq!(vs[0]["witness"]["prefix"], serde_json::json!([]));
    assert_eq!(vs[0]["witness"]["cycle"], serde_json::json!(["0"]));
    assert_eq!(r["config"]["property"], "2,1");
    assert_eq!(r["tool"], "crshadow");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["configHash"].as_str().unwrap().len(), 64);
}

#[test]
fn markdown_table() {
    let o = run(&["decide", "--in", &data("inverse_example.json"), "--inverse", "--format", "markdown"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("| (2,1) | fails | 1 | (0 \\| -1) |")), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("| (")).count(), 4);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"points\": [\"a\"],\n \"metric\": 3 }").unwrap();
    let o = run(&["decide", "--in", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = run(&["decide", "--in", &data("bad_relation.json")]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("relation[0]"), "{}", stderr(&o));

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["decide", "--in", missing.to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["decide", "--in", &data("k2.json"), "--property", "3,1"])), 1);
    assert_eq!(code(&run(&["audit", "--count", "5", "--size", "3"])), 1);
    assert_eq!(code(&run(&["audit", "--count", "0", "--size", "3", "--seed", "1"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn flagged_system_exits_two() {
    let o = run(&["decide", "--in", &data("flagged.json")]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["flagged"], true);
    assert_eq!(code(&run(&["shift", "demo", "--system", &data("flagged.json")])), 2);
}

#[test]
fn witnesses_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (file, extra) in [("inverse_example.json", vec!["--inverse"]), ("k2.json", vec![]), ("inverse_example.json", vec![])] {
        let mut args = vec!["decide", "--in"];
        let input = data(file);
        args.push(&input);
        args.extend(&extra);
        let o = run(&args);
        let report: PathBuf = dir.path().join("report.json");
        fs::write(&report, &o.stdout).unwrap();
        let report = report.to_str().unwrap().to_string();
        args.extend(["--check-witness", report.as_str()]);
        let o = run(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
        let checked = json(&o)["report"]["checked"].as_array().unwrap().clone();
        assert_eq!(checked.len(), 4);
        assert!(checked.iter().all(|c| c["valid"] == true));
    }
}

#[test]
fn forged_witness_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let forged = dir.path().join("forged.json");
    fs::write(&forged, r#"{"property": "2,1", "holds": false, "epsilonStar": "1", "witness": {"prefix": [], "cycle": ["1"]}}"#).unwrap();
    let o = run(&["decide", "--in", &data("inverse_example.json"), "--check-witness", forged.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["report"]["checked"][0]["valid"], false);
}

#[test]
fn audits() {
    let o = run(&["audit", "--count", "200", "--size", "5", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["violations"], 0);
    assert_eq!(json(&o)["report"]["systems"], 200);

    let o = run(&["audit", "--count", "1", "--size", "1", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["violations"], 0);

    let o = run(&["audit", "--count", "50", "--size", "4", "--seed", "3", "--oracle"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["report"]["violations"], 0);
    assert!(r["report"]["oracleComparisons"].as_u64().unwrap() > 50);
}

#[test]
fn gallery_verbs() {
    let o = run(&["gallery", "list"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = String::from_utf8(o.stdout).unwrap().lines().map(String::from).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 6);

    let o = run(&["gallery", "run", "inverse_example"]);
    assert_eq!(code(&o), 0);
    let items = json(&o)["report"]["items"].clone();
    assert!(items[0]["claims"].as_array().unwrap().iter().all(|c| c["passed"] == true));

    let o = run(&["gallery", "run", "diag_plus_line", "--param", "c=0"]);
    assert_eq!(code(&o), 0);
    let claims = json(&o)["report"]["items"][0]["claims"].clone();
    let find = |p: &str| claims.as_array().unwrap().iter().find(|c| c["claim"] == p).unwrap().clone();
    assert_eq!(find("2,2")["observed"], "fails");
    assert_eq!(find("1,1")["observed"], "holds");
    assert_eq!(find("1,1")["sampled"], true);
    assert_eq!(find("shift-shadowing")["passed"], true);

    let o = run(&["gallery", "run"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["items"].as_array().unwrap().len(), 6);

    assert_eq!(code(&run(&["gallery", "run", "nope"])), 1);
    assert_eq!(code(&run(&["gallery", "run", "comb", "--param", "zz=1"])), 1);
    assert_eq!(code(&run(&["gallery", "run", "comb", "--param", "n"])), 1);
}

#[test]
fn reports_are_deterministic() {
    let runs: [&[&str]; 4] = [
        &["audit", "--count", "30", "--size", "4", "--seed", "9", "--oracle"],
        &["gallery", "run", "comb", "--param", "n=20"],
        &["shift", "search", "--count", "10", "--size", "3", "--seed", "4"],
        &["decide", "--in", &data("inverse_example.json"), "--inverse", "--format", "markdown"],
    ];
    for args in runs {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = json(&run(&["audit", "--count", "3", "--size", "3", "--seed", "1"]));
    let b = json(&run(&["audit", "--count", "3", "--size", "3", "--seed", "2"]));
    assert_ne!(a["configHash"], b["configHash"]);
}

#[test]
fn shift_verbs() {
    let o = run(&["shift", "closing", "--n", "3"]);
    assert_eq!(code(&o), 0);
    let r = json(&o)["report"].clone();
    assert_eq!(r["eps"], "1/4");
    assert_eq!(r["no_shadower"], true);
    assert_eq!(r["step_distances"], serde_json::json!(["1/3", "1/3", "1/3"]));
    assert_eq!(code(&run(&["shift", "closing", "--n", "1"])), 1);
    assert_eq!(code(&run(&["shift", "closing", "--n", "3", "--c", "3/4"])), 0);

    let o = run(&["shift", "demo", "--system", &data("k2.json"), "--k", "2", "--m", "3"]);
    assert_eq!(code(&o), 0);
    let r = json(&o)["report"].clone();
    assert_eq!(r["eps"], "1/4");
    assert_eq!(r["delta"], "1/16");
    assert_eq!(r["pseudo_orbits"], r["shadowed"]);

    let o = run(&["shift", "search", "--count", "20", "--size", "3", "--seed", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["rows"].as_array().unwrap().len(), 20);
}

#[test]
fn convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["convert", "--in", &data("inverse_example.json"), "--to", "planar"]);
    assert_eq!(code(&o), 0);
    let planar = dir.path().join("planar.json");
    fs::write(&planar, &o.stdout).unwrap();
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["primitives"].as_array().unwrap().len(), 4);

    let o = run(&["convert", "--in", planar.to_str().unwrap(), "--to", "finite"]);
    assert_eq!(code(&o), 0);
    let back = dir.path().join("finite.json");
    fs::write(&back, &o.stdout).unwrap();
    let original: Value = serde_json::from_str(&fs::read_to_string(data("inverse_example.json")).unwrap()).unwrap();
    let round: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(round["relation"], original["relation"]);

    let a = run(&["decide", "--in", &data("inverse_example.json")]);
    let b = run(&["decide", "--in", back.to_str().unwrap()]);
    assert_eq!(verdicts(&a), verdicts(&b));

    let matrix = run(&["convert", "--in", &data("flagged.json"), "--to", "planar"]);
    assert_eq!(code(&matrix), 1);
}
