use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ctx_core::dist::Dist;
use ctx_core::io::{scenario_from_json, sdist_to_json, Scenario};
use ctx_core::sset::{mapping_simplicial, morphisms, theta_simplicial, zeta};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ctx-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn ctx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tensor_path_model_is_contextual_and_certificate_verifies() {
    let verdict = scratch("tensor_verdict.json");
    let out = ctx(&[
        "check",
        "--scenario",
        path_str(&data("tensor_path.json")),
        "--model",
        path_str(&data("tensor_path_model.json")),
        "-o",
        path_str(&verdict),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(&fs::read_to_string(&verdict).unwrap()).unwrap();
    assert_eq!(v["verdict"], "contextual");
    let out = ctx(&["verify-certificate", path_str(&verdict)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verified"], true);
}

#[test]
fn tensor_of_paths_has_64_sections() {
    let path = data("path.json");
    let tensor = scratch("tensor_path.json");
    let out = ctx(&[
        "tensor",
        path_str(&path),
        path_str(&path),
        "-o",
        path_str(&tensor),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = ctx(&["sections", path_str(&tensor)]);
    assert_eq!(json(&out)["count"], 64);
    // The checked-in example matches a fresh build.
    let fresh: Value = serde_json::from_str(&fs::read_to_string(&tensor).unwrap()).unwrap();
    let stored: Value =
        serde_json::from_str(&fs::read_to_string(data("tensor_path.json")).unwrap()).unwrap();
    assert_eq!(fresh, stored);
}

#[test]
fn pr_box_is_contextual_and_path_model_is_not() {
    let out = ctx(&[
        "check",
        path_str(&data("chsh.json")),
        "--model",
        path_str(&data("pr_box.json")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = ctx(&[
        "check",
        path_str(&data("path.json")),
        "--model",
        path_str(&data("path_model.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "noncontextual");
    let verdict = scratch("path_verdict.json");
    fs::write(&verdict, &out.stdout).unwrap();
    assert_eq!(
        ctx(&["verify-certificate", path_str(&verdict)])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn tampered_certificate_is_rejected() {
    let out = ctx(&[
        "check",
        path_str(&data("chsh.json")),
        "--model",
        path_str(&data("pr_box.json")),
    ]);
    let mut v = json(&out);
    v["certificate"]["y"][0] = Value::String("12345".into());
    let verdict = scratch("tampered.json");
    fs::write(&verdict, v.to_string()).unwrap();
    let out = ctx(&["verify-certificate", path_str(&verdict)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verified"], false);
}

#[test]
fn laws_are_deterministic_and_pass() {
    let a = ctx(&[
        "laws", "--suite", "gluing", "--trials", "200", "--seed", "7",
    ]);
    let b = ctx(&[
        "laws", "--suite", "gluing", "--trials", "200", "--seed", "7",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["ok"], true);
}

#[test]
fn failing_law_reports_a_loadable_counterexample() {
    let out = ctx(&["laws", "--suite", "mapping", "--trials", "4", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let law = v["laws"]
        .as_array()
        .unwrap()
        .iter()
        .find(|l| l["law"] == "nerve comparison identity")
        .unwrap();
    let cx = &law["counterexample"];
    assert_eq!(cx["seed"], 1);
    let source = &cx["instance"]["instance"]["source"];
    assert!(matches!(
        scenario_from_json(source).unwrap(),
        Scenario::Bundle(_)
    ));
}

#[test]
fn chsh_round_trips_through_bundles() {
    let bundle = scratch("chsh_bundle.json");
    let out = ctx(&[
        "convert",
        path_str(&data("chsh.json")),
        "--to",
        "bundle",
        "-o",
        path_str(&bundle),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let back = ctx(&["convert", path_str(&bundle), "--to", "event"]);
    let first = ctx(&["convert", path_str(&data("chsh.json")), "--to", "event"]);
    let (back, first) = (json(&back), json(&first));
    assert_eq!(back["complex"], first["complex"]);
    for (key, labels) in first["sets"].as_object().unwrap() {
        assert_eq!(
            back["sets"][key].as_array().unwrap().len(),
            labels.as_array().unwrap().len(),
            "{key}"
        );
    }
    let witness = json(&ctx(&[
        "convert",
        path_str(&bundle),
        "--to",
        "event",
        "--witness",
    ]));
    assert_eq!(witness["witness"]["map"].as_object().unwrap().len(), 8);
}

#[test]
fn one_point_scenario_gives_identity_bundle() {
    let point = scratch("point.json");
    fs::write(
        &point,
        r#"{"kind":"standard","contexts":[["x"]],"outcomes":{"x":["0"]}}"#,
    )
    .unwrap();
    let v = json(&ctx(&["convert", path_str(&point), "--to", "bundle"]));
    assert_eq!(v["total"]["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(v["base"]["vertices"], serde_json::json!(["x"]));
}

#[test]
fn non_local_event_scenario_is_refused() {
    let bad = scratch("nonlocal.json");
    fs::write(
        &bad,
        r#"{"kind":"event","complex":{"vertices":["a","b"],"maximal":[["a","b"]]},
            "sets":{"a":["0","1"],"b":["0","1"],"a,b":["00","01","10","11","x"]},
            "restrictions":{"a,b>a":{"00":"0","01":"0","10":"1","11":"1","x":"0"},
                            "a,b>b":{"00":"0","01":"1","10":"0","11":"1","x":"0"}}}"#,
    )
    .unwrap();
    let out = ctx(&["validate", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let locality = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "locality")
        .unwrap();
    assert_eq!(locality["passed"], false);
    assert_eq!(
        ctx(&["convert", path_str(&bad), "--to", "bundle"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn parse_errors_report_position_and_unknown_flags_fail() {
    let bad = scratch("broken.json");
    fs::write(&bad, "{\n  \"kind\": \n}").unwrap();
    let out = ctx(&["sections", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(
        ctx(&["sections", "--bogus", path_str(&bad)]).status.code(),
        Some(1)
    );
}

#[test]
fn cap_overflow_exits_with_three() {
    let out = ctx(&[
        "sections",
        path_str(&data("tensor_path.json")),
        "--cap",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn nerve_and_decompose() {
    let point = scratch("coin.json");
    fs::write(
        &point,
        r#"{"kind":"standard","contexts":[["x"]],"outcomes":{"x":["0","1"]}}"#,
    )
    .unwrap();
    let nerve = scratch("coin_nerve.json");
    assert_eq!(
        ctx(&[
            "nerve",
            path_str(&point),
            "--truncate",
            "1",
            "-o",
            path_str(&nerve)
        ])
        .status
        .code(),
        Some(0)
    );
    let v: Value = serde_json::from_str(&fs::read_to_string(&nerve).unwrap()).unwrap();
    let Scenario::Simplicial(f) = scenario_from_json(&v).unwrap() else {
        panic!("simplicial")
    };
    let space = mapping_simplicial(&f, &f, 100_000).unwrap();
    let ms = morphisms(&f, &f, 100_000).unwrap();
    let secs: Vec<_> = ms
        .iter()
        .take(2)
        .map(|m| zeta(&space, m).unwrap())
        .collect();
    let p = theta_simplicial(&secs, &Dist::uniform([0, 1]).unwrap()).unwrap();
    let model = scratch("map_model.json");
    fs::write(&model, sdist_to_json(&space.scenario, &p).to_string()).unwrap();
    let out = ctx(&[
        "decompose",
        path_str(&nerve),
        path_str(&nerve),
        "--model",
        path_str(&model),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let parts = json(&out)["decomposition"].as_array().unwrap().clone();
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|p| p["weight"] == "1/2"));
}

#[test]
fn nerve_complex_of_an_edge() {
    let edge = scratch("edge.json");
    fs::write(&edge, r#"{"vertices":["a","b"],"maximal":[["a","b"]]}"#).unwrap();
    let v = json(&ctx(&["nerve-complex", path_str(&edge)]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["maximal"].as_array().unwrap().len(), 1);
}
