//! The example files under `data/` load and give the expected results.

use std::path::Path;

use ctx_core::bundle::{elements, mapping_bundle_scenario};
use ctx_core::event::{global_sections, tensor_event, DEFAULT_FUNCTION_CAP};
use ctx_core::io::{
    decision_from_json, decision_to_json, event_to_json, model_from_json, parse_json,
    scenario_from_json, Scenario,
};
use ctx_core::solve::{check_contextuality, validate_empirical};
use serde_json::Value;

fn load(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    parse_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn event(name: &str) -> ctx_core::event::EventScenario {
    match scenario_from_json(&load(name)).unwrap() {
        Scenario::Event(f) => f,
        other => panic!("expected an event scenario, got {}", other.kind()),
    }
}

#[test]
fn stored_tensor_matches_a_fresh_tensor() {
    let path = event("path.json");
    let fresh = tensor_event(&path, &path).unwrap();
    assert_eq!(event_to_json(&fresh), load("tensor_path.json"));
    assert_eq!(global_sections(&fresh, 1000).unwrap().len(), 64);
}

#[test]
fn example_models_are_valid_and_decided() {
    for (scenario, model, contextual) in [
        ("tensor_path.json", "tensor_path_model.json", true),
        ("chsh.json", "pr_box.json", true),
        ("path.json", "path_model.json", false),
    ] {
        let f = event(scenario);
        let p = model_from_json(&f, &load(model)).unwrap();
        assert!(validate_empirical(&f, &p).is_ok(), "{model}");
        let d = check_contextuality(&f, &p, 1_000_000).unwrap();
        assert_eq!(d.verdict.is_contextual(), contextual, "{model}");
        assert!(decision_from_json(&decision_to_json(&d)).unwrap().verify());
    }
}

#[test]
fn chsh_has_sixteen_sections() {
    assert_eq!(
        global_sections(&event("chsh.json"), 1000).unwrap().len(),
        16
    );
}

/// Vertices of `Γ(El F, El G)` over the single vertex of a two-outcome
/// point: for each simplex τ of the path, `2^|F(τ)|` functions.
#[test]
fn mapping_bundle_from_path_to_coin() {
    let f = elements(&event("path.json"));
    let coin =
        parse_json(r#"{"kind":"standard","contexts":[["x"]],"outcomes":{"x":["0","1"]}}"#).unwrap();
    let Scenario::Event(g) = scenario_from_json(&coin).unwrap() else {
        panic!("event")
    };
    let mb = mapping_bundle_scenario(&f, &elements(&g), DEFAULT_FUNCTION_CAP).unwrap();
    let want: usize = [2usize, 2, 2, 4, 4].iter().map(|&k| 1usize << k).sum();
    assert_eq!(mb.bundle.total().vertices().len(), want);
}
