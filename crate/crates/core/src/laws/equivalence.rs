//! The equivalence between event scenarios and bundle scenarios, and the
//! behavior of pullbacks along relations.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::gen::{bundle, complex, relation, standard};
use super::{expect_eq, lib, Law, Trial};
use crate::bundle::{
    elements, elements_pullback_iso, elements_round_trip_iso, event_round_trip_iso,
    pullback_bundle, pullback_composite_iso, pullback_identity_iso, to_event,
    verify_bundle_isomorphism, BundleScenario,
};
use crate::complex::{kleisli_compose, SimplicialComplex, SimplicialRelation};
use crate::event::{reindex, verify_event_isomorphism, EventScenario};
use crate::io::{bundle_to_json, event_to_json, relation_to_json};

pub(super) fn laws() -> Vec<Law> {
    vec![
        Law {
            name: "events then elements",
            max_size: 4,
            check: events_then_elements,
        },
        Law {
            name: "elements then events",
            max_size: 4,
            check: elements_then_events,
        },
        Law {
            name: "pullback functoriality",
            max_size: 3,
            check: pullback_functoriality,
        },
        Law {
            name: "pullback of elements",
            max_size: 3,
            check: pullback_of_elements,
        },
    ]
}

fn base(rng: &mut ChaCha8Rng, prefix: &str, size: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=size.min(4));
    complex(rng, prefix, n, 3)
}

/// Total vertices of a pullback: one per vertex `x′` and lift of `π(x′)`.
fn pullback_size(f: &BundleScenario, pi: &SimplicialRelation) -> Result<usize, serde_json::Value> {
    pi.source()
        .vertices()
        .iter()
        .map(|x| lib(f.fiber(pi.image(x))).map(<[_]>::len))
        .sum()
}

fn events_then_elements(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let sigma = base(rng, "x", size);
    let f = bundle(rng, &sigma, 3);
    let inst = json!({ "bundle": bundle_to_json(&f) });
    let back = elements(&lib(to_event(&f))?);
    expect_eq(
        &inst,
        "El(S f) ≅ f",
        &verify_bundle_isomorphism(&f, &back, &elements_round_trip_iso(&f))
            .map_err(|e| e.to_string()),
        &Ok(()),
    )?;
    expect_eq(
        &inst,
        "same number of maximal simplices",
        &back.total().maximal().len(),
        &f.total().maximal().len(),
    )
}

fn round_trip(f: &EventScenario) -> Trial {
    let inst = json!({ "scenario": event_to_json(f) });
    let back = lib(to_event(&elements(f)))?;
    let maps = event_round_trip_iso(f, &back);
    expect_eq(
        &inst,
        "F ≅ S(El F)",
        &verify_event_isomorphism(f, &back, &maps).map_err(|e| e.to_string()),
        &Ok(()),
    )?;
    // Oracle: outcome counts agree simplexwise.
    for (si, s) in f.simplices().iter().enumerate() {
        expect_eq(
            &inst,
            "outcome counts",
            &f.outcomes(si).len(),
            &lib(back.outcomes_of(s))?.len(),
        )?;
    }
    Ok(())
}

fn elements_then_events(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let sigma = base(rng, "x", size);
    if rng.gen_bool(0.5) {
        round_trip(&standard(rng, sigma))
    } else {
        let b = bundle(rng, &sigma, 3);
        round_trip(&lib(to_event(&b))?)
    }
}

fn pullback_functoriality(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let sigma = base(rng, "x", size);
    let f = bundle(rng, &sigma, 2);
    let s1 = base(rng, "y", size);
    let s2 = base(rng, "z", size);
    let (p1, p2) = (relation(rng, &s1, &sigma), relation(rng, &s2, &s1));
    let inst = json!({ "bundle": bundle_to_json(&f), "outer": relation_to_json(&p1), "inner": relation_to_json(&p2) });
    let composite_rel = lib(kleisli_compose(&p1, &p2))?;
    let composite = lib(pullback_bundle(&f, &composite_rel))?;
    let first = lib(pullback_bundle(&f, &p1))?;
    let two_step = lib(pullback_bundle(&first.bundle, &p2))?;
    expect_eq(
        &inst,
        "pullback size",
        &composite.bundle.total().vertices().len(),
        &pullback_size(&f, &composite_rel)?,
    )?;
    let iso = pullback_composite_iso(&f, &p1, &p2, &composite);
    expect_eq(
        &inst,
        "(π₁⋄π₂)* f ≅ π₂* π₁* f",
        &verify_bundle_isomorphism(&composite.bundle, &two_step.bundle, &iso)
            .map_err(|e| e.to_string()),
        &Ok(()),
    )?;
    let id = lib(pullback_bundle(&f, &SimplicialRelation::identity(&sigma)))?;
    expect_eq(
        &inst,
        "δ* f ≅ f",
        &verify_bundle_isomorphism(&id.bundle, &f, &pullback_identity_iso(&id))
            .map_err(|e| e.to_string()),
        &Ok(()),
    )
}

fn pullback_of_elements(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let sigma = base(rng, "x", size);
    let f = standard(rng, sigma.clone());
    let source = base(rng, "y", size);
    let pi = relation(rng, &source, &sigma);
    let inst = json!({ "scenario": event_to_json(&f), "relation": relation_to_json(&pi) });
    let reindexed = elements(&lib(reindex(&f, &pi))?);
    let pulled = lib(pullback_bundle(&elements(&f), &pi))?;
    expect_eq(
        &inst,
        "El(F ∘ π̄) ≅ π*(El F)",
        &verify_bundle_isomorphism(&reindexed, &pulled.bundle, &elements_pullback_iso(&f, &pi))
            .map_err(|e| e.to_string()),
        &Ok(()),
    )
}
