//! Invariants checked with proptest.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ctx_core::bundle::{elements, to_event, BundleScenario};
use ctx_core::complex::nerve_complex;
use ctx_core::dist::{format_rational, glue, parse_rational, ratio, Dist, Rational};
use ctx_core::event::{global_sections, tensor_event};
use ctx_core::io::{
    decision_from_json, decision_to_json, event_to_json, scenario_from_json, Scenario,
};
use ctx_core::laws::gen::{bundle, complex, matching, standard, weights};
use ctx_core::solve::{check_contextuality, deterministic_model, theta_event, Verdict};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn dist_strategy() -> impl Strategy<Value = Dist<u8>> {
    prop::collection::btree_map(0u8..8, 1i64..20, 1..6).prop_map(|m| {
        let total: i64 = m.values().sum();
        Dist::from_weights(m.into_iter().map(|(k, w)| (k, ratio(w, total)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_print_and_parse(n in -1000i64..1000, d in 1i64..1000) {
        let r = ratio(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn distributions_are_normalized(p in dist_strategy()) {
        let total: Rational = p.iter().map(|(_, w)| w.clone()).sum();
        prop_assert_eq!(total, one());
        let pushed = p.pushforward(|k| k % 3);
        prop_assert_eq!(pushed.iter().map(|(_, w)| w.clone()).sum::<Rational>(), one());
    }

    #[test]
    fn convex_combination_is_pointwise(p in dist_strategy(), q in dist_strategy(), n in 0i64..=6) {
        let t = ratio(n, 6);
        let c = Dist::convex(&t, &p, &q).unwrap();
        for k in 0u8..8 {
            prop_assert_eq!(c.weight(&k), &t * p.weight(&k) + (one() - &t) * q.weight(&k));
        }
    }

    #[test]
    fn gluing_has_the_given_marginals(p in dist_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        // q lives on pairs (z, tag) with marginal D(f)(p) on z.
        let f = |x: &u8| x % 3;
        let marginal = p.pushforward(f).pushforward(|&z| z as usize);
        let legs: Vec<usize> = (0..6).map(|y| y % 3).collect();
        let q = matching(&mut r, &legs, &marginal);
        let g = |y: &usize| legs[*y] as u8;
        let m = glue(f, g, &p, &q).unwrap();
        prop_assert_eq!(m.pushforward(|(x, _)| *x), p);
        prop_assert_eq!(m.pushforward(|(_, y)| *y), q);
    }

    #[test]
    fn complexes_are_downward_closed(seed in any::<u64>(), n in 1usize..6) {
        let c = complex(&mut rng(seed), "v", n, 3);
        let all = c.simplices();
        for s in &all {
            for face in s.subsets() {
                prop_assert!(c.contains(&face));
            }
        }
        prop_assert_eq!(nerve_complex(&c).vertices().len(), all.len());
    }

    #[test]
    fn scenario_files_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let base = complex(&mut r, "x", n, 2);
        let f = standard(&mut r, base);
        let Scenario::Event(g) = scenario_from_json(&event_to_json(&f)).unwrap() else { panic!("event") };
        prop_assert_eq!(g, f);
    }

    #[test]
    fn bundles_and_events_have_matching_sections(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let base = complex(&mut r, "x", n, 2);
        let b: BundleScenario = bundle(&mut r, &base, 2);
        let f = to_event(&b).unwrap();
        let again = to_event(&elements(&f)).unwrap();
        prop_assert_eq!(global_sections(&f, 100_000).unwrap().len(), global_sections(&again, 100_000).unwrap().len());
    }

    /// Mixtures of deterministic models are noncontextual, and the
    /// witness reproduces the model.
    #[test]
    fn mixtures_of_sections_are_noncontextual(seed in any::<u64>(), n in 1usize..4, k in 1usize..4) {
        let mut r = rng(seed);
        let base = complex(&mut r, "x", n, 2);
        let f = standard(&mut r, base);
        let secs = global_sections(&f, 100_000).unwrap();
        let picks: Vec<_> = (0..k).map(|i| secs[(seed as usize).wrapping_add(i * 7) % secs.len()].clone()).collect();
        let q = Dist::from_weights((0..k).zip(weights(&mut r, k))).unwrap();
        let p = theta_event(&f, &picks, &q).unwrap();
        let d = check_contextuality(&f, &p, 100_000).unwrap();
        prop_assert!(d.verify());
        let Verdict::Noncontextual { witness } = &d.verdict else { panic!("contextual") };
        prop_assert_eq!(theta_event(&f, &secs, witness).unwrap(), p);
        // Verdict files re-verify after a round trip.
        prop_assert!(decision_from_json(&decision_to_json(&d)).unwrap().verify());
    }

    /// Tensoring with a one-outcome scenario keeps the section count.
    #[test]
    fn tensor_with_deterministic_point(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let base = complex(&mut r, "x", n, 2);
        let f = standard(&mut r, base);
        let point = ctx_core::event::EventScenario::one_point();
        let t = tensor_event(&f, &point).unwrap();
        prop_assert_eq!(global_sections(&t, 100_000).unwrap().len(), global_sections(&f, 100_000).unwrap().len());
        let s = &global_sections(&f, 100_000).unwrap()[0];
        let d = check_contextuality(&f, &deterministic_model(&f, s), 100_000).unwrap();
        prop_assert!(!d.verdict.is_contextual());
    }
}
