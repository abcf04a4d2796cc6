//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctx_core::complex::{Simplex, SimplicialComplex};
use ctx_core::dist::{ratio, Dist, Rational};
use ctx_core::event::{
    event_presheaf, global_sections, tensor_event, EventScenario, StandardScenario,
};
use ctx_core::laws::gen::{dist_on, weights};
use ctx_core::laws::{run_named, run_suite, Suite};
use ctx_core::solve::{check_contextuality, deterministic_model, Decision, EmpiricalModel};
use ctx_core::sset::{
    count_morphisms, mapping_simplicial, SSetMap, SimplicialScenario, TruncatedSSet,
};

const SEED: u64 = 2024;
const CAP: usize = 1_000_000;
/// Time limits for criteria 1 and 4.
const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const GLUING_LIMIT: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

fn s(names: &[&str]) -> Simplex {
    Simplex::from_names(names).unwrap()
}

fn uniform(contexts: &[&[&str]]) -> EventScenario {
    let c = SimplicialComplex::generated_by(contexts.iter().map(|m| s(m))).unwrap();
    event_presheaf(&StandardScenario::uniform(c, &["0", "1"]).unwrap()).unwrap()
}

fn path() -> EventScenario {
    uniform(&[&["a", "b"], &["b", "c"]])
}

fn chsh() -> EventScenario {
    uniform(&[&["a0", "b0"], &["a0", "b1"], &["a1", "b0"], &["a1", "b1"]])
}

/// A model from label weights keyed by maximal-simplex key.
fn model(f: &EventScenario, dists: &[(&str, Vec<(String, Rational)>)]) -> EmpiricalModel {
    let dists = dists
        .iter()
        .map(|(key, weights)| {
            let sigma = Simplex::parse_key(key).unwrap();
            let si = f.simplex_index(&sigma).unwrap();
            let d = Dist::from_weights(
                weights
                    .iter()
                    .map(|(l, w)| (f.outcome_index(si, l).unwrap(), w.clone())),
            )
            .unwrap();
            (sigma, d)
        })
        .collect();
    EmpiricalModel { dists }
}

fn halves(labels: [&str; 2]) -> Vec<(String, Rational)> {
    labels
        .iter()
        .map(|l| (l.to_string(), ratio(1, 2)))
        .collect()
}

fn verified(d: &Decision) -> bool {
    d.verify()
}

fn tensor_path_example() -> Outcome {
    let start = Instant::now();
    let t = tensor_event(&path(), &path()).map_err(|e| e.to_string())?;
    let p = model(
        &t,
        &[
            ("(a,a),(a,b),(b,a),(b,b)", halves(["00|10", "10|00"])),
            ("(a,b),(a,c),(b,b),(b,c)", halves(["00|00", "10|01"])),
            ("(b,b),(b,c),(c,b),(c,c)", halves(["00|00", "01|01"])),
            ("(b,a),(b,b),(c,a),(c,b)", halves(["00|00", "01|10"])),
        ],
    );
    let sections = global_sections(&t, CAP).map_err(|e| e.to_string())?.len();
    let d = check_contextuality(&t, &p, CAP).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let detail = format!(
        "contextual={}, certificate verified={}, sections={sections}, {elapsed:?}",
        d.verdict.is_contextual(),
        verified(&d)
    );
    if d.verdict.is_contextual() && verified(&d) && sections == 64 && elapsed < EXAMPLE_LIMIT {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// A random compatible model on the path: `p_ab` arbitrary, `p_bc`
/// matching its marginal on `b`.
fn random_path_model(rng: &mut ChaCha8Rng, f: &EventScenario) -> EmpiricalModel {
    let labels = ["00", "01", "10", "11"];
    let ab = dist_on(rng, &labels);
    let mut bc: Vec<(Rational, Dist<String>)> = Vec::new();
    for b in ["0", "1"] {
        let w: Rational = ab
            .iter()
            .filter(|(l, _)| &l[1..] == b)
            .map(|(_, w)| w.clone())
            .sum();
        if w > Rational::from_integer(0.into()) {
            let c = dist_on(rng, &["0", "1"]);
            bc.push((w, c.pushforward(|c| format!("{b}{c}"))));
        }
    }
    let bc = Dist::mixture(&bc).unwrap();
    let listed = |d: &Dist<String>| {
        d.iter()
            .map(|(l, w)| (l.clone(), w.clone()))
            .collect::<Vec<_>>()
    };
    let ab = ab.pushforward(|l| l.to_string());
    model(f, &[("a,b", listed(&ab)), ("b,c", listed(&bc))])
}

fn path_noncontextual() -> Outcome {
    let f = path();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    for _ in 0..1000 {
        let p = random_path_model(&mut rng, &f);
        let d = check_contextuality(&f, &p, CAP).map_err(|e| e.to_string())?;
        if d.verdict.is_contextual() || !verified(&d) {
            bad += 1;
        }
    }
    let secs = global_sections(&f, CAP).map_err(|e| e.to_string())?;
    let det_ok = secs
        .iter()
        .filter(|s| {
            let d = check_contextuality(&f, &deterministic_model(&f, s), CAP).unwrap();
            !d.verdict.is_contextual() && verified(&d)
        })
        .count();
    let detail = format!("1000 random models, {bad} judged contextual; {det_ok}/{} deterministic models noncontextual", secs.len());
    if bad == 0 && det_ok == 8 && secs.len() == 8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Correlator tables `E[x][y] = P(a = b) − P(a ≠ b)` of a CHSH model.
fn correlators(f: &EventScenario, p: &EmpiricalModel) -> [[Rational; 2]; 2] {
    let mut e: [[Rational; 2]; 2] = Default::default();
    for x in 0..2 {
        for y in 0..2 {
            let sigma = s(&[&format!("a{x}"), &format!("b{y}")]);
            let si = f.simplex_index(&sigma).unwrap();
            for (&o, w) in p.dists[&sigma].iter() {
                let label = &f.outcomes(si)[o];
                let sign = if label[..1] == label[1..] { 1 } else { -1 };
                e[x][y] += w * Rational::from_integer(sign.into());
            }
        }
    }
    e
}

/// The eight CHSH expressions.
fn chsh_values(e: &[[Rational; 2]; 2]) -> Vec<Rational> {
    let mut out = Vec::new();
    for odd in 0..4 {
        let mut v = Rational::from_integer(0.into());
        for k in 0..4 {
            let term = &e[k / 2][k % 2];
            v += if k == odd {
                -term.clone()
            } else {
                term.clone()
            };
        }
        out.push(v.clone());
        out.push(-v);
    }
    out
}

/// The PR box variant `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`.
fn pr_box(f: &EventScenario, alpha: u8, beta: u8, gamma: u8) -> EmpiricalModel {
    let keys = ["a0,b0", "a0,b1", "a1,b0", "a1,b1"];
    let dists: Vec<(&str, Vec<(String, Rational)>)> = keys
        .iter()
        .enumerate()
        .map(|(k, key)| {
            let (x, y) = ((k / 2) as u8, (k % 2) as u8);
            let parity = (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
            let labels = if parity == 0 {
                ["00", "11"]
            } else {
                ["01", "10"]
            };
            (*key, halves(labels))
        })
        .collect();
    model(f, &dists)
}

fn mix(f: &EventScenario, parts: &[(Rational, EmpiricalModel)]) -> EmpiricalModel {
    let dists = f
        .base()
        .maximal()
        .iter()
        .map(|sigma| {
            let ds: Vec<(Rational, Dist<usize>)> = parts
                .iter()
                .map(|(w, p)| (w.clone(), p.dists[sigma].clone()))
                .collect();
            (sigma.clone(), Dist::mixture(&ds).unwrap())
        })
        .collect();
    EmpiricalModel { dists }
}

fn chsh_sanity() -> Outcome {
    let f = chsh();
    let two = Rational::from_integer(2.into());
    // Brute force over the 16 vertices of the noncontextual polytope.
    let vertices: Vec<EmpiricalModel> = global_sections(&f, CAP)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| deterministic_model(&f, s))
        .collect();
    let vertex_max = vertices
        .iter()
        .flat_map(|p| chsh_values(&correlators(&f, p)))
        .max()
        .unwrap();
    let vertices_ok = vertices.iter().all(|p| {
        let d = check_contextuality(&f, p, CAP).unwrap();
        !d.verdict.is_contextual() && verified(&d)
    });
    let pr = pr_box(&f, 0, 0, 0);
    let d = check_contextuality(&f, &pr, CAP).map_err(|e| e.to_string())?;
    let pr_value = chsh_values(&correlators(&f, &pr))
        .into_iter()
        .max()
        .unwrap();
    // Random nonsignaling models: mixtures of PR boxes and vertices. The
    // LP must agree with membership in the polytope cut out by the CHSH
    // facets.
    let prs: Vec<EmpiricalModel> = (0..8u8)
        .map(|i| pr_box(&f, i & 1, (i >> 1) & 1, (i >> 2) & 1))
        .collect();
    let extreme: Vec<&EmpiricalModel> = vertices.iter().chain(&prs).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut agree, mut contextual) = (0, 0);
    for _ in 0..200 {
        let k = rng.gen_range(1..=4);
        let parts: Vec<(Rational, EmpiricalModel)> = weights(&mut rng, k)
            .into_iter()
            .map(|w| (w, extreme[rng.gen_range(0..extreme.len())].clone()))
            .collect();
        let p = mix(&f, &parts);
        let inside = chsh_values(&correlators(&f, &p)).iter().all(|v| v <= &two);
        let d = check_contextuality(&f, &p, CAP).map_err(|e| e.to_string())?;
        if d.verdict.is_contextual() != inside && verified(&d) {
            agree += 1;
        }
        contextual += d.verdict.is_contextual() as usize;
    }
    let detail = format!(
        "PR box contextual={} (CHSH value {pr_value}, vertex max {vertex_max}), {} deterministic models noncontextual={vertices_ok}, LP agrees with facet oracle on {agree}/200 mixtures ({contextual} contextual)",
        d.verdict.is_contextual(),
        vertices.len()
    );
    if d.verdict.is_contextual()
        && verified(&d)
        && vertices.len() == 16
        && vertices_ok
        && vertex_max == two
        && agree == 200
    {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn suite_outcome(suite: Suite, trials: usize) -> (bool, String) {
    let report = run_suite(suite, trials, SEED);
    let summary: Vec<String> = report
        .laws
        .iter()
        .map(|l| format!("{} {}/{}", l.name, l.passed, l.trials))
        .collect();
    (report.is_ok(), summary.join(", "))
}

fn gluing() -> Outcome {
    let start = Instant::now();
    let (ok, summary) = suite_outcome(Suite::Gluing, 500);
    let elapsed = start.elapsed();
    let detail = format!("{summary}; {elapsed:?}");
    if ok && elapsed < GLUING_LIMIT {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn equivalence() -> Outcome {
    let (ok, summary) = suite_outcome(Suite::Equivalence, 200);
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn discrete(total: &[&str], base: &[&str], map: &[usize]) -> SimplicialScenario {
    let e = Arc::new(TruncatedSSet::discrete(total, 0));
    let x = Arc::new(TruncatedSSet::discrete(base, 0));
    SimplicialScenario::new(SSetMap::new(e, x, vec![map.to_vec()]).unwrap())
}

fn mapping() -> Outcome {
    let law = |name: &str| run_named(Suite::Mapping, name, 50, SEED).unwrap();
    let iso = law("mapping bundle isomorphism");
    let identity = law("nerve comparison identity");
    let defined = law("nerve comparison where defined");
    let f = discrete(&["e1", "e2"], &["x"], &[0, 0]);
    let g = discrete(&["s", "t1", "t2"], &["y1", "y2"], &[0, 1, 1]);
    let h = discrete(&["u1", "u2"], &["z"], &[0, 0]);
    let tensor_count =
        count_morphisms(&f.tensor(&g).unwrap(), &h, CAP).map_err(|e| e.to_string())?;
    let map = mapping_simplicial(&g, &h, CAP).map_err(|e| e.to_string())?;
    let map_count = count_morphisms(&f, &map.scenario, CAP).map_err(|e| e.to_string())?;
    let witness = identity
        .counterexample
        .as_ref()
        .and_then(|c| c["instance"]["witness"].as_str())
        .map(|w| format!("; first failure: {w}"))
        .unwrap_or_default();
    let detail = format!(
        "bundle isomorphism {}/{}, l∘t = id {}/{}, l∘t = id where t is defined {}/{}, counts {tensor_count} vs {map_count}{witness}",
        iso.passed, iso.trials, identity.passed, identity.trials, defined.passed, defined.trials
    );
    if iso.is_ok() && identity.is_ok() && defined.is_ok() && tensor_count == 20 && map_count == 36 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn decomposition() -> Outcome {
    let names = [
        "decomposition",
        "convex maps arise from zeta",
        "zeta round trip",
    ];
    let outs: Vec<_> = names
        .iter()
        .map(|n| run_named(Suite::Mapping, n, 40, SEED).unwrap())
        .collect();
    let detail = outs
        .iter()
        .map(|o| format!("{} {}/{}", o.name, o.passed, o.trials))
        .collect::<Vec<_>>()
        .join(", ");
    if outs.iter().all(|o| o.is_ok()) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn monad_and_tensor() -> Outcome {
    let (monad_ok, monad) = suite_outcome(Suite::Monad, 200);
    let (tensor_ok, tensor) = suite_outcome(Suite::Tensor, 200);
    let detail = format!("{monad}; {tensor}");
    if monad_ok && tensor_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("tensor path example", tensor_path_example),
        ("single path noncontextual", path_noncontextual),
        ("CHSH sanity", chsh_sanity),
        ("gluing axioms", gluing),
        ("equivalence round trips", equivalence),
        ("mapping comparisons", mapping),
        ("noncontextual decompositions", decomposition),
        ("monad and monoidal laws", monad_and_tensor),
    ];
    let mut results = BTreeMap::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {} {tag}: {name}: {detail}", i + 1);
        results.insert(i + 1, outcome.is_ok());
    }
    let failed: Vec<String> = results
        .iter()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i.to_string())
        .collect();
    if failed.is_empty() {
        println!("all criteria pass");
    } else {
        println!("failing criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
