//! Random instance generators shared by the law suites and tests.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bundle::BundleScenario;
use crate::complex::{Simplex, SimplicialComplex, SimplicialRelation, Vertex};
use crate::dist::{ratio, Dist, Rational};
use crate::event::{event_presheaf, EventScenario, StandardScenario};
use crate::sset::{SimplicialScenario, TruncatedSSet};

/// Largest denominator used for random weights.
pub const MAX_DENOMINATOR: i64 = 12;

/// `k` positive weights with a common denominator at most 12.
pub fn weights<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    assert!((1..=MAX_DENOMINATOR as usize).contains(&k));
    let total = rng.gen_range(k as i64..=MAX_DENOMINATOR);
    let mut cuts: Vec<i64> = (1..total)
        .collect::<Vec<_>>()
        .choose_multiple(rng, k - 1)
        .copied()
        .collect();
    cuts.push(0);
    cuts.push(total);
    cuts.sort_unstable();
    cuts.windows(2).map(|w| ratio(w[1] - w[0], total)).collect()
}

/// A random rational in `[0,1]` with denominator at most 12.
pub fn unit_rational<R: Rng>(rng: &mut R) -> Rational {
    let den = rng.gen_range(1..=MAX_DENOMINATOR);
    ratio(rng.gen_range(0..=den), den)
}

/// A distribution on a random nonempty subset of `support`.
pub fn dist_on<R: Rng, K: Ord + Clone>(rng: &mut R, support: &[K]) -> Dist<K> {
    let k = rng.gen_range(1..=support.len().min(MAX_DENOMINATOR as usize));
    let keys: Vec<K> = support.choose_multiple(rng, k).cloned().collect();
    Dist::from_weights(keys.into_iter().zip(weights(rng, k))).expect("weights sum to one")
}

/// A random map `{0..n} → {0..m}`.
pub fn map<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..m)).collect()
}

/// A random surjection `{0..n} → {0..m}`, `n ≥ m ≥ 1`.
pub fn surjection<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<usize> {
    assert!(n >= m && m >= 1);
    let mut out: Vec<usize> = (0..m).chain((m..n).map(|_| rng.gen_range(0..m))).collect();
    out.shuffle(rng);
    out
}

/// A random injection `{0..n} → {0..m}`, `n ≤ m`.
pub fn injection<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..m).collect();
    all.shuffle(rng);
    all.truncate(n);
    all
}

/// A distribution `q` on `{0..}` with `D(g)(q) = marginal`; `g` must hit
/// the support of `marginal`.
pub fn matching<R: Rng>(rng: &mut R, g: &[usize], marginal: &Dist<usize>) -> Dist<usize> {
    let parts: Vec<(Rational, Dist<usize>)> = marginal
        .iter()
        .map(|(z, w)| {
            let fiber: Vec<usize> = (0..g.len()).filter(|&y| g[y] == *z).collect();
            (w.clone(), dist_on(rng, &fiber))
        })
        .collect();
    Dist::mixture(&parts).expect("weights sum to one")
}

fn vertex(name: String) -> Vertex {
    Vertex::new(name).expect("generated names are valid")
}

/// A random complex on vertices `{prefix}0..`, with simplices of at most
/// `max_simplex` vertices.
pub fn complex<R: Rng>(
    rng: &mut R,
    prefix: &str,
    vertices: usize,
    max_simplex: usize,
) -> SimplicialComplex {
    let vs: Vec<Vertex> = (0..vertices)
        .map(|i| vertex(format!("{prefix}{i}")))
        .collect();
    let mut simplices = Vec::new();
    for _ in 0..rng.gen_range(1..=vertices) {
        let k = rng.gen_range(1..=max_simplex.min(vertices));
        simplices.push(Simplex::new(vs.choose_multiple(rng, k).cloned()).expect("nonempty"));
    }
    let covered: BTreeSet<&Vertex> = simplices.iter().flat_map(|s| s.vertices()).collect();
    let missing: Vec<Vertex> = vs
        .iter()
        .filter(|v| !covered.contains(v))
        .cloned()
        .collect();
    simplices.extend(missing.into_iter().map(Simplex::singleton));
    SimplicialComplex::new(vs, simplices).expect("every vertex is covered")
}

/// A random relation `source → target`: half the time images are drawn
/// freely and kept if valid, otherwise inside one maximal simplex.
pub fn relation<R: Rng>(
    rng: &mut R,
    source: &SimplicialComplex,
    target: &SimplicialComplex,
) -> SimplicialRelation {
    let all = target.simplices();
    if rng.gen_bool(0.5) {
        for _ in 0..8 {
            let map = source
                .vertices()
                .iter()
                .map(|v| (v.clone(), all.choose(rng).expect("nonempty").clone()))
                .collect();
            if let Ok(r) = SimplicialRelation::new(source.clone(), target.clone(), map) {
                return r;
            }
        }
    }
    let top = target.maximal().choose(rng).expect("nonempty").clone();
    let faces = top.subsets();
    let map = source
        .vertices()
        .iter()
        .map(|v| (v.clone(), faces.choose(rng).expect("nonempty").clone()))
        .collect();
    SimplicialRelation::new(source.clone(), target.clone(), map).expect("images lie in one simplex")
}

/// A random standard scenario with 1–3 outcomes per vertex.
pub fn standard<R: Rng>(rng: &mut R, base: SimplicialComplex) -> EventScenario {
    let outcomes = base
        .vertices()
        .iter()
        .map(|v| {
            (
                v.clone(),
                (0..rng.gen_range(1..=3)).map(|o| o.to_string()).collect(),
            )
        })
        .collect();
    event_presheaf(&StandardScenario::new(base, outcomes).expect("valid outcomes"))
        .expect("standard scenarios are local")
}

/// A random bundle over `base` with fibers of at most `max_fiber`
/// vertices. Total simplices are either restrictions of random global
/// assignments, or random per-context choices kept when they satisfy the
/// bundle axioms.
pub fn bundle<R: Rng>(rng: &mut R, base: &SimplicialComplex, max_fiber: usize) -> BundleScenario {
    let sizes: BTreeMap<Vertex, usize> = base
        .vertices()
        .iter()
        .map(|v| (v.clone(), rng.gen_range(1..=max_fiber)))
        .collect();
    let point = |x: &Vertex, o: usize| vertex(format!("{x}_{o}"));
    let map: BTreeMap<Vertex, Vertex> = sizes
        .iter()
        .flat_map(|(x, &k)| (0..k).map(move |o| (point(x, o), x.clone())))
        .collect();
    let build = |maximal: Vec<Simplex>| {
        let total = SimplicialComplex::new(map.keys().cloned(), maximal).ok()?;
        BundleScenario::new(total, base.clone(), map.clone()).ok()
    };
    if rng.gen_bool(0.5) {
        for _ in 0..4 {
            let mut maximal = Vec::new();
            for m in base.maximal() {
                for _ in 0..rng.gen_range(1..=3) {
                    maximal.push(
                        Simplex::new(
                            m.vertices()
                                .iter()
                                .map(|x| point(x, rng.gen_range(0..sizes[x]))),
                        )
                        .expect("nonempty"),
                    );
                }
                // Cover every vertex of every fiber.
                for x in m.vertices() {
                    for o in 0..sizes[x] {
                        maximal.push(
                            Simplex::new(m.vertices().iter().map(|y| {
                                if y == x {
                                    point(y, o)
                                } else {
                                    point(y, rng.gen_range(0..sizes[y]))
                                }
                            }))
                            .expect("nonempty"),
                        );
                    }
                }
            }
            if let Some(b) = build(maximal) {
                return b;
            }
        }
    }
    let width = *sizes.values().max().expect("nonempty base");
    let globals: Vec<BTreeMap<&Vertex, usize>> = (0..width + rng.gen_range(0..3))
        .map(|i| {
            sizes
                .iter()
                .map(|(x, &k)| {
                    (
                        x,
                        if i < width {
                            i % k
                        } else {
                            rng.gen_range(0..k)
                        },
                    )
                })
                .collect()
        })
        .collect();
    let maximal = base
        .maximal()
        .iter()
        .flat_map(|m| globals.iter().map(move |g| (m, g)))
        .map(|(m, g)| Simplex::new(m.vertices().iter().map(|x| point(x, g[x]))).expect("nonempty"))
        .collect();
    build(maximal).expect("restrictions of global assignments form a bundle")
}

/// A random simplicial scenario truncated at `d`: a product scenario over
/// a standard simplex or a discrete set, or the nerve of a small bundle.
pub fn simplicial<R: Rng>(rng: &mut R, d: usize, max_outcomes: usize) -> SimplicialScenario {
    let labels = ["0", "1", "2"];
    let k = rng.gen_range(1..=max_outcomes.min(3));
    match rng.gen_range(0..3) {
        0 => {
            let base = Arc::new(
                TruncatedSSet::standard_simplex(rng.gen_range(0..=d.min(1)), d)
                    .expect("small simplex"),
            );
            SimplicialScenario::product_with(base, &labels[..k]).expect("product scenario")
        }
        1 => {
            let points = ["x", "y"];
            let base = Arc::new(TruncatedSSet::discrete(&points[..rng.gen_range(1..=2)], d));
            SimplicialScenario::product_with(base, &labels[..k]).expect("product scenario")
        }
        _ if d >= 1 => {
            let base = complex(rng, "b", 2, 2);
            let f = bundle(rng, &base, max_outcomes.min(2));
            crate::sset::nerve_bundle(&f, d)
                .expect("small nerve")
                .scenario
        }
        _ => SimplicialScenario::unit(d),
    }
}
