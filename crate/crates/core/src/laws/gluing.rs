//! The six gluing axioms for the distribution monad, plus affinity.
//!
//! Every law compares the library's `glue` against the closed formula
//! `m(p,q)(x,y) = p(x)q(y) / D(f)(p)(f(x))` evaluated independently.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::gen::{dist_on, injection, map, matching, surjection, unit_rational, weights};
use super::{expect, expect_eq, lib, Law, Trial};
use crate::dist::{glue, glue_deterministic, Dist};

pub(super) fn laws() -> Vec<Law> {
    vec![
        Law {
            name: "section property",
            max_size: 5,
            check: section_property,
        },
        Law {
            name: "naturality",
            max_size: 5,
            check: naturality,
        },
        Law {
            name: "back-and-forth",
            max_size: 4,
            check: back_and_forth,
        },
        Law {
            name: "unit preservation",
            max_size: 5,
            check: unit_preservation,
        },
        Law {
            name: "weak multiplicativity",
            max_size: 4,
            check: weak_multiplicativity,
        },
        Law {
            name: "gluing with deterministics",
            max_size: 5,
            check: deterministic_naturality,
        },
        Law {
            name: "affinity",
            max_size: 5,
            check: affinity,
        },
    ]
}

fn dj(d: &Dist<usize>) -> Value {
    Value::Object(
        d.iter()
            .map(|(k, w)| {
                (
                    k.to_string(),
                    Value::String(crate::dist::format_rational(w)),
                )
            })
            .collect(),
    )
}

/// `p(x)q(y) / D(f)(p)(f(x))` over all pairs with `f(x) = g(y)`.
fn formula(f: &[usize], g: &[usize], p: &Dist<usize>, q: &Dist<usize>) -> Dist<(usize, usize)> {
    let marginal = p.pushforward(|&x| f[x]);
    let mut pairs = Vec::new();
    for (x, px) in p.iter() {
        for (y, qy) in q.iter() {
            if f[*x] == g[*y] {
                pairs.push(((*x, *y), px * qy / marginal.weight(&f[*x])));
            }
        }
    }
    Dist::from_weights(pairs).expect("the formula normalizes")
}

/// Sizes `(|Z|, |X|, |Y|)` with `|Z| ≤ |X|, |Y| ≤ 6`.
fn sizes(rng: &mut ChaCha8Rng, size: usize) -> (usize, usize, usize) {
    let nz = rng.gen_range(1..=size.min(4));
    (
        nz,
        rng.gen_range(nz..=6.min(nz + size)),
        rng.gen_range(nz..=6.min(nz + size)),
    )
}

fn all(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// A pair of legs `f, g` onto `Z` and a compatible pair `(p, q)`.
struct Cospan {
    f: Vec<usize>,
    g: Vec<usize>,
    p: Dist<usize>,
    q: Dist<usize>,
}

impl Cospan {
    fn random(rng: &mut ChaCha8Rng, size: usize) -> Self {
        let (nz, nx, ny) = sizes(rng, size);
        let f = surjection(rng, nx, nz);
        let g = surjection(rng, ny, nz);
        let p = dist_on(rng, &all(nx));
        let q = matching(rng, &g, &p.pushforward(|&x| f[x]));
        Cospan { f, g, p, q }
    }

    fn json(&self) -> Value {
        json!({ "f": self.f, "g": self.g, "p": dj(&self.p), "q": dj(&self.q) })
    }

    fn glue(&self) -> std::result::Result<Dist<(usize, usize)>, Value> {
        lib(glue(|&x| self.f[x], |&y| self.g[y], &self.p, &self.q))
    }
}

/// Extends `f: X → Z` along `γ: Z → Z′` to a commuting square with
/// `α: X → X′` and `f′: X′ → Z′`; `X′` may have extra points.
fn square(
    rng: &mut ChaCha8Rng,
    f: &[usize],
    gamma: &[usize],
    nz2: usize,
) -> (Vec<usize>, Vec<usize>) {
    let mut codes: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut f2 = Vec::new();
    let mut alpha = Vec::with_capacity(f.len());
    for &z in f {
        let label = rng.gen_range(0..2);
        let next = f2.len();
        let code = *codes.entry((z, label)).or_insert(next);
        if code == next {
            f2.push(gamma[z]);
        }
        alpha.push(code);
    }
    for _ in 0..rng.gen_range(0..2) {
        f2.push(rng.gen_range(0..nz2));
    }
    (alpha, f2)
}

fn section_property(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let c = Cospan::random(rng, size);
    let inst = c.json();
    let m = c.glue()?;
    expect_eq(
        &inst,
        "glue matches the formula",
        &m,
        &formula(&c.f, &c.g, &c.p, &c.q),
    )?;
    expect_eq(&inst, "first marginal", &m.pushforward(|&(x, _)| x), &c.p)?;
    expect_eq(&inst, "second marginal", &m.pushforward(|&(_, y)| y), &c.q)
}

fn naturality(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let c = Cospan::random(rng, size);
    let nz = c.f.iter().max().map_or(0, |z| z + 1);
    let nz2 = nz + rng.gen_range(0..2);
    let gamma = injection(rng, nz, nz2);
    let (alpha, f2) = square(rng, &c.f, &gamma, nz2);
    let (beta, g2) = square(rng, &c.g, &gamma, nz2);
    let inst = json!({ "cospan": c.json(), "gamma": gamma, "alpha": alpha, "f'": f2, "beta": beta, "g'": g2 });
    let left = c.glue()?.pushforward(|&(x, y)| (alpha[x], beta[y]));
    let (pa, qb) = (
        c.p.pushforward(|&x| alpha[x]),
        c.q.pushforward(|&y| beta[y]),
    );
    let right = lib(glue(|&x| f2[x], |&y| g2[y], &pa, &qb))?;
    expect_eq(&inst, "D(α×β) ∘ m = m′ ∘ (Dα × Dβ)", &left, &right)?;
    expect_eq(
        &inst,
        "right side matches the formula",
        &right,
        &formula(&f2, &g2, &pa, &qb),
    )
}

fn back_and_forth(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    // E → X ← Y ← Z with maps e, k, π.
    let nx = rng.gen_range(1..=size.min(3));
    let ny = rng.gen_range(nx..=nx + size.min(2));
    let nz = rng.gen_range(ny..=ny + size.min(2));
    let ne = rng.gen_range(nx..=nx + size.min(3));
    let (e, k, pi) = (
        surjection(rng, ne, nx),
        surjection(rng, ny, nx),
        surjection(rng, nz, ny),
    );
    let kpi: Vec<usize> = pi.iter().map(|&y| k[y]).collect();
    let q = dist_on(rng, &all(nz));
    let p = matching(rng, &e, &q.pushforward(|&z| kpi[z]));
    let inst = json!({ "e": e, "k": k, "pi": pi, "p": dj(&p), "q": dj(&q) });
    let inner = lib(glue(|&a| e[a], |&y| k[y], &p, &q.pushforward(|&z| pi[z])))?;
    let outer = lib(glue(|&(_, y): &(usize, usize)| y, |&z| pi[z], &inner, &q))?;
    expect(
        &inst,
        "outer gluing lies over the pullback",
        outer.support().all(|((_, y), z)| pi[*z] == *y),
    )?;
    let left = outer.pushforward(|&((a, _), z)| (a, z));
    let right = lib(glue(|&a| e[a], |&z| kpi[z], &p, &q))?;
    expect_eq(&inst, "m(m(p, Dπ(q)), q) = m(p, q)", &left, &right)?;
    expect_eq(
        &inst,
        "m(p, q) matches the formula",
        &right,
        &formula(&e, &kpi, &p, &q),
    )
}

fn unit_preservation(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (nz, nx, ny) = sizes(rng, size);
    let (f, g) = (surjection(rng, nx, nz), surjection(rng, ny, nz));
    let x = rng.gen_range(0..nx);
    let fiber: Vec<usize> = (0..ny).filter(|&y| g[y] == f[x]).collect();
    let y = fiber[rng.gen_range(0..fiber.len())];
    let inst = json!({ "f": f, "g": g, "x": x, "y": y });
    let m = lib(glue(|&a| f[a], |&b| g[b], &Dist::delta(x), &Dist::delta(y)))?;
    expect_eq(&inst, "m(δx, δy) = δ(x,y)", &m, &Dist::delta((x, y)))
}

fn weak_multiplicativity(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (nz, nx, ny) = sizes(rng, size);
    let (f, g) = (surjection(rng, nx, nz), surjection(rng, ny, nz));
    // The axiom uses a deterministic right leg; odd sizes also exercise
    // the stronger form with an arbitrary q.
    let q = if size.is_multiple_of(2) {
        Dist::delta(rng.gen_range(0..ny))
    } else {
        dist_on(rng, &all(ny))
    };
    let marginal = q.pushforward(|&y| g[y]);
    let k = rng.gen_range(1..=3);
    let ps: Vec<Dist<usize>> = (0..k).map(|_| matching(rng, &f, &marginal)).collect();
    let big =
        Dist::from_weights(ps.iter().cloned().zip(weights(rng, k))).expect("weights sum to one");
    let inst = json!({
        "f": f, "g": g, "q": dj(&q),
        "s": big.iter().map(|(p, w)| json!({ "p": dj(p), "weight": crate::dist::format_rational(w) })).collect::<Vec<_>>(),
    });
    let left = lib(glue(|&x| f[x], |&y| g[y], &Dist::flatten(&big), &q))?;
    let outer = lib(glue(
        |p: &Dist<usize>| p.pushforward(|&x| f[x]),
        |q: &Dist<usize>| q.pushforward(|&y| g[y]),
        &big,
        &Dist::delta(q.clone()),
    ))?;
    for (a, b) in outer.support() {
        lib(glue(|&x| f[x], |&y| g[y], a, b))?;
    }
    let right = Dist::flatten(
        &outer.pushforward(|(a, b)| glue(|&x| f[x], |&y| g[y], a, b).expect("checked above")),
    );
    expect_eq(&inst, "m ∘ (μ × μ) = μ ∘ D(m) ∘ m", &left, &right)?;
    let mut oracle = Vec::new();
    for (p, w) in big.iter() {
        for ((x, y), v) in formula(&f, &g, p, &q).iter() {
            oracle.push(((*x, *y), w * v));
        }
    }
    expect_eq(
        &inst,
        "left side matches the formula",
        &left,
        &Dist::from_weights(oracle).expect("normalized"),
    )
}

fn deterministic_naturality(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (nz, nx, ny) = sizes(rng, size);
    let (f, g) = (surjection(rng, nx, nz), surjection(rng, ny, nz));
    let nz2 = rng.gen_range(1..=nz + 1);
    let gamma = map(rng, nz, nz2);
    let (alpha, f2) = square(rng, &f, &gamma, nz2);
    let (beta, g2) = square(rng, &g, &gamma, nz2);
    let y = rng.gen_range(0..ny);
    let fiber: Vec<usize> = (0..nx).filter(|&x| f[x] == g[y]).collect();
    let p = dist_on(rng, &fiber);
    let inst = json!({ "f": f, "g": g, "gamma": gamma, "alpha": alpha, "f'": f2, "beta": beta, "g'": g2, "p": dj(&p), "y": y });
    let eta = lib(glue_deterministic(|&x| f[x], |&b| g[b], &p, &y))?;
    expect_eq(
        &inst,
        "η(p, y) = m(p, δy)",
        &eta,
        &lib(glue(|&x| f[x], |&b| g[b], &p, &Dist::delta(y)))?,
    )?;
    let left = eta.pushforward(|&(x, b)| (alpha[x], beta[b]));
    let right = lib(glue_deterministic(
        |&x| f2[x],
        |&b| g2[b],
        &p.pushforward(|&x| alpha[x]),
        &beta[y],
    ))?;
    expect_eq(&inst, "η′ ∘ (Dα × β) = D(α×β) ∘ η", &left, &right)
}

fn affinity(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (nz, nx, ny) = sizes(rng, size);
    let (f, g) = (surjection(rng, nx, nz), surjection(rng, ny, nz));
    let y = rng.gen_range(0..ny);
    let fiber: Vec<usize> = (0..nx).filter(|&x| f[x] == g[y]).collect();
    let (p1, p2) = (dist_on(rng, &fiber), dist_on(rng, &fiber));
    let t = unit_rational(rng);
    let inst = json!({ "f": f, "g": g, "y": y, "p1": dj(&p1), "p2": dj(&p2), "t": crate::dist::format_rational(&t) });
    let mixed = lib(Dist::convex(&t, &p1, &p2))?;
    let push = |p: &Dist<usize>| p.pushforward(|&x| f[x] * 7 + x % 2);
    expect_eq(
        &inst,
        "pushforward is affine",
        &push(&mixed),
        &lib(Dist::convex(&t, &push(&p1), &push(&p2)))?,
    )?;
    let eta = |p: &Dist<usize>| glue_deterministic(|&x| f[x], |&b| g[b], p, &y);
    expect_eq(
        &inst,
        "gluing with a point is affine",
        &lib(eta(&mixed))?,
        &lib(Dist::convex(&t, &lib(eta(&p1))?, &lib(eta(&p2))?))?,
    )
}
