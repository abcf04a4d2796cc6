//! Monad laws for `D` and `N̂`, Kleisli composition, and the identification
//! of sections and simplicial distributions with limits over `χ_f`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::gen::{complex, dist_on, relation, simplicial, weights};
use super::{expect, expect_eq, lib, Law, Trial};
use crate::complex::{
    flatten_nerve_vertex, kleisli_compose, monad_mult, monad_unit, nerve_complex, nerve_map,
    ComplexMap, Simplex, SimplicialRelation, Vertex,
};
use crate::dist::Dist;
use crate::io::{complex_to_json, relation_to_json, simplicial_to_json};
use crate::sset::{
    monotone_sequences, sections, theta_simplicial, validate_simplicial_distribution, Section,
    SimplicialDistribution, SimplicialScenario,
};

pub(super) fn laws() -> Vec<Law> {
    vec![
        Law {
            name: "distribution unit",
            max_size: 4,
            check: dist_unit,
        },
        Law {
            name: "distribution associativity",
            max_size: 3,
            check: dist_assoc,
        },
        Law {
            name: "nerve unit",
            max_size: 5,
            check: nerve_unit,
        },
        Law {
            name: "nerve associativity",
            max_size: 5,
            check: nerve_assoc,
        },
        Law {
            name: "kleisli category",
            max_size: 4,
            check: kleisli,
        },
        Law {
            name: "sections are the limit of chi",
            max_size: 3,
            check: sections_limit,
        },
        Law {
            name: "distributions are the limit of D(chi)",
            max_size: 3,
            check: distributions_limit,
        },
    ]
}

fn nested<R: Rng>(rng: &mut R, items: &[Dist<usize>]) -> Dist<Dist<usize>> {
    dist_on(rng, items)
}

fn dist_unit(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let p = dist_on(rng, &(0..size + 1).collect::<Vec<_>>());
    let inst = json!({ "p": p.to_string() });
    expect_eq(
        &inst,
        "μ ∘ δ_D = id",
        &Dist::flatten(&Dist::delta(p.clone())),
        &p,
    )?;
    expect_eq(
        &inst,
        "μ ∘ Dδ = id",
        &Dist::flatten(&p.pushforward(|&x| Dist::delta(x))),
        &p,
    )
}

fn dist_assoc(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let base: Vec<usize> = (0..size + 1).collect();
    let inner: Vec<Dist<usize>> = (0..size + 1).map(|_| dist_on(rng, &base)).collect();
    let middle: Vec<Dist<Dist<usize>>> = (0..size + 1).map(|_| nested(rng, &inner)).collect();
    let outer = dist_on(rng, &middle);
    let inst = json!({ "outer": format!("{outer:?}") });
    let left = Dist::flatten(&Dist::flatten(&outer));
    let right = Dist::flatten(&outer.pushforward(Dist::flatten));
    expect_eq(&inst, "μ ∘ μ_D = μ ∘ Dμ", &left, &right)?;
    // Independent oracle: the weight of x is the sum over all paths.
    let mut oracle = Vec::new();
    for (m, a) in outer.iter() {
        for (i, b) in m.iter() {
            for (x, c) in i.iter() {
                oracle.push((*x, a * b * c));
            }
        }
    }
    expect_eq(
        &inst,
        "flatten matches path sums",
        &left,
        &Dist::from_weights(oracle).expect("normalized"),
    )
}

fn small_complex(rng: &mut ChaCha8Rng, size: usize) -> crate::complex::SimplicialComplex {
    // Maximal simplices have at most three vertices so that N̂²Σ stays
    // enumerable.
    complex(rng, "v", size.min(5), 3)
}

fn nerve_unit(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let c = small_complex(rng, size);
    let inst = json!({ "complex": complex_to_json(&c) });
    let n = nerve_complex(&c);
    let mu = monad_mult(&c);
    let id = ComplexMap::identity(&n);
    let unit_nerve = monad_unit(&n).to_nerve_map();
    let nerve_unit = nerve_map(&monad_unit(&c).to_nerve_map());
    expect_eq(&inst, "μ ∘ δ_N̂ = id", &lib(mu.after(&unit_nerve))?, &id)?;
    expect_eq(&inst, "μ ∘ N̂δ = id", &lib(mu.after(&nerve_unit))?, &id)
}

fn nerve_vertex(members: impl IntoIterator<Item = Vertex>) -> Vertex {
    Vertex::nerve(&Simplex::new(members).expect("nonempty"))
}

/// A random vertex of `N̂ᵏΣ` inside the simplex `top`, together with the
/// union of the simplices it is built from.
fn random_vertex(rng: &mut ChaCha8Rng, top: &Simplex, k: usize) -> (Vertex, Simplex) {
    if k == 1 {
        let faces = top.subsets();
        let s = faces.choose(rng).expect("nonempty").clone();
        return (Vertex::nerve(&s), s);
    }
    let parts: Vec<(Vertex, Simplex)> = (0..rng.gen_range(1..=3))
        .map(|_| random_vertex(rng, top, k - 1))
        .collect();
    let union = Simplex::union_all(parts.iter().map(|(_, s)| s)).expect("nonempty");
    (nerve_vertex(parts.into_iter().map(|(v, _)| v)), union)
}

fn nerve_assoc(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let c = small_complex(rng, size);
    let top = c.maximal().choose(rng).expect("nonempty").clone();
    let (v, union) = random_vertex(rng, &top, 3);
    let inst = json!({ "complex": complex_to_json(&c), "vertex": v.name() });
    // N̂μ applies μ to each member; μ_{N̂Σ} flattens the outer two levels.
    let members = lib(v
        .as_nerve()
        .ok_or_else(|| crate::Error::Domain("not a nerve vertex".into())))?;
    let mapped = members
        .vertices()
        .iter()
        .map(|w| lib(flatten_nerve_vertex(w)))
        .collect::<Result<Vec<_>, _>>()?;
    let left = lib(flatten_nerve_vertex(&nerve_vertex(mapped)))?;
    let right = lib(flatten_nerve_vertex(&lib(flatten_nerve_vertex(&v))?))?;
    expect_eq(&inst, "μ ∘ N̂μ = μ ∘ μ_N̂", &left, &right)?;
    expect_eq(
        &inst,
        "both sides are the union",
        &left,
        &Vertex::nerve(&union),
    )?;
    expect(&inst, "the union is a simplex", c.contains(&union))
}

fn kleisli(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let cs: Vec<_> = (0..4)
        .map(|i| {
            let n = rng.gen_range(1..=size.min(4));
            complex(rng, &format!("c{i}_"), n, 3)
        })
        .collect();
    let p1 = relation(rng, &cs[1], &cs[0]);
    let p2 = relation(rng, &cs[2], &cs[1]);
    let p3 = relation(rng, &cs[3], &cs[2]);
    let inst = json!({ "outer": relation_to_json(&p1), "middle": relation_to_json(&p2), "inner": relation_to_json(&p3) });
    let left = lib(kleisli_compose(&lib(kleisli_compose(&p1, &p2))?, &p3))?;
    let right = lib(kleisli_compose(&p1, &lib(kleisli_compose(&p2, &p3))?))?;
    expect_eq(&inst, "(π₁⋄π₂)⋄π₃ = π₁⋄(π₂⋄π₃)", &left, &right)?;
    expect_eq(
        &inst,
        "δ⋄π = π",
        &lib(kleisli_compose(&SimplicialRelation::identity(&cs[0]), &p1))?,
        &p1,
    )?;
    expect_eq(
        &inst,
        "π⋄δ = π",
        &lib(kleisli_compose(&p1, &SimplicialRelation::identity(&cs[1])))?,
        &p1,
    )?;
    // Oracle: x ↦ ⋃ over y ∈ π₃(x), z ∈ π₂(y) of π₁(z).
    for x in cs[3].vertices() {
        let want = Simplex::union_all(
            p3.image(x)
                .vertices()
                .iter()
                .flat_map(|y| p2.image(y).vertices().iter().map(|z| p1.image(z))),
        )
        .expect("nonempty");
        expect_eq(&inst, "composite matches unions", left.image(x), &want)?;
    }
    Ok(())
}

/// Sections by backtracking over simplices in degree order, checking
/// faces against lower degrees and degeneracies against their sources.
fn brute_force_sections(f: &SimplicialScenario) -> Vec<Section> {
    let xs = f.base();
    let order: Vec<(usize, usize)> = (0..=f.bound())
        .flat_map(|n| (0..xs.count(n)).map(move |x| (n, x)))
        .collect();
    let mut out = Vec::new();
    let mut cur: Section = (0..=f.bound())
        .map(|n| vec![usize::MAX; xs.count(n)])
        .collect();
    fn go(
        f: &SimplicialScenario,
        order: &[(usize, usize)],
        k: usize,
        cur: &mut Section,
        out: &mut Vec<Section>,
    ) {
        let Some(&(n, x)) = order.get(k) else {
            out.push(cur.clone());
            return;
        };
        let (xs, es) = (f.base(), f.total());
        for &e in f.fiber(n, x) {
            let faces_ok =
                n == 0 || (0..=n).all(|i| es.face(n, e, i) == cur[n - 1][xs.face(n, x, i)]);
            let degens_ok = n == 0
                || xs
                    .degenerate_from(n, x)
                    .iter()
                    .all(|&(j, y)| es.degen(n - 1, cur[n - 1][y], j) == e);
            if faces_ok && degens_ok {
                cur[n][x] = e;
                go(f, order, k + 1, cur, out);
            }
        }
        cur[n][x] = usize::MAX;
    }
    go(f, &order, 0, &mut cur, &mut out);
    out
}

fn sections_limit(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let f = simplicial(rng, size.min(2), 2);
    let inst = json!({ "scenario": simplicial_to_json(&f) });
    let mut got = lib(sections(&f, 1_000_000))?;
    let mut want = brute_force_sections(&f);
    got.sort();
    want.sort();
    expect_eq(&inst, "sections equal the limit of χ_f", &got, &want)
}

/// `p` is a simplicial map `X → D(E)` over `X`: for every `θ: [m] → [n]`,
/// `p_{θ*x} = D(θ*)(p_x)`, and `p_x` lies over `x`.
fn is_section_of_d(f: &SimplicialScenario, p: &SimplicialDistribution) -> bool {
    let (xs, es) = (f.base(), f.total());
    (0..=f.bound()).all(|n| {
        (0..xs.count(n)).all(|x| {
            p.dists[n][x].support().all(|&e| f.project(n, e) == x)
                && (0..=f.bound()).all(|m| {
                    monotone_sequences(m, n).iter().all(|theta| {
                        p.dists[m][xs.apply(n, x, theta)]
                            == p.dists[n][x].pushforward(|&e| es.apply(n, e, theta))
                    })
                })
        })
    })
}

fn distributions_limit(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let f = simplicial(rng, size.min(2), 2);
    let secs = lib(sections(&f, 1_000_000))?;
    let inst = |p: &SimplicialDistribution| -> Value {
        json!({ "scenario": simplicial_to_json(&f), "distribution": crate::io::sdist_to_json(&f, p) })
    };
    if secs.is_empty() {
        return Ok(());
    }
    let k = rng.gen_range(1..=secs.len().min(4));
    let chosen: Vec<Section> = secs.choose_multiple(rng, k).cloned().collect();
    let q = Dist::from_weights((0..k).zip(weights(rng, k))).expect("weights sum to one");
    let mut p = lib(theta_simplicial(&chosen, &q))?;
    expect(
        &inst(&p),
        "Θ(Q) is compatible over χ_f",
        validate_simplicial_distribution(&f, &p).is_ok(),
    )?;
    expect(
        &inst(&p),
        "Θ(Q) is a section of D(f)",
        is_section_of_d(&f, &p),
    )?;
    // Perturb one entry; both characterizations must still agree.
    let n = rng.gen_range(0..=f.bound());
    let x = rng.gen_range(0..f.base().count(n));
    p.dists[n][x] = dist_on(rng, f.fiber(n, x));
    let limit = validate_simplicial_distribution(&f, &p).is_ok();
    expect_eq(
        &inst(&p),
        "χ_f compatibility agrees with D(f)-sections",
        &limit,
        &is_section_of_d(&f, &p),
    )
}
