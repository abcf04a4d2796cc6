//! Coherence of the tensor product: associator, unitors and braiding on
//! complexes, functoriality on relations, the lax structure of `N̂`, and
//! tensors of scenarios and their morphisms.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::gen::{complex, relation, simplicial, standard};
use super::{expect, expect_eq, lib, Law, Trial};
use crate::complex::{
    associator, braiding, flatten_nerve_vertex, kleisli_compose, left_unitor, product_simplex,
    project_pair, right_unitor, tensor_complex, tensor_map, tensor_relation, ComplexMap, Simplex,
    SimplicialComplex, SimplicialRelation, Vertex,
};
use crate::event::{tensor_event, tensor_event_morphism, EventMorphism};
use crate::io::{complex_to_json, event_to_json, relation_to_json, simplicial_to_json};
use crate::sset::{
    push_stochastic, sections, tensor_stochastic, validate_simplicial_distribution,
    SimplicialDistribution, StochMorphism,
};

pub(super) fn laws() -> Vec<Law> {
    vec![
        Law {
            name: "pentagon",
            max_size: 3,
            check: pentagon,
        },
        Law {
            name: "triangle",
            max_size: 3,
            check: triangle,
        },
        Law {
            name: "hexagon",
            max_size: 3,
            check: hexagon,
        },
        Law {
            name: "symmetry",
            max_size: 3,
            check: symmetry,
        },
        Law {
            name: "relations are functorial",
            max_size: 3,
            check: relations_functorial,
        },
        Law {
            name: "nerve is lax monoidal",
            max_size: 3,
            check: nerve_lax,
        },
        Law {
            name: "event tensor",
            max_size: 3,
            check: event_tensor,
        },
        Law {
            name: "stochastic tensor",
            max_size: 2,
            check: stochastic_tensor,
        },
    ]
}

fn small(rng: &mut ChaCha8Rng, prefix: &str, size: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=size.min(3));
    complex(rng, prefix, n, 2)
}

fn point() -> SimplicialComplex {
    SimplicialComplex::simplex(&Simplex::singleton(Vertex::new("pt").expect("valid name")))
}

fn id(c: &SimplicialComplex) -> ComplexMap {
    ComplexMap::identity(c)
}

fn pentagon(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let [a, b, c, d] = ["a", "b", "c", "d"].map(|p| small(rng, p, size));
    let names = [&a, &b, &c, &d].map(complex_to_json);
    let inst = json!({ "complexes": names });
    // ((ab)c)d → (ab)(cd) → a(b(cd))
    let top = lib(
        associator(&a, &b, &tensor_complex(&c, &d)).after(&associator(
            &tensor_complex(&a, &b),
            &c,
            &d,
        )),
    )?;
    // ((ab)c)d → (a(bc))d → a((bc)d) → a(b(cd))
    let first = tensor_map(&associator(&a, &b, &c), &id(&d));
    let second = associator(&a, &tensor_complex(&b, &c), &d);
    let third = tensor_map(&id(&a), &associator(&b, &c, &d));
    let bottom = lib(third.after(&lib(second.after(&first))?))?;
    expect_eq(&inst, "pentagon commutes", &top, &bottom)
}

fn triangle(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (a, b, unit) = (small(rng, "a", size), small(rng, "b", size), point());
    let inst = json!({ "left": complex_to_json(&a), "right": complex_to_json(&b) });
    let via_assoc =
        lib(tensor_map(&id(&a), &lib(left_unitor(&unit, &b))?).after(&associator(&a, &unit, &b)))?;
    let direct = tensor_map(&lib(right_unitor(&a, &unit))?, &id(&b));
    expect_eq(&inst, "triangle commutes", &via_assoc, &direct)
}

fn hexagon(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let [a, b, c] = ["a", "b", "c"].map(|p| small(rng, p, size));
    let names = [&a, &b, &c].map(complex_to_json);
    let inst = json!({ "complexes": names });
    // (ab)c → a(bc) → (bc)a → b(ca)
    let top = lib(
        lib(associator(&b, &c, &a).after(&braiding(&a, &tensor_complex(&b, &c))))?
            .after(&associator(&a, &b, &c)),
    )?;
    // (ab)c → (ba)c → b(ac) → b(ca)
    let bottom = lib(
        lib(tensor_map(&id(&b), &braiding(&a, &c)).after(&associator(&b, &a, &c)))?
            .after(&tensor_map(&braiding(&a, &b), &id(&c))),
    )?;
    expect_eq(&inst, "hexagon commutes", &top, &bottom)
}

fn symmetry(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (a, b) = (small(rng, "a", size), small(rng, "b", size));
    let inst = json!({ "left": complex_to_json(&a), "right": complex_to_json(&b) });
    let twice = lib(braiding(&b, &a).after(&braiding(&a, &b)))?;
    expect_eq(&inst, "β ∘ β = id", &twice, &id(&tensor_complex(&a, &b)))?;
    expect(
        &inst,
        "β is an isomorphism",
        braiding(&a, &b).is_isomorphism(),
    )
}

fn relations_functorial(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let [a0, a1, a2, b0, b1, b2] =
        ["a0_", "a1_", "a2_", "b0_", "b1_", "b2_"].map(|p| small(rng, p, size));
    let (p1, p2) = (relation(rng, &a1, &a0), relation(rng, &a2, &a1));
    let (r1, r2) = (relation(rng, &b1, &b0), relation(rng, &b2, &b1));
    let inst = json!({ "left": [relation_to_json(&p1), relation_to_json(&p2)], "right": [relation_to_json(&r1), relation_to_json(&r2)] });
    let composed_then_tensored = lib(tensor_relation(
        &lib(kleisli_compose(&p1, &p2))?,
        &lib(kleisli_compose(&r1, &r2))?,
    ))?;
    let tensored_then_composed = lib(kleisli_compose(
        &lib(tensor_relation(&p1, &r1))?,
        &lib(tensor_relation(&p2, &r2))?,
    ))?;
    expect_eq(
        &inst,
        "(π₁⋄π₂)⊠(ρ₁⋄ρ₂) = (π₁⊠ρ₁)⋄(π₂⊠ρ₂)",
        &composed_then_tensored,
        &tensored_then_composed,
    )?;
    let ids = lib(tensor_relation(
        &SimplicialRelation::identity(&a0),
        &SimplicialRelation::identity(&b0),
    ))?;
    expect_eq(
        &inst,
        "δ ⊠ δ = δ",
        &ids,
        &SimplicialRelation::identity(&tensor_complex(&a0, &b0)),
    )
}

/// `φ: N̂Σ₁ ⊗ N̂Σ₂ → N̂(Σ₁ ⊗ Σ₂)` is simplicial, unital, and compatible with
/// the multiplication, checked on vertices.
fn nerve_lax(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (a, b) = (small(rng, "a", size), small(rng, "b", size));
    let ab = tensor_complex(&a, &b);
    let inst = json!({ "left": complex_to_json(&a), "right": complex_to_json(&b) });
    let (sa, sb) = (a.simplices(), b.simplices());
    for s in &sa {
        for t in &sb {
            let phi = product_simplex(s, t);
            expect(&inst, "φ lands in the tensor complex", ab.contains(&phi))?;
            expect_eq(
                &inst,
                "φ has the right projections",
                &lib(project_pair(&phi))?,
                &(s.clone(), t.clone()),
            )?;
        }
    }
    for x in a.vertices() {
        for y in b.vertices() {
            let unit = product_simplex(
                &Simplex::singleton(x.clone()),
                &Simplex::singleton(y.clone()),
            );
            expect_eq(
                &inst,
                "φ(δx, δy) = δ(x,y)",
                &unit,
                &Simplex::singleton(Vertex::pair(x, y)),
            )?;
        }
    }
    // Families A in one maximal simplex of each side.
    let pick = |rng: &mut ChaCha8Rng, c: &SimplicialComplex| -> Vec<Simplex> {
        let top = &c.maximal()[rng.gen_range(0..c.maximal().len())];
        let faces = top.subsets();
        (0..rng.gen_range(1..=3))
            .map(|_| faces[rng.gen_range(0..faces.len())].clone())
            .collect()
    };
    let (fa, fb) = (pick(rng, &a), pick(rng, &b));
    // μ ∘ N̂φ ∘ φ: pair up members, take products, then flatten.
    let products: Vec<Vertex> = fa
        .iter()
        .flat_map(|s| {
            fb.iter()
                .map(move |t| Vertex::nerve(&product_simplex(s, t)))
        })
        .collect();
    let left = lib(flatten_nerve_vertex(&Vertex::nerve(
        &Simplex::new(products).expect("nonempty"),
    )))?;
    // φ ∘ (μ × μ): flatten each side, then take the product.
    let ua = Simplex::union_all(&fa).expect("nonempty");
    let ub = Simplex::union_all(&fb).expect("nonempty");
    let right = Vertex::nerve(&product_simplex(&ua, &ub));
    let inst = json!({ "left": complex_to_json(&a), "right": complex_to_json(&b), "families": [format!("{fa:?}"), format!("{fb:?}")] });
    expect_eq(&inst, "μ ∘ N̂φ ∘ φ = φ ∘ (μ × μ)", &left, &right)
}

fn event_tensor(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (ca, cb) = (small(rng, "a", size), small(rng, "b", size));
    let (f, g) = (standard(rng, ca), standard(rng, cb));
    let inst = json!({ "left": event_to_json(&f), "right": event_to_json(&g) });
    let fg = lib(tensor_event(&f, &g))?;
    expect(
        &inst,
        "F ⊗ G satisfies the axioms",
        fg.check_axioms().is_ok(),
    )?;
    expect_eq(
        &inst,
        "base of F ⊗ G",
        fg.base(),
        &tensor_complex(f.base(), g.base()),
    )?;
    // Outcomes at (x,y) are pairs of outcomes.
    for x in f.base().vertices() {
        for y in g.base().vertices() {
            let n = lib(fg.outcomes_of(&Simplex::singleton(Vertex::pair(x, y))))?.len();
            let want = lib(f.outcomes_of(&Simplex::singleton(x.clone())))?.len()
                * lib(g.outcomes_of(&Simplex::singleton(y.clone())))?.len();
            expect_eq(&inst, "vertex outcomes are pairs", &n, &want)?;
        }
    }
    let ids = lib(tensor_event_morphism(
        &EventMorphism::identity(&f),
        &EventMorphism::identity(&g),
    ))?;
    expect_eq(&inst, "id ⊗ id = id", &ids, &EventMorphism::identity(&fg))
}

fn stochastic_tensor(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let d = size.min(1);
    let (f, g) = (simplicial(rng, d, 2), simplicial(rng, d, 2));
    let inst = json!({ "left": simplicial_to_json(&f), "right": simplicial_to_json(&g) });
    let fg = lib(f.tensor(&g))?;
    let ids = lib(tensor_stochastic(
        &StochMorphism::identity(&f),
        &StochMorphism::identity(&g),
    ))?;
    expect_eq(&inst, "id ⊗ id = id", &ids, &StochMorphism::identity(&fg))?;
    // Pushing a product of sections along id ⊗ id gives the paired section.
    let (sf, sg) = (lib(sections(&f, 100_000))?, lib(sections(&g, 100_000))?);
    if sf.is_empty() || sg.is_empty() {
        return Ok(());
    }
    let (a, b) = (
        &sf[rng.gen_range(0..sf.len())],
        &sg[rng.gen_range(0..sg.len())],
    );
    let paired: Vec<Vec<usize>> = (0..=d)
        .map(|n| {
            let kn = g.total().count(n);
            let xs = f.base().count(n);
            let ys = g.base().count(n);
            (0..xs * ys)
                .map(|p| a[n][p / ys] * kn + b[n][p % ys])
                .collect()
        })
        .collect();
    let q = SimplicialDistribution::delta(&paired);
    expect(
        &inst,
        "paired sections are a section of f ⊗ g",
        validate_simplicial_distribution(&fg, &q).is_ok(),
    )?;
    let pushed = lib(push_stochastic(&ids, &q))?;
    expect_eq(
        &inst,
        "identity push preserves the paired section",
        &pushed,
        &q,
    )?;
    Ok(())
}
