//! Mapping scenarios: the bundle comparison, the nerve comparison, the
//! tensor-hom inclusion, and decompositions of noncontextual
//! distributions on `Map(f,g)`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::gen::{bundle, complex, simplicial, weights};
use super::{expect, expect_eq, lib, Law, Trial};
use crate::bundle::{
    elements, mapping_bundle_scenario, mapping_comparison_iso, to_event, verify_bundle_isomorphism,
    BundleScenario,
};
use crate::dist::{Dist, Rational};
use crate::error::Error;
use crate::event::mapping_event_scenario;
use crate::io::{bundle_to_json, simplicial_to_json};
use crate::solve::decompose_noncontextual;
use crate::sset::{
    affine_table_of_morphism, compare_nerve_mapping, mapping_simplicial, morphisms, mu, sections,
    tensor_inclusion, theta_simplicial, zeta, zeta_inverse, AffineTable, MappingSpace,
    SimplicialDistribution, SimplicialScenario,
};

/// Enumeration bound for one trial; larger instances are skipped.
const CAP: usize = 20_000;

pub(super) fn laws() -> Vec<Law> {
    vec![
        Law {
            name: "mapping bundle isomorphism",
            max_size: 2,
            check: bundle_iso,
        },
        Law {
            name: "nerve comparison where defined",
            max_size: 2,
            check: nerve_where_defined,
        },
        Law {
            name: "nerve comparison identity",
            max_size: 2,
            check: nerve_identity,
        },
        Law {
            name: "tensor inclusion injective",
            max_size: 2,
            check: tensor_injective,
        },
        Law {
            name: "zeta round trip",
            max_size: 2,
            check: zeta_round_trip,
        },
        Law {
            name: "decomposition",
            max_size: 2,
            check: decomposition,
        },
        Law {
            name: "convex maps arise from zeta",
            max_size: 2,
            check: convex_maps,
        },
    ]
}

/// Skips instances that exceed the enumeration bound.
fn bounded<T>(r: crate::Result<T>) -> Result<Option<T>, serde_json::Value> {
    match r {
        Ok(t) => Ok(Some(t)),
        Err(Error::Resource(_)) => Ok(None),
        Err(e) => lib(Err(e)),
    }
}

fn tiny_bundle(rng: &mut ChaCha8Rng, prefix: &str, size: usize) -> BundleScenario {
    let n = rng.gen_range(1..=size.min(2));
    let base = complex(rng, prefix, n, 2);
    bundle(rng, &base, 2)
}

fn bundle_iso(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (f, g) = (tiny_bundle(rng, "a", size), tiny_bundle(rng, "b", 1));
    let inst = json!({ "source": bundle_to_json(&f), "target": bundle_to_json(&g) });
    let Some(mb) = bounded(mapping_bundle_scenario(&f, &g, CAP as u128))? else {
        return Ok(());
    };
    let (fe, ge) = (lib(to_event(&f))?, lib(to_event(&g))?);
    let Some(m) = bounded(mapping_event_scenario(&fe, &ge, CAP as u128))? else {
        return Ok(());
    };
    let iso = lib(mapping_comparison_iso(&mb, &fe, &ge, &m.scenario))?;
    expect_eq(
        &inst,
        "Γ(f,g) ≅ El([S f, S g])",
        &verify_bundle_isomorphism(&mb.bundle, &elements(&m.scenario), &iso)
            .map_err(|e| e.to_string()),
        &Ok(()),
    )?;
    // Oracle: a vertex over x is a simplex τ of the source base with a
    // function from the fiber over τ to the fiber over x.
    let mut want = 0usize;
    for x in g.base().vertices() {
        let targets = lib(g.fiber(&crate::complex::Simplex::singleton(x.clone())))?.len();
        for tau in f.base().simplices() {
            want += targets.pow(lib(f.fiber(&tau))?.len() as u32);
        }
    }
    expect_eq(
        &inst,
        "vertex count",
        &mb.bundle.total().vertices().len(),
        &want,
    )
}

fn point_bundles(rng: &mut ChaCha8Rng, size: usize) -> (BundleScenario, BundleScenario) {
    let f = {
        let n = rng.gen_range(1..=size.min(2));
        let base = complex(rng, "a", n, 2);
        bundle(rng, &base, 2)
    };
    let g = {
        let base = complex(rng, "b", 1, 1);
        bundle(rng, &base, 2)
    };
    (f, g)
}

fn nerve_where_defined(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (f, g) = point_bundles(rng, size);
    let inst = json!({ "source": bundle_to_json(&f), "target": bundle_to_json(&g) });
    let Some(cmp) = bounded(compare_nerve_mapping(&f, &g, 1, CAP))? else {
        return Ok(());
    };
    expect(
        &inst,
        "l ∘ t = id where t is defined",
        cmp.identity_where_defined,
    )?;
    expect(&inst, "t is defined somewhere", cmp.defined() > 0)
}

fn nerve_identity(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let (f, g) = point_bundles(rng, size);
    let Some(cmp) = bounded(compare_nerve_mapping(&f, &g, 1, CAP))? else {
        return Ok(());
    };
    if cmp.identity {
        Ok(())
    } else {
        Err(json!({
            "check": "l ∘ t = id",
            "instance": { "source": bundle_to_json(&f), "target": bundle_to_json(&g) },
            "witness": cmp.failures[0],
        }))
    }
}

fn tensor_injective(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let d = size - 1;
    let (f, g, h) = (
        simplicial(rng, d, 2),
        simplicial(rng, d, 2),
        simplicial(rng, d, 2),
    );
    let inst = json!({ "f": simplicial_to_json(&f), "g": simplicial_to_json(&g), "h": simplicial_to_json(&h) });
    let fg = lib(f.tensor(&g))?;
    let Some(space) = bounded(mapping_simplicial(&g, &h, CAP))? else {
        return Ok(());
    };
    let Some(source) = bounded(morphisms(&fg, &h, CAP))? else {
        return Ok(());
    };
    let Some(target) = bounded(morphisms(&f, &space.scenario, CAP))? else {
        return Ok(());
    };
    let mut images = source
        .iter()
        .map(|m| lib(tensor_inclusion(&f, &space, &fg, m)))
        .collect::<Result<Vec<_>, _>>()?;
    for m in &images {
        expect(
            &inst,
            "images are morphisms into Map(g,h)",
            target.contains(m),
        )?;
    }
    images.sort_by(|a, b| (&a.pi, &a.alpha).cmp(&(&b.pi, &b.alpha)));
    images.dedup();
    expect_eq(
        &inst,
        "the inclusion is injective",
        &images.len(),
        &source.len(),
    )
}

fn space_pair(
    rng: &mut ChaCha8Rng,
    size: usize,
) -> Result<Option<(SimplicialScenario, MappingSpace)>, serde_json::Value> {
    let d = size - 1;
    let (f, g) = (simplicial(rng, d, 2), simplicial(rng, d, 2));
    Ok(bounded(mapping_simplicial(&f, &g, CAP))?.map(|space| (g, space)))
}

fn zeta_round_trip(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let Some((_, space)) = space_pair(rng, size)? else {
        return Ok(());
    };
    let inst = json!({ "source": simplicial_to_json(space.source()), "target": simplicial_to_json(space.target()) });
    let Some(ms) = bounded(morphisms(space.source(), space.target(), CAP))? else {
        return Ok(());
    };
    let Some(secs) = bounded(sections(&space.scenario, CAP))? else {
        return Ok(());
    };
    expect_eq(
        &inst,
        "morphisms biject with sections of Map(f,g)",
        &ms.len(),
        &secs.len(),
    )?;
    for m in &ms {
        let s = lib(zeta(&space, m))?;
        expect(&inst, "ζ(m) is a section", secs.contains(&s))?;
        expect_eq(&inst, "ζ⁻¹ ∘ ζ = id", &lib(zeta_inverse(&space, &s))?, m)?;
    }
    Ok(())
}

/// A random convex combination of up to three deterministic morphisms.
fn random_mixture(
    rng: &mut ChaCha8Rng,
    space: &MappingSpace,
) -> Result<Option<Vec<(Rational, Vec<Vec<usize>>)>>, serde_json::Value> {
    let Some(ms) = bounded(morphisms(space.source(), space.target(), CAP))? else {
        return Ok(None);
    };
    if ms.is_empty() {
        return Ok(None);
    }
    let k = rng.gen_range(1..=ms.len().min(3));
    let chosen: Vec<_> = ms.choose_multiple(rng, k).collect();
    let ws = weights(rng, k);
    let mut out = Vec::new();
    for (w, m) in ws.into_iter().zip(chosen) {
        out.push((w, lib(zeta(space, m))?));
    }
    Ok(Some(out))
}

fn mixture_distribution(
    parts: &[(Rational, Vec<Vec<usize>>)],
) -> Result<SimplicialDistribution, serde_json::Value> {
    let secs: Vec<_> = parts.iter().map(|(_, s)| s.clone()).collect();
    let q = lib(Dist::from_weights(
        parts.iter().enumerate().map(|(i, (w, _))| (i, w.clone())),
    ))?;
    lib(theta_simplicial(&secs, &q))
}

fn decomposition(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let Some((g, space)) = space_pair(rng, size)? else {
        return Ok(());
    };
    let Some(parts) = random_mixture(rng, &space)? else {
        return Ok(());
    };
    let p = mixture_distribution(&parts)?;
    let inst =
        json!({ "source": simplicial_to_json(space.source()), "target": simplicial_to_json(&g) });
    let Some(found) = bounded(decompose_noncontextual(&space, &p, CAP))? else {
        return Ok(());
    };
    let total = found
        .iter()
        .fold(Rational::from_integer(0.into()), |acc, (w, _)| acc + w);
    expect_eq(
        &inst,
        "weights sum to one",
        &total,
        &Rational::from_integer(1.into()),
    )?;
    // The decomposition reproduces p through ζ.
    let rebuilt: Vec<(Rational, Vec<Vec<usize>>)> = found
        .iter()
        .map(|(w, m)| Ok((w.clone(), lib(zeta(&space, m))?)))
        .collect::<Result<_, serde_json::Value>>()?;
    expect_eq(
        &inst,
        "Θ of the decomposition is p",
        &mixture_distribution(&rebuilt)?,
        &p,
    )?;
    // Oracle: on every deterministic input the induced maps agree.
    let Some(inputs) = bounded(sections(space.source(), CAP))? else {
        return Ok(());
    };
    let mu_p = lib(mu(&space, &p))?;
    for s in &inputs {
        let q = SimplicialDistribution::delta(s);
        let mut acc: Vec<(Rational, SimplicialDistribution)> = Vec::new();
        for (w, m) in &found {
            acc.push((w.clone(), lib(affine_table_of_morphism(&g, m).apply(&q))?));
        }
        let refs: Vec<(Rational, &SimplicialDistribution)> =
            acc.iter().map(|(w, d)| (w.clone(), d)).collect();
        let want = lib(SimplicialDistribution::mixture(&refs))?;
        expect_eq(
            &inst,
            "μ(p) on a deterministic input",
            &lib(mu_p.apply(&q))?,
            &want,
        )?;
    }
    Ok(())
}

fn convex_maps(rng: &mut ChaCha8Rng, size: usize) -> Trial {
    let Some((g, space)) = space_pair(rng, size)? else {
        return Ok(());
    };
    let Some(parts) = random_mixture(rng, &space)? else {
        return Ok(());
    };
    let inst =
        json!({ "source": simplicial_to_json(space.source()), "target": simplicial_to_json(&g) });
    let p = mixture_distribution(&parts)?;
    let tables = parts
        .iter()
        .map(|(w, s)| {
            Ok((
                w.clone(),
                affine_table_of_morphism(&g, &lib(zeta_inverse(&space, s))?),
            ))
        })
        .collect::<Result<Vec<_>, serde_json::Value>>()?;
    expect_eq(
        &inst,
        "μ(Σ λᵢ ζ(mᵢ)) = Σ λᵢ mᵢ*",
        &lib(mu(&space, &p))?,
        &lib(AffineTable::mixture(&tables))?,
    )
}
