//! Comparison maps between `N[f,g]` and `Map(Nf,Ng)` for bundle scenarios.

use super::nerve::{nerve_bundle, theta_tuple, tuple_union, NerveBundle, NerveTuple};
use super::{mapping_simplicial, MapSimplex, MappingSpace, SSetMap};
use crate::bundle::{mapping_bundle_scenario, BundleScenario, MapVertex, MappingBundle};
use crate::complex::{Simplex, Vertex};
use crate::error::{Error, Result};

/// The maps `l: N[f,g] → Map(Nf,Ng)` and `t` in the reverse direction,
/// with the outcome of checking `l ∘ t = id`.
///
/// `t` is partial: it is `None` where its degree-wise formula does not name
/// a simplex of `N[f,g]`.
#[derive(Clone, Debug)]
pub struct NerveComparison {
    pub nerve_of_mapping: NerveBundle,
    pub mapping: MappingSpace,
    pub l: SSetMap,
    pub t: Vec<Vec<Option<usize>>>,
    /// Simplices `(σ; τ, α)` with `σᵢ = ∅ ⇔ τᵢ = ∅` for all `i`.
    pub aligned: Vec<Vec<bool>>,
    /// `l(t(s)) = s` wherever `t(s)` is defined.
    pub identity_where_defined: bool,
    /// `t` is total and `l ∘ t = id`.
    pub identity: bool,
    /// Witnesses against `l ∘ t = id`, one per failing simplex.
    pub failures: Vec<String>,
}

impl NerveComparison {
    /// Number of simplices on which `t` is defined.
    pub fn defined(&self) -> usize {
        self.t.iter().flatten().filter(|t| t.is_some()).count()
    }
}

/// Builds `l` and `t` at truncation `d` and checks `l ∘ t = id` at every
/// degree. `cap` bounds each enumeration.
pub fn compare_nerve_mapping(
    f: &BundleScenario,
    g: &BundleScenario,
    d: usize,
    cap: usize,
) -> Result<NerveComparison> {
    let mb = mapping_bundle_scenario(f, g, cap as u128)?;
    let nmb = nerve_bundle(&mb.bundle, d)?;
    let nf = nerve_bundle(f, d)?;
    let ng = nerve_bundle(g, d)?;
    let mapping = mapping_simplicial(&nf.scenario, &ng.scenario, cap)?;
    let ctx = Context {
        f,
        g,
        mb: &mb,
        nf: &nf,
        ng: &ng,
        mapping: &mapping,
    };

    let mut l_tables = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let row = nmb
            .total
            .tuples(n)
            .iter()
            .map(|rho| ctx.l_simplex(n, rho))
            .collect::<Result<Vec<_>>>()?;
        l_tables.push(row);
    }
    let l = SSetMap::new(
        nmb.total.set.clone(),
        mapping.scenario.total().clone(),
        l_tables,
    )?;

    let mut t = Vec::with_capacity(d + 1);
    let mut aligned = Vec::with_capacity(d + 1);
    let mut failures = Vec::new();
    let mut identity_where_defined = true;
    for n in 0..=d {
        let mut trow = Vec::with_capacity(mapping.simplices[n].len());
        let mut arow = Vec::with_capacity(mapping.simplices[n].len());
        for (k, s) in mapping.simplices[n].iter().enumerate() {
            let (sigmas, taus) = (ng.base.tuple(n, s.y), nf.base.tuple(n, s.x));
            arow.push(
                sigmas
                    .iter()
                    .zip(taus)
                    .all(|(a, b)| a.is_some() == b.is_some()),
            );
            let name = mapping.scenario.total().name(n, k);
            match ctx.t_simplex(n, s).map(|rho| nmb.total.index_of(&rho)) {
                Ok(Some(r)) => {
                    trow.push(Some(r));
                    if l.apply(n, r) != k {
                        identity_where_defined = false;
                        failures.push(format!(
                            "l(t({name})) = {}",
                            mapping.scenario.total().name(n, l.apply(n, r))
                        ));
                    }
                }
                Ok(None) => {
                    trow.push(None);
                    failures.push(format!("t({name}) is not a simplex of N[f,g]"));
                }
                Err(reason) => {
                    trow.push(None);
                    failures.push(format!("t({name}) is undefined: {reason}"));
                }
            }
        }
        t.push(trow);
        aligned.push(arow);
    }
    let identity = failures.is_empty();
    Ok(NerveComparison {
        nerve_of_mapping: nmb,
        mapping,
        l,
        t,
        aligned,
        identity_where_defined,
        identity,
        failures,
    })
}

struct Context<'a> {
    f: &'a BundleScenario,
    g: &'a BundleScenario,
    mb: &'a MappingBundle,
    nf: &'a NerveBundle,
    ng: &'a NerveBundle,
    mapping: &'a MappingSpace,
}

impl Context<'_> {
    fn vertex(&self, v: &Vertex) -> &MapVertex {
        &self.mb.vertices[v]
    }

    /// `π̄(ρ)`: the union of the relation values over the vertices of `ρ`.
    fn relation_union(&self, rho: &Simplex) -> Simplex {
        Simplex::union_all(rho.vertices().iter().map(|v| &self.vertex(v).relation))
            .expect("nonempty")
    }

    /// `α_ρ(γ)`: the simplex `{α_v(γ|π(v)) : v ∈ ρ}` of the target total.
    fn apply_alpha(&self, rho: &Simplex, gamma: &Simplex) -> Result<Simplex> {
        let image = rho.vertices().iter().map(|v| {
            let mv = self.vertex(v);
            let face = self.f.transport(gamma, &mv.relation);
            mv.alpha
                .iter()
                .find(|(a, _)| *a == face)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| Error::Invalid(format!("{face} is outside the domain of {v}")))
        });
        Simplex::new(image.collect::<Result<Vec<_>>>()?)
    }

    fn l_simplex(&self, n: usize, rho: &NerveTuple) -> Result<usize> {
        let sigmas: NerveTuple = rho
            .iter()
            .map(|r| r.as_ref().map(|r| self.mb.bundle.image(r)))
            .collect();
        let taus: NerveTuple = rho
            .iter()
            .map(|r| r.as_ref().map(|r| self.relation_union(r)))
            .collect();
        let y = self.ng.base.index_of(&sigmas).expect("base tuple");
        let x = self
            .nf
            .base
            .index_of(&taus)
            .ok_or_else(|| Error::Invalid("π̄ leaves the nerve".into()))?;
        let pb = self.mapping.source_pullback(n, x);
        let delta = super::TruncatedSSet::standard_simplex(n, self.nf.base.set.bound())?;
        let mut alpha = Vec::with_capacity(pb.pairs.len());
        for (m, level) in pb.pairs.iter().enumerate() {
            let mut row = Vec::with_capacity(level.len());
            for &(gamma, theta) in level {
                let theta: Vec<usize> = delta
                    .name(m, theta)
                    .chars()
                    .map(|c| c.to_digit(10).expect("digit") as usize)
                    .collect();
                let blocks = theta_tuple(rho, &theta);
                let gammas = self.nf.total.tuple(m, gamma);
                let image = blocks
                    .iter()
                    .zip(gammas)
                    .map(|(b, g)| match (b, g) {
                        (Some(b), Some(g)) => self.apply_alpha(b, g).map(Some),
                        (None, None) => Ok(None),
                        _ => Err(Error::Invalid(
                            "block and fiber entry disagree on emptiness".into(),
                        )),
                    })
                    .collect::<Result<NerveTuple>>()?;
                row.push(
                    self.ng
                        .total
                        .index_of(&image)
                        .ok_or_else(|| Error::Invalid("β leaves NΓ′".into()))?,
                );
            }
            alpha.push(row);
        }
        self.mapping
            .index_of(n, &MapSimplex { y, x, alpha })
            .ok_or_else(|| Error::Invalid(format!("l sends {rho:?} outside Map(Nf,Ng)")))
    }

    /// The degree-wise formula for `t`; `Err` names why it is undefined.
    fn t_simplex(&self, n: usize, s: &MapSimplex) -> std::result::Result<NerveTuple, String> {
        let (sigmas, taus) = (self.ng.base.tuple(n, s.y), self.nf.base.tuple(n, s.x));
        let pb = self.mapping.source_pullback(n, s.x);
        let delta = super::TruncatedSSet::standard_simplex(n, self.nf.base.set.bound())
            .map_err(|e| e.to_string())?;
        let mut out = Vec::with_capacity(n);
        for i in 1..=n {
            match (&sigmas[i - 1], &taus[i - 1]) {
                (None, None) => out.push(None),
                (None, Some(tau)) => {
                    return Err(format!("entry {i} has σ = ∅ but τ = {{{}}}", tau.key()))
                }
                (Some(sigma), None) => {
                    return Err(format!("entry {i} has σ = {{{}}} but τ = ∅", sigma.key()))
                }
                (Some(sigma), Some(tau)) => {
                    let edge = delta
                        .index_of(1, &format!("{}{}", i - 1, i))
                        .expect("edge of Δⁿ");
                    let fiber = self.f.fiber(tau).map_err(|e| e.to_string())?;
                    let mut images = Vec::with_capacity(fiber.len());
                    for gamma in fiber {
                        let g = self
                            .nf
                            .total
                            .index_of(&vec![Some(gamma.clone())])
                            .expect("fiber tuple");
                        let k = pb.index_of(1, g, edge).expect("pullback pair");
                        let target = self.ng.total.tuple(1, s.alpha[1][k])[0]
                            .clone()
                            .expect("nonempty image");
                        images.push((gamma.clone(), target));
                    }
                    let mut vertices = Vec::with_capacity(sigma.len());
                    for v in sigma.vertices() {
                        let alpha = images
                            .iter()
                            .map(|(gamma, target)| {
                                let vertex = target
                                    .vertices()
                                    .iter()
                                    .find(|w| self.ng_vertex_over(w) == v)
                                    .expect("target lies over σ")
                                    .clone();
                                (gamma.clone(), vertex)
                            })
                            .collect();
                        let mv = MapVertex {
                            vertex: v.clone(),
                            relation: tau.clone(),
                            alpha,
                        };
                        let name = mv.name();
                        if !self.mb.vertices.contains_key(&name) {
                            return Err(format!("{name} is not a vertex of Γ(f,g)"));
                        }
                        vertices.push(name);
                    }
                    out.push(Some(Simplex::new(vertices).map_err(|e| e.to_string())?));
                }
            }
        }
        if let Some(u) = tuple_union(&out) {
            if !self.mb.bundle.total().contains(&u) {
                return Err(format!("{u} is not a simplex of Γ(f,g)"));
            }
        }
        Ok(out)
    }

    fn ng_vertex_over(&self, w: &Vertex) -> &Vertex {
        &self.g.vertex_map()[w]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::elements;
    use crate::complex::SimplicialComplex;
    use crate::event::{event_presheaf, StandardScenario};

    fn uniform_bundle(maximal: &[&[&str]], labels: &[&str]) -> BundleScenario {
        let c = SimplicialComplex::generated_by(
            maximal.iter().map(|m| Simplex::from_names(m).unwrap()),
        )
        .unwrap();
        elements(&event_presheaf(&StandardScenario::uniform(c, labels).unwrap()).unwrap())
    }

    #[test]
    fn point_bundles_agree_where_aligned() {
        let f = uniform_bundle(&[&["a"]], &["0", "1"]);
        let g = uniform_bundle(&[&["b"]], &["0", "1"]);
        let cmp = compare_nerve_mapping(&f, &g, 2, 100_000).unwrap();
        assert!(cmp.identity_where_defined);
        assert!(!cmp.identity);
        // Over the degenerate edge (∅) of NΣ′ the mapping space has a simplex
        // for each x in (NΣ)₁, while N[f,g] has only (∅).
        let over_empty = (0..cmp.mapping.simplices[1].len())
            .filter(|&k| {
                cmp.mapping.scenario.project(1, k) == cmp.mapping.scenario.base().degen(0, 0, 0)
            })
            .count();
        assert_eq!(over_empty, 2);
        assert!(cmp.failures.iter().any(|w| w.contains("σ = ∅ but τ = {a}")));
    }

    #[test]
    fn edge_bundles_agree_where_aligned() {
        let f = uniform_bundle(&[&["a", "b"]], &["0", "1"]);
        let g = uniform_bundle(&[&["c"]], &["0", "1"]);
        let cmp = compare_nerve_mapping(&f, &g, 2, 1_000_000).unwrap();
        assert!(cmp.identity_where_defined);
        assert!(cmp.defined() > 0);
        assert!(!cmp.identity);
        // Two vertices over the same target vertex with different relations
        // cannot share a simplex of Γ(f,g).
        assert!(cmp
            .failures
            .iter()
            .any(|w| w.contains("is not a simplex of Γ(f,g)")));
    }
}
