//! Bundle scenarios: simplicial maps `f: Γ → Σ` that are surjective on
//! simplices, locally surjective on stars and discrete over vertices.
//!
//! Bundles and event scenarios are equivalent: [`to_event`] takes fibers and
//! face transports, [`elements`] builds the category of elements. Both round
//! trips come with explicit isomorphisms.

use std::collections::{BTreeMap, HashMap};

use crate::complex::{ComplexMap, Simplex, SimplicialComplex, SimplicialRelation, Vertex};
use crate::error::{domain, Error, Result};
use crate::event::{self, EventScenario, EventTables, MapOutcome};
use crate::report::ValidationReport;

/// A validated bundle scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleScenario {
    total: SimplicialComplex,
    base: SimplicialComplex,
    map: BTreeMap<Vertex, Vertex>,
    fibers: BTreeMap<Simplex, Vec<Simplex>>,
}

impl BundleScenario {
    /// Validates and builds a bundle.
    pub fn new(
        total: SimplicialComplex,
        base: SimplicialComplex,
        map: BTreeMap<Vertex, Vertex>,
    ) -> Result<Self> {
        let (bundle, report) = Self::assemble(total, base, map)?;
        if report.is_ok() {
            Ok(bundle)
        } else {
            Err(Error::Invalid(report.to_string()))
        }
    }

    /// Checks the three bundle axioms. A map that is not simplicial is an
    /// error rather than a failed check.
    pub fn validate(
        total: &SimplicialComplex,
        base: &SimplicialComplex,
        map: &BTreeMap<Vertex, Vertex>,
    ) -> Result<ValidationReport> {
        Ok(Self::assemble(total.clone(), base.clone(), map.clone())?.1)
    }

    fn assemble(
        total: SimplicialComplex,
        base: SimplicialComplex,
        map: BTreeMap<Vertex, Vertex>,
    ) -> Result<(Self, ValidationReport)> {
        ComplexMap::new(total.clone(), base.clone(), map.clone())?;
        let mut fibers: BTreeMap<Simplex, Vec<Simplex>> = base
            .simplices()
            .into_iter()
            .map(|s| (s, Vec::new()))
            .collect();
        for g in total.simplices() {
            let image = apply(&map, &g);
            fibers
                .get_mut(&image)
                .expect("image is a base simplex")
                .push(g);
        }
        let bundle = BundleScenario {
            total,
            base,
            map,
            fibers,
        };
        let mut report = ValidationReport::new();
        report.record("surjective on simplices", bundle.check_surjective());
        report.record("local surjectivity", bundle.check_local_surjectivity());
        report.record("discrete over vertices", bundle.check_discrete());
        Ok((bundle, report))
    }

    fn check_surjective(&self) -> std::result::Result<(), String> {
        match self
            .base
            .maximal()
            .iter()
            .find(|m| self.fibers[*m].is_empty())
        {
            Some(m) => Err(format!("no simplex lies over {m}")),
            None => Ok(()),
        }
    }

    fn check_local_surjectivity(&self) -> std::result::Result<(), String> {
        for (sigma, fiber) in &self.fibers {
            for g in fiber {
                for larger in self.base.star(sigma).expect("fiber keys are simplices") {
                    if larger == *sigma {
                        continue;
                    }
                    if !self.fibers[&larger].iter().any(|h| g.is_subset(h)) {
                        return Err(format!("{g} has no extension over {larger}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_discrete(&self) -> std::result::Result<(), String> {
        for m in self.total.maximal() {
            let mut seen: HashMap<&Vertex, &Vertex> = HashMap::new();
            for v in m.vertices() {
                if let Some(w) = seen.insert(&self.map[v], v) {
                    return Err(format!(
                        "{w} and {v} lie over {} and are joined",
                        self.map[v]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn vertex_map(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.map
    }

    /// The projection as a simplicial map.
    pub fn projection(&self) -> ComplexMap {
        ComplexMap::new(self.total.clone(), self.base.clone(), self.map.clone()).expect("validated")
    }

    /// `f⁻¹(σ)` in canonical order.
    pub fn fiber(&self, sigma: &Simplex) -> Result<&[Simplex]> {
        match self.fibers.get(sigma) {
            Some(f) => Ok(f),
            None => domain(format!("{sigma} is not a simplex of the base")),
        }
    }

    /// `r_{σ,σ′}(γ)`: the unique face of `γ` lying over `σ′`.
    pub fn face_transport(&self, gamma: &Simplex, face: &Simplex) -> Result<Simplex> {
        let image = self.image(gamma);
        if !self.fibers.get(&image).is_some_and(|f| f.contains(gamma)) {
            return domain(format!("{gamma} is not a simplex of the total complex"));
        }
        if !face.is_subset(&image) {
            return domain(format!("{face} is not a face of {image}"));
        }
        Ok(gamma
            .restrict_to(|v| face.contains(&self.map[v]))
            .expect("face is nonempty"))
    }

    pub(crate) fn transport(&self, gamma: &Simplex, face: &Simplex) -> Simplex {
        gamma
            .restrict_to(|v| face.contains(&self.map[v]))
            .expect("face is nonempty")
    }

    /// `f(γ)`.
    pub fn image(&self, gamma: &Simplex) -> Simplex {
        apply(&self.map, gamma)
    }
}

fn apply(map: &BTreeMap<Vertex, Vertex>, s: &Simplex) -> Simplex {
    Simplex::new(s.vertices().iter().map(|v| map[v].clone())).expect("nonempty")
}

/// `S_Σ(f)`: fibers as outcome sets, labelled by simplex keys, and face
/// transports as restrictions.
pub fn to_event(f: &BundleScenario) -> Result<EventScenario> {
    let mut tables = EventTables::default();
    for (sigma, fiber) in &f.fibers {
        tables
            .sets
            .insert(sigma.clone(), fiber.iter().map(Simplex::key).collect());
        if sigma.len() > 1 {
            for v in sigma.vertices() {
                let face = sigma.without(v).expect("face");
                let table = fiber
                    .iter()
                    .map(|g| (g.key(), f.transport(g, &face).key()))
                    .collect();
                tables.restrictions.insert((sigma.clone(), face), table);
            }
        }
    }
    EventScenario::from_tables(&f.base, &tables)
}

/// The vertex `(x,s)` of the category of elements.
pub fn element_vertex(x: &Vertex, label: &str) -> Vertex {
    Vertex::raw(format!("({x},{label})"))
}

/// The simplex of `El(F)` standing for the outcome `o ∈ F(σ)`.
pub fn element_simplex(f: &EventScenario, si: usize, o: usize) -> Simplex {
    let sigma = &f.simplices()[si];
    let tuple = f.vertex_tuple(si, o);
    Simplex::new(sigma.vertices().iter().zip(tuple).map(|(x, &t)| {
        let xi = f
            .simplex_index(&Simplex::singleton(x.clone()))
            .expect("vertex");
        element_vertex(x, &f.outcomes(xi)[t])
    }))
    .expect("nonempty")
}

/// `El(F) → Σ`, the category of elements as a bundle.
pub fn elements(f: &EventScenario) -> BundleScenario {
    let base = f.base().clone();
    let mut vertices = Vec::new();
    let mut map = BTreeMap::new();
    for (xi, x) in base.vertices().iter().enumerate() {
        for label in f.outcomes(xi) {
            let v = element_vertex(x, label);
            map.insert(v.clone(), x.clone());
            vertices.push(v);
        }
    }
    let maximal: Vec<Simplex> = base
        .maximal()
        .iter()
        .flat_map(|m| {
            let si = f.simplex_index(m).expect("simplex");
            (0..f.outcomes(si).len()).map(move |o| element_simplex(f, si, o))
        })
        .collect();
    let total = SimplicialComplex::new(vertices, maximal).expect("elements cover every vertex");
    BundleScenario::new(total, base, map).expect("the category of elements is a bundle")
}

/// Checks that `map` is an isomorphism of bundles over the same base.
pub fn verify_bundle_isomorphism(
    source: &BundleScenario,
    target: &BundleScenario,
    map: &BTreeMap<Vertex, Vertex>,
) -> Result<()> {
    if source.base != target.base {
        return Err(Error::Invalid("bundles live over different bases".into()));
    }
    let cm = ComplexMap::new(source.total.clone(), target.total.clone(), map.clone())
        .map_err(|e| Error::Invalid(format!("not a simplicial map: {e}")))?;
    if !cm.is_isomorphism() {
        return Err(Error::Invalid(
            "vertex map is not an isomorphism of total complexes".into(),
        ));
    }
    for (v, w) in map {
        if source.map[v] != target.map[w] {
            return Err(Error::Invalid(format!(
                "{v} and its image {w} lie over different vertices"
            )));
        }
    }
    Ok(())
}

/// The isomorphism `El(S_Σ f) ≅ f` read backwards: `v ↦ (f(v),{v})`.
pub fn elements_round_trip_iso(f: &BundleScenario) -> BTreeMap<Vertex, Vertex> {
    f.map
        .iter()
        .map(|(v, x)| (v.clone(), element_vertex(x, v.name())))
        .collect()
}

/// The isomorphism `F ≅ S_Σ(El F)`, one bijection per simplex.
pub fn event_round_trip_iso(f: &EventScenario, back: &EventScenario) -> Vec<Vec<usize>> {
    f.simplices()
        .iter()
        .enumerate()
        .map(|(si, _)| {
            (0..f.outcomes(si).len())
                .map(|o| {
                    let key = element_simplex(f, si, o).key();
                    back.outcome_index(si, &key)
                        .expect("element simplex is an outcome")
                })
                .collect()
        })
        .collect()
}

/// A morphism of bundles over a common base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMorphism {
    source: BundleScenario,
    target: BundleScenario,
    map: ComplexMap,
}

impl BundleMorphism {
    pub fn new(
        source: BundleScenario,
        target: BundleScenario,
        map: BTreeMap<Vertex, Vertex>,
    ) -> Result<Self> {
        if source.base != target.base {
            return domain("bundle morphisms need a common base");
        }
        let map = ComplexMap::new(source.total.clone(), target.total.clone(), map)?;
        for (v, w) in map.vertex_map() {
            if source.map[v] != target.map[w] {
                return Err(Error::Invalid(format!(
                    "{v} and its image {w} lie over different vertices"
                )));
            }
        }
        Ok(BundleMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(f: &BundleScenario) -> Self {
        BundleMorphism {
            source: f.clone(),
            target: f.clone(),
            map: ComplexMap::identity(&f.total),
        }
    }

    pub fn source(&self) -> &BundleScenario {
        &self.source
    }

    pub fn target(&self) -> &BundleScenario {
        &self.target
    }

    pub fn map(&self) -> &ComplexMap {
        &self.map
    }
}

/// A pullback bundle with the decomposition of each total vertex.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub bundle: BundleScenario,
    /// `(x′, γ)` for each total vertex: a vertex of `Σ′` and a simplex of
    /// `Γ` lying over `π(x′)`.
    pub components: BTreeMap<Vertex, (Vertex, Simplex)>,
}

/// The vertex `(x|γ)` of a pullback total complex.
pub fn pullback_vertex(x: &Vertex, gamma: &Simplex) -> Vertex {
    Vertex::raw(format!("({x}|{})", gamma.key()))
}

/// `π*(f)`: vertices `(x′, γ)` with `f(γ) = π(x′)`; a family is a simplex
/// when its first components form a simplex of `Σ′` and the union of its
/// second components is a simplex of `Γ`.
pub fn pullback_bundle(f: &BundleScenario, pi: &SimplicialRelation) -> Result<Pullback> {
    if pi.target() != &f.base {
        return Err(Error::Composition(
            "relation target is not the bundle base".into(),
        ));
    }
    let base = pi.source().clone();
    let mut components = BTreeMap::new();
    let mut map = BTreeMap::new();
    for x in base.vertices() {
        for gamma in &f.fibers[pi.image(x)] {
            let v = pullback_vertex(x, gamma);
            map.insert(v.clone(), x.clone());
            components.insert(v, (x.clone(), gamma.clone()));
        }
    }
    let mut maximal = Vec::new();
    for m in base.maximal() {
        let image = pi.induce(m);
        for gamma in &f.fibers[&image] {
            maximal.push(
                Simplex::new(
                    m.vertices()
                        .iter()
                        .map(|x| pullback_vertex(x, &f.transport(gamma, pi.image(x)))),
                )
                .expect("nonempty"),
            );
        }
    }
    let total = SimplicialComplex::new(map.keys().cloned(), maximal)?;
    let bundle = BundleScenario::new(total, base, map)?;
    Ok(Pullback { bundle, components })
}

/// `π*(α)`: `(x′, γ) ↦ (x′, α(γ))`.
pub fn pullback_morphism(
    alpha: &BundleMorphism,
    source: &Pullback,
    target: &Pullback,
) -> Result<BundleMorphism> {
    let map = source
        .components
        .iter()
        .map(|(v, (x, gamma))| (v.clone(), pullback_vertex(x, &alpha.map.apply(gamma))))
        .collect();
    BundleMorphism::new(source.bundle.clone(), target.bundle.clone(), map)
}

/// The comparison `(π₁⋄π₂)*(f) ≅ π₂*(π₁*(f))` sending `(x″, γ)` to
/// `(x″, {(y, r(γ, π₁(y))) : y ∈ π₂(x″)})`.
pub fn pullback_composite_iso(
    f: &BundleScenario,
    outer: &SimplicialRelation,
    inner: &SimplicialRelation,
    composite: &Pullback,
) -> BTreeMap<Vertex, Vertex> {
    composite
        .components
        .iter()
        .map(|(v, (x, gamma))| {
            let b = Simplex::new(
                inner
                    .image(x)
                    .vertices()
                    .iter()
                    .map(|y| pullback_vertex(y, &f.transport(gamma, outer.image(y)))),
            )
            .expect("nonempty");
            (v.clone(), pullback_vertex(x, &b))
        })
        .collect()
}

/// The isomorphism `δ*(f) ≅ f`.
pub fn pullback_identity_iso(pulled: &Pullback) -> BTreeMap<Vertex, Vertex> {
    pulled
        .components
        .iter()
        .map(|(v, (_, gamma))| (v.clone(), gamma.vertices()[0].clone()))
        .collect()
}

/// The isomorphism `El(F ∘ π̄) ≅ π*(El F)` over `Σ′`.
pub fn elements_pullback_iso(
    f: &EventScenario,
    pi: &SimplicialRelation,
) -> BTreeMap<Vertex, Vertex> {
    let mut iso = BTreeMap::new();
    for x in pi.source().vertices() {
        let si = f
            .simplex_index(pi.image(x))
            .expect("relation image is a simplex");
        for (o, label) in f.outcomes(si).iter().enumerate() {
            iso.insert(
                element_vertex(x, label),
                pullback_vertex(x, &element_simplex(f, si, o)),
            );
        }
    }
    iso
}

/// Families `(γᵢ)` with `f(γᵢ) = τᵢ` whose union is a simplex of `Γ`: the
/// fiber of `N̂f` over `{τ₁,…,τₙ}`.
pub fn nerve_fiber(f: &BundleScenario, taus: &[Simplex]) -> Result<Vec<Vec<Simplex>>> {
    let union = Simplex::union_all(taus).ok_or_else(|| Error::Domain("empty family".into()))?;
    if !f.base.contains(&union) {
        return domain(format!("{union} is not a simplex of the base"));
    }
    let mut out = vec![Vec::new()];
    for t in taus {
        let mut next = Vec::new();
        for partial in &out {
            for g in &f.fibers[t] {
                let mut p: Vec<Simplex> = partial.clone();
                p.push(g.clone());
                if f.total.contains(&Simplex::union_all(&p).expect("nonempty")) {
                    next.push(p);
                }
            }
        }
        out = next;
    }
    Ok(out)
}

/// `L`: a nerve-fiber family goes to its union, a simplex over `⋃τᵢ`.
pub fn union_of_family(family: &[Simplex]) -> Simplex {
    Simplex::union_all(family).expect("nonempty")
}

/// `L⁻¹`: a simplex over `⋃τᵢ` goes to its faces over each `τᵢ`.
pub fn family_of_union(f: &BundleScenario, gamma: &Simplex, taus: &[Simplex]) -> Vec<Simplex> {
    taus.iter().map(|t| f.transport(gamma, t)).collect()
}

/// A vertex `(x; τ, α_x)` of the mapping bundle: `π(x) = τ` and
/// `α_x: f⁻¹(τ) → g⁻¹(x)` on vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MapVertex {
    pub vertex: Vertex,
    pub relation: Simplex,
    pub alpha: Vec<(Simplex, Vertex)>,
}

impl MapVertex {
    pub(crate) fn name(&self) -> Vertex {
        let alpha = self
            .alpha
            .iter()
            .map(|(a, v)| format!("{}>{v}", a.key()))
            .collect::<Vec<_>>()
            .join(";");
        Vertex::raw(format!(
            "<{}|[{}]|{alpha}>",
            self.vertex,
            self.relation.key()
        ))
    }
}

/// `[f,g]: Γ(f,g) → Σ′`, computed natively on bundles, with the data of
/// each total vertex.
#[derive(Clone, Debug)]
pub struct MappingBundle {
    pub bundle: BundleScenario,
    pub vertices: BTreeMap<Vertex, MapVertex>,
}

/// Builds `Γ(f,g)`. A simplex over `σ` is a relation `π: Δ_σ → N̂Σ` with an
/// over-`Δ_σ` map `π*(N̂Γ) → g⁻¹(Δ_σ)`; such a map is its family of vertex
/// components, so a simplex is determined by its vertices.
///
/// `cap` bounds the function space searched for one `(σ, π)`.
pub fn mapping_bundle_scenario(
    f: &BundleScenario,
    g: &BundleScenario,
    cap: u128,
) -> Result<MappingBundle> {
    let sources = f.base.simplices();
    let mut maximal = Vec::new();
    let mut vertices: BTreeMap<Vertex, MapVertex> = BTreeMap::new();
    for sigma in g.base.maximal() {
        for relation in relations_on(&f.base, &sources, sigma.len()) {
            let image = Simplex::union_all(&relation).expect("nonempty");
            let targets: Vec<&[Simplex]> = sigma
                .vertices()
                .iter()
                .map(|x| g.fibers[&Simplex::singleton(x.clone())].as_slice())
                .collect();
            let mut space: u128 = 1;
            for (j, tau) in relation.iter().enumerate() {
                let p = (targets[j].len() as u128).checked_pow(f.fibers[tau].len() as u32);
                space = p.and_then(|p| space.checked_mul(p)).unwrap_or(u128::MAX);
            }
            if space > cap {
                return Err(Error::Resource(format!(
                    "mapping bundle at {sigma} searches {space} functions, above the cap {cap}"
                )));
            }
            for family in vertex_families(f, g, sigma, &relation, &image, &targets) {
                let simplex: Vec<Vertex> = family
                    .into_iter()
                    .map(|mv| {
                        let name = mv.name();
                        vertices.insert(name.clone(), mv);
                        name
                    })
                    .collect();
                maximal.push(Simplex::new(simplex).expect("nonempty"));
            }
        }
    }
    let map = vertices
        .iter()
        .map(|(name, mv)| (name.clone(), mv.vertex.clone()))
        .collect();
    let total = SimplicialComplex::new(vertices.keys().cloned(), maximal)?;
    let bundle = BundleScenario::new(total, g.base.clone(), map)?;
    Ok(MappingBundle { bundle, vertices })
}

fn relations_on(base: &SimplicialComplex, candidates: &[Simplex], k: usize) -> Vec<Vec<Simplex>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn go(
        base: &SimplicialComplex,
        candidates: &[Simplex],
        k: usize,
        prefix: &mut Vec<Simplex>,
        out: &mut Vec<Vec<Simplex>>,
    ) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for c in candidates {
            prefix.push(c.clone());
            if base.contains(&Simplex::union_all(prefix.iter()).expect("nonempty")) {
                go(base, candidates, k, prefix, out);
            }
            prefix.pop();
        }
    }
    go(base, candidates, k, &mut prefix, &mut out);
    out
}

/// All families of vertex components `α_x: f⁻¹(π(x)) → g⁻¹(x)` sending
/// every generating simplex of the pullback to a simplex of `g`'s total.
fn vertex_families(
    f: &BundleScenario,
    g: &BundleScenario,
    sigma: &Simplex,
    relation: &[Simplex],
    image: &Simplex,
    targets: &[&[Simplex]],
) -> Vec<Vec<MapVertex>> {
    let generators: Vec<Vec<usize>> = f.fibers[image]
        .iter()
        .map(|gamma| {
            relation
                .iter()
                .map(|tau| {
                    let face = f.transport(gamma, tau);
                    f.fibers[tau]
                        .binary_search(&face)
                        .expect("face lies in the fiber")
                })
                .collect()
        })
        .collect();
    let k = relation.len();
    let mut results = Vec::new();
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    fn go(
        g: &BundleScenario,
        domains: &[usize],
        targets: &[&[Simplex]],
        generators: &[Vec<usize>],
        chosen: &mut Vec<Vec<usize>>,
        results: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let j = chosen.len();
        if j == domains.len() {
            results.push(chosen.clone());
            return;
        }
        for func in event::product_indices(&vec![targets[j].len(); domains[j]]) {
            chosen.push(func);
            let ok = generators.iter().all(|gen| {
                let verts: Vec<&Simplex> =
                    (0..=j).map(|i| &targets[i][chosen[i][gen[i]]]).collect();
                g.total
                    .contains(&Simplex::union_all(verts).expect("nonempty"))
            });
            if ok {
                go(g, domains, targets, generators, chosen, results);
            }
            chosen.pop();
        }
    }
    let domains: Vec<usize> = relation.iter().map(|t| f.fibers[t].len()).collect();
    go(g, &domains, targets, &generators, &mut chosen, &mut results);
    results
        .into_iter()
        .map(|family| {
            (0..k)
                .map(|j| MapVertex {
                    vertex: sigma.vertices()[j].clone(),
                    relation: relation[j].clone(),
                    alpha: family[j]
                        .iter()
                        .enumerate()
                        .map(|(a, &t)| {
                            (
                                f.fibers[&relation[j]][a].clone(),
                                targets[j][t].vertices()[0].clone(),
                            )
                        })
                        .collect(),
                })
                .collect()
        })
        .collect()
}

/// The comparison `Γ(f,g) ≅ El([S f, S g])` on vertices.
///
/// `fe` and `ge` must be [`to_event`] of `f` and `g`, and `mapping` the
/// mapping scenario `[fe, ge]`.
pub fn mapping_comparison_iso(
    mapping_bundle: &MappingBundle,
    fe: &EventScenario,
    ge: &EventScenario,
    mapping: &EventScenario,
) -> Result<BTreeMap<Vertex, Vertex>> {
    let mut iso = BTreeMap::new();
    for (name, mv) in &mapping_bundle.vertices {
        let x = Simplex::singleton(mv.vertex.clone());
        let xi = ge.simplex_index(&x).expect("vertex");
        let ti = fe.simplex_index(&mv.relation).expect("simplex");
        let alpha = mv
            .alpha
            .iter()
            .map(|(a, v)| {
                let from = fe.outcome_index(ti, &a.key()).expect("fiber label");
                let to = ge
                    .outcome_index(xi, &Simplex::singleton(v.clone()).key())
                    .expect("fiber label");
                (from, to)
            })
            .collect::<BTreeMap<_, _>>();
        let outcome = MapOutcome {
            relation: vec![mv.relation.clone()],
            image: mv.relation.clone(),
            alpha: alpha.into_values().collect(),
        };
        let label = event::map_outcome_label(fe, ge, &x, &outcome);
        if mapping.outcome_index(xi, &label).is_none() {
            return Err(Error::Invalid(format!(
                "{name} has no counterpart in the mapping scenario"
            )));
        }
        iso.insert(name.clone(), element_vertex(&mv.vertex, &label));
    }
    Ok(iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{event_presheaf, StandardScenario, DEFAULT_FUNCTION_CAP};

    fn s(names: &[&str]) -> Simplex {
        Simplex::from_names(names).unwrap()
    }

    fn v(name: &str) -> Vertex {
        Vertex::new(name).unwrap()
    }

    fn chsh() -> EventScenario {
        let c = SimplicialComplex::generated_by([
            s(&["a0", "b0"]),
            s(&["a0", "b1"]),
            s(&["a1", "b0"]),
            s(&["a1", "b1"]),
        ])
        .unwrap();
        event_presheaf(&StandardScenario::uniform(c, &["0", "1"]).unwrap()).unwrap()
    }

    fn path() -> SimplicialComplex {
        SimplicialComplex::generated_by([s(&["a", "b"]), s(&["b", "c"])]).unwrap()
    }

    #[test]
    fn elements_of_chsh_has_eight_vertices_and_sixteen_edges() {
        let b = elements(&chsh());
        assert_eq!(b.total().vertices().len(), 8);
        assert_eq!(b.total().maximal().len(), 16);
    }

    #[test]
    fn elements_of_two_outcome_point() {
        let base = SimplicialComplex::simplex(&s(&["x"]));
        let f = event_presheaf(&StandardScenario::uniform(base, &["0", "1"]).unwrap()).unwrap();
        assert_eq!(elements(&f).total().vertices().len(), 2);
    }

    #[test]
    fn edge_over_one_vertex_breaks_discreteness() {
        let base = SimplicialComplex::simplex(&s(&["x"]));
        let total = SimplicialComplex::simplex(&s(&["p", "q"]));
        let map = [(v("p"), v("x")), (v("q"), v("x"))].into();
        let report = BundleScenario::validate(&total, &base, &map).unwrap();
        assert!(!report.check("discrete over vertices").unwrap().passed);
    }

    #[test]
    fn missing_lift_breaks_local_surjectivity() {
        let base = SimplicialComplex::simplex(&s(&["x", "y"]));
        let total =
            SimplicialComplex::new([v("p"), v("q"), v("r")], [s(&["p", "r"]), s(&["q"])]).unwrap();
        let map = [(v("p"), v("x")), (v("q"), v("x")), (v("r"), v("y"))].into();
        let report = BundleScenario::validate(&total, &base, &map).unwrap();
        let check = report.check("local surjectivity").unwrap();
        assert!(!check.passed);
        assert!(check.witness.as_ref().unwrap().contains("{q}"));
    }

    #[test]
    fn round_trips_are_isomorphisms() {
        let f = chsh();
        let b = elements(&f);
        let back = to_event(&b).unwrap();
        event::verify_event_isomorphism(&f, &back, &event_round_trip_iso(&f, &back)).unwrap();
        let again = elements(&back);
        verify_bundle_isomorphism(&b, &again, &elements_round_trip_iso(&b)).unwrap();
    }

    #[test]
    fn pullback_along_identity_is_isomorphic() {
        let b = elements(&chsh());
        let p = pullback_bundle(&b, &SimplicialRelation::identity(b.base())).unwrap();
        verify_bundle_isomorphism(&p.bundle, &b, &pullback_identity_iso(&p)).unwrap();
    }

    #[test]
    fn coarse_graining_pullback_merges_fibers() {
        let f = event_presheaf(&StandardScenario::uniform(path(), &["0", "1"]).unwrap()).unwrap();
        let b = elements(&f);
        let point = SimplicialComplex::simplex(&s(&["u"]));
        let pi = SimplicialRelation::new(point, path(), [(v("u"), s(&["a", "b"]))].into()).unwrap();
        let p = pullback_bundle(&b, &pi).unwrap();
        assert_eq!(p.bundle.total().vertices().len(), 4);
        let r = event::reindex(&f, &pi).unwrap();
        verify_bundle_isomorphism(&elements(&r), &p.bundle, &elements_pullback_iso(&f, &pi))
            .unwrap();
    }

    #[test]
    fn nerve_fiber_bijects_with_union_fiber() {
        let b = elements(&chsh());
        let taus = [s(&["a0"]), s(&["a0", "b1"])];
        let fams = nerve_fiber(&b, &taus).unwrap();
        let over = b.fiber(&s(&["a0", "b1"])).unwrap();
        assert_eq!(fams.len(), over.len());
        for fam in &fams {
            assert_eq!(family_of_union(&b, &union_of_family(fam), &taus), *fam);
        }
    }

    #[test]
    fn mapping_bundle_matches_mapping_scenario() {
        let f = event_presheaf(&StandardScenario::uniform(path(), &["0", "1"]).unwrap()).unwrap();
        let base = SimplicialComplex::simplex(&s(&["x"]));
        let g = event_presheaf(&StandardScenario::uniform(base, &["0", "1"]).unwrap()).unwrap();
        let (bf, bg) = (elements(&f), elements(&g));
        let mb = mapping_bundle_scenario(&bf, &bg, DEFAULT_FUNCTION_CAP).unwrap();
        let (fe, ge) = (to_event(&bf).unwrap(), to_event(&bg).unwrap());
        let m = event::mapping_event_scenario(&fe, &ge, DEFAULT_FUNCTION_CAP).unwrap();
        let iso = mapping_comparison_iso(&mb, &fe, &ge, &m.scenario).unwrap();
        verify_bundle_isomorphism(&mb.bundle, &elements(&m.scenario), &iso).unwrap();
        // Five simplices of Σ_path, each with 2^(2^|τ|) functions.
        assert_eq!(mb.bundle.total().vertices().len(), 3 * 4 + 2 * 16);
    }
}
