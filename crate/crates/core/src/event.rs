//! Event scenarios: finite functors on the face poset of a simplicial complex.
//!
//! An [`EventScenario`] assigns a nonempty outcome set `F(σ)` to every simplex
//! and a surjective restriction map to every codimension-one face. Locality
//! is checked through injectivity of `F(σ) → ∏_{x∈σ} F(x)`, so every outcome
//! is identified with its tuple of vertex outcomes. Outcomes are addressed by
//! index internally and carry string labels for input and output.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::complex::{
    kleisli_compose, project_pair, tensor_complex, tensor_relation, Simplex, SimplicialComplex,
    SimplicialRelation, Vertex,
};
use crate::error::{domain, Error, Result};
use crate::report::ValidationReport;

/// Default cap on the search space of one mapping-scenario enumeration.
pub const DEFAULT_FUNCTION_CAP: u128 = 1_000_000;

/// Outcome sets and codimension-one restriction tables, keyed by simplex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventTables {
    pub sets: BTreeMap<Simplex, Vec<String>>,
    /// Keyed by `(σ, τ)` with `τ` a codimension-one face of `σ`.
    pub restrictions: BTreeMap<(Simplex, Simplex), BTreeMap<String, String>>,
}

/// A validated event scenario.
#[derive(Clone, Debug)]
pub struct EventScenario {
    base: SimplicialComplex,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    labels: Vec<Vec<String>>,
    label_index: Vec<HashMap<String, usize>>,
    /// `facets[σ][j]` is the face deleting the j-th vertex and its map.
    facets: Vec<Vec<(usize, Vec<usize>)>>,
    /// `tuples[σ][o][j]` is the outcome of `o` at the j-th vertex of `σ`.
    tuples: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl PartialEq for EventScenario {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.labels == other.labels && self.facets == other.facets
    }
}

impl EventScenario {
    /// Builds and validates a scenario from tables.
    pub fn from_tables(base: &SimplicialComplex, tables: &EventTables) -> Result<Self> {
        let f = Self::assemble_tables(base, tables)?;
        let report = f.check_axioms();
        if report.is_ok() {
            Ok(f)
        } else {
            Err(Error::Invalid(report.to_string()))
        }
    }

    /// Validates tables without requiring them to pass.
    ///
    /// Malformed tables (missing or extra entries, unknown labels) are an
    /// error; axiom failures are reported.
    pub fn validate_tables(
        base: &SimplicialComplex,
        tables: &EventTables,
    ) -> Result<ValidationReport> {
        Ok(Self::assemble_tables(base, tables)?.check_axioms())
    }

    fn assemble_tables(base: &SimplicialComplex, tables: &EventTables) -> Result<Self> {
        let simplices = base.simplices();
        for s in tables.sets.keys() {
            if !base.contains(s) {
                return domain(format!("outcome set given for {s}, which is not a simplex"));
            }
        }
        let mut labels = Vec::with_capacity(simplices.len());
        for s in &simplices {
            let set = tables
                .sets
                .get(s)
                .ok_or_else(|| Error::Domain(format!("missing outcome set for {s}")))?;
            let unique: BTreeSet<&String> = set.iter().collect();
            if unique.len() != set.len() {
                return domain(format!("repeated outcome label in the set of {s}"));
            }
            labels.push(set.clone());
        }
        let label_index: Vec<HashMap<String, usize>> = labels
            .iter()
            .map(|set| {
                set.iter()
                    .enumerate()
                    .map(|(i, l)| (l.clone(), i))
                    .collect()
            })
            .collect();
        let index: HashMap<Simplex, usize> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut seen = 0usize;
        let mut facets = Vec::with_capacity(simplices.len());
        for (si, s) in simplices.iter().enumerate() {
            let mut row = Vec::new();
            if s.len() > 1 {
                for v in s.vertices() {
                    let face = s.without(v).expect("codimension-one face");
                    let fi = index[&face];
                    let table = tables
                        .restrictions
                        .get(&(s.clone(), face.clone()))
                        .ok_or_else(|| {
                            Error::Domain(format!("missing restriction {}>{}", s.key(), face.key()))
                        })?;
                    seen += 1;
                    let mut map = Vec::with_capacity(labels[si].len());
                    for l in &labels[si] {
                        let target = table.get(l).ok_or_else(|| {
                            Error::Domain(format!(
                                "restriction {}>{} undefined on {l:?}",
                                s.key(),
                                face.key()
                            ))
                        })?;
                        let ti = *label_index[fi].get(target).ok_or_else(|| {
                            Error::Domain(format!(
                                "restriction {}>{} sends {l:?} to unknown outcome {target:?}",
                                s.key(),
                                face.key()
                            ))
                        })?;
                        map.push(ti);
                    }
                    if table.len() != labels[si].len() {
                        return domain(format!(
                            "restriction {}>{} has extra entries",
                            s.key(),
                            face.key()
                        ));
                    }
                    row.push((fi, map));
                }
            }
            facets.push(row);
        }
        if seen != tables.restrictions.len() {
            return domain("restriction given for a pair that is not a codimension-one inclusion");
        }
        Ok(Self::from_parts(base.clone(), simplices, labels, facets))
    }

    /// Assembles a scenario from index data, computing vertex tuples along
    /// a fixed path of faces. Axioms are not checked.
    fn from_parts(
        base: SimplicialComplex,
        simplices: Vec<Simplex>,
        labels: Vec<Vec<String>>,
        facets: Vec<Vec<(usize, Vec<usize>)>>,
    ) -> Self {
        let index: HashMap<Simplex, usize> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let label_index = labels
            .iter()
            .map(|set| {
                set.iter()
                    .enumerate()
                    .map(|(i, l)| (l.clone(), i))
                    .collect()
            })
            .collect();
        let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(simplices.len());
        for (si, s) in simplices.iter().enumerate() {
            let k = s.len();
            let row: Vec<Vec<usize>> = if k == 1 {
                (0..labels[si].len()).map(|o| vec![o]).collect()
            } else {
                let (last_face, last_map) = &facets[si][k - 1];
                let (first_face, first_map) = &facets[si][0];
                (0..labels[si].len())
                    .map(|o| {
                        let mut t = tuples[*last_face][last_map[o]].clone();
                        t.push(tuples[*first_face][first_map[o]][k - 2]);
                        t
                    })
                    .collect()
            };
            tuples.push(row);
        }
        let lookup = tuples
            .iter()
            .map(|row| {
                let mut m = HashMap::new();
                for (o, t) in row.iter().enumerate() {
                    m.entry(t.clone()).or_insert(o);
                }
                m
            })
            .collect();
        EventScenario {
            base,
            simplices,
            index,
            labels,
            label_index,
            facets,
            tuples,
            lookup,
        }
    }

    /// Checks non-triviality, local surjectivity, functoriality and locality.
    pub fn check_axioms(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.record(
            "non-triviality",
            match self.labels.iter().position(Vec::is_empty) {
                Some(i) => Err(format!("F({}) is empty", self.simplices[i].key())),
                None => Ok(()),
            },
        );
        report.record("local surjectivity", self.check_surjectivity());
        report.record("functoriality", self.check_functoriality());
        report.record("locality", self.check_locality());
        report
    }

    fn check_surjectivity(&self) -> std::result::Result<(), String> {
        for (si, row) in self.facets.iter().enumerate() {
            for (fi, map) in row {
                let hit: HashSet<usize> = map.iter().copied().collect();
                if hit.len() != self.labels[*fi].len() {
                    return Err(format!(
                        "restriction {}>{} is not surjective",
                        self.simplices[si].key(),
                        self.simplices[*fi].key()
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_functoriality(&self) -> std::result::Result<(), String> {
        for (si, s) in self.simplices.iter().enumerate() {
            let k = s.len();
            if k < 3 {
                continue;
            }
            for a in 0..k {
                for b in a + 1..k {
                    // Deleting a then b (b shifts down by one) against b then a.
                    let (fa, ma) = &self.facets[si][a];
                    let (fb, mb) = &self.facets[si][b];
                    let (fab, mab) = &self.facets[*fa][b - 1];
                    let (fba, mba) = &self.facets[*fb][a];
                    debug_assert_eq!(fab, fba);
                    for o in 0..self.labels[si].len() {
                        if mab[ma[o]] != mba[mb[o]] {
                            return Err(format!(
                                "restrictions of {:?} from {} to {} depend on the path",
                                self.labels[si][o],
                                s.key(),
                                self.simplices[*fab].key()
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_locality(&self) -> std::result::Result<(), String> {
        for (si, row) in self.tuples.iter().enumerate() {
            if self.lookup[si].len() != row.len() {
                let mut seen: HashMap<&Vec<usize>, usize> = HashMap::new();
                for (o, t) in row.iter().enumerate() {
                    if let Some(&p) = seen.get(t) {
                        return Err(format!(
                            "outcomes {:?} and {:?} of {} agree on every vertex",
                            self.labels[si][p],
                            self.labels[si][o],
                            self.simplices[si].key()
                        ));
                    }
                    seen.insert(t, o);
                }
            }
        }
        Ok(())
    }

    /// The one-outcome scenario over a one-vertex complex.
    pub fn one_point() -> Self {
        let base = SimplicialComplex::point();
        let simplices = base.simplices();
        EventScenario::from_parts(base, simplices, vec![vec!["*".into()]], vec![vec![]])
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    /// All simplices of the base, in canonical order. Position `i < |V|` is
    /// the singleton of the i-th vertex.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex_index(&self, simplex: &Simplex) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    pub(crate) fn idx(&self, simplex: &Simplex) -> usize {
        self.index[simplex]
    }

    /// Labels of `F(σ)` for the simplex at position `si`.
    pub fn outcomes(&self, si: usize) -> &[String] {
        &self.labels[si]
    }

    pub fn outcomes_of(&self, simplex: &Simplex) -> Result<&[String]> {
        match self.simplex_index(simplex) {
            Some(i) => Ok(&self.labels[i]),
            None => domain(format!("{simplex} is not a simplex of the base")),
        }
    }

    pub fn outcome_index(&self, si: usize, label: &str) -> Option<usize> {
        self.label_index[si].get(label).copied()
    }

    /// Outcome `o ∈ F(σ)` as its tuple of vertex outcomes.
    pub fn vertex_tuple(&self, si: usize, o: usize) -> &[usize] {
        &self.tuples[si][o]
    }

    /// The outcome of `F(σ)` with the given vertex tuple, if any.
    pub fn lift(&self, si: usize, tuple: &[usize]) -> Option<usize> {
        self.lookup[si].get(tuple).copied()
    }

    /// Restriction `F(σ) → F(τ)` for simplices `τ ⊆ σ` given by position.
    pub fn restrict(&self, from: usize, to: usize, o: usize) -> usize {
        if from == to {
            return o;
        }
        let sup = &self.simplices[from];
        let sub = &self.simplices[to];
        let t = &self.tuples[from][o];
        let sub_tuple: Vec<usize> = sub
            .vertices()
            .iter()
            .map(|v| t[sup.vertices().binary_search(v).expect("face inclusion")])
            .collect();
        self.lookup[to][&sub_tuple]
    }

    /// Codimension-one faces of the simplex at `si` with their maps.
    pub fn facets(&self, si: usize) -> &[(usize, Vec<usize>)] {
        &self.facets[si]
    }

    /// The scenario as tables keyed by simplex and label.
    pub fn to_tables(&self) -> EventTables {
        let mut tables = EventTables::default();
        for (si, s) in self.simplices.iter().enumerate() {
            tables.sets.insert(s.clone(), self.labels[si].clone());
            for (fi, map) in &self.facets[si] {
                let table = map
                    .iter()
                    .enumerate()
                    .map(|(o, t)| (self.labels[si][o].clone(), self.labels[*fi][*t].clone()))
                    .collect();
                tables
                    .restrictions
                    .insert((s.clone(), self.simplices[*fi].clone()), table);
            }
        }
        tables
    }

    /// Total number of outcomes across all simplices.
    pub fn size(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }
}

/// Builds a scenario from per-simplex labels and a restriction rule given on
/// vertex tuples. Used by constructions whose outcomes are tuples already.
fn scenario_from_tuples(
    base: SimplicialComplex,
    labels: Vec<Vec<String>>,
    tuples: Vec<Vec<Vec<usize>>>,
) -> Result<EventScenario> {
    let simplices = base.simplices();
    let index: HashMap<&Simplex, usize> =
        simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let lookups: Vec<HashMap<&Vec<usize>, usize>> = tuples
        .iter()
        .map(|row| row.iter().enumerate().map(|(o, t)| (t, o)).collect())
        .collect();
    let mut facets = Vec::with_capacity(simplices.len());
    for (si, s) in simplices.iter().enumerate() {
        let mut row = Vec::new();
        if s.len() > 1 {
            for j in 0..s.len() {
                let face = s.without(&s.vertices()[j]).expect("face");
                let fi = index[&face];
                let map = tuples[si]
                    .iter()
                    .map(|t| {
                        let mut sub = t.clone();
                        sub.remove(j);
                        lookups[fi].get(&sub).copied().ok_or_else(|| {
                            Error::Invalid(format!(
                                "an outcome of {} has no face in {}",
                                s.key(),
                                face.key()
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                row.push((fi, map));
            }
        }
        facets.push(row);
    }
    let f = EventScenario::from_parts(base, simplices, labels, facets);
    let report = f.check_axioms();
    if !report.is_ok() {
        return Err(Error::Invalid(report.to_string()));
    }
    Ok(f)
}

/// A measurement scenario: a complex of contexts and an outcome set per
/// vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardScenario {
    pub contexts: SimplicialComplex,
    pub outcomes: BTreeMap<Vertex, Vec<String>>,
}

impl StandardScenario {
    pub fn new(
        contexts: SimplicialComplex,
        outcomes: BTreeMap<Vertex, Vec<String>>,
    ) -> Result<Self> {
        for v in contexts.vertices() {
            match outcomes.get(v) {
                None => return domain(format!("no outcome set for {v}")),
                Some(o) if o.is_empty() => return domain(format!("empty outcome set for {v}")),
                Some(o) if o.iter().collect::<BTreeSet<_>>().len() != o.len() => {
                    return domain(format!("repeated outcome for {v}"))
                }
                _ => {}
            }
        }
        if outcomes.len() != contexts.vertices().len() {
            return domain("outcome sets given for vertices outside the complex");
        }
        Ok(StandardScenario { contexts, outcomes })
    }

    /// The same outcome labels at every vertex.
    pub fn uniform(contexts: SimplicialComplex, labels: &[&str]) -> Result<Self> {
        let outcomes = contexts
            .vertices()
            .iter()
            .map(|v| (v.clone(), labels.iter().map(|l| l.to_string()).collect()))
            .collect();
        StandardScenario::new(contexts, outcomes)
    }
}

/// Joins vertex outcome labels: concatenated when every label of the
/// scenario is a single character, dot-separated otherwise.
fn joint_label(parts: &[&str], compact: bool) -> String {
    if compact {
        parts.concat()
    } else {
        parts.join(".")
    }
}

/// The event presheaf: products of vertex outcome sets with projections.
pub fn event_presheaf(scenario: &StandardScenario) -> Result<EventScenario> {
    let base = scenario.contexts.clone();
    let compact = scenario
        .outcomes
        .values()
        .flatten()
        .all(|l| l.chars().count() == 1);
    let mut labels = Vec::new();
    let mut tuples = Vec::new();
    for s in base.simplices() {
        let sets: Vec<&Vec<String>> = s.vertices().iter().map(|v| &scenario.outcomes[v]).collect();
        let mut row_labels = Vec::new();
        let mut row_tuples = Vec::new();
        for t in product_indices(&sets.iter().map(|x| x.len()).collect::<Vec<_>>()) {
            let parts: Vec<&str> = t
                .iter()
                .zip(&sets)
                .map(|(&i, set)| set[i].as_str())
                .collect();
            row_labels.push(joint_label(&parts, compact));
            row_tuples.push(t);
        }
        if row_labels.iter().collect::<BTreeSet<_>>().len() != row_labels.len() {
            return domain(format!("joint outcome labels of {} collide", s.key()));
        }
        labels.push(row_labels);
        tuples.push(row_tuples);
    }
    scenario_from_tuples(base, labels, tuples)
}

/// All index tuples of a product of sets with the given sizes, in
/// lexicographic order.
pub(crate) fn product_indices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for i in 0..n {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// `F ∘ π̄`, the scenario over `Σ′` with `F(π̄(σ′))` at `σ′`.
pub fn reindex(f: &EventScenario, pi: &SimplicialRelation) -> Result<EventScenario> {
    if pi.target() != f.base() {
        return Err(Error::Composition(
            "relation target is not the base of the scenario".into(),
        ));
    }
    let base = pi.source().clone();
    let simplices = base.simplices();
    let images: Vec<usize> = simplices.iter().map(|s| f.idx(&pi.induce(s))).collect();
    let labels: Vec<Vec<String>> = images.iter().map(|&i| f.labels[i].clone()).collect();
    let index: HashMap<&Simplex, usize> =
        simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut facets = Vec::with_capacity(simplices.len());
    for (si, s) in simplices.iter().enumerate() {
        let mut row = Vec::new();
        if s.len() > 1 {
            for v in s.vertices() {
                let fi = index[&s.without(v).expect("face")];
                let map = (0..labels[si].len())
                    .map(|o| f.restrict(images[si], images[fi], o))
                    .collect();
                row.push((fi, map));
            }
        }
        facets.push(row);
    }
    let out = EventScenario::from_parts(base, simplices, labels, facets);
    debug_assert!(out.check_axioms().is_ok());
    Ok(out)
}

/// A morphism `(π, α): F → G` with `π: Σ′ → N̂Σ` and components
/// `α_{σ′}: F(π̄(σ′)) → G(σ′)` for every simplex of `Σ′`.
#[derive(Clone, Debug, PartialEq)]
pub struct EventMorphism {
    source: EventScenario,
    target: EventScenario,
    relation: SimplicialRelation,
    /// Indexed by simplex position in the target; maps outcome positions.
    components: Vec<Vec<usize>>,
}

impl EventMorphism {
    /// Builds a morphism from all components and checks naturality.
    pub fn new(
        source: EventScenario,
        target: EventScenario,
        relation: SimplicialRelation,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if relation.target() != source.base() || relation.source() != target.base() {
            return domain("relation does not run from the target base to the source base");
        }
        if components.len() != target.simplices.len() {
            return domain("one component per target simplex is required");
        }
        for (si, s) in target.simplices.iter().enumerate() {
            let from = source.idx(&relation.induce(s));
            if components[si].len() != source.labels[from].len()
                || components[si].iter().any(|&o| o >= target.labels[si].len())
            {
                return domain(format!("component at {} has the wrong shape", s.key()));
            }
        }
        let m = EventMorphism {
            source,
            target,
            relation,
            components,
        };
        m.check_naturality()?;
        Ok(m)
    }

    /// Builds a morphism from components at the maximal simplices only; the
    /// remaining components are forced by naturality.
    pub fn from_top_components(
        source: EventScenario,
        target: EventScenario,
        relation: SimplicialRelation,
        top: &BTreeMap<Simplex, Vec<usize>>,
    ) -> Result<Self> {
        if relation.target() != source.base() || relation.source() != target.base() {
            return domain("relation does not run from the target base to the source base");
        }
        let mut components: Vec<Option<Vec<usize>>> = vec![None; target.simplices.len()];
        for m in target.base.maximal() {
            let si = target.idx(m);
            let comp = top.get(m).ok_or_else(|| {
                Error::Domain(format!("missing component at maximal simplex {}", m.key()))
            })?;
            let from = source.idx(&relation.induce(m));
            for t in target.base.simplices().iter().filter(|t| t.is_subset(m)) {
                let ti = target.idx(t);
                let tfrom = source.idx(&relation.induce(t));
                let mut table: Vec<Option<usize>> = vec![None; source.labels[tfrom].len()];
                for (o, &g) in comp.iter().enumerate() {
                    if o >= source.labels[from].len() || g >= target.labels[si].len() {
                        return domain(format!("component at {} has the wrong shape", m.key()));
                    }
                    let so = source.restrict(from, tfrom, o);
                    let go = target.restrict(si, ti, g);
                    match table[so] {
                        Some(prev) if prev != go => {
                            return Err(Error::Invalid(format!(
                                "top component at {} is not natural on the face {}",
                                m.key(),
                                t.key()
                            )))
                        }
                        _ => table[so] = Some(go),
                    }
                }
                let table: Vec<usize> = table
                    .into_iter()
                    .map(|x| x.expect("restrictions are surjective"))
                    .collect();
                match &components[ti] {
                    Some(prev) if *prev != table => {
                        return Err(Error::Invalid(format!(
                            "top components disagree on the shared face {}",
                            t.key()
                        )))
                    }
                    _ => components[ti] = Some(table),
                }
            }
            if comp.len() != source.labels[from].len() {
                return domain(format!("component at {} has the wrong shape", m.key()));
            }
        }
        let components = components
            .into_iter()
            .map(|c| c.expect("every simplex lies in a maximal one"))
            .collect();
        EventMorphism::new(source, target, relation, components)
    }

    fn check_naturality(&self) -> Result<()> {
        for (si, s) in self.target.simplices.iter().enumerate() {
            let from = self.source.idx(&self.relation.induce(s));
            for (fi, gmap) in &self.target.facets[si] {
                let ffrom = self
                    .source
                    .idx(&self.relation.induce(&self.target.simplices[*fi]));
                for o in 0..self.source.labels[from].len() {
                    let left = gmap[self.components[si][o]];
                    let right = self.components[*fi][self.source.restrict(from, ffrom, o)];
                    if left != right {
                        return Err(Error::Invalid(format!(
                            "components are not natural on {}>{}",
                            s.key(),
                            self.target.simplices[*fi].key()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(δ, id)`.
    pub fn identity(f: &EventScenario) -> Self {
        EventMorphism {
            source: f.clone(),
            target: f.clone(),
            relation: SimplicialRelation::identity(f.base()),
            components: f
                .labels
                .iter()
                .map(|set| (0..set.len()).collect())
                .collect(),
        }
    }

    pub fn source(&self) -> &EventScenario {
        &self.source
    }

    pub fn target(&self) -> &EventScenario {
        &self.target
    }

    pub fn relation(&self) -> &SimplicialRelation {
        &self.relation
    }

    /// `α_{σ′}` for the target simplex at position `si`.
    pub fn component(&self, si: usize) -> &[usize] {
        &self.components[si]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }
}

/// `(π₁ ⋄ π₂, β ∘ α_{π̄₂})` for `(π₁, α): F → G` and `(π₂, β): G → H`.
pub fn compose_event_morphisms(
    first: &EventMorphism,
    second: &EventMorphism,
) -> Result<EventMorphism> {
    if first.target != second.source {
        return Err(Error::Composition(
            "target of the first morphism is not the source of the second".into(),
        ));
    }
    let relation = kleisli_compose(&first.relation, &second.relation)?;
    let g = &first.target;
    let components = second
        .target
        .simplices
        .iter()
        .enumerate()
        .map(|(si, s)| {
            let mid = g.idx(&second.relation.induce(s));
            first.components[mid]
                .iter()
                .map(|&o| second.components[si][o])
                .collect()
        })
        .collect();
    Ok(EventMorphism {
        source: first.source.clone(),
        target: second.target.clone(),
        relation,
        components,
    })
}

/// Tensor product `(F₁ ⊗ F₂)(σ) = F₁(pr₁σ) × F₂(pr₂σ)`.
///
/// Outcome labels are `l₁|l₂`.
pub fn tensor_event(left: &EventScenario, right: &EventScenario) -> Result<EventScenario> {
    let base = tensor_complex(&left.base, &right.base);
    let mut labels = Vec::new();
    let mut tuples = Vec::new();
    for s in base.simplices() {
        let (p1, p2) = project_pair(&s)?;
        let (i1, i2) = (left.idx(&p1), right.idx(&p2));
        let mut row_labels = Vec::new();
        let mut row_tuples = Vec::new();
        for a in 0..left.labels[i1].len() {
            for b in 0..right.labels[i2].len() {
                row_labels.push(format!("{}|{}", left.labels[i1][a], right.labels[i2][b]));
                let ta = left.vertex_tuple(i1, a);
                let tb = right.vertex_tuple(i2, b);
                let tuple: Vec<usize> = s
                    .vertices()
                    .iter()
                    .map(|v| {
                        let (x, y) = v.as_pair().expect("pair vertex");
                        let ox = ta[p1.vertices().binary_search(&x).expect("projection")];
                        let oy = tb[p2.vertices().binary_search(&y).expect("projection")];
                        ox * right.labels[right.idx(&Simplex::singleton(y))].len() + oy
                    })
                    .collect();
                row_tuples.push(tuple);
            }
        }
        if row_labels.iter().collect::<BTreeSet<_>>().len() != row_labels.len() {
            return domain(format!("tensor outcome labels of {} collide", s.key()));
        }
        labels.push(row_labels);
        tuples.push(row_tuples);
    }
    scenario_from_tuples(base, labels, tuples)
}

/// `(π₁ ⊠ π₂, α ⊗ β)`.
pub fn tensor_event_morphism(left: &EventMorphism, right: &EventMorphism) -> Result<EventMorphism> {
    let source = tensor_event(&left.source, &right.source)?;
    let target = tensor_event(&left.target, &right.target)?;
    let relation = tensor_relation(&left.relation, &right.relation)?;
    let mut components = Vec::with_capacity(target.simplices.len());
    for s in &target.simplices {
        let (p1, p2) = project_pair(s)?;
        let c1 = &left.components[left.target.idx(&p1)];
        let c2 = &right.components[right.target.idx(&p2)];
        let n2 = right.target.labels[right.target.idx(&p2)].len();
        let mut comp = Vec::with_capacity(c1.len() * c2.len());
        for &a in c1 {
            for &b in c2 {
                comp.push(a * n2 + b);
            }
        }
        components.push(comp);
    }
    EventMorphism::new(source, target, relation, components)
}

/// A global section: one outcome index per base vertex, in vertex order.
pub type GlobalSection = Vec<usize>;

/// All global sections in lexicographic order.
///
/// Fails with a resource error when more than `cap` sections exist.
pub fn global_sections(f: &EventScenario, cap: usize) -> Result<Vec<GlobalSection>> {
    let n = f.base.vertices().len();
    let mut order: Vec<&Simplex> = Vec::new();
    let mut covered: HashSet<&Vertex> = HashSet::new();
    let mut remaining: Vec<&Simplex> = f.base.maximal().iter().collect();
    while !remaining.is_empty() {
        // Prefer the maximal simplex sharing most vertices with those placed.
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(i, m)| {
                (
                    m.vertices().iter().filter(|v| covered.contains(v)).count(),
                    usize::MAX - i,
                )
            })
            .expect("nonempty");
        let m = remaining.remove(pos);
        covered.extend(m.vertices());
        order.push(m);
    }
    let plan: Vec<(usize, Vec<usize>)> = order
        .iter()
        .map(|m| {
            let positions = m
                .vertices()
                .iter()
                .map(|v| f.base.vertices().binary_search(v).expect("vertex"))
                .collect();
            (f.idx(m), positions)
        })
        .collect();
    let mut out = Vec::new();
    let mut partial: Vec<Option<usize>> = vec![None; n];
    extend_sections(f, &plan, 0, &mut partial, &mut out, cap)?;
    out.sort();
    Ok(out)
}

fn extend_sections(
    f: &EventScenario,
    plan: &[(usize, Vec<usize>)],
    step: usize,
    partial: &mut Vec<Option<usize>>,
    out: &mut Vec<GlobalSection>,
    cap: usize,
) -> Result<()> {
    let Some((si, positions)) = plan.get(step) else {
        if out.len() >= cap {
            return Err(Error::Resource(format!("more than {cap} global sections")));
        }
        out.push(
            partial
                .iter()
                .map(|o| o.expect("every vertex assigned"))
                .collect(),
        );
        return Ok(());
    };
    for tuple in &f.tuples[*si] {
        if positions
            .iter()
            .zip(tuple)
            .all(|(&p, &o)| partial[p].is_none_or(|q| q == o))
        {
            let fresh: Vec<usize> = positions
                .iter()
                .copied()
                .filter(|&p| partial[p].is_none())
                .collect();
            for (&p, &o) in positions.iter().zip(tuple) {
                partial[p] = Some(o);
            }
            extend_sections(f, plan, step + 1, partial, out, cap)?;
            for p in fresh {
                partial[p] = None;
            }
        }
    }
    Ok(())
}

/// The outcome of a section at the simplex in position `si`.
pub fn section_at(f: &EventScenario, section: &GlobalSection, si: usize) -> usize {
    let s = &f.simplices[si];
    let tuple: Vec<usize> = s
        .vertices()
        .iter()
        .map(|v| section[f.base.vertices().binary_search(v).expect("vertex")])
        .collect();
    f.lift(si, &tuple).expect("sections lift to every simplex")
}

/// `x=o` pairs joined by `,` in vertex order.
pub fn section_key(f: &EventScenario, section: &GlobalSection) -> String {
    f.base
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{}={}", v, f.labels[i][section[i]]))
        .collect::<Vec<_>>()
        .join(",")
}

/// Whether `F(σ) → lim F` over the intersection diagram of `cover` is
/// injective, computed from the literal limit.
///
/// The diagram has one object per nonempty intersection of a nonempty
/// subfamily of the cover and one arrow per inclusion.
pub fn cover_map_injective(f: &EventScenario, sigma: &Simplex, cover: &[Simplex]) -> Result<bool> {
    let si = f
        .simplex_index(sigma)
        .ok_or_else(|| Error::Domain(format!("{sigma} is not a simplex of the base")))?;
    if cover.is_empty() || cover.iter().any(|c| !c.is_subset(sigma)) {
        return domain("cover members must be faces of the covered simplex");
    }
    if Simplex::union_all(cover).as_ref() != Some(sigma) {
        return domain("cover does not cover the simplex");
    }
    let mut objects: BTreeSet<Simplex> = BTreeSet::new();
    for mask in 1usize..(1 << cover.len()) {
        let members: Vec<&Simplex> = (0..cover.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &cover[i])
            .collect();
        let meet = members[1..]
            .iter()
            .try_fold(members[0].clone(), |acc, c| acc.intersection(c));
        if let Some(meet) = meet {
            objects.insert(meet);
        }
    }
    let objects: Vec<usize> = objects.iter().map(|o| f.idx(o)).collect();
    let arrows: Vec<(usize, usize)> = (0..objects.len())
        .flat_map(|a| (0..objects.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && f.simplices[objects[b]].is_subset(&f.simplices[objects[a]]))
        .collect();
    // Enumerate the limit: compatible families over all objects.
    let mut limit: Vec<Vec<usize>> = vec![Vec::new()];
    for (k, &obj) in objects.iter().enumerate() {
        let mut next = Vec::new();
        for family in &limit {
            for o in 0..f.labels[obj].len() {
                let ok = arrows
                    .iter()
                    .filter(|&&(a, b)| a.max(b) == k)
                    .all(|&(a, b)| {
                        let oa = if a == k { o } else { family[a] };
                        let ob = if b == k { o } else { family[b] };
                        f.restrict(objects[a], objects[b], oa) == ob
                    });
                if ok {
                    let mut g = family.clone();
                    g.push(o);
                    next.push(g);
                }
            }
        }
        limit = next;
    }
    let limit: HashSet<Vec<usize>> = limit.into_iter().collect();
    let mut images = HashSet::new();
    for o in 0..f.labels[si].len() {
        let family: Vec<usize> = objects.iter().map(|&obj| f.restrict(si, obj, o)).collect();
        debug_assert!(limit.contains(&family));
        if !images.insert(family) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An outcome of the mapping scenario `[F,G]` at a simplex `σ` of `G`'s base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MapOutcome {
    /// `π(x)` for each vertex `x` of `σ`, in vertex order.
    pub relation: Vec<Simplex>,
    /// `π̄(σ)`.
    pub image: Simplex,
    /// `α_σ` as outcome positions `F(π̄σ) → G(σ)`.
    pub alpha: Vec<usize>,
}

/// The mapping scenario `[F,G]` over `G`'s base, together with the
/// structured data behind each outcome label.
#[derive(Clone, Debug)]
pub struct MappingEventScenario {
    pub scenario: EventScenario,
    /// Indexed like `scenario.simplices()`.
    pub outcomes: Vec<Vec<MapOutcome>>,
}

/// `[F,G](σ)`: pairs `(π: Δ_σ → N̂Σ, α_σ)` such that `α_σ` extends to a
/// natural transformation `F ∘ π̄ → G|σ`.
///
/// `cap` bounds the size of the function space searched for one `(σ, π)`.
pub fn mapping_event_scenario(
    f: &EventScenario,
    g: &EventScenario,
    cap: u128,
) -> Result<MappingEventScenario> {
    let base = g.base.clone();
    let simplices = base.simplices();
    let sources = f.base.simplices();
    let mut outcomes: Vec<Vec<MapOutcome>> = Vec::with_capacity(simplices.len());
    for s in &simplices {
        let si = g.idx(s);
        let mut row = Vec::new();
        let mut relations = Vec::new();
        choose_relations(&f.base, &sources, s.len(), &mut Vec::new(), &mut relations);
        for relation in relations {
            let image = Simplex::union_all(&relation).expect("nonempty");
            let ui = f.idx(&image);
            let parts: Vec<usize> = relation.iter().map(|t| f.idx(t)).collect();
            let mut space: u128 = 1;
            for (j, &pj) in parts.iter().enumerate() {
                let gx =
                    g.labels[g.idx(&Simplex::singleton(s.vertices()[j].clone()))].len() as u128;
                let exp = f.labels[pj].len() as u32;
                space = gx
                    .checked_pow(exp)
                    .and_then(|p| space.checked_mul(p))
                    .unwrap_or(u128::MAX);
            }
            if space > cap {
                return Err(Error::Resource(format!(
                    "mapping scenario at {} searches {} functions, above the cap {}",
                    s.key(),
                    space,
                    cap
                )));
            }
            for alpha in natural_components(f, g, si, ui, &parts) {
                row.push(MapOutcome {
                    relation: relation.clone(),
                    image: image.clone(),
                    alpha,
                });
            }
        }
        outcomes.push(row);
    }
    let labels: Vec<Vec<String>> = simplices
        .iter()
        .zip(&outcomes)
        .map(|(s, row)| row.iter().map(|m| map_outcome_label(f, g, s, m)).collect())
        .collect();
    let positions: Vec<HashMap<&MapOutcome, usize>> = outcomes
        .iter()
        .map(|row| row.iter().enumerate().map(|(i, m)| (m, i)).collect())
        .collect();
    let index: HashMap<&Simplex, usize> =
        simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut facets = Vec::with_capacity(simplices.len());
    for (si, s) in simplices.iter().enumerate() {
        let mut row = Vec::new();
        if s.len() > 1 {
            for j in 0..s.len() {
                let face = s.without(&s.vertices()[j]).expect("face");
                let fi = index[&face];
                let map = outcomes[si]
                    .iter()
                    .map(|m| positions[fi][&restrict_map_outcome(f, g, s, &face, m)])
                    .collect();
                row.push((fi, map));
            }
        }
        facets.push(row);
    }
    let scenario = EventScenario::from_parts(base, simplices, labels, facets);
    let report = scenario.check_axioms();
    if !report.is_ok() {
        return Err(Error::Invalid(report.to_string()));
    }
    Ok(MappingEventScenario { scenario, outcomes })
}

fn choose_relations(
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
        let union = Simplex::union_all(prefix.iter()).expect("nonempty");
        if base.contains(&union) {
            choose_relations(base, candidates, k, prefix, out);
        }
        prefix.pop();
    }
}

/// Enumerates `α_σ: F(U) → G(σ)` whose value at each vertex `x_j` depends
/// only on the restriction to `π(x_j)`; these are exactly the top
/// components of natural transformations.
fn natural_components(
    f: &EventScenario,
    g: &EventScenario,
    si: usize,
    ui: usize,
    parts: &[usize],
) -> Vec<Vec<usize>> {
    let k = parts.len();
    let sigma = &g.simplices[si];
    let vertex_sizes: Vec<usize> = sigma
        .vertices()
        .iter()
        .map(|v| g.labels[g.idx(&Simplex::singleton(v.clone()))].len())
        .collect();
    let restricted: Vec<Vec<usize>> = (0..f.labels[ui].len())
        .map(|o| parts.iter().map(|&p| f.restrict(ui, p, o)).collect())
        .collect();
    let prefixes: Vec<HashSet<Vec<usize>>> = (1..=k)
        .map(|len| g.tuples[si].iter().map(|t| t[..len].to_vec()).collect())
        .collect();
    let mut results = Vec::new();
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    search_vertex_components(
        f,
        parts,
        &vertex_sizes,
        &restricted,
        &prefixes,
        &mut chosen,
        &mut results,
    );
    results
        .into_iter()
        .map(|comps| {
            restricted
                .iter()
                .map(|r| {
                    let tuple: Vec<usize> = (0..k).map(|j| comps[j][r[j]]).collect();
                    g.lift(si, &tuple).expect("checked lift")
                })
                .collect()
        })
        .collect()
}

fn search_vertex_components(
    f: &EventScenario,
    parts: &[usize],
    vertex_sizes: &[usize],
    restricted: &[Vec<usize>],
    prefixes: &[HashSet<Vec<usize>>],
    chosen: &mut Vec<Vec<usize>>,
    results: &mut Vec<Vec<Vec<usize>>>,
) {
    let j = chosen.len();
    if j == parts.len() {
        results.push(chosen.clone());
        return;
    }
    let domain_size = f.labels[parts[j]].len();
    for func in product_indices(&vec![vertex_sizes[j]; domain_size]) {
        chosen.push(func);
        let ok = restricted.iter().all(|r| {
            let prefix: Vec<usize> = (0..=j).map(|i| chosen[i][r[i]]).collect();
            prefixes[j].contains(&prefix)
        });
        if ok {
            search_vertex_components(
                f,
                parts,
                vertex_sizes,
                restricted,
                prefixes,
                chosen,
                results,
            );
        }
        chosen.pop();
    }
}

/// Restricts `(π, α)` at `σ` to the face `τ`: `π|τ` and the whiskered
/// component `α_τ(t) = α_σ(s)|τ` for any `s` restricting to `t`.
pub(crate) fn restrict_map_outcome(
    f: &EventScenario,
    g: &EventScenario,
    sigma: &Simplex,
    tau: &Simplex,
    m: &MapOutcome,
) -> MapOutcome {
    let relation: Vec<Simplex> = sigma
        .vertices()
        .iter()
        .zip(&m.relation)
        .filter(|(v, _)| tau.contains(v))
        .map(|(_, t)| t.clone())
        .collect();
    let image = Simplex::union_all(&relation).expect("nonempty");
    let (ui, ti) = (f.idx(&m.image), f.idx(&image));
    let (si, gi) = (g.idx(sigma), g.idx(tau));
    let mut alpha = vec![usize::MAX; f.labels[ti].len()];
    for (o, &a) in m.alpha.iter().enumerate() {
        alpha[f.restrict(ui, ti, o)] = g.restrict(si, gi, a);
    }
    MapOutcome {
        relation,
        image,
        alpha,
    }
}

pub(crate) fn map_outcome_label(
    f: &EventScenario,
    g: &EventScenario,
    sigma: &Simplex,
    m: &MapOutcome,
) -> String {
    let pi = sigma
        .vertices()
        .iter()
        .zip(&m.relation)
        .map(|(v, t)| format!("{}:[{}]", v, t.key()))
        .collect::<Vec<_>>()
        .join(";");
    let (ui, si) = (f.idx(&m.image), g.idx(sigma));
    let alpha = m
        .alpha
        .iter()
        .enumerate()
        .map(|(o, &a)| format!("{}>{}", f.labels[ui][o], g.labels[si][a]))
        .collect::<Vec<_>>()
        .join(";");
    format!("<{pi}|{alpha}>")
}

/// The identity element `(δ, id)` of `[F,F]` at the simplex `σ`.
pub fn identity_map_outcome(f: &EventScenario, sigma: &Simplex) -> MapOutcome {
    let si = f.idx(sigma);
    MapOutcome {
        relation: sigma
            .vertices()
            .iter()
            .map(|v| Simplex::singleton(v.clone()))
            .collect(),
        image: sigma.clone(),
        alpha: (0..f.labels[si].len()).collect(),
    }
}

/// Checks that two scenarios over the same base are isomorphic through the
/// given per-simplex bijections (natural in the restriction maps).
pub fn verify_event_isomorphism(
    f: &EventScenario,
    g: &EventScenario,
    maps: &[Vec<usize>],
) -> Result<()> {
    if f.base != g.base {
        return domain("scenarios live over different complexes");
    }
    if maps.len() != f.simplices.len() {
        return domain("one bijection per simplex is required");
    }
    for (si, map) in maps.iter().enumerate() {
        let image: HashSet<&usize> = map.iter().collect();
        if map.len() != f.labels[si].len()
            || image.len() != map.len()
            || map.len() != g.labels[si].len()
            || map.iter().any(|&o| o >= g.labels[si].len())
        {
            return Err(Error::Invalid(format!(
                "component at {} is not a bijection",
                f.simplices[si].key()
            )));
        }
        for (fi, fmap) in &f.facets[si] {
            let gmap = &g.facets[si]
                .iter()
                .find(|(gi, _)| gi == fi)
                .expect("same base")
                .1;
            for o in 0..map.len() {
                if maps[*fi][fmap[o]] != gmap[map[o]] {
                    return Err(Error::Invalid(format!(
                        "bijections are not natural on {}>{}",
                        f.simplices[si].key(),
                        f.simplices[*fi].key()
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(names: &[&str]) -> Simplex {
        Simplex::from_names(names).unwrap()
    }

    fn path() -> SimplicialComplex {
        SimplicialComplex::generated_by([s(&["a", "b"]), s(&["b", "c"])]).unwrap()
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

    /// A triangle whose edges force `x = y`, `y = z` and `x ≠ z`.
    fn triangle_tables() -> (SimplicialComplex, EventTables) {
        let base =
            SimplicialComplex::generated_by([s(&["x", "y"]), s(&["x", "z"]), s(&["y", "z"])])
                .unwrap();
        let mut t = EventTables::default();
        for v in ["x", "y", "z"] {
            t.sets.insert(s(&[v]), vec!["0".into(), "1".into()]);
        }
        let same = vec!["00".to_string(), "11".to_string()];
        t.sets.insert(s(&["x", "y"]), same.clone());
        t.sets.insert(s(&["y", "z"]), same);
        t.sets
            .insert(s(&["x", "z"]), vec!["01".into(), "10".into()]);
        let first = |l: &str| l[..1].to_string();
        let second = |l: &str| l[1..].to_string();
        for (edge, a, b) in [(["x", "y"], "x", "y"), (["y", "z"], "y", "z")] {
            for (v, pick) in [(a, 0), (b, 1)] {
                let table = t.sets[&s(&edge)]
                    .iter()
                    .map(|l| (l.clone(), if pick == 0 { first(l) } else { second(l) }))
                    .collect();
                let face = s(&[v]);
                t.restrictions.insert((s(&edge), face), table);
            }
        }
        for (v, pick_first) in [("x", true), ("z", false)] {
            let table = t.sets[&s(&["x", "z"])]
                .iter()
                .map(|l| (l.clone(), if pick_first { first(l) } else { second(l) }))
                .collect();
            t.restrictions.insert((s(&["x", "z"]), s(&[v])), table);
        }
        (base, t)
    }

    #[test]
    fn chsh_presheaf_validates() {
        let f = chsh();
        assert!(f.check_axioms().is_ok());
        let ctx = f.simplex_index(&s(&["a0", "b0"])).unwrap();
        assert_eq!(f.outcomes(ctx), &["00", "01", "10", "11"]);
        assert_eq!(global_sections(&f, 100).unwrap().len(), 16);
    }

    #[test]
    fn triangle_example_validates_and_has_no_sections() {
        let (base, tables) = triangle_tables();
        let f = EventScenario::from_tables(&base, &tables).unwrap();
        assert!(global_sections(&f, 100).unwrap().is_empty());
    }

    #[test]
    fn empty_outcome_set_fails_non_triviality() {
        let base = SimplicialComplex::simplex(&s(&["a"]));
        let mut t = EventTables::default();
        t.sets.insert(s(&["a"]), vec![]);
        let report = EventScenario::validate_tables(&base, &t).unwrap();
        assert!(!report.check("non-triviality").unwrap().passed);
    }

    #[test]
    fn non_local_scenario_is_reported() {
        let base = SimplicialComplex::simplex(&s(&["a", "b"]));
        let mut t = EventTables::default();
        t.sets.insert(s(&["a"]), vec!["0".into()]);
        t.sets.insert(s(&["b"]), vec!["0".into()]);
        t.sets.insert(s(&["a", "b"]), vec!["p".into(), "q".into()]);
        for v in ["a", "b"] {
            t.restrictions.insert(
                (s(&["a", "b"]), s(&[v])),
                [
                    ("p".to_string(), "0".to_string()),
                    ("q".to_string(), "0".to_string()),
                ]
                .into(),
            );
        }
        let report = EventScenario::validate_tables(&base, &t).unwrap();
        assert!(!report.check("locality").unwrap().passed);
        assert!(report.check("local surjectivity").unwrap().passed);
        let f = EventScenario::assemble_tables(&base, &t).unwrap();
        assert!(!cover_map_injective(&f, &s(&["a", "b"]), &[s(&["a"]), s(&["b"])]).unwrap());
        assert!(cover_map_injective(&f, &s(&["a", "b"]), &[s(&["a", "b"])]).unwrap());
    }

    #[test]
    fn path_presheaf_has_four_joint_outcomes() {
        let f = event_presheaf(&StandardScenario::uniform(path(), &["0", "1"]).unwrap()).unwrap();
        assert_eq!(f.outcomes_of(&s(&["a", "b"])).unwrap().len(), 4);
    }

    #[test]
    fn single_outcome_point_has_one_section() {
        let base = SimplicialComplex::simplex(&s(&["x"]));
        let f = event_presheaf(&StandardScenario::uniform(base, &["0"]).unwrap()).unwrap();
        assert_eq!(global_sections(&f, 10).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn tensor_path_has_sixteen_outcomes_per_pyramid_and_64_sections() {
        let f = event_presheaf(&StandardScenario::uniform(path(), &["0", "1"]).unwrap()).unwrap();
        let t = tensor_event(&f, &f).unwrap();
        for m in t.base().maximal() {
            assert_eq!(t.outcomes_of(m).unwrap().len(), 16);
        }
        assert_eq!(global_sections(&t, 1000).unwrap().len(), 64);
    }

    #[test]
    fn reindex_along_identity_is_unchanged() {
        let f = chsh();
        assert_eq!(
            reindex(&f, &SimplicialRelation::identity(f.base())).unwrap(),
            f
        );
    }

    #[test]
    fn coarse_graining_duplicates_an_outcome_set() {
        let f = event_presheaf(&StandardScenario::uniform(path(), &["0", "1"]).unwrap()).unwrap();
        let point = SimplicialComplex::simplex(&s(&["u"]));
        let pi = SimplicialRelation::new(
            point,
            path(),
            [(Vertex::new("u").unwrap(), s(&["a", "b"]))].into(),
        )
        .unwrap();
        let r = reindex(&f, &pi).unwrap();
        assert_eq!(r.outcomes(0), f.outcomes_of(&s(&["a", "b"])).unwrap());
    }

    #[test]
    fn identity_morphism_composes_neutrally() {
        let f = chsh();
        let id = EventMorphism::identity(&f);
        assert_eq!(compose_event_morphisms(&id, &id).unwrap(), id);
    }

    #[test]
    fn top_components_determine_the_morphism() {
        let f = chsh();
        let id = EventMorphism::identity(&f);
        let top: BTreeMap<Simplex, Vec<usize>> = f
            .base()
            .maximal()
            .iter()
            .map(|m| (m.clone(), id.component(f.idx(m)).to_vec()))
            .collect();
        let rebuilt =
            EventMorphism::from_top_components(f.clone(), f.clone(), id.relation().clone(), &top)
                .unwrap();
        assert_eq!(rebuilt, id);
    }

    #[test]
    fn mapping_scenario_contains_identity() {
        let f = event_presheaf(&StandardScenario::uniform(path(), &["0", "1"]).unwrap()).unwrap();
        let m = mapping_event_scenario(&f, &f, DEFAULT_FUNCTION_CAP).unwrap();
        for (si, s) in f.simplices().iter().enumerate() {
            assert!(m.outcomes[si].contains(&identity_map_outcome(&f, s)));
        }
    }
}
