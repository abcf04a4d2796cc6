//! Finite simplicial complexes, simplicial relations and the nerve-complex monad.
//!
//! A complex is stored by its maximal simplices; membership of a vertex set
//! is containment in some maximal simplex. A [`SimplicialRelation`]
//! `Σ′ → Σ` assigns a simplex of `Σ` to every vertex of `Σ′`; these are the
//! Kleisli morphisms of the nerve-complex monad `N̂`, whose vertices are the
//! simplices of `Σ` and whose simplices are the families with union in `Σ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{domain, Error, Result};

/// A vertex name.
///
/// User-supplied names are nonempty and avoid `,`, `[`, `]`, `(` and `)`.
/// Generated names use those characters as structure: `[a,b]` for a vertex
/// of a nerve complex and `(x,y)` for a vertex of a tensor product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex(String);

const RESERVED: &[char] = &[',', '[', ']', '(', ')'];

impl Vertex {
    /// Validates a user-supplied name.
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return domain("vertex names must be nonempty");
        }
        if let Some(c) = name.chars().find(|c| RESERVED.contains(c)) {
            return domain(format!(
                "vertex name {name:?} contains reserved character {c:?}"
            ));
        }
        Ok(Vertex(name))
    }

    /// Accepts any name with balanced brackets, such as generated names read
    /// back from a file.
    pub fn parse(name: &str) -> Result<Self> {
        if name.is_empty() || !balanced(name) {
            return domain(format!("malformed vertex name {name:?}"));
        }
        Ok(Vertex(name.to_string()))
    }

    pub(crate) fn raw(name: String) -> Self {
        Vertex(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The vertex of `N̂Σ` standing for the simplex `σ`, named `[key]`.
    pub fn nerve(simplex: &Simplex) -> Self {
        Vertex(format!("[{}]", simplex.key()))
    }

    /// The vertex `(x,y)` of a tensor product.
    pub fn pair(x: &Vertex, y: &Vertex) -> Self {
        Vertex(format!("({},{})", x.0, y.0))
    }

    /// Inverse of [`Vertex::nerve`].
    pub fn as_nerve(&self) -> Option<Simplex> {
        let inner = self.0.strip_prefix('[')?.strip_suffix(']')?;
        if !balanced(inner) {
            return None;
        }
        Simplex::parse_key(inner).ok()
    }

    /// Inverse of [`Vertex::pair`].
    pub fn as_pair(&self) -> Option<(Vertex, Vertex)> {
        let inner = self.0.strip_prefix('(')?.strip_suffix(')')?;
        let parts = split_top_level(inner, ',');
        match parts.as_slice() {
            [a, b] if !a.is_empty() && !b.is_empty() => {
                Some((Vertex(a.to_string()), Vertex(b.to_string())))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Splits on `sep` occurrences outside any bracket pair.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// A nonempty finite set of vertices, kept sorted.
///
/// Simplices are ordered by size first and lexicographically second, which
/// is the canonical listing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Simplex(Vec<Vertex>);

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            return domain("simplices must be nonempty");
        }
        Ok(Simplex(v))
    }

    pub fn singleton(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    /// Builds a simplex from names, validating each as a user name.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Simplex::new(
            names
                .iter()
                .map(|n| Vertex::new(n.as_ref()))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub(crate) fn from_set(set: BTreeSet<Vertex>) -> Option<Self> {
        if set.is_empty() {
            None
        } else {
            Some(Simplex(set.into_iter().collect()))
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dimension(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_subset(&self, other: &Simplex) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.contains(v))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        v.dedup();
        Simplex(v)
    }

    /// Union of a nonempty family.
    pub fn union_all<'a>(family: impl IntoIterator<Item = &'a Simplex>) -> Option<Simplex> {
        let set: BTreeSet<Vertex> = family
            .into_iter()
            .flat_map(|s| s.0.iter().cloned())
            .collect();
        Simplex::from_set(set)
    }

    pub fn intersection(&self, other: &Simplex) -> Option<Simplex> {
        let v: Vec<Vertex> = self
            .0
            .iter()
            .filter(|v| other.contains(v))
            .cloned()
            .collect();
        if v.is_empty() {
            None
        } else {
            Some(Simplex(v))
        }
    }

    /// The face obtained by deleting `v`, if any remains.
    pub fn without(&self, v: &Vertex) -> Option<Simplex> {
        let rest: Vec<Vertex> = self.0.iter().filter(|w| *w != v).cloned().collect();
        if rest.is_empty() || rest.len() == self.0.len() {
            None
        } else {
            Some(Simplex(rest))
        }
    }

    /// The vertices of `self` lying in `other`, if any.
    pub fn restrict_to(&self, keep: impl Fn(&Vertex) -> bool) -> Option<Simplex> {
        let v: Vec<Vertex> = self.0.iter().filter(|w| keep(w)).cloned().collect();
        if v.is_empty() {
            None
        } else {
            Some(Simplex(v))
        }
    }

    /// All nonempty subsets in canonical order.
    pub fn subsets(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(
            n < usize::BITS as usize,
            "simplex too large to enumerate subsets"
        );
        let mut out: Vec<Simplex> = (1usize..(1 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.0[i].clone())
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Sorted names joined by `,`.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|v| v.0.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Inverse of [`Simplex::key`]; commas inside brackets do not split.
    pub fn parse_key(key: &str) -> Result<Simplex> {
        let parts = split_top_level(key, ',');
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::Parse(format!("malformed simplex key {key:?}")));
        }
        Simplex::new(
            parts
                .into_iter()
                .map(Vertex::parse)
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// Keeps only the inclusion-maximal members of a family.
pub(crate) fn antichain(family: impl IntoIterator<Item = Simplex>) -> Vec<Simplex> {
    let mut all: Vec<Simplex> = family
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<Simplex> = Vec::new();
    for s in all {
        if !kept.iter().any(|k| s.is_subset(k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// A finite simplicial complex given by its maximal simplices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<Vertex>,
    maximal: Vec<Simplex>,
}

impl SimplicialComplex {
    /// Builds a complex; every listed vertex must lie in some simplex and
    /// every simplex may only use listed vertices. Non-maximal simplices
    /// are discarded.
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        simplices: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self> {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        let maximal = antichain(simplices);
        let covered: BTreeSet<&Vertex> = maximal.iter().flat_map(|s| s.vertices()).collect();
        if let Some(v) = vertices.iter().find(|v| !covered.contains(v)) {
            return domain(format!("vertex {v} lies in no simplex"));
        }
        if let Some(v) = covered.iter().find(|v| !vertices.contains(**v)) {
            return domain(format!("simplex uses undeclared vertex {v}"));
        }
        if vertices.is_empty() {
            return domain("a simplicial complex needs at least one vertex");
        }
        Ok(SimplicialComplex {
            vertices: vertices.into_iter().collect(),
            maximal,
        })
    }

    /// The complex generated by a nonempty family of simplices.
    pub fn generated_by(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let maximal = antichain(simplices);
        let vertices: BTreeSet<Vertex> = maximal
            .iter()
            .flat_map(|s| s.vertices().iter().cloned())
            .collect();
        SimplicialComplex::new(vertices, maximal)
    }

    /// The full simplex on the given vertices.
    pub fn simplex(simplex: &Simplex) -> Self {
        SimplicialComplex {
            vertices: simplex.vertices().to_vec(),
            maximal: vec![simplex.clone()],
        }
    }

    /// The one-vertex complex Δ⁰ on a vertex named `*`.
    pub fn point() -> Self {
        SimplicialComplex::simplex(&Simplex::singleton(Vertex::raw("*".into())))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn maximal(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn has_vertex(&self, v: &Vertex) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    pub fn contains(&self, simplex: &Simplex) -> bool {
        self.maximal.iter().any(|m| simplex.is_subset(m))
    }

    pub fn dimension(&self) -> usize {
        self.maximal
            .iter()
            .map(Simplex::dimension)
            .max()
            .unwrap_or(0)
    }

    /// All simplices in canonical order.
    pub fn simplices(&self) -> Vec<Simplex> {
        let all: BTreeSet<Simplex> = self.maximal.iter().flat_map(Simplex::subsets).collect();
        all.into_iter().collect()
    }

    /// Simplices containing `σ`.
    pub fn star(&self, simplex: &Simplex) -> Result<Vec<Simplex>> {
        self.require(simplex)?;
        let all: BTreeSet<Simplex> = self
            .maximal
            .iter()
            .filter(|m| simplex.is_subset(m))
            .flat_map(Simplex::subsets)
            .filter(|s| simplex.is_subset(s))
            .collect();
        Ok(all.into_iter().collect())
    }

    /// `Δ_σ`, the complex with the single maximal simplex `σ`.
    pub fn generated_subcomplex(&self, simplex: &Simplex) -> Result<SimplicialComplex> {
        self.require(simplex)?;
        Ok(SimplicialComplex::simplex(simplex))
    }

    pub(crate) fn require(&self, simplex: &Simplex) -> Result<()> {
        if self.contains(simplex) {
            Ok(())
        } else {
            domain(format!("{simplex} is not a simplex of the complex"))
        }
    }
}

/// A simplicial map between complexes, given on vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    map: BTreeMap<Vertex, Vertex>,
}

impl ComplexMap {
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        map: BTreeMap<Vertex, Vertex>,
    ) -> Result<Self> {
        for v in source.vertices() {
            match map.get(v) {
                None => return domain(format!("map is undefined on vertex {v}")),
                Some(w) if !target.has_vertex(w) => {
                    return domain(format!("{v} maps to {w}, which is not a target vertex"))
                }
                _ => {}
            }
        }
        if map.len() != source.vertices().len() {
            return domain("map is defined on vertices outside the source");
        }
        let m = ComplexMap {
            source,
            target,
            map,
        };
        for s in m.source.maximal() {
            let image = m.apply(s);
            if !m.target.contains(&image) {
                return domain(format!(
                    "{s} maps to {image}, which is not a target simplex"
                ));
            }
        }
        Ok(m)
    }

    pub fn identity(complex: &SimplicialComplex) -> Self {
        let map = complex
            .vertices()
            .iter()
            .map(|v| (v.clone(), v.clone()))
            .collect();
        ComplexMap {
            source: complex.clone(),
            target: complex.clone(),
            map,
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.map
    }

    pub fn vertex(&self, v: &Vertex) -> &Vertex {
        &self.map[v]
    }

    /// Image of a simplex of the source.
    pub fn apply(&self, simplex: &Simplex) -> Simplex {
        Simplex::new(simplex.vertices().iter().map(|v| self.map[v].clone()))
            .expect("nonempty image")
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ComplexMap) -> Result<ComplexMap> {
        if first.target != self.source {
            return Err(Error::Composition("complex maps do not compose".into()));
        }
        let map = first
            .map
            .iter()
            .map(|(k, v)| (k.clone(), self.map[v].clone()))
            .collect();
        Ok(ComplexMap {
            source: first.source.clone(),
            target: self.target.clone(),
            map,
        })
    }

    /// Whether the map is an isomorphism of complexes.
    pub fn is_isomorphism(&self) -> bool {
        let image: BTreeSet<&Vertex> = self.map.values().collect();
        if image.len() != self.map.len() || image.len() != self.target.vertices().len() {
            return false;
        }
        if !self
            .source
            .maximal()
            .iter()
            .all(|m| self.target.contains(&self.apply(m)))
        {
            return false;
        }
        let inverse: BTreeMap<&Vertex, &Vertex> = self.map.iter().map(|(k, v)| (v, k)).collect();
        self.target.maximal().iter().all(|m| {
            let pre =
                Simplex::new(m.vertices().iter().map(|v| inverse[v].clone())).expect("nonempty");
            self.source.contains(&pre)
        })
    }
}

/// The nerve complex `N̂Σ`.
pub fn nerve_complex(complex: &SimplicialComplex) -> SimplicialComplex {
    let vertices: Vec<Vertex> = complex.simplices().iter().map(Vertex::nerve).collect();
    let maximal: Vec<Simplex> = complex
        .maximal()
        .iter()
        .map(|m| Simplex::new(m.subsets().iter().map(Vertex::nerve)).expect("nonempty"))
        .collect();
    SimplicialComplex::new(vertices, maximal).expect("nerve complex is well formed")
}

/// `N̂f`: sends a vertex `[σ]` to `[f(σ)]`.
pub fn nerve_map(f: &ComplexMap) -> ComplexMap {
    let source = nerve_complex(f.source());
    let target = nerve_complex(f.target());
    let map = f
        .source()
        .simplices()
        .iter()
        .map(|s| (Vertex::nerve(s), Vertex::nerve(&f.apply(s))))
        .collect();
    ComplexMap {
        source,
        target,
        map,
    }
}

/// Monad multiplication at the level of vertices: a vertex `[[σ₁],…,[σₙ]]`
/// of `N̂²Σ` goes to `[σ₁ ∪ … ∪ σₙ]`.
pub fn flatten_nerve_vertex(v: &Vertex) -> Result<Vertex> {
    let bad = || Error::Domain(format!("{v} is not a vertex of a double nerve"));
    let family = v.as_nerve().ok_or_else(bad)?;
    let members: Vec<Simplex> = family
        .vertices()
        .iter()
        .map(|w| w.as_nerve().ok_or_else(bad))
        .collect::<Result<_>>()?;
    Ok(Vertex::nerve(
        &Simplex::union_all(&members).expect("nonempty family"),
    ))
}

/// The unit `δ_Σ: x ↦ {x}` as a relation.
pub fn monad_unit(complex: &SimplicialComplex) -> SimplicialRelation {
    SimplicialRelation::identity(complex)
}

/// The multiplication `μ_Σ: N̂²Σ → N̂Σ`.
pub fn monad_mult(complex: &SimplicialComplex) -> ComplexMap {
    let nerve = nerve_complex(complex);
    let double = nerve_complex(&nerve);
    let map = double
        .vertices()
        .iter()
        .map(|v| {
            (
                v.clone(),
                flatten_nerve_vertex(v).expect("double nerve vertex"),
            )
        })
        .collect();
    ComplexMap {
        source: double,
        target: nerve,
        map,
    }
}

/// A Kleisli morphism `Σ′ → N̂Σ`, written as a relation from `Σ′` to `Σ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialRelation {
    source: SimplicialComplex,
    target: SimplicialComplex,
    map: BTreeMap<Vertex, Simplex>,
}

impl SimplicialRelation {
    /// Validates that every image is a target simplex and that each source
    /// simplex has an image union in the target.
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        map: BTreeMap<Vertex, Simplex>,
    ) -> Result<Self> {
        if map.len() != source.vertices().len()
            || source.vertices().iter().any(|v| !map.contains_key(v))
        {
            return domain("relation must assign a simplex to exactly the source vertices");
        }
        for (v, s) in &map {
            if !target.contains(s) {
                return domain(format!("{v} is sent to {s}, which is not a target simplex"));
            }
        }
        let rel = SimplicialRelation {
            source,
            target,
            map,
        };
        for m in rel.source.maximal() {
            let image = rel.induce(m);
            if !rel.target.contains(&image) {
                return domain(format!(
                    "{m} is sent to {image}, which is not a target simplex"
                ));
            }
        }
        Ok(rel)
    }

    /// `δ_Σ`.
    pub fn identity(complex: &SimplicialComplex) -> Self {
        let map = complex
            .vertices()
            .iter()
            .map(|v| (v.clone(), Simplex::singleton(v.clone())))
            .collect();
        SimplicialRelation {
            source: complex.clone(),
            target: complex.clone(),
            map,
        }
    }

    /// `δ ∘ f` for a simplicial map `f`.
    pub fn from_map(f: &ComplexMap) -> Self {
        let map = f
            .vertex_map()
            .iter()
            .map(|(k, v)| (k.clone(), Simplex::singleton(v.clone())))
            .collect();
        SimplicialRelation {
            source: f.source().clone(),
            target: f.target().clone(),
            map,
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &BTreeMap<Vertex, Simplex> {
        &self.map
    }

    /// `π(x)`.
    pub fn image(&self, v: &Vertex) -> &Simplex {
        &self.map[v]
    }

    /// `π̄(σ) = ⋃_{x∈σ} π(x)`.
    pub fn induced_simplex_map(&self, simplex: &Simplex) -> Result<Simplex> {
        self.source.require(simplex)?;
        Ok(self.induce(simplex))
    }

    pub(crate) fn induce(&self, simplex: &Simplex) -> Simplex {
        Simplex::union_all(simplex.vertices().iter().map(|v| &self.map[v])).expect("nonempty")
    }

    /// The relation as a simplicial map into `N̂` of the target.
    pub fn to_nerve_map(&self) -> ComplexMap {
        let map = self
            .map
            .iter()
            .map(|(k, s)| (k.clone(), Vertex::nerve(s)))
            .collect();
        ComplexMap {
            source: self.source.clone(),
            target: nerve_complex(&self.target),
            map,
        }
    }
}

/// `π₁ ⋄ π₂: x ↦ ⋃_{y∈π₂(x)} π₁(y)` for `π₁: Σ′ → Σ` and `π₂: Σ″ → Σ′`.
pub fn kleisli_compose(
    outer: &SimplicialRelation,
    inner: &SimplicialRelation,
) -> Result<SimplicialRelation> {
    if inner.target != outer.source {
        return Err(Error::Composition(
            "target of the inner relation is not the source of the outer".into(),
        ));
    }
    let map = inner
        .map
        .iter()
        .map(|(x, s)| (x.clone(), outer.induce(s)))
        .collect();
    SimplicialRelation::new(inner.source.clone(), outer.target.clone(), map)
}

/// `σ × τ`, the map `φ` on vertices of `N̂Σ₁ ⊗ N̂Σ₂`.
pub fn product_simplex(left: &Simplex, right: &Simplex) -> Simplex {
    Simplex::new(
        left.vertices()
            .iter()
            .flat_map(|x| right.vertices().iter().map(move |y| Vertex::pair(x, y))),
    )
    .expect("nonempty product")
}

/// The two projections of a simplex of a tensor product.
pub fn project_pair(simplex: &Simplex) -> Result<(Simplex, Simplex)> {
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    for v in simplex.vertices() {
        let (a, b) = v
            .as_pair()
            .ok_or_else(|| Error::Domain(format!("{v} is not a vertex of a tensor product")))?;
        left.insert(a);
        right.insert(b);
    }
    Ok((
        Simplex::from_set(left).expect("nonempty"),
        Simplex::from_set(right).expect("nonempty"),
    ))
}

/// `Σ₁ ⊗ Σ₂`: pairs of vertices, generated by products of maximal simplices.
pub fn tensor_complex(left: &SimplicialComplex, right: &SimplicialComplex) -> SimplicialComplex {
    let vertices: Vec<Vertex> = left
        .vertices()
        .iter()
        .flat_map(|x| right.vertices().iter().map(move |y| Vertex::pair(x, y)))
        .collect();
    let maximal: Vec<Simplex> = left
        .maximal()
        .iter()
        .flat_map(|s| right.maximal().iter().map(move |t| product_simplex(s, t)))
        .collect();
    SimplicialComplex::new(vertices, maximal).expect("tensor complex is well formed")
}

/// `π₁ ⊠ π₂: (x,y) ↦ π₁(x) × π₂(y)`.
pub fn tensor_relation(
    left: &SimplicialRelation,
    right: &SimplicialRelation,
) -> Result<SimplicialRelation> {
    let source = tensor_complex(&left.source, &right.source);
    let target = tensor_complex(&left.target, &right.target);
    let mut map = BTreeMap::new();
    for (x, s) in &left.map {
        for (y, t) in &right.map {
            map.insert(Vertex::pair(x, y), product_simplex(s, t));
        }
    }
    SimplicialRelation::new(source, target, map)
}

/// `f ⊗ g` on vertices.
pub fn tensor_map(left: &ComplexMap, right: &ComplexMap) -> ComplexMap {
    let source = tensor_complex(left.source(), right.source());
    let target = tensor_complex(left.target(), right.target());
    let mut map = BTreeMap::new();
    for (x, fx) in left.vertex_map() {
        for (y, gy) in right.vertex_map() {
            map.insert(Vertex::pair(x, y), Vertex::pair(fx, gy));
        }
    }
    ComplexMap {
        source,
        target,
        map,
    }
}

/// Associator `(Σ₁ ⊗ Σ₂) ⊗ Σ₃ → Σ₁ ⊗ (Σ₂ ⊗ Σ₃)`.
pub fn associator(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    c: &SimplicialComplex,
) -> ComplexMap {
    let source = tensor_complex(&tensor_complex(a, b), c);
    let target = tensor_complex(a, &tensor_complex(b, c));
    let mut map = BTreeMap::new();
    for x in a.vertices() {
        for y in b.vertices() {
            for z in c.vertices() {
                map.insert(
                    Vertex::pair(&Vertex::pair(x, y), z),
                    Vertex::pair(x, &Vertex::pair(y, z)),
                );
            }
        }
    }
    ComplexMap {
        source,
        target,
        map,
    }
}

/// Left unitor `Δ⁰ ⊗ Σ → Σ` for a one-vertex complex `unit`.
pub fn left_unitor(unit: &SimplicialComplex, complex: &SimplicialComplex) -> Result<ComplexMap> {
    let [point] = unit.vertices() else {
        return domain("the monoidal unit has exactly one vertex");
    };
    let map = complex
        .vertices()
        .iter()
        .map(|x| (Vertex::pair(point, x), x.clone()))
        .collect();
    ComplexMap::new(tensor_complex(unit, complex), complex.clone(), map)
}

/// Right unitor `Σ ⊗ Δ⁰ → Σ`.
pub fn right_unitor(complex: &SimplicialComplex, unit: &SimplicialComplex) -> Result<ComplexMap> {
    let [point] = unit.vertices() else {
        return domain("the monoidal unit has exactly one vertex");
    };
    let map = complex
        .vertices()
        .iter()
        .map(|x| (Vertex::pair(x, point), x.clone()))
        .collect();
    ComplexMap::new(tensor_complex(complex, unit), complex.clone(), map)
}

/// Symmetry `Σ₁ ⊗ Σ₂ → Σ₂ ⊗ Σ₁`.
pub fn braiding(a: &SimplicialComplex, b: &SimplicialComplex) -> ComplexMap {
    let mut map = BTreeMap::new();
    for x in a.vertices() {
        for y in b.vertices() {
            map.insert(Vertex::pair(x, y), Vertex::pair(y, x));
        }
    }
    ComplexMap {
        source: tensor_complex(a, b),
        target: tensor_complex(b, a),
        map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s(names: &[&str]) -> Simplex {
        Simplex::from_names(names).unwrap()
    }

    fn path() -> SimplicialComplex {
        SimplicialComplex::generated_by([s(&["a", "b"]), s(&["b", "c"])]).unwrap()
    }

    fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::generated_by([s(&["x", "y"]), s(&["x", "z"]), s(&["y", "z"])]).unwrap()
    }

    #[test]
    fn vertex_names_are_validated() {
        assert!(Vertex::new("a,b").is_err());
        assert!(Vertex::new("[a]").is_err());
        assert!(Vertex::new("").is_err());
        assert!(Vertex::new("a1").is_ok());
    }

    #[test]
    fn keys_round_trip_with_structured_names() {
        let a = Vertex::new("a").unwrap();
        let b = Vertex::new("b").unwrap();
        let simplex = Simplex::new([Vertex::pair(&a, &b), Vertex::nerve(&s(&["a", "b"]))]).unwrap();
        assert_eq!(Simplex::parse_key(&simplex.key()).unwrap(), simplex);
        assert_eq!(Vertex::pair(&a, &b).as_pair(), Some((a.clone(), b.clone())));
        assert_eq!(
            Vertex::nerve(&s(&["a", "b"])).as_nerve(),
            Some(s(&["a", "b"]))
        );
    }

    #[test]
    fn path_simplices_in_canonical_order() {
        let keys: Vec<String> = path().simplices().iter().map(Simplex::key).collect();
        assert_eq!(keys, ["a", "b", "c", "a,b", "b,c"]);
    }

    #[test]
    fn point_has_one_simplex() {
        assert_eq!(
            SimplicialComplex::simplex(&s(&["x"])).simplices(),
            vec![s(&["x"])]
        );
    }

    #[test]
    fn triangle_boundary_has_six_simplices() {
        assert_eq!(triangle_boundary().simplices().len(), 6);
    }

    #[test]
    fn stars() {
        assert_eq!(
            path().star(&s(&["b"])).unwrap(),
            vec![s(&["b"]), s(&["a", "b"]), s(&["b", "c"])]
        );
        assert_eq!(path().star(&s(&["a", "b"])).unwrap(), vec![s(&["a", "b"])]);
        assert_eq!(
            triangle_boundary().star(&s(&["x"])).unwrap(),
            vec![s(&["x"]), s(&["x", "y"]), s(&["x", "z"])]
        );
        assert!(path().star(&s(&["a", "c"])).is_err());
    }

    #[test]
    fn generated_subcomplexes() {
        assert_eq!(
            path().generated_subcomplex(&s(&["b"])).unwrap().maximal(),
            &[s(&["b"])]
        );
        assert_eq!(
            triangle_boundary()
                .generated_subcomplex(&s(&["y", "z"]))
                .unwrap()
                .maximal(),
            &[s(&["y", "z"])]
        );
    }

    #[test]
    fn antichain_reduction_on_construction() {
        let c = SimplicialComplex::generated_by([s(&["a"]), s(&["a", "b"]), s(&["b"])]).unwrap();
        assert_eq!(c.maximal(), &[s(&["a", "b"])]);
    }

    #[test]
    fn nerve_of_edge_is_a_triangle() {
        let n = nerve_complex(&SimplicialComplex::simplex(&s(&["x", "y"])));
        assert_eq!(n.vertices().len(), 3);
        assert_eq!(n.maximal().len(), 1);
        assert_eq!(n.maximal()[0].len(), 3);
    }

    #[test]
    fn nerve_of_path_does_not_join_a_and_bc() {
        let n = nerve_complex(&path());
        let family =
            Simplex::new([Vertex::nerve(&s(&["a"])), Vertex::nerve(&s(&["b", "c"]))]).unwrap();
        assert!(!n.contains(&family));
    }

    #[test]
    fn multiplication_takes_unions() {
        let inner =
            Simplex::new([Vertex::nerve(&s(&["a"])), Vertex::nerve(&s(&["a", "b"]))]).unwrap();
        let mult = monad_mult(&path());
        assert_eq!(
            mult.vertex(&Vertex::nerve(&inner)),
            &Vertex::nerve(&s(&["a", "b"]))
        );
    }

    #[test]
    fn kleisli_composite_is_a_union() {
        let target = SimplicialComplex::simplex(&s(&["p", "q"]));
        let middle = SimplicialComplex::simplex(&s(&["u", "v"]));
        let source = SimplicialComplex::simplex(&s(&["x"]));
        let v = |n: &str| Vertex::new(n).unwrap();
        let outer = SimplicialRelation::new(
            middle.clone(),
            target,
            [(v("u"), s(&["p"])), (v("v"), s(&["p", "q"]))].into(),
        )
        .unwrap();
        let inner =
            SimplicialRelation::new(source, middle, [(v("x"), s(&["u", "v"]))].into()).unwrap();
        let c = kleisli_compose(&outer, &inner).unwrap();
        assert_eq!(c.image(&v("x")), &s(&["p", "q"]));
        assert!(kleisli_compose(&inner, &outer).is_err());
    }

    #[test]
    fn relation_rejects_non_simplicial_images() {
        let v = |n: &str| Vertex::new(n).unwrap();
        let edge = SimplicialComplex::simplex(&s(&["x", "y"]));
        let rel = SimplicialRelation::new(
            edge,
            path(),
            [(v("x"), s(&["a"])), (v("y"), s(&["c"]))].into(),
        );
        assert!(rel.is_err());
    }

    #[test]
    fn tensor_of_paths_has_four_pyramids() {
        let t = tensor_complex(&path(), &path());
        assert_eq!(t.vertices().len(), 9);
        assert_eq!(t.maximal().len(), 4);
        assert!(t.maximal().iter().all(|m| m.len() == 4));
        assert_eq!(
            tensor_complex(&triangle_boundary(), &path())
                .vertices()
                .len(),
            9
        );
    }

    #[test]
    fn tensor_relation_is_a_product() {
        let v = |n: &str| Vertex::new(n).unwrap();
        let p1 = SimplicialRelation::new(
            SimplicialComplex::simplex(&s(&["x"])),
            SimplicialComplex::simplex(&s(&["p"])),
            [(v("x"), s(&["p"]))].into(),
        )
        .unwrap();
        let p2 = SimplicialRelation::new(
            SimplicialComplex::simplex(&s(&["y"])),
            SimplicialComplex::simplex(&s(&["q", "r"])),
            [(v("y"), s(&["q", "r"]))].into(),
        )
        .unwrap();
        let t = tensor_relation(&p1, &p2).unwrap();
        let expected = Simplex::new([
            Vertex::pair(&v("p"), &v("q")),
            Vertex::pair(&v("p"), &v("r")),
        ])
        .unwrap();
        assert_eq!(t.image(&Vertex::pair(&v("x"), &v("y"))), &expected);
    }

    #[test]
    fn coherence_isomorphisms() {
        let p = path();
        let t = triangle_boundary();
        let unit = SimplicialComplex::point();
        assert!(associator(&p, &t, &unit).is_isomorphism());
        assert!(left_unitor(&unit, &p).unwrap().is_isomorphism());
        assert!(right_unitor(&t, &unit).unwrap().is_isomorphism());
        assert!(braiding(&p, &t).is_isomorphism());
    }
}
