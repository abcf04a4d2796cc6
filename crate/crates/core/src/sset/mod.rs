//! Truncated finite simplicial sets, simplicial scenarios and simplicial
//! distributions.
//!
//! A [`TruncatedSSet`] stores simplices of degrees `0..=d` by index with face
//! and degeneracy tables. Monotone maps `θ: [k] → [n]` are written as their
//! value sequences and act through [`TruncatedSSet::apply`].

mod compare;
mod mapping;
mod nerve;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::dist::{glue_deterministic, Dist, Rational};
use crate::error::{domain, Error, Result};
use crate::report::ValidationReport;

pub use compare::{compare_nerve_mapping, NerveComparison};
pub use mapping::{
    affine_table_of_morphism, count_morphisms, mapping_simplicial, morphisms, mu, tensor_inclusion,
    zeta, zeta_inverse, AffineTable, DetMorphism, MapSimplex, MappingSpace,
};
pub use nerve::{
    empirical_to_simplicial, nerve_bundle, nerve_space, simplicial_to_marginals, theta_tuple,
    tuple_union, NerveBundle, NerveSpace, NerveTuple,
};

/// Default cap on the number of solutions of one enumeration.
pub const DEFAULT_SOLUTION_CAP: usize = 1_000_000;

/// A finite simplicial set truncated at degree `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSSet {
    bound: usize,
    names: Vec<Vec<String>>,
    /// `faces[n][x][i] = d_i x` for `n ≥ 1`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[n][x][j] = s_j x` for `n < bound`.
    degens: Vec<Vec<Vec<usize>>>,
    /// `(j, x′)` with `s_j x′ = x`, per degree.
    degenerate_from: Vec<Vec<Vec<(usize, usize)>>>,
    index: Vec<HashMap<String, usize>>,
}

impl TruncatedSSet {
    /// Validates shapes and simplicial identities.
    pub fn new(
        bound: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let s = Self::assemble(bound, names, faces, degens)?;
        let report = s.check_identities();
        if report.is_ok() {
            Ok(s)
        } else {
            Err(Error::Invalid(report.to_string()))
        }
    }

    /// Checks shapes (an error when malformed) and reports identities.
    pub fn validate(
        bound: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<ValidationReport> {
        Ok(Self::assemble(bound, names, faces, degens)?.check_identities())
    }

    fn assemble(
        bound: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if names.len() != bound + 1 || faces.len() != bound + 1 || degens.len() != bound + 1 {
            return domain(format!("tables must cover degrees 0..={bound}"));
        }
        let mut index = Vec::with_capacity(bound + 1);
        for (n, level) in names.iter().enumerate() {
            let map: HashMap<String, usize> = level
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect();
            if map.len() != level.len() {
                return domain(format!("repeated simplex name in degree {n}"));
            }
            index.push(map);
        }
        for n in 0..=bound {
            let count = names[n].len();
            if faces[n].len() != count || degens[n].len() != count {
                return domain(format!("degree {n} tables do not match the simplex count"));
            }
            for x in 0..count {
                let want = if n == 0 { 0 } else { n + 1 };
                if faces[n][x].len() != want || faces[n][x].iter().any(|&t| t >= names[n - 1].len())
                {
                    return domain(format!(
                        "face table of {} in degree {n} is malformed",
                        names[n][x]
                    ));
                }
                let want = if n < bound { n + 1 } else { 0 };
                if degens[n][x].len() != want
                    || degens[n][x].iter().any(|&t| t >= names[n + 1].len())
                {
                    return domain(format!(
                        "degeneracy table of {} in degree {n} is malformed",
                        names[n][x]
                    ));
                }
            }
        }
        let mut degenerate_from: Vec<Vec<Vec<(usize, usize)>>> = names
            .iter()
            .map(|level| vec![Vec::new(); level.len()])
            .collect();
        for n in 0..bound {
            for (x, row) in degens[n].iter().enumerate() {
                for (j, &t) in row.iter().enumerate() {
                    degenerate_from[n + 1][t].push((j, x));
                }
            }
        }
        Ok(TruncatedSSet {
            bound,
            names,
            faces,
            degens,
            degenerate_from,
            index,
        })
    }

    fn check_identities(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        report.record("face-face", self.check_face_face());
        report.record("face-degeneracy", self.check_face_degeneracy());
        report.record("degeneracy-degeneracy", self.check_degeneracy_degeneracy());
        report.record("degeneracies injective", self.check_injective());
        report
    }

    fn check_face_face(&self) -> std::result::Result<(), String> {
        for n in 2..=self.bound {
            for x in 0..self.count(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let left = self.face(n - 1, self.face(n, x, j), i);
                        let right = self.face(n - 1, self.face(n, x, i), j - 1);
                        if left != right {
                            return Err(format!(
                                "d{i} d{j} != d{} d{i} on {}",
                                j - 1,
                                self.names[n][x]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_face_degeneracy(&self) -> std::result::Result<(), String> {
        for n in 0..self.bound {
            for x in 0..self.count(n) {
                for j in 0..=n {
                    let sx = self.degen(n, x, j);
                    for i in 0..=n + 1 {
                        let left = self.face(n + 1, sx, i);
                        let right = if i < j {
                            self.degen(n - 1, self.face(n, x, i), j - 1)
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.degen(n - 1, self.face(n, x, i - 1), j)
                        };
                        if left != right {
                            return Err(format!(
                                "d{i} s{j} violates the identities on {}",
                                self.names[n][x]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_degeneracy_degeneracy(&self) -> std::result::Result<(), String> {
        for n in 0..self.bound.saturating_sub(1) {
            for x in 0..self.count(n) {
                for j in 0..=n {
                    for i in 0..=j {
                        let left = self.degen(n + 1, self.degen(n, x, j), i);
                        let right = self.degen(n + 1, self.degen(n, x, i), j + 1);
                        if left != right {
                            return Err(format!(
                                "s{i} s{j} != s{} s{i} on {}",
                                j + 1,
                                self.names[n][x]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_injective(&self) -> std::result::Result<(), String> {
        for n in 0..self.bound {
            for j in 0..=n {
                let mut seen = HashMap::new();
                for x in 0..self.count(n) {
                    if let Some(prev) = seen.insert(self.degen(n, x, j), x) {
                        return Err(format!(
                            "s{j} identifies {} and {}",
                            self.names[n][prev], self.names[n][x]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The one-point simplicial set `Δ⁰`.
    pub fn point(bound: usize) -> Self {
        Self::discrete(&["*"], bound)
    }

    /// The constant simplicial set on a finite set.
    pub fn discrete(points: &[&str], bound: usize) -> Self {
        let k = points.len();
        let names = (0..=bound)
            .map(|_| points.iter().map(|p| p.to_string()).collect())
            .collect();
        let faces = (0..=bound)
            .map(|n| {
                (0..k)
                    .map(|x| if n == 0 { vec![] } else { vec![x; n + 1] })
                    .collect()
            })
            .collect();
        let degens = (0..=bound)
            .map(|n| {
                (0..k)
                    .map(|x| if n < bound { vec![x; n + 1] } else { vec![] })
                    .collect()
            })
            .collect();
        Self::assemble(bound, names, faces, degens)
            .expect("constant simplicial sets are well formed")
    }

    /// `Δⁿ` truncated at `bound`: degree-`k` simplices are monotone maps
    /// `[k] → [n]`, named by their value strings.
    pub fn standard_simplex(n: usize, bound: usize) -> Result<Self> {
        if n > bound {
            return domain(format!("Δ{n} needs truncation at least {n}, got {bound}"));
        }
        let seqs: Vec<Vec<Vec<usize>>> = (0..=bound).map(|k| monotone_sequences(k, n)).collect();
        let lookup: Vec<HashMap<&Vec<usize>, usize>> = seqs
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let names = seqs
            .iter()
            .map(|level| level.iter().map(|s| sequence_name(s)).collect())
            .collect();
        let faces = (0..=bound)
            .map(|k| {
                seqs[k]
                    .iter()
                    .map(|s| {
                        if k == 0 {
                            vec![]
                        } else {
                            (0..=k).map(|i| lookup[k - 1][&remove_at(s, i)]).collect()
                        }
                    })
                    .collect()
            })
            .collect();
        let degens = (0..=bound)
            .map(|k| {
                seqs[k]
                    .iter()
                    .map(|s| {
                        if k < bound {
                            (0..=k).map(|j| lookup[k + 1][&repeat_at(s, j)]).collect()
                        } else {
                            vec![]
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(bound, names, faces, degens)
    }

    /// Degree-wise product `X × Y` with simplices named `(x,y)`; the pair
    /// `(a, b)` sits at index `a·|Y_n| + b`.
    pub fn product(&self, other: &TruncatedSSet) -> Result<Self> {
        if self.bound != other.bound {
            return domain("products need equal truncation levels");
        }
        let bound = self.bound;
        let mut names = Vec::new();
        let mut faces = Vec::new();
        let mut degens = Vec::new();
        for n in 0..=bound {
            let (ca, cb) = (self.count(n), other.count(n));
            let mut nl = Vec::with_capacity(ca * cb);
            let mut fl = Vec::with_capacity(ca * cb);
            let mut dl = Vec::with_capacity(ca * cb);
            for a in 0..ca {
                for b in 0..cb {
                    nl.push(format!("({},{})", self.names[n][a], other.names[n][b]));
                    fl.push(if n == 0 {
                        vec![]
                    } else {
                        let cb1 = other.count(n - 1);
                        (0..=n)
                            .map(|i| self.face(n, a, i) * cb1 + other.face(n, b, i))
                            .collect()
                    });
                    dl.push(if n < bound {
                        let cb1 = other.count(n + 1);
                        (0..=n)
                            .map(|j| self.degen(n, a, j) * cb1 + other.degen(n, b, j))
                            .collect()
                    } else {
                        vec![]
                    });
                }
            }
            names.push(nl);
            faces.push(fl);
            degens.push(dl);
        }
        Self::assemble(bound, names, faces, degens)
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn count(&self, n: usize) -> usize {
        self.names[n].len()
    }

    pub fn name(&self, n: usize, x: usize) -> &str {
        &self.names[n][x]
    }

    pub fn names(&self, n: usize) -> &[String] {
        &self.names[n]
    }

    pub fn index_of(&self, n: usize, name: &str) -> Option<usize> {
        self.index.get(n)?.get(name).copied()
    }

    /// `d_i x` for `x` in degree `n ≥ 1`.
    pub fn face(&self, n: usize, x: usize, i: usize) -> usize {
        self.faces[n][x][i]
    }

    /// `s_j x` for `x` in degree `n < bound`.
    pub fn degen(&self, n: usize, x: usize, j: usize) -> usize {
        self.degens[n][x][j]
    }

    pub fn face_table(&self, n: usize) -> &[Vec<usize>] {
        &self.faces[n]
    }

    pub fn degen_table(&self, n: usize) -> &[Vec<usize>] {
        &self.degens[n]
    }

    /// Pairs `(j, x′)` with `s_j x′ = x`.
    pub fn degenerate_from(&self, n: usize, x: usize) -> &[(usize, usize)] {
        &self.degenerate_from[n][x]
    }

    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        !self.degenerate_from[n][x].is_empty()
    }

    /// `θ*x` for `x` in degree `n` and a monotone `θ: [k] → [n]`, computed
    /// by an epi-mono factorization.
    pub fn apply(&self, n: usize, x: usize, theta: &[usize]) -> usize {
        debug_assert!(theta.windows(2).all(|w| w[0] <= w[1]) && theta.iter().all(|&t| t <= n));
        let mut image: Vec<usize> = theta.to_vec();
        image.dedup();
        let mut z = x;
        let mut degree = n;
        for i in (0..=n).rev() {
            if image.binary_search(&i).is_err() {
                z = self.face(degree, z, i);
                degree -= 1;
            }
        }
        for p in 0..theta.len().saturating_sub(1) {
            if theta[p] == theta[p + 1] {
                z = self.degen(degree, z, p);
                degree += 1;
            }
        }
        z
    }

    /// Total number of simplices across degrees.
    pub fn size(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }
}

/// All monotone sequences `[k] → [n]` in lexicographic order.
pub fn monotone_sequences(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k + 1);
    fn go(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            go(k, n, v, cur, out);
            cur.pop();
        }
    }
    go(k, n, 0, &mut cur, &mut out);
    out
}

pub(crate) fn sequence_name(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

/// `θ ∘ δ^i`: the sequence with entry `i` removed.
pub(crate) fn remove_at(s: &[usize], i: usize) -> Vec<usize> {
    let mut v = s.to_vec();
    v.remove(i);
    v
}

/// `θ ∘ σ^j`: the sequence with entry `j` repeated.
pub(crate) fn repeat_at(s: &[usize], j: usize) -> Vec<usize> {
    let mut v = s.to_vec();
    v.insert(j, s[j]);
    v
}

/// A simplicial map between truncated simplicial sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSetMap {
    source: Arc<TruncatedSSet>,
    target: Arc<TruncatedSSet>,
    tables: Vec<Vec<usize>>,
}

impl SSetMap {
    /// Validates degree tables against all face and degeneracy maps.
    pub fn new(
        source: Arc<TruncatedSSet>,
        target: Arc<TruncatedSSet>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if source.bound != target.bound {
            return domain("maps need equal truncation levels");
        }
        if tables.len() != source.bound + 1 {
            return domain("one table per degree is required");
        }
        for (n, t) in tables.iter().enumerate() {
            if t.len() != source.count(n) || t.iter().any(|&v| v >= target.count(n)) {
                return domain(format!("degree {n} table has the wrong shape"));
            }
        }
        let m = SSetMap {
            source,
            target,
            tables,
        };
        m.check_commutes().map_err(Error::Invalid)?;
        Ok(m)
    }

    fn check_commutes(&self) -> std::result::Result<(), String> {
        let (s, t) = (&self.source, &self.target);
        for n in 0..=s.bound {
            for x in 0..s.count(n) {
                let fx = self.tables[n][x];
                if n > 0 {
                    for i in 0..=n {
                        if self.tables[n - 1][s.face(n, x, i)] != t.face(n, fx, i) {
                            return Err(format!(
                                "map does not commute with d{i} at {}",
                                s.name(n, x)
                            ));
                        }
                    }
                }
                if n < s.bound {
                    for j in 0..=n {
                        if self.tables[n + 1][s.degen(n, x, j)] != t.degen(n, fx, j) {
                            return Err(format!(
                                "map does not commute with s{j} at {}",
                                s.name(n, x)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(set: Arc<TruncatedSSet>) -> Self {
        let tables = (0..=set.bound)
            .map(|n| (0..set.count(n)).collect())
            .collect();
        SSetMap {
            source: set.clone(),
            target: set,
            tables,
        }
    }

    /// The unique map to a one-point set.
    pub fn to_point(source: Arc<TruncatedSSet>, point: Arc<TruncatedSSet>) -> Result<Self> {
        let tables = (0..=source.bound)
            .map(|n| vec![0; source.count(n)])
            .collect();
        SSetMap::new(source, point, tables)
    }

    pub fn source(&self) -> &Arc<TruncatedSSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TruncatedSSet> {
        &self.target
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.tables[n][x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SSetMap) -> Result<SSetMap> {
        if first.target != self.source {
            return Err(Error::Composition("simplicial maps do not compose".into()));
        }
        let tables = first
            .tables
            .iter()
            .enumerate()
            .map(|(n, t)| t.iter().map(|&x| self.tables[n][x]).collect())
            .collect();
        Ok(SSetMap {
            source: first.source.clone(),
            target: self.target.clone(),
            tables,
        })
    }

    /// `f × g`.
    pub fn product(&self, other: &SSetMap) -> Result<SSetMap> {
        let source = Arc::new(self.source.product(&other.source)?);
        let target = Arc::new(self.target.product(&other.target)?);
        let tables = (0..=self.source.bound)
            .map(|n| {
                let cb = other.target.count(n);
                let mut t = Vec::new();
                for a in 0..self.source.count(n) {
                    for b in 0..other.source.count(n) {
                        t.push(self.tables[n][a] * cb + other.tables[n][b]);
                    }
                }
                t
            })
            .collect();
        Ok(SSetMap {
            source,
            target,
            tables,
        })
    }
}

/// All simplicial maps `a: P → Q` with `a(x) ∈ candidates(n, x)`, found by
/// backtracking in increasing degree. Degenerate simplices are forced by
/// their degeneracy constraint and every simplex is checked against its
/// faces.
pub(crate) fn lifts(
    p: &TruncatedSSet,
    q: &TruncatedSSet,
    candidates: &dyn Fn(usize, usize) -> Vec<usize>,
    cap: usize,
) -> Result<Vec<Vec<Vec<usize>>>> {
    let order: Vec<(usize, usize)> = (0..=p.bound)
        .flat_map(|n| (0..p.count(n)).map(move |x| (n, x)))
        .collect();
    let cands: Vec<Vec<usize>> = order.iter().map(|&(n, x)| candidates(n, x)).collect();
    let mut assignment: Vec<Vec<usize>> = (0..=p.bound)
        .map(|n| vec![usize::MAX; p.count(n)])
        .collect();
    let mut out = Vec::new();
    lift_step(p, q, &order, &cands, 0, &mut assignment, &mut out, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn lift_step(
    p: &TruncatedSSet,
    q: &TruncatedSSet,
    order: &[(usize, usize)],
    cands: &[Vec<usize>],
    step: usize,
    assignment: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
    cap: usize,
) -> Result<()> {
    let Some(&(n, x)) = order.get(step) else {
        if out.len() >= cap {
            return Err(Error::Resource(format!("more than {cap} simplicial maps")));
        }
        out.push(assignment.clone());
        return Ok(());
    };
    let fits = |v: usize, assignment: &Vec<Vec<usize>>| {
        (n == 0 || (0..=n).all(|i| q.face(n, v, i) == assignment[n - 1][p.face(n, x, i)]))
            && p.degenerate_from(n, x)
                .iter()
                .all(|&(j, y)| q.degen(n - 1, assignment[n - 1][y], j) == v)
    };
    let forced = p
        .degenerate_from(n, x)
        .first()
        .map(|&(j, y)| q.degen(n - 1, assignment[n - 1][y], j));
    match forced {
        Some(v) => {
            if cands[step].contains(&v) && fits(v, assignment) {
                assignment[n][x] = v;
                lift_step(p, q, order, cands, step + 1, assignment, out, cap)?;
            }
        }
        None => {
            for &v in &cands[step] {
                if fits(v, assignment) {
                    assignment[n][x] = v;
                    lift_step(p, q, order, cands, step + 1, assignment, out, cap)?;
                }
            }
        }
    }
    assignment[n][x] = usize::MAX;
    Ok(())
}

/// A simplicial scenario `f: E → X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialScenario {
    map: SSetMap,
    /// `fibers[n][x]`: simplices of `E_n` over `x`, ascending.
    fibers: Vec<Vec<Vec<usize>>>,
}

impl SimplicialScenario {
    pub fn new(map: SSetMap) -> Self {
        let fibers = (0..=map.source.bound)
            .map(|n| {
                let mut level = vec![Vec::new(); map.target.count(n)];
                for (e, &x) in map.tables[n].iter().enumerate() {
                    level[x].push(e);
                }
                level
            })
            .collect();
        SimplicialScenario { map, fibers }
    }

    /// `Id_{Δ⁰}`.
    pub fn unit(bound: usize) -> Self {
        let point = Arc::new(TruncatedSSet::point(bound));
        SimplicialScenario::new(SSetMap::identity(point))
    }

    /// The product scenario `X × O → X` for a finite outcome set `O`.
    pub fn product_with(base: Arc<TruncatedSSet>, outcomes: &[&str]) -> Result<Self> {
        let o = TruncatedSSet::discrete(outcomes, base.bound);
        let total = Arc::new(base.product(&o)?);
        let k = outcomes.len();
        let tables = (0..=base.bound)
            .map(|n| (0..total.count(n)).map(|e| e / k).collect())
            .collect();
        Ok(SimplicialScenario::new(SSetMap::new(total, base, tables)?))
    }

    pub fn map(&self) -> &SSetMap {
        &self.map
    }

    pub fn total(&self) -> &Arc<TruncatedSSet> {
        &self.map.source
    }

    pub fn base(&self) -> &Arc<TruncatedSSet> {
        &self.map.target
    }

    pub fn bound(&self) -> usize {
        self.map.source.bound
    }

    pub fn fiber(&self, n: usize, x: usize) -> &[usize] {
        &self.fibers[n][x]
    }

    pub fn project(&self, n: usize, e: usize) -> usize {
        self.map.tables[n][e]
    }

    /// `f ⊗ g = f × g`.
    pub fn tensor(&self, other: &SimplicialScenario) -> Result<SimplicialScenario> {
        Ok(SimplicialScenario::new(self.map.product(&other.map)?))
    }
}

/// A section `s: X → E` with `f ∘ s = id`, as degree tables.
pub type Section = Vec<Vec<usize>>;

/// Sections of `f`, enumerated as compatible families over the fiber
/// diagram `χ_f`.
pub fn sections(f: &SimplicialScenario, cap: usize) -> Result<Vec<Section>> {
    lifts(f.base(), f.total(), &|n, x| f.fiber(n, x).to_vec(), cap)
}

/// A simplicial distribution: a distribution on `f⁻¹(x)` for every simplex
/// `x` of the base, keyed by total-simplex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialDistribution {
    pub dists: Vec<Vec<Dist<usize>>>,
}

impl SimplicialDistribution {
    /// The point mass on a section.
    pub fn delta(section: &Section) -> Self {
        SimplicialDistribution {
            dists: section
                .iter()
                .map(|level| level.iter().map(|&e| Dist::delta(e)).collect())
                .collect(),
        }
    }

    /// Pointwise convex combination.
    pub fn mixture(parts: &[(Rational, &SimplicialDistribution)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Domain("empty mixture".into()))?
            .1;
        let dists = first
            .dists
            .iter()
            .enumerate()
            .map(|(n, level)| {
                (0..level.len())
                    .map(|x| {
                        let items: Vec<(Rational, Dist<usize>)> = parts
                            .iter()
                            .map(|(w, p)| (w.clone(), p.dists[n][x].clone()))
                            .collect();
                        Dist::mixture(&items)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplicialDistribution { dists })
    }

    pub fn at(&self, n: usize, x: usize) -> &Dist<usize> {
        &self.dists[n][x]
    }
}

/// Checks supports and every arrow of `χ_f`: pushforward along `d_i` and
/// `s_j` of the total space sends `p_x` to `p_{d_i x}` and `p_{s_j x}`.
pub fn validate_simplicial_distribution(
    f: &SimplicialScenario,
    p: &SimplicialDistribution,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    let shape = p.dists.len() == f.bound() + 1
        && p.dists
            .iter()
            .enumerate()
            .all(|(n, level)| level.len() == f.base().count(n));
    report.record(
        "shape",
        if shape {
            Ok(())
        } else {
            Err("one distribution per base simplex is required".into())
        },
    );
    if !shape {
        return report;
    }
    let (e, x) = (f.total(), f.base());
    let support = (|| {
        for (n, level) in p.dists.iter().enumerate() {
            for (xi, d) in level.iter().enumerate() {
                if let Some(bad) = d
                    .support()
                    .find(|&&s| s >= e.count(n) || f.project(n, s) != xi)
                {
                    return Err(format!(
                        "p at {} puts weight on {bad}, outside the fiber",
                        x.name(n, xi)
                    ));
                }
            }
        }
        Ok(())
    })();
    let ok = support.is_ok();
    report.record("support", support);
    if !ok {
        return report;
    }
    let arrows = (|| {
        for n in 0..=f.bound() {
            for xi in 0..x.count(n) {
                let d = &p.dists[n][xi];
                if n > 0 {
                    for i in 0..=n {
                        if d.pushforward(|&s| e.face(n, s, i)) != p.dists[n - 1][x.face(n, xi, i)] {
                            return Err(format!(
                                "d{i}: {} -> {}",
                                x.name(n, xi),
                                x.name(n - 1, x.face(n, xi, i))
                            ));
                        }
                    }
                }
                if n < f.bound() {
                    for j in 0..=n {
                        if d.pushforward(|&s| e.degen(n, s, j)) != p.dists[n + 1][x.degen(n, xi, j)]
                        {
                            return Err(format!(
                                "s{j}: {} -> {}",
                                x.name(n, xi),
                                x.name(n + 1, x.degen(n, xi, j))
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    report.record("compatibility", arrows);
    report
}

/// `Θ_f(Q)`: `p_x = Σ_s Q(s) δ^{s(x)}`.
pub fn theta_simplicial(sections: &[Section], q: &Dist<usize>) -> Result<SimplicialDistribution> {
    let first = sections
        .first()
        .ok_or_else(|| Error::Domain("no sections".into()))?;
    if q.support().any(|&s| s >= sections.len()) {
        return domain("distribution over sections refers to an unknown section");
    }
    let dists = first
        .iter()
        .enumerate()
        .map(|(n, level)| {
            (0..level.len())
                .map(|x| q.pushforward(|&s| sections[s][n][x]))
                .collect()
        })
        .collect();
    Ok(SimplicialDistribution { dists })
}

/// The pullback `π*(E) = E ×_X Y` of a scenario along `π: Y → X`, with
/// pairs `(e, y)` indexed per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub set: Arc<TruncatedSSet>,
    pub pairs: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
}

impl Pullback {
    pub fn new(f: &SimplicialScenario, y_set: &TruncatedSSet, pi: &[Vec<usize>]) -> Self {
        let e = f.total();
        let bound = f.bound();
        let pairs: Vec<Vec<(usize, usize)>> = (0..=bound)
            .map(|n| {
                (0..y_set.count(n))
                    .flat_map(|y| f.fiber(n, pi[n][y]).iter().map(move |&ei| (ei, y)))
                    .collect::<Vec<_>>()
            })
            .map(|mut v: Vec<(usize, usize)>| {
                v.sort();
                v
            })
            .collect();
        let index: Vec<HashMap<(usize, usize), usize>> = pairs
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, &p)| (p, i)).collect())
            .collect();
        let names = pairs
            .iter()
            .enumerate()
            .map(|(n, level)| {
                level
                    .iter()
                    .map(|&(a, b)| format!("({},{})", e.name(n, a), y_set.name(n, b)))
                    .collect()
            })
            .collect();
        let faces = (0..=bound)
            .map(|n| {
                pairs[n]
                    .iter()
                    .map(|&(a, b)| {
                        if n == 0 {
                            vec![]
                        } else {
                            (0..=n)
                                .map(|i| index[n - 1][&(e.face(n, a, i), y_set.face(n, b, i))])
                                .collect()
                        }
                    })
                    .collect()
            })
            .collect();
        let degens = (0..=bound)
            .map(|n| {
                pairs[n]
                    .iter()
                    .map(|&(a, b)| {
                        if n < bound {
                            (0..=n)
                                .map(|j| index[n + 1][&(e.degen(n, a, j), y_set.degen(n, b, j))])
                                .collect()
                        } else {
                            vec![]
                        }
                    })
                    .collect()
            })
            .collect();
        let set = Arc::new(
            TruncatedSSet::assemble(bound, names, faces, degens)
                .expect("pullbacks are well formed"),
        );
        Pullback { set, pairs, index }
    }

    pub fn index_of(&self, n: usize, e: usize, y: usize) -> Option<usize> {
        self.index[n].get(&(e, y)).copied()
    }
}

/// A morphism `(π, α): f → g` of stochastic simplicial scenarios, with
/// `π: Y → X` and `α(e, y)` a distribution on `g⁻¹(y)` for each pair of the
/// pullback `π*(E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochMorphism {
    source: SimplicialScenario,
    target: SimplicialScenario,
    pi: SSetMap,
    pullback: Pullback,
    alpha: Vec<Vec<Dist<usize>>>,
}

impl StochMorphism {
    /// Validates supports and simplicial compatibility of `α`.
    pub fn new(
        source: SimplicialScenario,
        target: SimplicialScenario,
        pi: SSetMap,
        alpha: Vec<Vec<Dist<usize>>>,
    ) -> Result<Self> {
        if pi.source() != target.base() || pi.target() != source.base() {
            return domain("π must run from the target base to the source base");
        }
        let pullback = Pullback::new(&source, target.base(), pi.tables());
        if alpha.len() != pullback.pairs.len()
            || alpha
                .iter()
                .zip(&pullback.pairs)
                .any(|(a, p)| a.len() != p.len())
        {
            return domain("α needs one distribution per pullback simplex");
        }
        let m = StochMorphism {
            source,
            target,
            pi,
            pullback,
            alpha,
        };
        m.check().map_err(Error::Invalid)?;
        Ok(m)
    }

    /// A deterministic morphism, `α` given as target simplices.
    pub fn deterministic(
        source: SimplicialScenario,
        target: SimplicialScenario,
        pi: SSetMap,
        alpha: &[Vec<usize>],
    ) -> Result<Self> {
        let alpha = alpha
            .iter()
            .map(|level| level.iter().map(|&v| Dist::delta(v)).collect())
            .collect();
        StochMorphism::new(source, target, pi, alpha)
    }

    /// `(id, δ)`.
    pub fn identity(f: &SimplicialScenario) -> Self {
        let pi = SSetMap::identity(f.base().clone());
        let pullback = Pullback::new(f, f.base(), pi.tables());
        let alpha = pullback
            .pairs
            .iter()
            .map(|level| level.iter().map(|&(e, _)| Dist::delta(e)).collect())
            .collect();
        StochMorphism {
            source: f.clone(),
            target: f.clone(),
            pi,
            pullback,
            alpha,
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        let (f, g) = (self.target.total(), self.pullback.set.clone());
        for (n, level) in self.alpha.iter().enumerate() {
            for (k, d) in level.iter().enumerate() {
                let (_, y) = self.pullback.pairs[n][k];
                if d.support()
                    .any(|&v| v >= f.count(n) || self.target.project(n, v) != y)
                {
                    return Err(format!("α at {} leaves the fiber", g.name(n, k)));
                }
                if n > 0 {
                    for i in 0..=n {
                        if d.pushforward(|&v| f.face(n, v, i)) != self.alpha[n - 1][g.face(n, k, i)]
                        {
                            return Err(format!(
                                "α does not commute with d{i} at {}",
                                g.name(n, k)
                            ));
                        }
                    }
                }
                if n < g.bound() {
                    for j in 0..=n {
                        if d.pushforward(|&v| f.degen(n, v, j))
                            != self.alpha[n + 1][g.degen(n, k, j)]
                        {
                            return Err(format!(
                                "α does not commute with s{j} at {}",
                                g.name(n, k)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &SimplicialScenario {
        &self.source
    }

    pub fn target(&self) -> &SimplicialScenario {
        &self.target
    }

    pub fn pi(&self) -> &SSetMap {
        &self.pi
    }

    pub fn pullback(&self) -> &Pullback {
        &self.pullback
    }

    /// `α(e, y)`.
    pub fn alpha(&self, n: usize, e: usize, y: usize) -> Option<&Dist<usize>> {
        self.pullback.index_of(n, e, y).map(|k| &self.alpha[n][k])
    }

    pub fn alpha_tables(&self) -> &[Vec<Dist<usize>>] {
        &self.alpha
    }

    pub fn is_deterministic(&self) -> bool {
        self.alpha.iter().flatten().all(Dist::is_delta)
    }
}

/// `r(y)(e′) = Σ_e q(π(y))(e) · α(e,y)(e′)`.
pub fn push_stochastic(
    m: &StochMorphism,
    q: &SimplicialDistribution,
) -> Result<SimplicialDistribution> {
    let report = validate_simplicial_distribution(&m.source, q);
    if !report.is_ok() {
        return Err(Error::Invalid(report.to_string()));
    }
    let y = m.target.base();
    let dists = (0..=y.bound())
        .map(|n| {
            (0..y.count(n))
                .map(|yi| {
                    let x = m.pi.apply(n, yi);
                    q.dists[n][x].bind(|&e| {
                        m.alpha[n][m.pullback.index_of(n, e, yi).expect("pullback pair")].clone()
                    })
                })
                .collect()
        })
        .collect();
    Ok(SimplicialDistribution { dists })
}

/// Composite of `(π, α): f → g` and `(π′, β): g → h`:
/// `(π ∘ π′, γ)` with `γ(e,z) = Σ_{e′} α(e, π′z)(e′) · β(e′, z)`, computed by
/// gluing `α(e, π′z)` with the deterministic leg `z` and applying `β`.
pub fn compose_stochastic(first: &StochMorphism, second: &StochMorphism) -> Result<StochMorphism> {
    if first.target != second.source {
        return Err(Error::Composition(
            "target of the first morphism is not the source of the second".into(),
        ));
    }
    let pi = first.pi.after(&second.pi)?;
    let (f, g) = (&first.source, &first.target);
    let pullback = Pullback::new(f, second.target.base(), pi.tables());
    let mut alpha = Vec::with_capacity(pullback.pairs.len());
    for (n, level) in pullback.pairs.iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for &(e, z) in level {
            let mid = second.pi.apply(n, z);
            let a = first.alpha(n, e, mid).expect("pullback pair");
            let paired = glue_deterministic(
                |&v: &usize| g.project(n, v),
                |&w: &usize| second.pi.apply(n, w),
                a,
                &z,
            )?;
            row.push(paired.bind(|&(v, w)| second.alpha(n, v, w).expect("pullback pair").clone()));
        }
        alpha.push(row);
    }
    StochMorphism::new(first.source.clone(), second.target.clone(), pi, alpha)
}

/// `(π₁ × π₂, m ∘ (α₁ × α₂))` with the product gluing.
pub fn tensor_stochastic(left: &StochMorphism, right: &StochMorphism) -> Result<StochMorphism> {
    let source = left.source.tensor(&right.source)?;
    let target = left.target.tensor(&right.target)?;
    let pi = left.pi.product(&right.pi)?;
    let pullback = Pullback::new(&source, target.base(), pi.tables());
    let (e2, y2, f2) = (
        right.source.total(),
        right.target.base(),
        right.target.total(),
    );
    let mut alpha = Vec::new();
    for (n, level) in pullback.pairs.iter().enumerate() {
        let row = level
            .iter()
            .map(|&(e, y)| {
                let (ea, eb) = (e / e2.count(n), e % e2.count(n));
                let (ya, yb) = (y / y2.count(n), y % y2.count(n));
                let a = left.alpha(n, ea, ya).expect("pair");
                let b = right.alpha(n, eb, yb).expect("pair");
                a.product(b).pushforward(|&(u, v)| u * f2.count(n) + v)
            })
            .collect();
        alpha.push(row);
    }
    StochMorphism::new(source, target, pi, alpha)
}

/// Weight of `e` in `p` summed over a set of base simplices; used by
/// oracles comparing affine maps.
pub fn total_weight(p: &SimplicialDistribution, n: usize, xs: &[usize], e: usize) -> Rational {
    xs.iter()
        .map(|&x| p.dists[n][x].weight(&e))
        .fold(Rational::zero(), |a, b| a + b)
}

/// Names the simplices of one degree, for reports.
pub fn describe_level(set: &TruncatedSSet, n: usize) -> BTreeMap<usize, String> {
    (0..set.count(n))
        .map(|x| (x, set.name(n, x).to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ratio;

    #[test]
    fn standard_simplex_counts() {
        let d0 = TruncatedSSet::standard_simplex(0, 2).unwrap();
        assert_eq!(
            (0..=2).map(|n| d0.count(n)).collect::<Vec<_>>(),
            vec![1, 1, 1]
        );
        let d1 = TruncatedSSet::standard_simplex(1, 1).unwrap();
        assert_eq!((d1.count(0), d1.count(1)), (2, 3));
        let d2 = TruncatedSSet::standard_simplex(2, 3).unwrap();
        // C(k+3, k+1) monotone maps [k] → [2].
        assert_eq!(
            (0..=3).map(|k| d2.count(k)).collect::<Vec<_>>(),
            vec![3, 6, 10, 15]
        );
        assert!(TruncatedSSet::standard_simplex(3, 2).is_err());
    }

    #[test]
    fn apply_matches_sequence_composition() {
        let d2 = TruncatedSSet::standard_simplex(2, 3).unwrap();
        for k in 0..=3 {
            for x in 0..d2.count(k) {
                let seq: Vec<usize> = d2
                    .name(k, x)
                    .chars()
                    .map(|c| c.to_digit(10).unwrap() as usize)
                    .collect();
                for m in 0..=3 {
                    for theta in monotone_sequences(m, k) {
                        let want: Vec<usize> = theta.iter().map(|&t| seq[t]).collect();
                        assert_eq!(d2.name(m, d2.apply(k, x, &theta)), sequence_name(&want));
                    }
                }
            }
        }
    }

    #[test]
    fn broken_identity_is_reported() {
        let d1 = TruncatedSSet::standard_simplex(1, 1).unwrap();
        let mut faces: Vec<Vec<Vec<usize>>> = (0..=1).map(|n| d1.face_table(n).to_vec()).collect();
        faces[1][0] = vec![1, 1];
        let names = (0..=1).map(|n| d1.names(n).to_vec()).collect();
        let degens = (0..=1).map(|n| d1.degen_table(n).to_vec()).collect();
        let report = TruncatedSSet::validate(1, names, faces, degens).unwrap();
        assert!(!report.check("face-degeneracy").unwrap().passed);
    }

    #[test]
    fn product_scenario_sections_are_constant_labelings() {
        let base = Arc::new(TruncatedSSet::standard_simplex(1, 2).unwrap());
        let f = SimplicialScenario::product_with(base, &["0", "1"]).unwrap();
        // A section of Δ¹ × O → Δ¹ is a map Δ¹ → O, i.e. constant.
        assert_eq!(sections(&f, 100).unwrap().len(), 2);
    }

    #[test]
    fn theta_of_two_sections_is_pointwise_mixture() {
        let base = Arc::new(TruncatedSSet::standard_simplex(1, 1).unwrap());
        let f = SimplicialScenario::product_with(base, &["0", "1"]).unwrap();
        let secs = sections(&f, 100).unwrap();
        let q = Dist::uniform([0, 1]).unwrap();
        let p = theta_simplicial(&secs, &q).unwrap();
        assert!(validate_simplicial_distribution(&f, &p).is_ok());
        assert_eq!(p.at(0, 0).weight(&secs[0][0][0]), ratio(1, 2));
    }

    #[test]
    fn mismatched_face_marginal_is_named() {
        let base = Arc::new(TruncatedSSet::standard_simplex(1, 1).unwrap());
        let f = SimplicialScenario::product_with(base, &["0", "1"]).unwrap();
        let secs = sections(&f, 100).unwrap();
        let mut p = SimplicialDistribution::delta(&secs[0]);
        p.dists[0][1] = Dist::delta(secs[1][0][1]);
        let report = validate_simplicial_distribution(&f, &p);
        let check = report.check("compatibility").unwrap();
        assert!(!check.passed);
        assert_eq!(check.witness.as_deref(), Some("s0: 1 -> 11"));
    }

    #[test]
    fn identity_push_and_composition() {
        let base = Arc::new(TruncatedSSet::standard_simplex(1, 1).unwrap());
        let f = SimplicialScenario::product_with(base, &["0", "1"]).unwrap();
        let id = StochMorphism::identity(&f);
        let secs = sections(&f, 100).unwrap();
        let q = theta_simplicial(&secs, &Dist::uniform([0, 1]).unwrap()).unwrap();
        assert_eq!(push_stochastic(&id, &q).unwrap(), q);
        assert_eq!(compose_stochastic(&id, &id).unwrap(), id);
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let base = Arc::new(TruncatedSSet::standard_simplex(1, 1).unwrap());
        let f = SimplicialScenario::product_with(base, &["0", "1"]).unwrap();
        let id = StochMorphism::identity(&f);
        let t = tensor_stochastic(&id, &id).unwrap();
        assert_eq!(t, StochMorphism::identity(&f.tensor(&f).unwrap()));
    }
}
