//! Nerve spaces of simplicial complexes and nerves of bundle scenarios.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{SSetMap, SimplicialDistribution, SimplicialScenario, TruncatedSSet};
use crate::bundle::BundleScenario;
use crate::complex::{Simplex, SimplicialComplex};
use crate::dist::Dist;
use crate::error::{domain, Result};

/// A nerve tuple `(σ₁,…,σₙ)`; `None` stands for `∅`.
pub type NerveTuple = Vec<Option<Simplex>>;

/// `NΣ` truncated at `d`, with the tuple behind every simplex.
#[derive(Clone, Debug)]
pub struct NerveSpace {
    pub set: Arc<TruncatedSSet>,
    tuples: Vec<Vec<NerveTuple>>,
    index: Vec<HashMap<NerveTuple, usize>>,
}

impl NerveSpace {
    pub fn tuple(&self, n: usize, x: usize) -> &NerveTuple {
        &self.tuples[n][x]
    }

    pub fn tuples(&self, n: usize) -> &[NerveTuple] {
        &self.tuples[n]
    }

    pub fn index_of(&self, tuple: &NerveTuple) -> Option<usize> {
        self.index.get(tuple.len())?.get(tuple).copied()
    }
}

fn merge(a: &Option<Simplex>, b: &Option<Simplex>) -> Option<Simplex> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.union(b)),
        (Some(a), None) | (None, Some(a)) => Some(a.clone()),
        (None, None) => None,
    }
}

/// Union of the non-empty entries.
pub fn tuple_union(t: &[Option<Simplex>]) -> Option<Simplex> {
    t.iter().fold(None, |acc, s| merge(&acc, s))
}

/// `θ*x`: entry `j` is the union of `xᵢ` over `θ(j−1) < i ≤ θ(j)`.
pub fn theta_tuple(x: &[Option<Simplex>], theta: &[usize]) -> NerveTuple {
    theta
        .windows(2)
        .map(|w| tuple_union(&x[w[0]..w[1]]))
        .collect()
}

fn tuple_name(t: &[Option<Simplex>]) -> String {
    let entries: Vec<String> = t
        .iter()
        .map(|s| match s {
            Some(s) => format!("{{{}}}", s.key()),
            None => "∅".to_string(),
        })
        .collect();
    format!("({})", entries.join(";"))
}

fn face_tuple(t: &[Option<Simplex>], i: usize) -> NerveTuple {
    let n = t.len();
    if i == 0 {
        t[1..].to_vec()
    } else if i == n {
        t[..n - 1].to_vec()
    } else {
        let mut v = t[..i - 1].to_vec();
        v.push(merge(&t[i - 1], &t[i]));
        v.extend_from_slice(&t[i + 1..]);
        v
    }
}

fn degen_tuple(t: &[Option<Simplex>], j: usize) -> NerveTuple {
    let mut v = t.to_vec();
    v.insert(j, None);
    v
}

/// `NΣ` truncated at `d ≥ 1`. Degree-`n` simplices are `n`-tuples over
/// `Σ ∪ {∅}` whose union is in `Σ` or empty; the only vertex is `()`.
pub fn nerve_space(complex: &SimplicialComplex, d: usize) -> Result<NerveSpace> {
    if d == 0 {
        return domain("nerve spaces need truncation d ≥ 1");
    }
    let entries = complex.simplices();
    let mut tuples: Vec<Vec<NerveTuple>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut level = Vec::new();
        let mut cur = Vec::with_capacity(n);
        extend(complex, &entries, n, None, &mut cur, &mut level);
        tuples.push(level);
    }
    Ok(build(d, tuples))
}

fn extend(
    complex: &SimplicialComplex,
    entries: &[Simplex],
    n: usize,
    union: Option<Simplex>,
    cur: &mut NerveTuple,
    out: &mut Vec<NerveTuple>,
) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    cur.push(None);
    extend(complex, entries, n, union.clone(), cur, out);
    cur.pop();
    for s in entries {
        let u = merge(&union, &Some(s.clone())).expect("nonempty");
        if complex.contains(&u) {
            cur.push(Some(s.clone()));
            extend(complex, entries, n, Some(u), cur, out);
            cur.pop();
        }
    }
}

fn build(d: usize, tuples: Vec<Vec<NerveTuple>>) -> NerveSpace {
    let index: Vec<HashMap<NerveTuple, usize>> = tuples
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), i))
                .collect()
        })
        .collect();
    let names = tuples
        .iter()
        .map(|level| level.iter().map(|t| tuple_name(t)).collect())
        .collect();
    let faces = (0..=d)
        .map(|n| {
            tuples[n]
                .iter()
                .map(|t| {
                    if n == 0 {
                        vec![]
                    } else {
                        (0..=n).map(|i| index[n - 1][&face_tuple(t, i)]).collect()
                    }
                })
                .collect()
        })
        .collect();
    let degens = (0..=d)
        .map(|n| {
            tuples[n]
                .iter()
                .map(|t| {
                    if n < d {
                        (0..=n).map(|j| index[n + 1][&degen_tuple(t, j)]).collect()
                    } else {
                        vec![]
                    }
                })
                .collect()
        })
        .collect();
    let set =
        TruncatedSSet::assemble(d, names, faces, degens).expect("nerve tables are well formed");
    NerveSpace {
        set: Arc::new(set),
        tuples,
        index,
    }
}

/// `Nf: NΓ → NΣ` with both nerve spaces.
#[derive(Clone, Debug)]
pub struct NerveBundle {
    pub scenario: SimplicialScenario,
    pub total: NerveSpace,
    pub base: NerveSpace,
}

/// The nerve of a bundle scenario, applying `f` entrywise.
pub fn nerve_bundle(f: &BundleScenario, d: usize) -> Result<NerveBundle> {
    let total = nerve_space(f.total(), d)?;
    let base = nerve_space(f.base(), d)?;
    let tables = (0..=d)
        .map(|n| {
            total.tuples[n]
                .iter()
                .map(|t| {
                    let image: NerveTuple =
                        t.iter().map(|g| g.as_ref().map(|g| f.image(g))).collect();
                    base.index[n][&image]
                })
                .collect()
        })
        .collect();
    let map = SSetMap::new(total.set.clone(), base.set.clone(), tables)?;
    Ok(NerveBundle {
        scenario: SimplicialScenario::new(map),
        total,
        base,
    })
}

/// Transfers an empirical model on a bundle to a simplicial distribution on
/// its nerve: `p_x` is the image of `p_{∪σᵢ}` under `γ ↦ (γ|σᵢ)ᵢ`.
///
/// `marginal(σ)` must return the model's distribution over `f⁻¹(σ)` for
/// every simplex `σ` of the base.
pub fn empirical_to_simplicial(
    nb: &NerveBundle,
    f: &BundleScenario,
    marginal: impl Fn(&Simplex) -> Result<Dist<Simplex>>,
) -> Result<SimplicialDistribution> {
    let mut cache: BTreeMap<Simplex, Dist<Simplex>> = BTreeMap::new();
    let mut dists = Vec::new();
    for (n, level) in nb.base.tuples.iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for x in level {
            let d = match tuple_union(x) {
                None => Dist::delta(nb.total.index[n][&vec![None; n]]),
                Some(sigma) => {
                    if !cache.contains_key(&sigma) {
                        cache.insert(sigma.clone(), marginal(&sigma)?);
                    }
                    cache[&sigma].pushforward(|gamma| {
                        let t: NerveTuple = x
                            .iter()
                            .map(|s| s.as_ref().map(|s| f.transport(gamma, s)))
                            .collect();
                        nb.total.index[n][&t]
                    })
                }
            };
            row.push(d);
        }
        dists.push(row);
    }
    Ok(SimplicialDistribution { dists })
}

/// Reads the marginal over each base simplex `σ` off the degree-1
/// simplex `(σ)`.
pub fn simplicial_to_marginals(
    nb: &NerveBundle,
    p: &SimplicialDistribution,
) -> BTreeMap<Simplex, Dist<Simplex>> {
    nb.base.tuples[1]
        .iter()
        .enumerate()
        .filter_map(|(x, t)| {
            let sigma = t[0].clone()?;
            let d = p.dists[1][x].pushforward(|&e| {
                nb.total.tuples[1][e][0]
                    .clone()
                    .expect("lies over a simplex")
            });
            Some((sigma, d))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Vertex;

    fn path() -> SimplicialComplex {
        let s = |a: &str, b: &str| Simplex::from_names(&[a, b]).unwrap();
        SimplicialComplex::generated_by([s("a", "b"), s("b", "c")]).unwrap()
    }

    #[test]
    fn path_nerve_low_degrees() {
        let ns = nerve_space(&path(), 2).unwrap();
        assert_eq!(ns.set.names(0), &["()".to_string()]);
        assert_eq!(ns.set.count(1), 6);
        assert!(nerve_space(&path(), 0).is_err());
    }

    #[test]
    fn inner_face_merges_entries() {
        let ns = nerve_space(&path(), 2).unwrap();
        let a = Simplex::singleton(Vertex::new("a").unwrap());
        let b = Simplex::singleton(Vertex::new("b").unwrap());
        let x = ns
            .index_of(&vec![Some(a.clone()), Some(b.clone())])
            .unwrap();
        let d1 = ns.set.face(2, x, 1);
        assert_eq!(ns.tuple(1, d1), &vec![Some(a.union(&b))]);
        assert_eq!(ns.set.name(1, d1), "({a,b})");
    }

    #[test]
    fn apply_agrees_with_block_unions() {
        let ns = nerve_space(&path(), 3).unwrap();
        for n in 0..=3 {
            for x in 0..ns.set.count(n) {
                for m in 0..=3 {
                    for theta in super::super::monotone_sequences(m, n) {
                        let got = ns.set.apply(n, x, &theta);
                        assert_eq!(ns.tuple(m, got), &theta_tuple(ns.tuple(n, x), &theta));
                    }
                }
            }
        }
    }
}
