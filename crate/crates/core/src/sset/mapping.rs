//! Deterministic morphisms, the simplicial mapping scenario `Map(f,g)`,
//! the correspondence `ζ` with sections, and the convex map `μ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{
    lifts, monotone_sequences, sequence_name, Pullback, SSetMap, Section, SimplicialDistribution,
    SimplicialScenario, StochMorphism, TruncatedSSet,
};
use crate::dist::{Dist, Rational};
use crate::error::{domain, Error, Result};

/// A deterministic morphism `(π, α): f → g` with `π: Y → X` and
/// `α: π*(E) → F` over `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetMorphism {
    pub pi: Vec<Vec<usize>>,
    pub pullback: Pullback,
    /// `alpha[n][k]` for the `k`-th pair of the pullback.
    pub alpha: Vec<Vec<usize>>,
}

impl DetMorphism {
    /// `α(e, y)`.
    pub fn alpha_at(&self, n: usize, e: usize, y: usize) -> Option<usize> {
        self.pullback.index_of(n, e, y).map(|k| self.alpha[n][k])
    }

    /// The image under the embedding into stochastic morphisms.
    pub fn to_stochastic(
        &self,
        f: &SimplicialScenario,
        g: &SimplicialScenario,
    ) -> Result<StochMorphism> {
        let pi = SSetMap::new(g.base().clone(), f.base().clone(), self.pi.clone())?;
        StochMorphism::deterministic(f.clone(), g.clone(), pi, &self.alpha)
    }
}

/// All deterministic morphisms `f → g`: maps `π: Y → X` first, then lifts
/// `α` of each pullback through `g`.
pub fn morphisms(
    f: &SimplicialScenario,
    g: &SimplicialScenario,
    cap: usize,
) -> Result<Vec<DetMorphism>> {
    if f.bound() != g.bound() {
        return domain("scenarios need equal truncation levels");
    }
    let (x, y) = (f.base(), g.base());
    let pis = lifts(y, x, &|n, _| (0..x.count(n)).collect(), cap)?;
    let mut out = Vec::new();
    for pi in pis {
        let pullback = Pullback::new(f, y, &pi);
        let alphas = lifts(
            &pullback.set,
            g.total(),
            &|n, k| g.fiber(n, pullback.pairs[n][k].1).to_vec(),
            cap,
        )?;
        for alpha in alphas {
            if out.len() >= cap {
                return Err(Error::Resource(format!("more than {cap} morphisms")));
            }
            out.push(DetMorphism {
                pi: pi.clone(),
                pullback: pullback.clone(),
                alpha,
            });
        }
    }
    Ok(out)
}

/// `|catsScen(f, g)|`.
pub fn count_morphisms(
    f: &SimplicialScenario,
    g: &SimplicialScenario,
    cap: usize,
) -> Result<usize> {
    Ok(morphisms(f, g, cap)?.len())
}

/// A simplex `(y; x, α)` of `E(f,g)`: `α: x*(E) → y*(F)` over `Δⁿ`, stored
/// as `alpha[m][k] ∈ F_m` for the `k`-th pair of `x*(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MapSimplex {
    pub y: usize,
    pub x: usize,
    pub alpha: Vec<Vec<usize>>,
}

/// `Map(f,g): E(f,g) → Y` with the pullbacks used to build it.
#[derive(Clone, Debug)]
pub struct MappingSpace {
    pub scenario: SimplicialScenario,
    pub simplices: Vec<Vec<MapSimplex>>,
    source: SimplicialScenario,
    target: SimplicialScenario,
    /// `Δⁿ` for each degree `n`.
    simplex_sets: Vec<Arc<TruncatedSSet>>,
    /// `x*(E)` for `x ∈ X_n`.
    source_pullbacks: Vec<Vec<Pullback>>,
    index: Vec<HashMap<MapSimplex, usize>>,
}

/// `x̂: Δⁿ → X` as degree tables.
fn characteristic(
    set: &TruncatedSSet,
    delta: &TruncatedSSet,
    n: usize,
    x: usize,
) -> Vec<Vec<usize>> {
    (0..=delta.bound())
        .map(|m| {
            monotone_sequences(m, n)
                .iter()
                .map(|t| set.apply(n, x, t))
                .collect()
        })
        .collect()
}

fn theta_of(delta: &TruncatedSSet, m: usize, idx: usize) -> Vec<usize> {
    delta
        .name(m, idx)
        .chars()
        .map(|c| c.to_digit(10).expect("digit") as usize)
        .collect()
}

fn identity_index(delta: &TruncatedSSet, n: usize) -> usize {
    delta
        .index_of(n, &sequence_name(&(0..=n).collect::<Vec<_>>()))
        .expect("identity simplex")
}

/// Builds `Map(f,g)` degree by degree. `cap` bounds the number of simplices.
pub fn mapping_simplicial(
    f: &SimplicialScenario,
    g: &SimplicialScenario,
    cap: usize,
) -> Result<MappingSpace> {
    let d = f.bound();
    if g.bound() != d {
        return domain("scenarios need equal truncation levels");
    }
    if d > 9 {
        return domain("mapping spaces support truncation up to 9");
    }
    let (x_set, y_set) = (f.base(), g.base());
    let simplex_sets: Vec<Arc<TruncatedSSet>> = (0..=d)
        .map(|n| TruncatedSSet::standard_simplex(n, d).map(Arc::new))
        .collect::<Result<_>>()?;
    let mut source_pullbacks = Vec::with_capacity(d + 1);
    let mut simplices: Vec<Vec<MapSimplex>> = Vec::with_capacity(d + 1);
    let mut total = 0usize;
    for n in 0..=d {
        let delta = &simplex_sets[n];
        let pbs: Vec<Pullback> = (0..x_set.count(n))
            .map(|x| Pullback::new(f, delta, &characteristic(x_set, delta, n, x)))
            .collect();
        let mut level = Vec::new();
        for y in 0..y_set.count(n) {
            let yhat = characteristic(y_set, delta, n, y);
            for (x, pb) in pbs.iter().enumerate() {
                let candidates =
                    |m: usize, k: usize| g.fiber(m, yhat[m][pb.pairs[m][k].1]).to_vec();
                for alpha in lifts(&pb.set, g.total(), &candidates, cap)? {
                    total += 1;
                    if total > cap {
                        return Err(Error::Resource(format!(
                            "Map(f,g) has more than {cap} simplices"
                        )));
                    }
                    level.push(MapSimplex { y, x, alpha });
                }
            }
        }
        source_pullbacks.push(pbs);
        simplices.push(level);
    }
    let index: Vec<HashMap<MapSimplex, usize>> = simplices
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect()
        })
        .collect();
    let mut space = MappingSpace {
        scenario: SimplicialScenario::unit(d),
        simplices,
        source: f.clone(),
        target: g.clone(),
        simplex_sets,
        source_pullbacks,
        index,
    };
    let names = space
        .simplices
        .iter()
        .enumerate()
        .map(|(n, level)| level.iter().map(|s| space.simplex_name(n, s)).collect())
        .collect();
    let mut faces = Vec::with_capacity(d + 1);
    let mut degens = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut fl = Vec::with_capacity(space.simplices[n].len());
        let mut dl = Vec::with_capacity(space.simplices[n].len());
        for s in &space.simplices[n] {
            fl.push(if n == 0 {
                vec![]
            } else {
                (0..=n)
                    .map(|i| {
                        space.lookup(
                            n - 1,
                            &space.reindex(n, s, n - 1, |v| if v >= i { v + 1 } else { v }),
                        )
                    })
                    .collect::<Result<_>>()?
            });
            dl.push(if n < d {
                (0..=n)
                    .map(|j| {
                        space.lookup(
                            n + 1,
                            &space.reindex(n, s, n + 1, |v| if v > j { v - 1 } else { v }),
                        )
                    })
                    .collect::<Result<_>>()?
            } else {
                vec![]
            });
        }
        faces.push(fl);
        degens.push(dl);
    }
    let total_set = Arc::new(TruncatedSSet::new(d, names, faces, degens)?);
    let tables = space
        .simplices
        .iter()
        .map(|level| level.iter().map(|s| s.y).collect())
        .collect();
    space.scenario = SimplicialScenario::new(SSetMap::new(total_set, y_set.clone(), tables)?);
    Ok(space)
}

impl MappingSpace {
    pub fn source(&self) -> &SimplicialScenario {
        &self.source
    }

    pub fn target(&self) -> &SimplicialScenario {
        &self.target
    }

    pub fn index_of(&self, n: usize, s: &MapSimplex) -> Option<usize> {
        self.index[n].get(s).copied()
    }

    /// `x*(E)` for `x ∈ X_n`.
    pub fn source_pullback(&self, n: usize, x: usize) -> &Pullback {
        &self.source_pullbacks[n][x]
    }

    fn lookup(&self, n: usize, s: &MapSimplex) -> Result<usize> {
        self.index_of(n, s)
            .ok_or_else(|| Error::Invalid("Map(f,g) is not closed under a structure map".into()))
    }

    fn simplex_name(&self, n: usize, s: &MapSimplex) -> String {
        let e = self.target.total();
        let alpha: Vec<String> = s
            .alpha
            .iter()
            .enumerate()
            .map(|(m, level)| {
                level
                    .iter()
                    .map(|&v| e.name(m, v).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!(
            "<{}|{}|{}>",
            self.target.base().name(n, s.y),
            self.source.base().name(n, s.x),
            alpha.join("/")
        )
    }

    /// Transports `(y; x, α)` along a monotone `φ: [k] → [n]` given as
    /// `v ↦ φ(v)` on values: `α′(e, ψ) = α(e, φ ∘ ψ)`.
    fn reindex(
        &self,
        n: usize,
        s: &MapSimplex,
        k: usize,
        phi: impl Fn(usize) -> usize,
    ) -> MapSimplex {
        let seq: Vec<usize> = (0..=k).map(&phi).collect();
        let (xs, ys) = (self.source.base(), self.target.base());
        let (y, x) = (ys.apply(n, s.y, &seq), xs.apply(n, s.x, &seq));
        let (from, to) = (&self.simplex_sets[n], &self.simplex_sets[k]);
        let (old, new) = (&self.source_pullbacks[n][s.x], &self.source_pullbacks[k][x]);
        let alpha = new
            .pairs
            .iter()
            .enumerate()
            .map(|(m, level)| {
                level
                    .iter()
                    .map(|&(e, psi)| {
                        let composite: Vec<usize> =
                            theta_of(to, m, psi).into_iter().map(&phi).collect();
                        let t = from
                            .index_of(m, &sequence_name(&composite))
                            .expect("monotone");
                        s.alpha[m][old.index_of(m, e, t).expect("pullback pair")]
                    })
                    .collect()
            })
            .collect();
        MapSimplex { y, x, alpha }
    }

    /// `α(−, id)`: the top-fiber map `f⁻¹(x) → g⁻¹(y)` of a degree-`n` simplex.
    pub fn top_map(&self, n: usize, s: &MapSimplex) -> BTreeMap<usize, usize> {
        let id = identity_index(&self.simplex_sets[n], n);
        let pb = &self.source_pullbacks[n][s.x];
        self.source
            .fiber(n, s.x)
            .iter()
            .map(|&e| (e, s.alpha[n][pb.index_of(n, e, id).expect("pullback pair")]))
            .collect()
    }
}

/// `ζ`: a morphism goes to the section `y ↦ (y; π(y), α_y)` with
/// `α_y(e, θ) = α(e, θ*y)`.
pub fn zeta(space: &MappingSpace, m: &DetMorphism) -> Result<Section> {
    let ys = space.target.base();
    let d = ys.bound();
    let mut section = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let delta = &space.simplex_sets[n];
        let mut row = Vec::with_capacity(ys.count(n));
        for y in 0..ys.count(n) {
            let x = *m
                .pi
                .get(n)
                .and_then(|t| t.get(y))
                .ok_or_else(|| Error::Domain("π has the wrong shape".into()))?;
            let pb = &space.source_pullbacks[n][x];
            let alpha = pb
                .pairs
                .iter()
                .enumerate()
                .map(|(k, level)| {
                    level
                        .iter()
                        .map(|&(e, t)| {
                            let ty = ys.apply(n, y, &theta_of(delta, k, t));
                            m.alpha_at(k, e, ty).ok_or_else(|| {
                                Error::Domain("α is undefined on a pullback pair".into())
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            row.push(space.lookup(n, &MapSimplex { y, x, alpha })?);
        }
        section.push(row);
    }
    Ok(section)
}

/// `ζ⁻¹`: `π(y)` is the `x`-component of `s(y)` and `α(e, y)` is its
/// value at `θ = id`.
pub fn zeta_inverse(space: &MappingSpace, section: &Section) -> Result<DetMorphism> {
    let ys = space.target.base();
    let pi: Vec<Vec<usize>> = section
        .iter()
        .enumerate()
        .map(|(n, level)| level.iter().map(|&s| space.simplices[n][s].x).collect())
        .collect();
    if pi.len() != ys.bound() + 1 {
        return domain("section has the wrong shape");
    }
    let pullback = Pullback::new(&space.source, ys, &pi);
    let alpha = pullback
        .pairs
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|&(e, y)| space.top_map(n, &space.simplices[n][section[n][y]])[&e])
                .collect()
        })
        .collect();
    Ok(DetMorphism {
        pi,
        pullback,
        alpha,
    })
}

/// The inclusion `catsScen(f ⊗ g, h) → catsScen(f, Map(g,h))`:
/// `(π′, π″), α ↦ (π′, β)` with `β(e,z) = (z; π″(z), β′)` and
/// `β′(ẽ, θ) = α((θ*e, ẽ), θ*z)`.
pub fn tensor_inclusion(
    f: &SimplicialScenario,
    space: &MappingSpace,
    fg: &SimplicialScenario,
    m: &DetMorphism,
) -> Result<DetMorphism> {
    let (xs, ys, zs) = (f.base(), space.source.base(), space.target.base());
    let (e_set, f_set) = (f.total(), space.source.total());
    let d = zs.bound();
    let split = |n: usize, p: usize| (p / ys.count(n), p % ys.count(n));
    if fg.base().count(0) != xs.count(0) * ys.count(0) {
        return domain("the tensor scenario does not match f and g");
    }
    let pi1: Vec<Vec<usize>> =
        m.pi.iter()
            .enumerate()
            .map(|(n, t)| t.iter().map(|&p| split(n, p).0).collect())
            .collect();
    let pullback = Pullback::new(f, zs, &pi1);
    let mut alpha = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let delta = &space.simplex_sets[n];
        let mut row = Vec::with_capacity(pullback.pairs[n].len());
        for &(e, z) in &pullback.pairs[n] {
            let y = split(n, m.pi[n][z]).1;
            let pb = &space.source_pullbacks[n][y];
            let beta = pb
                .pairs
                .iter()
                .enumerate()
                .map(|(k, level)| {
                    level
                        .iter()
                        .map(|&(et, t)| {
                            let theta = theta_of(delta, k, t);
                            let (te, tz) = (e_set.apply(n, e, &theta), zs.apply(n, z, &theta));
                            m.alpha_at(k, te * f_set.count(k) + et, tz).ok_or_else(|| {
                                Error::Domain("α is undefined on a pullback pair".into())
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            row.push(space.lookup(
                n,
                &MapSimplex {
                    y: z,
                    x: y,
                    alpha: beta,
                },
            )?);
        }
        alpha.push(row);
    }
    Ok(DetMorphism {
        pi: pi1,
        pullback,
        alpha,
    })
}

/// An affine map `sDist(f) → sDist(g)` of the form
/// `r(y)(e′) = Σ_{(x,e)} q(x)(e) · c[n][y][(x,e)][e′]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTable {
    pub coefficients: Vec<Vec<BTreeMap<(usize, usize), BTreeMap<usize, Rational>>>>,
}

impl AffineTable {
    fn add(&mut self, n: usize, y: usize, x: usize, e: usize, target: usize, w: &Rational) {
        let slot = self.coefficients[n][y]
            .entry((x, e))
            .or_default()
            .entry(target)
            .or_insert_with(Rational::zero);
        *slot += w;
    }

    fn empty(g: &SimplicialScenario) -> Self {
        let ys = g.base();
        AffineTable {
            coefficients: (0..=ys.bound())
                .map(|n| vec![BTreeMap::new(); ys.count(n)])
                .collect(),
        }
    }

    /// Evaluates the map on a distribution.
    pub fn apply(&self, q: &SimplicialDistribution) -> Result<SimplicialDistribution> {
        let dists = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, level)| {
                level
                    .iter()
                    .map(|row| {
                        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                        for (&(x, e), targets) in row {
                            let w = q.dists[n][x].weight(&e);
                            if w.is_zero() {
                                continue;
                            }
                            for (&t, c) in targets {
                                *acc.entry(t).or_insert_with(Rational::zero) += &w * c;
                            }
                        }
                        Dist::from_weights(acc.into_iter().filter(|(_, w)| !w.is_zero()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplicialDistribution { dists })
    }

    /// `Σ λᵢ Tᵢ`.
    pub fn mixture(parts: &[(Rational, AffineTable)]) -> Result<AffineTable> {
        let first = &parts
            .first()
            .ok_or_else(|| Error::Domain("empty mixture".into()))?
            .1;
        let mut out = AffineTable {
            coefficients: first
                .coefficients
                .iter()
                .map(|level| vec![BTreeMap::new(); level.len()])
                .collect(),
        };
        for (w, t) in parts {
            for (n, level) in t.coefficients.iter().enumerate() {
                for (y, row) in level.iter().enumerate() {
                    for (&(x, e), targets) in row {
                        for (&v, c) in targets {
                            out.add(n, y, x, e, v, &(w * c));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The table of the map induced by a deterministic morphism: `(π(y), e)`
/// goes to `α(e, y)` with coefficient 1.
pub fn affine_table_of_morphism(g: &SimplicialScenario, m: &DetMorphism) -> AffineTable {
    let mut table = AffineTable::empty(g);
    for (n, level) in m.pullback.pairs.iter().enumerate() {
        for (k, &(e, y)) in level.iter().enumerate() {
            table.add(n, y, m.pi[n][y], e, m.alpha[n][k], &Rational::one());
        }
    }
    table
}

/// `μ(p)`: `r(y) = Σ_{(x,α)} p(y)(x,α) · α_*(q(x))` with `α` the top-fiber map.
pub fn mu(space: &MappingSpace, p: &SimplicialDistribution) -> Result<AffineTable> {
    let report = super::validate_simplicial_distribution(&space.scenario, p);
    if !report.is_ok() {
        return Err(Error::Domain(format!(
            "not a simplicial distribution on Map(f,g): {report}"
        )));
    }
    let mut table = AffineTable::empty(&space.target);
    for (n, level) in p.dists.iter().enumerate() {
        for (y, d) in level.iter().enumerate() {
            for (&s, w) in d.iter() {
                let simplex = &space.simplices[n][s];
                for (e, v) in space.top_map(n, simplex) {
                    table.add(n, y, simplex.x, e, v, w);
                }
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::super::{sections, theta_simplicial};
    use super::*;
    use crate::dist::ratio;

    fn discrete_scenario(total: &[&str], base: &[&str], map: &[usize]) -> SimplicialScenario {
        let e = Arc::new(TruncatedSSet::discrete(total, 0));
        let x = Arc::new(TruncatedSSet::discrete(base, 0));
        SimplicialScenario::new(SSetMap::new(e, x, vec![map.to_vec()]).unwrap())
    }

    fn counting_instance() -> (SimplicialScenario, SimplicialScenario, SimplicialScenario) {
        let f = discrete_scenario(&["e1", "e2"], &["x"], &[0, 0]);
        let g = discrete_scenario(&["s", "t1", "t2"], &["y1", "y2"], &[0, 1, 1]);
        let h = discrete_scenario(&["u1", "u2"], &["z"], &[0, 0]);
        (f, g, h)
    }

    #[test]
    fn set_level_counts() {
        let (f, g, h) = counting_instance();
        let fg = f.tensor(&g).unwrap();
        assert_eq!(count_morphisms(&fg, &h, 1000).unwrap(), 20);
        let map = mapping_simplicial(&g, &h, 1000).unwrap();
        assert_eq!(map.scenario.total().count(0), 6);
        assert_eq!(count_morphisms(&f, &map.scenario, 1000).unwrap(), 36);
    }

    #[test]
    fn tensor_inclusion_is_injective() {
        let (f, g, h) = counting_instance();
        let fg = f.tensor(&g).unwrap();
        let map = mapping_simplicial(&g, &h, 1000).unwrap();
        let mut images: Vec<DetMorphism> = morphisms(&fg, &h, 1000)
            .unwrap()
            .iter()
            .map(|m| tensor_inclusion(&f, &map, &fg, m).unwrap())
            .collect();
        images.sort_by(|a, b| (&a.pi, &a.alpha).cmp(&(&b.pi, &b.alpha)));
        images.dedup();
        assert_eq!(images.len(), 20);
    }

    fn interval_scenario() -> SimplicialScenario {
        let base = Arc::new(TruncatedSSet::standard_simplex(1, 1).unwrap());
        SimplicialScenario::product_with(base, &["0", "1"]).unwrap()
    }

    #[test]
    fn zeta_round_trip() {
        let f = interval_scenario();
        let map = mapping_simplicial(&f, &f, 100_000).unwrap();
        let ms = morphisms(&f, &f, 100_000).unwrap();
        let secs = sections(&map.scenario, 100_000).unwrap();
        assert_eq!(ms.len(), secs.len());
        for m in &ms {
            let s = zeta(&map, m).unwrap();
            assert_eq!(&zeta_inverse(&map, &s).unwrap(), m);
        }
    }

    #[test]
    fn mu_of_section_delta_is_induced_map() {
        let f = interval_scenario();
        let map = mapping_simplicial(&f, &f, 100_000).unwrap();
        let ms = morphisms(&f, &f, 100_000).unwrap();
        let s0 = zeta(&map, &ms[0]).unwrap();
        let s1 = zeta(&map, &ms[ms.len() - 1]).unwrap();
        let q = theta_simplicial(&[s0, s1], &Dist::uniform([0, 1]).unwrap()).unwrap();
        let want = AffineTable::mixture(&[
            (ratio(1, 2), affine_table_of_morphism(&f, &ms[0])),
            (ratio(1, 2), affine_table_of_morphism(&f, &ms[ms.len() - 1])),
        ])
        .unwrap();
        assert_eq!(mu(&map, &q).unwrap(), want);
    }
}
