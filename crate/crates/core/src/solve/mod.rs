//! Empirical models and the contextuality decision procedure.
//!
//! A model is noncontextual when it is the image under `Θ` of a distribution
//! over global sections. The decision solves the exact feasibility problem
//! whose columns are sections and whose rows are normalization plus one row
//! per (context, outcome). Infeasibility comes with a Farkas vector.

pub mod lp;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

pub use lp::{lp_feasible, verify_certificate, Certificate, LpOutcome, LpProblem};

use crate::bundle::{element_simplex, to_event, BundleScenario};
use crate::complex::Simplex;
use crate::dist::{Dist, Rational};
use crate::error::{domain, Error, Result};
use crate::event::{
    global_sections, section_at, section_key, EventMorphism, EventScenario, GlobalSection,
};
use crate::report::ValidationReport;
use crate::sset::{
    affine_table_of_morphism, mu, sections, theta_simplicial, validate_simplicial_distribution,
    zeta_inverse, AffineTable, DetMorphism, MappingSpace, Section, SimplicialDistribution,
    SimplicialScenario,
};

/// Default cap on the number of enumerated global sections.
pub const DEFAULT_SECTION_CAP: usize = 1_000_000;

/// An empirical model on an event scenario: a distribution over `F(σ)`
/// (outcome positions) for every maximal simplex `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalModel {
    pub dists: BTreeMap<Simplex, Dist<usize>>,
}

/// An empirical model on a bundle scenario: a distribution over `f⁻¹(σ)`
/// for every maximal simplex `σ` of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleModel {
    pub dists: BTreeMap<Simplex, Dist<Simplex>>,
}

/// Validation result with the distribution derived on every simplex.
#[derive(Clone, Debug)]
pub struct EmpiricalReport {
    pub report: ValidationReport,
    /// Indexed by simplex position; `None` where derivation failed.
    pub faces: Vec<Option<Dist<usize>>>,
}

impl EmpiricalReport {
    pub fn is_ok(&self) -> bool {
        self.report.is_ok()
    }
}

/// Checks that `p` covers every maximal simplex with distributions over the
/// right outcome sets, and that the marginals on shared faces agree.
pub fn validate_empirical(f: &EventScenario, p: &EmpiricalModel) -> EmpiricalReport {
    let mut report = ValidationReport::new();
    let simplices = f.simplices();
    let mut faces: Vec<Option<Dist<usize>>> = vec![None; simplices.len()];
    let outcome_sets = (|| {
        for sigma in f.base().maximal() {
            let si = f.simplex_index(sigma).expect("maximal simplex");
            let Some(d) = p.dists.get(sigma) else {
                return Err(format!("no distribution on {{{}}}", sigma.key()));
            };
            if let Some(bad) = d.support().find(|&&o| o >= f.outcomes(si).len()) {
                return Err(format!(
                    "distribution on {{{}}} uses unknown outcome {bad}",
                    sigma.key()
                ));
            }
        }
        match p.dists.keys().find(|s| !f.base().maximal().contains(s)) {
            Some(s) => Err(format!("{{{}}} is not a maximal simplex", s.key())),
            None => Ok(()),
        }
    })();
    let shaped = outcome_sets.is_ok();
    report.record("outcome sets", outcome_sets);
    if !shaped {
        return EmpiricalReport { report, faces };
    }
    let mut owner: Vec<Option<&Simplex>> = vec![None; simplices.len()];
    let mut compat = Ok(());
    'outer: for (sigma, d) in &p.dists {
        let si = f.simplex_index(sigma).expect("maximal simplex");
        for (ti, tau) in simplices.iter().enumerate() {
            if !tau.is_subset(sigma) {
                continue;
            }
            let marginal = d.pushforward(|&o| f.restrict(si, ti, o));
            match &faces[ti] {
                None => {
                    faces[ti] = Some(marginal);
                    owner[ti] = Some(sigma);
                }
                Some(prev) if *prev != marginal => {
                    compat = Err(format!(
                        "marginals of {{{}}} and {{{}}} disagree on {{{}}}",
                        owner[ti].expect("owner").key(),
                        sigma.key(),
                        tau.key()
                    ));
                    break 'outer;
                }
                Some(_) => {}
            }
        }
    }
    report.record("compatibility", compat);
    EmpiricalReport { report, faces }
}

/// `Θ_F(Q)`: `p_σ` is the image of `Q` under evaluation at `σ`.
pub fn theta_event(
    f: &EventScenario,
    sections: &[GlobalSection],
    q: &Dist<usize>,
) -> Result<EmpiricalModel> {
    if q.support().any(|&s| s >= sections.len()) {
        return domain("distribution over sections refers to an unknown section");
    }
    let dists = f
        .base()
        .maximal()
        .iter()
        .map(|sigma| {
            let si = f.simplex_index(sigma).expect("maximal simplex");
            (
                sigma.clone(),
                q.pushforward(|&s| section_at(f, &sections[s], si)),
            )
        })
        .collect();
    Ok(EmpiricalModel { dists })
}

/// The deterministic model of one section.
pub fn deterministic_model(f: &EventScenario, section: &GlobalSection) -> EmpiricalModel {
    theta_event(f, std::slice::from_ref(section), &Dist::delta(0)).expect("one section")
}

/// Outcome of a contextuality check.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `Θ(Q) = p` for the witness `Q` over section positions.
    Noncontextual { witness: Dist<usize> },
    /// A Farkas vector for the decision problem.
    Contextual { certificate: Certificate },
}

impl Verdict {
    pub fn is_contextual(&self) -> bool {
        matches!(self, Verdict::Contextual { .. })
    }
}

/// A verdict with the problem it was decided on and the section labels.
#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub problem: LpProblem,
    pub section_keys: Vec<String>,
}

impl Decision {
    /// Re-checks the witness or certificate against the problem.
    pub fn verify(&self) -> bool {
        match &self.verdict {
            Verdict::Contextual { certificate } => verify_certificate(&self.problem, certificate),
            Verdict::Noncontextual { witness } => {
                let mut x = vec![Rational::zero(); self.problem.cols()];
                for (&s, w) in witness.iter() {
                    if s >= x.len() {
                        return false;
                    }
                    x[s] = w.clone();
                }
                self.problem.is_solution(&x)
            }
        }
    }

    /// The witness keyed by section label.
    pub fn keyed_witness(&self) -> Option<BTreeMap<String, Rational>> {
        match &self.verdict {
            Verdict::Noncontextual { witness } => Some(
                witness
                    .iter()
                    .map(|(&s, w)| (self.section_keys[s].clone(), w.clone()))
                    .collect(),
            ),
            Verdict::Contextual { .. } => None,
        }
    }
}

/// The decision problem: one column per section, a normalization row, and
/// for every context `c` and outcome `o < sizes[c]` the row
/// `Σ_{s(c) = o} Q(s) = p_c(o)`.
///
/// `columns[s][c]` is the outcome of section `s` at context `c`.
pub fn contextuality_problem(
    columns: &[Vec<usize>],
    targets: &[Dist<usize>],
    sizes: &[usize],
) -> Result<LpProblem> {
    if targets.len() != sizes.len() || columns.iter().any(|c| c.len() != sizes.len()) {
        return domain("sections, targets and context sizes disagree");
    }
    let cols = columns.len();
    let mut a = vec![vec![Rational::one(); cols]];
    let mut b = vec![Rational::one()];
    for (c, (target, &size)) in targets.iter().zip(sizes).enumerate() {
        for o in 0..size {
            a.push(
                columns
                    .iter()
                    .map(|s| {
                        if s[c] == o {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
            );
            b.push(target.weight(&o));
        }
    }
    LpProblem::new(a, b, cols)
}

/// Solves a decision problem and checks the result before returning it.
pub fn decide(problem: &LpProblem) -> Result<Verdict> {
    match lp_feasible(problem) {
        LpOutcome::Feasible(x) => {
            if !problem.is_solution(&x) {
                return Err(Error::Invalid(
                    "solver returned a point that is not a solution".into(),
                ));
            }
            let witness =
                Dist::from_weights(x.into_iter().enumerate().filter(|(_, w)| !w.is_zero()))?;
            Ok(Verdict::Noncontextual { witness })
        }
        LpOutcome::Infeasible(certificate) => {
            if !verify_certificate(problem, &certificate) {
                return Err(Error::Invalid(
                    "solver returned a certificate that does not verify".into(),
                ));
            }
            Ok(Verdict::Contextual { certificate })
        }
    }
}

/// Which simplices contribute rows to the event decision problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contexts {
    /// Maximal simplices only; faces follow by compatibility.
    Maximal,
    /// Every simplex, with marginals derived from the model.
    All,
}

/// The decision problem of an event model over the given sections.
pub fn event_problem(
    f: &EventScenario,
    p: &EmpiricalModel,
    sections: &[GlobalSection],
    contexts: Contexts,
) -> Result<LpProblem> {
    let checked = validate_empirical(f, p);
    if !checked.is_ok() {
        return Err(Error::Domain(format!(
            "invalid empirical model: {}",
            checked.report
        )));
    }
    let chosen: Vec<usize> = match contexts {
        Contexts::Maximal => f
            .base()
            .maximal()
            .iter()
            .map(|s| f.simplex_index(s).expect("maximal"))
            .collect(),
        Contexts::All => (0..f.simplices().len()).collect(),
    };
    let columns: Vec<Vec<usize>> = sections
        .iter()
        .map(|s| chosen.iter().map(|&si| section_at(f, s, si)).collect())
        .collect();
    let targets: Vec<Dist<usize>> = chosen
        .iter()
        .map(|&si| checked.faces[si].clone().expect("derived"))
        .collect();
    let sizes: Vec<usize> = chosen.iter().map(|&si| f.outcomes(si).len()).collect();
    contextuality_problem(&columns, &targets, &sizes)
}

/// Decides contextuality of an event model.
pub fn check_contextuality(f: &EventScenario, p: &EmpiricalModel, cap: usize) -> Result<Decision> {
    let secs = global_sections(f, cap)?;
    let problem = event_problem(f, p, &secs, Contexts::Maximal)?;
    let verdict = decide(&problem)?;
    let section_keys = secs.iter().map(|s| section_key(f, s)).collect();
    Ok(Decision {
        verdict,
        problem,
        section_keys,
    })
}

/// A bundle model in terms of `S(f)`, whose outcome labels are fiber keys.
pub fn bundle_model_to_event(fe: &EventScenario, p: &BundleModel) -> Result<EmpiricalModel> {
    let dists = p
        .dists
        .iter()
        .map(|(sigma, d)| {
            let si = fe.simplex_index(sigma).ok_or_else(|| {
                Error::Domain(format!("{{{}}} is not a base simplex", sigma.key()))
            })?;
            let mut weights = Vec::with_capacity(d.len());
            for (gamma, w) in d.iter() {
                let o = fe.outcome_index(si, &gamma.key()).ok_or_else(|| {
                    Error::Domain(format!(
                        "{{{}}} is not over {{{}}}",
                        gamma.key(),
                        sigma.key()
                    ))
                })?;
                weights.push((o, w.clone()));
            }
            Ok((sigma.clone(), Dist::from_weights(weights)?))
        })
        .collect::<Result<_>>()?;
    Ok(EmpiricalModel { dists })
}

/// An event model as a model on `El(F)`.
pub fn event_model_to_bundle(f: &EventScenario, p: &EmpiricalModel) -> BundleModel {
    let dists = p
        .dists
        .iter()
        .map(|(sigma, d)| {
            let si = f.simplex_index(sigma).expect("base simplex");
            (sigma.clone(), d.pushforward(|&o| element_simplex(f, si, o)))
        })
        .collect();
    BundleModel { dists }
}

/// Decides contextuality of a bundle model through `S(f)`.
pub fn check_bundle_contextuality(
    f: &BundleScenario,
    p: &BundleModel,
    cap: usize,
) -> Result<Decision> {
    let fe = to_event(f)?;
    check_contextuality(&fe, &bundle_model_to_event(&fe, p)?, cap)
}

/// Marginals of a bundle model on every simplex of the base.
pub fn bundle_marginals(
    f: &BundleScenario,
    p: &BundleModel,
) -> Result<BTreeMap<Simplex, Dist<Simplex>>> {
    let mut out: BTreeMap<Simplex, Dist<Simplex>> = BTreeMap::new();
    for (sigma, d) in &p.dists {
        for tau in sigma.subsets() {
            let m = d.pushforward(|g| f.face_transport(g, &tau).expect("face of a fiber simplex"));
            match out.get(&tau) {
                Some(prev) if *prev != m => {
                    return Err(Error::Domain(format!(
                        "marginals disagree on {{{}}}",
                        tau.key()
                    )));
                }
                _ => {
                    out.insert(tau, m);
                }
            }
        }
    }
    Ok(out)
}

/// The decision problem of a simplicial distribution: one row per
/// `x ∈ X_d` and `e ∈ f⁻¹(x)`, where `d` is the truncation level.
pub fn simplicial_problem(
    f: &SimplicialScenario,
    p: &SimplicialDistribution,
    secs: &[Section],
) -> Result<LpProblem> {
    let report = validate_simplicial_distribution(f, p);
    if !report.is_ok() {
        return Err(Error::Domain(format!(
            "invalid simplicial distribution: {report}"
        )));
    }
    let d = f.bound();
    let xs = f.base();
    let position = |x: usize, e: usize| f.fiber(d, x).binary_search(&e).expect("fiber element");
    let columns: Vec<Vec<usize>> = secs
        .iter()
        .map(|s| (0..xs.count(d)).map(|x| position(x, s[d][x])).collect())
        .collect();
    let targets: Vec<Dist<usize>> = (0..xs.count(d))
        .map(|x| p.dists[d][x].pushforward(|&e| position(x, e)))
        .collect();
    let sizes: Vec<usize> = (0..xs.count(d)).map(|x| f.fiber(d, x).len()).collect();
    contextuality_problem(&columns, &targets, &sizes)
}

/// Decides contextuality of a simplicial distribution.
pub fn check_simplicial_contextuality(
    f: &SimplicialScenario,
    p: &SimplicialDistribution,
    cap: usize,
) -> Result<(Decision, Vec<Section>)> {
    let secs = sections(f, cap)?;
    let problem = simplicial_problem(f, p, &secs)?;
    let verdict = decide(&problem)?;
    let section_keys = secs
        .iter()
        .map(|s| {
            (0..f.base().count(0))
                .map(|x| format!("{}={}", f.base().name(0, x), f.total().name(0, s[0][x])))
                .chain((1..=f.bound()).flat_map(|n| {
                    (0..f.base().count(n))
                        .filter(move |&x| !f.base().is_degenerate(n, x))
                        .map(move |x| {
                            format!("{}={}", f.base().name(n, x), f.total().name(n, s[n][x]))
                        })
                }))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    Ok((
        Decision {
            verdict,
            problem,
            section_keys,
        },
        secs,
    ))
}

/// `q_σ` is the image of `p_{π̄(σ)}` under `α_σ`, for maximal `σ` of the
/// target base.
pub fn push_empirical(m: &EventMorphism, p: &EmpiricalModel) -> Result<EmpiricalModel> {
    let (f, g) = (m.source(), m.target());
    let checked = validate_empirical(f, p);
    if !checked.is_ok() {
        return Err(Error::Domain(format!(
            "invalid empirical model: {}",
            checked.report
        )));
    }
    let dists = g
        .base()
        .maximal()
        .iter()
        .map(|sigma| {
            let si = g.simplex_index(sigma).expect("maximal simplex");
            let from = f
                .simplex_index(&m.relation().induce(sigma))
                .expect("relation lands in the base");
            let component = m.component(si);
            let source = checked.faces[from].as_ref().expect("derived");
            (sigma.clone(), source.pushforward(|&o| component[o]))
        })
        .collect();
    Ok(EmpiricalModel { dists })
}

/// A noncontextual distribution on `Map(f,g)` as weighted morphisms
/// `f → g`, checked against `μ(p)`.
pub fn decompose_noncontextual(
    space: &MappingSpace,
    p: &SimplicialDistribution,
    cap: usize,
) -> Result<Vec<(Rational, DetMorphism)>> {
    let (decision, secs) = check_simplicial_contextuality(&space.scenario, p, cap)?;
    let witness = match decision.verdict {
        Verdict::Contextual { certificate } => {
            return Err(Error::Contextual(Box::new(certificate)))
        }
        Verdict::Noncontextual { witness } => witness,
    };
    if theta_simplicial(&secs, &witness)? != *p {
        return Err(Error::Invalid(
            "witness does not reproduce the distribution".into(),
        ));
    }
    let parts = witness
        .iter()
        .map(|(&s, w)| Ok((w.clone(), zeta_inverse(space, &secs[s])?)))
        .collect::<Result<Vec<_>>>()?;
    let induced = AffineTable::mixture(
        &parts
            .iter()
            .map(|(w, m)| (w.clone(), affine_table_of_morphism(space.target(), m)))
            .collect::<Vec<_>>(),
    )?;
    if induced != mu(space, p)? {
        return Err(Error::Invalid("decomposition does not induce μ(p)".into()));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::dist::ratio;
    use crate::event::{event_presheaf, StandardScenario};

    fn s(names: &[&str]) -> Simplex {
        Simplex::from_names(names).unwrap()
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

    fn pr_box(f: &EventScenario) -> EmpiricalModel {
        let dists = f
            .base()
            .maximal()
            .iter()
            .map(|sigma| {
                let si = f.simplex_index(sigma).unwrap();
                let anti = sigma.key() == "a1,b1";
                let outs: Vec<usize> = (0..4)
                    .filter(|&o| {
                        let t = f.vertex_tuple(si, o);
                        (t[0] == t[1]) != anti
                    })
                    .collect();
                (sigma.clone(), Dist::uniform(outs).unwrap())
            })
            .collect();
        EmpiricalModel { dists }
    }

    #[test]
    fn pr_box_is_contextual_with_verified_certificate() {
        let f = chsh();
        let d = check_contextuality(&f, &pr_box(&f), 100).unwrap();
        assert!(d.verdict.is_contextual());
        assert!(d.verify());
    }

    #[test]
    fn uniform_section_mixture_is_uniform_everywhere() {
        let f = chsh();
        let secs = global_sections(&f, 100).unwrap();
        let p = theta_event(&f, &secs, &Dist::uniform(0..secs.len()).unwrap()).unwrap();
        for d in p.dists.values() {
            assert_eq!(d, &Dist::uniform(0..4).unwrap());
        }
        let dec = check_contextuality(&f, &p, 100).unwrap();
        assert!(!dec.verdict.is_contextual());
        assert!(dec.verify());
    }

    #[test]
    fn mismatched_marginal_is_reported() {
        let f = chsh();
        let mut p = theta_event(&f, &global_sections(&f, 100).unwrap(), &Dist::delta(0)).unwrap();
        let key = s(&["a0", "b0"]);
        let si = f.simplex_index(&key).unwrap();
        let flipped = f.lift(si, &[1, 0]).unwrap();
        p.dists.insert(key, Dist::delta(flipped));
        let r = validate_empirical(&f, &p);
        assert!(!r.is_ok());
        assert!(r.report.check("compatibility").unwrap().witness.is_some());
        assert!(check_contextuality(&f, &p, 100).is_err());
    }

    #[test]
    fn full_and_maximal_problems_agree() {
        let f = chsh();
        let secs = global_sections(&f, 100).unwrap();
        let p = pr_box(&f);
        let a = decide(&event_problem(&f, &p, &secs, Contexts::Maximal).unwrap()).unwrap();
        let b = decide(&event_problem(&f, &p, &secs, Contexts::All).unwrap()).unwrap();
        assert_eq!(a.is_contextual(), b.is_contextual());
    }

    #[test]
    fn no_sections_means_contextual() {
        let problem = contextuality_problem(&[], &[Dist::delta(0)], &[1]).unwrap();
        let v = decide(&problem).unwrap();
        assert!(v.is_contextual());
    }

    #[test]
    fn identity_push_and_bundle_agreement() {
        let f = chsh();
        let p = pr_box(&f);
        assert_eq!(push_empirical(&EventMorphism::identity(&f), &p).unwrap(), p);
        let el = crate::bundle::elements(&f);
        let bp = event_model_to_bundle(&f, &p);
        assert!(check_bundle_contextuality(&el, &bp, 100)
            .unwrap()
            .verdict
            .is_contextual());
        let half = ratio(1, 2);
        assert_eq!(
            bp.dists.values().next().unwrap().iter().next().unwrap().1,
            &half
        );
    }
}
