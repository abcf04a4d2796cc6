//! `ctx`: load, validate, compose and decide scenarios from JSON files.
//!
//! Exit codes: 0 on success, 1 on validation failure or bad input, 2 when
//! `check` or `decompose` finds a contextual model, 3 when an enumeration
//! exceeds `--cap`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ctx_core::bundle::{
    elements, elements_round_trip_iso, event_round_trip_iso, mapping_bundle_scenario, to_event,
    BundleScenario,
};
use ctx_core::complex::nerve_complex;
use ctx_core::event::{
    global_sections, mapping_event_scenario, section_key, tensor_event, EventScenario,
    DEFAULT_FUNCTION_CAP,
};
use ctx_core::io::{
    bundle_parts_from_json, bundle_to_json, complex_from_json, complex_to_json, decision_from_json,
    decision_to_json, event_morphism_from_json, event_tables_from_json, event_to_json,
    model_from_json, model_to_json, parse_json, scenario_from_json, scenario_to_json,
    sdist_from_json, sdist_to_json, simplicial_to_json, standard_from_json,
    stoch_morphism_from_json, stoch_morphism_to_json, Scenario,
};
use ctx_core::laws::{run_suite, Suite};
use ctx_core::report::ValidationReport;
use ctx_core::solve::{
    bundle_marginals, check_contextuality, check_simplicial_contextuality, decompose_noncontextual,
    event_model_to_bundle, push_empirical, validate_empirical, Decision, DEFAULT_SECTION_CAP,
};
use ctx_core::sset::{
    empirical_to_simplicial, mapping_simplicial, nerve_bundle, push_stochastic, sections,
    validate_simplicial_distribution, SimplicialScenario,
};
use ctx_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "ctx",
    version,
    about = "Contextuality of event, bundle and simplicial scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Bound on enumerated sections, morphisms or functions.
    #[arg(long, global = true, default_value_t = DEFAULT_SECTION_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Event,
    Bundle,
    Simplicial,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Event,
    Bundle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Gluing,
    Monad,
    Tensor,
    Equivalence,
    Mapping,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Gluing => Suite::Gluing,
            SuiteArg::Monad => Suite::Monad,
            SuiteArg::Tensor => Suite::Tensor,
            SuiteArg::Equivalence => Suite::Equivalence,
            SuiteArg::Mapping => Suite::Mapping,
        }
    }
}

/// A scenario given positionally or with `--scenario`.
#[derive(clap::Args, Debug)]
struct ScenarioArg {
    /// Scenario file.
    #[arg(value_name = "SCENARIO", conflicts_with = "scenario")]
    file: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    scenario: Option<PathBuf>,
}

impl ScenarioArg {
    fn path(&self) -> Result<&Path> {
        self.file
            .as_deref()
            .or(self.scenario.as_deref())
            .ok_or_else(|| Error::Parse("a scenario file is required".into()))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a scenario against its axioms, and optionally a model on it.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Convert between event and bundle scenarios.
    Convert {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, value_enum)]
        to: Target,
        /// Also emit the round-trip isomorphism.
        #[arg(long)]
        witness: bool,
    },
    /// Tensor product of two scenarios of the same kind.
    Tensor { left: PathBuf, right: PathBuf },
    /// Enumerate global sections.
    Sections {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
    /// The nerve complex of a simplicial complex.
    NerveComplex { complex: PathBuf },
    /// The nerve of a bundle (or event) scenario as a simplicial scenario.
    Nerve {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 2)]
        truncate: usize,
        /// Transfer this empirical model to the nerve.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// The mapping scenario of two scenarios.
    Map {
        #[arg(value_enum)]
        kind: Kind,
        source: PathBuf,
        target: PathBuf,
    },
    /// Push a model forward along a morphism.
    Push {
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Decide contextuality of a model; exits with 2 when contextual.
    Check {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        model: PathBuf,
    },
    /// Decompose a noncontextual distribution on Map(f,g) into morphisms.
    Decompose {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Re-check the witness or certificate in a verdict file.
    VerifyCertificate { verdict: PathBuf },
    /// Run seeded law suites.
    Laws {
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A result with the exit code it should produce.
struct Output {
    value: Value,
    code: u8,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output { value, code: 0 }
    }

    fn with_code(value: Value, ok: bool) -> Self {
        Output {
            value,
            code: if ok { 0 } else { 1 },
        }
    }
}

fn read(path: &Path) -> Result<Value> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Scenario> {
    scenario_from_json(&read(path)?)
}

fn event_of(s: Scenario) -> Result<EventScenario> {
    match s {
        Scenario::Event(f) => Ok(f),
        Scenario::Bundle(b) => to_event(&b),
        Scenario::Simplicial(_) => {
            Err(Error::Domain("expected an event or bundle scenario".into()))
        }
    }
}

fn bundle_of(s: Scenario) -> Result<BundleScenario> {
    match s {
        Scenario::Event(f) => Ok(elements(&f)),
        Scenario::Bundle(b) => Ok(b),
        Scenario::Simplicial(_) => {
            Err(Error::Domain("expected an event or bundle scenario".into()))
        }
    }
}

fn simplicial_of(s: Scenario) -> Result<SimplicialScenario> {
    match s {
        Scenario::Simplicial(f) => Ok(f),
        other => Err(Error::Domain(format!(
            "expected a simplicial scenario, got {}",
            other.kind()
        ))),
    }
}

fn report_json(r: &ValidationReport) -> Value {
    Value::Array(
        r.checks
            .iter()
            .map(|c| json!({ "check": c.name, "passed": c.passed, "witness": c.witness }))
            .collect(),
    )
}

fn validate(path: &Path, model: Option<&Path>) -> Result<Output> {
    let v = read(path)?;
    let kind = v.get("kind").and_then(Value::as_str).unwrap_or_default();
    let report = match kind {
        "event" => {
            let (base, tables) = event_tables_from_json(&v)?;
            EventScenario::validate_tables(&base, &tables)?
        }
        "bundle" => {
            let (total, base, map) = bundle_parts_from_json(&v)?;
            BundleScenario::validate(&total, &base, &map)?
        }
        "standard" => {
            standard_from_json(&v)?;
            ValidationReport::new()
        }
        _ => {
            scenario_from_json(&v)?;
            ValidationReport::new()
        }
    };
    let mut out = json!({ "kind": kind, "ok": report.is_ok(), "checks": report_json(&report) });
    if !report.is_ok() {
        return Ok(Output::with_code(out, false));
    }
    if let Some(model) = model {
        let m = read(model)?;
        let model_report = match scenario_from_json(&v)? {
            Scenario::Simplicial(f) => {
                validate_simplicial_distribution(&f, &sdist_from_json(&f, &m)?)
            }
            other => {
                let f = event_of(other)?;
                validate_empirical(&f, &model_from_json(&f, &m)?).report
            }
        };
        out["ok"] = json!(model_report.is_ok());
        out["model"] = report_json(&model_report);
        return Ok(Output::with_code(out, model_report.is_ok()));
    }
    Ok(Output::ok(out))
}

fn convert(path: &Path, to: Target, witness: bool) -> Result<Output> {
    let value = match (load(path)?, to) {
        (Scenario::Event(f), Target::Bundle) => {
            let b = elements(&f);
            if witness {
                let back = to_event(&b)?;
                json!({ "scenario": bundle_to_json(&b), "witness": { "round_trip": event_to_json(&back), "maps": event_round_trip_iso(&f, &back) } })
            } else {
                bundle_to_json(&b)
            }
        }
        (Scenario::Bundle(b), Target::Event) => {
            let f = to_event(&b)?;
            if witness {
                let iso: serde_json::Map<String, Value> = elements_round_trip_iso(&b)
                    .into_iter()
                    .map(|(v, w)| (v.name().to_string(), Value::String(w.name().to_string())))
                    .collect();
                json!({ "scenario": event_to_json(&f), "witness": { "elements": bundle_to_json(&elements(&f)), "map": iso } })
            } else {
                event_to_json(&f)
            }
        }
        (s @ Scenario::Event(_), Target::Event) | (s @ Scenario::Bundle(_), Target::Bundle) => {
            scenario_to_json(&s)
        }
        (Scenario::Simplicial(_), _) => {
            return Err(Error::Domain("simplicial scenarios do not convert".into()))
        }
    };
    Ok(Output::ok(value))
}

fn tensor(left: &Path, right: &Path) -> Result<Output> {
    let value = match (load(left)?, load(right)?) {
        (Scenario::Simplicial(f), Scenario::Simplicial(g)) => simplicial_to_json(&f.tensor(&g)?),
        (Scenario::Bundle(f), Scenario::Bundle(g)) => {
            bundle_to_json(&elements(&tensor_event(&to_event(&f)?, &to_event(&g)?)?))
        }
        (f, g) => event_to_json(&tensor_event(&event_of(f)?, &event_of(g)?)?),
    };
    Ok(Output::ok(value))
}

fn list_sections(path: &Path, cap: usize) -> Result<Output> {
    let value = match load(path)? {
        Scenario::Simplicial(f) => {
            let secs = sections(&f, cap)?;
            let keys: Vec<String> = secs
                .iter()
                .map(|s| {
                    (0..f.base().count(0))
                        .map(|x| format!("{}={}", f.base().name(0, x), f.total().name(0, s[0][x])))
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            json!({ "count": secs.len(), "sections": keys })
        }
        other => {
            let f = event_of(other)?;
            let secs = global_sections(&f, cap)?;
            json!({ "count": secs.len(), "sections": secs.iter().map(|s| section_key(&f, s)).collect::<Vec<_>>() })
        }
    };
    Ok(Output::ok(value))
}

fn nerve(path: &Path, d: usize, model: Option<&Path>) -> Result<Output> {
    let scenario = load(path)?;
    let event = match &scenario {
        Scenario::Event(f) => Some(f.clone()),
        _ => None,
    };
    let f = bundle_of(scenario)?;
    let nb = nerve_bundle(&f, d)?;
    let Some(model) = model else {
        return Ok(Output::ok(simplicial_to_json(&nb.scenario)));
    };
    let fe = match event {
        Some(fe) => fe,
        None => to_event(&f)?,
    };
    let p = model_from_json(&fe, &read(model)?)?;
    let checked = validate_empirical(&fe, &p);
    if !checked.is_ok() {
        return Err(Error::Invalid(checked.report.to_string()));
    }
    let marginals = bundle_marginals(&f, &event_model_to_bundle(&fe, &p))?;
    let q = empirical_to_simplicial(&nb, &f, |s| {
        marginals
            .get(s)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("no marginal on {s}")))
    })?;
    Ok(Output::ok(
        json!({ "scenario": simplicial_to_json(&nb.scenario), "distribution": sdist_to_json(&nb.scenario, &q) }),
    ))
}

fn mapping(kind: Kind, source: &Path, target: &Path, cap: usize) -> Result<Output> {
    let (f, g) = (load(source)?, load(target)?);
    let function_cap = (cap as u128).max(DEFAULT_FUNCTION_CAP);
    let value = match kind {
        Kind::Event => event_to_json(
            &mapping_event_scenario(&event_of(f)?, &event_of(g)?, function_cap)?.scenario,
        ),
        Kind::Bundle => bundle_to_json(
            &mapping_bundle_scenario(&bundle_of(f)?, &bundle_of(g)?, function_cap)?.bundle,
        ),
        Kind::Simplicial => simplicial_to_json(
            &mapping_simplicial(&simplicial_of(f)?, &simplicial_of(g)?, cap)?.scenario,
        ),
    };
    Ok(Output::ok(value))
}

fn push(morphism: &Path, model: &Path) -> Result<Output> {
    let m = read(morphism)?;
    let p = read(model)?;
    let value = match m.get("kind").and_then(Value::as_str) {
        Some("event-morphism") => {
            let m = event_morphism_from_json(&m)?;
            model_to_json(
                m.target(),
                &push_empirical(&m, &model_from_json(m.source(), &p)?)?,
            )
        }
        Some("stochastic-morphism") => {
            let m = stoch_morphism_from_json(&m)?;
            sdist_to_json(
                m.target(),
                &push_stochastic(&m, &sdist_from_json(m.source(), &p)?)?,
            )
        }
        _ => {
            return Err(Error::Parse(
                "morphism.kind: expected \"event-morphism\" or \"stochastic-morphism\"".into(),
            ))
        }
    };
    Ok(Output::ok(value))
}

fn verdict_output(d: &Decision) -> Output {
    Output {
        value: decision_to_json(d),
        code: if d.verdict.is_contextual() { 2 } else { 0 },
    }
}

fn check(path: &Path, model: &Path, cap: usize) -> Result<Output> {
    let p = read(model)?;
    let decision = match load(path)? {
        Scenario::Simplicial(f) => {
            let q = sdist_from_json(&f, &p)?;
            let report = validate_simplicial_distribution(&f, &q);
            if !report.is_ok() {
                return Err(Error::Invalid(report.to_string()));
            }
            check_simplicial_contextuality(&f, &q, cap)?.0
        }
        other => {
            let f = event_of(other)?;
            let q = model_from_json(&f, &p)?;
            let report = validate_empirical(&f, &q);
            if !report.is_ok() {
                return Err(Error::Invalid(report.report.to_string()));
            }
            check_contextuality(&f, &q, cap)?
        }
    };
    Ok(verdict_output(&decision))
}

fn decompose(source: &Path, target: &Path, model: &Path, cap: usize) -> Result<Output> {
    let (f, g) = (simplicial_of(load(source)?)?, simplicial_of(load(target)?)?);
    let space = mapping_simplicial(&f, &g, cap)?;
    let p = sdist_from_json(&space.scenario, &read(model)?)?;
    let parts = decompose_noncontextual(&space, &p, cap)?;
    let parts = parts
        .iter()
        .map(|(w, m)| {
            Ok(json!({ "weight": ctx_core::dist::format_rational(w), "morphism": stoch_morphism_to_json(&m.to_stochastic(&f, &g)?) }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Output::ok(
        json!({ "verdict": "noncontextual", "decomposition": parts }),
    ))
}

fn verify_certificate(path: &Path) -> Result<Output> {
    let d = decision_from_json(&read(path)?)?;
    let verified = d.verify();
    let verdict = if d.verdict.is_contextual() {
        "contextual"
    } else {
        "noncontextual"
    };
    Ok(Output::with_code(
        json!({ "verdict": verdict, "verified": verified }),
        verified,
    ))
}

fn laws(suite: Option<SuiteArg>, trials: usize, seed: u64) -> Output {
    let suites: Vec<Suite> = match suite {
        Some(s) => vec![s.into()],
        None => Suite::ALL.to_vec(),
    };
    let reports: Vec<_> = suites
        .into_iter()
        .map(|s| run_suite(s, trials, seed))
        .collect();
    let ok = reports.iter().all(|r| r.is_ok());
    let value = match reports.as_slice() {
        [one] => one.to_json(),
        many => Value::Array(many.iter().map(|r| r.to_json()).collect()),
    };
    Output::with_code(value, ok)
}

fn run(cli: &Cli) -> Result<Output> {
    let cap = cli.cap;
    match &cli.command {
        Command::Validate { scenario, model } => validate(scenario.path()?, model.as_deref()),
        Command::Convert {
            scenario,
            to,
            witness,
        } => convert(scenario.path()?, *to, *witness),
        Command::Tensor { left, right } => tensor(left, right),
        Command::Sections { scenario } => list_sections(scenario.path()?, cap),
        Command::NerveComplex { complex } => Ok(Output::ok(complex_to_json(&nerve_complex(
            &complex_from_json(&read(complex)?)?,
        )))),
        Command::Nerve {
            scenario,
            truncate,
            model,
        } => nerve(scenario.path()?, *truncate, model.as_deref()),
        Command::Map {
            kind,
            source,
            target,
        } => mapping(*kind, source, target, cap),
        Command::Push { morphism, model } => push(morphism, model),
        Command::Check { scenario, model } => check(scenario.path()?, model, cap),
        Command::Decompose {
            source,
            target,
            model,
        } => decompose(source, target, model, cap),
        Command::VerifyCertificate { verdict } => verify_certificate(verdict),
        Command::Laws {
            suite,
            trials,
            seed,
        } => Ok(laws(*suite, *trials, *seed)),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => 3,
        Error::Contextual(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1 so that 2 stays reserved for contextual verdicts.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text =
                serde_json::to_string_pretty(&out.value).expect("JSON values serialize") + "\n";
            let written = match &cli.output {
                Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::from(out.code),
                Err(e) => {
                    eprintln!("{}", json!({ "error": e }));
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(exit_code(&e))
        }
    }
}
