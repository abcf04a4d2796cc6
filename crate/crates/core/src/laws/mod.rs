//! Seeded property suites for the algebraic laws of the library.
//!
//! Each suite is a list of laws. A law draws a random instance of a given
//! size and checks an exact equation, usually against an independent
//! formula. Failures are shrunk by retrying at smaller sizes and reported
//! as JSON counterexamples that carry the seed.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};

mod equivalence;
pub mod gen;
mod gluing;
mod mapping;
mod monad;
mod tensor;

/// The outcome of one trial: `Err` carries a counterexample.
pub type Trial = std::result::Result<(), Value>;

/// A named law: `check(rng, size)` draws an instance and tests it.
pub struct Law {
    pub name: &'static str,
    /// Instance sizes cycle through `1..=max_size`.
    pub max_size: usize,
    pub check: fn(&mut ChaCha8Rng, usize) -> Trial,
}

/// The available suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Gluing,
    Monad,
    Tensor,
    Equivalence,
    Mapping,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Gluing,
        Suite::Monad,
        Suite::Tensor,
        Suite::Equivalence,
        Suite::Mapping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gluing => "gluing",
            Suite::Monad => "monad",
            Suite::Tensor => "tensor",
            Suite::Equivalence => "equivalence",
            Suite::Mapping => "mapping",
        }
    }

    pub fn laws(self) -> Vec<Law> {
        match self {
            Suite::Gluing => gluing::laws(),
            Suite::Monad => monad::laws(),
            Suite::Tensor => tensor::laws(),
            Suite::Equivalence => equivalence::laws(),
            Suite::Mapping => mapping::laws(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "unknown suite {s:?}; expected gluing, monad, tensor, equivalence or mapping"
                ))
            })
    }
}

/// Results for one law.
#[derive(Clone, Debug)]
pub struct LawOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    /// The smallest counterexample found, if any trial failed.
    pub counterexample: Option<Value>,
}

impl LawOutcome {
    pub fn is_ok(&self) -> bool {
        self.passed == self.trials
    }
}

/// Results for a suite run.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub laws: Vec<LawOutcome>,
}

impl SuiteReport {
    pub fn is_ok(&self) -> bool {
        self.laws.iter().all(LawOutcome::is_ok)
    }

    pub fn law(&self, name: &str) -> Option<&LawOutcome> {
        self.laws.iter().find(|l| l.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "trials": self.trials,
            "ok": self.is_ok(),
            "laws": self.laws.iter().map(|l| json!({
                "law": l.name,
                "trials": l.trials,
                "passed": l.passed,
                "counterexample": l.counterexample,
            })).collect::<Vec<_>>(),
        })
    }
}

fn law_rng(seed: u64, law: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(law as u64 + 1);
    rng
}

fn size_of(trial: usize, max: usize) -> usize {
    1 + trial % max.max(1)
}

/// Looks for a failing instance at sizes below `size`, returning the
/// smallest one found (or the original).
fn shrink(law: &Law, seed: u64, size: usize, original: Value) -> (usize, Value) {
    const ATTEMPTS: u64 = 32;
    for s in 1..size {
        for attempt in 0..ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((s as u64) << 32 | attempt));
            if let Err(cx) = (law.check)(&mut rng, s) {
                return (s, cx);
            }
        }
    }
    (size, original)
}

/// Runs one law for `trials` trials.
pub fn run_law(law: &Law, index: usize, seed: u64, trials: usize) -> LawOutcome {
    let mut master = law_rng(seed, index);
    let mut passed = 0;
    let mut counterexample = None;
    for t in 0..trials {
        let trial_seed = master.next_u64();
        let size = size_of(t, law.max_size);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        match (law.check)(&mut rng, size) {
            Ok(()) => passed += 1,
            Err(cx) if counterexample.is_none() => {
                let (size, cx) = shrink(law, trial_seed, size, cx);
                counterexample = Some(json!({
                    "law": law.name,
                    "seed": seed,
                    "trial": t,
                    "size": size,
                    "instance": cx,
                }));
            }
            Err(_) => {}
        }
    }
    LawOutcome {
        name: law.name,
        trials,
        passed,
        counterexample,
    }
}

/// Runs every law of a suite with the given seed.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> SuiteReport {
    let laws = suite
        .laws()
        .iter()
        .enumerate()
        .map(|(i, law)| run_law(law, i, seed, trials))
        .collect();
    SuiteReport {
        suite,
        seed,
        trials,
        laws,
    }
}

/// Runs a single named law of a suite.
pub fn run_named(suite: Suite, name: &str, trials: usize, seed: u64) -> Result<LawOutcome> {
    let laws = suite.laws();
    let (i, law) = laws
        .iter()
        .enumerate()
        .find(|(_, l)| l.name == name)
        .ok_or_else(|| Error::Domain(format!("suite {suite} has no law {name:?}")))?;
    Ok(run_law(law, i, seed, trials))
}

/// Converts a library error into a counterexample.
pub(crate) fn lib<T>(r: Result<T>) -> std::result::Result<T, Value> {
    r.map_err(|e| json!({ "error": e.to_string() }))
}

/// Fails with both sides printed unless `left == right`.
pub(crate) fn expect_eq<T: PartialEq + fmt::Debug>(
    instance: &Value,
    check: &str,
    left: &T,
    right: &T,
) -> Trial {
    if left == right {
        Ok(())
    } else {
        Err(json!({
            "check": check,
            "instance": instance,
            "left": format!("{left:?}"),
            "right": format!("{right:?}"),
        }))
    }
}

/// Fails with a message unless `cond` holds.
pub(crate) fn expect(instance: &Value, check: &str, cond: bool) -> Trial {
    if cond {
        Ok(())
    } else {
        Err(json!({ "check": check, "instance": instance }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse_by_name() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run_suite(Suite::Gluing, 20, 7).to_json();
        let b = run_suite(Suite::Gluing, 20, 7).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn short_runs_pass() {
        for suite in Suite::ALL {
            let report = run_suite(suite, 12, 3);
            assert!(
                report.is_ok() || suite == Suite::Mapping,
                "{}",
                report.to_json()
            );
        }
    }

    #[test]
    fn failing_law_is_shrunk() {
        fn small_only(rng: &mut ChaCha8Rng, size: usize) -> Trial {
            let _ = rng.next_u32();
            expect(&json!({ "size": size }), "size below 3", size < 3)
        }
        let law = Law {
            name: "small",
            max_size: 6,
            check: small_only,
        };
        let out = run_law(&law, 0, 1, 12);
        assert_eq!(out.passed, 4);
        assert_eq!(out.counterexample.unwrap()["size"], 3);
    }
}
