use std::fmt;

/// One named check with an optional counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Pass/fail results of a validation, one entry per axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, name: &'static str, outcome: Result<(), String>) {
        let (passed, witness) = match outcome {
            Ok(()) => (true, None),
            Err(w) => (false, Some(w)),
        };
        self.checks.push(Check {
            name,
            passed,
            witness,
        });
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match &c.witness {
                None => write!(f, "{}: pass", c.name)?,
                Some(w) => write!(f, "{}: FAIL ({})", c.name, w)?,
            }
        }
        Ok(())
    }
}
