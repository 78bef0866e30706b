//! Named pass/fail checks carrying exact witnesses.

use std::collections::BTreeMap;

use crate::tensor::Tensor;

/// One check. When a witness tensor is present, `pass` holds exactly when
/// the witness vanishes.
#[derive(Clone, Debug)]
pub struct Check {
    pub pass: bool,
    pub witness: Option<Tensor>,
}

impl Check {
    /// Passes iff `t` is the zero tensor; `t` is kept as the witness.
    pub fn vanishing(t: Tensor) -> Self {
        Check { pass: t.is_zero(), witness: Some(t) }
    }

    pub fn flag(pass: bool) -> Self {
        Check { pass, witness: None }
    }

    /// Conjunction; the witness is that of the first failing part.
    pub fn all(parts: Vec<Check>) -> Self {
        let pass = parts.iter().all(|c| c.pass);
        let witness = parts.iter().find(|c| !c.pass).and_then(|c| c.witness.clone());
        Check { pass, witness }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Verdict {
    pub checks: BTreeMap<String, Check>,
}

impl Verdict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, check: Check) {
        self.checks.insert(name.to_string(), check);
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.get(name)
    }

    /// Panics on unknown names; meant for tests and fixtures.
    pub fn passes(&self, name: &str) -> bool {
        self.checks.get(name).unwrap_or_else(|| panic!("no check named {name}")).pass
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}
