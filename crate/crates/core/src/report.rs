//! Validation reports: violations are data, not errors.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Stable identifier of the broken constraint, e.g. `charge-balance`.
    pub constraint: String,
    /// What the violation is about, e.g. `tuple 2` or `vertex 1`.
    pub subject: String,
    pub message: String,
}

impl Violation {
    pub fn new(constraint: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Violation { constraint: constraint.to_string(), subject: subject.into(), message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.constraint, self.subject, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, constraint: &str, subject: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation::new(constraint, subject, message));
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn has(&self, constraint: &str) -> bool {
        self.violations.iter().any(|v| v.constraint == constraint)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
