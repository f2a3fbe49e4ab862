use std::fmt;

use serde::{Deserialize, Serialize};

/// First failure found by an executable property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub point_index: usize,
    pub expected: i64,
    pub found: i64,
    pub note: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "point {}: expected {}, found {} ({})",
            self.point_index, self.expected, self.found, self.note
        )
    }
}

/// Outcome of a property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails(Counterexample),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }

    pub(crate) fn fail(point_index: usize, expected: i64, found: i64, note: impl Into<String>) -> Self {
        Verdict::Fails(Counterexample { point_index, expected, found, note: note.into() })
    }
}
