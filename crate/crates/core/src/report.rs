use std::collections::BTreeMap;

use serde::Serialize;

/// Which side of the inequality must be larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// lhs ≥ rhs
    AtLeast,
    /// lhs ≤ rhs
    AtMost,
}

/// Outcome of one inequality instance.
///
/// `margin` is oriented so that larger is better: `lhs - rhs` for
/// [`Direction::AtLeast`], `rhs - lhs` for [`Direction::AtMost`]. The check
/// passes iff `margin >= -tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// The inequality holds for trivial reasons (e.g. a nonpositive lower
    /// bound); such instances never count as failures.
    pub vacuous: bool,
    pub provenance: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(name: &str, lhs: f64, rhs: f64, direction: Direction, tolerance: f64) -> Self {
        let margin = match direction {
            Direction::AtLeast => lhs - rhs,
            Direction::AtMost => rhs - lhs,
        };
        BoundReport {
            name: name.to_string(),
            inputs: BTreeMap::new(),
            lhs,
            rhs,
            direction,
            margin,
            tolerance,
            pass: margin >= -tolerance,
            vacuous: false,
            provenance: String::new(),
            extras: BTreeMap::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn provenance(mut self, note: &str) -> Self {
        self.provenance = note.to_string();
        self
    }

    pub fn extra(mut self, key: &str, value: f64) -> Self {
        if value.is_finite() {
            self.extras.insert(key.to_string(), value);
        }
        self
    }

    pub fn vacuous(mut self, vacuous: bool) -> Self {
        self.vacuous = vacuous;
        self
    }

    /// Failed and not vacuous.
    pub fn is_failure(&self) -> bool {
        !self.pass && !self.vacuous
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report fields are finite or skipped")
    }
}
