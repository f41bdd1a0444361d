use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Rounds to 12 significant digits, the precision of every emitted number.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Textual form used in CSV cells; parses back to the same value as the JSON number.
pub fn format12(x: f64) -> String {
    let r = round12(x);
    format!("{r}")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub schema_version: String,
    pub command: String,
    /// `None` for commands that span several dimensions.
    pub d: Option<u32>,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, f64>,
    pub classical_bounds: Option<[f64; 2]>,
    pub violated: bool,
    pub timing_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Witnesses>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<GoldenRow>,
}

/// Deterministic assignments attaining the classical extremes.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Witnesses {
    pub argmin: Assignment,
    pub argmax: Assignment,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Assignment {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GoldenRow {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: &str, d: Option<u32>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            d,
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            classical_bounds: None,
            violated: false,
            timing_ms: 0,
            witnesses: None,
            checks: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, key: &str, value: f64) {
        self.results.insert(key.to_string(), round12(value));
    }

    pub fn set_bounds(&mut self, min: f64, max: f64) {
        self.classical_bounds = Some([round12(min), round12(max)]);
    }

    /// `violated` from the stored fields: the quantum value against the classical maximum.
    pub fn recompute_violated(&self) -> bool {
        match (self.results.get("quantum_value"), self.classical_bounds) {
            (Some(&q), Some([_, max])) => q > max,
            _ => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(5.117211191714659), 5.11721119171);
        assert_eq!(round12(2.0 * 2f64.sqrt()), 2.82842712475);
        assert_eq!(round12(0.0), 0.0);
        assert_eq!(round12(-1234567.891234567), -1234567.89123);
        assert_eq!(format12(0.1 + 0.2), "0.3");
    }

    #[test]
    fn violated_is_recomputable_after_round_trip() {
        let mut r = RunReport::new("quantum", Some(3));
        r.result("quantum_value", 5.117211191714659);
        r.set_bounds(-4.5, 4.5);
        r.violated = r.recompute_violated();
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(back.recompute_violated());
    }
}
