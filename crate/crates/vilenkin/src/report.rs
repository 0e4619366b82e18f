//! Machine-readable outcome of a numerical identity or bound check.

use std::collections::BTreeMap;

use serde::Serialize;

/// Outcome of one verification run.
///
/// Identity checks populate `max_deviation` (pointwise `|lhs - rhs|` sup);
/// bound checks populate `empirical_constant` (sup of a ratio that the
/// underlying inequality asserts is bounded).  `argmax_witness` locates
/// where the extremum was attained.  `parameters` is an ordered map so the
/// serialized form is deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax_witness: Option<String>,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>) -> Self {
        Self {
            identity: identity.into(),
            parameters: BTreeMap::new(),
            max_deviation: None,
            empirical_constant: None,
            argmax_witness: None,
        }
    }

    /// Records a named parameter of the run (builder style).
    pub fn param(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.set_param(key, value);
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl std::fmt::Display) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    /// Folds one deviation observation into the running maximum; the
    /// witness closure is only rendered when the maximum moves.
    pub fn observe_deviation(&mut self, deviation: f64, witness: impl FnOnce() -> String) {
        if self.max_deviation.is_none() || deviation > self.max_deviation.unwrap() {
            self.max_deviation = Some(deviation);
            self.argmax_witness = Some(witness());
        }
    }

    /// Folds one bounded-ratio observation into the running constant.
    pub fn observe_ratio(&mut self, ratio: f64, witness: impl FnOnce() -> String) {
        if self.empirical_constant.is_none() || ratio > self.empirical_constant.unwrap() {
            self.empirical_constant = Some(ratio);
            self.argmax_witness = Some(witness());
        }
    }

    /// True when the recorded deviation (if any) is within `tol`.
    pub fn within(&self, tol: f64) -> bool {
        self.max_deviation.is_none_or(|d| d <= tol)
    }
}
