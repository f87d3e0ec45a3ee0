use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Constraints within this distance of the minimum are reported as binding.
pub const BINDING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub label: String,
    pub value: f64,
}

/// Outcome of a bound evaluation or optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: f64,
    pub constraints: Vec<Constraint>,
    pub binding: Vec<String>,
    pub witness: BTreeMap<String, Vec<f64>>,
    pub regime: String,
    /// False when the value rests on an inner minimization that was not
    /// certified (heuristic search over a non-convex set).
    pub certified: bool,
}

impl BoundReport {
    /// Report whose value is the minimum of the listed constraints.
    pub fn from_constraints<S: Into<String>>(items: impl IntoIterator<Item = (S, f64)>) -> Self {
        let constraints: Vec<Constraint> =
            items.into_iter().map(|(l, v)| Constraint { label: l.into(), value: v }).collect();
        let value = constraints.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
        let mut r = BoundReport {
            value,
            constraints,
            binding: Vec::new(),
            witness: BTreeMap::new(),
            regime: String::new(),
            certified: true,
        };
        r.refresh_binding();
        r
    }

    /// Report carrying an externally computed value (e.g. a max-min saddle).
    pub fn with_value(mut self, value: f64) -> Self {
        self.value = value;
        self.refresh_binding();
        self
    }

    pub fn with_witness(mut self, key: &str, values: Vec<f64>) -> Self {
        self.witness.insert(key.to_string(), values);
        self
    }

    pub fn with_regime(mut self, regime: impl Into<String>) -> Self {
        self.regime = regime.into();
        self
    }

    pub fn with_certified(mut self, certified: bool) -> Self {
        self.certified = certified;
        self
    }

    pub fn constraint(&self, label: &str) -> Option<f64> {
        self.constraints.iter().find(|c| c.label == label).map(|c| c.value)
    }

    fn refresh_binding(&mut self) {
        let min = self.constraints.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
        self.binding = self
            .constraints
            .iter()
            .filter(|c| c.value <= min + BINDING_TOL)
            .map(|c| c.label.clone())
            .collect();
    }

    /// Binding labels joined with `+`, for tabular output.
    pub fn binding_label(&self) -> String {
        self.binding.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binding_lists_all_ties() {
        let r = BoundReport::from_constraints([("a", 1.0), ("b", 1.0 + 5e-10), ("c", 2.0)]);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.binding, vec!["a", "b"]);
        assert_eq!(r.binding_label(), "a+b");
        assert_eq!(r.constraint("c"), Some(2.0));
    }
}
