use serde::Serialize;

use crate::bounds::BoundValue;

/// Algorithm value against an oracle value, with the bound the ratio must respect.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub algorithm_value: f64,
    pub oracle_value: f64,
    pub ratio: f64,
    pub bound: BoundValue,
    /// `bound − ratio`; negative means the bound was violated.
    pub margin: f64,
    /// Confidence half-width of `algorithm_value` when it is a Monte Carlo estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
}

impl RatioReport {
    pub fn new(algorithm_value: f64, oracle_value: f64, bound: BoundValue) -> Self {
        let ratio = algorithm_value / oracle_value;
        Self {
            algorithm_value,
            oracle_value,
            ratio,
            bound,
            margin: bound.value - ratio,
            half_width: None,
        }
    }

    /// Whether the bound holds up to `tol`.
    pub fn within_bound(&self, tol: f64) -> bool {
        self.margin >= -tol
    }
}
