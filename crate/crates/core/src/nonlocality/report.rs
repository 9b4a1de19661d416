// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::polynomials::NonlocalityPolynomial;
use crate::error::{Error, Result};
use crate::qcore::{expectation, DensityOperator};

/// Machine-readable outcome of evaluating an inequality on a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub value: f64,
    pub bound: f64,
    pub violated: bool,
    pub margin: f64,
    /// Bloch vectors per party, in the order the inequality names them.
    pub directions: Vec<Vec<[f64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unsafe_alpha: Option<bool>,
}

impl Report {
    /// Report for a value compared in absolute terms with `bound`.
    pub fn absolute(
        kind: &str,
        n: usize,
        value: f64,
        bound: f64,
        directions: Vec<Vec<[f64; 3]>>,
    ) -> Self {
        let margin = value.abs() - bound;
        Self {
            kind: kind.to_string(),
            n,
            value,
            bound,
            violated: margin > 0.0,
            margin,
            directions,
            alpha: None,
            unsafe_alpha: None,
        }
    }

    /// Report for a one-sided test `value < -bound`.
    pub fn one_sided(
        kind: &str,
        n: usize,
        value: f64,
        bound: f64,
        directions: Vec<Vec<[f64; 3]>>,
    ) -> Self {
        let margin = -value - bound;
        Self {
            violated: margin > 0.0,
            margin,
            ..Self::absolute(kind, n, value, bound, directions)
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Evaluates `<P>` on `rho` and compares `|<P>|` with the local bound.
pub fn violation_report(poly: &NonlocalityPolynomial, rho: &DensityOperator) -> Result<Report> {
    let value = expectation(&poly.op, rho)?;
    Ok(Report::absolute(
        poly.kind.name(),
        poly.n,
        value,
        poly.classical_bound,
        super::polynomials::ObservablePair::settings(&poly.observables),
    ))
}

/// As [`violation_report`] with the one-sided test `<P> < -bound`.
pub fn one_sided_report(poly: &NonlocalityPolynomial, rho: &DensityOperator) -> Result<Report> {
    let value = expectation(&poly.op, rho)?;
    Ok(Report::one_sided(
        poly.kind.name(),
        poly.n,
        value,
        poly.classical_bound,
        super::polynomials::ObservablePair::settings(&poly.observables),
    ))
}
