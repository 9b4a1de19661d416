// SPDX-License-Identifier: Apache-2.0

//! Exhaustive enumeration of deterministic local strategies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlator::Polynomial;
use crate::error::{Error, Result};
use crate::events::{EventExpr, Observable};

/// Largest number of binary symbols enumerated.
pub const MAX_LHV_SYMBOLS: usize = 24;

/// Extremes of an expression over all `±1` assignments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LhvBounds {
    pub min: f64,
    pub max: f64,
    pub max_abs: f64,
    pub symbols: usize,
    pub strategies: u64,
}

/// Expression whose classical extremes are enumerated.
#[derive(Debug, Clone, PartialEq)]
pub enum LhvExpression {
    /// A correlator polynomial in `±1` values.
    Polynomial(Polynomial),
    /// A weighted sum of products of event probabilities, each replaced by a
    /// 0/1 indicator.
    Events(EventExpr),
}

impl LhvExpression {
    /// `1` for expressions linear in probabilities (or correlators),
    /// otherwise the largest product length.
    pub fn degree(&self) -> usize {
        match self {
            LhvExpression::Polynomial(_) => 1,
            LhvExpression::Events(e) => e.degree().max(1),
        }
    }

    pub fn bounds(&self) -> Result<LhvBounds> {
        match self {
            LhvExpression::Polynomial(p) => polynomial_bounds(p),
            LhvExpression::Events(e) => event_bounds(e),
        }
    }
}

/// Exact maximum of the expression over deterministic strategies.
pub fn lhv_max(expr: &LhvExpression) -> Result<f64> {
    Ok(expr.bounds()?.max)
}

/// Enumerates `f` over all assignments of `n_symbols` bits (bit set means
/// `-1`) in parallel; min/max reductions are order independent.
pub fn enumerate<F>(n_symbols: usize, f: F) -> Result<LhvBounds>
where
    F: Fn(u32) -> f64 + Sync,
{
    if n_symbols > MAX_LHV_SYMBOLS {
        return Err(Error::CapExceeded {
            what: "LHV symbols",
            requested: n_symbols,
            cap: MAX_LHV_SYMBOLS,
        });
    }
    let total = 1u64 << n_symbols;
    let (min, max) = (0..total as u32)
        .into_par_iter()
        .with_min_len(1 << 10)
        .map(|bits| {
            let v = f(bits);
            (v, v)
        })
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY),
            |a, b| (a.0.min(b.0), a.1.max(b.1)),
        );
    Ok(LhvBounds {
        min,
        max,
        max_abs: min.abs().max(max.abs()),
        symbols: n_symbols,
        strategies: total,
    })
}

/// Extremes of a correlator polynomial.
pub fn polynomial_bounds(p: &Polynomial) -> Result<LhvBounds> {
    let symbols = p.symbols();
    let masks: Vec<(f64, u32)> = p
        .terms()
        .map(|m| {
            let mut mask = 0u32;
            for (party, slot) in m.slots.iter().enumerate() {
                if let Some(k) = slot {
                    let idx = symbols
                        .iter()
                        .position(|&s| s == (party, *k))
                        .expect("symbol listed");
                    mask |= 1 << idx;
                }
            }
            (m.coeff, mask)
        })
        .collect();
    enumerate(symbols.len(), |bits| {
        masks
            .iter()
            .map(|&(c, m)| if (bits & m).count_ones() % 2 == 0 { c } else { -c })
            .sum()
    })
}

/// Extremes of an event expression with indicators in place of
/// probabilities.
pub fn event_bounds(e: &EventExpr) -> Result<LhvBounds> {
    e.validate()?;
    let obs = e.observables();
    enumerate(obs.len(), |bits| {
        let value = |o: &Observable| {
            let k = obs.binary_search(o).expect("observable listed");
            if bits >> k & 1 == 1 {
                -1
            } else {
                1
            }
        };
        e.local_value(&value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::{parse_expr, presets};
    use crate::nonlocality::polynomials::{dda_polynomial, mermin_pair, svetlichny_polynomial};

    #[test]
    fn small_bounds() {
        assert_eq!(polynomial_bounds(&svetlichny_polynomial(3)).unwrap().max_abs, 4.0);
        assert_eq!(polynomial_bounds(&mermin_pair(3).0).unwrap().max_abs, 2.0);
        assert_eq!(polynomial_bounds(&dda_polynomial(3)).unwrap().max_abs, 2.0);
        let b = polynomial_bounds(&mermin_pair(4).0).unwrap();
        assert_eq!(b.max, 4.0);
        assert_eq!(b.min, -4.0);
        assert_eq!(b.strategies, 256);
    }

    #[test]
    fn event_sum_bounds() {
        // (4 + S3)/4 lies in [0, 2] for local strategies.
        let b = event_bounds(&presets::svetlichny_event_sum()).unwrap();
        assert_eq!(b.min, 0.0);
        assert_eq!(b.max, 2.0);
    }

    #[test]
    fn nonlinear_expression() {
        let x = parse_expr("E(A1=A2)*E(A1'=A2') - E(A1=A2')").unwrap();
        let e = LhvExpression::Events(x);
        assert_eq!(e.degree(), 2);
        let b = e.bounds().unwrap();
        assert_eq!(b.max, 1.0);
        assert_eq!(b.min, -1.0);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate(MAX_LHV_SYMBOLS + 1, |_| 0.0),
            Err(Error::CapExceeded { .. })
        ));
    }
}
