// SPDX-License-Identifier: Apache-2.0

//! Multipartite Bell-type polynomials, their local bounds by exhaustive
//! enumeration, and violation reports.
//!
//! Polynomials are built symbolically ([`Polynomial`](crate::correlator::Polynomial))
//! and bound to directions to obtain dense operators or correlator-based
//! expectations.

mod lhv;
mod polynomials;
mod report;
mod search;

pub use lhv::{
    enumerate, event_bounds, lhv_max, polynomial_bounds, LhvBounds, LhvExpression,
    MAX_LHV_SYMBOLS,
};
pub use polynomials::{
    dda, dda_polynomial, mermin, mermin_bound, mermin_operator_recursive, mermin_pair,
    svetlichny, svetlichny3, svetlichny_operator_recursive, svetlichny_polynomial,
    NonlocalityKind, NonlocalityPolynomial, ObservablePair, MAX_DENSE_PARTIES,
    MAX_SYMBOLIC_PARTIES,
};
pub use report::{one_sided_report, violation_report, Report};
pub use search::{
    maximize_abs, optimize_settings, pairs_from_angles, refine_settings, OptimizedSettings,
    SearchOptions,
};
