// SPDX-License-Identifier: Apache-2.0

//! White-noise detection thresholds.
//!
//! The configuration is optimized at `p = 1`, then `p` is bisected with the
//! configuration refined locally at every step. For inequalities whose
//! margin is affine (or quadratic) in `p`, the closed-form root is reported
//! alongside for cross-checking.

mod report;
mod threshold;

pub use report::{emit_report, parse_report, ReportFormat};
pub use threshold::{
    scan_curve, threshold, Curve, CurvePoint, Inequality, NoisyFamily, ScanOptions, ScanResult,
};
