// SPDX-License-Identifier: Apache-2.0

//! Numerical tolerances used for validation throughout the crate.

/// Hermiticity, trace and positivity checks on user-facing matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Unit-norm check for Bloch directions.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Idempotency check for projections.
pub const IDEMPOTENT_TOL: f64 = 1e-10;

/// Largest imaginary part of `Tr(O rho)` tolerated for Hermitian `O`.
pub const TRACE_IMAG_TOL: f64 = 1e-10;

/// Default threshold below which a pseudoprobability counts as negative.
pub const NEGATIVITY_EPS: f64 = 1e-12;

/// Orthonormality of user-supplied triads and doublet geometry.
pub const GEOMETRY_TOL: f64 = 1e-10;
