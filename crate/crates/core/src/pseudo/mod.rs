// SPDX-License-Identifier: Apache-2.0

//! Projections, pseudoprojections and pseudoprobability schemes.
//!
//! A pseudoprojection for a joint outcome of several observables on one
//! subsystem is the ordering average of the products of their projections;
//! across subsystems it is the tensor product of the local factors. Its
//! expectation on a state is a pseudoprobability, which may be negative.

mod projection;
mod scheme;

pub use projection::{
    joint_pseudoprojection, projection, pseudoprobability, symmetrized_pseudoprojection,
    unit_pseudoprojection, Projection, ProjectionSource, Provenance, PseudoProjection,
    MAX_SYMMETRIZED,
};
pub(crate) use projection::symmetrized_qubit_coefficients;
pub use scheme::{
    build_pps, detect_negativity, detect_negativity_default, PpsEntry, PseudoProbabilityScheme,
    MAX_PPS_ENTRIES,
};
