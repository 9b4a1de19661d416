// SPDX-License-Identifier: Apache-2.0

//! Entanglement witnesses built from doublet pseudoprojections.
//!
//! Every witness is a positive constant scaled by `cos(α/2)` (or its square)
//! plus correlators of the triad means. Negative values certify
//! entanglement as long as `α` stays within the witness's safe range.

mod geometry;
mod kinds;
mod search;

pub use geometry::{
    canonical_triads, make_direction_config, triad_from_rotation, DirectionConfig, QubitDoublets,
};
pub use kinds::{
    alpha_max, check_alpha, witness_form, witness_operator, witness_value, witness_value_on,
    RangePolicy, WitnessForm, WitnessKind, WitnessSpec, WitnessValue, MAX_WITNESS_QUBITS,
};
pub use search::{
    optimize_config, product_state_minimum, refine_config, separable_minimum, OptimizedConfig,
    WitnessSearchOptions,
};
