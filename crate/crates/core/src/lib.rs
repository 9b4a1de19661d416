// SPDX-License-Identifier: Apache-2.0

//! Pseudoprojections and pseudoprobabilities for multi-qubit systems.
//!
//! The crate builds classical indicator functions for joint outcomes of
//! (generally noncommuting) dichotomic observables as Hermitian operators,
//! evaluates their expectations on density operators, and uses negative
//! values of suitable sums to detect nonlocality and entanglement.
//!
//! Module map:
//!
//! * [`qcore`]: dense complex operators, Bloch directions, density operators,
//!   Pauli correlation tensors.
//! * [`pseudo`]: projections, unit and symmetrized pseudoprojections,
//!   pseudoprobability schemes and negativity detection.
//! * [`events`]: a small event algebra (equality chains, conjunction,
//!   exclusive disjunction), its text grammar and its compilation to operators.
//! * [`correlator`]: symbolic correlator polynomials shared by the
//!   nonlocality and witness modules.
//! * [`nonlocality`]: Svetlichny, Mermin and Das-Datta-Agrawal polynomials and
//!   exhaustive local-hidden-variable enumeration.
//! * [`witness`]: doublet geometry and the three-qubit / N-qubit witnesses.
//! * [`expand`]: expansion of any Hermitian operator into pseudoprojections
//!   with nonnegative weights.
//! * [`scan`]: white-noise detection thresholds with inner optimization.
//!
//! Qubit ordering: qubit 1 is the leftmost (most significant) tensor factor
//! everywhere.

pub mod correlator;
pub mod error;
pub mod events;
pub mod expand;
pub mod nonlocality;
pub mod optimize;
pub mod pseudo;
pub mod qcore;
pub mod scan;
pub mod tolerance;
pub mod witness;

pub use error::{Error, Result};
pub use qcore::{
    add_white_noise, expectation, ghz, pauli_from_direction, tensor_product, w3, ComplexOperator,
    CorrelationSource, CorrelationTensor, DensityOperator, Direction,
};
