// SPDX-License-Identifier: Apache-2.0

//! Dense complex operator algebra over qubit registers.

mod correlation;
mod direction;
mod operator;
pub mod sampling;
mod state;

pub use correlation::{CorrelationSource, CorrelationTensor, ProductCorrelations, MAX_TENSOR_QUBITS};
pub use direction::{pauli_from_direction, Direction};
pub(crate) use direction::{axpy3, cross3, dot3, norm3};
pub use operator::{
    pauli_basis, pauli_coefficients, pauli_x, pauli_y, pauli_z, qubit_operator, tensor_product,
    ComplexOperator, C64,
};
pub use state::{add_white_noise, expectation, ghz, w3, DensityOperator};
