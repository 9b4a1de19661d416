// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures for the kernel benchmarks.

use pseudoprob::{ghz, CorrelationTensor, DensityOperator};

/// GHZ state on `n` qubits mixed with white noise at visibility `p`.
pub fn noisy_ghz(n: usize, p: f64) -> DensityOperator {
    pseudoprob::add_white_noise(&ghz(n).expect("n >= 2"), p).expect("p in [0,1]")
}

pub fn ghz_tensor(n: usize) -> CorrelationTensor {
    CorrelationTensor::from_density(&ghz(n).expect("n >= 2")).expect("small register")
}
