// SPDX-License-Identifier: Apache-2.0

//! Pauli correlation tensors: `T[μ1…μN] = Tr(ρ σ_μ1 ⊗ … ⊗ σ_μN)`.
//!
//! Every correlator of local Hermitian qubit operators is a multilinear
//! contraction of `T`, which is how the optimizers evaluate thousands of
//! direction configurations without building dense operators.

use super::state::DensityOperator;
use crate::error::{Error, Result};

/// Largest register for which a correlation tensor is materialized.
pub const MAX_TENSOR_QUBITS: usize = 8;

/// Anything that can evaluate `<⊗_q (c_q0 I + c_q·σ)>`.
pub trait CorrelationSource: Sync {
    fn n_qubits(&self) -> usize;

    /// Expectation of a product of single-qubit operators, each given by
    /// its Pauli coefficients `[c0, cx, cy, cz]`. Qubit 1 first.
    fn correlator(&self, factors: &[[f64; 4]]) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    n_qubits: usize,
    data: Vec<f64>,
}

impl CorrelationTensor {
    pub fn from_density(rho: &DensityOperator) -> Result<Self> {
        let n = rho.n_qubits().ok_or_else(|| {
            Error::InvalidParameter(format!("dimension {} is not a qubit register", rho.dim()))
        })?;
        if n > MAX_TENSOR_QUBITS {
            return Err(Error::CapExceeded {
                what: "qubits for correlation tensor",
                requested: n,
                cap: MAX_TENSOR_QUBITS,
            });
        }
        let m = rho.operator().matrix();
        let dim = 1usize << n;
        let len = 1usize << (2 * n);
        let mut data = vec![0.0; len];
        for (idx, slot) in data.iter_mut().enumerate() {
            let mu = digits(idx, n);
            let mut xmask = 0usize;
            for (q, &d) in mu.iter().enumerate() {
                if d == 1 || d == 2 {
                    xmask |= 1 << (n - 1 - q);
                }
            }
            // Tr(ρ P) = Σ_j ρ[j ^ xmask, j] P[j, j ^ xmask]
            let mut acc_re = 0.0;
            for j in 0..dim {
                let i = j ^ xmask;
                let (mut ph_re, mut ph_im) = (1.0, 0.0);
                for (q, &d) in mu.iter().enumerate() {
                    let bit = (j >> (n - 1 - q)) & 1;
                    match d {
                        2 => {
                            // σy[0,1] = -i, σy[1,0] = i
                            let s = if bit == 0 { -1.0 } else { 1.0 };
                            let (re, im) = (-ph_im * s, ph_re * s);
                            ph_re = re;
                            ph_im = im;
                        }
                        3 if bit == 1 => {
                            ph_re = -ph_re;
                            ph_im = -ph_im;
                        }
                        _ => {}
                    }
                }
                let r = m[(i, j)];
                acc_re += r.re * ph_re - r.im * ph_im;
            }
            *slot = acc_re;
        }
        Ok(Self { n_qubits: n, data })
    }

    /// The tensor of `p ρ + (1-p) I/2^N`: every entry except the all-identity
    /// one scales by `p`.
    pub fn with_white_noise(&self, p: f64) -> Self {
        let mut data: Vec<f64> = self.data.iter().map(|v| v * p).collect();
        data[0] = self.data[0];
        Self {
            n_qubits: self.n_qubits,
            data,
        }
    }

    pub fn entry(&self, mu: &[usize]) -> f64 {
        let idx = mu.iter().fold(0usize, |acc, &d| acc * 4 + d);
        self.data[idx]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl CorrelationSource for CorrelationTensor {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn correlator(&self, factors: &[[f64; 4]]) -> f64 {
        assert_eq!(factors.len(), self.n_qubits, "one factor per qubit");
        // Contract the least significant qubit first.
        let mut cur = contract_last(&self.data, &factors[factors.len() - 1]);
        for f in factors[..factors.len() - 1].iter().rev() {
            cur = contract_last(&cur, f);
        }
        cur[0]
    }
}

fn contract_last(t: &[f64], f: &[f64; 4]) -> Vec<f64> {
    t.chunks_exact(4)
        .map(|c| c[0] * f[0] + c[1] * f[1] + c[2] * f[2] + c[3] * f[3])
        .collect()
}

/// Correlators of the product state `⊗ ½(I + s_q·σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCorrelations {
    pub bloch: Vec<[f64; 3]>,
}

impl CorrelationSource for ProductCorrelations {
    fn n_qubits(&self) -> usize {
        self.bloch.len()
    }

    fn correlator(&self, factors: &[[f64; 4]]) -> f64 {
        factors
            .iter()
            .zip(&self.bloch)
            .map(|(f, s)| f[0] + f[1] * s[0] + f[2] * s[1] + f[3] * s[2])
            .product()
    }
}

fn digits(mut idx: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for q in (0..n).rev() {
        d[q] = idx % 4;
        idx /= 4;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::operator::{pauli_basis, qubit_operator, tensor_product};
    use crate::qcore::state::{expectation, ghz, w3};

    fn dense_correlator(rho: &DensityOperator, factors: &[[f64; 4]]) -> f64 {
        let ops: Vec<_> = factors.iter().map(|&c| qubit_operator(c)).collect();
        expectation(&tensor_product(&ops).unwrap(), rho).unwrap()
    }

    #[test]
    fn entries_match_dense_traces() {
        let rho = w3();
        let t = CorrelationTensor::from_density(&rho).unwrap();
        let basis = pauli_basis();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let op = tensor_product(&[basis[a].clone(), basis[b].clone(), basis[c].clone()])
                        .unwrap();
                    let want = expectation(&op, &rho).unwrap();
                    assert!((t.entry(&[a, b, c]) - want).abs() < 1e-13, "{a}{b}{c}");
                }
            }
        }
    }

    #[test]
    fn contraction_matches_dense() {
        let rho = ghz(3).unwrap();
        let t = CorrelationTensor::from_density(&rho).unwrap();
        let f = [[0.1, 0.3, -0.5, 0.2], [0.0, 0.6, 0.8, 0.0], [1.0, 0.0, 0.2, -0.7]];
        assert!((t.correlator(&f) - dense_correlator(&rho, &f)).abs() < 1e-13);
    }

    #[test]
    fn white_noise_tensor() {
        let rho = ghz(3).unwrap();
        let t = CorrelationTensor::from_density(&rho).unwrap();
        let noisy = t.with_white_noise(0.3);
        let x = [0.0, 1.0, 0.0, 0.0];
        assert!((noisy.correlator(&[x, x, x]) - 0.3).abs() < 1e-14);
        assert!((noisy.entry(&[0, 0, 0]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_source_matches_dense() {
        let s = [[0.0, 0.6, 0.8], [1.0, 0.0, 0.0]];
        let rho = DensityOperator::product_state(&s).unwrap();
        let src = ProductCorrelations { bloch: s.to_vec() };
        let f = [[0.2, 0.1, -0.3, 0.4], [0.0, 0.5, 0.5, 0.5]];
        assert!((src.correlator(&f) - dense_correlator(&rho, &f)).abs() < 1e-14);
    }
}
