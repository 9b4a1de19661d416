// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};

use super::direction::Direction;
use super::operator::{qubit_operator, tensor_product, ComplexOperator, C64};
use crate::error::{Error, Result};
use crate::tolerance::{HERMITIAN_TOL, TRACE_IMAG_TOL};

/// A validated density operator: Hermitian, unit trace and positive
/// semidefinite, each within `1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: ComplexOperator,
    n_qubits: Option<usize>,
}

impl DensityOperator {
    pub fn new(op: ComplexOperator) -> Result<Self> {
        if !op.is_hermitian() {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {:.3e})",
                op.hermitian_deviation()
            )));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min_ev = op.eigenvalues()?[0];
        if min_ev < -HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_ev:.3e}"
            )));
        }
        let n_qubits = qubit_count(op.dim());
        Ok(Self { op, n_qubits })
    }

    fn trusted(op: ComplexOperator) -> Self {
        let n_qubits = qubit_count(op.dim());
        Self { op, n_qubits }
    }

    /// `|ψ><ψ|` for a (not necessarily normalized) state vector.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty("state vector"));
        }
        let v = DVector::from_column_slice(amplitudes);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let v = v / C64::new(norm, 0.0);
        let m = &v * v.adjoint();
        Self::new(ComplexOperator::from_matrix(m)?)
    }

    pub fn maximally_mixed_dim(dim: usize) -> Self {
        Self::trusted(ComplexOperator::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        Self::maximally_mixed_dim(1 << n_qubits)
    }

    /// `⊗_i ½(I + s_i·σ)` for Bloch vectors of length at most one.
    pub fn product_state(bloch: &[[f64; 3]]) -> Result<Self> {
        if bloch.is_empty() {
            return Err(Error::Empty("product state"));
        }
        let factors: Vec<ComplexOperator> = bloch
            .iter()
            .map(|s| qubit_operator([0.5, 0.5 * s[0], 0.5 * s[1], 0.5 * s[2]]))
            .collect();
        Self::new(tensor_product(&factors)?)
    }

    /// Pure product state with the given Bloch directions.
    pub fn pure_product(dirs: &[Direction]) -> Result<Self> {
        let b: Vec<[f64; 3]> = dirs.iter().map(|d| d.components()).collect();
        Self::product_state(&b)
    }

    pub fn operator(&self) -> &ComplexOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        self.n_qubits
    }

    pub fn purity(&self) -> f64 {
        (self.op.matrix() * self.op.matrix()).trace().re
    }

    /// Convex combination `p self + (1-p) other`.
    pub fn mix(&self, p: f64, other: &DensityOperator) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("mixing weight {p} not in [0,1]")));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut op = self.op.scale(p);
        op.add_scaled(1.0 - p, &other.op)?;
        Ok(Self::trusted(op))
    }
}

fn qubit_count(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

/// `Re Tr(O ρ)` for Hermitian `O`.
pub fn expectation(op: &ComplexOperator, rho: &DensityOperator) -> Result<f64> {
    if op.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: op.dim(),
        });
    }
    if !op.is_hermitian() {
        return Err(Error::NotHermitian {
            deviation: op.hermitian_deviation(),
        });
    }
    let tr = trace_of_product(op.matrix(), rho.operator().matrix());
    debug_assert!(
        tr.im.abs() <= TRACE_IMAG_TOL * (1.0 + op.max_abs()),
        "imaginary trace {}",
        tr.im
    );
    if tr.im.abs() > TRACE_IMAG_TOL * (1.0 + op.max_abs()) {
        return Err(Error::NotHermitian { deviation: tr.im.abs() });
    }
    Ok(tr.re)
}

/// `Tr(A B)` without forming the product.
pub(crate) fn trace_of_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `(|0…0> + |1…1>)/√2`.
pub fn ghz(n: usize) -> Result<DensityOperator> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("GHZ needs N >= 2, got {n}")));
    }
    if n > 12 {
        return Err(Error::CapExceeded {
            what: "qubits",
            requested: n,
            cap: 12,
        });
    }
    let dim = 1usize << n;
    let mut amp = vec![C64::new(0.0, 0.0); dim];
    amp[0] = C64::new(1.0, 0.0);
    amp[dim - 1] = C64::new(1.0, 0.0);
    DensityOperator::pure(&amp)
}

/// `(|001> + |010> + |100>)/√3`.
pub fn w3() -> DensityOperator {
    let mut amp = vec![C64::new(0.0, 0.0); 8];
    for idx in [1, 2, 4] {
        amp[idx] = C64::new(1.0, 0.0);
    }
    DensityOperator::pure(&amp).expect("W state is valid")
}

/// `p ρ + (1-p) I/d`.
pub fn add_white_noise(rho: &DensityOperator, p: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("noise parameter p = {p} not in [0,1]")));
    }
    rho.mix(p, &DensityOperator::maximally_mixed_dim(rho.dim()))
}
