// SPDX-License-Identifier: Apache-2.0

//! Generalized Pauli (Gell-Mann) generators and coefficient extraction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{ComplexOperator, C64};

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// `|i><j| + |j><i|` (0-based indices).
pub fn sym_generator(d: usize, i: usize, j: usize) -> ComplexOperator {
    let mut m = nalgebra::DMatrix::zeros(d, d);
    m[(i, j)] = C64::new(1.0, 0.0);
    m[(j, i)] = C64::new(1.0, 0.0);
    ComplexOperator::from_matrix(m).expect("square")
}

/// `-i|i><j| + i|j><i|`.
pub fn antisym_generator(d: usize, i: usize, j: usize) -> ComplexOperator {
    let mut m = nalgebra::DMatrix::zeros(d, d);
    m[(i, j)] = C64::new(0.0, -1.0);
    m[(j, i)] = C64::new(0.0, 1.0);
    ComplexOperator::from_matrix(m).expect("square")
}

/// `|i><i| - |j><j|`.
pub fn diag_difference(d: usize, i: usize, j: usize) -> ComplexOperator {
    let mut e = vec![0.0; d];
    e[i] = 1.0;
    e[j] = -1.0;
    ComplexOperator::diagonal(&e)
}

/// Identity restricted to the span of `|i>, |j>`.
pub fn block_identity(d: usize, i: usize, j: usize) -> ComplexOperator {
    let mut e = vec![0.0; d];
    e[i] = 1.0;
    e[j] = 1.0;
    ComplexOperator::diagonal(&e)
}

/// Normalization of the `l`-th diagonal generator, `sqrt(2 / (l (l+1)))`.
pub fn diag_norm(l: usize) -> f64 {
    (2.0 / (l * (l + 1)) as f64).sqrt()
}

/// `Z_l = sqrt(2/(l(l+1))) (Σ_{k≤l} |k><k| - l |l+1><l+1|)`, `l` from 1.
pub fn diag_generator(d: usize, l: usize) -> ComplexOperator {
    let mut e = vec![0.0; d];
    for v in e.iter_mut().take(l) {
        *v = 1.0;
    }
    e[l] = -(l as f64);
    ComplexOperator::diagonal(&e).scale(diag_norm(l))
}

/// The `d² - 1` traceless generators: symmetric ones for `i < j`,
/// antisymmetric ones for `i < j`, then diagonal ones for `l = 1..d-1`.
pub fn gellmann_basis(d: usize) -> Result<Vec<ComplexOperator>> {
    check_dim(d)?;
    let pairs = index_pairs(d);
    let mut out = Vec::with_capacity(d * d - 1);
    out.extend(pairs.iter().map(|&(i, j)| sym_generator(d, i, j)));
    out.extend(pairs.iter().map(|&(i, j)| antisym_generator(d, i, j)));
    out.extend((1..d).map(|l| diag_generator(d, l)));
    Ok(out)
}

/// All `(i, j)` with `i < j`, 0-based, in row-major order.
pub fn index_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

/// Coefficients of `O = w I + Σ x_ij X_ij + Σ y_ij Y_ij + Σ z_l Z_l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliDecomposition {
    pub dim: usize,
    pub w: f64,
    /// `((i, j), x_ij)` with 0-based `i < j`.
    pub x: Vec<((usize, usize), f64)>,
    pub y: Vec<((usize, usize), f64)>,
    /// `z[l-1]` for `l = 1..d-1`.
    pub z: Vec<f64>,
}

impl PauliDecomposition {
    pub fn reconstruct(&self) -> ComplexOperator {
        let d = self.dim;
        let mut op = ComplexOperator::identity(d).scale(self.w);
        let add = |op: &mut ComplexOperator, c: f64, g: &ComplexOperator| {
            op.add_scaled(c, g).expect("same dimension")
        };
        for &((i, j), c) in &self.x {
            add(&mut op, c, &sym_generator(d, i, j));
        }
        for &((i, j), c) in &self.y {
            add(&mut op, c, &antisym_generator(d, i, j));
        }
        for (l, &c) in self.z.iter().enumerate() {
            add(&mut op, c, &diag_generator(d, l + 1));
        }
        op
    }

    /// Coefficient of `|i><i| - |l+1><l+1|` after spreading `z_l` over its
    /// `l` pairwise differences; `i < l + 1`.
    pub fn z_prime(&self, l: usize) -> f64 {
        diag_norm(l) * self.z[l - 1]
    }
}

/// Coefficients by trace inner products.
pub fn decompose(op: &ComplexOperator) -> Result<PauliDecomposition> {
    if !op.is_hermitian() {
        return Err(Error::NotHermitian {
            deviation: op.hermitian_deviation(),
        });
    }
    let d = op.dim();
    check_dim(d)?;
    let pairs = index_pairs(d);
    let m = op.matrix();
    let w = op.trace().re / d as f64;
    let x = pairs.iter().map(|&(i, j)| ((i, j), m[(i, j)].re)).collect();
    let y = pairs.iter().map(|&(i, j)| ((i, j), -m[(i, j)].im)).collect();
    let z = (1..d)
        .map(|l| {
            let head: f64 = (0..l).map(|k| m[(k, k)].re).sum();
            0.5 * diag_norm(l) * (head - l as f64 * m[(l, l)].re)
        })
        .collect();
    Ok(PauliDecomposition { dim: d, w, x, y, z })
}
