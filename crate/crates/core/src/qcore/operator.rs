// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tolerance::HERMITIAN_TOL;

pub type C64 = Complex64;

/// A dense square complex matrix with a cached Hermiticity flag.
///
/// The flag is set only when `max |O_ij - conj(O_ji)| <= 1e-10`; it is
/// recomputed whenever an operator is built from raw entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    mat: DMatrix<C64>,
    hermitian: bool,
}

impl ComplexOperator {
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::Empty("operator"));
        }
        let hermitian = hermitian_deviation(&mat) <= HERMITIAN_TOL;
        Ok(Self { mat, hermitian })
    }

    /// Row-major construction from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty("operator rows"));
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        Self::from_matrix(DMatrix::from_fn(dim, dim, |r, c| rows[r][c]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<C64>) -> Self {
        let hermitian = hermitian_deviation(&mat) <= HERMITIAN_TOL;
        Self { mat, hermitian }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
            hermitian: true,
        }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        Self {
            mat: DMatrix::from_fn(n, n, |r, c| {
                if r == c {
                    C64::new(entries[r], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            mat: &self.mat * C64::new(s, 0.0),
            hermitian: self.hermitian,
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kronecker(&other.mat),
            hermitian: self.hermitian && other.hermitian,
        }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self::from_matrix_unchecked(&self.mat * &other.mat))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self::from_matrix_unchecked(&self.mat + &other.mat))
    }

    /// `self + s * other`, in place.
    pub fn add_scaled(&mut self, s: f64, other: &Self) -> Result<()> {
        self.check_dim(other.dim())?;
        self.mat += &other.mat * C64::new(s, 0.0);
        self.hermitian = hermitian_deviation(&self.mat) <= HERMITIAN_TOL;
        Ok(())
    }

    /// `½ (self + self†)`.
    pub fn hermitian_part(&self) -> Self {
        let m = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        Self::from_matrix_unchecked(m)
    }

    /// `max |entry - conj(transposed entry)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.mat)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Ascending eigenvalues of a Hermitian operator.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.hermitian {
            return Err(Error::NotHermitian {
                deviation: self.hermitian_deviation(),
            });
        }
        let h = self.hermitian_part();
        let mut ev: Vec<f64> = h.mat.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        let sq = &self.mat * &self.mat;
        sq.iter()
            .zip(self.mat.iter())
            .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Real parts of all entries, row-major, paired with imaginary parts.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|r| {
                (0..self.dim())
                    .map(|c| {
                        let z = self.mat[(r, c)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|p| C64::new(p[0], p[1])).collect())
            .collect();
        Self::from_rows(&rows)
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other,
            });
        }
        Ok(())
    }
}

fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            dev = dev.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    dev
}

impl Add for &ComplexOperator {
    type Output = ComplexOperator;

    fn add(self, rhs: &ComplexOperator) -> ComplexOperator {
        self.try_add(rhs).expect("operator dimensions must match")
    }
}

impl Sub for &ComplexOperator {
    type Output = ComplexOperator;

    fn sub(self, rhs: &ComplexOperator) -> ComplexOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions must match");
        ComplexOperator::from_matrix_unchecked(&self.mat - &rhs.mat)
    }
}

impl Mul for &ComplexOperator {
    type Output = ComplexOperator;

    fn mul(self, rhs: &ComplexOperator) -> ComplexOperator {
        self.compose(rhs).expect("operator dimensions must match")
    }
}

impl Neg for &ComplexOperator {
    type Output = ComplexOperator;

    fn neg(self) -> ComplexOperator {
        self.scale(-1.0)
    }
}

/// Kronecker product in list order; the first factor is the most significant.
pub fn tensor_product(factors: &[ComplexOperator]) -> Result<ComplexOperator> {
    let (first, rest) = factors.split_first().ok_or(Error::Empty("tensor factors"))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| acc.kron(f)))
}

pub fn pauli_x() -> ComplexOperator {
    ComplexOperator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
}

pub fn pauli_y() -> ComplexOperator {
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    ComplexOperator::from_rows(&[vec![z, -i], vec![i, z]]).unwrap()
}

pub fn pauli_z() -> ComplexOperator {
    ComplexOperator::diagonal(&[1.0, -1.0])
}

/// `I, σx, σy, σz` in that order.
pub fn pauli_basis() -> [ComplexOperator; 4] {
    [ComplexOperator::identity(2), pauli_x(), pauli_y(), pauli_z()]
}

/// The 2×2 operator `c0 I + c1 σx + c2 σy + c3 σz`.
pub fn qubit_operator(c: [f64; 4]) -> ComplexOperator {
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(c[0] + c[3], 0.0),
            C64::new(c[1], -c[2]),
            C64::new(c[1], c[2]),
            C64::new(c[0] - c[3], 0.0),
        ],
    );
    ComplexOperator {
        mat: m,
        hermitian: true,
    }
}

/// Coefficients `(c0, c1, c2, c3)` of a Hermitian 2×2 operator in the Pauli basis.
pub fn pauli_coefficients(op: &ComplexOperator) -> Result<[f64; 4]> {
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: op.dim(),
        });
    }
    if !op.is_hermitian() {
        return Err(Error::NotHermitian {
            deviation: op.hermitian_deviation(),
        });
    }
    let m = op.matrix();
    Ok([
        0.5 * (m[(0, 0)].re + m[(1, 1)].re),
        0.5 * (m[(0, 1)].re + m[(1, 0)].re),
        0.5 * (m[(1, 0)].im - m[(0, 1)].im),
        0.5 * (m[(0, 0)].re - m[(1, 1)].re),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_of_z_and_identity() {
        let op = tensor_product(&[pauli_z(), ComplexOperator::identity(2)]).unwrap();
        assert!(op.approx_eq(&ComplexOperator::diagonal(&[1.0, 1.0, -1.0, -1.0]), 0.0));
    }

    #[test]
    fn tensor_of_three_identities() {
        let id = ComplexOperator::identity(2);
        let op = tensor_product(&[id.clone(), id.clone(), id]).unwrap();
        assert!(op.approx_eq(&ComplexOperator::identity(8), 0.0));
    }

    #[test]
    fn empty_tensor_is_an_error() {
        assert_eq!(tensor_product(&[]), Err(Error::Empty("tensor factors")));
    }

    #[test]
    fn hermitian_flag() {
        assert!(pauli_y().is_hermitian());
        let i = C64::new(0.0, 1.0);
        let z = C64::new(0.0, 0.0);
        let skew = ComplexOperator::from_rows(&[vec![z, i], vec![i, z]]).unwrap();
        assert!(!skew.is_hermitian());
        assert!(skew.eigenvalues().is_err());
    }

    #[test]
    fn non_square_rows_rejected() {
        let r = ComplexOperator::from_real_rows(&[vec![1.0, 0.0], vec![0.0]]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pauli_coefficient_round_trip() {
        let c = [0.3, -0.2, 0.7, 0.1];
        let back = pauli_coefficients(&qubit_operator(c)).unwrap();
        for k in 0..4 {
            assert!((c[k] - back[k]).abs() < 1e-15);
        }
        let y = pauli_coefficients(&pauli_y()).unwrap();
        assert_eq!(y, [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn eigenvalues_are_ascending() {
        let ev = ComplexOperator::diagonal(&[3.0, -1.0, 2.0]).eigenvalues().unwrap();
        assert_eq!(ev, vec![-1.0, 2.0, 3.0]);
    }
}
