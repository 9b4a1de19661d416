// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::operator::{qubit_operator, ComplexOperator};
use crate::error::{Error, Result};
use crate::tolerance::UNIT_NORM_TOL;

/// A unit Bloch vector. `σ·n` is the dichotomic observable it labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction([f64; 3]);

impl Direction {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_TOL || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self([x, y, z]))
    }

    /// Rescales any nonzero finite vector to unit length.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let norm = norm3(v);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    /// Polar angle `theta` from +z, azimuth `phi` from +x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self([st * cp, st * sp, ct])
    }

    pub const fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub const fn y() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub const fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot3(self.0, other.0)
    }

    pub fn cross(&self, other: &Self) -> [f64; 3] {
        cross3(self.0, other.0)
    }

    pub fn neg(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// `σ·n` embedded as Pauli-basis coefficients `(0, n)`.
    pub fn pauli_coefficients(&self) -> [f64; 4] {
        [0.0, self.0[0], self.0[1], self.0[2]]
    }
}

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Direction::new(v[0], v[1], v[2])
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> [f64; 3] {
        d.0
    }
}

/// `n_x σ_x + n_y σ_y + n_z σ_z`.
pub fn pauli_from_direction(n: &Direction) -> ComplexOperator {
    qubit_operator(n.pauli_coefficients())
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub(crate) fn axpy3(s: f64, a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [s * a[0] + b[0], s * a[1] + b[1], s * a[2] + b[2]]
}
