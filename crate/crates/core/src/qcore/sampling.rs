// SPDX-License-Identifier: Apache-2.0

//! Random directions, states and Hermitian operators for restarts and tests.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::direction::Direction;
use super::operator::{ComplexOperator, C64};
use super::state::DensityOperator;

/// Deterministic generator for restart `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Direction {
    loop {
        let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
        if let Ok(d) = Direction::normalized(v) {
            return d;
        }
    }
}

/// Haar-random pure state of dimension `dim`.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let amp: Vec<C64> = (0..dim)
        .map(|_| C64::new(gaussian(rng), gaussian(rng)))
        .collect();
    DensityOperator::pure(&amp).expect("nonzero gaussian vector")
}

/// Random full-rank mixed state `G G† / Tr(G G†)`.
pub fn random_mixed_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let g = DMatrix::from_fn(dim, dim, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m / C64::new(tr, 0.0);
    let op = ComplexOperator::from_matrix(m).expect("square").hermitian_part();
    DensityOperator::new(op).expect("positive by construction")
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexOperator {
    let g = DMatrix::from_fn(dim, dim, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    ComplexOperator::from_matrix(g).expect("square").hermitian_part()
}

/// Uniformly random rotation matrix (columns form a right-handed triad).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> [[f64; 3]; 3] {
    let v = [
        gaussian(rng),
        gaussian(rng),
        gaussian(rng),
        gaussian(rng),
    ];
    let n = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    rotation_from_quaternion([v[0] / n, v[1] / n, v[2] / n, v[3] / n])
}

/// Rotation matrix of a unit quaternion `(w, x, y, z)`; columns are the
/// images of the coordinate axes.
pub fn rotation_from_quaternion(q: [f64; 4]) -> [[f64; 3]; 3] {
    let [w, x, y, z] = q;
    // Rows of R; we return columns.
    let r = [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ];
    [
        [r[0][0], r[1][0], r[2][0]],
        [r[0][1], r[1][1], r[2][1]],
        [r[0][2], r[1][2], r[2][2]],
    ]
}

/// Rotation by the axis-angle vector `v` (Rodrigues); returns columns.
pub fn rotation_from_vector(v: [f64; 3]) -> [[f64; 3]; 3] {
    let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if angle < 1e-300 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    let (s, c) = (0.5 * angle).sin_cos();
    let k = s / angle;
    rotation_from_quaternion([c, v[0] * k, v[1] * k, v[2] * k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::direction::{cross3, dot3};

    #[test]
    fn rotations_are_orthonormal_and_right_handed() {
        let mut rng = stream_rng(7, 0);
        for _ in 0..50 {
            let r = random_rotation(&mut rng);
            for a in 0..3 {
                for b in 0..3 {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((dot3(r[a], r[b]) - want).abs() < 1e-12);
                }
            }
            let c = cross3(r[0], r[1]);
            for k in 0..3 {
                assert!((c[k] - r[2][k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a: f64 = stream_rng(3, 5).random();
        let b: f64 = stream_rng(3, 5).random();
        let c: f64 = stream_rng(3, 6).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = stream_rng(1, 0);
        let rho = random_mixed_state(&mut rng, 4);
        assert!(rho.purity() < 1.0);
        let psi = random_pure_state(&mut rng, 8);
        assert!((psi.purity() - 1.0).abs() < 1e-12);
        assert!(random_hermitian(&mut rng, 5).is_hermitian());
    }
}
