// SPDX-License-Identifier: Apache-2.0

//! Per-qubit doublet geometry.
//!
//! Each qubit carries an orthonormal triad of mean directions `a, a', a''`.
//! Around every mean sits a doublet of unit vectors separated by the angle
//! `α`, whose normalized sum is the mean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::{Binding, Observable};
use crate::qcore::{axpy3, cross3, dot3, norm3, Direction};
use crate::tolerance::GEOMETRY_TOL;

/// Means and doublets of one qubit, indexed by prime count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDoublets {
    pub means: [Direction; 3],
    /// Unit vectors orthogonal to each mean fixing the doublet plane.
    pub planes: [Direction; 3],
    pub doublets: [[Direction; 2]; 3],
}

/// Directions of every qubit for a given doublet angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigRecord", into = "ConfigRecord")]
pub struct DirectionConfig {
    pub alpha: f64,
    pub qubits: Vec<QubitDoublets>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct QubitRecord {
    a: [f64; 3],
    a_prime: [f64; 3],
    a_dprime: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    planes: Option<[[f64; 3]; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ConfigRecord {
    alpha: f64,
    qubits: Vec<QubitRecord>,
}

impl TryFrom<ConfigRecord> for DirectionConfig {
    type Error = Error;

    fn try_from(r: ConfigRecord) -> Result<Self> {
        let triads: Vec<[[f64; 3]; 3]> = r.qubits.iter().map(|q| [q.a, q.a_prime, q.a_dprime]).collect();
        let planes: Option<Vec<[[f64; 3]; 3]>> = if r.qubits.iter().all(|q| q.planes.is_none()) {
            None
        } else {
            Some(
                r.qubits
                    .iter()
                    .zip(&triads)
                    .map(|(q, t)| q.planes.unwrap_or_else(|| default_planes(t)))
                    .collect(),
            )
        };
        make_direction_config(r.alpha, &triads, planes.as_deref())
    }
}

impl From<DirectionConfig> for ConfigRecord {
    fn from(c: DirectionConfig) -> Self {
        Self {
            alpha: c.alpha,
            qubits: c
                .qubits
                .iter()
                .map(|q| {
                    let t = q.means.map(|d| d.components());
                    let p = q.planes.map(|d| d.components());
                    QubitRecord {
                        a: t[0],
                        a_prime: t[1],
                        a_dprime: t[2],
                        planes: (p != default_planes(&t)).then_some(p),
                    }
                })
                .collect(),
        }
    }
}

/// The next triad vector, cyclically.
fn default_planes(triad: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    [triad[1], triad[2], triad[0]]
}

/// Builds doublets by rotating each mean by `±α/2` inside the plane it
/// spans with the matching `planes` vector (default: the next triad vector).
pub fn make_direction_config(
    alpha: f64,
    triads: &[[[f64; 3]; 3]],
    planes: Option<&[[[f64; 3]; 3]]>,
) -> Result<DirectionConfig> {
    if !(alpha > 0.0 && alpha <= std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside (0, π]")));
    }
    if triads.is_empty() {
        return Err(Error::Empty("qubits"));
    }
    if let Some(p) = planes {
        if p.len() != triads.len() {
            return Err(Error::DimensionMismatch {
                expected: triads.len(),
                found: p.len(),
            });
        }
    }
    let (s, c) = (0.5 * alpha).sin_cos();
    let qubits = triads
        .iter()
        .enumerate()
        .map(|(q, t)| {
            check_orthonormal(t)?;
            let plane_in = planes.map_or_else(|| default_planes(t), |p| p[q]);
            let mut means = [Direction::x(); 3];
            let mut perp = [Direction::x(); 3];
            let mut doublets = [[Direction::x(); 2]; 3];
            for k in 0..3 {
                let m = t[k];
                // Component of the plane vector orthogonal to the mean.
                let u = axpy3(-dot3(plane_in[k], m), m, plane_in[k]);
                if norm3(u) < 1e-8 {
                    return Err(Error::InvalidParameter(format!(
                        "plane vector of qubit {} is parallel to its mean",
                        q + 1
                    )));
                }
                let u = Direction::normalized(u)?;
                means[k] = Direction::normalized(m)?;
                perp[k] = u;
                let plus = axpy3(s, u.components(), [m[0] * c, m[1] * c, m[2] * c]);
                let minus = axpy3(-s, u.components(), [m[0] * c, m[1] * c, m[2] * c]);
                doublets[k] = [Direction::normalized(plus)?, Direction::normalized(minus)?];
            }
            Ok(QubitDoublets {
                means,
                planes: perp,
                doublets,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DirectionConfig { alpha, qubits })
}

fn check_orthonormal(t: &[[f64; 3]; 3]) -> Result<()> {
    for i in 0..3 {
        if (norm3(t[i]) - 1.0).abs() > GEOMETRY_TOL {
            return Err(Error::NotUnit { norm: norm3(t[i]) });
        }
        for j in i + 1..3 {
            let d = dot3(t[i], t[j]);
            if d.abs() > GEOMETRY_TOL {
                return Err(Error::InvalidParameter(format!(
                    "triad vectors {i} and {j} are not orthogonal (dot {d:.3e})"
                )));
            }
        }
    }
    Ok(())
}

/// Triad `(x, y, z)` on every qubit but the last, which gets `(y, x, z)`.
pub fn canonical_triads(n: usize) -> Vec<[[f64; 3]; 3]> {
    let (x, y, z) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
    (0..n)
        .map(|i| if i + 1 == n { [y, x, z] } else { [x, y, z] })
        .collect()
}

/// Triad from a rotation (columns) with `a''` optionally reversed.
pub fn triad_from_rotation(r: &[[f64; 3]; 3], flip_dprime: bool) -> [[f64; 3]; 3] {
    let z = if flip_dprime {
        [-r[2][0], -r[2][1], -r[2][2]]
    } else {
        r[2]
    };
    [r[0], r[1], z]
}

impl DirectionConfig {
    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// `cos(α/2)`, the length of each doublet sum divided by two.
    pub fn half_cos(&self) -> f64 {
        (0.5 * self.alpha).cos()
    }

    /// Mean directions as `settings[qubit][primes]`.
    pub fn mean_settings(&self) -> Vec<Vec<[f64; 3]>> {
        self.qubits
            .iter()
            .map(|q| q.means.iter().map(|d| d.components()).collect())
            .collect()
    }

    pub fn triads(&self) -> Vec<[[f64; 3]; 3]> {
        self.qubits.iter().map(|q| q.means.map(|d| d.components())).collect()
    }

    /// Binds means (member 0) and doublet members 1 and 2 of every prime
    /// count on every qubit.
    pub fn binding(&self) -> Binding {
        let mut b = Binding::new();
        for (i, q) in self.qubits.iter().enumerate() {
            let party = i as u8 + 1;
            for k in 0..3 {
                b.insert(Observable::new(party, k as u8), &q.means[k]);
                for m in 0..2 {
                    b.insert(Observable::doublet(party, k as u8, m as u8 + 1), &q.doublets[k][m]);
                }
            }
        }
        b
    }

    /// Same triads and planes at a different angle.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let planes: Vec<[[f64; 3]; 3]> = self
            .qubits
            .iter()
            .map(|q| q.planes.map(|d| d.components()))
            .collect();
        make_direction_config(alpha, &self.triads(), Some(&planes))
    }

    /// Checks unit norms, in-doublet angles and orthogonality of the means.
    pub fn validate(&self) -> Result<()> {
        let cos_alpha = self.alpha.cos();
        for (i, q) in self.qubits.iter().enumerate() {
            check_orthonormal(&q.means.map(|d| d.components()))?;
            for k in 0..3 {
                let [d1, d2] = q.doublets[k];
                if (d1.dot(&d2) - cos_alpha).abs() > GEOMETRY_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "doublet {k} of qubit {} has angle cosine {} instead of {cos_alpha}",
                        i + 1,
                        d1.dot(&d2)
                    )));
                }
                let sum = axpy3(1.0, d1.components(), d2.components());
                let n = norm3(sum);
                let dev = norm3(axpy3(-1.0 / n, sum, q.means[k].components()));
                if n > 1e-12 && dev > GEOMETRY_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "doublet {k} of qubit {} does not sum along its mean",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest deviation of the triad from right-handedness (for
    /// diagnostics; both handednesses are valid).
    pub fn handedness(&self) -> Vec<f64> {
        self.qubits
            .iter()
            .map(|q| {
                dot3(
                    cross3(q.means[0].components(), q.means[1].components()),
                    q.means[2].components(),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn quarter_turn_doublet_about_z() {
        let triad = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]];
        let planes = [[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]];
        let c = make_direction_config(FRAC_PI_2, &[triad], Some(&planes)).unwrap();
        let [d1, d2] = c.qubits[0].doublets[1];
        let (s, co) = (FRAC_PI_4.sin(), FRAC_PI_4.cos());
        let want1 = [s, 0.0, co];
        let want2 = [-s, 0.0, co];
        for k in 0..3 {
            assert!((d1.components()[k] - want1[k]).abs() < 1e-15);
            assert!((d2.components()[k] - want2[k]).abs() < 1e-15);
        }
        c.validate().unwrap();
    }

    #[test]
    fn small_alpha_collapses_onto_means() {
        let c = make_direction_config(1e-9, &canonical_triads(3), None).unwrap();
        for q in &c.qubits {
            for k in 0..3 {
                for d in q.doublets[k] {
                    assert!(d.dot(&q.means[k]) > 1.0 - 1e-15);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [[1.0, 0.0, 0.0], [0.6, 0.8, 0.0], [0.0, 0.0, 1.0]];
        assert!(make_direction_config(1.0, &[bad], None).is_err());
        assert!(make_direction_config(0.0, &canonical_triads(3), None).is_err());
        assert!(make_direction_config(3.5, &canonical_triads(3), None).is_err());
        let parallel = [[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]];
        let t = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(make_direction_config(1.0, &[t], Some(&parallel)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = make_direction_config(2.0, &canonical_triads(3), None).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(!text.contains("planes"));
        let back: DirectionConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let tilted = make_direction_config(
            2.0,
            &canonical_triads(3),
            Some(&[
                [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
                [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
                [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
            ]),
        )
        .unwrap();
        let text = serde_json::to_string(&tilted).unwrap();
        let back: DirectionConfig = serde_json::from_str(&text).unwrap();
        assert!(back.qubits.iter().zip(&tilted.qubits).all(|(a, b)| {
            (0..3).all(|k| (0..2).all(|m| a.doublets[k][m].dot(&b.doublets[k][m]) > 1.0 - 1e-14))
        }));
    }

    #[test]
    fn binding_covers_all_observables() {
        let c = make_direction_config(1.0, &canonical_triads(2), None).unwrap();
        assert_eq!(c.binding().len(), 2 * 3 * 3);
        assert_eq!(c.handedness(), vec![1.0, -1.0]);
    }
}
