// SPDX-License-Identifier: Apache-2.0

//! Numerical searches over triad orientations and product states.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::geometry::{make_direction_config, triad_from_rotation, DirectionConfig};
use super::kinds::{WitnessForm, WitnessSpec};
use crate::correlator::Polynomial;
use crate::error::Result;
use crate::optimize::{multistart, nelder_mead, NelderMeadOptions};
use crate::qcore::sampling::rotation_from_vector;
use crate::qcore::{CorrelationSource, ProductCorrelations};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessSearchOptions {
    pub restarts: usize,
    pub seed: u64,
    pub nelder_mead: NelderMeadOptions,
}

impl Default for WitnessSearchOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 0,
            nelder_mead: NelderMeadOptions::default(),
        }
    }
}

/// Best configuration found and its witness value.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedConfig {
    pub config: DirectionConfig,
    pub value: f64,
}

/// Orientation parameters: one rotation vector per qubit, plus a `±` on
/// each `a''` chosen exhaustively.
struct TriadSpace {
    n: usize,
    flips: bool,
}

impl TriadSpace {
    fn settings(&self, x: &[f64], flip_mask: u32) -> Vec<Vec<[f64; 3]>> {
        x.chunks_exact(3)
            .enumerate()
            .map(|(q, v)| {
                let r = rotation_from_vector([v[0], v[1], v[2]]);
                triad_from_rotation(&r, flip_mask >> q & 1 == 1).to_vec()
            })
            .collect()
    }

    fn patterns(&self) -> u32 {
        if self.flips {
            1 << self.n
        } else {
            1
        }
    }

    /// Minimum over flip patterns of `f(settings)`, and the minimizing mask.
    fn best<F: Fn(&[Vec<[f64; 3]>]) -> f64>(&self, x: &[f64], f: &F) -> (f64, u32) {
        (0..self.patterns())
            .map(|m| (f(&self.settings(x, m)), m))
            .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
    }

    fn triads(&self, x: &[f64], mask: u32) -> Vec<[[f64; 3]; 3]> {
        self.settings(x, mask)
            .into_iter()
            .map(|s| [s[0], s[1], s[2]])
            .collect()
    }
}

fn sample_rotations(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..3 * n).map(|_| rng.random_range(-PI..PI)).collect()
}

/// Minimizes the witness value on `source` over all triad orientations at
/// a fixed `alpha`.
pub fn optimize_config<S: CorrelationSource + ?Sized>(
    spec: &WitnessSpec,
    source: &S,
    alpha: f64,
    opts: &WitnessSearchOptions,
) -> Result<OptimizedConfig> {
    let form = spec.form();
    let space = TriadSpace {
        n: spec.n,
        flips: form.uses_dprime(),
    };
    let eval = |s: &[Vec<[f64; 3]>]| form.correlator_part(source, s);
    let f = |x: &[f64]| space.best(x, &eval).0;
    let m = multistart(
        &f,
        &|rng: &mut ChaCha8Rng| sample_rotations(rng, spec.n),
        opts.restarts,
        opts.seed,
        &opts.nelder_mead,
    );
    finish(&space, &form, &m.x, alpha, source)
}

/// Local refinement of a configuration (orientation only).
pub fn refine_config<S: CorrelationSource + ?Sized>(
    spec: &WitnessSpec,
    source: &S,
    start: &DirectionConfig,
    opts: &NelderMeadOptions,
) -> Result<OptimizedConfig> {
    let form = spec.form();
    let space = TriadSpace {
        n: spec.n,
        flips: form.uses_dprime(),
    };
    let x0: Vec<f64> = start.triads().iter().flat_map(rotation_vector_of).collect();
    let eval = |s: &[Vec<[f64; 3]>]| form.correlator_part(source, s);
    let f = |x: &[f64]| space.best(x, &eval).0;
    let m = nelder_mead(&f, &x0, opts);
    let refined = finish(&space, &form, &m.x, start.alpha, source)?;
    let start_value = form.value(start.alpha, source, &start.mean_settings());
    Ok(if refined.value <= start_value {
        refined
    } else {
        OptimizedConfig {
            config: start.clone(),
            value: start_value,
        }
    })
}

fn finish<S: CorrelationSource + ?Sized>(
    space: &TriadSpace,
    form: &WitnessForm,
    x: &[f64],
    alpha: f64,
    source: &S,
) -> Result<OptimizedConfig> {
    let eval = |s: &[Vec<[f64; 3]>]| form.correlator_part(source, s);
    let (_, mask) = space.best(x, &eval);
    let config = make_direction_config(alpha, &orthonormalized(&space.triads(x, mask)), None)?;
    let value = form.value(alpha, source, &config.mean_settings());
    Ok(OptimizedConfig { config, value })
}

/// Re-orthonormalizes triads to remove rounding drift.
fn orthonormalized(triads: &[[[f64; 3]; 3]]) -> Vec<[[f64; 3]; 3]> {
    triads
        .iter()
        .map(|t| {
            let unit = |v: [f64; 3]| {
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                [v[0] / n, v[1] / n, v[2] / n]
            };
            let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            let sub = |a: [f64; 3], s: f64, b: [f64; 3]| [a[0] - s * b[0], a[1] - s * b[1], a[2] - s * b[2]];
            let e0 = unit(t[0]);
            let e1 = unit(sub(t[1], dot(t[1], e0), e0));
            let e2 = unit(sub(sub(t[2], dot(t[2], e0), e0), dot(t[2], e1), e1));
            [e0, e1, e2]
        })
        .collect()
}

/// Axis-angle vector of the rotation taking the coordinate axes to the
/// first two triad vectors (the third is recovered by the flip search).
fn rotation_vector_of(t: &[[f64; 3]; 3]) -> [f64; 3] {
    let c2 = [
        t[0][1] * t[1][2] - t[0][2] * t[1][1],
        t[0][2] * t[1][0] - t[0][0] * t[1][2],
        t[0][0] * t[1][1] - t[0][1] * t[1][0],
    ];
    // Columns t0, t1, c2; R[i][j] = column j, component i.
    let r = |i: usize, j: usize| [t[0], t[1], c2][j][i];
    let trace = r(0, 0) + r(1, 1) + r(2, 2);
    let angle = ((trace - 1.0) / 2.0).clamp(-1.0, 1.0).acos();
    if angle < 1e-12 {
        return [0.0; 3];
    }
    let axis = [r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)];
    let s = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if s < 1e-9 {
        // Half turn: axis from the symmetric part.
        let diag = [r(0, 0), r(1, 1), r(2, 2)];
        let k = (0..3).max_by(|&a, &b| diag[a].total_cmp(&diag[b])).expect("three");
        let mut v = [0.0; 3];
        v[k] = ((diag[k] + 1.0) / 2.0).max(0.0).sqrt();
        for j in 0..3 {
            if j != k {
                v[j] = (r(j, k) + r(k, j)) / (4.0 * v[k]);
            }
        }
        return [v[0] * PI, v[1] * PI, v[2] * PI];
    }
    [axis[0] / s * angle, axis[1] / s * angle, axis[2] / s * angle]
}

fn bloch(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Minimum of `<poly>` over pure product states for fixed settings.
pub fn product_state_minimum(
    poly: &Polynomial,
    settings: &[Vec<[f64; 3]>],
    opts: &WitnessSearchOptions,
) -> f64 {
    let n = poly.n_parties();
    let f = |x: &[f64]| {
        let src = ProductCorrelations {
            bloch: x.chunks_exact(2).map(|c| bloch(c[0], c[1])).collect(),
        };
        poly.expectation_unchecked(&src, settings)
    };
    let sample = |rng: &mut ChaCha8Rng| {
        (0..2 * n)
            .map(|k| {
                if k % 2 == 0 {
                    rng.random_range(0.0..PI)
                } else {
                    rng.random_range(-PI..PI)
                }
            })
            .collect()
    };
    multistart(&f, &sample, opts.restarts, opts.seed, &opts.nelder_mead).value
}

/// Numerical minimum of the witness value over pure product states and all
/// triad orientations at the given `alpha` (no range guard).
pub fn separable_minimum(spec: &WitnessSpec, alpha: f64, opts: &WitnessSearchOptions) -> f64 {
    let form = spec.form();
    let n = spec.n;
    let space = TriadSpace {
        n,
        flips: form.uses_dprime(),
    };
    let f = |x: &[f64]| {
        let (states, rotations) = x.split_at(2 * n);
        let src = ProductCorrelations {
            bloch: states.chunks_exact(2).map(|c| bloch(c[0], c[1])).collect(),
        };
        space
            .best(rotations, &|s: &[Vec<[f64; 3]>]| form.correlator_part(&src, s))
            .0
    };
    let sample = |rng: &mut ChaCha8Rng| {
        let mut x: Vec<f64> = (0..2 * n)
            .map(|k| {
                if k % 2 == 0 {
                    rng.random_range(0.0..PI)
                } else {
                    rng.random_range(-PI..PI)
                }
            })
            .collect();
        x.extend(sample_rotations(rng, n));
        x
    };
    let m = multistart(&f, &sample, opts.restarts, opts.seed, &opts.nelder_mead);
    form.constant_term(alpha) + m.value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlocality::mermin_pair;
    use crate::qcore::{ghz, CorrelationTensor};
    use crate::witness::geometry::canonical_triads;
    use crate::witness::kinds::WitnessKind;

    fn quick(restarts: usize) -> WitnessSearchOptions {
        WitnessSearchOptions {
            restarts,
            seed: 11,
            ..WitnessSearchOptions::default()
        }
    }

    #[test]
    fn separable_mermin_minimum_is_minus_one() {
        let cfg = make_direction_config(1.0, &canonical_triads(3), None).unwrap();
        let v = product_state_minimum(&mermin_pair(3).0, &cfg.mean_settings(), &quick(16));
        assert!((v + 1.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn ghz_first_witness_reaches_minus_three() {
        let spec = WitnessSpec::three(WitnessKind::E31);
        let t = CorrelationTensor::from_density(&ghz(3).unwrap()).unwrap();
        let best = optimize_config(&spec, &t, spec.alpha_max(), &quick(8)).unwrap();
        assert!((best.value + 3.0).abs() < 1e-8, "{}", best.value);
        best.config.validate().unwrap();
    }

    #[test]
    fn rotation_vector_round_trip() {
        let mut rng = crate::qcore::sampling::stream_rng(5, 0);
        for _ in 0..50 {
            let v = sample_rotations(&mut rng, 1);
            let r = rotation_from_vector([v[0], v[1], v[2]]);
            let back = rotation_from_vector(rotation_vector_of(&r));
            for j in 0..3 {
                for i in 0..3 {
                    assert!((r[j][i] - back[j][i]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn refine_never_worsens() {
        let spec = WitnessSpec::three(WitnessKind::E32);
        let t = CorrelationTensor::from_density(&ghz(3).unwrap()).unwrap();
        let start = make_direction_config(spec.alpha_max(), &canonical_triads(3), None).unwrap();
        let start_value = spec.form().value(start.alpha, &t, &start.mean_settings());
        let r = refine_config(&spec, &t, &start, &NelderMeadOptions::default()).unwrap();
        assert!(r.value <= start_value + 1e-15);
    }
}
