// SPDX-License-Identifier: Apache-2.0

//! Multi-start search over measurement directions.

use rand::Rng;

use super::polynomials::ObservablePair;
use crate::correlator::Polynomial;
use crate::optimize::{multistart, NelderMeadOptions};
use crate::qcore::{CorrelationSource, Direction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    pub nelder_mead: NelderMeadOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 0,
            nelder_mead: NelderMeadOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedSettings {
    pub observables: Vec<ObservablePair>,
    pub value: f64,
}

impl OptimizedSettings {
    pub fn settings(&self) -> Vec<Vec<[f64; 3]>> {
        ObservablePair::settings(&self.observables)
    }
}

/// Pairs of directions from spherical angles `(θ, φ, θ', φ')` per party.
pub fn pairs_from_angles(x: &[f64]) -> Vec<ObservablePair> {
    x.chunks_exact(4)
        .map(|c| {
            ObservablePair::new(
                Direction::from_angles(c[0], c[1]),
                Direction::from_angles(c[2], c[3]),
            )
        })
        .collect()
}

fn angles_from_pairs(pairs: &[ObservablePair]) -> Vec<f64> {
    let angles = |d: &Direction| {
        let [x, y, z] = d.components();
        [z.clamp(-1.0, 1.0).acos(), y.atan2(x)]
    };
    pairs
        .iter()
        .flat_map(|p| {
            let [t, f] = angles(&p.a);
            let [tp, fp] = angles(&p.a_prime);
            [t, f, tp, fp]
        })
        .collect()
}

/// Minimizes `sign · <P>` over all settings.
pub fn optimize_settings<S: CorrelationSource + ?Sized>(
    poly: &Polynomial,
    source: &S,
    sign: f64,
    opts: &SearchOptions,
) -> OptimizedSettings {
    let n = poly.n_parties();
    let f = |x: &[f64]| {
        let settings = ObservablePair::settings(&pairs_from_angles(x));
        sign * poly.expectation_unchecked(source, &settings)
    };
    let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
        (0..4 * n)
            .map(|k| {
                if k % 2 == 0 {
                    rng.random_range(0.0..std::f64::consts::PI)
                } else {
                    rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
                }
            })
            .collect()
    };
    let m = multistart(&f, &sample, opts.restarts, opts.seed, &opts.nelder_mead);
    let observables = pairs_from_angles(&m.x);
    let value = poly.expectation_unchecked(source, &ObservablePair::settings(&observables));
    OptimizedSettings { observables, value }
}

/// Settings maximizing `|<P>|`; ties go to the negative side.
pub fn maximize_abs<S: CorrelationSource + ?Sized>(
    poly: &Polynomial,
    source: &S,
    opts: &SearchOptions,
) -> OptimizedSettings {
    let low = optimize_settings(poly, source, 1.0, opts);
    let high = optimize_settings(poly, source, -1.0, opts);
    if high.value.abs() > low.value.abs() {
        high
    } else {
        low
    }
}

/// Local refinement of a known configuration.
pub fn refine_settings<S: CorrelationSource + ?Sized>(
    poly: &Polynomial,
    source: &S,
    start: &[ObservablePair],
    sign: f64,
    opts: &NelderMeadOptions,
) -> OptimizedSettings {
    let f = |x: &[f64]| {
        sign * poly.expectation_unchecked(source, &ObservablePair::settings(&pairs_from_angles(x)))
    };
    let m = crate::optimize::nelder_mead(&f, &angles_from_pairs(start), opts);
    let observables = pairs_from_angles(&m.x);
    let value = poly.expectation_unchecked(source, &ObservablePair::settings(&observables));
    OptimizedSettings { observables, value }
}
