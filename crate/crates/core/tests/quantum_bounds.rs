// SPDX-License-Identifier: Apache-2.0

//! Random settings and states never exceed the quantum maxima, and GHZ
//! states with noise behave as white-noise scaling predicts.

use pseudoprob::nonlocality::{NonlocalityKind, ObservablePair};
use pseudoprob::qcore::sampling::{random_direction, random_mixed_state, random_pure_state, stream_rng};
use pseudoprob::scan::{threshold, Inequality, NoisyFamily, ScanOptions};
use pseudoprob::witness::WitnessKind;
use pseudoprob::{ghz, CorrelationTensor};

#[test]
fn tsirelson_type_maxima_hold() {
    let s3 = NonlocalityKind::Svetlichny.polynomial(3).unwrap();
    let m3 = NonlocalityKind::Mermin.polynomial(3).unwrap();
    for i in 0..200 {
        let mut rng = stream_rng(90, i);
        let rho = if i % 2 == 0 {
            random_pure_state(&mut rng, 8)
        } else {
            random_mixed_state(&mut rng, 8)
        };
        let t = CorrelationTensor::from_density(&rho).unwrap();
        let pairs: Vec<ObservablePair> = (0..3)
            .map(|_| ObservablePair::new(random_direction(&mut rng), random_direction(&mut rng)))
            .collect();
        let settings = ObservablePair::settings(&pairs);
        assert!(s3.expectation_unchecked(&t, &settings).abs() <= 4.0 * 2f64.sqrt() + 1e-9);
        assert!(m3.expectation_unchecked(&t, &settings).abs() <= 4.0 + 1e-9);
    }
}

#[test]
fn scan_is_deterministic_per_seed() {
    let family = NoisyFamily::new(ghz(3).unwrap()).unwrap();
    let opts = ScanOptions {
        restarts: 6,
        seed: 11,
        ..ScanOptions::default()
    };
    for ineq in [
        Inequality::Nonlocality(NonlocalityKind::Svetlichny),
        Inequality::Witness(WitnessKind::E34),
        Inequality::Witness(WitnessKind::B31),
    ] {
        let a = threshold(ineq, &family, &opts).unwrap();
        let b = threshold(ineq, &family, &opts).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn noisy_values_scale_linearly() {
    let m3 = NonlocalityKind::Mermin.polynomial(3).unwrap();
    let base = CorrelationTensor::from_density(&ghz(3).unwrap()).unwrap();
    let settings = ObservablePair::settings(&ObservablePair::canonical(3));
    let v1 = m3.expectation_unchecked(&base, &settings);
    for p in [0.0, 0.3, 0.77] {
        let v = m3.expectation_unchecked(&base.with_white_noise(p), &settings);
        assert!((v - p * v1).abs() < 1e-12);
    }
}
