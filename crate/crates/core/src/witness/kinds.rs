// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::geometry::DirectionConfig;
use crate::correlator::Polynomial;
use crate::error::{Error, Result};
use crate::nonlocality::{mermin_pair, Report};
use crate::qcore::{expectation, ComplexOperator, CorrelationSource, CorrelationTensor, DensityOperator};

/// Largest register for the N-qubit witness.
pub const MAX_WITNESS_QUBITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessKind {
    #[serde(rename = "E3_1")]
    E31,
    #[serde(rename = "E3_2")]
    E32,
    #[serde(rename = "E3_3")]
    E33,
    #[serde(rename = "E3_4")]
    E34,
    #[serde(rename = "EN")]
    EN,
    #[serde(rename = "B3_1")]
    B31,
    #[serde(rename = "B3_2")]
    B32,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 7] = [
        WitnessKind::E31,
        WitnessKind::E32,
        WitnessKind::E33,
        WitnessKind::E34,
        WitnessKind::EN,
        WitnessKind::B31,
        WitnessKind::B32,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            WitnessKind::E31 => "E3_1",
            WitnessKind::E32 => "E3_2",
            WitnessKind::E33 => "E3_3",
            WitnessKind::E34 => "E3_4",
            WitnessKind::EN => "EN",
            WitnessKind::B31 => "B3_1",
            WitnessKind::B32 => "B3_2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown witness '{s}'")))
    }

    pub fn is_bilinear(&self) -> bool {
        matches!(self, WitnessKind::B31 | WitnessKind::B32)
    }
}

/// A witness on a fixed number of qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub kind: WitnessKind,
    #[serde(rename = "N")]
    pub n: usize,
}

impl WitnessSpec {
    pub fn new(kind: WitnessKind, n: usize) -> Result<Self> {
        match kind {
            WitnessKind::EN if !(3..=MAX_WITNESS_QUBITS).contains(&n) => Err(
                Error::InvalidParameter(format!("EN needs 3..={MAX_WITNESS_QUBITS} qubits, got {n}")),
            ),
            WitnessKind::EN => Ok(Self { kind, n }),
            _ if n != 3 => Err(Error::InvalidParameter(format!(
                "{} is a three-qubit witness, got {n} qubits",
                kind.name()
            ))),
            _ => Ok(Self { kind, n }),
        }
    }

    /// Three-qubit kinds get `N = 3`.
    pub fn three(kind: WitnessKind) -> Self {
        Self { kind, n: 3 }
    }

    pub fn alpha_max(&self) -> f64 {
        alpha_max(self.kind, self.n)
    }

    pub fn form(&self) -> WitnessForm {
        witness_form(self.kind, self.n)
    }
}

/// Largest doublet angle for which every fully separable state gives a
/// nonnegative witness value.
pub fn alpha_max(kind: WitnessKind, n: usize) -> f64 {
    match kind {
        WitnessKind::E31 => (-7.0f64 / 8.0).acos(),
        WitnessKind::E32 => (-31.0f64 / 49.0).acos(),
        WitnessKind::E33 => (-23.0f64 / 25.0).acos(),
        // Known to three digits only.
        WitnessKind::E34 => (-0.954f64).acos(),
        WitnessKind::B31 => (-3.0f64 / 4.0).acos(),
        WitnessKind::B32 => (-1.0f64 / 7.0).acos(),
        WitnessKind::EN => {
            let m = 2f64.powi(2 * n as i32 - 3);
            (-(m - 1.0) / m).acos()
        }
    }
}

/// `constant · cos^power(α/2) + <linear> - Σ <square_k>²`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessForm {
    pub constant: f64,
    pub cos_power: i32,
    pub linear: Polynomial,
    pub squares: Vec<Polynomial>,
}

impl WitnessForm {
    pub fn constant_term(&self, alpha: f64) -> f64 {
        self.constant * (0.5 * alpha).cos().powi(self.cos_power)
    }

    /// Whether any term involves the double-primed means.
    pub fn uses_dprime(&self) -> bool {
        std::iter::once(&self.linear)
            .chain(&self.squares)
            .any(|p| p.symbols().iter().any(|&(_, k)| k == 2))
    }

    /// Correlator part on a source, with `settings[qubit][primes]`.
    pub fn correlator_part<S: CorrelationSource + ?Sized>(
        &self,
        source: &S,
        settings: &[Vec<[f64; 3]>],
    ) -> f64 {
        let lin = if self.linear.is_empty() {
            0.0
        } else {
            self.linear.expectation_unchecked(source, settings)
        };
        let sq: f64 = self
            .squares
            .iter()
            .map(|q| q.expectation_unchecked(source, settings).powi(2))
            .sum();
        lin - sq
    }

    pub fn value<S: CorrelationSource + ?Sized>(
        &self,
        alpha: f64,
        source: &S,
        settings: &[Vec<[f64; 3]>],
    ) -> f64 {
        self.constant_term(alpha) + self.correlator_part(source, settings)
    }
}

fn p3(factors: &[(usize, u8)], c: f64) -> Polynomial {
    Polynomial::product(3, factors, c)
}

fn dprime_pairs(weight: f64) -> Polynomial {
    [(0, 1), (1, 2), (2, 0)]
        .iter()
        .fold(Polynomial::zero(3), |acc, &(i, j)| acc.add(&p3(&[(i, 2), (j, 2)], weight)))
}

fn e34_polynomial() -> Polynomial {
    let mut p = Polynomial::zero(3);
    for i in 0..3 {
        p = p.add(&p3(&[(i, 2)], 1.0));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            p = p
                .add(&p3(&[(i, 0), (j, 0)], 2.0))
                .add(&p3(&[(i, 1), (j, 1)], 2.0))
                .add(&p3(&[(i, 2), (j, 2)], -1.0));
        }
    }
    p = p.add(&p3(&[(0, 2), (1, 2), (2, 2)], -3.0));
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        p = p
            .add(&p3(&[(i, 0), (j, 0), (k, 2)], 2.0))
            .add(&p3(&[(i, 1), (j, 1), (k, 2)], 2.0));
    }
    p
}

pub fn witness_form(kind: WitnessKind, n: usize) -> WitnessForm {
    let linear = |constant: f64, linear: Polynomial| WitnessForm {
        constant,
        cos_power: 1,
        linear,
        squares: Vec::new(),
    };
    let m3 = || mermin_pair(3).0;
    match kind {
        WitnessKind::E31 => linear(4.0, m3()),
        WitnessKind::E32 => linear(7.0, m3().add(&dprime_pairs(1.0))),
        WitnessKind::E33 => linear(5.0, m3().add(&dprime_pairs(1.0 / 3.0))),
        WitnessKind::E34 => linear(33.0, e34_polynomial()),
        WitnessKind::EN => linear(2f64.powi(n as i32 - 1), mermin_pair(n).0),
        WitnessKind::B31 => WitnessForm {
            constant: 8.0,
            cos_power: 2,
            linear: Polynomial::zero(3),
            squares: vec![
                p3(&[(0, 0), (1, 0), (2, 0)], 1.0).add(&p3(&[(0, 1), (1, 1), (2, 0)], 1.0)),
                p3(&[(0, 1), (1, 0), (2, 1)], 1.0).sub(&p3(&[(0, 0), (1, 1), (2, 1)], 1.0)),
            ],
        },
        WitnessKind::B32 => WitnessForm {
            constant: 7.0,
            cos_power: 2,
            linear: Polynomial::zero(3),
            squares: vec![
                p3(&[(0, 2), (1, 2)], 1.0),
                p3(&[(1, 2), (2, 2)], 1.0),
                p3(&[(2, 2), (0, 2)], 1.0),
                p3(&[(0, 0), (1, 0), (2, 0)], 1.0),
                p3(&[(0, 0), (1, 1), (2, 1)], 1.0),
                p3(&[(0, 1), (1, 0), (2, 1)], 1.0),
                p3(&[(0, 1), (1, 1), (2, 0)], 1.0),
            ],
        },
    }
}

/// Whether witnesses may be evaluated beyond their safe doublet angle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RangePolicy {
    pub allow_unsafe_alpha: bool,
}

/// Returns whether `alpha` lies beyond the safe range, or an error when
/// that is not allowed.
pub fn check_alpha(spec: &WitnessSpec, alpha: f64, policy: RangePolicy) -> Result<bool> {
    let max = spec.alpha_max();
    let beyond = alpha > max * (1.0 + 1e-12);
    if beyond && !policy.allow_unsafe_alpha {
        return Err(Error::AlphaOutOfRange {
            kind: spec.kind.name().to_string(),
            alpha,
            alpha_max: max,
        });
    }
    Ok(beyond)
}

fn check_config(spec: &WitnessSpec, cfg: &DirectionConfig) -> Result<()> {
    if cfg.n_qubits() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            found: cfg.n_qubits(),
        });
    }
    Ok(())
}

/// Operator whose expectation is the witness value (linear kinds).
pub fn witness_operator(
    spec: &WitnessSpec,
    cfg: &DirectionConfig,
    policy: RangePolicy,
) -> Result<ComplexOperator> {
    if spec.kind.is_bilinear() {
        return Err(Error::InvalidParameter(format!(
            "{} is quadratic in expectations and has no operator form",
            spec.kind.name()
        )));
    }
    check_config(spec, cfg)?;
    check_alpha(spec, cfg.alpha, policy)?;
    let form = spec.form();
    let mut op = form.linear.to_operator(&cfg.mean_settings())?;
    op.add_scaled(
        form.constant_term(cfg.alpha),
        &ComplexOperator::identity(1 << spec.n),
    )?;
    Ok(op)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessValue {
    pub value: f64,
    pub detected: bool,
    pub unsafe_alpha: bool,
    pub config: DirectionConfig,
}

impl WitnessValue {
    pub fn new(value: f64, unsafe_alpha: bool, config: DirectionConfig) -> Self {
        Self {
            value,
            detected: value < 0.0,
            unsafe_alpha,
            config,
        }
    }

    pub fn report(&self, spec: &WitnessSpec) -> Report {
        Report {
            kind: spec.kind.name().to_string(),
            n: spec.n,
            value: self.value,
            bound: 0.0,
            violated: self.detected,
            margin: -self.value,
            directions: self.config.mean_settings(),
            alpha: Some(self.config.alpha),
            unsafe_alpha: Some(self.unsafe_alpha),
        }
    }
}

/// Witness value on a state.
pub fn witness_value(
    spec: &WitnessSpec,
    cfg: &DirectionConfig,
    rho: &DensityOperator,
    policy: RangePolicy,
) -> Result<WitnessValue> {
    check_config(spec, cfg)?;
    let unsafe_alpha = check_alpha(spec, cfg.alpha, policy)?;
    let value = if spec.kind.is_bilinear() || rho.n_qubits() != Some(spec.n) {
        let t = CorrelationTensor::from_density(rho)?;
        witness_value_on(spec, cfg, &t)?
    } else {
        expectation(&witness_operator(spec, cfg, RangePolicy { allow_unsafe_alpha: true })?, rho)?
    };
    Ok(WitnessValue::new(value, unsafe_alpha, cfg.clone()))
}

/// Witness value from correlators, without range checks.
pub fn witness_value_on<S: CorrelationSource + ?Sized>(
    spec: &WitnessSpec,
    cfg: &DirectionConfig,
    source: &S,
) -> Result<f64> {
    check_config(spec, cfg)?;
    if source.n_qubits() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            found: source.n_qubits(),
        });
    }
    Ok(spec.form().value(cfg.alpha, source, &cfg.mean_settings()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{ghz, pauli_x, pauli_y, tensor_product};
    use crate::witness::geometry::{canonical_triads, make_direction_config};

    fn half_cos_sq(alpha: f64) -> f64 {
        (1.0 + alpha.cos()) / 2.0
    }

    #[test]
    fn safe_angles_give_exact_scalings() {
        let c = |k| half_cos_sq(alpha_max(k, 3)).sqrt();
        assert!((c(WitnessKind::E31) - 0.25).abs() < 1e-15);
        assert!((c(WitnessKind::E32) - 3.0 / 7.0).abs() < 1e-15);
        assert!((c(WitnessKind::E33) - 0.2).abs() < 1e-15);
        assert!((half_cos_sq(alpha_max(WitnessKind::B31, 3)) - 0.125).abs() < 1e-15);
        assert!((half_cos_sq(alpha_max(WitnessKind::B32, 3)) - 3.0 / 7.0).abs() < 1e-15);
        for n in 3..=6 {
            let cn = half_cos_sq(alpha_max(WitnessKind::EN, n)).sqrt();
            assert!((cn - 2f64.powi(1 - n as i32)).abs() < 1e-15);
        }
        assert_eq!(alpha_max(WitnessKind::EN, 3), alpha_max(WitnessKind::E31, 3));
        assert!((alpha_max(WitnessKind::E31, 3) - 2.636_23).abs() < 1e-5);
        assert!((alpha_max(WitnessKind::B32, 3) - 1.714_14).abs() < 1e-5);
    }

    #[test]
    fn mixed_state_gives_constant_term() {
        let spec = WitnessSpec::three(WitnessKind::E31);
        let cfg = make_direction_config(1.0, &canonical_triads(3), None).unwrap();
        let v = witness_value(&spec, &cfg, &DensityOperator::maximally_mixed(3), RangePolicy::default()).unwrap();
        assert!((v.value - 4.0 * 0.5f64.cos()).abs() < 1e-14);
        assert!(!v.detected);
        for kind in WitnessKind::ALL {
            let spec = if kind == WitnessKind::EN { WitnessSpec::new(kind, 3).unwrap() } else { WitnessSpec::three(kind) };
            let v = witness_value(&spec, &cfg, &DensityOperator::maximally_mixed(3), RangePolicy::default()).unwrap();
            assert!(v.value > 0.0, "{kind:?}");
        }
    }

    #[test]
    fn explicit_mermin_operator() {
        // Canonical means: x, y on qubits 1 and 2; y, x on qubit 3.
        let (x, y) = (pauli_x(), pauli_y());
        let t = |a: &ComplexOperator, b: &ComplexOperator, c: &ComplexOperator| {
            tensor_product(&[a.clone(), b.clone(), c.clone()]).unwrap()
        };
        let mut want = ComplexOperator::identity(8).scale(4.0 * 0.25);
        for (s, op) in [
            (1.0, t(&x, &x, &x)),
            (1.0, t(&y, &y, &x)),
            (1.0, t(&x, &y, &y)),
            (-1.0, t(&y, &x, &y)),
        ] {
            want.add_scaled(s, &op).unwrap();
        }
        let spec = WitnessSpec::three(WitnessKind::E31);
        let cfg = make_direction_config(spec.alpha_max(), &canonical_triads(3), None).unwrap();
        let op = witness_operator(&spec, &cfg, RangePolicy::default()).unwrap();
        assert!(op.approx_eq(&want, 1e-14));
    }

    #[test]
    fn en_three_equals_first_witness() {
        let cfg = make_direction_config(2.0, &canonical_triads(3), None).unwrap();
        let a = witness_operator(&WitnessSpec::three(WitnessKind::E31), &cfg, RangePolicy::default()).unwrap();
        let b = witness_operator(&WitnessSpec::new(WitnessKind::EN, 3).unwrap(), &cfg, RangePolicy::default()).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
    }

    #[test]
    fn range_guard() {
        let spec = WitnessSpec::three(WitnessKind::E33);
        let cfg = make_direction_config(spec.alpha_max() + 0.01, &canonical_triads(3), None).unwrap();
        let rho = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            witness_value(&spec, &cfg, &rho, RangePolicy::default()),
            Err(Error::AlphaOutOfRange { .. })
        ));
        let v = witness_value(&spec, &cfg, &rho, RangePolicy { allow_unsafe_alpha: true }).unwrap();
        assert!(v.unsafe_alpha);
        let r = v.report(&spec);
        assert_eq!(r.unsafe_alpha, Some(true));
    }

    #[test]
    fn bilinear_has_no_operator_and_wrong_sizes_fail() {
        let cfg = make_direction_config(1.0, &canonical_triads(3), None).unwrap();
        assert!(witness_operator(&WitnessSpec::three(WitnessKind::B31), &cfg, RangePolicy::default()).is_err());
        assert!(WitnessSpec::new(WitnessKind::E31, 4).is_err());
        assert!(WitnessSpec::new(WitnessKind::EN, 2).is_err());
        let rho = ghz(4).unwrap();
        assert!(witness_value(&WitnessSpec::three(WitnessKind::E31), &cfg, &rho, RangePolicy::default()).is_err());
    }

    #[test]
    fn ghz_values_at_canonical_directions() {
        // <GHZ3| xxx |GHZ3> = 1, yyx = xyy = yxy = -1: M3 = 1 - 1 - 1 + 1 = 0.
        let rho = ghz(3).unwrap();
        let spec = WitnessSpec::three(WitnessKind::E31);
        let cfg = make_direction_config(spec.alpha_max(), &canonical_triads(3), None).unwrap();
        let v = witness_value(&spec, &cfg, &rho, RangePolicy::default()).unwrap();
        assert!((v.value - 1.0).abs() < 1e-14);
        // zz on every pair is 1.
        let spec = WitnessSpec::three(WitnessKind::E32);
        let cfg = make_direction_config(spec.alpha_max(), &canonical_triads(3), None).unwrap();
        let v = witness_value(&spec, &cfg, &rho, RangePolicy::default()).unwrap();
        assert!((v.value - 6.0).abs() < 1e-14);
    }
}
