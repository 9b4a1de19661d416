// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlocality::{
    maximize_abs, refine_settings, NonlocalityKind, ObservablePair, SearchOptions,
};
use crate::optimize::NelderMeadOptions;
use crate::qcore::{add_white_noise, CorrelationTensor, DensityOperator};
use crate::witness::{
    make_direction_config, optimize_config, refine_config, DirectionConfig, WitnessKind,
    WitnessSearchOptions, WitnessSpec,
};

/// An inequality whose detection threshold can be scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Inequality {
    Nonlocality(NonlocalityKind),
    Witness(WitnessKind),
}

impl Inequality {
    pub fn name(&self) -> &'static str {
        match self {
            Inequality::Nonlocality(k) => k.name(),
            Inequality::Witness(k) => k.name(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        NonlocalityKind::parse(s)
            .map(Inequality::Nonlocality)
            .or_else(|_| WitnessKind::parse(s).map(Inequality::Witness))
            .map_err(|_| Error::InvalidParameter(format!("unknown inequality '{s}'")))
    }

    /// Whether the detection margin is affine in the noise parameter.
    pub fn is_affine(&self) -> bool {
        !matches!(self, Inequality::Witness(k) if k.is_bilinear())
    }
}

/// `p ↦ p ρ + (1 - p) I/d`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyFamily {
    base: DensityOperator,
    tensor: CorrelationTensor,
}

impl NoisyFamily {
    pub fn new(base: DensityOperator) -> Result<Self> {
        let tensor = CorrelationTensor::from_density(&base)?;
        Ok(Self { base, tensor })
    }

    pub fn base(&self) -> &DensityOperator {
        &self.base
    }

    pub fn n_qubits(&self) -> usize {
        crate::qcore::CorrelationSource::n_qubits(&self.tensor)
    }

    pub fn state(&self, p: f64) -> Result<DensityOperator> {
        add_white_noise(&self.base, p)
    }

    pub fn tensor(&self, p: f64) -> CorrelationTensor {
        self.tensor.with_white_noise(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub p_tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            p_tol: 1e-4,
            restarts: 64,
            seed: 0,
        }
    }
}

/// Detection threshold of one inequality on a noisy family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub inequality: String,
    #[serde(rename = "N")]
    pub n: usize,
    /// Smallest detected noise parameter, `None` if even `p = 1` is not
    /// detected.
    pub p_star: Option<f64>,
    pub tolerance: f64,
    pub value_at_1: f64,
    pub bound: f64,
    /// Closed-form root from the `p = 1` optimum.
    pub analytic_p_star: Option<f64>,
    /// Mean directions per qubit of the best configuration.
    pub directions: Vec<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Detection holds at `p_star + tolerance` and fails at
    /// `p_star - tolerance` under the best configuration.
    pub monotone_check: bool,
}

impl ScanResult {
    pub fn direction_config(&self) -> Result<Option<DirectionConfig>> {
        let Some(alpha) = self.alpha else {
            return Ok(None);
        };
        let triads: Vec<[[f64; 3]; 3]> = self
            .directions
            .iter()
            .map(|d| {
                if d.len() != 3 {
                    return Err(Error::InvalidParameter("triads need three directions".into()));
                }
                Ok([d[0], d[1], d[2]])
            })
            .collect::<Result<_>>()?;
        make_direction_config(alpha, &triads, None).map(Some)
    }
}

/// A configuration under test together with its detection margin.
#[derive(Debug, Clone)]
enum Config {
    Settings(Vec<ObservablePair>),
    Doublets(DirectionConfig),
}

struct Problem {
    inequality: Inequality,
    n: usize,
    bound: f64,
    witness: Option<WitnessSpec>,
    poly: Option<crate::correlator::Polynomial>,
}

impl Problem {
    fn new(inequality: Inequality, n: usize) -> Result<Self> {
        Ok(match inequality {
            Inequality::Nonlocality(k) => Self {
                inequality,
                n,
                bound: k.classical_bound(n),
                witness: None,
                poly: Some(k.polynomial(n)?),
            },
            Inequality::Witness(k) => Self {
                inequality,
                n,
                bound: 0.0,
                witness: Some(WitnessSpec::new(k, n)?),
                poly: None,
            },
        })
    }

    fn alpha(&self) -> Option<f64> {
        self.witness.map(|w| w.alpha_max())
    }

    /// Inequality value of a configuration on a source.
    fn value(&self, cfg: &Config, t: &CorrelationTensor) -> f64 {
        match (cfg, &self.poly, &self.witness) {
            (Config::Settings(s), Some(p), _) => {
                p.expectation_unchecked(t, &ObservablePair::settings(s))
            }
            (Config::Doublets(c), _, Some(w)) => w.form().value(c.alpha, t, &c.mean_settings()),
            _ => unreachable!("configuration matches the inequality"),
        }
    }

    /// Positive when detected.
    fn margin(&self, value: f64) -> f64 {
        match self.inequality {
            Inequality::Nonlocality(_) => value.abs() - self.bound,
            Inequality::Witness(_) => -value,
        }
    }

    fn optimize(&self, t: &CorrelationTensor, opts: &ScanOptions) -> Result<(Config, f64)> {
        match (&self.poly, &self.witness) {
            (Some(p), _) => {
                let o = maximize_abs(
                    p,
                    t,
                    &SearchOptions {
                        restarts: opts.restarts,
                        seed: opts.seed,
                        ..SearchOptions::default()
                    },
                );
                Ok((Config::Settings(o.observables), o.value))
            }
            (_, Some(w)) => {
                let o = optimize_config(
                    w,
                    t,
                    w.alpha_max(),
                    &WitnessSearchOptions {
                        restarts: opts.restarts,
                        seed: opts.seed,
                        ..WitnessSearchOptions::default()
                    },
                )?;
                Ok((Config::Doublets(o.config), o.value))
            }
            _ => unreachable!(),
        }
    }

    fn refine(&self, start: &Config, t: &CorrelationTensor) -> Result<(Config, f64)> {
        let nm = NelderMeadOptions {
            polish_rounds: 1,
            ..NelderMeadOptions::default()
        };
        match (start, &self.poly, &self.witness) {
            (Config::Settings(s), Some(p), _) => {
                let v0 = p.expectation_unchecked(t, &ObservablePair::settings(s));
                let sign = if v0 < 0.0 { 1.0 } else { -1.0 };
                let r = refine_settings(p, t, s, sign, &nm);
                Ok(if r.value.abs() >= v0.abs() {
                    (Config::Settings(r.observables), r.value)
                } else {
                    (start.clone(), v0)
                })
            }
            (Config::Doublets(c), _, Some(w)) => {
                let r = refine_config(w, t, c, &nm)?;
                Ok((Config::Doublets(r.config), r.value))
            }
            _ => unreachable!(),
        }
    }

    /// Closed-form threshold from the `p = 1` value.
    fn analytic(&self, value_at_1: f64) -> Option<f64> {
        let root = match (self.inequality, self.witness) {
            (Inequality::Nonlocality(_), _) => self.bound / value_at_1.abs(),
            (Inequality::Witness(_), Some(w)) => {
                let k = w.form().constant_term(w.alpha_max());
                let corr = value_at_1 - k;
                if w.kind.is_bilinear() {
                    if corr >= 0.0 {
                        return None;
                    }
                    (k / -corr).sqrt()
                } else {
                    if corr >= 0.0 {
                        return None;
                    }
                    k / -corr
                }
            }
            _ => return None,
        };
        (root.is_finite() && root <= 1.0).then_some(root)
    }

    fn directions(&self, cfg: &Config) -> Vec<Vec<[f64; 3]>> {
        match cfg {
            Config::Settings(s) => ObservablePair::settings(s),
            Config::Doublets(c) => c.mean_settings(),
        }
    }
}

/// Detection threshold by bisection over `p`, refining the configuration
/// at every step from the previous best.
pub fn threshold(inequality: Inequality, family: &NoisyFamily, opts: &ScanOptions) -> Result<ScanResult> {
    if !(opts.p_tol > 0.0 && opts.p_tol < 0.5) {
        return Err(Error::InvalidParameter(format!("p_tol {} out of range", opts.p_tol)));
    }
    let problem = Problem::new(inequality, family.n_qubits())?;
    let (mut best, value_at_1) = problem.optimize(&family.tensor(1.0), opts)?;
    let mut result = ScanResult {
        inequality: inequality.name().to_string(),
        n: problem.n,
        p_star: None,
        tolerance: opts.p_tol,
        value_at_1,
        bound: problem.bound,
        analytic_p_star: problem.analytic(value_at_1),
        directions: problem.directions(&best),
        alpha: problem.alpha(),
        monotone_check: false,
    };
    if problem.margin(value_at_1) <= 0.0 {
        return Ok(result);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > opts.p_tol {
        let mid = 0.5 * (lo + hi);
        let (cfg, value) = problem.refine(&best, &family.tensor(mid))?;
        if problem.margin(value) > 0.0 {
            hi = mid;
            best = cfg;
        } else {
            lo = mid;
        }
    }
    let p_star = 0.5 * (lo + hi);
    let above = (p_star + opts.p_tol).min(1.0);
    let below = (p_star - opts.p_tol).max(0.0);
    result.monotone_check = problem.margin(problem.value(&best, &family.tensor(above))) > 0.0
        && problem.margin(problem.value(&best, &family.tensor(below))) <= 0.0;
    result.p_star = Some(p_star);
    result.directions = problem.directions(&best);
    Ok(result)
}

/// One point of a detection curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    pub value: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub inequality: String,
    pub points: Vec<CurvePoint>,
    /// Margins do not decrease with `p`.
    pub monotone: bool,
}

/// Best value at each grid point, refining the `p = 1` optimum.
pub fn scan_curve(
    inequality: Inequality,
    family: &NoisyFamily,
    grid: &[f64],
    opts: &ScanOptions,
) -> Result<Curve> {
    if grid.is_empty() {
        return Err(Error::Empty("p grid"));
    }
    if let Some(p) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("grid point {p} outside [0, 1]")));
    }
    let problem = Problem::new(inequality, family.n_qubits())?;
    let (start, _) = problem.optimize(&family.tensor(1.0), opts)?;
    let points = grid
        .par_iter()
        .map(|&p| {
            let (_, value) = problem.refine(&start, &family.tensor(p))?;
            Ok(CurvePoint {
                p,
                value,
                margin: problem.margin(value),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| a.p.total_cmp(&b.p));
    let monotone = sorted.windows(2).all(|w| w[1].margin >= w[0].margin - 1e-9);
    if inequality.is_affine() {
        debug_assert!(monotone, "affine margins must be monotone in p");
    }
    Ok(Curve {
        inequality: inequality.name().to_string(),
        points,
        monotone,
    })
}
