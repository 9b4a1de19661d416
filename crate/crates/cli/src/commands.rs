// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use pseudoprob::events::{parse_expr, Binding, EventCompiler};
use pseudoprob::expand::expand_operator;
use pseudoprob::nonlocality::{
    maximize_abs, violation_report, LhvExpression, NonlocalityKind, NonlocalityPolynomial,
    ObservablePair, Report, SearchOptions,
};
use pseudoprob::pseudo::{build_pps, detect_negativity, PpsEntry, PseudoProbabilityScheme};
use pseudoprob::scan::{
    emit_report, scan_curve, threshold, Inequality, NoisyFamily, ReportFormat, ScanOptions,
};
use pseudoprob::witness::{
    canonical_triads, check_alpha, make_direction_config, optimize_config, witness_operator,
    witness_value, DirectionConfig, RangePolicy, WitnessKind, WitnessSearchOptions, WitnessSpec,
};
use pseudoprob::{add_white_noise, CorrelationTensor, DensityOperator};
use serde::Serialize;

use crate::input::{
    load_config, load_matrix, load_pairs, load_settings, load_state, matrix_rows,
    settings_to_directions,
};
use crate::{AlphaArgs, CliError, Common, Format, StateArgs};

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out =
        serde_json::to_vec_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn qubits(rho: &DensityOperator) -> Result<usize, CliError> {
    rho.n_qubits()
        .ok_or_else(|| CliError::Usage(format!("state dimension {} is not a qubit register", rho.dim())))
}

pub fn noisy_state(args: &StateArgs) -> Result<DensityOperator, CliError> {
    Ok(add_white_noise(&load_state(&args.state)?, args.p)?)
}

fn policy(alpha: &AlphaArgs) -> RangePolicy {
    RangePolicy {
        allow_unsafe_alpha: alpha.unsafe_alpha,
    }
}

fn requested_alpha(spec: &WitnessSpec, alpha: &AlphaArgs) -> Option<f64> {
    alpha.alpha.or(alpha.alpha_max.then(|| spec.alpha_max()))
}

/// Configuration from `--dirs`, or canonical triads, at the requested angle.
fn direction_config(
    spec: &WitnessSpec,
    alpha: &AlphaArgs,
    dirs: Option<&Path>,
) -> Result<DirectionConfig, CliError> {
    let requested = requested_alpha(spec, alpha);
    let cfg = match dirs {
        Some(path) => {
            let cfg = load_config(path)?;
            match requested {
                Some(a) => cfg.with_alpha(a)?,
                None => cfg,
            }
        }
        None => make_direction_config(
            requested.unwrap_or_else(|| spec.alpha_max()),
            &canonical_triads(spec.n),
            None,
        )?,
    };
    check_alpha(spec, cfg.alpha, policy(alpha))?;
    Ok(cfg)
}

#[derive(Serialize)]
struct WitnessEval {
    #[serde(flatten)]
    report: Report,
    config: DirectionConfig,
}

pub fn eval_witness(
    common: &Common,
    rho: &DensityOperator,
    name: &str,
    alpha: &AlphaArgs,
    dirs: Option<&Path>,
    optimize: bool,
) -> Result<Vec<u8>, CliError> {
    let spec = WitnessSpec::new(WitnessKind::parse(name)?, qubits(rho)?)?;
    let mut cfg = direction_config(&spec, alpha, dirs)?;
    if optimize {
        let t = CorrelationTensor::from_density(rho)?;
        let opts = WitnessSearchOptions {
            restarts: common.restarts,
            seed: common.seed,
            ..WitnessSearchOptions::default()
        };
        cfg = optimize_config(&spec, &t, cfg.alpha, &opts)?.config;
    }
    let v = witness_value(&spec, &cfg, rho, policy(alpha))?;
    to_json(&WitnessEval {
        report: v.report(&spec),
        config: v.config,
    })
}

#[derive(Serialize)]
struct PolyEval {
    #[serde(flatten)]
    report: Report,
    observables: Vec<ObservablePair>,
}

pub fn eval_poly(
    common: &Common,
    rho: &DensityOperator,
    name: &str,
    dirs: Option<&Path>,
    optimize: bool,
) -> Result<Vec<u8>, CliError> {
    let kind = NonlocalityKind::parse(name)?;
    let n = qubits(rho)?;
    let pairs = if optimize {
        let t = CorrelationTensor::from_density(rho)?;
        let opts = SearchOptions {
            restarts: common.restarts,
            seed: common.seed,
            ..SearchOptions::default()
        };
        maximize_abs(&kind.polynomial(n)?, &t, &opts).observables
    } else if let Some(path) = dirs {
        load_pairs(path)?
    } else {
        ObservablePair::canonical(n)
    };
    let poly = NonlocalityPolynomial::new(kind, &pairs)?;
    to_json(&PolyEval {
        report: violation_report(&poly, rho)?,
        observables: pairs,
    })
}

#[derive(Serialize)]
struct EventEval<'a> {
    expression: &'a str,
    #[serde(rename = "N")]
    n: usize,
    value: f64,
}

pub fn eval_event(rho: &DensityOperator, text: &str, dirs: Option<&Path>) -> Result<Vec<u8>, CliError> {
    let path = dirs.ok_or_else(|| CliError::Usage("--event needs --dirs with per-qubit settings".into()))?;
    let expr = parse_expr(text)?;
    let n = qubits(rho)?;
    let compiler = EventCompiler::new(Binding::from_settings(&load_settings(path)?), n);
    to_json(&EventEval {
        expression: text,
        n,
        value: compiler.expr_value(&expr, rho)?,
    })
}

#[derive(Serialize)]
struct LhvOutput<'a> {
    expr: &'a str,
    degree: usize,
    min: f64,
    max: f64,
    max_abs: f64,
    symbols: usize,
    strategies: u64,
}

pub fn lhv(text: &str, n: usize) -> Result<Vec<u8>, CliError> {
    let expr = match NonlocalityKind::parse(text) {
        Ok(kind) => LhvExpression::Polynomial(kind.polynomial(n)?),
        Err(_) => LhvExpression::Events(parse_expr(text)?),
    };
    let b = expr.bounds()?;
    to_json(&LhvOutput {
        expr: text,
        degree: expr.degree(),
        min: b.min,
        max: b.max,
        max_abs: b.max_abs,
        symbols: b.symbols,
        strategies: b.strategies,
    })
}

#[derive(Serialize)]
struct WitnessMatrix {
    kind: &'static str,
    #[serde(rename = "N")]
    n: usize,
    alpha: f64,
    unsafe_alpha: bool,
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

pub fn witness_matrix(name: &str, n: usize, alpha: &AlphaArgs, dirs: Option<&Path>) -> Result<Vec<u8>, CliError> {
    let spec = WitnessSpec::new(WitnessKind::parse(name)?, n)?;
    let cfg = direction_config(&spec, alpha, dirs)?;
    let op = witness_operator(&spec, &cfg, policy(alpha))?;
    to_json(&WitnessMatrix {
        kind: spec.kind.name(),
        n,
        alpha: cfg.alpha,
        unsafe_alpha: check_alpha(&spec, cfg.alpha, policy(alpha))?,
        dim: op.dim(),
        matrix: matrix_rows(&op),
    })
}

fn inequalities(list: &str, n: usize) -> Result<Vec<Inequality>, CliError> {
    if list == "all" {
        let mut all = vec![
            Inequality::Nonlocality(NonlocalityKind::Svetlichny),
            Inequality::Nonlocality(NonlocalityKind::Mermin),
        ];
        if n == 3 {
            all.extend(WitnessKind::ALL.iter().filter(|k| **k != WitnessKind::EN).map(|k| Inequality::Witness(*k)));
        }
        all.push(Inequality::Witness(WitnessKind::EN));
        return Ok(all);
    }
    list.split(',')
        .map(|s| Inequality::parse(s.trim()).map_err(CliError::from))
        .collect()
}

pub fn scan(
    common: &Common,
    list: &str,
    state: &str,
    p_tol: f64,
    grid: Option<&str>,
) -> Result<Vec<u8>, CliError> {
    let family = NoisyFamily::new(load_state(state)?)?;
    let kinds = inequalities(list, family.n_qubits())?;
    let opts = ScanOptions {
        p_tol,
        restarts: common.restarts,
        seed: common.seed,
    };
    if let Some(grid) = grid {
        let points = grid
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad grid point '{s}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let curves = kinds
            .iter()
            .map(|k| scan_curve(*k, &family, &points, &opts).map_err(CliError::from))
            .collect::<Result<Vec<_>, _>>()?;
        return to_json(&curves);
    }
    let results = kinds
        .iter()
        .map(|k| threshold(*k, &family, &opts).map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let format = match common.format {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };
    Ok(emit_report(&results, format)?)
}

pub fn expand(input: &Path, theta: f64) -> Result<Vec<u8>, CliError> {
    let op = load_matrix(input)?;
    let e = expand_operator(&op, theta)?;
    let mut out = e.to_json(&op)?.into_bytes();
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
struct PpsOutput {
    #[serde(flatten)]
    scheme: PseudoProbabilityScheme,
    total: f64,
    negative: Vec<PpsEntry>,
}

pub fn pps(state: &StateArgs, dirs: Option<&Path>, eps: f64) -> Result<Vec<u8>, CliError> {
    let rho = noisy_state(state)?;
    let n = qubits(&rho)?;
    let settings = match dirs {
        Some(path) => load_settings(path)?,
        None => vec![vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]; n],
    };
    let scheme = build_pps(&settings_to_directions(&settings)?, &rho)?;
    let negative = detect_negativity(&scheme, eps)
        .into_iter()
        .map(|(outcome, value)| PpsEntry { outcome, value })
        .collect();
    to_json(&PpsOutput {
        total: scheme.total(),
        scheme,
        negative,
    })
}
