// SPDX-License-Identifier: Apache-2.0

//! Derivative-free minimization: Nelder-Mead with deterministic multi-start.
//!
//! Restart `i` draws its starting point from a ChaCha stream keyed by
//! `(seed, i)`, so results do not depend on thread scheduling. The best
//! restart is selected by `(value, restart index)`.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::qcore::sampling::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the simplex value spread falls below this.
    pub f_tol: f64,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
    pub initial_step: f64,
    /// Number of times the search is restarted from its own optimum with a
    /// fresh simplex.
    pub polish_rounds: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 20_000,
            f_tol: 1e-13,
            x_tol: 1e-10,
            initial_step: 0.4,
            polish_rounds: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// Index of the restart that produced this point.
    pub restart: usize,
}

/// Local Nelder-Mead minimization from `x0`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let mut best = simplex_search(f, x0, opts.initial_step, opts);
    let mut step = opts.initial_step;
    for _ in 0..opts.polish_rounds {
        step *= 0.25;
        let next = simplex_search(f, &best.x, step.max(1e-6), opts);
        let evals = best.evals + next.evals;
        if next.value < best.value {
            best = next;
        }
        best.evals = evals;
    }
    best
}

fn simplex_search<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    step: f64,
    opts: &NelderMeadOptions,
) -> Minimum {
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        return Minimum {
            x: vec![],
            value: eval(x0),
            evals: 1,
            restart: 0,
        };
    }
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p)).collect();
    let mut evals = n + 1;

    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let diam = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
            .fold(0.0f64, f64::max);
        if spread <= opts.f_tol || diam <= opts.x_tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let xr = along(-alpha);
        let fr = eval(&xr);
        evals += 1;
        if fr < vals[0] {
            let xe = along(-gamma);
            let fe = eval(&xe);
            evals += 1;
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = along(-rho);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(rho);
            let fc = eval(&xc);
            (xc, fc)
        };
        evals += 1;
        if fc < vals[n].min(fr) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        let best = pts[0].clone();
        for i in 1..=n {
            pts[i] = best
                .iter()
                .zip(&pts[i])
                .map(|(b, p)| b + sigma * (p - b))
                .collect();
            vals[i] = eval(&pts[i]);
        }
        evals += n;
    }

    let (i, _) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("simplex is nonempty");
    Minimum {
        x: pts[i].clone(),
        value: vals[i],
        evals,
        restart: 0,
    }
}

/// Runs `restarts` independent local searches from points drawn by
/// `sample`, in parallel, and returns the best.
pub fn multistart<F, G>(
    f: &F,
    sample: &G,
    restarts: usize,
    seed: u64,
    opts: &NelderMeadOptions,
) -> Minimum
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    let restarts = restarts.max(1);
    let results: Vec<Minimum> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x0 = sample(&mut rng);
            let mut m = nelder_mead(f, &x0, opts);
            m.restart = i;
            m
        })
        .collect();
    best_of(results)
}

/// Deterministic best-of reduction by `(value, restart)`.
pub fn best_of(results: Vec<Minimum>) -> Minimum {
    results
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.restart.cmp(&b.restart)))
        .expect("at least one result")
}
