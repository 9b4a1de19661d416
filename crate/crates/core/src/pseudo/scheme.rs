// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::projection::{symmetrized_qubit_coefficients, MAX_SYMMETRIZED};
use crate::error::{Error, Result};
use crate::qcore::{
    expectation, qubit_operator, tensor_product, ComplexOperator, CorrelationSource,
    CorrelationTensor, DensityOperator, Direction, MAX_TENSOR_QUBITS,
};
use crate::tolerance::NEGATIVITY_EPS;

/// Largest number of joint outcomes a scheme may hold.
pub const MAX_PPS_ENTRIES: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpsEntry {
    /// One `+`/`-` per observable, subsystem-major.
    pub outcome: String,
    pub value: f64,
}

/// Pseudoprobabilities of every joint outcome of a set of per-qubit
/// observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoProbabilityScheme {
    pub observables: Vec<Vec<Direction>>,
    pub entries: Vec<PpsEntry>,
}

/// Builds the scheme: one entry per outcome tuple, each the
/// pseudoprobability of the tensor product of per-qubit symmetrized
/// pseudoprojections.
pub fn build_pps(obs: &[Vec<Direction>], rho: &DensityOperator) -> Result<PseudoProbabilityScheme> {
    if obs.is_empty() {
        return Err(Error::Empty("observable lists"));
    }
    if obs.iter().any(|o| o.is_empty()) {
        return Err(Error::InvalidParameter(
            "every subsystem needs at least one observable".into(),
        ));
    }
    build_scheme(obs, rho)
}

type Evaluator = dyn Fn(&[[f64; 4]]) -> f64 + Sync;

fn build_scheme(obs: &[Vec<Direction>], rho: &DensityOperator) -> Result<PseudoProbabilityScheme> {
    let n = obs.len();
    if rho.dim() != 1usize << n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: rho.dim(),
        });
    }
    for o in obs {
        if o.len() > MAX_SYMMETRIZED {
            return Err(Error::CapExceeded {
                what: "observables per subsystem",
                requested: o.len(),
                cap: MAX_SYMMETRIZED,
            });
        }
    }
    let total: usize = obs.iter().map(Vec::len).sum();
    if total >= usize::BITS as usize || 1usize << total > MAX_PPS_ENTRIES {
        return Err(Error::CapExceeded {
            what: "PPS entries",
            requested: 1usize.checked_shl(total as u32).unwrap_or(usize::MAX),
            cap: MAX_PPS_ENTRIES,
        });
    }

    // Per subsystem, Pauli coefficients of every local outcome pattern.
    let local: Vec<Vec<[f64; 4]>> = obs
        .iter()
        .map(|dirs| {
            let vecs: Vec<[f64; 3]> = dirs.iter().map(|d| d.components()).collect();
            (0..1usize << dirs.len())
                .map(|pattern| {
                    let signs: Vec<f64> = (0..dirs.len())
                        .map(|k| outcome_bit_sign(pattern, k, dirs.len()))
                        .collect();
                    symmetrized_qubit_coefficients(&vecs, &signs)
                })
                .collect()
        })
        .collect();

    let evaluator: Box<Evaluator> = if n <= MAX_TENSOR_QUBITS {
        let t = CorrelationTensor::from_density(rho)?;
        Box::new(move |f: &[[f64; 4]]| t.correlator(f))
    } else {
        let rho = rho.clone();
        Box::new(move |f: &[[f64; 4]]| {
            let ops: Vec<ComplexOperator> = f.iter().map(|&c| qubit_operator(c)).collect();
            expectation(&tensor_product(&ops).expect("nonempty"), &rho).expect("dimensions checked")
        })
    };

    let counts: Vec<usize> = obs.iter().map(Vec::len).collect();
    let entries: Vec<PpsEntry> = (0..1usize << total)
        .into_par_iter()
        .map(|idx| {
            let patterns = split_index(idx, &counts);
            let factors: Vec<[f64; 4]> = patterns
                .iter()
                .enumerate()
                .map(|(q, &p)| local[q][p])
                .collect();
            PpsEntry {
                outcome: outcome_string(idx, total),
                value: evaluator(&factors),
            }
        })
        .collect();

    Ok(PseudoProbabilityScheme {
        observables: obs.to_vec(),
        entries,
    })
}

/// Sign of observable `k` (of `len`) inside a local pattern; the first
/// observable is the most significant bit and bit 0 means `+`.
fn outcome_bit_sign(pattern: usize, k: usize, len: usize) -> f64 {
    if pattern >> (len - 1 - k) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn split_index(idx: usize, counts: &[usize]) -> Vec<usize> {
    let mut out = vec![0; counts.len()];
    let mut rest = idx;
    for (q, &c) in counts.iter().enumerate().rev() {
        out[q] = rest & ((1 << c) - 1);
        rest >>= c;
    }
    out
}

fn outcome_string(idx: usize, total: usize) -> String {
    (0..total)
        .map(|k| if idx >> (total - 1 - k) & 1 == 0 { '+' } else { '-' })
        .collect()
}

impl PseudoProbabilityScheme {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.value).sum()
    }

    pub fn get(&self, outcome: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.outcome == outcome)
            .map(|e| e.value)
    }

    pub fn min_entry(&self) -> Option<&PpsEntry> {
        self.entries.iter().min_by(|a, b| a.value.total_cmp(&b.value))
    }

    /// Sums out observable `obs_index` of `subsystem`.
    pub fn marginalize(&self, subsystem: usize, obs_index: usize) -> Result<Self> {
        let count = self
            .observables
            .get(subsystem)
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidParameter(format!("no subsystem {subsystem}")))?;
        if obs_index >= count {
            return Err(Error::InvalidParameter(format!(
                "subsystem {subsystem} has {count} observables"
            )));
        }
        let pos: usize = self.observables[..subsystem].iter().map(Vec::len).sum::<usize>() + obs_index;
        let total: usize = self.observables.iter().map(Vec::len).sum();
        let mut values = vec![0.0; 1 << (total - 1)];
        for (idx, e) in self.entries.iter().enumerate() {
            let high = idx >> (total - pos) << (total - 1 - pos);
            let low = idx & ((1 << (total - 1 - pos)) - 1);
            values[high | low] += e.value;
        }
        let mut observables = self.observables.clone();
        observables[subsystem].remove(obs_index);
        let entries = values
            .into_iter()
            .enumerate()
            .map(|(idx, value)| PpsEntry {
                outcome: outcome_string(idx, total - 1),
                value,
            })
            .collect();
        Ok(Self {
            observables,
            entries,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Entries below `-eps`, most negative first. Empty means the scheme is
/// classical at this tolerance.
pub fn detect_negativity(pps: &PseudoProbabilityScheme, eps: f64) -> Vec<(String, f64)> {
    let mut v: Vec<(String, f64)> = pps
        .entries
        .iter()
        .filter(|e| e.value < -eps)
        .map(|e| (e.outcome.clone(), e.value))
        .collect();
    v.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    v
}

/// [`detect_negativity`] at the default tolerance.
pub fn detect_negativity_default(pps: &PseudoProbabilityScheme) -> Vec<(String, f64)> {
    detect_negativity(pps, NEGATIVITY_EPS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::{projection, symmetrized_pseudoprojection, joint_pseudoprojection, pseudoprobability};
    use crate::qcore::{ghz, C64};

    fn ground() -> DensityOperator {
        DensityOperator::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn single_observable() {
        let pps = build_pps(&[vec![Direction::z()]], &ground()).unwrap();
        assert_eq!(pps.get("+"), Some(1.0));
        assert_eq!(pps.get("-"), Some(0.0));
    }

    #[test]
    fn two_observables_on_ground_state() {
        let pps = build_pps(&[vec![Direction::x(), Direction::z()]], &ground()).unwrap();
        assert!((pps.total() - 1.0).abs() < 1e-12);
        // Oracle: direct trace of the symmetrized product, ¼(I + σx - σz) on |0>.
        let p = symmetrized_pseudoprojection(&[
            projection(&Direction::x(), 1).unwrap(),
            projection(&Direction::z(), -1).unwrap(),
        ])
        .unwrap();
        let want = pseudoprobability(&p, &ground()).unwrap();
        assert!(want.abs() < 1e-15);
        assert!((pps.get("+-").unwrap() - want).abs() < 1e-14);
        assert!((pps.get("++").unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn entries_match_dense_joint_pseudoprojections() {
        let obs = vec![
            vec![Direction::x(), Direction::y()],
            vec![Direction::normalized([1.0, 1.0, 0.0]).unwrap()],
            vec![Direction::z(), Direction::x(), Direction::y()],
        ];
        let rho = ghz(3).unwrap();
        let pps = build_pps(&obs, &rho).unwrap();
        assert_eq!(pps.len(), 64);
        let outcome = "+--+-+";
        let signs: Vec<i32> = outcome.chars().map(|c| if c == '+' { 1 } else { -1 }).collect();
        let mut k = 0;
        let mut parts = Vec::new();
        for dirs in &obs {
            let ps: Vec<_> = dirs
                .iter()
                .map(|d| {
                    let p = projection(d, signs[k]).unwrap();
                    k += 1;
                    p
                })
                .collect();
            parts.push(symmetrized_pseudoprojection(&ps).unwrap());
        }
        let joint = joint_pseudoprojection(&parts).unwrap();
        let want = pseudoprobability(&joint, &rho).unwrap();
        assert!((pps.get(outcome).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn negativity_detection() {
        let mixed = DensityOperator::maximally_mixed(1);
        let pps = build_pps(&[vec![Direction::z(), Direction::z()]], &mixed).unwrap();
        assert!(detect_negativity_default(&pps).is_empty());

        let th = 1.25 * std::f64::consts::PI;
        let psi = DensityOperator::pure(&[
            C64::new((th / 2.0).cos(), 0.0),
            C64::new((th / 2.0).sin(), 0.0),
        ])
        .unwrap();
        let pps = build_pps(&[vec![Direction::x(), Direction::z()]], &psi).unwrap();
        let neg = detect_negativity_default(&pps);
        assert_eq!(neg[0].0, "++");
        assert!((neg[0].1 - (1.0 - 2f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!(detect_negativity(&pps, 0.2).is_empty());
    }

    #[test]
    fn marginal_drops_one_observable() {
        let obs = vec![vec![Direction::x(), Direction::z()], vec![Direction::y()]];
        let rho = ghz(2).unwrap();
        let pps = build_pps(&obs, &rho).unwrap();
        let m = pps.marginalize(0, 0).unwrap();
        let direct = build_pps(&[vec![Direction::z()], vec![Direction::y()]], &rho).unwrap();
        for (a, b) in m.entries.iter().zip(&direct.entries) {
            assert_eq!(a.outcome, b.outcome);
            assert!((a.value - b.value).abs() < 1e-12);
        }
    }

    #[test]
    fn json_shape() {
        let pps = build_pps(&[vec![Direction::z()]], &ground()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&pps.to_json().unwrap()).unwrap();
        assert_eq!(v["observables"][0][0][2], 1.0);
        assert_eq!(v["entries"][0]["outcome"], "+");
    }

    #[test]
    fn caps_and_validation() {
        assert!(build_pps(&[vec![]], &ground()).is_err());
        assert!(matches!(
            build_pps(&[vec![Direction::z()], vec![Direction::z()]], &ground()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
