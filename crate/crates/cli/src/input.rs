// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;

use pseudoprob::nonlocality::ObservablePair;
use pseudoprob::qcore::C64;
use pseudoprob::witness::DirectionConfig;
use pseudoprob::{ghz, w3, ComplexOperator, DensityOperator, Direction};
use serde::de::DeserializeOwned;

use crate::CliError;

/// Parses `ghz3`, `ghz<n>`, `ghzN:<n>`, `w3` or `file:<path>`.
pub fn load_state(spec: &str) -> Result<DensityOperator, CliError> {
    if let Some(path) = spec.strip_prefix("file:") {
        let m = load_matrix(Path::new(path))?;
        return Ok(DensityOperator::new(m)?);
    }
    if spec == "w3" {
        return Ok(w3());
    }
    let n = spec
        .strip_prefix("ghzN:")
        .or_else(|| spec.strip_prefix("ghz"))
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| CliError::Usage(format!("unknown state '{spec}'")))?;
    Ok(ghz(n)?)
}

/// Dense complex matrix as rows of `[re, im]` pairs.
pub fn load_matrix(path: &Path) -> Result<ComplexOperator, CliError> {
    let rows: Vec<Vec<[f64; 2]>> = load_json(path)?;
    let rows: Vec<Vec<C64>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect())
        .collect();
    Ok(ComplexOperator::from_rows(&rows)?)
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(path.display().to_string(), e.to_string()))
}

pub fn load_config(path: &Path) -> Result<DirectionConfig, CliError> {
    load_json(path)
}

pub fn load_pairs(path: &Path) -> Result<Vec<ObservablePair>, CliError> {
    load_json(path)
}

/// Per-qubit direction lists.
pub fn load_settings(path: &Path) -> Result<Vec<Vec<[f64; 3]>>, CliError> {
    load_json(path)
}

pub fn settings_to_directions(settings: &[Vec<[f64; 3]>]) -> Result<Vec<Vec<Direction>>, CliError> {
    settings
        .iter()
        .map(|q| q.iter().map(|v| Direction::normalized(*v).map_err(CliError::from)).collect())
        .collect()
}

pub fn matrix_rows(op: &ComplexOperator) -> Vec<Vec<[f64; 2]>> {
    (0..op.dim())
        .map(|r| {
            (0..op.dim())
                .map(|c| {
                    let z = op.entry(r, c);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_names() {
        assert_eq!(load_state("ghz3").unwrap().dim(), 8);
        assert_eq!(load_state("ghzN:4").unwrap().dim(), 16);
        assert_eq!(load_state("w3").unwrap().dim(), 8);
        assert!(load_state("bell").is_err());
        assert!(load_state("file:/nonexistent/rho.json").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let rho = ghz(2).unwrap();
        fs::write(&path, serde_json::to_string(&matrix_rows(rho.operator())).unwrap()).unwrap();
        let back = load_state(&format!("file:{}", path.display())).unwrap();
        assert!(back.operator().max_abs_diff(rho.operator()) == 0.0);
    }
}
