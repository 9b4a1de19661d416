// SPDX-License-Identifier: Apache-2.0

use std::str::FromStr;

use super::threshold::ScanResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

const CSV_HEADER: [&str; 5] = ["inequality", "p_star", "tolerance", "value_at_1", "bound"];

/// Serializes scan results. CSV carries one row per result; JSON mirrors
/// the full records.
pub fn emit_report(results: &[ScanResult], format: ReportFormat) -> Result<Vec<u8>> {
    let ser = |e: &dyn std::fmt::Display| Error::Serialization(e.to_string());
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(results).map_err(|e| ser(&e))?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(|e| ser(&e))?;
            for r in results {
                w.write_record([
                    r.inequality.clone(),
                    r.p_star.map_or_else(String::new, |p| p.to_string()),
                    r.tolerance.to_string(),
                    r.value_at_1.to_string(),
                    r.bound.to_string(),
                ])
                .map_err(|e| ser(&e))?;
            }
            w.into_inner().map_err(|e| ser(&e))
        }
    }
}

/// Inverse of the JSON form of [`emit_report`].
pub fn parse_report(bytes: &[u8]) -> Result<Vec<ScanResult>> {
    serde_json::from_slice(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScanResult {
        ScanResult {
            inequality: "svetlichny".into(),
            n: 3,
            p_star: Some(0.707_2),
            tolerance: 1e-4,
            value_at_1: -5.656_854_249,
            bound: 4.0,
            analytic_p_star: Some(std::f64::consts::FRAC_1_SQRT_2),
            directions: vec![vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]; 3],
            alpha: None,
            monotone_check: true,
        }
    }

    #[test]
    fn empty_documents() {
        assert_eq!(emit_report(&[], ReportFormat::Csv).unwrap(), b"inequality,p_star,tolerance,value_at_1,bound\n");
        assert!(parse_report(&emit_report(&[], ReportFormat::Json).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn csv_row_and_json_round_trip() {
        let r = sample();
        let csv = String::from_utf8(emit_report(std::slice::from_ref(&r), ReportFormat::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("svetlichny,0.7072,"));
        let back = parse_report(&emit_report(std::slice::from_ref(&r), ReportFormat::Json).unwrap()).unwrap();
        assert_eq!(back, vec![r]);
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("xml".parse::<ReportFormat>(), Err(Error::UnknownFormat(_))));
    }
}
