use std::fmt::Write as _;

use serde::Serialize;

use super::OracleSpectrum;
use crate::spectrum::SpectrumResult;

/// A deviation above this multiple of the oracle's error estimate is flagged.
pub const FLAG_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelComparison {
    pub n: u32,
    pub l: u32,
    pub closed_form: f64,
    pub oracle: f64,
    pub error_estimate: Option<f64>,
    pub abs_dev: f64,
    pub rel_dev: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub matched: usize,
    pub closed_form_levels: usize,
    pub oracle_levels: usize,
    /// Closed-form states without an oracle level.
    pub unmatched: Vec<u32>,
    pub max_abs_dev: f64,
    pub flagged: usize,
    pub rows: Vec<LevelComparison>,
}

/// Pairs closed-form states with oracle levels by `n`.
pub fn compare(closed_form: &[SpectrumResult<f64>], oracle: &OracleSpectrum) -> ComparisonReport {
    let mut rows = Vec::new();
    let mut unmatched = Vec::new();
    for cf in closed_form {
        let Some(level) = oracle.levels.get(cf.state.n as usize) else {
            unmatched.push(cf.state.n);
            continue;
        };
        let o = level.best();
        let abs_dev = (cf.energy - o).abs();
        rows.push(LevelComparison {
            n: cf.state.n,
            l: cf.state.l,
            closed_form: cf.energy,
            oracle: o,
            error_estimate: level.error_estimate,
            abs_dev,
            rel_dev: if o != 0.0 { abs_dev / o.abs() } else { abs_dev },
            flagged: level.error_estimate.is_some_and(|e| abs_dev > FLAG_FACTOR * e),
        });
    }
    ComparisonReport {
        matched: rows.len(),
        closed_form_levels: closed_form.len(),
        oracle_levels: oracle.levels.len(),
        unmatched,
        max_abs_dev: rows.iter().fold(0.0, |m, r| m.max(r.abs_dev)),
        flagged: rows.iter().filter(|r| r.flagged).count(),
        rows,
    }
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned columns; energies in eV.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>4} {:>4} {:>18} {:>18} {:>11} {:>11} {:>11} {:>5}",
            "n", "l", "closed_form", "oracle", "abs_dev", "rel_dev", "err_est", "flag"
        );
        for r in &self.rows {
            let est = r.error_estimate.map_or_else(|| "-".to_string(), |e| format!("{e:.3e}"));
            let _ = writeln!(
                s,
                "{:>4} {:>4} {:>18.10} {:>18.10} {:>11.3e} {:>11.3e} {:>11} {:>5}",
                r.n,
                r.l,
                r.closed_form,
                r.oracle,
                r.abs_dev,
                r.rel_dev,
                est,
                if r.flagged { "!" } else { "" }
            );
        }
        let _ = writeln!(
            s,
            "matched {}/{} (oracle levels {}), max |dev| {:.3e} eV, flagged {}",
            self.matched, self.closed_form_levels, self.oracle_levels, self.max_abs_dev, self.flagged
        );
        if !self.unmatched.is_empty() {
            let list: Vec<String> = self.unmatched.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(s, "no oracle level for n = {}", list.join(", "));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Grid, OracleConfig, OracleLevel};
    use crate::spectrum::{QuantumState, Variant};

    fn spectrum(levels: &[f64]) -> OracleSpectrum {
        OracleSpectrum {
            config: OracleConfig::default(),
            threshold: 0.0,
            grid: Grid::new(0.1, 10.0, 500, 1.0),
            widenings: 0,
            levels: levels
                .iter()
                .enumerate()
                .map(|(n, &e)| OracleLevel {
                    n,
                    energy: e,
                    extrapolated: Some(e),
                    error_estimate: Some(1e-6),
                })
                .collect(),
            r: Vec::new(),
            weights: Vec::new(),
            eigenvectors: Vec::new(),
        }
    }

    fn cf(n: u32, e: f64) -> SpectrumResult<f64> {
        SpectrumResult {
            state: QuantumState::new(n, 0),
            energy: e,
            eps: 1.0,
            xi: None,
            variant: Variant::ConstantMass,
            bound: true,
        }
    }

    #[test]
    fn empty_closed_form_list() {
        let r = compare(&[], &spectrum(&[-2.0, -1.0]));
        assert_eq!(r.matched, 0);
        assert_eq!(r.max_abs_dev, 0.0);
        assert!(r.to_text().contains("matched 0/0"));
    }

    #[test]
    fn flags_and_unmatched() {
        let r = compare(&[cf(0, -2.0 + 5e-7), cf(1, -1.0 + 1e-4), cf(5, -0.1)], &spectrum(&[-2.0, -1.0]));
        assert_eq!(r.matched, 2);
        assert_eq!(r.unmatched, vec![5]);
        assert!(!r.rows[0].flagged);
        assert!(r.rows[1].flagged);
        assert_eq!(r.flagged, 1);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["matched"], 2);
    }
}
