use serde::Serialize;

use super::edge_invariants;
use crate::chart::FrontalChart;
use crate::classify::Verdict;
use crate::curvature::curvature_sample;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionEntry {
    pub u0: f64,
    pub extension_ok: bool,
    /// `H + sqrt(Gamma)` and `H - sqrt(Gamma)` from the edge invariants.
    pub predicted: (f64, f64),
    /// Extrapolated limits of `(kappa1, kappa2)` from `v > 0` and `v < 0`.
    pub observed_above: (f64, f64),
    pub observed_below: (f64, f64),
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub surface: String,
    pub entries: Vec<ExtensionEntry>,
}

impl ExtensionReport {
    /// Every extendable entry matches its sweep within `tol`.
    pub fn agrees(&self, tol: f64) -> bool {
        self.entries.iter().filter(|e| e.extension_ok).all(|e| e.max_error <= tol)
    }
}

fn sweep_limit(chart: &FrontalChart, u: f64, sign: f64) -> Result<(f64, f64)> {
    let mut last = Vec::new();
    for n in 10..=12 {
        let v = sign * 0.1 * 0.5f64.powi(n);
        let s = curvature_sample(chart, u, v)?;
        last.push((s.kappa1.to_f64(), s.kappa2.to_f64()));
    }
    let rich = |a: f64, b: f64| 2.0 * b - a;
    Ok((rich(last[1].0, last[2].0), rich(last[1].1, last[2].1)))
}

/// Check where the principal curvatures extend across a pure-frontal
/// curve, and that the extension matches the regular-region limits.
pub fn extension_test(chart: &FrontalChart, u_values: &[f64]) -> Result<ExtensionReport> {
    let mut entries = Vec::with_capacity(u_values.len());
    for &u0 in u_values {
        let p = edge_invariants(chart, u0)?;
        if p.verdict != Verdict::PureFrontal {
            return Err(Error::NotPureFrontal { u: u0 });
        }
        let h = p.h_edge.unwrap_or(f64::NAN);
        let g = p.gamma_edge.unwrap_or(f64::NAN).max(0.0).sqrt();
        let predicted = (h + g, h - g);
        let (observed_above, observed_below, max_error) = if p.extension_ok {
            let above = sweep_limit(chart, u0, 1.0)?;
            let below = sweep_limit(chart, u0, -1.0)?;
            let err = [
                (above.0 - predicted.0).abs(),
                (above.1 - predicted.1).abs(),
                (below.0 - predicted.0).abs(),
                (below.1 - predicted.1).abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            (above, below, err)
        } else {
            ((f64::NAN, f64::NAN), (f64::NAN, f64::NAN), f64::NAN)
        };
        entries.push(ExtensionEntry { u0, extension_ok: p.extension_ok, predicted, observed_above, observed_below, max_error });
    }
    Ok(ExtensionReport { surface: chart.name().to_string(), entries })
}
