use serde::Serialize;

use super::curvature_sample;
use crate::chart::FrontalChart;
use crate::classify::{classify_singular_point, Verdict};
use crate::error::{Error, Result};

/// Which side of `u0` the sweep runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Below,
    Above,
}

/// Sweep geometry: `v = +-h0 2^-n` for `n = 1..=steps` at `u = u0 +- delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitWindow {
    pub delta: f64,
    pub h0: f64,
    pub steps: u32,
    /// Number of trailing samples used for the log-log fit.
    pub fit: usize,
}

impl Default for LimitWindow {
    fn default() -> Self {
        Self { delta: 0.1, h0: 0.1, steps: 20, fit: 8 }
    }
}

/// Ratio-form branches `I = (A+B)/(2 sigma W)` and `II = (A-B)/(2 sigma W)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RatioBranch {
    I,
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum BranchVerdict {
    Converges { limit: f64 },
    Diverges { slope: f64, r2: f64 },
}

impl BranchVerdict {
    pub fn limit(&self) -> Option<f64> {
        match self {
            BranchVerdict::Converges { limit } => Some(*limit),
            BranchVerdict::Diverges { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchTrace {
    pub label: String,
    /// Sign of `v` along the sweep.
    pub v_sign: f64,
    /// `(v, kappa)` pairs.
    pub samples: Vec<(f64, f64)>,
    pub verdict: BranchVerdict,
}

impl BranchTrace {
    /// `|kappa|` at the sample closest to the axis.
    pub fn last_abs(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.1.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub u0: f64,
    pub u: f64,
    pub k: usize,
    pub window: LimitWindow,
    /// Ratio-form branches: `[I+, I-, II+, II-]` by sign of `v`.
    pub ratio: Vec<BranchTrace>,
    /// `kappa1 = H + sqrt(Gamma)`, `kappa2 = H - sqrt(Gamma)`: `[1+, 1-, 2+, 2-]`.
    pub plus_minus: Vec<BranchTrace>,
}

impl LimitReport {
    /// The ratio branch converging from both signs of `v` to limits that
    /// agree within `tol`, provided the other branch diverges on both.
    pub fn converging_branch(&self, tol: f64) -> Option<RatioBranch> {
        let pick = |a: &BranchTrace, b: &BranchTrace| match (a.verdict.limit(), b.verdict.limit()) {
            (Some(x), Some(y)) => (x - y).abs() <= tol,
            _ => false,
        };
        let diverges = |a: &BranchTrace| a.verdict.limit().is_none();
        let (ip, im, iip, iim) = (&self.ratio[0], &self.ratio[1], &self.ratio[2], &self.ratio[3]);
        match (pick(ip, im), pick(iip, iim)) {
            (true, false) if diverges(iip) && diverges(iim) => Some(RatioBranch::I),
            (false, true) if diverges(ip) && diverges(im) => Some(RatioBranch::II),
            _ => None,
        }
    }

    /// Traces of `branch` for `v > 0` and `v < 0`.
    pub fn branch(&self, branch: RatioBranch) -> (&BranchTrace, &BranchTrace) {
        match branch {
            RatioBranch::I => (&self.ratio[0], &self.ratio[1]),
            RatioBranch::II => (&self.ratio[2], &self.ratio[3]),
        }
    }
}

fn fit_verdict(samples: &[(f64, f64)], fit: usize) -> BranchVerdict {
    let tail = &samples[samples.len().saturating_sub(fit)..];
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .filter(|(v, k)| *v != 0.0 && k.abs() > 0.0 && k.is_finite())
        .map(|(v, k)| (v.abs().ln(), k.abs().ln()))
        .collect();
    if pts.len() >= 3 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
        let slope = sxy / sxx;
        let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 0.0 };
        if slope <= -0.5 && r2 > 0.9 {
            return BranchVerdict::Diverges { slope, r2 };
        }
    }
    let m = samples.len();
    let limit = if m >= 2 { 2.0 * samples[m - 1].1 - samples[m - 2].1 } else { samples[m - 1].1 };
    BranchVerdict::Converges { limit }
}

/// Sweep both principal branches toward the singular curve next to a
/// k-non-front point.
pub fn limit_profile(chart: &FrontalChart, u0: f64, side: Side, window: LimitWindow) -> Result<LimitReport> {
    let report = classify_singular_point(chart, u0)?;
    let Verdict::KNonFront(k) = report.verdict else {
        return Err(Error::NotKNonFront { u: u0, verdict: report.verdict.to_string() });
    };
    let u = match side {
        Side::Below => u0 - window.delta,
        Side::Above => u0 + window.delta,
    };
    let mut ratio = Vec::new();
    let mut plus_minus = Vec::new();
    let mut columns: [Vec<Vec<(f64, f64)>>; 2] = [vec![Vec::new(); 4], vec![Vec::new(); 4]];
    for (slot, sign) in [1.0, -1.0].into_iter().enumerate() {
        for n in 1..=window.steps {
            let v = sign * window.h0 * 0.5f64.powi(n as i32);
            let s = curvature_sample(chart, u, v)?;
            columns[0][slot].push((v, s.kappa_i.to_f64()));
            columns[0][2 + slot].push((v, s.kappa_ii.to_f64()));
            columns[1][slot].push((v, s.kappa1.to_f64()));
            columns[1][2 + slot].push((v, s.kappa2.to_f64()));
        }
    }
    let labels = [["I", "I", "II", "II"], ["kappa1", "kappa1", "kappa2", "kappa2"]];
    for (which, cols) in columns.into_iter().enumerate() {
        for (i, samples) in cols.into_iter().enumerate() {
            let trace = BranchTrace {
                label: labels[which][i].to_string(),
                v_sign: if i % 2 == 0 { 1.0 } else { -1.0 },
                verdict: fit_verdict(&samples, window.fit),
                samples,
            };
            if which == 0 {
                ratio.push(trace);
            } else {
                plus_minus.push(trace);
            }
        }
    }
    Ok(LimitReport { u0, u, k, window, ratio, plus_minus })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_detects_pole() {
        let s: Vec<(f64, f64)> = (1..=20).map(|n| {
            let v = 0.1 * 0.5f64.powi(n);
            (v, 3.0 / v)
        }).collect();
        assert!(matches!(fit_verdict(&s, 8), BranchVerdict::Diverges { .. }));
        let s: Vec<(f64, f64)> = (1..=20).map(|n| {
            let v = 0.1 * 0.5f64.powi(n);
            (v, 2.0 + v)
        }).collect();
        let lim = fit_verdict(&s, 8).limit().unwrap();
        assert!((lim - 2.0).abs() < 1e-12);
    }
}
