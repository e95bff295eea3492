use serde::Serialize;

use super::{curvature_sample, Extended, FundamentalData};
use crate::chart::FrontalChart;
use crate::classify::{classify_singular_point, Verdict};
use crate::error::{Error, Result};
use crate::invariants::edge_invariants;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundedGaussReport {
    pub surface: String,
    pub u0: f64,
    pub verdict: Verdict,
    /// `K` on the singular curve from `(L_1 N - M^2) / W`.
    pub k_value: f64,
    pub kappa_t: f64,
    /// `|K + kappa_t^2|`.
    pub residual: f64,
    /// Largest `|L|` seen along the sampled curve.
    pub max_kappa_nu: f64,
}

/// Gaussian curvature at a singular point where the limiting normal
/// curvature vanishes identically along the curve.
pub fn bounded_gauss_check(chart: &FrontalChart, u0: f64) -> Result<BoundedGaussReport> {
    let verdict = classify_singular_point(chart, u0)?.verdict;
    if matches!(verdict, Verdict::Regular | Verdict::Degenerate) {
        return Err(Error::NotFirstKind { u: u0 });
    }
    let policy = chart.policy();
    let mut max_kappa_nu = 0.0_f64;
    for u in chart.domain().u_samples(policy.n_check) {
        let fd = FundamentalData::from_frame(&chart.frame(u, 0.0)?);
        max_kappa_nu = max_kappa_nu.max(fd.lt.value().abs() / fd.et.value());
    }
    if max_kappa_nu > policy.eps_class {
        return Err(Error::NotBounded { max_abs: max_kappa_nu });
    }
    let s = curvature_sample(chart, u0, 0.0)?;
    let k_value = match s.k {
        Extended::Finite(k) => k,
        _ => return Err(Error::NotBounded { max_abs: f64::INFINITY }),
    };
    let kappa_t = edge_invariants(chart, u0)?.kappa_t;
    Ok(BoundedGaussReport {
        surface: chart.name().to_string(),
        u0,
        verdict,
        k_value,
        kappa_t,
        residual: (k_value + kappa_t * kappa_t).abs(),
        max_kappa_nu,
    })
}
