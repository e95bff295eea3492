//! Classification of points on the singular curve of an adapted chart.

use serde::{Deserialize, Serialize};

use crate::chart::FrontalChart;
use crate::error::{Error, Result};
use crate::jet::{BasePoint, JetVec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "k")]
pub enum Verdict {
    Regular,
    FirstKindFront,
    KNonFront(usize),
    PureFrontal,
    Degenerate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::KNonFront(k) => write!(f, "KNonFront({k})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPointReport {
    pub surface: String,
    pub point: (f64, f64),
    pub verdict: Verdict,
    pub delta0: f64,
    /// Taylor coefficients of `psi_classifier` in `t`.
    pub psi_jet: Vec<f64>,
    /// Threshold below which a coefficient counts as zero.
    pub psi_tolerance: f64,
    pub kappa_c0: f64,
    /// `lambda_v(u0, 0) = det(f_u, h, nu)`.
    pub lambda_v: f64,
    pub nondegenerate: bool,
    pub notes: Vec<String>,
}

/// Jet in `t` of `psi_classifier(t) = det(f_u, nu, nu_v)(u0 + t, 0)`.
pub fn psi_classifier(chart: &FrontalChart, u0: f64) -> Result<Vec<f64>> {
    let fr = chart.frame(u0, 0.0)?;
    let psi = JetVec3::det3(&fr.fu.truncate(fr.nu_v.order()), &fr.nu.truncate(fr.nu_v.order()), &fr.nu_v);
    Ok(psi.u_series())
}

/// Coordinate-free cuspidal curvature
/// `|f_u|^{3/2} det(f_u, f_vv, f_vvv) / |f_u x f_vv|^{5/2}` on the u-axis.
pub fn cuspidal_curvature_direct(chart: &FrontalChart, u0: f64) -> Result<f64> {
    let f = chart.position(BasePoint::new(u0, 0.0), 3)?;
    let fu = f.partial(1, 0)?;
    let fvv = f.partial(0, 2)?;
    let fvvv = f.partial(0, 3)?;
    let cross = fu.cross(&fvv);
    Ok(fu.norm().powf(1.5) * cross.dot(&fvvv) / cross.norm().powf(2.5))
}

pub fn classify_singular_point(chart: &FrontalChart, u0: f64) -> Result<SingularPointReport> {
    let policy = chart.policy();
    let mut notes = Vec::new();
    let surface = chart.name().to_string();
    let f1 = chart.position(BasePoint::new(u0, 0.0), 1)?;
    let fu = f1.partial(1, 0)?;
    let fv = f1.partial(0, 1)?;
    let regular_size = fu.cross(&fv).norm();
    let scale = 1.0 + fu.norm() * fu.norm();
    if regular_size > policy.eps_frame * scale {
        notes.push(format!("|f_u x f_v| = {regular_size:e}: not a singular point"));
        return Ok(SingularPointReport {
            surface,
            point: (u0, 0.0),
            verdict: Verdict::Regular,
            delta0: f64::NAN,
            psi_jet: Vec::new(),
            psi_tolerance: 0.0,
            kappa_c0: f64::NAN,
            lambda_v: f64::NAN,
            nondegenerate: true,
            notes,
        });
    }
    if !chart.adapted() {
        return Err(Error::NotAdapted { u: u0, v: 0.0 });
    }
    let fr = match chart.frame(u0, 0.0) {
        Ok(fr) => fr,
        Err(Error::DegenerateFrame { value, .. }) => {
            notes.push(format!("|f_u x h| = {value:e}: lambda_v vanishes"));
            return Ok(SingularPointReport {
                surface,
                point: (u0, 0.0),
                verdict: Verdict::Degenerate,
                delta0: 1.0,
                psi_jet: Vec::new(),
                psi_tolerance: 0.0,
                kappa_c0: f64::NAN,
                lambda_v: value,
                nondegenerate: false,
                notes,
            });
        }
        Err(e) => return Err(e),
    };
    // Singular curve t -> (u0 + t, 0) with null field d/dv.
    let delta0 = 1.0;
    let lambda_v = fr.lambda_tilde().value();
    let nondegenerate = lambda_v.abs() > policy.eps_frame;
    let kappa_c0 = cuspidal_curvature_direct(chart, u0)?;
    if !nondegenerate {
        notes.push(format!("lambda_v = {lambda_v:e}"));
        return Ok(SingularPointReport {
            surface,
            point: (u0, 0.0),
            verdict: Verdict::Degenerate,
            delta0,
            psi_jet: Vec::new(),
            psi_tolerance: 0.0,
            kappa_c0,
            lambda_v,
            nondegenerate,
            notes,
        });
    }
    if delta0.abs() <= policy.eps_class {
        return Err(Error::NotFirstKind { u: u0 });
    }
    let psi_jet = psi_classifier(chart, u0)?;
    let max = psi_jet.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let tol = policy.eps_class * (1.0 + max);
    let verdict = match psi_jet.iter().position(|c| c.abs() > tol) {
        Some(0) => Verdict::FirstKindFront,
        Some(k) => Verdict::KNonFront(k),
        None => {
            let domain = chart.domain();
            let mut worst = 0.0_f64;
            for u in domain.u_samples(policy.n_check) {
                let psi = psi_classifier(chart, u)?;
                worst = worst.max(psi[0].abs());
            }
            notes.push(format!(
                "all {} psi coefficients below {tol:e}; max |psi| over {} samples = {worst:e}",
                psi_jet.len(),
                policy.n_check
            ));
            if worst <= tol {
                notes.push("pure-frontal verdict is numerical".into());
                Verdict::PureFrontal
            } else {
                return Err(Error::InsufficientOrder {
                    what: "psi vanishing order",
                    needed: policy.order + 1,
                    available: policy.order,
                });
            }
        }
    };
    Ok(SingularPointReport {
        surface,
        point: (u0, 0.0),
        verdict,
        delta0,
        psi_jet,
        psi_tolerance: tol,
        kappa_c0,
        lambda_v,
        nondegenerate,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::NumericPolicy;

    fn verdict(name: &str, u0: f64) -> Verdict {
        let c = FrontalChart::gallery(name, NumericPolicy::default()).unwrap();
        classify_singular_point(&c, u0).unwrap().verdict
    }

    #[test]
    fn gallery_verdicts() {
        assert_eq!(verdict("cuspidal-edge", 0.0), Verdict::FirstKindFront);
        assert_eq!(verdict("f1", 0.0), Verdict::KNonFront(1));
        assert_eq!(verdict("f2", 0.0), Verdict::KNonFront(2));
        assert_eq!(verdict("five-half", 0.0), Verdict::PureFrontal);
        assert_eq!(verdict("cuspidal-cross-cap", 0.0), Verdict::KNonFront(1));
        assert_eq!(verdict("plane", 0.0), Verdict::Regular);
    }

    #[test]
    fn cuspidal_curvature_of_edge() {
        let c = FrontalChart::gallery("cuspidal-edge", NumericPolicy::default()).unwrap();
        let k = cuspidal_curvature_direct(&c, 0.0).unwrap();
        assert!((k - 12.0 / 2f64.powf(2.5)).abs() < 1e-14);
    }
}
