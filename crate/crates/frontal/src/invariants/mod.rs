//! Orthogonal adapted normalization and the edge invariants
//! `kappa_nu`, `kappa_c`, `kappa_t`, `r_b`, `r_c`.

mod direct;
mod extension;
mod umbilic;

pub use direct::{rb_rc_direct, DirectInvariants};
pub use extension::{extension_test, ExtensionEntry, ExtensionReport};
pub use umbilic::{umbilic_analysis, UmbilicBranch, UmbilicFlags, UmbilicReport};

use serde::Serialize;

use crate::chart::{Frame, FrontalChart};
use crate::classify::{classify_singular_point, Verdict};
use crate::curvature::FundamentalData;
use crate::error::{Error, Result};
use crate::jet::{BasePoint, Jet2, JetVec3};
use crate::quad::rk4;

/// A chart reparametrized near `(u0, 0)` so that `|f_s| = |f_ww| = 1`
/// and `<f_s, f_ww> = 0` along the singular curve.
#[derive(Debug, Clone)]
pub struct OrthogonalAdaptedChart {
    pub u0: f64,
    /// Arc length of the singular image from the start of the domain.
    pub s0: f64,
    /// `u(s, w)` and `v(s, w)` as jets at `(s0, 0)`.
    pub change_u: Jet2,
    pub change_v: Jet2,
    /// Position jet in the new coordinates.
    pub position: JetVec3,
    pub frame: Frame,
    pub fundamental: FundamentalData,
    /// Largest deviation of `|f_s|^2 - 1`, `<f_s, h>`, `|h|^2 - 1` along the axis.
    pub residual: f64,
    /// Whether a supplied normal had to be reversed for positive orientation.
    pub flipped: bool,
}

impl OrthogonalAdaptedChart {
    /// Linear part of the change, `d(u, v)/d(s, w)` at the base point.
    pub fn jacobian(&self) -> [[f64; 2]; 2] {
        let c = |j: &Jet2, i, k| j.coeff(i, k).unwrap_or(0.0);
        [
            [c(&self.change_u, 1, 0), c(&self.change_u, 0, 1)],
            [c(&self.change_v, 1, 0), c(&self.change_v, 0, 1)],
        ]
    }
}

/// Arc length of `u -> f(u, 0)` from the start of the domain to `u0`.
pub fn arc_length(chart: &FrontalChart, u0: f64) -> Result<f64> {
    let d = chart.domain();
    let speed = |u: f64| -> f64 {
        chart
            .position(BasePoint::new(u, 0.0), 1)
            .and_then(|f| Ok(f.partial(1, 0)?.norm()))
            .unwrap_or(f64::NAN)
    };
    let s = rk4(d.u.0, u0, 0.0, 1e-3 * (d.u.1 - d.u.0), |u, _| speed(u));
    if s.is_finite() {
        Ok(s)
    } else {
        // Re-evaluate to surface the underlying error.
        chart.position(BasePoint::new(u0, 0.0), 1)?;
        Ok(s)
    }
}

fn axis_jet(j: &JetVec3) -> JetVec3 {
    j.map(Jet2::axis_part)
}

pub fn normalize_orthogonal_adapted(chart: &FrontalChart, u0: f64) -> Result<OrthogonalAdaptedChart> {
    if !chart.adapted() {
        return Err(Error::NotAdapted { u: u0, v: 0.0 });
    }
    let policy = *chart.policy();
    let d = policy.order;
    if d < 4 {
        return Err(Error::InsufficientOrder { what: "orthogonal adapted normalization", needed: 4, available: d });
    }
    let p = BasePoint::new(u0, 0.0);
    let f = chart.position(p, d)?;
    let fvv0 = f.partial(0, 2)?;
    if fvv0.norm() <= policy.eps_frame {
        return Err(Error::DegenerateEdge { u: u0, value: fvv0.norm() });
    }
    let s0 = arc_length(chart, u0)?;
    let q = BasePoint::new(s0, 0.0);

    // (i) arc length along the axis: phi' = 1 / |f_u(phi, 0)|.
    let speed_inv = axis_jet(&f.d_u()?).norm()?.recip(policy.eps_den)?;
    let zero = Jet2::zero(q, d);
    let mut phi = Jet2::constant(q, d, u0);
    for _ in 0..=d {
        phi = speed_inv.compose(&phi, &zero)?.integrate_u(u0).truncate(d);
    }
    let w = Jet2::var_v(q, d);
    let f1 = f.compose(&phi, &w)?;

    // (ii) shear u -> u + c(u) w^2 killing <f_s, f_ww> on the axis.
    let f1_s = axis_jet(&f1.d_u()?);
    let f1_ww = axis_jet(&f1.d_v()?.d_v()?);
    let c = f1_s.dot(&f1_ww).try_div(&f1_s.norm_squared().scale(-2.0), policy.eps_den)?;
    let shear_u = &Jet2::var_u(q, d) + &c.shift_v(2).truncate(d);
    let f2 = f1.compose(&shear_u, &w)?;

    // (iii) w -> e(s) w with e = |f_ww|^{-1/2}.
    let f2_ww = axis_jet(&f2.d_v()?.d_v()?);
    let e = f2_ww.norm()?.powf(-0.5)?;
    let scale_v = e.shift_v(1).truncate(d - 1);
    let scale_u = Jet2::var_u(q, d - 1);
    let f3 = f2.compose(&scale_u, &scale_v)?;

    let change_u = phi.compose(&shear_u.compose(&scale_u, &scale_v)?, &scale_v)?;
    let change_v = scale_v.clone();

    let mut flipped = false;
    let supplied = match chart.map().gauss(p, d, &policy) {
        Some(nu) => {
            let nu = nu?.compose(&change_u, &change_v)?;
            let fs = f3.partial(1, 0)?;
            let fww = f3.partial(0, 2)?;
            if fs.cross(&fww).dot(&nu.value()) < 0.0 {
                flipped = true;
                Some(nu.scale(-1.0))
            } else {
                Some(nu)
            }
        }
        None => None,
    };
    let frame = Frame::from_jets(f3.clone(), true, None, supplied, &policy)?;
    let fundamental = FundamentalData::from_frame(&frame);
    let mut residual = 0.0_f64;
    for (jet, target) in [(&fundamental.et, 1.0), (&fundamental.ft, 0.0), (&fundamental.gt, 1.0)] {
        let series = jet.u_series();
        residual = residual.max((series[0] - target).abs());
        for c in &series[1..] {
            residual = residual.max(c.abs());
        }
    }
    Ok(OrthogonalAdaptedChart {
        u0,
        s0,
        change_u,
        change_v,
        position: f3,
        frame,
        fundamental,
        residual,
        flipped,
    })
}

/// Invariants at one point of the singular curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantProfile {
    pub surface: String,
    pub u0: f64,
    pub verdict: Verdict,
    pub kappa_nu: f64,
    pub kappa_c: f64,
    pub kappa_t: f64,
    pub r_b: Option<f64>,
    pub r_c: Option<f64>,
    /// `l` with `eta^3 f = l eta^2 f`, equal to `G_v` at the point.
    pub l_coeff: f64,
    pub extension_ok: bool,
    #[serde(rename = "H_edge")]
    pub h_edge: Option<f64>,
    #[serde(rename = "Gamma_edge")]
    pub gamma_edge: Option<f64>,
    /// Derivatives along the arc-length parameter.
    pub kappa_nu_prime: f64,
    pub kappa_t_prime: f64,
    pub kappa_c_prime: f64,
    pub r_b_prime: Option<f64>,
    pub normalization_residual: f64,
}

fn coeff(j: &Jet2, i: usize, k: usize) -> Result<f64> {
    Ok(j.coeff(i, k)?)
}

/// The edge invariants read from the normalized tilde data.
pub fn edge_invariants(chart: &FrontalChart, u0: f64) -> Result<InvariantProfile> {
    let report = classify_singular_point(chart, u0)?;
    let verdict = report.verdict;
    if matches!(verdict, Verdict::Regular | Verdict::Degenerate) {
        return Err(Error::NotFirstKind { u: u0 });
    }
    let oa = normalize_orthogonal_adapted(chart, u0)?;
    profile_from_normalized(chart, &oa, verdict)
}

pub(crate) fn profile_from_normalized(
    chart: &FrontalChart,
    oa: &OrthogonalAdaptedChart,
    verdict: Verdict,
) -> Result<InvariantProfile> {
    let fd = &oa.fundamental;
    let policy = chart.policy();
    let kappa_nu = fd.lt.value();
    let kappa_c = 2.0 * fd.nt.value();
    let kappa_t = fd.mt.value();
    let non_front = !matches!(verdict, Verdict::FirstKindFront);
    let l_coeff = coeff(&fd.gt, 0, 1)?;
    let (r_b, r_c, r_b_prime) = if non_front {
        if fd.order < 2 {
            return Err(Error::InsufficientOrder { what: "r_b and r_c", needed: 6, available: policy.order });
        }
        let n_v = coeff(&fd.nt, 0, 1)?;
        let n_vv = 2.0 * coeff(&fd.nt, 0, 2)?;
        let f_v = coeff(&fd.ft, 0, 1)?;
        let r_c = 12.0 * (n_vv - 4.0 * f_v * kappa_t - 2.0 * l_coeff * n_v);
        (Some(3.0 * n_v), Some(r_c), Some(3.0 * coeff(&fd.nt, 1, 1)?))
    } else {
        (None, None, None)
    };
    let pure = matches!(verdict, Verdict::PureFrontal);
    let (h_edge, gamma_edge, extension_ok) = match (pure, r_b) {
        (true, Some(rb)) => {
            let y = rb / 3.0 - kappa_nu;
            let test = y * y + 4.0 * kappa_t * kappa_t;
            let tol = policy.eps_umbilic * (1.0 + kappa_nu * kappa_nu + rb * rb / 9.0);
            (Some(kappa_nu / 2.0 + rb / 6.0), Some(0.25 * y * y + kappa_t * kappa_t), test > tol)
        }
        _ => (None, None, false),
    };
    Ok(InvariantProfile {
        surface: chart.name().to_string(),
        u0: oa.u0,
        verdict,
        kappa_nu,
        kappa_c,
        kappa_t,
        r_b,
        r_c,
        l_coeff,
        extension_ok,
        h_edge,
        gamma_edge,
        kappa_nu_prime: coeff(&fd.lt, 1, 0)?,
        kappa_t_prime: coeff(&fd.mt, 1, 0)?,
        kappa_c_prime: 2.0 * coeff(&fd.nt, 1, 0)?,
        r_b_prime,
        normalization_residual: oa.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::NumericPolicy;

    fn chart(name: &str) -> FrontalChart {
        FrontalChart::gallery(name, NumericPolicy::default()).unwrap()
    }

    #[test]
    fn cuspidal_edge_scale() {
        let oa = normalize_orthogonal_adapted(&chart("cuspidal-edge"), 0.0).unwrap();
        let j = oa.jacobian();
        assert!((j[0][0] - 1.0).abs() < 1e-14);
        assert!((j[1][1] - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(oa.residual < 1e-12);
    }

    #[test]
    fn limiting_normal_curvature_of_examples() {
        for name in ["f1", "f2"] {
            let p = edge_invariants(&chart(name), 0.0).unwrap();
            assert!((p.kappa_nu - 2.0).abs() < 1e-10, "{name}: {}", p.kappa_nu);
        }
    }

    #[test]
    fn cuspidal_curvature_matches_direct_formula() {
        let c = chart("cuspidal-edge");
        let p = edge_invariants(&c, 0.0).unwrap();
        assert!((p.kappa_c - 12.0 / 2f64.powf(2.5)).abs() < 1e-12);
        assert!(p.r_b.is_none() && p.r_c.is_none());
    }
}
