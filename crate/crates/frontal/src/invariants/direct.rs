use serde::Serialize;

use super::normalize_orthogonal_adapted;
use crate::chart::FrontalChart;
use crate::classify::{classify_singular_point, Verdict};
use crate::error::{Error, Result};
use crate::jet::{Jet2, JetVec3};

/// `r_b`, `r_c` from directional derivatives along the corrected null field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectInvariants {
    pub u0: f64,
    pub r_b: f64,
    pub r_c: f64,
    /// Least-squares `l` with `eta^3 f = l eta^2 f`.
    pub l: f64,
    /// `|eta^3 f - l eta^2 f|`.
    pub l_residual: f64,
    /// `<f_s, eta^2 f>` and `<f_s, eta^3 f>` at the point.
    pub contract: (f64, f64),
    /// `|h_v - F_v f_s - (G_v / 2) h|` at the point.
    pub hv_residual: f64,
}

/// Derivative along `a d/ds + d/dw`.
fn along(a: &Jet2, g: &JetVec3) -> Result<JetVec3> {
    let gs = g.d_u()?;
    let gw = g.d_v()?;
    let order = gs.order();
    Ok(gs.mul_scalar(&a.truncate(order)).add(&gw))
}

pub fn rb_rc_direct(chart: &FrontalChart, u0: f64) -> Result<DirectInvariants> {
    let verdict = classify_singular_point(chart, u0)?.verdict;
    if !matches!(verdict, Verdict::KNonFront(_) | Verdict::PureFrontal) {
        return Err(Error::NotApplicable(format!("r_b and r_c need a non-front point, found {verdict}")));
    }
    let oa = normalize_orthogonal_adapted(chart, u0)?;
    let f = &oa.position;
    if f.order() < 5 {
        return Err(Error::InsufficientOrder { what: "fifth derivative along the null field", needed: 6, available: chart.policy().order });
    }
    let fd = &oa.fundamental;
    let ft_v = fd.ft.coeff(0, 1)?;
    let gt_v = fd.gt.coeff(0, 1)?;
    let q = f.base();
    let w = Jet2::var_v(q, f.order());
    let a = (&w * &w).scale(-ft_v);
    let mut powers = vec![f.clone()];
    for k in 0..5 {
        let next = along(&a, &powers[k])?;
        powers.push(next);
    }
    let xi = f.partial(1, 0)?;
    let e2 = powers[2].value();
    let e3 = powers[3].value();
    let e4 = powers[4].value();
    let e5 = powers[5].value();
    let l = e3.dot(&e2) / e2.norm_squared();
    let cross = xi.cross(&e2);
    let r_b = xi.norm_squared() * cross.dot(&e4) / cross.norm().powi(3);
    let r_c = xi.norm().powf(2.5) * cross.dot(&(3.0 * e5 - 10.0 * l * e4)) / cross.norm().powf(3.5);
    let h = &oa.frame.x;
    let hv = h.partial(0, 1)?;
    let hv_residual = (hv - ft_v * oa.frame.fu.value() - 0.5 * gt_v * h.value()).norm();
    Ok(DirectInvariants {
        u0,
        r_b,
        r_c,
        l,
        l_residual: (e3 - l * e2).norm(),
        contract: (xi.dot(&e2), xi.dot(&e3)),
        hv_residual,
    })
}
