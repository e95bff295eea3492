use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use super::{normalize_orthogonal_adapted, profile_from_normalized};
use crate::chart::FrontalChart;
use crate::classify::{classify_singular_point, Verdict};
use crate::curvature::curvature_sample;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UmbilicBranch {
    /// `Gamma = H^2 - K` at a pure-frontal point.
    Gamma,
    /// `Gamma~ = 4 lambda^2 Gamma` at a k-non-front point.
    GammaTilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UmbilicFlags {
    pub r_c_nonzero: bool,
    /// `3 kappa_nu' != r_b'` or `kappa_t' != 0`.
    pub bias_or_torsion_nonzero: bool,
    /// `kappa_t' != 0`.
    pub torsion_derivative_nonzero: bool,
    /// `kappa_t kappa_c' != 0`.
    pub torsion_times_cusp_nonzero: bool,
}

/// Gradient and Hessian of the umbilicity function at a singular point,
/// in orthogonal adapted coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UmbilicReport {
    pub surface: String,
    pub u0: f64,
    pub verdict: Verdict,
    pub branch: UmbilicBranch,
    pub value: f64,
    /// `value` vanishes; the closed-form Hessian is only the true Hessian there.
    pub at_umbilic: bool,
    pub closed_gradient: [f64; 2],
    pub closed_hessian: [[f64; 2]; 2],
    pub closed_det: f64,
    /// Determinant in the form `(r_c/24)^2 (X^2/4 + T^2)` resp. `16 M^2 N_u^2`.
    pub quoted_det: f64,
    pub fd_gradient: [f64; 2],
    pub fd_hessian: [[f64; 2]; 2],
    pub fd_det: f64,
    /// Isolated umbilic: critical point with definite Hessian.
    pub morse: bool,
    pub flags: UmbilicFlags,
}

/// Central differences with one Richardson step.
fn fd_grad_hess(g: &dyn Fn(f64, f64) -> Result<f64>, u: f64, v: f64, step: f64) -> Result<(Vector2<f64>, Matrix2<f64>)> {
    let once = |h: f64| -> Result<(Vector2<f64>, Matrix2<f64>)> {
        let c = g(u, v)?;
        let up = g(u + h, v)?;
        let um = g(u - h, v)?;
        let vp = g(u, v + h)?;
        let vm = g(u, v - h)?;
        let pp = g(u + h, v + h)?;
        let pm = g(u + h, v - h)?;
        let mp = g(u - h, v + h)?;
        let mm = g(u - h, v - h)?;
        let grad = Vector2::new((up - um) / (2.0 * h), (vp - vm) / (2.0 * h));
        let huu = (up - 2.0 * c + um) / (h * h);
        let hvv = (vp - 2.0 * c + vm) / (h * h);
        let huv = (pp - pm - mp + mm) / (4.0 * h * h);
        Ok((grad, Matrix2::new(huu, huv, huv, hvv)))
    };
    let (g1, h1) = once(step)?;
    let (g2, h2) = once(0.5 * step)?;
    Ok(((4.0 * g2 - g1) / 3.0, (4.0 * h2 - h1) / 3.0))
}

fn arr2(m: &Matrix2<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

/// Step used for the finite-difference route.
pub const FD_STEP: f64 = 1e-3;

pub fn umbilic_analysis(chart: &FrontalChart, u0: f64) -> Result<UmbilicReport> {
    let verdict = classify_singular_point(chart, u0)?.verdict;
    let branch = match verdict {
        Verdict::PureFrontal => UmbilicBranch::Gamma,
        Verdict::KNonFront(_) => UmbilicBranch::GammaTilde,
        Verdict::Regular => return Err(Error::NotSingular { u: u0, v: 0.0 }),
        other => return Err(Error::NotApplicable(format!("umbilic analysis at a {other} point"))),
    };
    let oa = normalize_orthogonal_adapted(chart, u0)?;
    let p = profile_from_normalized(chart, &oa, verdict)?;
    let fd = &oa.fundamental;
    let tol = chart.policy().eps_class;
    let r_c = p.r_c.unwrap_or(0.0);
    let r_b = p.r_b.unwrap_or(0.0);
    let r_b_prime = p.r_b_prime.unwrap_or(0.0);
    let flags = UmbilicFlags {
        r_c_nonzero: r_c.abs() > tol,
        bias_or_torsion_nonzero: (3.0 * p.kappa_nu_prime - r_b_prime).abs() > tol || p.kappa_t_prime.abs() > tol,
        torsion_derivative_nonzero: p.kappa_t_prime.abs() > tol,
        torsion_times_cusp_nonzero: (p.kappa_t * p.kappa_c_prime).abs() > tol,
    };
    let (value, grad, hess, quoted_det) = match branch {
        UmbilicBranch::Gamma => {
            let y = r_b / 3.0 - p.kappa_nu;
            let x = p.kappa_nu_prime - r_b_prime / 3.0;
            let t = p.kappa_t_prime;
            let hw = r_c / 48.0;
            let grad = [0.5 * y * (-x) + 2.0 * p.kappa_t * t, hw * y];
            let hess = Matrix2::new(0.5 * x * x + 2.0 * t * t, -hw * x, -hw * x, 2.0 * hw * hw);
            let quoted = (r_c / 24.0).powi(2) * (0.25 * x * x + t * t);
            (p.gamma_edge.unwrap_or(f64::NAN), grad, hess, quoted)
        }
        UmbilicBranch::GammaTilde => {
            let n = fd.nt.value();
            let n_u = fd.nt.coeff(1, 0)?;
            let n_v = fd.nt.coeff(0, 1)?;
            let l = fd.lt.value();
            let m = fd.mt.value();
            let w = fd.w().value();
            let grad = [2.0 * n * n_u / w, (2.0 * n * (n_v + l) - 4.0 * l * n) / w];
            let d = n_v - l;
            let hess = Matrix2::new(2.0 * n_u * n_u, 2.0 * n_u * d, 2.0 * n_u * d, 8.0 * m * m + 2.0 * d * d);
            let quoted = 16.0 * m * m * n_u * n_u;
            (n * n * fd.et.value() * fd.et.value() / w, grad, hess, quoted)
        }
    };

    // The same derivatives by finite differences of the field in the
    // original chart, pulled through the coordinate change.
    let gamma_tilde = matches!(branch, UmbilicBranch::GammaTilde);
    let (cu, cv) = (&oa.change_u, &oa.change_v);
    let jac = [cu.d_u()?, cu.d_v()?, cv.d_u()?, cv.d_v()?];
    let field = |ds: f64, dw: f64| -> Result<f64> {
        let s = curvature_sample(chart, cu.eval_offset(ds, dw), cv.eval_offset(ds, dw))?;
        Ok(if gamma_tilde {
            let j: Vec<f64> = jac.iter().map(|d| d.eval_offset(ds, dw)).collect();
            (j[0] * j[3] - j[1] * j[2]).powi(2) * s.gamma_tilde
        } else {
            s.gamma.to_f64()
        })
    };
    let (g_new, h_new) = fd_grad_hess(&field, 0.0, 0.0, FD_STEP)?;
    let closed_det = hess.determinant();
    let critical = grad[0].abs() <= tol && grad[1].abs() <= tol;
    Ok(UmbilicReport {
        surface: chart.name().to_string(),
        u0,
        verdict,
        branch,
        value,
        at_umbilic: value.abs() <= tol,
        closed_gradient: grad,
        closed_hessian: arr2(&hess),
        closed_det,
        quoted_det,
        fd_gradient: [g_new[0], g_new[1]],
        fd_hessian: arr2(&h_new),
        fd_det: h_new.determinant(),
        morse: critical && closed_det > tol,
        flags,
    })
}
