//! Tilde fundamental data, Gaussian and mean curvature, `Gamma = H^2 - K`
//! and the principal curvatures, including their behavior on the
//! singular curve.

mod bounded;
mod limit;

pub use bounded::{bounded_gauss_check, BoundedGaussReport};
pub use limit::{limit_profile, BranchTrace, BranchVerdict, LimitReport, LimitWindow, RatioBranch, Side};

use nalgebra::Vector3;
use serde::{Serialize, Serializer};

use crate::chart::{Frame, FrontalChart};
use crate::error::{Error, Result};
use crate::jet::{BasePoint, Jet2};
use crate::policy::NumericPolicy;

/// Real value or a classified non-finite limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    PosInf,
    NegInf,
    Undefined,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(x) => x,
            Extended::PosInf => f64::INFINITY,
            Extended::NegInf => f64::NEG_INFINITY,
            Extended::Undefined => f64::NAN,
        }
    }

    fn unbounded(sign: f64) -> Self {
        if sign > 0.0 {
            Extended::PosInf
        } else if sign < 0.0 {
            Extended::NegInf
        } else {
            Extended::Undefined
        }
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x:?}"),
            Extended::PosInf => f.write_str("inf"),
            Extended::NegInf => f.write_str("-inf"),
            Extended::Undefined => f.write_str("nan"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(x) if x.is_finite() => s.serialize_f64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Jets of the six tilde functions and the `sigma` factor.
#[derive(Debug, Clone)]
pub struct FundamentalData {
    pub base: BasePoint,
    pub order: usize,
    pub sigma: Jet2,
    pub et: Jet2,
    pub ft: Jet2,
    pub gt: Jet2,
    pub lt: Jet2,
    pub mt: Jet2,
    pub nt: Jet2,
}

impl FundamentalData {
    pub fn from_frame(fr: &Frame) -> Self {
        let order = fr.tilde_order();
        let fu = fr.fu.truncate(order);
        let x = fr.x.truncate(order);
        Self {
            base: fr.base,
            order,
            sigma: fr.sigma.truncate(order),
            et: fu.dot(&fu),
            ft: fu.dot(&x),
            gt: x.dot(&x),
            lt: -fu.dot(&fr.nu_u),
            mt: -x.dot(&fr.nu_u),
            nt: -x.dot(&fr.nu_v),
        }
    }

    /// `EG - F^2` of the tilde forms.
    pub fn w(&self) -> Jet2 {
        &(&self.et * &self.gt) - &(&self.ft * &self.ft)
    }

    /// `A = E N - 2 sigma F M + sigma G L`.
    pub fn a(&self) -> Jet2 {
        let s = &self.sigma;
        let t1 = &self.et * &self.nt;
        let t2 = &(s * &self.ft) * &self.mt;
        let t3 = &(s * &self.gt) * &self.lt;
        &(&t1 - &t2.scale(2.0)) + &t3
    }

    /// `P = L N - sigma M^2`, so that `K = P / (sigma W)`.
    pub fn p(&self) -> Jet2 {
        &(&self.lt * &self.nt) - &(&self.sigma * &(&self.mt * &self.mt))
    }

    /// `B^2 = A^2 - 4 sigma W P`, assembled as a sum of squares.
    pub fn b_squared(&self, policy: &NumericPolicy) -> Result<Jet2> {
        let s = &self.sigma;
        let w = self.w();
        let q = &(&self.et * &self.mt) - &(&self.ft * &self.lt);
        let inv_e = self.et.recip(policy.eps_den)?;
        let first = (&(&(s * s) * &w) * &(&(&q * &q) * &(&inv_e * &inv_e))).scale(4.0);
        let inner = &(&(&self.et * &self.nt) - &(&(s * &self.gt) * &self.lt))
            - &(&(&(s * &self.ft) * &inv_e) * &q).scale(2.0);
        Ok(&first + &(&inner * &inner))
    }

    /// The expansion of `4 sigma^2 W^2 Gamma` as `A^2 - 4 sigma W P`.
    pub fn umbilicity_difference_form(&self) -> Jet2 {
        let a = self.a();
        &(&a * &a) - &(&(&self.sigma * &self.w()) * &self.p()).scale(4.0)
    }

    /// The same quantity with the first square divided by `E` only, as it
    /// is sometimes quoted. Agrees with [`Self::b_squared`] where `E = 1`.
    pub fn umbilicity_single_e_form(&self, policy: &NumericPolicy) -> Result<Jet2> {
        let s = &self.sigma;
        let q = &(&self.et * &self.mt) - &(&self.ft * &self.lt);
        let inv_e = self.et.recip(policy.eps_den)?;
        let first = (&(&(s * s) * &self.w()) * &(&(&q * &q) * &inv_e)).scale(4.0);
        let inner = &(&(&self.et * &self.nt) - &(&(s * &self.gt) * &self.lt))
            - &(&(&(s * &self.ft) * &inv_e) * &q).scale(2.0);
        Ok(&first + &(&inner * &inner))
    }

    /// Residuals of the Weingarten expansion of `nu_u` and `nu_v` at the base point.
    pub fn weingarten_residual(&self, fr: &Frame) -> (f64, f64) {
        let v = |j: &Jet2| j.value();
        let (e, f, g, l, m, n, s) = (v(&self.et), v(&self.ft), v(&self.gt), v(&self.lt), v(&self.mt), v(&self.nt), v(&self.sigma));
        let w = e * g - f * f;
        let fu = fr.fu.value();
        let x = fr.x.value();
        let nu_u = ((f * m - g * l) * fu + (f * l - e * m) * x) / w;
        let nu_v = ((f * n - s * g * m) * fu + (s * f * m - e * n) * x) / w;
        ((fr.nu_u.value() - nu_u).norm(), (fr.nu_v.value() - nu_v).norm())
    }
}

/// Tilde data at `(u, v)` with a position jet of the policy order.
pub fn fundamental_data(chart: &FrontalChart, u: f64, v: f64) -> Result<FundamentalData> {
    let fr = chart.frame(u, v)?;
    let fd = FundamentalData::from_frame(&fr);
    check_positive(&fd)?;
    Ok(fd)
}

fn check_positive(fd: &FundamentalData) -> Result<()> {
    let w = fd.w().value();
    if w <= 0.0 {
        return Err(Error::PositivityViolation { u: fd.base.u, v: fd.base.v, value: w });
    }
    Ok(())
}

/// Curvature data at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub u: f64,
    pub v: f64,
    pub lambda: f64,
    #[serde(rename = "K")]
    pub k: Extended,
    #[serde(rename = "H")]
    pub h: Extended,
    #[serde(rename = "Gamma")]
    pub gamma: Extended,
    #[serde(rename = "GammaTilde")]
    pub gamma_tilde: f64,
    /// `H + sqrt(Gamma)`.
    pub kappa1: Extended,
    /// `H - sqrt(Gamma)`.
    pub kappa2: Extended,
    #[serde(rename = "A")]
    pub a: f64,
    /// Nonnegative square root of `B^2`.
    #[serde(rename = "B")]
    pub b: f64,
    /// `(A + B)/(2 sigma W)`.
    pub kappa_i: Extended,
    /// `(A - B)/(2 sigma W)`.
    pub kappa_ii: Extended,
}

/// `(A + b)/(2 sigma W)` and `(A - b)/(2 sigma W)` without cancellation.
fn root_pair(a: f64, b: f64, sigma_w: f64, p: f64) -> (f64, f64) {
    let plus = a + b;
    let minus = a - b;
    if plus == 0.0 && minus == 0.0 {
        return (0.0, 0.0);
    }
    if plus.abs() >= minus.abs() {
        (plus / (2.0 * sigma_w), 2.0 * p / plus)
    } else {
        (2.0 * p / minus, minus / (2.0 * sigma_w))
    }
}

/// Jet order used for regular points; enough for first derivatives of `nu`.
pub(crate) const REGULAR_ORDER: usize = 3;

pub fn curvature_sample(chart: &FrontalChart, u: f64, v: f64) -> Result<CurvatureSample> {
    if chart.on_axis(v) {
        return singular_sample(chart, u);
    }
    let fr = chart.frame_with_order(u, v, REGULAR_ORDER)?;
    let fd = FundamentalData::from_frame(&fr);
    check_positive(&fd)?;
    let sigma = fd.sigma.value();
    let w = fd.w().value();
    let a = fd.a().value();
    let p = fd.p().value();
    let b2 = fd.b_squared(chart.policy())?.value().max(0.0);
    let b = b2.sqrt();
    let lambda = sigma * fr.lambda_tilde().value();
    let sw = sigma * w;
    let (k_i, k_ii) = root_pair(a, b, sw, p);
    let (k1, k2) = if sigma > 0.0 { (k_i, k_ii) } else { (k_ii, k_i) };
    Ok(CurvatureSample {
        u,
        v,
        lambda,
        k: Extended::Finite(p / sw),
        h: Extended::Finite(a / (2.0 * sw)),
        gamma: Extended::Finite(b2 / (4.0 * sw * sw)),
        gamma_tilde: b2 / w,
        kappa1: Extended::Finite(k1),
        kappa2: Extended::Finite(k2),
        a,
        b,
        kappa_i: Extended::Finite(k_i),
        kappa_ii: Extended::Finite(k_ii),
    })
}

/// Values on the singular curve, read off by dividing jets by `v`.
/// Unbounded quantities carry their sign as `v -> 0+`.
fn singular_sample(chart: &FrontalChart, u: f64) -> Result<CurvatureSample> {
    let policy = chart.policy();
    let fr = chart.frame(u, 0.0)?;
    let fd = FundamentalData::from_frame(&fr);
    check_positive(&fd)?;
    let eps = policy.eps_div;
    let w = fd.w().value();
    let a_jet = fd.a();
    let p_jet = fd.p();
    let b2_jet = fd.b_squared(policy)?;
    let a0 = a_jet.value();
    let p0 = p_jet.value();
    let k = match p_jet.divide_by_v(eps) {
        Ok(q) => Extended::Finite(q.value() / w),
        Err(_) => Extended::unbounded(p0),
    };
    let h = match a_jet.divide_by_v(eps) {
        Ok(q) => Extended::Finite(q.value() / (2.0 * w)),
        Err(_) => Extended::unbounded(a0),
    };
    let gamma = match b2_jet.divide_by_v(eps).and_then(|q| q.divide_by_v(eps)) {
        Ok(q) => Extended::Finite(q.value().max(0.0) / (4.0 * w * w)),
        Err(_) => Extended::PosInf,
    };
    let b = b2_jet.value().max(0.0).sqrt();
    let scale = 1.0 + fd.et.value().abs() * fd.nt.value().abs().max(1.0);
    let (kappa1, kappa2) = match (h, gamma) {
        (Extended::Finite(hv), Extended::Finite(g)) => {
            (Extended::Finite(hv + g.sqrt()), Extended::Finite(hv - g.sqrt()))
        }
        _ if a0.abs() > policy.eps_class * scale => {
            let bounded = Extended::Finite(p0 / a0);
            if a0 > 0.0 {
                (Extended::PosInf, bounded)
            } else {
                (bounded, Extended::NegInf)
            }
        }
        _ => (Extended::Undefined, Extended::Undefined),
    };
    Ok(CurvatureSample {
        u,
        v: 0.0,
        lambda: 0.0,
        k,
        h,
        gamma,
        gamma_tilde: b2_jet.value() / w,
        kappa1,
        kappa2,
        a: a0,
        b,
        kappa_i: kappa1,
        kappa_ii: kappa2,
    })
}

/// First and second fundamental forms computed directly from `f` and `nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

pub fn raw_forms(chart: &FrontalChart, u: f64, v: f64) -> Result<RawForms> {
    let fr = chart.frame_with_order(u, v, REGULAR_ORDER)?;
    let f = chart.position(BasePoint::new(u, v), 2)?;
    let nu = fr.nu.value();
    let d = |i, j| f.partial(i, j);
    let fu: Vector3<f64> = d(1, 0)?;
    let fv: Vector3<f64> = d(0, 1)?;
    Ok(RawForms {
        e: fu.dot(&fu),
        f: fu.dot(&fv),
        g: fv.dot(&fv),
        l: d(2, 0)?.dot(&nu),
        m: d(1, 1)?.dot(&nu),
        n: d(0, 2)?.dot(&nu),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(name: &str) -> FrontalChart {
        FrontalChart::gallery(name, NumericPolicy::default()).unwrap()
    }

    #[test]
    fn cuspidal_edge_tilde_forms() {
        let fd = fundamental_data(&chart("cuspidal-edge"), 0.0, 0.0).unwrap();
        assert!((fd.et.value() - 1.0).abs() < 1e-15);
        assert!(fd.ft.value().abs() < 1e-15);
        assert!((fd.gt.value() - 4.0).abs() < 1e-15);
        assert!((fd.gt.coeff(0, 2).unwrap() - 9.0).abs() < 1e-13);
    }

    #[test]
    fn sphere_curvature() {
        let s = curvature_sample(&chart("sphere"), 0.3, -0.4).unwrap();
        assert!((s.k.to_f64() - 0.25).abs() < 1e-12);
        assert!((s.h.to_f64().abs() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn front_has_one_bounded_branch() {
        let s = curvature_sample(&chart("cuspidal-edge"), 0.2, 0.0).unwrap();
        assert_eq!(s.kappa1, Extended::PosInf);
        assert!(s.kappa2.is_finite());
    }

    #[test]
    fn extended_tokens() {
        assert_eq!(Extended::PosInf.to_string(), "inf");
        assert_eq!(Extended::NegInf.to_string(), "-inf");
        assert_eq!(Extended::Undefined.to_string(), "nan");
    }
}
