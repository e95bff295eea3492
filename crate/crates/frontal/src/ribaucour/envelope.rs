use std::sync::Arc;

use serde::Serialize;

use super::{PlanarCurve, ProfileCurve};
use crate::dsl::Expr;
use crate::error::{Error, Result};
use crate::jet::{BasePoint, Jet2};
use crate::policy::NumericPolicy;
use crate::surface::linspace;

/// Number of profile samples used to pick the branch and check residuals.
pub const ENVELOPE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnvelopeBranch {
    /// `|k| != 1` everywhere: `X = gamma - rho k e +- rho sqrt|1 - k^2| n`.
    NotOne,
    /// `|k| = 1` everywhere: `X = gamma -+ rho e`.
    IdenticallyOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnvelopeSide {
    Plus,
    Minus,
}

impl EnvelopeSide {
    fn sign(self) -> f64 {
        match self {
            EnvelopeSide::Plus => 1.0,
            EnvelopeSide::Minus => -1.0,
        }
    }
}

/// Maxima over the profile samples, per side `[plus, minus]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeResiduals {
    /// `| |X - gamma| - rho |`.
    pub radius: [f64; 2],
    /// `|(gamma - X) . gamma' - rho rho'|`.
    pub family_derivative: [f64; 2],
    /// `|<X', X - gamma>|`.
    pub tangency: [f64; 2],
    /// `|<X - gamma, n>^2 - rho^2 (1 - k^2)|`.
    pub normal_offset: [f64; 2],
}

impl EnvelopeResiduals {
    pub fn max(&self) -> f64 {
        [self.radius, self.family_derivative, self.tangency, self.normal_offset]
            .iter()
            .flatten()
            .fold(0.0, |a, &b| a.max(b))
    }
}

#[derive(Debug, Clone)]
pub struct EnvelopeData {
    pub profile: ProfileCurve,
    pub rho: Expr,
    pub branch: EnvelopeBranch,
    /// Smallest and largest sampled `k`.
    pub k_range: (f64, f64),
    pub residuals: EnvelopeResiduals,
    policy: NumericPolicy,
}

/// `k = rho'/l` as a jet; where `l` vanishes the leading coefficients of
/// `rho'` and `l` must cancel.
fn k_jet(profile: &ProfileCurve, rho: &Expr, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<Jet2> {
    let rho_d = rho.eval_jet(base, order + 1, policy)?.d_u()?;
    let (l, _) = profile.l_theta_jets(base, order, policy)?;
    if l.value().abs() > policy.eps_frame {
        return Ok(rho_d.try_div(&l, policy.eps_den)?);
    }
    let ls = l.u_series();
    let rs = rho_d.u_series();
    let lead = ls.iter().position(|c| c.abs() > policy.eps_frame).ok_or(Error::KUnbounded { t: base.u })?;
    if rs[..lead].iter().any(|c| c.abs() > policy.eps_class) {
        return Err(Error::KUnbounded { t: base.u });
    }
    if order > 0 {
        return Err(Error::NotApplicable(format!("derivatives of k where l vanishes (t = {})", base.u)));
    }
    Ok(Jet2::constant(base, 0, rs[lead] / ls[lead]))
}

fn sqrt_abs(s: &Jet2) -> Result<Jet2> {
    Ok(if s.value() >= 0.0 { s.sqrt()? } else { s.scale(-1.0).sqrt()? })
}

impl EnvelopeData {
    pub fn policy(&self) -> &NumericPolicy {
        &self.policy
    }

    /// `k` at `t`.
    pub fn k(&self, t: f64) -> Result<f64> {
        Ok(k_jet(&self.profile, &self.rho, BasePoint::new(t, 0.0), 0, &self.policy)?.value())
    }

    /// `rho` as a jet.
    pub fn rho_jet(&self, base: BasePoint, order: usize) -> Result<Jet2> {
        Ok(self.rho.eval_jet(base, order, &self.policy)?)
    }

    /// Jets of `X_side`.
    pub fn point_jets(&self, side: EnvelopeSide, base: BasePoint, order: usize) -> Result<(Jet2, Jet2)> {
        let p = &self.policy;
        let g = self.profile.jets(base, order, p)?;
        let rho = self.rho_jet(base, order)?;
        let [e, n] = self.profile.frame_jets(base, order, p)?;
        let sign = side.sign();
        match self.branch {
            EnvelopeBranch::IdenticallyOne => {
                let r = rho.scale(-sign);
                Ok((&g.0 + &(&r * &e.0), &g.1 + &(&r * &e.1)))
            }
            EnvelopeBranch::NotOne => {
                let k = k_jet(&self.profile, &self.rho, base, order, p)?;
                let s = sqrt_abs(&(&Jet2::constant(base, order, 1.0) - &(&k * &k)))?;
                let a = -(&rho * &k);
                let b = (&rho * &s).scale(sign);
                let x = &(&g.0 + &(&a * &e.0)) + &(&b * &n.0);
                let y = &(&g.1 + &(&a * &e.1)) + &(&b * &n.1);
                Ok((x, y))
            }
        }
    }

    fn residuals_at(&self, t: f64) -> Result<[[f64; 4]; 2]> {
        let base = BasePoint::new(t, 0.0);
        let p = &self.policy;
        let g = self.profile.jets(base, 1, p)?;
        let rho = self.rho_jet(base, 1)?;
        let k = self.k(t)?;
        let [_, n] = self.profile.frame_jets(base, 0, p)?;
        let (gx, gy, gxd, gyd) = (g.0.value(), g.1.value(), g.0.coeff(1, 0)?, g.1.coeff(1, 0)?);
        let (r, rd) = (rho.value(), rho.coeff(1, 0)?);
        let mut out = [[0.0; 4]; 2];
        for (slot, side) in [EnvelopeSide::Plus, EnvelopeSide::Minus].into_iter().enumerate() {
            let x = self.point_jets(side, base, 1)?;
            let (dx, dy) = (x.0.value() - gx, x.1.value() - gy);
            let (xd, yd) = (x.0.coeff(1, 0)?, x.1.coeff(1, 0)?);
            let offset = dx * n.0.value() + dy * n.1.value();
            out[slot] = [
                (dx.hypot(dy) - r).abs(),
                (-dx * gxd - dy * gyd - r * rd).abs(),
                (xd * dx + yd * dy).abs(),
                (offset * offset - r * r * (1.0 - k * k)).abs(),
            ];
        }
        Ok(out)
    }
}

/// Pick the envelope branch for `rho` along `profile` and check the
/// envelope conditions at the sample points.
pub fn build_envelope(profile: ProfileCurve, rho: Expr, policy: NumericPolicy) -> Result<EnvelopeData> {
    let ts = linspace(profile.domain.0, profile.domain.1, ENVELOPE_SAMPLES);
    let mut ks = Vec::with_capacity(ts.len());
    for &t in &ts {
        let k = k_jet(&profile, &rho, BasePoint::new(t, 0.0), 0, &policy)?.value();
        if !k.is_finite() || k.abs() > 1.0 / policy.eps_class {
            return Err(Error::KUnbounded { t });
        }
        ks.push(k);
    }
    let tol = policy.eps_class;
    let one: Vec<bool> = ks.iter().map(|k| (k.abs() - 1.0).abs() <= tol).collect();
    let branch = if one.iter().all(|&b| b) {
        EnvelopeBranch::IdenticallyOne
    } else if let Some(i) = one.iter().position(|&b| b) {
        return Err(Error::KBranchMixed { t: ts[i] });
    } else if let Some(i) = ks.windows(2).position(|w| (w[0].abs() < 1.0) != (w[1].abs() < 1.0)) {
        return Err(Error::KBranchMixed { t: ts[i + 1] });
    } else {
        EnvelopeBranch::NotOne
    };
    let k_range = ks.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &k| (a.min(k), b.max(k)));
    let mut data = EnvelopeData {
        profile,
        rho,
        branch,
        k_range,
        residuals: EnvelopeResiduals { radius: [0.0; 2], family_derivative: [0.0; 2], tangency: [0.0; 2], normal_offset: [0.0; 2] },
        policy,
    };
    let mut res = data.residuals;
    for &t in &ts {
        let r = data.residuals_at(t)?;
        for s in 0..2 {
            res.radius[s] = res.radius[s].max(r[s][0]);
            res.family_derivative[s] = res.family_derivative[s].max(r[s][1]);
            res.tangency[s] = res.tangency[s].max(r[s][2]);
            res.normal_offset[s] = res.normal_offset[s].max(r[s][3]);
        }
    }
    data.residuals = res;
    Ok(data)
}

/// One side of an envelope as a planar curve, with normal `(gamma - X)/rho`.
#[derive(Debug, Clone)]
pub struct EnvelopeCurve {
    pub data: Arc<EnvelopeData>,
    pub side: EnvelopeSide,
    name: String,
}

impl EnvelopeCurve {
    pub fn new(data: Arc<EnvelopeData>, side: EnvelopeSide) -> Self {
        let tag = match side {
            EnvelopeSide::Plus => "plus",
            EnvelopeSide::Minus => "minus",
        };
        let name = format!("{}-{tag}", data.profile.name);
        Self { data, side, name }
    }
}

impl PlanarCurve for EnvelopeCurve {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> (f64, f64) {
        self.data.profile.domain
    }

    fn jets(&self, base: BasePoint, order: usize, _policy: &NumericPolicy) -> Result<(Jet2, Jet2)> {
        self.data.point_jets(self.side, base, order)
    }

    fn normal(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<(Jet2, Jet2)> {
        let g = self.data.profile.jets(base, order, policy)?;
        let x = self.data.point_jets(self.side, base, order)?;
        let inv = self.data.rho_jet(base, order)?.recip(policy.eps_den)?;
        Ok((&(&g.0 - &x.0) * &inv, &(&g.1 - &x.1) * &inv))
    }
}
