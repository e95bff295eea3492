//! Envelopes of circle families along a planar profile, their surfaces of
//! revolution, and the residual checks for a Ribaucour pair.

mod envelope;
mod verify;

pub use envelope::{build_envelope, EnvelopeBranch, EnvelopeCurve, EnvelopeData, EnvelopeSide};
pub use verify::{verify_ribaucour, PsiMap, ResidualReport, RibaucourPair};

use std::sync::Arc;

use nalgebra::Vector3;
use serde::Deserialize;

use crate::chart::FrontalChart;
use crate::dsl::{parse_with, Bindings, Expr, Var};
use crate::error::{Error, Result, SurfaceError};
use crate::jet::{BasePoint, Jet2, JetVec3};
use crate::policy::NumericPolicy;
use crate::quad::gauss_legendre;
use crate::surface::{Domain, SurfaceMap};

/// Panels of the cumulative table used to integrate the profile.
const PANELS: usize = 256;

/// A planar curve with `gamma' = l (cos theta, sin theta)`.
#[derive(Debug, Clone)]
pub struct ProfileCurve {
    pub name: String,
    pub l: Expr,
    pub theta: Expr,
    pub start: (f64, f64),
    pub domain: (f64, f64),
    /// `gamma` at the panel boundaries.
    knots: Vec<(f64, f64)>,
}

#[derive(Debug, Deserialize)]
struct ProfileDoc {
    profile: ProfileToml,
    rho: RhoToml,
}

#[derive(Debug, Deserialize)]
struct ProfileToml {
    name: Option<String>,
    l: String,
    theta: String,
    start: [f64; 2],
    range: [f64; 2],
}

#[derive(Debug, Deserialize)]
struct RhoToml {
    expr: String,
}

fn curve_expr(field: &str, src: &str) -> Result<Expr, SurfaceError> {
    parse_with(src, &[Var::T]).map_err(|source| SurfaceError::Parse { field: field.to_string(), source })
}

impl ProfileCurve {
    pub fn new(name: &str, l: Expr, theta: Expr, start: (f64, f64), domain: (f64, f64)) -> Result<Self> {
        if !(domain.0 < domain.1) {
            return Err(SurfaceError::EmptyRange { field: "range".into() }.into());
        }
        let mut curve = Self { name: name.to_string(), l, theta, start, domain, knots: Vec::new() };
        let width = (domain.1 - domain.0) / PANELS as f64;
        let mut knots = Vec::with_capacity(PANELS + 1);
        let mut acc = start;
        knots.push(acc);
        for i in 0..PANELS {
            let a = domain.0 + width * i as f64;
            let d = curve.panel(a, a + width)?;
            acc = (acc.0 + d.0, acc.1 + d.1);
            knots.push(acc);
        }
        curve.knots = knots;
        Ok(curve)
    }

    /// Parse a profile document; returns the curve and the radius expression.
    pub fn from_toml(text: &str, fallback_name: &str) -> Result<(Self, Expr)> {
        let doc: ProfileDoc = toml::from_str(text).map_err(|e| SurfaceError::Toml(e.to_string()))?;
        let p = doc.profile;
        let name = p.name.unwrap_or_else(|| fallback_name.to_string());
        let curve = Self::new(
            &name,
            curve_expr("l", &p.l)?,
            curve_expr("theta", &p.theta)?,
            (p.start[0], p.start[1]),
            (p.range[0], p.range[1]),
        )?;
        Ok((curve, curve_expr("rho", &doc.rho.expr)?))
    }

    /// A shipped profile with its radius.
    pub fn gallery(name: &str) -> Result<(Self, Expr)> {
        let text = crate::gallery::PROFILES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| SurfaceError::UnknownGallery(name.to_string()))?;
        Self::from_toml(text, name)
    }

    fn velocity(&self, t: f64) -> Result<(f64, f64)> {
        let b = Bindings::t(t);
        let l = self.l.eval(b)?;
        let th = self.theta.eval(b)?;
        Ok((l * th.cos(), l * th.sin()))
    }

    fn panel(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        let mut acc = (0.0, 0.0);
        for (t, w) in gauss_legendre(a, b) {
            let d = self.velocity(t)?;
            acc = (acc.0 + w * d.0, acc.1 + w * d.1);
        }
        Ok(acc)
    }

    /// `gamma(t)`.
    pub fn point(&self, t: f64) -> Result<(f64, f64)> {
        let width = (self.domain.1 - self.domain.0) / PANELS as f64;
        let i = (((t - self.domain.0) / width).floor().max(0.0) as usize).min(PANELS - 1);
        let a = self.domain.0 + width * i as f64;
        let k = self.knots[i];
        let d = self.panel(a, t)?;
        Ok((k.0 + d.0, k.1 + d.1))
    }

    /// Jets in the first coordinate of `l`, `theta` at `(t, v)`.
    pub fn l_theta_jets(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<(Jet2, Jet2)> {
        Ok((self.l.eval_jet(base, order, policy)?, self.theta.eval_jet(base, order, policy)?))
    }

    /// `e = (cos theta, sin theta)` and `n = (-sin theta, cos theta)` as jets.
    pub fn frame_jets(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<[(Jet2, Jet2); 2]> {
        let theta = self.theta.eval_jet(base, order, policy)?;
        let (c, s) = (theta.cos(), theta.sin());
        Ok([(c.clone(), s.clone()), (-s, c)])
    }
}

/// A planar curve with a unit normal, both as jets in the first coordinate.
pub trait PlanarCurve: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &str;
    fn domain(&self) -> (f64, f64);
    /// `(x, y)` jets at `base` (constant in the second coordinate).
    fn jets(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<(Jet2, Jet2)>;
    /// Unit planar normal jets.
    fn normal(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<(Jet2, Jet2)>;
}

impl PlanarCurve for ProfileCurve {
    fn name(&self) -> &str {
        &self.name
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn jets(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<(Jet2, Jet2)> {
        let p = self.point(base.u)?;
        if order == 0 {
            return Ok((Jet2::constant(base, 0, p.0), Jet2::constant(base, 0, p.1)));
        }
        let (l, _) = self.l_theta_jets(base, order - 1, policy)?;
        let [e, _] = self.frame_jets(base, order - 1, policy)?;
        Ok(((&l * &e.0).integrate_u(p.0), (&l * &e.1).integrate_u(p.1)))
    }

    fn normal(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<(Jet2, Jet2)> {
        let [_, n] = self.frame_jets(base, order, policy)?;
        Ok(n)
    }
}

/// `(x(u), y(u) cos v, y(u) sin v)` with the rotated planar normal.
#[derive(Debug, Clone)]
pub struct RevolutionSurface {
    curve: Arc<dyn PlanarCurve>,
    name: String,
}

impl RevolutionSurface {
    pub fn new(curve: Arc<dyn PlanarCurve>) -> Self {
        let name = format!("revolution({})", curve.name());
        Self { curve, name }
    }

    pub fn curve(&self) -> &Arc<dyn PlanarCurve> {
        &self.curve
    }

    fn rotate(&self, base: BasePoint, order: usize, pair: (Jet2, Jet2)) -> JetVec3 {
        let v = Jet2::var_v(base, order);
        let (c, s) = (v.cos(), v.sin());
        JetVec3::new(pair.0.truncate(order), &pair.1.truncate(order) * &c, &pair.1.truncate(order) * &s)
    }
}

impl SurfaceMap for RevolutionSurface {
    fn name(&self) -> &str {
        &self.name
    }

    fn position(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<JetVec3> {
        let pair = self.curve.jets(base, order, policy)?;
        if pair.1.value() <= 0.0 {
            return Err(Error::AxisCrossing { t: base.u, y: pair.1.value() });
        }
        Ok(self.rotate(base, order, pair))
    }

    fn gauss(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Option<Result<JetVec3>> {
        Some(self.curve.normal(base, order, policy).map(|n| self.rotate(base, order, n)))
    }

    fn adapted(&self) -> bool {
        false
    }

    fn domain(&self) -> Domain {
        Domain { u: self.curve.domain(), v: (0.0, 2.0 * std::f64::consts::PI) }
    }
}

/// Chart of the surface of revolution of `curve`. The profile must stay
/// off the axis; this is checked at `samples` points.
pub fn revolve(curve: Arc<dyn PlanarCurve>, policy: NumericPolicy, samples: usize) -> Result<FrontalChart> {
    let (a, b) = curve.domain();
    for t in crate::surface::linspace(a, b, samples.max(2)) {
        let (_, y) = curve.jets(BasePoint::new(t, 0.0), 0, &policy)?;
        if y.value() <= 0.0 {
            return Err(Error::AxisCrossing { t, y: y.value() });
        }
    }
    Ok(FrontalChart::new(Arc::new(RevolutionSurface::new(curve)), policy))
}

/// Scalar value of a planar curve.
pub fn planar_point(curve: &dyn PlanarCurve, t: f64, policy: &NumericPolicy) -> Result<Vector3<f64>> {
    let (x, y) = curve.jets(BasePoint::new(t, 0.0), 0, policy)?;
    Ok(Vector3::new(x.value(), y.value(), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_profile_closes() {
        let (c, _) = ProfileCurve::gallery("circle-profile").unwrap();
        let p = c.point(1.0).unwrap();
        assert!((p.0 - 1.0f64.cos()).abs() < 1e-13);
        assert!((p.1 - 2.0 - 1.0f64.sin()).abs() < 1e-13);
        let end = c.point(c.domain.1).unwrap();
        assert!((end.0 - 1.0).abs() < 1e-12 && (end.1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn revolution_is_periodic() {
        let (c, _) = ProfileCurve::gallery("circle-profile").unwrap();
        let chart = revolve(Arc::new(c), NumericPolicy::default(), 32).unwrap();
        let a = chart.point(0.4, 0.3).unwrap();
        let b = chart.point(0.4, 0.3 + 2.0 * std::f64::consts::PI).unwrap();
        assert!((a - b).norm() < 1e-12);
    }
}
