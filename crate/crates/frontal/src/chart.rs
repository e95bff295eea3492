//! Frontal charts, the frame `{f_u, h, nu}` and the signed area density.

use std::sync::Arc;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::gallery;
use crate::jet::{BasePoint, Jet2, JetError, JetVec3};
use crate::policy::NumericPolicy;
use crate::quad::gauss_legendre;
use crate::surface::{Domain, SurfaceDef, SurfaceMap};

/// A surface together with the numeric policy used to evaluate it.
#[derive(Debug, Clone)]
pub struct FrontalChart {
    map: Arc<dyn SurfaceMap>,
    policy: NumericPolicy,
}

/// Jets of the moving frame at one base point.
///
/// On adapted charts `x = h` with `f_v = v h` and `sigma = v`; on general
/// charts `x = f_v` and `sigma = 1`. Every tilde formula is written in
/// terms of `x` and `sigma` so both cases share one code path.
#[derive(Debug, Clone)]
pub struct Frame {
    pub base: BasePoint,
    pub adapted: bool,
    pub f: JetVec3,
    pub fu: JetVec3,
    pub fv: JetVec3,
    pub x: JetVec3,
    pub nu: JetVec3,
    pub nu_u: JetVec3,
    pub nu_v: JetVec3,
    pub sigma: Jet2,
    pub nu_supplied: bool,
}

impl Frame {
    /// Build the frame from a position jet.
    ///
    /// `h` must be given for adapted frames away from the u-axis; on the
    /// axis it is obtained by formal division.
    pub fn from_jets(
        f: JetVec3,
        adapted: bool,
        h: Option<JetVec3>,
        supplied_nu: Option<JetVec3>,
        policy: &NumericPolicy,
    ) -> Result<Self> {
        let base = f.base();
        let fu = f.d_u()?;
        let fv = f.d_v()?;
        let x = if !adapted {
            fv.clone()
        } else if let Some(h) = h {
            h
        } else {
            fv.divide_by_v(policy.eps_div).map_err(|e| match e {
                JetError::NotDivisible { .. } | JetError::BasePointMismatch { .. } => {
                    Error::NotAdapted { u: base.u, v: base.v }
                }
                other => other.into(),
            })?
        };
        let cross = fu.cross(&x);
        let nu_supplied = supplied_nu.is_some();
        let nu = match supplied_nu {
            Some(nu) => {
                validate_normal(&nu, &fu, &x, policy)?;
                nu
            }
            None => {
                let size = cross.value().norm();
                if size <= policy.eps_frame {
                    return Err(Error::DegenerateFrame { u: base.u, v: base.v, value: size });
                }
                cross.normalize(policy.eps_den)?
            }
        };
        let order = [fu.order(), x.order(), nu.order()].into_iter().min().unwrap_or(0);
        if order == 0 {
            return Err(JetError::InsufficientOrder { needed: 1, available: 0 }.into());
        }
        let nu = nu.truncate(order);
        let nu_u = nu.d_u()?;
        let nu_v = nu.d_v()?;
        let sigma = if adapted { Jet2::var_v(base, order) } else { Jet2::constant(base, order, 1.0) };
        Ok(Self {
            base,
            adapted,
            f,
            fu: fu.truncate(order),
            fv: fv.truncate(order),
            x: x.truncate(order),
            nu,
            nu_u,
            nu_v,
            sigma,
            nu_supplied,
        })
    }

    /// `det(f_u, x, nu)`, the signed area density divided by `sigma`.
    pub fn lambda_tilde(&self) -> Jet2 {
        JetVec3::det3(&self.fu, &self.x, &self.nu)
    }

    /// Jet order of the tilde quantities.
    pub fn tilde_order(&self) -> usize {
        self.nu_u.order()
    }
}

fn validate_normal(nu: &JetVec3, fu: &JetVec3, x: &JetVec3, policy: &NumericPolicy) -> Result<()> {
    let n = nu.value();
    let scale = 1.0 + fu.value().norm() + x.value().norm();
    let residual = (n.norm() - 1.0)
        .abs()
        .max(n.dot(&fu.value()).abs() / scale)
        .max(n.dot(&x.value()).abs() / scale);
    if residual > policy.eps_frontal {
        let b = nu.base();
        return Err(Error::FrontalConditionViolated { u: b.u, v: b.v, residual });
    }
    Ok(())
}

impl FrontalChart {
    pub fn new(map: Arc<dyn SurfaceMap>, policy: NumericPolicy) -> Self {
        Self { map, policy }
    }

    pub fn from_def(def: SurfaceDef, policy: NumericPolicy) -> Self {
        Self::new(Arc::new(def), policy)
    }

    /// Chart for a gallery entry.
    pub fn gallery(name: &str, policy: NumericPolicy) -> Result<Self> {
        Ok(Self::from_def(gallery::surface(name)?, policy))
    }

    pub fn map(&self) -> &Arc<dyn SurfaceMap> {
        &self.map
    }

    pub fn name(&self) -> &str {
        self.map.name()
    }

    pub fn policy(&self) -> &NumericPolicy {
        &self.policy
    }

    pub fn with_policy(&self, policy: NumericPolicy) -> Self {
        Self { map: self.map.clone(), policy }
    }

    pub fn domain(&self) -> Domain {
        self.map.domain()
    }

    pub fn adapted(&self) -> bool {
        self.map.adapted()
    }

    /// Whether `(u, v)` lies on the singular curve of an adapted chart.
    pub fn on_axis(&self, v: f64) -> bool {
        self.adapted() && v.abs() <= self.policy.eps_singular
    }

    pub fn position(&self, base: BasePoint, order: usize) -> Result<JetVec3> {
        self.map.position(base, order, &self.policy)
    }

    /// Scalar position.
    pub fn point(&self, u: f64, v: f64) -> Result<Vector3<f64>> {
        Ok(self.position(BasePoint::new(u, v), 0)?.value())
    }

    /// Frame at `(u, v)` from a position jet of `order`.
    pub fn frame_with_order(&self, u: f64, v: f64, order: usize) -> Result<Frame> {
        let on_axis = self.on_axis(v);
        let base = BasePoint::new(u, if on_axis { 0.0 } else { v });
        let f = self.position(base, order)?;
        let supplied = match self.map.gauss(base, order, &self.policy) {
            Some(n) => Some(n?),
            None => None,
        };
        let h = if self.adapted() && !on_axis { Some(self.h_off_axis(base, order)?) } else { None };
        Frame::from_jets(f, self.adapted(), h, supplied, &self.policy)
    }

    /// Frame at the policy's default order.
    pub fn frame(&self, u: f64, v: f64) -> Result<Frame> {
        self.frame_with_order(u, v, self.policy.order)
    }

    /// `h = int_0^1 f_vv(u, t v) dt`, which avoids dividing by a small `v`.
    fn h_off_axis(&self, base: BasePoint, order: usize) -> Result<JetVec3> {
        if order < 2 {
            return Err(JetError::InsufficientOrder { needed: 2, available: order }.into());
        }
        let out_order = order - 2;
        let mut acc = JetVec3::constant(base, out_order, Vector3::zeros());
        for (t, w) in gauss_legendre(0.0, 1.0) {
            let node = BasePoint::new(base.u, t * base.v);
            let fvv = self.position(node, order)?.d_v()?.d_v()?;
            let cu = Jet2::var_u(base, out_order);
            let cv = Jet2::var_v(base, out_order).scale(t);
            acc = acc.add(&fvv.compose(&cu, &cv)?.scale(w));
        }
        Ok(acc)
    }

    /// Unit normal jet. Supplied normals are returned verbatim after
    /// validation; otherwise `nu = (f_u x h)/|f_u x h|`.
    pub fn gauss_map(&self, u: f64, v: f64, order: usize) -> Result<JetVec3> {
        Ok(self.frame_with_order(u, v, order)?.nu)
    }

    /// Jet of `lambda = det(f_u, f_v, nu)`.
    pub fn area_density(&self, u: f64, v: f64, order: usize) -> Result<Jet2> {
        let fr = self.frame_with_order(u, v, order)?;
        Ok(JetVec3::det3(&fr.fu, &fr.fv, &fr.nu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(name: &str) -> FrontalChart {
        FrontalChart::gallery(name, NumericPolicy::default()).unwrap()
    }

    #[test]
    fn cuspidal_edge_normal() {
        let nu = chart("cuspidal-edge").gauss_map(0.0, 0.0, 4).unwrap();
        assert!((nu.value() - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn cuspidal_edge_density() {
        let lam = chart("cuspidal-edge").area_density(0.0, 0.0, 5).unwrap();
        assert!(lam.value().abs() < 1e-15);
        assert!(lam.coeff(1, 0).unwrap().abs() < 1e-15);
        assert!((lam.coeff(0, 1).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn plane_normal_is_constant() {
        let nu = chart("plane").gauss_map(0.2, -0.3, 4).unwrap();
        assert_eq!(nu.value(), Vector3::new(0.0, 0.0, 1.0));
        assert!(nu.d_u().unwrap().max_abs() == 0.0);
    }

    #[test]
    fn off_axis_h_matches_division() {
        let c = chart("f2");
        let (u, v) = (0.3, 0.2);
        let fr = c.frame(u, v).unwrap();
        let fv = fr.fv.clone();
        let direct = fv.try_map(|j| j.try_div(&Jet2::var_v(fr.base, j.order()), 1e-300)).unwrap();
        for i in 0..=3 {
            for j in 0..=(3 - i) {
                let a = fr.x.coeff(i, j).unwrap();
                let b = direct.coeff(i, j).unwrap();
                assert!((a - b).norm() < 1e-12, "{i} {j}");
            }
        }
    }

    #[test]
    fn not_adapted_is_reported() {
        let def = SurfaceDef::from_formulas(
            "bad",
            ["u", "v", "v^3"],
            None,
            Domain { u: (-1.0, 1.0), v: (-1.0, 1.0) },
            true,
        )
        .unwrap();
        let c = FrontalChart::from_def(def, NumericPolicy::default());
        assert!(matches!(c.frame(0.0, 0.0), Err(Error::NotAdapted { .. })));
    }

    #[test]
    fn bad_supplied_normal_is_rejected() {
        let def = SurfaceDef::from_formulas(
            "tilted",
            ["u", "v", "0"],
            Some(["1", "0", "0"]),
            Domain { u: (-1.0, 1.0), v: (-1.0, 1.0) },
            false,
        )
        .unwrap();
        let c = FrontalChart::from_def(def, NumericPolicy::default());
        assert!(matches!(c.frame(0.0, 0.0), Err(Error::FrontalConditionViolated { .. })));
    }
}
