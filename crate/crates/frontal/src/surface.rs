//! Surface definitions and the evaluation interface shared by all charts.

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::dsl::{parse_with, Bindings, Expr, Func, Var};
use crate::error::{Result, SurfaceError};
use crate::jet::{BasePoint, Jet2, JetVec3};
use crate::policy::NumericPolicy;

/// Rectangular parameter domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Domain {
    pub fn contains(&self, u: f64, v: f64) -> bool {
        self.u.0 <= u && u <= self.u.1 && self.v.0 <= v && v <= self.v.1
    }

    /// `n` equally spaced values of `u` including both ends.
    pub fn u_samples(&self, n: usize) -> Vec<f64> {
        linspace(self.u.0, self.u.1, n)
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Anything that can produce jets of a parametrized surface.
pub trait SurfaceMap: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &str;

    /// Jet of the position vector at `base`.
    fn position(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<JetVec3>;

    /// Jet of an explicitly supplied unit normal, if any.
    fn gauss(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Option<Result<JetVec3>>;

    /// Whether the chart claims the singular curve is `{v = 0}` with null direction `d/dv`.
    fn adapted(&self) -> bool;

    fn domain(&self) -> Domain;
}

/// A surface given by formulas in `u`, `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceDef {
    pub name: String,
    pub components: [Expr; 3],
    pub gauss_components: Option<[Expr; 3]>,
    pub domain: Domain,
    pub adapted: bool,
}

#[derive(Debug, Deserialize)]
struct SurfaceDoc {
    surface: SurfaceToml,
}

#[derive(Debug, Deserialize)]
struct SurfaceToml {
    name: String,
    x: String,
    y: String,
    z: String,
    nu_x: Option<String>,
    nu_y: Option<String>,
    nu_z: Option<String>,
    u_range: [f64; 2],
    v_range: [f64; 2],
    #[serde(default)]
    adapted: bool,
}

fn surface_expr(field: &str, src: &str) -> Result<Expr, SurfaceError> {
    let expr = parse_with(src, &[Var::U, Var::V])
        .map_err(|source| SurfaceError::Parse { field: field.to_string(), source })?;
    if expr.uses(Func::Abs) {
        return Err(SurfaceError::AbsNotAllowed { field: field.to_string() });
    }
    Ok(expr)
}

fn range(field: &str, r: [f64; 2]) -> Result<(f64, f64), SurfaceError> {
    if r[0] < r[1] && r[0].is_finite() && r[1].is_finite() {
        Ok((r[0], r[1]))
    } else {
        Err(SurfaceError::EmptyRange { field: field.to_string() })
    }
}

impl SurfaceDef {
    /// Build from formula strings.
    pub fn from_formulas(
        name: &str,
        xyz: [&str; 3],
        gauss: Option<[&str; 3]>,
        domain: Domain,
        adapted: bool,
    ) -> Result<Self, SurfaceError> {
        let components = [surface_expr("x", xyz[0])?, surface_expr("y", xyz[1])?, surface_expr("z", xyz[2])?];
        let gauss_components = match gauss {
            Some(n) => Some([surface_expr("nu_x", n[0])?, surface_expr("nu_y", n[1])?, surface_expr("nu_z", n[2])?]),
            None => None,
        };
        range("u_range", [domain.u.0, domain.u.1])?;
        range("v_range", [domain.v.0, domain.v.1])?;
        Ok(Self { name: name.to_string(), components, gauss_components, domain, adapted })
    }

    /// Parse a `[surface]` TOML document.
    pub fn from_toml(text: &str) -> Result<Self, SurfaceError> {
        let doc: SurfaceDoc = toml::from_str(text).map_err(|e| SurfaceError::Toml(e.to_string()))?;
        let s = doc.surface;
        let gauss = match (&s.nu_x, &s.nu_y, &s.nu_z) {
            (Some(a), Some(b), Some(c)) => Some([a.as_str(), b.as_str(), c.as_str()]),
            (None, None, None) => None,
            _ => return Err(SurfaceError::PartialGauss),
        };
        let domain = Domain { u: range("u_range", s.u_range)?, v: range("v_range", s.v_range)? };
        Self::from_formulas(&s.name, [&s.x, &s.y, &s.z], gauss, domain, s.adapted)
    }

    /// Render back to the TOML input format.
    pub fn to_toml(&self) -> String {
        let mut out = String::from("[surface]\n");
        out += &format!("name = {:?}\n", self.name);
        for (key, e) in ["x", "y", "z"].iter().zip(&self.components) {
            out += &format!("{key} = \"{e}\"\n");
        }
        if let Some(n) = &self.gauss_components {
            for (key, e) in ["nu_x", "nu_y", "nu_z"].iter().zip(n) {
                out += &format!("{key} = \"{e}\"\n");
            }
        }
        out += &format!("u_range = [{:?}, {:?}]\n", self.domain.u.0, self.domain.u.1);
        out += &format!("v_range = [{:?}, {:?}]\n", self.domain.v.0, self.domain.v.1);
        out += &format!("adapted = {}\n", self.adapted);
        out
    }

    /// Scalar position.
    pub fn eval(&self, u: f64, v: f64) -> Result<Vector3<f64>> {
        let b = Bindings::uv(u, v);
        Ok(Vector3::new(self.components[0].eval(b)?, self.components[1].eval(b)?, self.components[2].eval(b)?))
    }

    pub fn into_map(self) -> Arc<dyn SurfaceMap> {
        Arc::new(self)
    }
}

fn jet3(exprs: &[Expr; 3], base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<JetVec3> {
    Ok(JetVec3::new(
        exprs[0].eval_jet(base, order, policy)?,
        exprs[1].eval_jet(base, order, policy)?,
        exprs[2].eval_jet(base, order, policy)?,
    ))
}

impl SurfaceMap for SurfaceDef {
    fn name(&self) -> &str {
        &self.name
    }

    fn position(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<JetVec3> {
        jet3(&self.components, base, order, policy)
    }

    fn gauss(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Option<Result<JetVec3>> {
        self.gauss_components.as_ref().map(|n| jet3(n, base, order, policy))
    }

    fn adapted(&self) -> bool {
        self.adapted
    }

    fn domain(&self) -> Domain {
        self.domain
    }
}

/// `x -> scale * R x + t` applied to another surface.
#[derive(Debug, Clone)]
pub struct RigidMotion {
    pub inner: Arc<dyn SurfaceMap>,
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
    pub scale: f64,
    name: String,
}

impl RigidMotion {
    pub fn new(inner: Arc<dyn SurfaceMap>, rotation: Matrix3<f64>, translation: Vector3<f64>, scale: f64) -> Self {
        let name = format!("{}-moved", inner.name());
        Self { inner, rotation, translation, scale, name }
    }

    fn rotate(&self, p: &JetVec3, scale: f64, shift: Vector3<f64>) -> JetVec3 {
        let c = p.components();
        let row = |i: usize| {
            let r = self.rotation.row(i);
            let mut acc = &c[0].scale(r[0] * scale) + &c[1].scale(r[1] * scale);
            acc = &acc + &c[2].scale(r[2] * scale);
            acc.add_scalar(shift[i])
        };
        JetVec3::new(row(0), row(1), row(2))
    }
}

impl SurfaceMap for RigidMotion {
    fn name(&self) -> &str {
        &self.name
    }

    fn position(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<JetVec3> {
        let p = self.inner.position(base, order, policy)?;
        Ok(self.rotate(&p, self.scale, self.translation))
    }

    fn gauss(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Option<Result<JetVec3>> {
        self.inner
            .gauss(base, order, policy)
            .map(|n| n.map(|n| self.rotate(&n, 1.0, Vector3::zeros())))
    }

    fn adapted(&self) -> bool {
        self.inner.adapted()
    }

    fn domain(&self) -> Domain {
        self.inner.domain()
    }
}

/// Reparametrization `(u, v) -> (u, -v)`.
#[derive(Debug, Clone)]
pub struct FlipV {
    pub inner: Arc<dyn SurfaceMap>,
    name: String,
}

impl FlipV {
    pub fn new(inner: Arc<dyn SurfaceMap>) -> Self {
        let name = format!("{}-flipped", inner.name());
        Self { inner, name }
    }

    fn pull(&self, jet: JetVec3, base: BasePoint, order: usize) -> Result<JetVec3> {
        let u = Jet2::var_u(base, order);
        let v = -Jet2::var_v(base, order);
        Ok(jet.compose(&u, &v)?)
    }
}

impl SurfaceMap for FlipV {
    fn name(&self) -> &str {
        &self.name
    }

    fn position(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<JetVec3> {
        let inner = self.inner.position(BasePoint::new(base.u, -base.v), order, policy)?;
        self.pull(inner, base, order)
    }

    fn gauss(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Option<Result<JetVec3>> {
        let inner = self.inner.gauss(BasePoint::new(base.u, -base.v), order, policy)?;
        Some(inner.and_then(|n| self.pull(n, base, order)))
    }

    fn adapted(&self) -> bool {
        self.inner.adapted()
    }

    fn domain(&self) -> Domain {
        let d = self.inner.domain();
        Domain { u: d.u, v: (-d.v.1, -d.v.0) }
    }
}
