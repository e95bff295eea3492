use std::sync::Arc;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use super::{revolve, EnvelopeBranch, EnvelopeCurve, EnvelopeData, EnvelopeSide};
use crate::chart::FrontalChart;
use crate::dsl::Expr;
use crate::error::{Error, Result};
use crate::jet::{BasePoint, Jet2};
use crate::policy::NumericPolicy;
use crate::surface::linspace;

/// Profile samples used to check that a revolved curve stays off the axis.
const AXIS_SAMPLES: usize = 257;

/// Correspondence between the parameter domains of `f` and `f~`.
#[derive(Debug, Clone, Default)]
pub enum PsiMap {
    #[default]
    Identity,
    /// `(u, v) -> (psi_u(u, v), psi_v(u, v))`.
    Expressions(Expr, Expr),
}

impl PsiMap {
    /// Jets of the two components at `base`.
    fn jets(&self, base: BasePoint, order: usize, policy: &NumericPolicy) -> Result<(Jet2, Jet2)> {
        match self {
            PsiMap::Identity => Ok((Jet2::var_u(base, order), Jet2::var_v(base, order))),
            PsiMap::Expressions(a, b) => Ok((a.eval_jet(base, order, policy)?, b.eval_jet(base, order, policy)?)),
        }
    }
}

/// `f = T(X_-)`, `f~ = T(X_+)` and the center map `T(gamma)`, with
/// `h = rho` and the identity correspondence between the two charts.
///
/// Both normals point from the surface toward the center map, so that
/// `f + h nu = T(gamma) = f~ + h nu~`.
#[derive(Debug, Clone)]
pub struct RibaucourPair {
    pub envelope: Arc<EnvelopeData>,
    pub f: FrontalChart,
    pub f_tilde: FrontalChart,
    pub center: FrontalChart,
    pub psi_map: PsiMap,
    /// Multiplier applied to `h`; `1` for the constructed pair.
    pub h_scale: f64,
}

impl RibaucourPair {
    pub fn new(envelope: EnvelopeData) -> Result<Self> {
        let policy = *envelope.policy();
        let envelope = Arc::new(envelope);
        let minus = Arc::new(EnvelopeCurve::new(envelope.clone(), EnvelopeSide::Minus));
        let plus = Arc::new(EnvelopeCurve::new(envelope.clone(), EnvelopeSide::Plus));
        Ok(Self {
            f: revolve(minus, policy, AXIS_SAMPLES)?,
            f_tilde: revolve(plus, policy, AXIS_SAMPLES)?,
            center: revolve(Arc::new(envelope.profile.clone()), policy, AXIS_SAMPLES)?,
            envelope,
            psi_map: PsiMap::Identity,
            h_scale: 1.0,
        })
    }

    /// The same pair with `h` multiplied by `scale`.
    pub fn with_h_scale(mut self, scale: f64) -> Self {
        self.h_scale = scale;
        self
    }

    pub fn with_psi_map(mut self, psi_map: PsiMap) -> Self {
        self.psi_map = psi_map;
        self
    }

    pub fn policy(&self) -> &NumericPolicy {
        self.envelope.policy()
    }
}

/// Maximum residuals over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub grid: (usize, usize),
    pub h_scale: f64,
    pub branch: EnvelopeBranch,
    /// `|f + h nu - f~ - h nu~|`.
    pub center_map: f64,
    /// `h_u - m1 (k1 + h l1)` and `h_v - m2 (k2 + h l2)`.
    pub radius_equations: [f64; 2],
    /// The two Ribaucour equations.
    pub ribaucour: [f64; 2],
    /// `<f~_u, nu~_v>` and `<f~_v, nu~_u>`.
    pub orthogonality: [f64; 2],
    /// `(k1 + h l1)(L_2^1 + m1 L_2^3)` and `(k2 + h l2)(L_1^2 + m2 L_1^3)`.
    pub bookkeeping: [f64; 2],
    /// `f_u = k1 e1`, `f_v = k2 e2`, `nu_u = l1 e1`, `nu_v = l2 e2`.
    pub frame_decomposition: f64,
    /// `|b1^2 + b2^2 + b3^2 - 1|`.
    pub b_norm: f64,
    /// Curvature-line generator conditions for both surfaces (orthogonal
    /// `f_u`, `f_v` and dependent `{f_ui, nu_ui}`) and `dpsi(d_ui) || d_ui`.
    pub generators: f64,
    /// `<df, nu> = 0` and `|nu| = 1` for both surfaces.
    pub frontal: f64,
    /// Envelope conditions along the profile.
    pub envelope: f64,
    /// Smallest `|b3 - 1|` on the grid.
    pub min_b3_gap: f64,
}

impl ResidualReport {
    fn fields(&self) -> [f64; 14] {
        [
            self.center_map,
            self.radius_equations[0],
            self.radius_equations[1],
            self.ribaucour[0],
            self.ribaucour[1],
            self.orthogonality[0],
            self.orthogonality[1],
            self.bookkeeping[0],
            self.bookkeeping[1],
            self.frame_decomposition,
            self.b_norm,
            self.generators,
            self.frontal,
            self.envelope,
        ]
    }

    /// Largest residual; NaN counts as infinite.
    pub fn max(&self) -> f64 {
        self.fields().iter().fold(0.0, |a, &b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

#[derive(Default, Clone, Copy)]
struct Point {
    center: f64,
    radius: [f64; 2],
    rib: [f64; 2],
    orth: [f64; 2],
    book: [f64; 2],
    frame: f64,
    b_norm: f64,
    gens: f64,
    frontal: f64,
    b3_gap: f64,
}

impl Point {
    fn merge(self, o: Self) -> Self {
        let m2 = |a: [f64; 2], b: [f64; 2]| [nan_max(a[0], b[0]), nan_max(a[1], b[1])];
        Self {
            center: nan_max(self.center, o.center),
            radius: m2(self.radius, o.radius),
            rib: m2(self.rib, o.rib),
            orth: m2(self.orth, o.orth),
            book: m2(self.book, o.book),
            frame: nan_max(self.frame, o.frame),
            b_norm: nan_max(self.b_norm, o.b_norm),
            gens: nan_max(self.gens, o.gens),
            frontal: nan_max(self.frontal, o.frontal),
            b3_gap: self.b3_gap.min(o.b3_gap),
        }
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

struct Local {
    f: Vector3<f64>,
    fu: Vector3<f64>,
    fv: Vector3<f64>,
    nu: Vector3<f64>,
    nu_u: Vector3<f64>,
    nu_v: Vector3<f64>,
}

/// Position and normal derivatives of `chart` pulled back through `psi`,
/// without validating the normal.
fn local(chart: &FrontalChart, base: BasePoint, psi: &PsiMap) -> Result<Local> {
    let (pu, pv) = psi.jets(base, 1, chart.policy())?;
    let target = BasePoint::new(pu.value(), pv.value());
    let p = chart.position(target, 1)?.compose(&pu, &pv)?;
    let nu = chart
        .map()
        .gauss(target, 1, chart.policy())
        .ok_or_else(|| Error::NotApplicable("chart without a normal".into()))??
        .compose(&pu, &pv)?;
    Ok(Local {
        f: p.value(),
        fu: p.partial(1, 0)?,
        fv: p.partial(0, 1)?,
        nu: nu.value(),
        nu_u: nu.partial(1, 0)?,
        nu_v: nu.partial(0, 1)?,
    })
}

fn generator_residual(s: &Local) -> f64 {
    s.fu.dot(&s.fv).abs().max(s.fu.cross(&s.nu_u).norm()).max(s.fv.cross(&s.nu_v).norm())
}

fn frontal_residual(s: &Local) -> f64 {
    s.fu.dot(&s.nu).abs().max(s.fv.dot(&s.nu).abs()).max((s.nu.norm() - 1.0).abs())
}

fn at_point(pair: &RibaucourPair, u: f64, v: f64) -> Result<Point> {
    let base = BasePoint::new(u, v);
    let a = local(&pair.f, base, &PsiMap::Identity)?;
    let b = local(&pair.f_tilde, base, &pair.psi_map)?;
    let (pu, pv) = pair.psi_map.jets(base, 1, pair.policy())?;
    let psi_generators = pv.coeff(1, 0)?.abs().max(pu.coeff(0, 1)?.abs());
    let rho = pair.envelope.rho_jet(base, 1)?;
    let h = pair.h_scale * rho.value();
    let h_u = pair.h_scale * rho.coeff(1, 0)?;
    let h_v = 0.0;

    let e1 = a.fu / a.fu.norm();
    let e2 = a.nu.cross(&e1);
    let (k1, k2) = (a.fu.dot(&e1), a.fv.dot(&e2));
    let (l1, l2) = (a.nu_u.dot(&e1), a.nu_v.dot(&e2));
    let frame = (a.fu - k1 * e1)
        .norm()
        .max((a.fv - k2 * e2).norm())
        .max((a.nu_u - l1 * e1).norm())
        .max((a.nu_v - l2 * e2).norm());

    let (b1, b2, b3) = (b.nu.dot(&e1), b.nu.dot(&e2), b.nu.dot(&a.nu));
    let gap = (b3 - 1.0).abs();
    if gap < pair.policy().eps_b3 {
        return Err(Error::B3IsOne { u, v });
    }
    let m1 = -b1 / (b3 - 1.0);
    let m2 = -b2 / (b3 - 1.0);
    let (s1, s2) = (k1 + h * l1, k2 + h * l2);

    let l21 = b.nu_v.dot(&e1);
    let l23 = b.nu_v.dot(&a.nu);
    let l12 = b.nu_u.dot(&e2);
    let l13 = b.nu_u.dot(&a.nu);

    Ok(Point {
        center: ((a.f + h * a.nu) - (b.f + h * b.nu)).norm(),
        radius: [(h_u - m1 * s1).abs(), (h_v - m2 * s2).abs()],
        rib: [(l21 - b1 / (b3 - 1.0) * l23).abs(), (l12 - b2 / (b3 - 1.0) * l13).abs()],
        orth: [b.fu.dot(&b.nu_v).abs(), b.fv.dot(&b.nu_u).abs()],
        book: [(s1 * (l21 + m1 * l23)).abs(), (s2 * (l12 + m2 * l13)).abs()],
        frame,
        b_norm: (b1 * b1 + b2 * b2 + b3 * b3 - 1.0).abs(),
        gens: generator_residual(&a).max(generator_residual(&b)).max(psi_generators),
        frontal: frontal_residual(&a).max(frontal_residual(&b)),
        b3_gap: gap,
    })
}

/// Check the pair on an `n_u x n_v` grid over the profile domain and a
/// full turn.
pub fn verify_ribaucour(pair: &RibaucourPair, grid: (usize, usize)) -> Result<ResidualReport> {
    let (a, b) = pair.envelope.profile.domain;
    let us = linspace(a, b, grid.0);
    let vs = linspace(0.0, 2.0 * std::f64::consts::PI, grid.1);
    let start = Point { b3_gap: f64::INFINITY, ..Point::default() };
    let total = us
        .par_iter()
        .map(|&u| {
            vs.iter().try_fold(start, |acc, &v| Ok::<_, Error>(acc.merge(at_point(pair, u, v)?)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(start, Point::merge);
    Ok(ResidualReport {
        grid,
        h_scale: pair.h_scale,
        branch: pair.envelope.branch,
        center_map: total.center,
        radius_equations: total.radius,
        ribaucour: total.rib,
        orthogonality: total.orth,
        bookkeeping: total.book,
        frame_decomposition: total.frame,
        b_norm: total.b_norm,
        generators: total.gens,
        frontal: total.frontal,
        envelope: pair.envelope.residuals.max(),
        min_b3_gap: total.b3_gap,
    })
}
