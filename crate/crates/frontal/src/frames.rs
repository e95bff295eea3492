//! Principal vectors, curvature-line frames and the Frenet system of a
//! curvature-line frame.

use nalgebra::Vector3;
use serde::Serialize;

use crate::chart::{Frame, FrontalChart};
use crate::classify::{classify_singular_point, Verdict};
use crate::curvature::{curvature_sample, FundamentalData, REGULAR_ORDER};
use crate::error::{Error, Result};
use crate::jet::JetVec3;

fn arr(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipalData {
    pub u: f64,
    pub v: f64,
    /// `kappa1 = H + sqrt(Gamma)` and `kappa2 = H - sqrt(Gamma)`.
    pub kappa: [f64; 2],
    /// Generators `V_j` in coordinates.
    pub generators: [[f64; 2]; 2],
    /// The first-row solution vanished and the second row was used.
    pub from_second_row: [bool; 2],
    /// Both rows vanished; the generator is reported as computed.
    pub degenerate: [bool; 2],
    pub e: [[f64; 3]; 2],
    /// `df(V_j)`.
    pub df: [[f64; 3]; 2],
    /// Independent pair along a curve with vanishing `kappa_t`.
    pub w: Option<[[f64; 2]; 2]>,
    /// Largest normalized residual of the factored principal equation.
    pub residual: f64,
}

struct Tilde {
    e: f64,
    f: f64,
    g: f64,
    l: f64,
    m: f64,
    n: f64,
    sigma: f64,
}

impl Tilde {
    fn at(fd: &FundamentalData) -> Self {
        Self {
            e: fd.et.value(),
            f: fd.ft.value(),
            g: fd.gt.value(),
            l: fd.lt.value(),
            m: fd.mt.value(),
            n: fd.nt.value(),
            sigma: fd.sigma.value(),
        }
    }

    /// Entries `(L - k E, M - k F, N - sigma k G)` of the factored matrix.
    fn rows(&self, k: f64) -> (f64, f64, f64) {
        (self.l - k * self.e, self.m - k * self.f, self.n - self.sigma * k * self.g)
    }
}

/// The matrix `[[L - kE, sigma (M - kF)], [M - kF, N - sigma k G]]`
/// applied to `gen`, relative to the sizes involved.
fn factored_residual(t: &Tilde, k: f64, gen: [f64; 2]) -> f64 {
    let (l, m, n) = t.rows(k);
    let r1 = l * gen[0] + t.sigma * m * gen[1];
    let r2 = m * gen[0] + n * gen[1];
    let size = (gen[0].hypot(gen[1])) * (1.0 + l.abs() + m.abs() + n.abs());
    if size == 0.0 {
        0.0
    } else {
        r1.hypot(r2) / size
    }
}

fn frame_for(chart: &FrontalChart, u: f64, v: f64) -> Result<Frame> {
    if chart.on_axis(v) {
        chart.frame(u, v)
    } else {
        chart.frame_with_order(u, v, REGULAR_ORDER)
    }
}

fn require_pure_frontal(chart: &FrontalChart, u: f64, v: f64) -> Result<()> {
    if chart.on_axis(v) {
        let verdict = classify_singular_point(chart, u)?.verdict;
        if verdict != Verdict::PureFrontal {
            return Err(Error::NotApplicable(format!("principal vectors at a {verdict} point")));
        }
    }
    Ok(())
}

/// `kappa1`, `kappa2` at a point, with the umbilic check.
fn principal_pair(chart: &FrontalChart, u: f64, v: f64) -> Result<(f64, f64)> {
    let s = curvature_sample(chart, u, v)?;
    let (Some(h), Some(g), Some(k1), Some(k2)) = (s.h.finite(), s.gamma.finite(), s.kappa1.finite(), s.kappa2.finite())
    else {
        return Err(Error::NotApplicable(format!("principal curvatures are unbounded at ({u}, {v})")));
    };
    if g <= chart.policy().eps_umbilic * (1.0 + h * h) {
        return Err(Error::UmbilicPoint { u, v, gamma: g });
    }
    Ok((k1, k2))
}

/// Principal vector generators without the umbilic or applicability
/// checks; `kappa` is supplied by the caller.
pub fn principal_generators(chart: &FrontalChart, u: f64, v: f64, kappa: [f64; 2]) -> Result<PrincipalData> {
    let fr = frame_for(chart, u, v)?;
    let fd = FundamentalData::from_frame(&fr);
    let t = Tilde::at(&fd);
    let fu = fr.fu.value();
    let x = fr.x.value();
    let nu = fr.nu.value();
    let eps = chart.policy().eps_frame;
    let scale = 1.0 + t.l.abs() + t.m.abs() + t.n.abs() + t.e + t.g;
    let mut generators = [[0.0; 2]; 2];
    let mut from_second_row = [false; 2];
    let mut degenerate = [false; 2];
    let mut e = [Vector3::zeros(); 2];
    let mut df = [Vector3::zeros(); 2];
    let mut residual = 0.0_f64;
    for j in 0..2 {
        let (l, m, n) = t.rows(kappa[j]);
        let first = [-t.sigma * m, l];
        let second = [-n, m];
        let (gen, dir) = if first[0].hypot(first[1]) > eps * scale {
            (first, -m * fu + l * x)
        } else if second[0].hypot(second[1]) > eps * scale {
            from_second_row[j] = true;
            (second, -n * fu + t.sigma * m * x)
        } else {
            degenerate[j] = true;
            (first, -m * fu + l * x)
        };
        generators[j] = gen;
        df[j] = gen[0] * fu + gen[1] * t.sigma * x;
        let size = dir.norm();
        e[j] = if size > 0.0 { dir / size } else { Vector3::zeros() };
        residual = residual.max(factored_residual(&t, kappa[j], gen));
    }
    // A generator with a vanishing image still has a frame partner.
    for j in 0..2 {
        if e[j] == Vector3::zeros() && e[1 - j] != Vector3::zeros() {
            e[j] = nu.cross(&e[1 - j]) * if j == 1 { 1.0 } else { -1.0 };
        }
    }
    let w = if chart.on_axis(v) { independent_pair(&fd, &t, kappa, generators, chart)? } else { None };
    Ok(PrincipalData {
        u,
        v,
        kappa,
        generators,
        from_second_row,
        degenerate,
        e: [arr(&e[0]), arr(&e[1])],
        df: [arr(&df[0]), arr(&df[1])],
        w,
        residual,
    })
}

/// With `M` and `F` vanishing on the curve, replace the generator whose
/// first-row entry vanishes by the divided second-row solution.
fn independent_pair(
    fd: &FundamentalData,
    t: &Tilde,
    kappa: [f64; 2],
    generators: [[f64; 2]; 2],
    chart: &FrontalChart,
) -> Result<Option<[[f64; 2]; 2]>> {
    let eps = chart.policy().eps_div;
    let divided = (fd.nt.divide_by_v(eps), fd.mt.divide_by_v(eps), fd.ft.divide_by_v(eps));
    let (Ok(n1), Ok(m1), Ok(f1)) = divided else {
        return Ok(None);
    };
    let (n1, m1, f1) = (n1.value(), m1.value(), f1.value());
    let tilde_w = |k: f64| [-(n1 - k * t.g), m1 - k * f1];
    if (t.l - kappa[0] * t.e).abs() >= (t.l - kappa[1] * t.e).abs() {
        Ok(Some([generators[0], tilde_w(kappa[1])]))
    } else {
        Ok(Some([tilde_w(kappa[0]), generators[1]]))
    }
}

/// Principal vectors at a regular point, or on a pure-frontal curve.
pub fn principal_vectors(chart: &FrontalChart, u: f64, v: f64) -> Result<PrincipalData> {
    require_pure_frontal(chart, u, v)?;
    let (k1, k2) = principal_pair(chart, u, v)?;
    principal_generators(chart, u, v, [k1, k2])
}

/// Normalized residual of the principal equation for the tangent `(1, 0)`
/// of the singular curve, minimized over both principal curvatures.
pub fn tangent_principal_residual(chart: &FrontalChart, u: f64) -> Result<f64> {
    require_pure_frontal(chart, u, 0.0)?;
    let (k1, k2) = principal_pair(chart, u, 0.0)?;
    let fd = FundamentalData::from_frame(&chart.frame(u, 0.0)?);
    let t = Tilde::at(&fd);
    Ok(factored_residual(&t, k1, [1.0, 0.0]).min(factored_residual(&t, k2, [1.0, 0.0])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrameBranch {
    /// `e_j` from the principal vectors.
    Principal,
    /// `e1 = f_u/|f_u|`, `e2 = h/|h|` on the singular curve of a
    /// non-pure-frontal adapted chart.
    SingularCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureLineFrame {
    pub u: f64,
    pub v: f64,
    pub e1: [f64; 3],
    pub e2: [f64; 3],
    pub nu: [f64; 3],
    pub branch: FrameBranch,
    /// `|f_u x e1|`-type dependence residuals for the pairs `{f_Vi, e_i}`.
    pub dependence: [f64; 2],
}

pub fn curvature_line_frame(chart: &FrontalChart, u: f64, v: f64) -> Result<CurvatureLineFrame> {
    if chart.on_axis(v) {
        let verdict = classify_singular_point(chart, u)?.verdict;
        if verdict != Verdict::PureFrontal {
            return singular_curve_frame(chart, u);
        }
    }
    let p = principal_vectors(chart, u, v)?;
    let fr = frame_for(chart, u, v)?;
    let e1 = Vector3::from(p.e[0]);
    let e2 = Vector3::from(p.e[1]);
    let dep = |d: [f64; 3], e: &Vector3<f64>| Vector3::from(d).cross(e).norm();
    Ok(CurvatureLineFrame {
        u,
        v,
        e1: p.e[0],
        e2: p.e[1],
        nu: arr(&fr.nu.value()),
        branch: FrameBranch::Principal,
        dependence: [dep(p.df[0], &e1), dep(p.df[1], &e2)],
    })
}

fn singular_curve_frame(chart: &FrontalChart, u: f64) -> Result<CurvatureLineFrame> {
    let fr = chart.frame(u, 0.0)?;
    let fu = fr.fu.value();
    let h = fr.x.value();
    let size = fu.cross(&h).norm();
    if size <= chart.policy().eps_frame {
        return Err(Error::DependentFrame { u, v: 0.0, value: size });
    }
    let e1 = fu / fu.norm();
    // Orthogonalize in case the chart is not orthogonal on the curve.
    let w = h - h.dot(&e1) * e1;
    let e2 = w / w.norm();
    Ok(CurvatureLineFrame {
        u,
        v: 0.0,
        e1: arr(&e1),
        e2: arr(&e2),
        nu: arr(&fr.nu.value()),
        branch: FrameBranch::SingularCurve,
        dependence: [fu.cross(&e1).norm(), fr.fv.value().cross(&e2).norm()],
    })
}

/// Jets of the principal frame `(e1, e2, nu)` at a regular point.
pub fn frame_jets(chart: &FrontalChart, u: f64, v: f64) -> Result<[JetVec3; 3]> {
    let policy = *chart.policy();
    let fr = chart.frame_with_order(u, v, REGULAR_ORDER.max(4))?;
    let fd = FundamentalData::from_frame(&fr);
    let order = fd.order;
    let w = fd.w();
    let sw = &fd.sigma * &w;
    let a = fd.a();
    let p = fd.p();
    let b = fd.b_squared(&policy)?;
    let ratio = b.value() / (a.value() * a.value()).max(f64::MIN_POSITIVE);
    if b.value() <= policy.eps_umbilic * (a.value() * a.value() + sw.value() * sw.value()) || !ratio.is_finite() {
        return Err(Error::UmbilicPoint { u, v, gamma: b.value() / (4.0 * sw.value() * sw.value()) });
    }
    let b = b.sqrt()?;
    let plus = &a + &b;
    let minus = &a - &b;
    let two_sw = sw.scale(2.0);
    let two_p = p.scale(2.0);
    let (k_plus, k_minus) = if plus.value().abs() >= minus.value().abs() {
        (plus.try_div(&two_sw, policy.eps_den)?, two_p.try_div(&plus, policy.eps_den)?)
    } else {
        (two_p.try_div(&minus, policy.eps_den)?, minus.try_div(&two_sw, policy.eps_den)?)
    };
    let (k1, k2) = if fd.sigma.value() > 0.0 { (k_plus, k_minus) } else { (k_minus, k_plus) };
    let fu = fr.fu.truncate(order);
    let x = fr.x.truncate(order);
    let nu = fr.nu.truncate(order);
    let eps = policy.eps_frame * (1.0 + fd.lt.value().abs() + fd.mt.value().abs() + fd.nt.value().abs());
    let mut es = Vec::with_capacity(2);
    for k in [&k1, &k2] {
        let l = &fd.lt - &(k * &fd.et);
        let m = &fd.mt - &(k * &fd.ft);
        let first = x.mul_scalar(&l).sub(&fu.mul_scalar(&m));
        let dir = if first.value().norm() > eps {
            first
        } else {
            let n = &fd.nt - &(&(&fd.sigma * k) * &fd.gt);
            x.mul_scalar(&(&fd.sigma * &m)).sub(&fu.mul_scalar(&n))
        };
        es.push(dir.normalize(policy.eps_den)?);
    }
    let e2 = es.pop().unwrap_or_else(|| nu.clone());
    let e1 = es.pop().unwrap_or_else(|| nu.clone());
    Ok([e1, e2, nu])
}

/// Two constant coordinate directions used as frame generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Generators {
    pub first: [f64; 2],
    pub second: [f64; 2],
}

impl Default for Generators {
    fn default() -> Self {
        Self { first: [1.0, 0.0], second: [0.0, 1.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrenetCoefficients {
    pub u: f64,
    pub v: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
    /// Gauss equation and the two Codazzi equations.
    pub residuals: [f64; 3],
}

/// Step of the central differences used for the integrability residuals.
pub const FRENET_STEP: f64 = 1e-5;

fn along(j: &JetVec3, g: [f64; 2]) -> Result<Vector3<f64>> {
    Ok(g[0] * j.partial(1, 0)? + g[1] * j.partial(0, 1)?)
}

/// Where the tangent frame of the Frenet check comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum FrameSource {
    /// Principal directions; fails at umbilics.
    #[default]
    Principal,
    /// `e1 = f_u1 / |f_u1|`, `e2 = nu x e1`. Only a curvature-line frame
    /// when the generators are curvature lines, as on surfaces of revolution.
    Generators,
}

fn generator_frame_jets(chart: &FrontalChart, u: f64, v: f64, gens: Generators) -> Result<[JetVec3; 3]> {
    const ORDER: usize = 2;
    let policy = chart.policy();
    let base = crate::jet::BasePoint::new(u, v);
    let f = chart.position(base, ORDER + 1)?;
    let d1 = f.d_u()?.scale(gens.first[0]).add(&f.d_v()?.scale(gens.first[1]));
    let e1 = d1.normalize(policy.eps_den)?;
    // Adapted charts lose an order dividing f_v by v.
    let nu = chart.gauss_map(u, v, ORDER + 2)?.truncate(ORDER);
    let e2 = nu.cross(&e1);
    Ok([e1, e2, nu])
}

/// `[x1, x2, x3, y1, y2, y3]` with the frame matched to the generators.
fn coefficients(
    chart: &FrontalChart,
    u: f64,
    v: f64,
    gens: Generators,
    source: FrameSource,
    reference: Option<&[Vector3<f64>; 2]>,
) -> Result<([f64; 6], [Vector3<f64>; 2])> {
    let [mut e1, mut e2, nu] = match source {
        FrameSource::Principal => frame_jets(chart, u, v)?,
        FrameSource::Generators => generator_frame_jets(chart, u, v, gens)?,
    };
    let f = chart.position(crate::jet::BasePoint::new(u, v), 1)?;
    let g1 = along(&f, gens.first)?;
    if e1.value().dot(&g1).abs() < e2.value().dot(&g1).abs() {
        std::mem::swap(&mut e1, &mut e2);
    }
    let signs = match reference {
        Some(r) => [r[0].dot(&e1.value()).signum(), r[1].dot(&e2.value()).signum()],
        None => {
            let g2 = along(&f, gens.second)?;
            let s = |x: f64| if x < 0.0 { -1.0 } else { 1.0 };
            [s(e1.value().dot(&g1)), s(e2.value().dot(&g2))]
        }
    };
    let e1 = e1.scale(signs[0]);
    let e2 = e2.scale(signs[1]);
    let n = nu.value();
    let (a, b) = (e1.value(), e2.value());
    let d1e1 = along(&e1, gens.first)?;
    let d1e2 = along(&e2, gens.first)?;
    let d2e1 = along(&e1, gens.second)?;
    let d2e2 = along(&e2, gens.second)?;
    Ok((
        [d1e1.dot(&b), d1e1.dot(&n), d1e2.dot(&n), d2e1.dot(&b), d2e1.dot(&n), d2e2.dot(&n)],
        [a, b],
    ))
}

pub fn frenet_coefficients(chart: &FrontalChart, u: f64, v: f64, gens: Generators) -> Result<FrenetCoefficients> {
    frenet_coefficients_with(chart, u, v, gens, FrameSource::Principal)
}

pub fn frenet_coefficients_with(
    chart: &FrontalChart,
    u: f64,
    v: f64,
    gens: Generators,
    source: FrameSource,
) -> Result<FrenetCoefficients> {
    let (c, frame) = coefficients(chart, u, v, gens, source, None)?;
    let h = FRENET_STEP;
    let shifted =
        |g: [f64; 2], s: f64| coefficients(chart, u + s * h * g[0], v + s * h * g[1], gens, source, Some(&frame)).map(|r| r.0);
    let d = |g: [f64; 2]| -> Result<[f64; 6]> {
        let p = shifted(g, 1.0)?;
        let m = shifted(g, -1.0)?;
        let mut out = [0.0; 6];
        for i in 0..6 {
            out[i] = (p[i] - m[i]) / (2.0 * h);
        }
        Ok(out)
    };
    let d1 = d(gens.first)?;
    let d2 = d(gens.second)?;
    let [x1, x2, x3, y1, y2, y3] = c;
    let residuals = [
        -x2 * y3 + d2[0] - d1[3],
        x1 * y3 + d2[1],
        d1[5] - x2 * y1,
    ];
    Ok(FrenetCoefficients { u, v, x1, x2, x3, y1, y2, y3, residuals })
}

/// The third integrability residual with the sign `x2 y1 + (y3)_1` instead.
pub fn codazzi_plus_sign_residual(
    c: &FrenetCoefficients,
    chart: &FrontalChart,
    gens: Generators,
    source: FrameSource,
) -> Result<f64> {
    let h = FRENET_STEP;
    let at = |s: f64| {
        coefficients(chart, c.u + s * h * gens.first[0], c.v + s * h * gens.first[1], gens, source, None).map(|r| r.0[5])
    };
    let d1y3 = (at(1.0)? - at(-1.0)?) / (2.0 * h);
    Ok(c.x2 * c.y1 + d1y3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::NumericPolicy;

    fn chart(name: &str) -> FrontalChart {
        FrontalChart::gallery(name, NumericPolicy::default()).unwrap()
    }

    #[test]
    fn torus_frame_follows_meridians() {
        let c = chart("torus");
        let f = curvature_line_frame(&c, 0.7, 1.1).unwrap();
        let e1 = Vector3::from(f.e1);
        let e2 = Vector3::from(f.e2);
        assert!(e1.dot(&e2).abs() < 1e-12);
        let fv = c.position(crate::jet::BasePoint::new(0.7, 1.1), 1).unwrap().partial(0, 1).unwrap();
        let along_parallel = e1.cross(&fv).norm().min(e2.cross(&fv).norm());
        assert!(along_parallel < 1e-10);
    }

    #[test]
    fn cuspidal_edge_frame() {
        let f = curvature_line_frame(&chart("cuspidal-edge"), 0.0, 0.0).unwrap();
        assert_eq!(f.branch, FrameBranch::SingularCurve);
        assert!((Vector3::from(f.e1) - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-14);
        assert!((Vector3::from(f.e2) - Vector3::new(0.0, 1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sphere_is_umbilic() {
        assert!(matches!(principal_vectors(&chart("sphere"), 0.2, 0.1), Err(Error::UmbilicPoint { .. })));
    }
}
