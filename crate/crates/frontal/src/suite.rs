//! The acceptance checks, shared by the `verify` command and the
//! acceptance test target.

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chart::FrontalChart;
use crate::classify::{classify_singular_point, Verdict};
use crate::curvature::{
    bounded_gauss_check, curvature_sample, fundamental_data, limit_profile, BranchTrace, BranchVerdict, LimitReport,
    LimitWindow, RatioBranch, Side,
};
use crate::error::{Error, Result};
use crate::frames::{frenet_coefficients_with, principal_vectors, FrameSource, Generators};
use crate::gallery;
use crate::invariants::{edge_invariants, rb_rc_direct, umbilic_analysis, UmbilicReport};
use crate::policy::NumericPolicy;
use crate::ribaucour::{build_envelope, revolve, verify_ribaucour, ProfileCurve, ResidualReport, RibaucourPair};
use crate::surface::linspace;

/// Seed for every random sample drawn by the suite.
pub const SEED: u64 = 0x5eed_f207;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Invariants,
    Curvature,
    Classify,
    Frames,
    Ribaucour,
}

impl FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "invariants" => Ok(Group::Invariants),
            "curvature" => Ok(Group::Curvature),
            "classify" => Ok(Group::Classify),
            "frames" => Ok(Group::Frames),
            "ribaucour" => Ok(Group::Ribaucour),
            other => Err(format!(
                "unknown group `{other}` (expected invariants, curvature, classify, frames or ribaucour)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub group: Group,
    pub title: &'static str,
    pub passed: bool,
    pub observed: String,
    pub expected: String,
    pub elapsed_s: f64,
    pub budget_s: f64,
}

impl CriterionResult {
    /// `PASS [n] title: observed` or the same with `FAIL`.
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "{tag} [{:>2}] {}: {} (expected {}; {:.2}s of {}s)",
            self.id, self.title, self.observed, self.expected, self.elapsed_s, self.budget_s
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub policy: NumericPolicy,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

struct Outcome {
    passed: bool,
    observed: String,
    expected: String,
}

struct Criterion {
    id: u8,
    group: Group,
    title: &'static str,
    budget_s: f64,
    run: fn(&NumericPolicy) -> Result<Outcome>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, group: Group::Invariants, title: "limiting normal curvature of f1 and f2", budget_s: 1.0, run: c1_kappa_nu },
    Criterion { id: 2, group: Group::Curvature, title: "A +- B on the singular curve of f1, f2", budget_s: 1.0, run: c2_a_pm_b },
    Criterion { id: 3, group: Group::Classify, title: "classification regression", budget_s: 1.0, run: c3_classify },
    Criterion { id: 4, group: Group::Curvature, title: "principal curvature branches near non-front points", budget_s: 5.0, run: c4_branches },
    Criterion { id: 5, group: Group::Invariants, title: "r_b and r_c by two routes", budget_s: 5.0, run: c5_two_routes },
    Criterion { id: 6, group: Group::Frames, title: "principal vectors and curvature identities", budget_s: 10.0, run: c6_principal },
    Criterion { id: 7, group: Group::Invariants, title: "umbilic gradients and Hessians", budget_s: 5.0, run: c7_umbilic },
    Criterion { id: 8, group: Group::Curvature, title: "two expansions of the umbilicity function", budget_s: 5.0, run: c8_umbilicity },
    Criterion { id: 9, group: Group::Frames, title: "Frenet integrability on revolution grids", budget_s: 10.0, run: c9_frenet },
    Criterion { id: 10, group: Group::Ribaucour, title: "Ribaucour pair of a circle profile", budget_s: 20.0, run: c10_ribaucour },
    Criterion { id: 11, group: Group::Curvature, title: "bounded Gaussian curvature", budget_s: 2.0, run: c11_bounded },
];

/// Run every criterion, or those of one group.
pub fn run_suite(policy: &NumericPolicy, only: Option<Group>) -> SuiteReport {
    let results = CRITERIA.iter().filter(|c| only.map_or(true, |g| g == c.group)).map(|c| run_one(c, policy)).collect();
    SuiteReport { policy: *policy, results }
}

/// Run a single criterion by number.
pub fn run_criterion(id: u8, policy: &NumericPolicy) -> Option<CriterionResult> {
    CRITERIA.iter().find(|c| c.id == id).map(|c| run_one(c, policy))
}

fn run_one(c: &Criterion, policy: &NumericPolicy) -> CriterionResult {
    let start = Instant::now();
    let outcome = (c.run)(policy);
    let elapsed_s = start.elapsed().as_secs_f64();
    let (passed, observed, expected) = match outcome {
        Ok(o) => (o.passed, o.observed, o.expected),
        Err(e) => (false, format!("error: {e}"), "no error".to_string()),
    };
    CriterionResult {
        id: c.id,
        group: c.group,
        title: c.title,
        passed: passed && elapsed_s <= c.budget_s,
        observed,
        expected,
        elapsed_s,
        budget_s: c.budget_s,
    }
}

fn chart(name: &str, policy: &NumericPolicy) -> Result<FrontalChart> {
    FrontalChart::gallery(name, *policy)
}

/// `|a - b| <= rel * max(1, |a|, |b|)`.
fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * 1f64.max(a.abs()).max(b.abs())
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn c1_kappa_nu(policy: &NumericPolicy) -> Result<Outcome> {
    let mut obs = Vec::new();
    let mut ok = true;
    for name in ["f1", "f2"] {
        let k = edge_invariants(&chart(name, policy)?, 0.0)?.kappa_nu;
        ok &= (k - 2.0).abs() < 1e-6;
        obs.push(format!("{name}: {k:.12}"));
    }
    Ok(Outcome { passed: ok, observed: obs.join(", "), expected: "2 within 1e-6".into() })
}

fn c2_a_pm_b(policy: &NumericPolicy) -> Result<Outcome> {
    let us = [-0.5, -0.25, -0.1, 0.0, 0.1, 0.25, 0.5];
    let mut worst = 0.0_f64;
    for (name, i) in [("f1", 1), ("f2", 2)] {
        let c = chart(name, policy)?;
        for &u in &us {
            let s = curvature_sample(&c, u, 0.0)?;
            let ui = u.powi(i);
            let root = (1.0 + 4.0 * u * u).sqrt();
            worst = worst.max(rel_err(s.a + s.b, 3.0 * (ui + ui.abs()) * root));
            worst = worst.max(rel_err(s.a - s.b, 3.0 * (ui - ui.abs()) * root));
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-8,
        observed: format!("max relative error {worst:.3e} over 14 points"),
        expected: "<= 1e-8".into(),
    })
}

fn c3_classify(policy: &NumericPolicy) -> Result<Outcome> {
    let cases = [
        ("cuspidal-edge", Verdict::FirstKindFront),
        ("f1", Verdict::KNonFront(1)),
        ("f2", Verdict::KNonFront(2)),
        ("five-half", Verdict::PureFrontal),
    ];
    let mut ok = true;
    let mut obs = Vec::new();
    for (name, want) in cases {
        let got = classify_singular_point(&chart(name, policy)?, 0.0)?.verdict;
        ok &= got == want;
        obs.push(format!("{name}: {got}"));
    }
    Ok(Outcome {
        passed: ok,
        observed: obs.join(", "),
        expected: "FirstKindFront, KNonFront(1), KNonFront(2), PureFrontal".into(),
    })
}

/// Largest sampled `|v|` from which `|kappa|` stays above `level` all the
/// way to the end of the sweep.
fn crossing(samples: &[(f64, f64)], level: f64) -> Option<f64> {
    let tail = samples.iter().rev().take_while(|s| s.1.abs() > level).count();
    (tail > 0).then(|| samples[samples.len() - tail].0.abs())
}

/// Where the diverging `branch` passes `level` on both signs of `v`.
fn diverging_past(report: &LimitReport, branch: RatioBranch, level: f64) -> Option<f64> {
    let (p, m) = report.branch(branch);
    let div = |t: &BranchTrace| matches!(t.verdict, BranchVerdict::Diverges { .. });
    if !div(p) || !div(m) {
        return None;
    }
    let v = crossing(&p.samples, level)?.min(crossing(&m.samples, level)?);
    (v < 1e-3).then_some(v)
}

fn other(b: RatioBranch) -> RatioBranch {
    match b {
        RatioBranch::I => RatioBranch::II,
        RatioBranch::II => RatioBranch::I,
    }
}

fn c4_branches(policy: &NumericPolicy) -> Result<Outcome> {
    let f2 = chart("f2", policy)?;
    let window = LimitWindow { delta: 0.1, ..LimitWindow::default() };
    let mut ok = true;
    let mut obs = Vec::new();
    for side in [Side::Below, Side::Above] {
        let r = limit_profile(&f2, 0.0, side, window)?;
        match r.converging_branch(1e-4) {
            Some(b) => {
                let lim = r.branch(b).0.verdict.limit().unwrap_or(f64::NAN);
                let cross = diverging_past(&r, other(b), 1e3);
                ok &= cross.is_some();
                obs.push(format!(
                    "f2 u={:+}: {b:?} -> {lim:.6}, other > 1e3 below |v| = {}",
                    r.u,
                    cross.map_or("never".to_string(), |v| format!("{v:.2e}"))
                ));
            }
            None => {
                ok = false;
                obs.push(format!("f2 u={:+}: no single converging branch", r.u));
            }
        }
    }
    let f1 = chart("f1", policy)?;
    let window = LimitWindow { delta: 0.2, ..LimitWindow::default() };
    let below = limit_profile(&f1, 0.0, Side::Below, window)?.converging_branch(1e-4);
    let above = limit_profile(&f1, 0.0, Side::Above, window)?.converging_branch(1e-4);
    ok &= matches!((below, above), (Some(a), Some(b)) if a != b);
    obs.push(format!("f1: {below:?} at u=-0.2, {above:?} at u=+0.2"));
    Ok(Outcome {
        passed: ok,
        observed: obs.join("; "),
        expected: "f2: one branch agrees from both signs of v within 1e-4, the other diverges past 1e3 for |v| < 1e-3; f1: branches swap".into(),
    })
}

fn c5_two_routes(policy: &NumericPolicy) -> Result<Outcome> {
    let us = [-0.4, -0.2, 0.0, 0.2, 0.4];
    let mut worst = 0.0_f64;
    let mut count = 0;
    let mut surfaces = Vec::new();
    for name in gallery::names() {
        let c = chart(name, policy)?;
        if !c.adapted() {
            continue;
        }
        let mut points = 0;
        for &u in &us {
            if !c.domain().contains(u, 0.0) {
                continue;
            }
            let verdict = classify_singular_point(&c, u)?.verdict;
            if !matches!(verdict, Verdict::KNonFront(_) | Verdict::PureFrontal) {
                continue;
            }
            let normal_form = edge_invariants(&c, u)?;
            let direct = rb_rc_direct(&c, u)?;
            let (Some(rb), Some(rc)) = (normal_form.r_b, normal_form.r_c) else {
                return Err(Error::NotApplicable(format!("{name} at u = {u}: r_b, r_c missing")));
            };
            worst = worst.max(rel_err(rb, direct.r_b)).max(rel_err(rc, direct.r_c));
            points += 1;
        }
        if points > 0 {
            count += points;
            surfaces.push(format!("{name} ({points})"));
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-6 && count > 0,
        observed: format!("max relative difference {worst:.3e} at {count} points on {}", surfaces.join(", ")),
        expected: "<= 1e-6 at every non-front point sampled".into(),
    })
}

/// Random points off the singular set of a gallery chart.
fn regular_points(c: &FrontalChart, n: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let d = c.domain();
    let mut out = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n && tries < 100 * n {
        tries += 1;
        let u = rng.gen_range(d.u.0..=d.u.1);
        let v = rng.gen_range(d.v.0..=d.v.1);
        if c.adapted() && v.abs() < 1e-2 {
            continue;
        }
        let lambda = c.area_density(u, v, 3).map(|j| j.value().abs()).unwrap_or(0.0);
        if lambda > 1e-8 {
            out.push((u, v));
        }
    }
    out
}

fn c6_principal(policy: &NumericPolicy) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut orth, mut gamma_min, mut kh) = (0.0_f64, f64::INFINITY, 0.0_f64);
    let (mut points, mut umbilic) = (0, 0);
    for name in gallery::names() {
        let c = chart(name, policy)?;
        for (u, v) in regular_points(&c, 100, &mut rng) {
            let s = curvature_sample(&c, u, v)?;
            let (Some(k), Some(h), Some(g), Some(k1), Some(k2)) =
                (s.k.finite(), s.h.finite(), s.gamma.finite(), s.kappa1.finite(), s.kappa2.finite())
            else {
                return Err(Error::NotApplicable(format!("{name}: non-finite curvature at regular point ({u}, {v})")));
            };
            gamma_min = gamma_min.min(g);
            kh = kh.max(rel_err(k1 * k2, k)).max(rel_err(k1 + k2, 2.0 * h));
            points += 1;
            match principal_vectors(&c, u, v) {
                Ok(p) => {
                    let a = nalgebra::Vector3::from(p.df[0]);
                    let b = nalgebra::Vector3::from(p.df[1]);
                    orth = orth.max(a.dot(&b).abs() / (a.norm() * b.norm()));
                }
                Err(Error::UmbilicPoint { .. }) => umbilic += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Outcome {
        passed: orth < 1e-10 && gamma_min >= -1e-12 && kh <= 1e-8,
        observed: format!(
            "{points} points ({umbilic} umbilic): max |<df V1, df V2>|/(|df V1||df V2|) {orth:.2e}, min Gamma {gamma_min:.2e}, max K/H identity error {kh:.2e}"
        ),
        expected: "orthogonality < 1e-10, Gamma >= -1e-12, identities <= 1e-8".into(),
    })
}

fn hessian_error(r: &UmbilicReport) -> f64 {
    let mut scale = 1.0_f64;
    for row in r.fd_hessian {
        for x in row {
            scale = scale.max(x.abs());
        }
    }
    let mut err = 0.0_f64;
    for i in 0..2 {
        err = err.max((r.closed_gradient[i] - r.fd_gradient[i]).abs() / scale);
        for j in 0..2 {
            err = err.max((r.closed_hessian[i][j] - r.fd_hessian[i][j]).abs() / scale);
        }
    }
    err
}

fn c7_umbilic(policy: &NumericPolicy) -> Result<Outcome> {
    let f3 = umbilic_analysis(&chart("f3", policy)?, 0.0)?;
    let pu = umbilic_analysis(&chart("pure-umbilic", policy)?, 0.0)?;
    let (e3, ep) = (hessian_error(&f3), hessian_error(&pu));
    let det = rel_err(f3.closed_det, f3.quoted_det);
    Ok(Outcome {
        passed: e3 <= 1e-5 && ep <= 1e-5 && det <= 1e-5 && f3.at_umbilic && pu.at_umbilic,
        observed: format!(
            "f3 GammaTilde: FD error {e3:.2e}, det {:.6} vs 16 M^2 N_u^2 = {:.6}; pure-umbilic Gamma: FD error {ep:.2e}, det {:.6}",
            f3.closed_det, f3.quoted_det, pu.closed_det
        ),
        expected: "closed forms match FD within 1e-5, determinant identity holds".into(),
    })
}

fn c8_umbilicity(policy: &NumericPolicy) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let names: Vec<&str> = gallery::names().collect();
    let quota = 1000usize.div_ceil(names.len());
    let mut worst = 0.0_f64;
    let mut points = 0;
    let mut skipped = Vec::new();
    for name in names {
        let c = chart(name, policy)?;
        let sample = regular_points(&c, quota, &mut rng);
        if sample.is_empty() {
            skipped.push(name);
        }
        for (u, v) in sample {
            let fd = fundamental_data(&c, u, v)?;
            let first = fd.umbilicity_difference_form().value();
            let second = fd.b_squared(policy)?.value();
            let a = fd.a().value();
            let scale = a * a + 4.0 * (fd.sigma.value() * fd.w().value() * fd.p().value()).abs();
            worst = worst.max((first - second).abs() / scale.max(f64::MIN_POSITIVE));
            points += 1;
        }
    }
    let note = if skipped.is_empty() { String::new() } else { format!(" (no regular samples on {})", skipped.join(", ")) };
    Ok(Outcome {
        passed: worst <= 1e-9 && points >= 1000,
        observed: format!("max relative difference {worst:.2e} at {points} points{note}"),
        expected: "<= 1e-9 at 1000 points".into(),
    })
}

fn c9_frenet(policy: &NumericPolicy) -> Result<Outcome> {
    let (profile, _) = ProfileCurve::gallery("circle-profile")?;
    let charts = [chart("torus", policy)?, revolve(Arc::new(profile), *policy, 64)?];
    let (mut xy, mut res) = (0.0_f64, [0.0_f64; 3]);
    let mut points = 0;
    for c in &charts {
        let d = c.domain();
        for u in linspace(d.u.0, d.u.1, 12) {
            for v in linspace(d.v.0, d.v.1, 12) {
                let f = frenet_coefficients_with(c, u, v, Generators::default(), FrameSource::Generators)?;
                xy = xy.max(f.x3.abs()).max(f.y2.abs());
                for i in 0..3 {
                    res[i] = res[i].max(f.residuals[i].abs());
                }
                points += 1;
            }
        }
    }
    let worst = res.iter().fold(0.0_f64, |a, &b| a.max(b));
    Ok(Outcome {
        passed: xy < 1e-10 && worst < 1e-6,
        observed: format!(
            "{points} points: max |x3|, |y2| {xy:.2e}; residuals {:.2e}, {:.2e}, {:.2e}",
            res[0], res[1], res[2]
        ),
        expected: "x3, y2 < 1e-10; residuals < 1e-6".into(),
    })
}

fn pair(name: &str, policy: &NumericPolicy) -> Result<RibaucourPair> {
    let (profile, rho) = ProfileCurve::gallery(name)?;
    RibaucourPair::new(build_envelope(profile, rho, *policy)?)
}

fn failing_checks(r: &ResidualReport, tol: f64) -> String {
    let named = [
        ("center map", r.center_map),
        ("h_u equation", r.radius_equations[0]),
        ("h_v equation", r.radius_equations[1]),
        ("Ribaucour 1", r.ribaucour[0]),
        ("Ribaucour 2", r.ribaucour[1]),
        ("orthogonality", r.orthogonality[0].max(r.orthogonality[1])),
        ("bookkeeping", r.bookkeeping[0].max(r.bookkeeping[1])),
        ("frame decomposition", r.frame_decomposition),
        ("|b| = 1", r.b_norm),
        ("generators", r.generators),
        ("frontal", r.frontal),
        ("envelope", r.envelope),
    ];
    let bad: Vec<String> = named.iter().filter(|(_, x)| !(*x <= tol)).map(|(n, x)| format!("{n} {x:.2e}")).collect();
    if bad.is_empty() {
        "none".into()
    } else {
        bad.join(", ")
    }
}

fn c10_ribaucour(policy: &NumericPolicy) -> Result<Outcome> {
    const TOL: f64 = 1e-8;
    let grid = (64, 64);
    let general = pair("circle-profile", policy)?;
    let r1 = verify_ribaucour(&general, grid)?;
    let unit = verify_ribaucour(&pair("circle-profile-unit-k", policy)?, grid)?;
    let fault = verify_ribaucour(&general.with_h_scale(1.01), grid)?;
    let detected = fault.center_map > 1e-3 && !fault.passes(TOL);
    Ok(Outcome {
        passed: r1.passes(TOL) && unit.passes(TOL) && detected,
        observed: format!(
            "|k| < 1: max {:.2e}; |k| = 1: max {:.2e} (failing: {}); 1.01 h: center map {:.2e}",
            r1.max(),
            unit.max(),
            failing_checks(&unit, TOL),
            fault.center_map
        ),
        expected: "both branches < 1e-8 on 64x64, fault center map > 1e-3".into(),
    })
}

fn c11_bounded(policy: &NumericPolicy) -> Result<Outcome> {
    let c = chart("bounded-gauss", policy)?;
    let mut ok = true;
    let mut obs = Vec::new();
    for u0 in [-0.3, 0.0, 0.3] {
        let r = bounded_gauss_check(&c, u0)?;
        let k_zero = r.k_value.abs() <= 1e-9;
        let t_zero = r.kappa_t.abs() <= 1e-9;
        ok &= close(r.k_value, -r.kappa_t * r.kappa_t, 1e-6) && r.k_value <= 1e-12 && k_zero == t_zero;
        obs.push(format!("u={u0:+}: K {:.3e}, -kappa_t^2 {:.3e}", r.k_value, -r.kappa_t * r.kappa_t));
    }
    let f1 = bounded_gauss_check(&chart("f1", policy)?, 0.0);
    let not_bounded = matches!(f1, Err(Error::NotBounded { .. }));
    ok &= not_bounded;
    obs.push(format!(
        "f1: {}",
        match f1 {
            Err(e) => e.to_string(),
            Ok(r) => format!("bounded, K = {}", r.k_value),
        }
    ));
    Ok(Outcome {
        passed: ok,
        observed: obs.join("; "),
        expected: "K = -kappa_t^2 <= 0 within 1e-6, K = 0 iff kappa_t = 0; f1 NotBounded".into(),
    })
}
