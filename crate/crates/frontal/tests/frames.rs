use std::f64::consts::PI;
use std::sync::Arc;

use frontal::dsl::parse_with;
use frontal::dsl::Var;
use frontal::frames::{
    codazzi_plus_sign_residual, curvature_line_frame, frenet_coefficients, frenet_coefficients_with, principal_vectors,
    tangent_principal_residual, FrameBranch, FrameSource, Generators,
};
use frontal::ribaucour::{revolve, ProfileCurve};
use frontal::surface::{linspace, SurfaceDef};
use frontal::{Error, FrontalChart, NumericPolicy};
use nalgebra::Vector3;

fn chart(name: &str) -> FrontalChart {
    FrontalChart::gallery(name, NumericPolicy::default()).unwrap()
}

fn unit_semicircle() -> FrontalChart {
    let t = |s: &str| parse_with(s, &[Var::T]).unwrap();
    let a: f64 = 0.3;
    let profile = ProfileCurve::new("semicircle", t("1"), t("t + pi/2"), (a.cos(), a.sin()), (a, PI - a)).unwrap();
    revolve(Arc::new(profile), NumericPolicy::default(), 64).unwrap()
}

#[test]
fn frames_are_orthonormal() {
    for name in ["torus", "f1", "cuspidal-edge"] {
        let c = chart(name);
        let d = c.domain();
        let mut checked = 0;
        for u in linspace(d.u.0, d.u.1, 7) {
            for v in linspace(d.v.0 + 0.01, d.v.1 - 0.01, 6) {
                let f = match curvature_line_frame(&c, u, v) {
                    Ok(f) => f,
                    Err(Error::UmbilicPoint { .. }) => continue,
                    Err(e) => panic!("{name} at ({u}, {v}): {e}"),
                };
                let (e1, e2, nu) = (Vector3::from(f.e1), Vector3::from(f.e2), Vector3::from(f.nu));
                for x in [e1.norm(), e2.norm(), nu.norm()] {
                    assert!((x - 1.0).abs() < 1e-12);
                }
                for x in [e1.dot(&e2), e1.dot(&nu), e2.dot(&nu)] {
                    assert!(x.abs() < 1e-10, "{name} at ({u}, {v}): {x}");
                }
                checked += 1;
            }
        }
        assert!(checked > 30, "{name}: {checked}");
    }
}

#[test]
fn singular_curve_frame_of_a_front() {
    let f = curvature_line_frame(&chart("f1"), 0.3, 0.0).unwrap();
    assert_eq!(f.branch, FrameBranch::SingularCurve);
}

#[test]
fn five_half_torsion_has_a_null_principal_direction() {
    let c = chart("five-half-torsion");
    for u in [-0.3, 0.0, 0.3] {
        let p = principal_vectors(&c, u, 0.0).unwrap();
        let along_null = p.generators.iter().any(|g| g[0].abs() < 1e-10 * g[1].abs());
        assert!(along_null, "{u}: {:?}", p.generators);
        assert!(p.residual < 1e-10);
    }
}

#[test]
fn singular_tangent_is_principal_without_torsion() {
    let plain = FrontalChart::from_def(
        SurfaceDef::from_toml(
            "[surface]\nname = \"quartic-edge\"\nx = \"u\"\ny = \"v^2\"\nz = \"v^4 + v^5\"\nu_range = [-1.0, 1.0]\nv_range = [-0.5, 0.5]\nadapted = true\n",
        )
        .unwrap(),
        NumericPolicy::default(),
    );
    let twisted = chart("five-half-torsion");
    for u in [-0.3, 0.0, 0.3] {
        let r = tangent_principal_residual(&plain, u).unwrap();
        assert!(r < 1e-10, "{u}: {r}");
        let r = tangent_principal_residual(&twisted, u).unwrap();
        assert!(r > 1e-3, "{u}: {r}");
    }
}

#[test]
fn flat_frontal_has_no_normal_turning() {
    let c = chart("flat-frontal");
    for (u, v) in [(0.2, 0.1), (-0.4, 0.3)] {
        let f = frenet_coefficients_with(&c, u, v, Generators::default(), FrameSource::Generators).unwrap();
        assert!(f.x2.abs() < 1e-14 && f.y3.abs() < 1e-14);
        assert!(f.residuals.iter().all(|r| r.abs() < 1e-8));
    }
}

#[test]
fn unit_sphere_of_revolution_satisfies_integrability() {
    let c = unit_semicircle();
    let d = c.domain();
    for u in linspace(d.u.0, d.u.1, 6) {
        for v in linspace(d.v.0, d.v.1, 5) {
            let f = frenet_coefficients_with(&c, u, v, Generators::default(), FrameSource::Generators).unwrap();
            assert!(f.residuals.iter().all(|r| r.abs() < 1e-7), "({u}, {v}): {:?}", f.residuals);
            // Unit sphere: both normal curvatures equal the arc-length speed.
            assert!(f.x3.abs() < 1e-10 && f.y2.abs() < 1e-10);
        }
    }
}

#[test]
fn torus_integrability_and_sign() {
    let c = chart("torus");
    let mut worst_plus = 0.0_f64;
    for u in [0.4, 1.3, 2.5, 4.0] {
        let f = frenet_coefficients(&c, u, 0.9, Generators::default()).unwrap();
        assert!(f.residuals.iter().all(|r| r.abs() < 1e-6), "{u}: {:?}", f.residuals);
        worst_plus = worst_plus.max(codazzi_plus_sign_residual(&f, &c, Generators::default(), FrameSource::Principal).unwrap().abs());
    }
    assert!(worst_plus > 0.1, "{worst_plus}");
}

#[test]
fn sphere_has_no_principal_frame() {
    let r = frenet_coefficients(&chart("sphere"), 0.1, 0.2, Generators::default());
    assert!(matches!(r, Err(Error::UmbilicPoint { .. })));
}
