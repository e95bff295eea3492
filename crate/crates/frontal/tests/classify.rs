use frontal::classify::{classify_singular_point, psi_classifier, Verdict};
use frontal::surface::linspace;
use frontal::{FrontalChart, NumericPolicy};

fn chart(name: &str) -> FrontalChart {
    FrontalChart::gallery(name, NumericPolicy::default()).unwrap()
}

#[test]
fn verdicts_along_the_axis() {
    let cases = [
        ("cuspidal-edge", Verdict::FirstKindFront),
        ("five-half", Verdict::PureFrontal),
        ("plane", Verdict::Regular),
    ];
    assert_eq!(classify_singular_point(&chart("f1"), 0.0).unwrap().verdict, Verdict::KNonFront(1));
    for u0 in [-0.3, 0.3] {
        assert_eq!(classify_singular_point(&chart("f1"), u0).unwrap().verdict, Verdict::FirstKindFront);
    }
    for (name, want) in cases {
        let c = chart(name);
        for u0 in [-0.3, 0.0, 0.3] {
            assert_eq!(classify_singular_point(&c, u0).unwrap().verdict, want, "{name} at {u0}");
        }
    }
}

#[test]
fn f1_psi_has_a_simple_zero() {
    let psi = psi_classifier(&chart("f1"), 0.0).unwrap();
    assert!(psi[0].abs() < 1e-14);
    assert!(psi[1].abs() > 1.0, "{psi:?}");
}

#[test]
fn f1_psi_away_from_origin() {
    let c = chart("f1");
    for u0 in [-0.5, -0.1, 0.1, 0.5] {
        let psi = psi_classifier(&c, u0).unwrap()[0];
        // nu is proportional to (-4u, -3uv, 2), so psi = 6u(1 + 4u^2) / (4(1 + 4u^2)).
        let want = 1.5 * u0;
        assert!((psi.abs() - want.abs()).abs() < 1e-12, "{u0}: {psi} vs {want}");
        assert!(psi.abs() > 1e-3);
    }
}

#[test]
fn lambda_v_is_nonzero_along_the_axis() {
    for name in ["cuspidal-edge", "f1", "five-half"] {
        let c = chart(name);
        for u0 in linspace(-0.5, 0.5, 11) {
            let r = classify_singular_point(&c, u0).unwrap();
            assert!(r.nondegenerate, "{name} at {u0}");
            assert!(r.lambda_v.abs() > 1e-3, "{name} at {u0}: {}", r.lambda_v);
        }
    }
}

#[test]
fn f1_unit_normal_on_the_axis() {
    let c = chart("f1");
    for u0 in [-0.4, 0.0, 0.25] {
        let nu = c.frame(u0, 0.0).unwrap().nu.value();
        let want = nalgebra::Vector3::new(-4.0 * u0, 0.0, 2.0) / (16.0 * u0 * u0 + 4.0).sqrt();
        let err = (nu - want).norm().min((nu + want).norm());
        assert!(err < 1e-14, "{u0}: {nu:?}");
    }
}

#[test]
fn cuspidal_edge_lambda_slope() {
    let r = classify_singular_point(&chart("cuspidal-edge"), 0.0).unwrap();
    assert!((r.lambda_v.abs() - 2.0).abs() < 1e-14);
    assert!(r.psi_jet[0].abs() > 1.0);
}

#[test]
fn report_serializes() {
    let r = classify_singular_point(&chart("f1"), 0.0).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"KNonFront\""), "{json}");
}
