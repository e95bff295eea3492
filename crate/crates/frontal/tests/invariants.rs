use std::sync::Arc;

use frontal::invariants::{edge_invariants, extension_test, normalize_orthogonal_adapted, rb_rc_direct, umbilic_analysis};
use frontal::surface::FlipV;
use frontal::{FrontalChart, NumericPolicy};

fn chart(name: &str) -> FrontalChart {
    FrontalChart::gallery(name, NumericPolicy::default()).unwrap()
}

#[test]
fn normalization_postconditions() {
    for name in ["cuspidal-edge", "f1", "f3", "five-half"] {
        let c = chart(name);
        for u0 in [0.0, 0.4, -0.4] {
            let oa = normalize_orthogonal_adapted(&c, u0).unwrap();
            assert!(oa.residual < 1e-10, "{name} at {u0}: {}", oa.residual);
            let fd = &oa.fundamental;
            assert!((fd.et.value() - 1.0).abs() < 1e-12);
            assert!(fd.ft.value().abs() < 1e-12);
            assert!((fd.gt.value() - 1.0).abs() < 1e-12);
            assert!((oa.change_u.value() - u0).abs() < 1e-14);
            let p = oa.position.value();
            assert!((p - c.point(u0, 0.0).unwrap()).norm() < 1e-14);
        }
    }
}

#[test]
fn normalization_needs_an_adapted_chart() {
    assert!(normalize_orthogonal_adapted(&chart("sphere"), 0.0).is_err());
}

#[test]
fn five_half_invariants() {
    let p = edge_invariants(&chart("five-half"), 0.0).unwrap();
    assert!(p.kappa_nu.abs() < 1e-12);
    assert!(p.kappa_t.abs() < 1e-12);
    assert!(p.r_b.unwrap().abs() < 1e-10);
    assert!(p.r_c.unwrap().abs() > 1e-3, "{:?}", p.r_c);
}

#[test]
fn direct_route_matches_normal_form_route() {
    for name in ["f1", "f3", "five-half-torsion"] {
        let c = chart(name);
        for u0 in [0.0, 0.3, -0.3] {
            let p = edge_invariants(&c, u0).unwrap();
            if p.r_b.is_none() {
                continue;
            }
            let d = rb_rc_direct(&c, u0).unwrap();
            let (rb, rc) = (p.r_b.unwrap(), p.r_c.unwrap());
            assert!((rb - d.r_b).abs() <= 1e-8 * rb.abs().max(1.0), "{name} at {u0}: {rb} vs {}", d.r_b);
            assert!((rc - d.r_c).abs() <= 1e-8 * rc.abs().max(1.0), "{name} at {u0}: {rc} vs {}", d.r_c);
            assert!(d.hv_residual < 1e-9, "{name} at {u0}: {}", d.hv_residual);
        }
    }
}

#[test]
fn direct_route_rejects_fronts() {
    assert!(rb_rc_direct(&chart("cuspidal-edge"), 0.0).is_err());
}

#[test]
fn principal_curvature_extension() {
    let t = extension_test(&chart("five-half-torsion"), &[0.0, 0.2]).unwrap();
    assert!(t.entries.iter().all(|e| e.extension_ok));
    assert!(t.agrees(1e-4), "{t:?}");
    let bare = extension_test(&chart("five-half"), &[0.0]).unwrap();
    assert!(!bare.entries[0].extension_ok);
}

#[test]
fn extension_unchanged_under_v_flip() {
    for name in ["five-half-torsion", "five-half"] {
        let c = chart(name);
        let flipped = FrontalChart::new(Arc::new(FlipV::new(c.map().clone())), *c.policy());
        let a = edge_invariants(&c, 0.1).unwrap();
        let b = edge_invariants(&flipped, 0.1).unwrap();
        assert_eq!(a.extension_ok, b.extension_ok, "{name}");
    }
}

#[test]
fn extension_needs_pure_frontal_points() {
    assert!(extension_test(&chart("f1"), &[0.0]).is_err());
}

#[test]
fn f1_umbilic_is_not_morse() {
    let r = umbilic_analysis(&chart("f1"), 0.0).unwrap();
    assert!(!r.morse);
    assert!(r.closed_det.abs() < 1e-8, "{}", r.closed_det);
    assert!(r.fd_det.abs() < 1e-4, "{}", r.fd_det);
}

#[test]
fn f3_umbilic_is_critical() {
    let r = umbilic_analysis(&chart("f3"), 0.0).unwrap();
    assert!(r.at_umbilic);
    assert!(r.closed_gradient.iter().all(|g| g.abs() < 1e-12));
    assert!(r.fd_gradient.iter().all(|g| g.abs() < 1e-6), "{:?}", r.fd_gradient);
    assert!((r.closed_det - r.quoted_det).abs() < 1e-8 * r.quoted_det.abs());
}

#[test]
fn degenerate_pure_umbilic_determinant() {
    // The closed form and finite differences agree; the factored
    // expression through the torsion and bias does not.
    let r = umbilic_analysis(&chart("pure-umbilic-degenerate"), 0.0).unwrap();
    assert!(r.at_umbilic);
    assert!(r.closed_det.abs() < 1e-8, "{}", r.closed_det);
    assert!(r.fd_det.abs() < 1e-4, "{}", r.fd_det);
    assert!((r.quoted_det - 7.03).abs() < 0.01, "{}", r.quoted_det);
}
