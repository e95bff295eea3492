use frontal::jet::{BasePoint, Jet2};
use proptest::prelude::*;

fn fd_partial(g: &dyn Fn(f64, f64) -> f64, u: f64, v: f64, i: usize, j: usize) -> f64 {
    let h = if i + j == 1 { 1e-5 } else { 1e-4 };
    match (i, j) {
        (1, 0) => (g(u + h, v) - g(u - h, v)) / (2.0 * h),
        (0, 1) => (g(u, v + h) - g(u, v - h)) / (2.0 * h),
        (2, 0) => (g(u + h, v) - 2.0 * g(u, v) + g(u - h, v)) / (h * h),
        (0, 2) => (g(u, v + h) - 2.0 * g(u, v) + g(u, v - h)) / (h * h),
        (1, 1) => (g(u + h, v + h) - g(u + h, v - h) - g(u - h, v + h) + g(u - h, v - h)) / (4.0 * h * h),
        _ => unreachable!(),
    }
}

#[test]
fn exp_matches_finite_differences() {
    let base = BasePoint::new(0.2, -0.1);
    let j = (&Jet2::var_u(base, 2) + &Jet2::var_v(base, 2)).exp();
    let g = |u: f64, v: f64| (u + v).exp();
    for (i, k) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        let want = fd_partial(&g, 0.2, -0.1, i, k);
        let got = j.partial(i, k).unwrap();
        assert!((got - want).abs() / want.abs() < 1e-6, "({i},{k}): {got} vs {want}");
    }
}

#[test]
fn exp_at_origin_has_binomial_coefficients() {
    let base = BasePoint::new(0.0, 0.0);
    let j = (&Jet2::var_u(base, 2) + &Jet2::var_v(base, 2)).exp();
    let want = [(0, 0, 1.0), (1, 0, 1.0), (0, 1, 1.0), (2, 0, 0.5), (1, 1, 1.0), (0, 2, 0.5)];
    for (i, k, c) in want {
        assert!((j.coeff(i, k).unwrap() - c).abs() < 1e-15);
    }
}

#[test]
fn composed_cubic_matches_finite_differences() {
    // f = 1 + u - 2v + u^2 v + 0.5 v^3 under (u, v) = (s + 0.3 w^2, w)
    let poly = |u: f64, v: f64| 1.0 + u - 2.0 * v + u * u * v + 0.5 * v.powi(3);
    let (s0, w0) = (0.4, 0.25);
    let (u0, v0) = (s0 + 0.3 * w0 * w0, w0);
    let at = BasePoint::new(u0, v0);
    let u = Jet2::var_u(at, 3);
    let v = Jet2::var_v(at, 3);
    let f = &(&(&u.add_scalar(1.0) - &v.scale(2.0)) + &(&(&u * &u) * &v)) + &(&(&v * &v) * &v).scale(0.5);
    let base = BasePoint::new(s0, w0);
    let s = Jet2::var_u(base, 3);
    let w = Jet2::var_v(base, 3);
    let cu = &s + &(&w * &w).scale(0.3);
    let composed = f.compose(&cu, &w).unwrap();
    let g = |s: f64, w: f64| poly(s + 0.3 * w * w, w);
    assert!((composed.value() - g(s0, w0)).abs() < 1e-14);
    for (i, k) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        let want = fd_partial(&g, s0, w0, i, k);
        let got = composed.partial(i, k).unwrap();
        let tol = if i + k == 1 { 1e-7 } else { 1e-6 };
        assert!((got - want).abs() <= tol * want.abs().max(1.0), "({i},{k}): {got} vs {want}");
    }
}

#[test]
fn compose_with_identity_is_unchanged() {
    let base = BasePoint::new(0.3, 0.1);
    let j = Jet2::from_fn(base, 4, |i, k| 1.0 / (1 + i + 2 * k) as f64);
    let same = j.compose(&Jet2::var_u(base, 4), &Jet2::var_v(base, 4)).unwrap();
    for (a, b) in j.coeffs().iter().zip(same.coeffs()) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn square_under_shear() {
    let zero = BasePoint::new(0.0, 0.0);
    let u = Jet2::var_u(zero, 4);
    let f = &u * &u;
    let s = Jet2::var_u(zero, 4);
    let w = Jet2::var_v(zero, 4);
    let c = f.compose(&(&s + &(&w * &w)), &w).unwrap();
    let want = [(2, 0, 1.0), (1, 2, 2.0), (0, 4, 1.0)];
    for i in 0..=4 {
        for k in 0..=4 - i {
            let expected = want.iter().find(|e| e.0 == i && e.1 == k).map_or(0.0, |e| e.2);
            assert_eq!(c.coeff(i, k).unwrap(), expected, "({i},{k})");
        }
    }
}

#[test]
fn divide_by_v_of_f_v_parts() {
    let zero = BasePoint::new(0.0, 0.0);
    let (u, v) = (Jet2::var_u(zero, 3), Jet2::var_v(zero, 3));
    let y = v.scale(2.0);
    let z = &v.scale(0.0) + &(&(&u * &v) * &v).scale(3.0);
    let y1 = y.divide_by_v(1e-12).unwrap();
    let z1 = z.divide_by_v(1e-12).unwrap();
    assert_eq!(y1.value(), 2.0);
    assert_eq!(z1.coeff(1, 1).unwrap(), 3.0);
    assert!(u.divide_by_v(1e-12).is_err());
}

fn jet_strategy() -> impl Strategy<Value = Jet2> {
    proptest::collection::vec(-2.0f64..2.0, 15).prop_map(|c| Jet2::from_coeffs(BasePoint::new(0.1, -0.2), 4, c))
}

fn assert_same(a: &Jet2, b: &Jet2) -> Result<(), TestCaseError> {
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()), "{x} vs {y}");
    }
    Ok(())
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in jet_strategy(), b in jet_strategy(), c in jet_strategy()) {
        assert_same(&(&(&a * &b) * &c), &(&a * &(&b * &c)))?;
    }

    #[test]
    fn multiplication_distributes(a in jet_strategy(), b in jet_strategy(), c in jet_strategy()) {
        assert_same(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)))?;
    }

    #[test]
    fn division_inverts_multiplication(a in jet_strategy(), b in jet_strategy()) {
        let b = b.add_scalar(5.0);
        let q = (&a * &b).try_div(&b, 1e-300).unwrap();
        assert_same(&q, &a)?;
    }

    #[test]
    fn sine_and_cosine_are_unit(a in jet_strategy()) {
        let one = &(&a.sin() * &a.sin()) + &(&a.cos() * &a.cos());
        assert_same(&one, &Jet2::constant(a.base(), 4, 1.0))?;
    }
}
