use frontal::dsl::{parse, parse_with, Bindings, Expr, Var};
use frontal::jet::BasePoint;
use frontal::NumericPolicy;
use proptest::prelude::*;

#[test]
fn power_tree() {
    let e = parse("v^2").unwrap();
    assert_eq!(e, Expr::Pow(Box::new(Expr::Var(Var::V)), 2));
}

#[test]
fn unclosed_call_reports_column() {
    let err = parse("sin(u").unwrap_err();
    assert_eq!(err.offset, 6);
    assert!(err.expected.iter().any(|s| s == ")"), "{:?}", err.expected);
}

#[test]
fn t_is_not_a_surface_variable() {
    assert!(parse_with("u + t", &[Var::U, Var::V]).is_err());
}

#[test]
fn linear_jet_at_shifted_base() {
    let j = parse("u").unwrap().eval_jet(BasePoint::new(2.0, 0.0), 2, &NumericPolicy::default()).unwrap();
    assert_eq!(j.value(), 2.0);
    assert_eq!(j.coeff(1, 0).unwrap(), 1.0);
    assert_eq!(j.coeff(2, 0).unwrap(), 0.0);
}

#[test]
fn square_jet_at_origin() {
    let j = parse("v^2").unwrap().eval_jet(BasePoint::new(0.0, 0.0), 3, &NumericPolicy::default()).unwrap();
    for i in 0..=3 {
        for k in 0..=3 - i {
            let want = if (i, k) == (0, 2) { 1.0 } else { 0.0 };
            assert_eq!(j.coeff(i, k).unwrap(), want);
        }
    }
}

#[test]
fn jet_matches_finite_differences() {
    let e = parse("u^2 + u*v^3").unwrap();
    let j = e.eval_jet(BasePoint::new(0.5, 0.2), 3, &NumericPolicy::default()).unwrap();
    let g = |u: f64, v: f64| e.eval(Bindings::uv(u, v)).unwrap();
    let h = 1e-5;
    assert!((j.value() - g(0.5, 0.2)).abs() < 1e-14);
    let du = (g(0.5 + h, 0.2) - g(0.5 - h, 0.2)) / (2.0 * h);
    let dv = (g(0.5, 0.2 + h) - g(0.5, 0.2 - h)) / (2.0 * h);
    assert!((j.partial(1, 0).unwrap() - du).abs() < 1e-8);
    assert!((j.partial(0, 1).unwrap() - dv).abs() < 1e-8);
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-5.0f64..5.0).prop_map(|x| Expr::Num((x * 8.0).round() / 8.0)),
        Just(Expr::Var(Var::U)),
        Just(Expr::Var(Var::V)),
        Just(Expr::Pi),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), 0i32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            inner.prop_map(|a| Expr::Neg(Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_round_trips(e in expr_strategy()) {
        let text = e.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
    }
}
