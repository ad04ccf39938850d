use proptest::prelude::*;
use trilab::dsl::{eval_dual, parse_curve_spec, parse_expression, BinOp, Expr, Func};
use trilab::Error;

const SPECS: &[&str] = &[
    "parabola(a=1)",
    "parabola(a=0.25)",
    "family(a=1,c=0.5)",
    "family(a=2,c=-1)",
    "circle(r=1)",
    "ellipse(p=2,q=1)",
    "expshift",
    "piecewise(a=1,b=4)",
    "expr(x^2 + 0.1*x^4)",
    "expr(cosh(x) - 1)",
    "expr(-x^2 + 2*x*x)",
];

#[test]
fn catalog_specs_round_trip() {
    for spec in SPECS {
        let curve = parse_curve_spec(spec).unwrap();
        let again = parse_curve_spec(&curve.to_string()).unwrap();
        assert_eq!(curve, again, "{spec} -> {curve}");
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::X),
        (0.1f64..3.0).prop_map(Expr::Num),
        (1u8..4).prop_map(|k| Expr::Num(k as f64)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Add, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Sub, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Mul, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Div, a, b)),
            (inner.clone(), 1u8..4)
                .prop_map(|(a, k)| Expr::bin(BinOp::Pow, a, Expr::Num(k as f64))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner, prop::sample::select(Func::ALL.to_vec()))
                .prop_map(|(a, f)| Expr::Call(f, Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn display_reparses_to_the_same_tree(e in arb_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_expression(&text).unwrap(), e);
    }

    #[test]
    fn dual_matches_finite_differences(e in arb_expr(), x in -2.0f64..2.0) {
        let h = 1e-5;
        let (Ok((v, d1, d2)), Ok(lo), Ok(hi)) =
            (eval_dual(&e, x), eval_dual(&e, x - h), eval_dual(&e, x + h)) else {
            return Ok(());
        };
        let scale = v.abs().max(d1.abs()).max(d2.abs()).max(1.0);
        // stay clear of poles and blow-ups where differences are meaningless
        prop_assume!(scale < 1e4);
        prop_assume!([lo.0, lo.1, hi.0, hi.1].iter().all(|u| u.abs() < 1e4));
        let fd1 = (hi.0 - lo.0) / (2.0 * h);
        let fd2 = (hi.1 - lo.1) / (2.0 * h);
        let near = |a: f64, b: f64| (a - b).abs() <= 1e-6 * a.abs().max(b.abs()).max(1.0) * scale;
        prop_assume!((hi.2 - lo.2).abs() < 1e-2 * scale);
        prop_assert!(near(d1, fd1), "{} at {}: {} vs {}", e, x, d1, fd1);
        prop_assert!(near(d2, fd2), "{} at {}: {} vs {}", e, x, d2, fd2);
    }

    #[test]
    fn mutated_input_fails_cleanly(
        spec in prop::sample::select(SPECS.to_vec()),
        pos in 0usize..40,
        tok in prop::sample::select(vec!["(", ")", ",", "=", "^", "*", "+", "x", "1.5", "e", "sin", "", "##"]),
        delete in any::<bool>(),
    ) {
        let mut text = spec.to_string();
        let at = pos.min(text.len());
        if delete && at < text.len() {
            text.remove(at);
        } else {
            text.insert_str(at, tok);
        }
        match parse_curve_spec(&text) {
            Ok(curve) => {
                // anything accepted must describe itself back to the same curve
                let again = parse_curve_spec(&curve.to_string()).unwrap();
                prop_assert_eq!(curve, again);
            }
            Err(Error::Syntax { offset, .. }) => prop_assert!(offset <= text.len()),
            Err(Error::InvalidParameter { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error for {:?}: {}", text, e),
        }
    }
}

#[test]
fn precedence_rules() {
    let neg = parse_expression("-x^2").unwrap();
    assert_eq!(neg.eval(3.0).unwrap(), -9.0);
    let right = parse_expression("2^3^2").unwrap();
    assert_eq!(right.eval(0.0).unwrap(), 512.0);
    let mixed = parse_expression("1 - 2 * x / 4").unwrap();
    assert_eq!(mixed.eval(2.0).unwrap(), 0.0);
}

#[test]
fn domain_errors_surface_at_evaluation() {
    let e = parse_expression("sqrt(x)").unwrap();
    assert!(matches!(e.eval(-1.0), Err(Error::Domain { .. })));
    let e = parse_expression("log(x)").unwrap();
    assert!(matches!(e.eval(0.0), Err(Error::Domain { .. })));
    let e = parse_expression("1/x").unwrap();
    assert!(matches!(e.eval(0.0), Err(Error::Domain { .. })));
}
