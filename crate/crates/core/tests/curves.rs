use proptest::prelude::*;
use trilab::Curve;

fn catalog() -> Vec<Curve> {
    vec![
        Curve::parabola(1.0).unwrap(),
        Curve::parabola(0.3).unwrap(),
        Curve::family(1.0, 1.0).unwrap(),
        Curve::family(2.0, -1.0).unwrap(),
        Curve::family(1.0, 0.5).unwrap(),
        Curve::circle(1.0).unwrap(),
        Curve::circle(2.5).unwrap(),
        Curve::ellipse(2.0, 1.0).unwrap(),
        Curve::expshift(),
        Curve::piecewise(1.0, 4.0).unwrap(),
    ]
}

/// A point at relative position `q ∈ (0, 1)` of `domain ∩ [−3, 3]`, kept off
/// the boundary and off non-smooth points by `margin`.
fn interior(curve: &Curve, q: f64, margin: f64) -> Option<f64> {
    let d = curve.domain();
    let (lo, hi) = (d.lo.max(-3.0) + margin, d.hi.min(3.0) - margin);
    let x = lo + q * (hi - lo);
    let near_kink = curve.non_c2_points().iter().any(|k| (x - k).abs() < margin);
    (!near_kink).then_some(x)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn derivatives_match_finite_differences(idx in 0usize..10, q in 0.0f64..1.0) {
        let curve = &catalog()[idx];
        let Some(x) = interior(curve, q, 0.05) else { return Ok(()) };
        let h = 1e-6;
        let fd1 = (curve.eval(x + h).unwrap() - curve.eval(x - h).unwrap()) / (2.0 * h);
        let fd2 = (curve.slope(x + h).unwrap() - curve.slope(x - h).unwrap()) / (2.0 * h);
        prop_assert!(close(curve.slope(x).unwrap(), fd1, 1e-6), "{curve} at {x}");
        prop_assert!(close(curve.second_derivative(x).unwrap(), fd2, 1e-6), "{curve} at {x}");
    }

    #[test]
    fn flat_family_is_the_parabola(a in 0.1f64..5.0, x in -50.0f64..50.0) {
        let fam = Curve::family(a, 0.0).unwrap();
        let par = Curve::parabola(a).unwrap();
        let (u, v) = (fam.eval(x).unwrap(), par.eval(x).unwrap());
        prop_assert!((u - v).abs() <= 1e-14 * v.max(1.0));
    }
}

#[test]
fn family_third_derivative_at_apex() {
    for a in [1.0, 2.0] {
        for c in [-1.0, 0.5, 1.0] {
            let curve = Curve::family(a, c).unwrap();
            let h: f64 = 1e-3;
            let f2 = |x: f64| curve.second_derivative(x).unwrap();
            let fd3 = (f2(h) - f2(-h)) / (2.0 * h);
            let exact = -12.0 * a.sqrt() * a * c;
            assert!(((fd3 - exact) / exact).abs() < 1e-3, "{curve}: {fd3} vs {exact}");
        }
    }
}

#[test]
fn strictly_convex_on_a_grid() {
    for curve in catalog().iter().filter(|c| c.is_strictly_convex()) {
        let d = curve.domain();
        let (lo, hi) = (d.lo.max(-10.0), d.hi.min(10.0));
        for k in 1..=1000 {
            let x = lo + (hi - lo) * k as f64 / 1001.0;
            let f2 = curve.second_derivative(x).unwrap();
            assert!(f2 > 0.0, "{curve} at {x}: {f2}");
        }
    }
}

#[test]
fn domains_are_enforced() {
    let circle = Curve::circle(1.0).unwrap();
    assert!(circle.eval(1.0).is_err());
    assert!(circle.eval(-1.5).is_err());
    let fam = Curve::family(1.0, 1.0).unwrap();
    assert!(fam.eval(-0.25).is_err());
    assert!(fam.eval(-0.2499).is_ok());
}
