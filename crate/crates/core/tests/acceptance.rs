//! One line per acceptance criterion. Run with `cargo test --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trilab::characterize::{
    classify_curve, conic_coefficients, default_sample_points, default_scales, family_curve,
    lemma6_residual, lemma7_residual, ode_check, ode_residual, Decision, Thresholds,
};
use trilab::extrapolate::{estimate, h_sequence};
use trilab::limits::*;
use trilab::triangle::{chord_triangle, t_p, triangle_from_contacts, u_p, Contact};
use trilab::{Curve, Frame, Point2};

type Outcome = Result<String, String>;

struct Report {
    lines: Vec<String>,
    failed: usize,
}

impl Report {
    fn run(&mut self, id: u32, name: &str, budget: Option<Duration>, body: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let mut outcome = body();
        let took = start.elapsed();
        if let (Ok(detail), Some(limit)) = (&outcome, budget) {
            if took > limit {
                outcome = Err(format!("{detail}; took {took:?}, budget {limit:?}"));
            }
        }
        let line = match &outcome {
            Ok(detail) => format!("PASS [{id:>2}] {name}: {detail} ({took:.1?})"),
            Err(detail) => format!("FAIL [{id:>2}] {name}: {detail} ({took:.1?})"),
        };
        if outcome.is_err() {
            self.failed += 1;
        }
        println!("{line}");
        self.lines.push(line);
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: trilab::Error) -> String {
    e.to_string()
}

fn theorem_curves() -> Vec<(Curve, [f64; 3])> {
    vec![
        (Curve::circle(1.0).unwrap(), [-0.5, 0.0, 0.4]),
        (Curve::ellipse(2.0, 1.0).unwrap(), [-1.0, 0.0, 0.8]),
        (Curve::expshift(), [-1.0, 0.0, 1.0]),
    ]
}

fn limit_hs() -> Vec<f64> {
    h_sequence(0.1, 0.5, 16).unwrap()
}

fn parabola_ratio() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let hs: Vec<f64> = (0..=8).map(|k| 10f64.powf(-4.0 + 0.5 * k as f64)).collect();
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        let curve = Curve::parabola(a).unwrap();
        for _ in 0..20 {
            let x0 = rng.random_range(-0.5..0.5) / a;
            let frame = Frame::new(&curve, x0).map_err(err)?;
            for &h in &hs {
                let r = u_p(&frame, h).map_err(err)? / t_p(&frame, h).map_err(err)?;
                worst = worst.max((r - 0.5).abs());
            }
        }
    }
    check(worst < 1e-9, format!("max |U/T - 1/2| = {worst:.2e} over 540 chords"))
}

fn theorem_one() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for (curve, points) in theorem_curves() {
        for x0 in points {
            let frame = Frame::new(&curve, x0).map_err(err)?;
            let target = Targets::at(&frame).map_err(err)?;
            let t = t_limit(&frame, &limit_hs()).map_err(err)?;
            let u = u_limit(&frame, &limit_hs()).map_err(err)?;
            worst.0 = worst.0.max((t.value - target.t).abs());
            worst.1 = worst.1.max((u.value - target.u).abs());
        }
    }
    check(
        worst.0 < 1e-4 && worst.1 < 1e-4,
        format!("max error T {:.2e}, U {:.2e}", worst.0, worst.1),
    )
}

fn chord_and_alpha() -> Outcome {
    let (mut abs, mut rel) = (0.0f64, 0.0f64);
    for (curve, points) in theorem_curves() {
        for x0 in points {
            let frame = Frame::new(&curve, x0).map_err(err)?;
            let target = Targets::at(&frame).map_err(err)?;
            let hs = limit_hs();
            abs = abs.max((chord_limit(&frame, &hs).map_err(err)?.value - target.chord).abs());
            abs = abs.max((alpha_limit(&frame, &hs).map_err(err)?.value - target.alpha).abs());
            for (est, t) in [
                (beta_limit(&frame, &hs).map_err(err)?, target.beta),
                (delta_limit(&frame, &hs).map_err(err)?, target.delta),
                (eta_limit(&frame, &hs).map_err(err)?, target.eta),
                (gamma_limit(&frame, &hs).map_err(err)?, target.gamma),
            ] {
                rel = rel.max(((est.value - t) / t).abs());
            }
        }
    }
    check(
        abs < 1e-4 && rel < 1e-3,
        format!("L and alpha max abs error {abs:.2e}; beta, delta, eta, gamma max rel error {rel:.2e}"),
    )
}

fn krawczyk() -> Outcome {
    let mut worst = 0.0f64;
    let cases = [
        (Curve::ellipse(2.0, 1.0).unwrap(), [-1.0, 0.0, 0.8]),
        (Curve::expshift(), [-1.0, 0.0, 1.0]),
    ];
    for (curve, points) in &cases {
        for &x0 in points {
            let est = ratio_limit_tu(curve, x0, &limit_hs()).map_err(err)?;
            worst = worst.max((est.value - 2.0).abs());
        }
    }
    let contact = |theta: f64| Contact {
        point: Point2::new(theta.cos(), theta.sin()),
        direction: Point2::new(-theta.sin(), theta.cos()),
    };
    let third = std::f64::consts::TAU / 3.0;
    let start = std::f64::consts::FRAC_PI_2;
    let tri = triangle_from_contacts(contact(start), contact(start + third), contact(start + 2.0 * third))
        .map_err(err)?;
    let control = tri.t / tri.u;
    check(
        worst < 1e-3 && (control - 0.25).abs() < 1e-9,
        format!("max |T/U - 2| = {worst:.2e}; equilateral control T/U = {control:.12}"),
    )
}

fn example_nine() -> Outcome {
    let curve = Curve::piecewise(1.0, 4.0).unwrap();
    let frame = Frame::new(&curve, 0.0).map_err(err)?;
    let mut worst = 0.0f64;
    for h in [0.01, 0.04, 0.16, 0.64] {
        let (t, u) = (t_p(&frame, h).map_err(err)?, u_p(&frame, h).map_err(err)?);
        worst = worst.max((u - 0.5 * t).abs() / t);
    }
    let verdict = classify_curve(
        &curve,
        &default_sample_points(&curve),
        &default_scales(),
        &Thresholds::default(),
    )
    .map_err(err)?;
    check(
        worst < 1e-12 && verdict.decision == Decision::NotParabola,
        format!("max |U - T/2|/T = {worst:.2e}; verdict {:?}", verdict.decision),
    )
}

fn family() -> Outcome {
    let (mut ratio, mut conic, mut third) = (0.0f64, 0.0f64, 0.0f64);
    for a in [1.0, 2.0] {
        for c in [-1.0, 0.5, 1.0] {
            let curve = family_curve(a, c).map_err(err)?;
            let d = curve.domain();
            let (lo, hi) = (d.lo.max(-2.0), d.hi.min(2.0));
            let (lo, hi) = (lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo));
            for k in 0..10 {
                let frame = Frame::new(&curve, lo + (hi - lo) * k as f64 / 9.0).map_err(err)?;
                for h in [1e-3, 1e-2] {
                    let r = u_p(&frame, h).map_err(err)? / t_p(&frame, h).map_err(err)?;
                    ratio = ratio.max((r - 0.5).abs());
                }
            }
            let fit = conic_coefficients(a, c).map_err(err)?;
            let (lo, hi) = (d.lo.max(-3.0), d.hi.min(3.0));
            for k in 0..200 {
                let x = lo + (hi - lo) * (k as f64 + 0.5) / 200.0;
                conic = conic.max(fit.eval(curve.point(x).map_err(err)?).abs());
            }
            let h: f64 = 1e-3;
            let f2 = |x: f64| curve.second_derivative(x);
            let fd3 = (f2(h).map_err(err)? - f2(-h).map_err(err)?) / (2.0 * h);
            let exact = -12.0 * a.sqrt() * a * c;
            third = third.max(((fd3 - exact) / exact).abs());
        }
    }
    check(
        ratio < 1e-9 && conic < 1e-10 && third < 1e-3,
        format!("ratio dev {ratio:.2e}; conic residual {conic:.2e}; f''' rel error {third:.2e}"),
    )
}

fn residuals() -> Outcome {
    let mut worst = 0.0f64;
    let exact = [
        Curve::parabola(1.0).unwrap(),
        Curve::parabola(2.5).unwrap(),
        Curve::family(1.0, 1.0).unwrap(),
        Curve::family(2.0, -1.0).unwrap(),
        Curve::family(1.0, 0.5).unwrap(),
    ];
    for curve in &exact {
        for x0 in [0.0, 0.05] {
            let frame = Frame::new(curve, x0).map_err(err)?;
            for t in [-0.1, -0.05, 0.05, 0.1] {
                worst = worst
                    .max(lemma6_residual(&frame, t).map_err(err)?.abs())
                    .max(lemma7_residual(&frame, t).map_err(err)?.abs())
                    .max(ode_residual(&frame, t).map_err(err)?.abs());
            }
        }
    }
    let frame = Frame::new(&Curve::circle(1.0).unwrap(), 0.0).map_err(err)?;
    let got = [
        lemma6_residual(&frame, 0.5).map_err(err)?,
        lemma7_residual(&frame, 0.5).map_err(err)?,
        ode_residual(&frame, 0.5).map_err(err)?,
    ];
    let hand = [-3.206e-3, 3.703e-3, 0.1521];
    let circle = got
        .iter()
        .zip(hand)
        .map(|(g, h)| (g - h).abs())
        .fold(0.0, f64::max);
    check(
        worst < 1e-8 && circle < 1e-4,
        format!(
            "parabola/family max |residual| {worst:.2e}; circle ({:.4e}, {:.4e}, {:.4}) off by {circle:.1e}",
            got[0], got[1], got[2]
        ),
    )
}

fn oracles() -> Outcome {
    let curves = [
        Curve::parabola(1.0).unwrap(),
        Curve::family(1.0, 1.0).unwrap(),
        Curve::circle(1.0).unwrap(),
        Curve::circle(3.0).unwrap(),
        Curve::ellipse(2.0, 1.0).unwrap(),
        Curve::ellipse(1.0, 3.0).unwrap(),
        Curve::expshift(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut n, mut attempts, mut worst) = (0, 0, 0.0f64);
    while n < 1000 && attempts < 20_000 {
        attempts += 1;
        let curve = &curves[rng.random_range(0..curves.len())];
        let d = curve.domain();
        let (lo, hi) = (d.lo.max(-2.0), d.hi.min(2.0));
        let x0 = rng.random_range(lo + 0.15 * (hi - lo)..hi - 0.15 * (hi - lo));
        let h = 10f64.powf(rng.random_range(-5.0..-0.5));
        let frame = Frame::new(curve, x0).map_err(err)?;
        let Ok(tri) = chord_triangle(&frame, h) else { continue };
        let Some(formula) = tri.u_frame else { continue };
        worst = worst.max((tri.u - formula).abs() / tri.u);
        n += 1;
    }
    if n < 1000 {
        return Err(format!("only {n} valid configurations"));
    }

    let fractions = h_sequence(0.25, 0.5, 16).unwrap();
    let mut edge = 0.0f64;
    let cases = [
        (Curve::parabola(1.0).unwrap(), 0.0, 1.0),
        (Curve::circle(1.0).unwrap(), 0.0, 0.5),
        (Curve::circle(1.0).unwrap(), 0.3, -0.4),
        (Curve::ellipse(2.0, 1.0).unwrap(), 0.5, -0.7),
        (Curve::expshift(), 0.2, 0.6),
    ];
    for (curve, x0, t) in &cases {
        let frame = Frame::new(curve, *x0).map_err(err)?;
        let lim = degenerate_triangle_limits(&frame, *t, &fractions).map_err(err)?;
        for l in [&lim.t_at_apex, &lim.u_at_apex, &lim.t_at_contact, &lim.u_at_contact] {
            edge = edge.max(l.error());
        }
    }
    check(
        worst < 1e-9 && edge < 1e-4,
        format!("U routes max rel diff {worst:.2e} over {n} cases; edge limits max error {edge:.2e}"),
    )
}

fn ode() -> Outcome {
    let run = ode_check(1.0, 1.0, 0.5, 3.0, 0.05).map_err(err)?;
    check(
        run.max_error < 1e-8,
        format!("max |f - closed form| = {:.2e} in {} steps", run.max_error, run.steps),
    )
}

fn curvature() -> Outcome {
    let frame = Frame::new(&Curve::circle(1.0).unwrap(), 0.0).map_err(err)?;
    let mut exact = 0.0f64;
    for h in limit_hs() {
        exact = exact.max((kappa_from_chord(&frame, h).map_err(err)? - 2.0 / (2.0 - h)).abs());
    }
    let mut lim = 0.0f64;
    for est in [
        estimate(&limit_hs(), |h| kappa_from_chord(&frame, h)),
        estimate(&limit_hs(), |h| kappa_from_t(&frame, h)),
        estimate(&limit_hs(), |h| kappa_from_u(&frame, h)),
    ] {
        lim = lim.max((est.map_err(err)?.value - 1.0).abs());
    }
    check(
        exact < 1e-10 && lim < 1e-3,
        format!("chord estimator vs 2/(2-h) {exact:.2e}; limits off by at most {lim:.2e}"),
    )
}

#[test]
fn acceptance_criteria() {
    let mut r = Report {
        lines: Vec::new(),
        failed: 0,
    };
    let s = Duration::from_secs;
    r.run(1, "parabola ratio exactness", Some(s(1)), parabola_ratio);
    r.run(2, "contact and tangent triangle limits", Some(s(5)), theorem_one);
    r.run(3, "chord length and alpha decomposition limits", None, chord_and_alpha);
    r.run(4, "shrinking triple ratio", None, krawczyk);
    r.run(5, "ratio without regularity", None, example_nine);
    r.run(6, "closed-form family", None, family);
    r.run(7, "residual discrimination", None, residuals);
    r.run(8, "oracle cross-validation", None, oracles);
    r.run(9, "ODE trajectory", None, ode);
    r.run(10, "curvature estimators", None, curvature);
    assert_eq!(r.failed, 0, "\n{}", r.lines.join("\n"));
}
