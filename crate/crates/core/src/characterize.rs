//! Parabola characterization.
//!
//! In the frame at `P`, a curve with `U = T/2` at every scale satisfies
//!
//! ```text
//! f f'² = 4a (t f' − f)²
//! 2 f² f'' = f'² (t f' − f)
//! f'' = f'³ / (4√a f^{3/2})
//! ```
//!
//! whose solutions through the apex are the family
//! `f = (2√a c x + 1 − √(4√a c x + 1)) / (2c²)`, the open parabola
//! `a x² − 2√a c x y + c² y² − y = 0`.
//!
//! The classifier's main discriminator is the ratio `U_P(h)/T_P(h)` at
//! large `h`. As `h → 0` the ratio tends to `1/2` on every strictly convex
//! curve, so small scales carry no information; a parabola is exactly `1/2`
//! at every scale up to the edge of the domain.

use nalgebra::DMatrix;
use ode_solvers::{Dopri5, System, Vector2};
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::frame::{Frame, FrameJet};
use crate::geom::Point2;
use crate::triangle::{t_p, u_p};

/// `U_P(h)/T_P(h)`.
pub fn ratio_lambda(frame: &Frame, h: f64) -> Result<f64> {
    Ok(u_p(frame, h)? / t_p(frame, h)?)
}

/// `U = λ T^μ` fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub lambda: f64,
    pub mu: f64,
    pub rms: f64,
}

pub fn power_law_fit(frame: &Frame, hs: &[f64]) -> Result<PowerLawFit> {
    if hs.len() < 3 {
        return Err(Error::Precondition(format!(
            "power law fit needs at least 3 chords, got {}",
            hs.len()
        )));
    }
    let mut pts = Vec::with_capacity(hs.len());
    for &h in hs {
        pts.push((t_p(frame, h)?.ln(), u_p(frame, h)?.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateInput("all chords have the same area".into()));
    }
    let mu = sxy / sxx;
    let b = my - mu * mx;
    let rms = (pts.iter().map(|p| (p.1 - b - mu * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(PowerLawFit {
        lambda: b.exp(),
        mu,
        rms,
    })
}

fn probe(frame: &Frame, t: f64) -> Result<(f64, FrameJet)> {
    let a = frame.quadratic_coefficient()?;
    if t == 0.0 {
        return Err(Error::SingularAtApex { f: 0.0 });
    }
    Ok((a, frame.jet_at(t)?))
}

/// `f f'² − 4a (t f' − f)²` at offset `t`.
pub fn lemma6_residual(frame: &Frame, t: f64) -> Result<f64> {
    let (a, j) = probe(frame, t)?;
    let lever = t * j.f1 - j.f;
    Ok(j.f * j.f1 * j.f1 - 4.0 * a * lever * lever)
}

/// `2 f² f'' − f'² (t f' − f)` at offset `t`.
pub fn lemma7_residual(frame: &Frame, t: f64) -> Result<f64> {
    let (_, j) = probe(frame, t)?;
    Ok(2.0 * j.f * j.f * j.f2 - j.f1 * j.f1 * (t * j.f1 - j.f))
}

/// `f'' − |f'|³/(4√a f^{3/2})` at offset `t`; the absolute value extends the
/// equation to `t < 0`.
pub fn ode_residual(frame: &Frame, t: f64) -> Result<f64> {
    let (a, j) = probe(frame, t)?;
    if j.f.abs() < 1e-14 {
        return Err(Error::SingularAtApex { f: j.f });
    }
    if j.f < 0.0 {
        return Err(Error::Precondition(format!(
            "f({t}) = {} is negative",
            j.f
        )));
    }
    Ok(j.f2 - j.f1.abs().powi(3) / (4.0 * a.sqrt() * j.f * j.f.sqrt()))
}

/// The curve family solving the characterization ODE; `c = 0` is the
/// parabola `a x²`.
pub fn family_curve(a: f64, c: f64) -> Result<Curve> {
    if c == 0.0 {
        Curve::parabola(a)
    } else {
        Curve::family(a, c)
    }
}

/// Implicit conic `A x² + B xy + C y² + D x + E y + F = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConicFit {
    /// Unit-norm `[A, B, C, D, E, F]`.
    pub coeffs: [f64; 6],
    /// RMS algebraic residual over the fitted points.
    pub residual: f64,
    /// `B² − 4AC` of the normalized coefficients.
    pub discriminant: f64,
}

impl ConicFit {
    fn from_coeffs(mut c: [f64; 6]) -> ConicFit {
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut sign = (c[0] + c[2]).signum();
        if c[0] + c[2] == 0.0 {
            sign = c.iter().find(|v| **v != 0.0).map_or(1.0, |v| v.signum());
        }
        for v in &mut c {
            *v *= sign / norm;
        }
        ConicFit {
            coeffs: c,
            residual: 0.0,
            discriminant: c[1] * c[1] - 4.0 * c[0] * c[2],
        }
    }

    pub fn eval(&self, p: Point2) -> f64 {
        let [a, b, c, d, e, f] = self.coeffs;
        a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + f
    }
}

/// The exact conic of [`family_curve`].
pub fn conic_coefficients(a: f64, c: f64) -> Result<ConicFit> {
    family_curve(a, c)?;
    Ok(ConicFit::from_coeffs([
        a,
        -2.0 * a.sqrt() * c,
        c * c,
        0.0,
        -1.0,
        0.0,
    ]))
}

/// Least algebraic residual over unit coefficient vectors, computed on
/// centred and scaled points and mapped back.
pub fn fit_parabola_conic(points: &[Point2]) -> Result<ConicFit> {
    if points.len() < 6 {
        return Err(Error::DegenerateInput(format!(
            "conic fit needs at least 6 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(Error::DegenerateInput("non-finite point".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.x).sum::<f64>() / n;
    let my = points.iter().map(|p| p.y).sum::<f64>() / n;
    let spread = points
        .iter()
        .map(|p| (p.x - mx).hypot(p.y - my))
        .sum::<f64>()
        / n;
    if spread == 0.0 {
        return Err(Error::DegenerateInput("all points coincide".into()));
    }
    let s = std::f64::consts::SQRT_2 / spread;
    let design = DMatrix::from_fn(points.len(), 6, |i, j| {
        let x = s * (points[i].x - mx);
        let y = s * (points[i].y - my);
        [x * x, x * y, y * y, x, y, 1.0][j]
    });
    let svd = design.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let largest = svd.singular_values[order[5]];
    if svd.singular_values[order[1]] <= 1e-9 * largest {
        return Err(Error::DegenerateInput(
            "points do not determine a unique conic".into(),
        ));
    }
    let k = order[0];
    let [a, b, c, d, e, f] = [0, 1, 2, 3, 4, 5].map(|j| v_t[(k, j)]);
    let s2 = s * s;
    let coeffs = [
        a * s2,
        b * s2,
        c * s2,
        -2.0 * mx * s2 * a - my * s2 * b + s * d,
        -mx * s2 * b - 2.0 * my * s2 * c + s * e,
        s2 * (a * mx * mx + b * mx * my + c * my * my) - s * (d * mx + e * my) + f,
    ];
    let mut fit = ConicFit::from_coeffs(coeffs);
    fit.residual = (points.iter().map(|&p| fit.eval(p).powi(2)).sum::<f64>() / n).sqrt();
    Ok(fit)
}

/// Classifier tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub ratio: f64,
    pub conic: f64,
    pub discriminant: f64,
    pub residual: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            ratio: 1e-7,
            conic: 1e-8,
            discriminant: 1e-6,
            residual: 1e-7,
        }
    }
}

/// A channel fails outright beyond this multiple of its threshold.
pub const FAIL_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Parabola,
    NotParabola,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Marginal,
    Fail,
}

impl Status {
    pub fn grade(value: f64, threshold: f64) -> Status {
        if !value.is_finite() || value > FAIL_FACTOR * threshold {
            Status::Fail
        } else if value < threshold {
            Status::Pass
        } else {
            Status::Marginal
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub status: Status,
}

impl Channel {
    fn new(name: &'static str, value: f64, threshold: f64) -> Channel {
        Channel {
            name,
            value,
            threshold,
            status: Status::grade(value, threshold),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Evidence {
    /// Largest `|U/T − 1/2|` over all sample points and scales.
    pub max_ratio_deviation: Option<f64>,
    pub ratio_samples: usize,
    /// Where the largest deviation occurred, as `(x0, h)`.
    pub worst_ratio_at: Option<(f64, f64)>,
    pub conic: Option<ConicFit>,
    /// Largest absolute residuals over the probe offsets.
    pub lemma6: Option<f64>,
    pub lemma7: Option<f64>,
    pub ode: Option<f64>,
    pub residual_probes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub decision: Decision,
    pub evidence: Evidence,
    pub channels: Vec<Channel>,
}

impl Verdict {
    fn from_channels(evidence: Evidence, channels: Vec<Channel>) -> Verdict {
        let decision = if channels.iter().any(|c| c.status == Status::Fail) {
            Decision::NotParabola
        } else if !channels.is_empty() && channels.iter().all(|c| c.status == Status::Pass) {
            Decision::Parabola
        } else {
            Decision::Inconclusive
        };
        Verdict {
            decision,
            evidence,
            channels,
        }
    }
}

/// Five evenly spaced points across the middle half of `domain ∩ [−2, 2]`.
pub fn default_sample_points(curve: &Curve) -> Vec<f64> {
    let d = curve.domain();
    let (lo, hi) = (d.lo.max(-2.0), d.hi.min(2.0));
    let (mid, half) = (0.5 * (lo + hi), 0.25 * (hi - lo));
    (0..5).map(|k| mid - half + 0.5 * half * k as f64).collect()
}

/// Ten scales from 1 down to 1e−3; scales past the domain edge are skipped
/// during classification.
pub fn default_scales() -> Vec<f64> {
    (0..10).map(|k| 10f64.powf(-(k as f64) / 3.0)).collect()
}

const CONIC_SAMPLES: usize = 200;

/// Classify `curve` by the finite-scale ratio, a conic fit over the region
/// the chords touched, and the characterization residuals at probe offsets.
pub fn classify_curve(
    curve: &Curve,
    sample_points: &[f64],
    scales: &[f64],
    thresholds: &Thresholds,
) -> Result<Verdict> {
    if sample_points.is_empty() {
        return Err(Error::Precondition("no sample points".into()));
    }
    let (h_min, h_max) = scales
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &h| (lo.min(h), hi.max(h)));
    if !(h_min > 0.0) || h_max < 100.0 * h_min * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!(
            "scales must be positive and span two decades, got [{h_min}, {h_max}]"
        )));
    }

    let mut ev = Evidence::default();
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst = 0.0f64;
    let (mut r6, mut r7, mut rode) = (0.0f64, 0.0f64, 0.0f64);
    for &x0 in sample_points {
        let frame = Frame::new(curve, x0)?;
        x_lo = x_lo.min(x0);
        x_hi = x_hi.max(x0);
        for &h in scales {
            let chord = match frame.chord(h) {
                Ok(c) => c,
                Err(Error::ChordOutOfDomain { .. }) => continue,
                Err(e) => return Err(e),
            };
            let dev = match ratio_lambda(&frame, h) {
                Ok(r) => (r - 0.5).abs(),
                Err(Error::ParallelLines | Error::DegenerateSlope(_)) => continue,
                Err(e) => return Err(e),
            };
            ev.ratio_samples += 1;
            if !(dev <= worst) {
                worst = dev;
                ev.worst_ratio_at = Some((x0, h));
            }
            x_lo = x_lo.min(chord.left.x);
            x_hi = x_hi.max(chord.right.x);
        }
        if !frame.is_smooth() {
            continue;
        }
        let Some(probe_chord) = scales
            .iter()
            .filter_map(|&h| frame.chord(h).ok())
            .max_by(|a, b| a.length().total_cmp(&b.length()))
        else {
            continue;
        };
        let (s, t) = (probe_chord.s(), probe_chord.t());
        for u in [s, 0.5 * s, 0.5 * t, t] {
            r6 = r6.max(lemma6_residual(&frame, u)?.abs());
            r7 = r7.max(lemma7_residual(&frame, u)?.abs());
            rode = rode.max(ode_residual(&frame, u)?.abs());
        }
    }
    if ev.ratio_samples == 0 {
        return Err(Error::DegenerateInput(
            "no chord fits inside the domain at any scale".into(),
        ));
    }
    ev.max_ratio_deviation = Some(worst);

    let count = sample_points
        .iter()
        .filter(|&&x0| curve.is_smooth_at(x0))
        .count();
    ev.residual_probes = 4 * count;
    if count > 0 {
        ev.lemma6 = Some(r6);
        ev.lemma7 = Some(r7);
        ev.ode = Some(rode);
    }

    let points = sample_graph(curve, x_lo, x_hi)?;
    let conic = fit_parabola_conic(&points)?;
    ev.conic = Some(conic);

    let mut channels = vec![Channel::new("ratio", worst, thresholds.ratio)];
    channels.extend(conic_channels(&conic, thresholds));
    if let (Some(a), Some(b), Some(c)) = (ev.lemma6, ev.lemma7, ev.ode) {
        channels.push(Channel::new("lemma6", a, thresholds.residual));
        channels.push(Channel::new("lemma7", b, thresholds.residual));
        channels.push(Channel::new("ode", c, thresholds.residual));
    }
    Ok(Verdict::from_channels(ev, channels))
}

fn conic_channels(conic: &ConicFit, thresholds: &Thresholds) -> [Channel; 2] {
    [
        Channel::new("conic_residual", conic.residual, thresholds.conic),
        Channel::new("discriminant", conic.discriminant.abs(), thresholds.discriminant),
    ]
}

fn sample_graph(curve: &Curve, lo: f64, hi: f64) -> Result<Vec<Point2>> {
    let step = (hi - lo) / (CONIC_SAMPLES - 1) as f64;
    (0..CONIC_SAMPLES)
        .map(|k| {
            let x = if k == CONIC_SAMPLES - 1 { hi } else { lo + step * k as f64 };
            curve.point(x)
        })
        .collect()
}

/// Uses only the conic channels.
pub fn classify_points(points: &[Point2], thresholds: &Thresholds) -> Result<Verdict> {
    let conic = fit_parabola_conic(points)?;
    let evidence = Evidence {
        conic: Some(conic),
        ..Evidence::default()
    };
    Ok(Verdict::from_channels(
        evidence,
        conic_channels(&conic, thresholds).to_vec(),
    ))
}

/// Integration of the characterization ODE against the closed-form family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeCheck {
    pub a: f64,
    pub c: f64,
    pub t0: f64,
    pub t_end: f64,
    /// `(x, integrated f, closed-form f)` at the output grid.
    pub samples: Vec<(f64, f64, f64)>,
    pub max_error: f64,
    /// Spread of `(√a t − √f)/f` along the trajectory; constant on the family.
    pub c_spread: f64,
    pub steps: u32,
}

struct Characterization {
    root_a: f64,
}

impl System<f64, Vector2<f64>> for Characterization {
    fn system(&self, _x: f64, y: &Vector2<f64>, dy: &mut Vector2<f64>) {
        let (f, f1) = (y[0], y[1]);
        dy[0] = f1;
        dy[1] = f1 * f1 * f1 / (4.0 * self.root_a * f * f.sqrt());
    }
}

pub const ODE_RTOL: f64 = 1e-10;
pub const ODE_ATOL: f64 = 1e-12;

/// Integrate from `t0 > 0` (away from the singular apex) with initial data
/// from the family and compare the trajectory against the closed form.
pub fn ode_check(a: f64, c: f64, t0: f64, t_end: f64, dx: f64) -> Result<OdeCheck> {
    let curve = family_curve(a, c)?;
    if !(t0 > 0.0 && t_end > t0 && dx > 0.0) {
        return Err(Error::Precondition(format!(
            "need 0 < t0 < t_end and dx > 0, got t0 = {t0}, t_end = {t_end}, dx = {dx}"
        )));
    }
    if !curve.contains(t_end) {
        return Err(Error::OutOfDomain {
            x: t_end,
            lo: curve.domain().lo,
            hi: curve.domain().hi,
        });
    }
    let jet = curve.jet(t0)?;
    if jet.v < 1e-14 {
        return Err(Error::SingularAtApex { f: jet.v });
    }
    let system = Characterization { root_a: a.sqrt() };
    let mut solver = Dopri5::new(
        system,
        t0,
        t_end,
        dx,
        Vector2::new(jet.v, jet.d1),
        ODE_RTOL,
        ODE_ATOL,
    );
    let stats = solver
        .integrate()
        .map_err(|e| Error::NoConvergence(format!("ODE integration failed: {e:?}")))?;
    let (xs, ys) = solver.results().get();
    let mut samples = Vec::with_capacity(xs.len());
    let mut max_error = 0.0f64;
    let (mut c_lo, mut c_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (&x, y) in xs.iter().zip(ys) {
        let exact = curve.eval(x)?;
        max_error = max_error.max((y[0] - exact).abs());
        let recovered = (a.sqrt() * x - y[0].sqrt()) / y[0];
        c_lo = c_lo.min(recovered);
        c_hi = c_hi.max(recovered);
        samples.push((x, y[0], exact));
    }
    Ok(OdeCheck {
        a,
        c,
        t0,
        t_end,
        samples,
        max_error,
        c_spread: c_hi - c_lo,
        steps: stats.accepted_steps,
    })
}
