//! Numerical limits of chord and triangle quantities as the scale shrinks.
//!
//! With `κ` the curvature at the base point and `a = κ/2`:
//!
//! | quantity                      | limit          |
//! |-------------------------------|----------------|
//! | `L/√h`                        | `2√2/√κ`       |
//! | `T/(h√h)`                     | `√2/√κ`        |
//! | `U/(h√h)`                     | `√2/(2√κ)`     |
//! | `α = √h (f'(t) − f'(s))/(−f'(s) f'(t))` | `√2/√κ` |
//! | `β = (f'(t) − f'(s))/(t − s)` | `κ`            |
//! | `γ = −f'(s) f'(t)/(√h (t − s))` | `2a√a`       |
//! | `δ = f'(s) f'(t)/(s t)`       | `κ²`           |
//! | `η = −s t/(√h (t − s))`       | `1/(2√a)`      |
//! | `T/U` on shrinking triples    | `2`            |
//!
//! All of these expand in integer powers of `h`, so Aitken acceleration on a
//! geometric `h` sequence is effective.

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::extrapolate::{estimate, h_sequence, LimitEstimate};
use crate::frame::Frame;
use crate::triangle::{chord_triangle, t_p, tangent_triangle, triangle_from_contacts, u_p, Contact};

/// Smallest scale used by the default sequences.
pub const H_FLOOR: f64 = 1e-10;

/// Offset ratio between the two sides of the asymmetric triples.
pub const TRIPLE_ASYMMETRY: f64 = 0.7;

/// Default scales for a frame: `h0 = 0.25·probe radius` (an unbounded side
/// counts as radius 1), ratio 1/2, 16 steps, floored at [`H_FLOOR`].
pub fn default_scales(frame: &Frame) -> Vec<f64> {
    let (l, r) = frame.probe_radius();
    let radius = l.min(r).min(1.0);
    let mut hs = h_sequence(0.25 * radius, 0.5, 16).expect("valid default sequence");
    hs.retain(|&h| h >= H_FLOOR);
    hs
}

/// The chord auxiliaries at one height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaDecomposition {
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
}

pub fn alpha_decomposition(frame: &Frame, h: f64) -> Result<AlphaDecomposition> {
    let chord = frame.chord(h)?;
    let (s, t) = (chord.s(), chord.t());
    let (fs, ft) = (chord.left.f1, chord.right.f1);
    if !(chord.left.is_graph && chord.right.is_graph) || !(fs < 0.0 && ft > 0.0) {
        return Err(Error::DegenerateSlope(format!(
            "chord slopes {fs}, {ft} do not straddle zero"
        )));
    }
    if fs.abs() < 1e-14 || ft.abs() < 1e-14 {
        return Err(Error::DegenerateSlope(format!(
            "chord slopes {fs}, {ft} are too small"
        )));
    }
    let rh = h.sqrt();
    let len = t - s;
    Ok(AlphaDecomposition {
        h,
        alpha: rh * (ft - fs) / (-fs * ft),
        beta: (ft - fs) / len,
        gamma: -fs * ft / (rh * len),
        delta: fs * ft / (s * t),
        eta: -s * t / (rh * len),
    })
}

/// Analytic limit values at a base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Targets {
    pub curvature: f64,
    pub chord: f64,
    pub t: f64,
    pub u: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
}

impl Targets {
    pub fn for_curvature(kappa: f64) -> Targets {
        let a = 0.5 * kappa;
        let rk = kappa.sqrt();
        Targets {
            curvature: kappa,
            chord: 2.0 * std::f64::consts::SQRT_2 / rk,
            t: std::f64::consts::SQRT_2 / rk,
            u: std::f64::consts::SQRT_2 / (2.0 * rk),
            alpha: std::f64::consts::SQRT_2 / rk,
            beta: kappa,
            gamma: 2.0 * a * a.sqrt(),
            delta: kappa * kappa,
            eta: 1.0 / (2.0 * a.sqrt()),
        }
    }

    pub fn at(frame: &Frame) -> Result<Targets> {
        frame.curvature().map(Targets::for_curvature)
    }
}

pub fn chord_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    estimate(hs, |h| Ok(frame.chord_length(h)? / h.sqrt()))
}

pub fn t_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    estimate(hs, |h| Ok(t_p(frame, h)? / (h * h.sqrt())))
}

pub fn u_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    estimate(hs, |h| Ok(u_p(frame, h)? / (h * h.sqrt())))
}

/// `U_P/T_P` as `h → 0`; tends to 1/2 on every strictly convex curve.
pub fn ratio_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    estimate(hs, |h| {
        let tri = chord_triangle(frame, h)?;
        Ok(tri.u / tri.t)
    })
}

fn aux_limit<F>(frame: &Frame, hs: &[f64], pick: F) -> Result<LimitEstimate>
where
    F: Fn(&AlphaDecomposition) -> f64,
{
    estimate(hs, |h| Ok(pick(&alpha_decomposition(frame, h)?)))
}

pub fn alpha_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    aux_limit(frame, hs, |d| d.alpha)
}

pub fn beta_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    aux_limit(frame, hs, |d| d.beta)
}

pub fn gamma_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    aux_limit(frame, hs, |d| d.gamma)
}

pub fn delta_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    aux_limit(frame, hs, |d| d.delta)
}

pub fn eta_limit(frame: &Frame, hs: &[f64]) -> Result<LimitEstimate> {
    aux_limit(frame, hs, |d| d.eta)
}

/// `T/U` on the triples `(x0, x0 + h, x0 − 0.7h)` as `h` shrinks.
pub fn ratio_limit_tu(curve: &Curve, x0: f64, scales: &[f64]) -> Result<LimitEstimate> {
    estimate(scales, |h| {
        let tri = tangent_triangle(curve, x0, x0 + h, x0 - TRIPLE_ASYMMETRY * h)?;
        Ok(tri.t / tri.u)
    })
}

/// Curvature from the chord length, `8h/L²`.
pub fn kappa_from_chord(frame: &Frame, h: f64) -> Result<f64> {
    let len = frame.chord_length(h)?;
    Ok(8.0 * h / (len * len))
}

/// Curvature from the contact triangle, `2h³/T²`.
pub fn kappa_from_t(frame: &Frame, h: f64) -> Result<f64> {
    let t = t_p(frame, h)?;
    Ok(2.0 * h * h * h / (t * t))
}

/// Curvature from the tangent triangle, `h³/(2U²)`.
pub fn kappa_from_u(frame: &Frame, h: f64) -> Result<f64> {
    let u = u_p(frame, h)?;
    Ok(h * h * h / (2.0 * u * u))
}

/// A limit estimate with the closed-form value it should reach.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckedLimit {
    pub estimate: LimitEstimate,
    pub target: f64,
}

impl CheckedLimit {
    pub fn error(&self) -> f64 {
        (self.estimate.value - self.target).abs()
    }
}

/// Limits of the triangles `(0, s, t)` in the base frame as the middle
/// contact `s` collapses onto the apex or onto `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegenerateLimits {
    pub t: f64,
    /// `ε T(s,t)/s → f(t)/2` as `s → 0`.
    pub t_at_apex: CheckedLimit,
    /// `2ε U(s,t)/s → 2a (t f'(t) − f(t))²/f'(t)²` as `s → 0`.
    pub u_at_apex: CheckedLimit,
    /// `ε T(s,t)/(s − t) → (f(t) − t f'(t))/2` as `s → t`.
    pub t_at_contact: CheckedLimit,
    /// `2ε U(s,t)/(s − t) → −f(t)² f''(t)/f'(t)²` as `s → t`.
    pub u_at_contact: CheckedLimit,
}

/// `fractions` controls how `s` approaches its target: `s = t·q` toward the
/// apex and `s = t(1 − q)` toward `t`, which keeps `0 < s < t` or `t < s < 0`.
pub fn degenerate_triangle_limits(
    frame: &Frame,
    t: f64,
    fractions: &[f64],
) -> Result<DegenerateLimits> {
    let a = frame.quadratic_coefficient()?;
    let jt = frame.jet_at(t)?;
    if jt.f == 0.0 || jt.f1.abs() < 1e-14 {
        return Err(Error::DegenerateSlope(format!(
            "offset {t} has f = {}, f' = {}",
            jt.f, jt.f1
        )));
    }
    let curve = frame.curve();
    let apex = Contact::on_curve(curve, frame.x0())?;
    let far = Contact::on_curve(curve, jt.x)?;
    let eps = t.signum();
    let areas = |s: f64| -> Result<(f64, f64)> {
        let mid = Contact::on_curve(curve, frame.param_at(s)?)?;
        let tri = triangle_from_contacts(apex, mid, far)?;
        Ok((tri.t, tri.u))
    };

    let (f, f1, f2) = (jt.f, jt.f1, jt.f2);
    let lever = t * f1 - f;
    let checked = |estimate, target| CheckedLimit { estimate, target };
    Ok(DegenerateLimits {
        t,
        t_at_apex: checked(
            estimate(fractions, |q| {
                let s = t * q;
                Ok(eps * areas(s)?.0 / s)
            })?,
            0.5 * f,
        ),
        u_at_apex: checked(
            estimate(fractions, |q| {
                let s = t * q;
                Ok(2.0 * eps * areas(s)?.1 / s)
            })?,
            2.0 * a * lever * lever / (f1 * f1),
        ),
        t_at_contact: checked(
            estimate(fractions, |q| {
                let s = t * (1.0 - q);
                Ok(eps * areas(s)?.0 / (s - t))
            })?,
            0.5 * (f - t * f1),
        ),
        u_at_contact: checked(
            estimate(fractions, |q| {
                let s = t * (1.0 - q);
                Ok(2.0 * eps * areas(s)?.1 / (s - t))
            })?,
            -f * f * f2 / (f1 * f1),
        ),
    })
}
