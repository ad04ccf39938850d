//! Scalar root finding on brackets.

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 200;

/// Bisect `g` on `[lo, hi]` where `g(lo)` and `g(hi)` have opposite signs
/// (zero counts as either). Runs until the bracket cannot be split further
/// and returns the endpoint with the smaller `|g|`.
pub fn bisect<G>(mut g: G, mut lo: f64, mut hi: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut g_lo = g(lo)?;
    let mut g_hi = g(hi)?;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Precondition(format!(
            "bracket [{lo}, {hi}] does not change sign"
        )));
    }
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let g_mid = g(mid)?;
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    Ok(if g_lo.abs() <= g_hi.abs() { lo } else { hi })
}

/// Newton's method kept inside a sign-changing bracket; any step that would
/// leave the bracket, or fails to halve the bracket, is replaced by bisection.
/// `g` returns the value and derivative.
pub fn safeguarded_newton<G>(mut g: G, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<(f64, f64)>,
{
    let (g_lo, _) = g(lo)?;
    let (g_hi, _) = g(hi)?;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Precondition(format!(
            "bracket [{lo}, {hi}] does not change sign"
        )));
    }
    // orient so that g(lo) < 0 < g(hi)
    if g_lo > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut x = 0.5 * (lo + hi);
    let mut last_width = (hi - lo).abs();
    for _ in 0..MAX_ITERATIONS {
        let (gx, dgx) = g(x)?;
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let width = (hi - lo).abs();
        if width <= x_tol * (1.0 + x.abs()) {
            return Ok(x);
        }
        let newton = x - gx / dgx;
        let inside = newton.is_finite()
            && newton > lo.min(hi)
            && newton < lo.max(hi)
            && width < 0.5 * last_width + f64::EPSILON;
        let next = if inside { newton } else { 0.5 * (lo + hi) };
        last_width = width;
        if (next - x).abs() <= x_tol * (1.0 + x.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence(format!(
        "safeguarded Newton did not converge in {MAX_ITERATIONS} iterations near {x}"
    )))
}
