//! Limit estimation from geometrically shrinking samples.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// The last samples agree exactly; no acceleration needed.
    Exact,
    Aitken,
    /// Acceleration was unsafe; the last sample is reported.
    LastSample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// `(scale, value)` pairs sorted by decreasing scale.
    pub samples: Vec<(f64, f64)>,
    pub value: f64,
    /// Change between the last two accelerated values (or the last raw step).
    pub residual: f64,
    pub converged: bool,
    pub method: Method,
}

impl LimitEstimate {
    pub fn last_sample(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.1)
    }
}

/// Geometric sequence `h0·ratioᵏ`, `k = 0..n`.
pub fn h_sequence(h0: f64, ratio: f64, n: usize) -> Result<Vec<f64>> {
    if !(h0 > 0.0 && h0.is_finite()) || !(ratio > 0.0 && ratio < 1.0) || n < 2 {
        return Err(Error::Precondition(format!(
            "h sequence needs h0 > 0, 0 < ratio < 1, n >= 2 (got {h0}, {ratio}, {n})"
        )));
    }
    Ok((0..n).map(|k| h0 * ratio.powi(k as i32)).collect())
}

fn aitken(x0: f64, x1: f64, x2: f64) -> Option<f64> {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let denom = d2 - d1;
    if denom == 0.0 || d1 == 0.0 {
        return None;
    }
    // contraction ratio must be clearly below one for the correction to be stable
    let ratio = d2 / d1;
    if !(ratio.abs() < 0.95) {
        return None;
    }
    let v = x2 - d2 * d2 / denom;
    v.is_finite().then_some(v)
}

/// Relative size of the step below which successive samples are roundoff.
const NOISE_FLOOR: f64 = 1e-13;

/// Aitken Δ² on the last three samples, falling back to the last sample
/// when the differences do not contract. Samples must already be ordered by
/// decreasing scale.
pub fn extrapolate(samples: Vec<(f64, f64)>) -> LimitEstimate {
    let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let n = values.len();
    let last = values.last().copied().unwrap_or(f64::NAN);
    let fallback = |samples, residual, converged| LimitEstimate {
        samples,
        value: last,
        residual,
        converged,
        method: Method::LastSample,
    };
    if n < 3 || values.iter().any(|v| !v.is_finite()) {
        let residual = if n >= 2 {
            (values[n - 1] - values[n - 2]).abs()
        } else {
            f64::NAN
        };
        return fallback(samples, residual, false);
    }
    let (x0, x1, x2) = (values[n - 3], values[n - 2], values[n - 1]);
    let (d1, d2) = (x1 - x0, x2 - x1);
    if d1 == 0.0 && d2 == 0.0 {
        return LimitEstimate {
            samples,
            value: x2,
            residual: 0.0,
            converged: true,
            method: Method::Exact,
        };
    }
    let floor = NOISE_FLOOR * x2.abs().max(1e-300);
    if d1.abs() <= floor && d2.abs() <= floor {
        return fallback(samples, d2.abs(), true);
    }
    match aitken(x0, x1, x2) {
        Some(value) => {
            let residual = if n >= 4 {
                aitken(values[n - 4], x0, x1).map_or(d2.abs(), |prev| (value - prev).abs())
            } else {
                d2.abs()
            };
            LimitEstimate {
                samples,
                value,
                residual,
                converged: d2.abs() < d1.abs(),
                method: Method::Aitken,
            }
        }
        None => fallback(samples, d2.abs(), d2.abs() <= floor),
    }
}

/// Sample `f` at each scale and extrapolate.
pub fn estimate<F>(scales: &[f64], mut f: F) -> Result<LimitEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut samples = Vec::with_capacity(scales.len());
    for &h in scales {
        samples.push((h, f(h)?));
    }
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(extrapolate(samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        assert_eq!(h_sequence(0.25, 0.5, 3).unwrap(), vec![0.25, 0.125, 0.0625]);
        assert_eq!(h_sequence(1.0, 0.1, 2).unwrap(), vec![1.0, 0.1]);
        assert!(h_sequence(1.0, 0.5, 0).is_err());
        assert!(h_sequence(1.0, 1.5, 4).is_err());
        assert!(h_sequence(-1.0, 0.5, 4).is_err());
    }

    #[test]
    fn aitken_removes_geometric_error() {
        let hs = h_sequence(0.5, 0.5, 8).unwrap();
        let est = estimate(&hs, |h| Ok(3.0 + 2.0 * h)).unwrap();
        assert_eq!(est.method, Method::Aitken);
        assert!((est.value - 3.0).abs() < 1e-14);
        assert!(est.converged);

        let est = estimate(&hs, |h| Ok(1.0 + h + 5.0 * h * h)).unwrap();
        assert!((est.value - 1.0).abs() < 1e-3, "{}", est.value);
        assert!((est.value - 1.0).abs() < (est.last_sample() - 1.0).abs());
    }

    #[test]
    fn exact_and_divergent_sequences() {
        let hs = h_sequence(0.5, 0.5, 5).unwrap();
        let est = estimate(&hs, |_| Ok(2.0)).unwrap();
        assert_eq!((est.value, est.method, est.converged), (2.0, Method::Exact, true));

        let est = estimate(&hs, |h| Ok(1.0 / h)).unwrap();
        assert_eq!(est.method, Method::LastSample);
        assert!(!est.converged);

        let est = estimate(&[0.5, 0.25], |h| Ok(h)).unwrap();
        assert!(!est.converged);
    }

    #[test]
    fn samples_sorted_by_decreasing_scale() {
        let est = estimate(&[0.1, 0.4, 0.2], |h| Ok(h)).unwrap();
        let scales: Vec<f64> = est.samples.iter().map(|s| s.0).collect();
        assert_eq!(scales, vec![0.4, 0.2, 0.1]);
    }
}
