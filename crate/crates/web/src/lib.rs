//! Browser bindings. Every export takes plain numbers and a curve spec and
//! returns a JSON string; errors surface as thrown JS errors.

use serde::Serialize;
use trilab::characterize::{classify_curve, default_sample_points, default_scales, Thresholds, Verdict};
use trilab::dsl::parse_curve_spec;
use trilab::extrapolate::LimitEstimate;
use trilab::limits::{self, Targets};
use trilab::triangle::{chord_triangle, TrianglePair};
use trilab::{Curve, Frame, Point2};
use wasm_bindgen::prelude::*;

const POLYLINE_POINTS: usize = 400;

#[derive(Debug, Serialize)]
pub struct TriangleView {
    pub curve: String,
    pub polyline: Vec<Point2>,
    pub pair: TrianglePair,
    pub ratio: f64,
    pub curvature: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct LimitView {
    pub curve: String,
    pub h: Vec<f64>,
    pub t: LimitEstimate,
    pub u: LimitEstimate,
    pub ratio: LimitEstimate,
    pub targets: Option<Targets>,
}

#[derive(Debug, Serialize)]
pub struct ClassifyView {
    pub curve: String,
    pub verdict: Verdict,
}

fn load(spec: &str) -> Result<Curve, String> {
    parse_curve_spec(spec).map_err(|e| e.to_string())
}

/// Curve samples over the domain clipped to `[x0 - span, x0 + span]`.
fn polyline(curve: &Curve, x0: f64, span: f64) -> Vec<Point2> {
    let d = curve.domain();
    let lo = d.lo.max(x0 - span);
    let hi = d.hi.min(x0 + span);
    (0..=POLYLINE_POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / POLYLINE_POINTS as f64)
        .filter_map(|x| curve.point(x).ok())
        .filter(|p| p.is_finite())
        .collect()
}

pub fn triangle_view(spec: &str, x0: f64, h: f64) -> Result<TriangleView, String> {
    let curve = load(spec)?;
    let frame = Frame::new(&curve, x0).map_err(|e| e.to_string())?;
    let pair = chord_triangle(&frame, h).map_err(|e| e.to_string())?;
    let reach = [pair.a1, pair.a2, pair.b, pair.b1, pair.b2]
        .iter()
        .map(|p| (p.x - x0).abs())
        .fold(0.5, f64::max);
    Ok(TriangleView {
        curve: curve.to_string(),
        polyline: polyline(&curve, x0, 1.5 * reach),
        ratio: pair.ratio(),
        curvature: frame.curvature().ok(),
        pair,
    })
}

pub fn limit_view(spec: &str, x0: f64) -> Result<LimitView, String> {
    let curve = load(spec)?;
    let frame = Frame::new(&curve, x0).map_err(|e| e.to_string())?;
    let hs = limits::default_scales(&frame);
    let err = |e: trilab::Error| e.to_string();
    Ok(LimitView {
        curve: curve.to_string(),
        t: limits::t_limit(&frame, &hs).map_err(err)?,
        u: limits::u_limit(&frame, &hs).map_err(err)?,
        ratio: limits::ratio_limit(&frame, &hs).map_err(err)?,
        targets: Targets::at(&frame).ok(),
        h: hs,
    })
}

pub fn classify_view(spec: &str) -> Result<ClassifyView, String> {
    let curve = load(spec)?;
    let verdict = classify_curve(
        &curve,
        &default_sample_points(&curve),
        &default_scales(),
        &Thresholds::default(),
    )
    .map_err(|e| e.to_string())?;
    Ok(ClassifyView {
        curve: curve.to_string(),
        verdict,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// Chord at height `h` over `x0` with both triangles and a curve polyline.
#[wasm_bindgen]
pub fn triangles(spec: &str, x0: f64, h: f64) -> Result<String, JsError> {
    to_js(triangle_view(spec, x0, h))
}

/// Extrapolated `T/h^1.5`, `U/h^1.5` and `U/T` at `x0` with their targets.
#[wasm_bindgen]
pub fn limit_study(spec: &str, x0: f64) -> Result<String, JsError> {
    to_js(limit_view(spec, x0))
}

/// Parabola verdict with default sample points, scales and thresholds.
#[wasm_bindgen]
pub fn classify(spec: &str) -> Result<String, JsError> {
    to_js(classify_view(spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use trilab::characterize::Decision;

    #[test]
    fn parabola_triangles_have_ratio_one_half() {
        let v = triangle_view("parabola(a=1)", 0.3, 0.2).unwrap();
        assert!((v.ratio - 0.5).abs() < 1e-12);
        assert!(v.polyline.len() > 100);
        assert!(serde_json::to_string(&v).unwrap().contains("\"ratio\""));
    }

    #[test]
    fn polyline_stays_in_the_domain() {
        let v = triangle_view("circle(r=1)", 0.0, 0.3).unwrap();
        assert!(v.polyline.iter().all(|p| p.x.abs() < 1.0));
    }

    #[test]
    fn circle_limits_hit_their_targets() {
        let v = limit_view("circle(r=1)", 0.0).unwrap();
        let targets = v.targets.unwrap();
        assert!((v.t.value - targets.t).abs() < 1e-6);
        assert!((v.u.value - targets.u).abs() < 1e-6);
        assert!((v.ratio.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn verdicts() {
        assert_eq!(classify_view("family(a=2,c=1)").unwrap().verdict.decision, Decision::Parabola);
        assert_eq!(classify_view("expshift").unwrap().verdict.decision, Decision::NotParabola);
    }

    #[test]
    fn errors_are_messages() {
        assert!(triangle_view("circle(r=1", 0.0, 0.1).unwrap_err().contains("syntax"));
        assert!(triangle_view("circle(r=1)", 0.0, 5.0).is_err());
    }
}
