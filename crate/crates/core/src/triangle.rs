//! Contact triangle `T` and tangent triangle `U`.
//!
//! The returned `U` always comes from intersecting the three tangent lines.
//! The closed forms in the canonical frame are carried alongside as an
//! independent check; they lose accuracy when the endpoint slopes are tiny.

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::frame::{Frame, FrameJet};
use crate::geom::{contact_triangle_area, line_intersection, signed_area2, Line, Point2};

/// A point of contact and the tangent direction there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub point: Point2,
    pub direction: Point2,
}

impl Contact {
    pub fn on_curve(curve: &Curve, x: f64) -> Result<Contact> {
        let jet = curve.jet(x)?;
        Ok(Contact {
            point: Point2::new(x, jet.v),
            direction: Point2::new(1.0, jet.d1),
        })
    }
}

/// Both triangles with all six construction points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrianglePair {
    pub a: Point2,
    pub a1: Point2,
    pub a2: Point2,
    /// Tangents at `a1` and `a2`.
    pub b: Point2,
    /// Tangents at `a` and `a1`.
    pub b1: Point2,
    /// Tangents at `a` and `a2`.
    pub b2: Point2,
    pub t: f64,
    pub u: f64,
    /// `U` from the canonical-frame closed form, when it applies.
    pub u_frame: Option<f64>,
    /// `+1` when `(a, a1, a2)` is counter-clockwise, else `-1`.
    pub epsilon: i8,
}

impl TrianglePair {
    pub fn ratio(&self) -> f64 {
        self.u / self.t
    }
}

/// Generic construction from three contacts: intersect the tangent lines
/// pairwise and take shoelace areas.
///
/// The intersections are computed in coordinates centred at `a` with its
/// tangent as the horizontal axis. Small triangles there have well-scaled
/// line offsets, whereas world coordinates lose about `1/scale` extra digits.
pub fn triangle_from_contacts(a: Contact, a1: Contact, a2: Contact) -> Result<TrianglePair> {
    let len = a.direction.norm();
    if !(len > 0.0) {
        return Err(Error::DegenerateInput("zero tangent direction".into()));
    }
    let tau = a.direction * (1.0 / len);
    let nu = Point2::new(-tau.y, tau.x);
    let to_local = |p: Point2| Point2::new(p.dot(tau), p.dot(nu));
    let to_world = |p: Point2| a.point + tau * p.x + nu * p.y;
    let local = |c: Contact| -> Result<(Point2, Line)> {
        let p = to_local(c.point - a.point);
        Ok((p, Line::through(p, to_local(c.direction))?))
    };

    let l = Line::through(Point2::ORIGIN, Point2::new(1.0, 0.0))?;
    let (p1, l1) = local(a1)?;
    let (p2, l2) = local(a2)?;
    let b = line_intersection(&l1, &l2)?;
    let b1 = line_intersection(&l, &l1)?;
    let b2 = line_intersection(&l, &l2)?;

    let area2 = signed_area2(Point2::ORIGIN, p1, p2);
    Ok(TrianglePair {
        a: a.point,
        a1: a1.point,
        a2: a2.point,
        b: to_world(b),
        b1: to_world(b1),
        b2: to_world(b2),
        t: 0.5 * area2.abs(),
        u: contact_triangle_area(b, b1, b2),
        u_frame: None,
        epsilon: if area2 >= 0.0 { 1 } else { -1 },
    })
}

/// `2εU` from the base-point frame closed form for contacts at frame
/// offsets `s` and `t` (with `A` at the origin).
pub fn frame_u_signed2(s: &FrameJet, t: &FrameJet) -> Result<f64> {
    let (fs, ft) = (s.f1, t.f1);
    let denom = fs * ft * (ft - fs);
    if fs.abs() < 1e-14 || ft.abs() < 1e-14 || !(denom.abs() > 0.0) {
        return Err(Error::DegenerateSlope(format!(
            "frame slopes {fs} and {ft} at the contact points"
        )));
    }
    let num = (t.u - s.u) * ft * fs + s.f * ft - fs * t.f;
    Ok(num * num / denom)
}

/// `2εT` in the base-point frame.
pub fn frame_t_signed2(s: &FrameJet, t: &FrameJet) -> f64 {
    s.u * t.f - t.u * s.f
}

/// Triangles at curve parameters `x_a`, `x_1`, `x_2`.
pub fn tangent_triangle(curve: &Curve, x_a: f64, x_1: f64, x_2: f64) -> Result<TrianglePair> {
    if x_a == x_1 || x_a == x_2 || x_1 == x_2 {
        return Err(Error::Precondition(format!(
            "contact parameters must be distinct, got {x_a}, {x_1}, {x_2}"
        )));
    }
    let mut pair = triangle_from_contacts(
        Contact::on_curve(curve, x_a)?,
        Contact::on_curve(curve, x_1)?,
        Contact::on_curve(curve, x_2)?,
    )?;
    if let Ok(frame) = Frame::new(curve, x_a) {
        let s = frame.jet_at_x(x_1)?;
        let t = frame.jet_at_x(x_2)?;
        if s.is_graph && t.is_graph {
            pair.u_frame = frame_u_signed2(&s, &t).ok().map(|v| 0.5 * v.abs());
        }
    }
    Ok(pair)
}

/// Contact-triangle area of the chord configuration, `h·L/2`.
pub fn t_p(frame: &Frame, h: f64) -> Result<f64> {
    Ok(0.5 * h * frame.chord_length(h)?)
}

/// Triangles of the chord configuration: apex at the base point and the two
/// chord endpoints at height `h`.
pub fn chord_triangle(frame: &Frame, h: f64) -> Result<TrianglePair> {
    let chord = frame.chord(h)?;
    let curve = frame.curve();
    let mut pair = triangle_from_contacts(
        Contact::on_curve(curve, frame.x0())?,
        Contact::on_curve(curve, chord.left.x)?,
        Contact::on_curve(curve, chord.right.x)?,
    )?;
    pair.t = 0.5 * h * chord.length();
    pair.u_frame = u_p_formula(frame, h).ok();
    Ok(pair)
}

/// Tangent-triangle area of the chord configuration by line intersection.
pub fn u_p(frame: &Frame, h: f64) -> Result<f64> {
    chord_triangle(frame, h).map(|p| p.u)
}

/// Tangent-triangle area of the chord configuration from the endpoint slopes:
/// `2U = h²(f'(t) − f'(s))/(−f'(s)f'(t)) − 2hL + (−f'(s)f'(t))/(f'(t) − f'(s))·L²`.
pub fn u_p_formula(frame: &Frame, h: f64) -> Result<f64> {
    let chord = frame.chord(h)?;
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
    let len = chord.length();
    let spread = ft - fs;
    let prod = -fs * ft;
    Ok(0.5 * (h * h * spread / prod - 2.0 * h * len + prod / spread * len * len))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn archimedes_triple() {
        let p = Curve::parabola(1.0).unwrap();
        let tri = tangent_triangle(&p, 0.0, -1.0, 1.0).unwrap();
        assert!(rel(tri.t, 1.0) < 1e-15);
        assert!(rel(tri.u, 0.5) < 1e-15);
        assert!(rel(tri.u_frame.unwrap(), 0.5) < 1e-15);
        assert_eq!(tri.b, Point2::new(0.0, -1.0));
        assert_eq!(tri.epsilon, -1);
    }

    #[test]
    fn full_circle_equilateral() {
        // unit circle centred at (0, 1); contacts 120° apart
        let contact = |deg: f64| {
            let th = deg.to_radians();
            Contact {
                point: Point2::new(th.cos(), 1.0 + th.sin()),
                direction: Point2::new(-th.sin(), th.cos()),
            }
        };
        let tri = triangle_from_contacts(contact(-90.0), contact(30.0), contact(150.0)).unwrap();
        let s3 = 3f64.sqrt();
        assert!(rel(tri.t, 3.0 * s3 / 4.0) < 1e-14);
        assert!(rel(tri.u, 3.0 * s3) < 1e-14);
        assert!((tri.t / tri.u - 0.25).abs() < 1e-14);
    }

    #[test]
    fn repeated_parameter_is_rejected() {
        let c = Curve::expshift();
        assert!(matches!(
            tangent_triangle(&c, 0.0, 0.5, 0.5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chord_configuration_values() {
        let p = Frame::new(&Curve::parabola(1.0).unwrap(), 0.0).unwrap();
        assert!(rel(t_p(&p, 0.01).unwrap(), 0.001) < 1e-14);
        assert!(rel(u_p(&p, 0.01).unwrap(), 0.0005) < 1e-14);
        assert!(rel(u_p_formula(&p, 0.01).unwrap(), 0.0005) < 1e-13);

        let pw = Frame::new(&Curve::piecewise(1.0, 4.0).unwrap(), 0.0).unwrap();
        assert!(rel(t_p(&pw, 0.04).unwrap(), 0.006) < 1e-14);
        assert!(rel(u_p(&pw, 0.04).unwrap(), 0.003) < 1e-13);

        let c = Frame::new(&Curve::circle(1.0).unwrap(), 0.0).unwrap();
        assert!(rel(t_p(&c, 0.5).unwrap(), 0.25 * 2.0 * 0.75f64.sqrt()) < 1e-13);
        let expected = (30f64).to_radians().tan();
        assert!(rel(u_p(&c, 0.5).unwrap(), expected) < 1e-13);
        assert!(rel(u_p_formula(&c, 0.5).unwrap(), expected) < 1e-12);
    }

    #[test]
    fn construction_points_lie_on_tangents() {
        let curve = Curve::ellipse(2.0, 1.0).unwrap();
        let (xa, x1, x2) = (0.3, -0.9, 1.2);
        let tri = tangent_triangle(&curve, xa, x1, x2).unwrap();
        let l = curve.tangent_line(xa).unwrap();
        let l1 = curve.tangent_line(x1).unwrap();
        let l2 = curve.tangent_line(x2).unwrap();
        for (pt, a, b) in [(tri.b, &l1, &l2), (tri.b1, &l, &l1), (tri.b2, &l, &l2)] {
            assert!(a.residual(pt).abs() < 1e-10 && b.residual(pt).abs() < 1e-10);
        }
        let shoelace = contact_triangle_area(tri.a, tri.a1, tri.a2);
        assert!(rel(tri.t, shoelace) < 1e-12);
        assert!(rel(tri.u, tri.u_frame.unwrap()) < 1e-9);
    }

    #[test]
    fn epsilon_follows_ordering() {
        // 0 < s < t gives +1, t < s < 0 gives -1 in the frame at the origin
        let p = Curve::parabola(1.0).unwrap();
        assert_eq!(tangent_triangle(&p, 0.0, 0.3, 0.7).unwrap().epsilon, 1);
        assert_eq!(tangent_triangle(&p, 0.0, -0.3, -0.7).unwrap().epsilon, -1);
        let fr = Frame::new(&p, 0.0).unwrap();
        let s = fr.jet_at_x(0.3).unwrap();
        let t = fr.jet_at_x(0.7).unwrap();
        assert!(frame_t_signed2(&s, &t) > 0.0 && frame_u_signed2(&s, &t).unwrap() > 0.0);
    }

    #[test]
    fn b_matches_chord_frame_coordinates() {
        // x0 = (t f'(t) − s f'(s))/(f'(t) − f'(s)),
        // y0 = ((t − s) f'(t) f'(s) + h (f'(t) − f'(s)))/(f'(t) − f'(s))
        let fr = Frame::new(&Curve::expshift(), 0.2).unwrap();
        let h = 0.05;
        let ch = fr.chord(h).unwrap();
        let tri = chord_triangle(&fr, h).unwrap();
        let (s, t, fs, ft) = (ch.s(), ch.t(), ch.left.f1, ch.right.f1);
        let x0 = (t * ft - s * fs) / (ft - fs);
        let y0 = ((t - s) * ft * fs + h * (ft - fs)) / (ft - fs);
        let b = fr.to_frame(tri.b);
        assert!((b.x - x0).abs() < 1e-12 && (b.y - y0).abs() < 1e-12);
        assert!(y0 < 0.0);
    }
}
