//! Canonical frame at a base point and the parallel-chord construction.
//!
//! In the frame at `P = (x0, f(x0))` the tangent at `P` is the horizontal
//! axis and the convex side points up, so the curve is locally the graph of
//! a function with value and slope zero at the origin and second derivative
//! equal to the curvature at `P`.
//!
//! A curve point `Q(x)` has tangential coordinate `u(x) = (Q − P)·T` and
//! height `v(x) = (Q − P)·N`. Chords are solved in the curve parameter `x`,
//! where `v` is strictly convex with its minimum at `x0`, so each side is a
//! monotone one-dimensional problem regardless of how far the tangent turns.

use crate::curve::Curve;
use crate::error::{Error, Result, Side};
use crate::geom::Point2;
use crate::roots;

/// Relative root tolerance for chord endpoints.
pub const CHORD_TOL: f64 = 1e-13;

/// Local data of the curve seen from a frame, at curve parameter `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameJet {
    pub x: f64,
    /// Tangential coordinate.
    pub u: f64,
    /// Height above the base tangent.
    pub f: f64,
    /// `df/du`.
    pub f1: f64,
    /// `d²f/du²`.
    pub f2: f64,
    /// `du/dx > 0`: the curve is still a graph over the base tangent here.
    pub is_graph: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    curve: Curve,
    x0: f64,
    base: Point2,
    slope0: f64,
    /// `√(1 + slope0²)`
    norm: f64,
    curvature: f64,
    smooth: bool,
    probe_left: f64,
    probe_right: f64,
}

enum Probe {
    Short,
    Crossed,
    Invalid,
}

/// A chord parallel to the base tangent at height `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub h: f64,
    pub left: FrameJet,
    pub right: FrameJet,
}

impl Chord {
    pub fn s(&self) -> f64 {
        self.left.u
    }

    pub fn t(&self) -> f64 {
        self.right.u
    }

    pub fn length(&self) -> f64 {
        self.right.u - self.left.u
    }
}

impl Frame {
    /// Build the frame at `x0`. At a point where the curve is only C¹ the
    /// frame is still built (both one-sided second derivatives must be
    /// positive); [`Frame::is_smooth`] reports it and curvature-based
    /// quantities return `NonSmoothPoint`.
    pub fn new(curve: &Curve, x0: f64) -> Result<Frame> {
        let jet = curve.jet(x0)?;
        let norm = (1.0 + jet.d1 * jet.d1).sqrt();
        let curvature = jet.d2 / (norm * norm * norm);
        let smooth = curve.is_smooth_at(x0);
        if !(curvature > 0.0) {
            return Err(Error::NonConvexAt { x: x0, curvature });
        }
        if !smooth {
            let left = curve.jet(x0.next_down())?.d2;
            if !(left > 0.0) {
                return Err(Error::NonConvexAt {
                    x: x0,
                    curvature: left / (norm * norm * norm),
                });
            }
        }
        let domain = curve.domain();
        Ok(Frame {
            curve: curve.clone(),
            x0,
            base: Point2::new(x0, jet.v),
            slope0: jet.d1,
            norm,
            curvature,
            smooth,
            probe_left: 0.5 * (x0 - domain.lo),
            probe_right: 0.5 * (domain.hi - x0),
        })
    }

    /// Override the probe radius (in the curve parameter) on both sides.
    pub fn with_probe_radius(mut self, radius: f64) -> Frame {
        let domain = self.curve.domain();
        self.probe_left = radius.min(self.x0 - domain.lo);
        self.probe_right = radius.min(domain.hi - self.x0);
        self
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn base(&self) -> Point2 {
        self.base
    }

    pub fn tangent(&self) -> Point2 {
        Point2::new(1.0 / self.norm, self.slope0 / self.norm)
    }

    pub fn normal(&self) -> Point2 {
        Point2::new(-self.slope0 / self.norm, 1.0 / self.norm)
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    /// Probe radius in the curve parameter, `(left, right)`.
    pub fn probe_radius(&self) -> (f64, f64) {
        (self.probe_left, self.probe_right)
    }

    /// Curvature at the base point.
    pub fn curvature(&self) -> Result<f64> {
        if self.smooth {
            Ok(self.curvature)
        } else {
            Err(Error::NonSmoothPoint { x: self.x0 })
        }
    }

    /// `a` in the local expansion `a u² + O(|u|³)`, i.e. half the curvature.
    pub fn quadratic_coefficient(&self) -> Result<f64> {
        self.curvature().map(|k| 0.5 * k)
    }

    pub fn to_world(&self, u: f64, v: f64) -> Point2 {
        self.base + self.tangent() * u + self.normal() * v
    }

    pub fn to_frame(&self, p: Point2) -> Point2 {
        let d = p - self.base;
        Point2::new(d.dot(self.tangent()), d.dot(self.normal()))
    }

    /// `(u, v, du/dx)` at curve parameter `x`.
    fn coords(&self, x: f64) -> Result<(f64, f64, f64)> {
        let jet = self.curve.jet(x)?;
        let dx = x - self.x0;
        let df = jet.v - self.base.y;
        Ok((
            (dx + self.slope0 * df) / self.norm,
            (df - self.slope0 * dx) / self.norm,
            (1.0 + self.slope0 * jet.d1) / self.norm,
        ))
    }

    pub fn jet_at_x(&self, x: f64) -> Result<FrameJet> {
        let jet = self.curve.jet(x)?;
        let dx = x - self.x0;
        let df = jet.v - self.base.y;
        let m0 = self.slope0;
        let denom = 1.0 + m0 * jet.d1;
        Ok(FrameJet {
            x,
            u: (dx + m0 * df) / self.norm,
            f: (df - m0 * dx) / self.norm,
            f1: (jet.d1 - m0) / denom,
            f2: jet.d2 * (self.norm / denom).powi(3),
            is_graph: denom > 0.0,
        })
    }

    /// Walk outward from `x0` by doubling steps, then close in on the domain
    /// boundary or the first invalid point, until `probe` reports a crossing. Returns
    /// the last short point and the first crossed point.
    fn bracket_outward<P>(&self, dir: f64, dx0: f64, mut probe: P) -> Result<Option<(f64, f64)>>
    where
        P: FnMut(f64) -> Result<Probe>,
    {
        let domain = self.curve.domain();
        let mut boundary = if dir > 0.0 { domain.hi } else { domain.lo };
        let mut near = self.x0;
        let mut dx = dx0;
        for _ in 0..1100 {
            let far = self.x0 + dir * dx;
            if !domain.contains(far) {
                break;
            }
            match probe(far)? {
                Probe::Crossed => return Ok(Some((near, far))),
                Probe::Invalid => {
                    boundary = far;
                    break;
                }
                Probe::Short => {}
            }
            near = far;
            dx *= 2.0;
        }
        // halve the gap to the boundary (or to the first invalid point)
        for _ in 0..64 {
            let far = near + 0.5 * (boundary - near);
            if far == near || far == boundary || !domain.contains(far) {
                break;
            }
            match probe(far)? {
                Probe::Crossed => return Ok(Some((near, far))),
                Probe::Invalid => boundary = far,
                Probe::Short => near = far,
            }
        }
        Ok(None)
    }

    /// Curve parameter whose tangential coordinate is `u`, found by
    /// safeguarded Newton on the monotone part of `u(x)`.
    pub fn param_at(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(self.x0);
        }
        if !u.is_finite() {
            return Err(Error::OutOfFrameRange { u });
        }
        let dir = u.signum();
        let bracket = self.bracket_outward(dir, u.abs() / self.norm, |x| {
            let (ux, _, du) = self.coords(x)?;
            Ok(if du <= 0.0 {
                Probe::Invalid
            } else if (ux - u) * dir >= 0.0 {
                Probe::Crossed
            } else {
                Probe::Short
            })
        })?;
        let (_, far) = bracket.ok_or(Error::OutOfFrameRange { u })?;
        roots::safeguarded_newton(
            |x| {
                let (ux, _, du) = self.coords(x)?;
                Ok((ux - u, du))
            },
            self.x0,
            far,
            1e-16,
        )
    }

    /// Frame derivatives at tangential offset `u`.
    pub fn jet_at(&self, u: f64) -> Result<FrameJet> {
        let jet = self.jet_at_x(self.param_at(u)?)?;
        if !jet.is_graph {
            return Err(Error::OutOfFrameRange { u });
        }
        Ok(jet)
    }

    /// Height of the curve above the base tangent at tangential offset `u`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        self.jet_at(u).map(|j| j.f)
    }

    /// Curve parameter on `side` where the height reaches `h`.
    fn chord_param(&self, h: f64, side: Side) -> Result<f64> {
        let height = |x: f64| -> Result<f64> { Ok(self.coords(x)?.1) };
        let (dir, f2) = match side {
            Side::Right => (1.0, self.curve.jet(self.x0)?.d2),
            Side::Left => (-1.0, self.curve.jet(self.x0.next_down())?.d2),
        };
        // parabolic prediction of the endpoint
        let mut dx0 = (2.0 * h * self.norm / f2).sqrt();
        if !dx0.is_finite() || dx0 <= 0.0 {
            dx0 = h.sqrt();
        }
        let bracket = self.bracket_outward(dir, dx0, |x| {
            Ok(if height(x)? >= h {
                Probe::Crossed
            } else {
                Probe::Short
            })
        })?;
        let (near, far) = bracket.ok_or(Error::ChordOutOfDomain { h, side })?;
        roots::bisect(|x| Ok(height(x)? - h), near, far)
    }

    /// Endpoints of the chord cut by the line parallel to the base tangent
    /// at height `h`.
    pub fn chord(&self, h: f64) -> Result<Chord> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Precondition(format!(
                "chord height must be positive and finite, got {h}"
            )));
        }
        let left = self.jet_at_x(self.chord_param(h, Side::Left)?)?;
        let right = self.jet_at_x(self.chord_param(h, Side::Right)?)?;
        if !(left.u < 0.0 && right.u > 0.0) {
            return Err(Error::DegenerateInput(format!(
                "chord endpoints at height {h} are not on opposite sides of the base point"
            )));
        }
        Ok(Chord { h, left, right })
    }

    pub fn chord_length(&self, h: f64) -> Result<f64> {
        self.chord(h).map(|c| c.length())
    }
}

/// Canonical frame at `x0`.
pub fn canonical_frame(curve: &Curve, x0: f64) -> Result<Frame> {
    Frame::new(curve, x0)
}
