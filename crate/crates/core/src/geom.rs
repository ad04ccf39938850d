//! Plane points, normalized lines and the two triangle primitives built on them.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

/// The line `p·x + q·y = r` with `p² + q² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl Line {
    /// Line through `point` with direction `dir`. The normal is `dir` rotated
    /// clockwise, so a direction `(1, m)` yields the normal `(m, -1)/|·|`.
    pub fn through(point: Point2, dir: Point2) -> Result<Line> {
        let len = dir.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::DegenerateInput(format!(
                "line direction ({}, {}) has no length",
                dir.x, dir.y
            )));
        }
        let p = dir.y / len;
        let q = -dir.x / len;
        Ok(Line {
            p,
            q,
            r: p * point.x + q * point.y,
        })
    }

    pub fn normal(&self) -> Point2 {
        Point2::new(self.p, self.q)
    }

    pub fn direction(&self) -> Point2 {
        Point2::new(-self.q, self.p)
    }

    /// Signed distance of `pt` from the line.
    pub fn residual(&self, pt: Point2) -> f64 {
        self.p * pt.x + self.q * pt.y - self.r
    }
}

/// Minimum `|sin|` of the angle between two lines before they count as parallel.
pub const PARALLEL_TOL: f64 = 1e-12;

pub fn line_intersection(l1: &Line, l2: &Line) -> Result<Point2> {
    let det = l1.p * l2.q - l2.p * l1.q;
    if det.abs() < PARALLEL_TOL {
        return Err(Error::ParallelLines);
    }
    Ok(Point2::new(
        (l1.r * l2.q - l2.r * l1.q) / det,
        (l1.p * l2.r - l2.p * l1.r) / det,
    ))
}

/// Twice the signed area of `(a, b, c)`, positive for counter-clockwise order.
pub fn signed_area2(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Unsigned shoelace area of the triangle through three points.
pub fn contact_triangle_area(a: Point2, a1: Point2, a2: Point2) -> f64 {
    0.5 * signed_area2(a, a1, a2).abs()
}
