//! Contact and tangent triangles on strictly convex plane curves.
//!
//! For a base point `P` on a convex curve and a small height `h`, the line
//! parallel to the tangent at `P` at distance `h` cuts a chord `A1 A2`. The
//! contact triangle `A A1 A2` has area `T`; the tangents at the three contact
//! points bound the tangent triangle of area `U`. On a parabola `U = T/2`
//! exactly, at every scale; on any strictly convex curve the ratio only tends
//! to `1/2` as `h → 0`. This crate computes both areas, estimates their
//! curvature limits, and classifies curves by the exact finite-scale ratio.

pub mod curve;
pub mod dsl;
pub mod error;
pub mod frame;
pub mod geom;
pub mod roots;

pub use curve::{Curve, CurveKind, Domain};
pub use error::{Error, Result, Side};
pub use frame::{canonical_frame, Chord, Frame, FrameJet};
pub use geom::{Line, Point2};
pub mod extrapolate;
pub mod limits;
pub mod characterize;
pub mod triangle;
