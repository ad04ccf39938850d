use thiserror::Error;

/// Which side of the base point a chord endpoint lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x = {x} lies outside the open domain ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("curve is not twice differentiable at x = {x}")]
    NonSmoothPoint { x: f64 },

    #[error("curvature {curvature} at x = {x} is not positive")]
    NonConvexAt { x: f64, curvature: f64 },

    #[error("tangential offset {u} is outside the frame's valid range")]
    OutOfFrameRange { u: f64 },

    #[error("chord at height {h} leaves the curve domain on the {side} side")]
    ChordOutOfDomain { h: f64, side: Side },

    #[error("tangent lines are parallel")]
    ParallelLines,

    #[error("degenerate slope: {0}")]
    DegenerateSlope(String),

    #[error("ODE is singular at the apex (f = {f})")]
    SingularAtApex { f: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("`{function}` is undefined at argument {arg}")]
    Domain { function: String, arg: f64 },

    #[error("root solve did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
