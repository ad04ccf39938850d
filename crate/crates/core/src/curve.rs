//! Graph-form plane curves `y = f(x)` and the analytic test catalog.
//!
//! Every curve evaluates `f`, `f'` and `f''` together through [`Curve::jet`].
//! Catalog entries use closed forms written to avoid cancellation near the
//! apex; expression curves go through second-order dual numbers.

use std::fmt;

use crate::dsl::{Dual2, Expr};
use crate::error::{Error, Result};
use crate::geom::{Line, Point2};

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const REAL_LINE: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && self.lo < x && x < self.hi
    }

    /// Distance from `x` to the nearer endpoint (infinite for unbounded sides).
    pub fn distance_to_boundary(&self, x: f64) -> f64 {
        (x - self.lo).min(self.hi - x)
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    /// `y = a x²`
    Parabola { a: f64 },
    /// The two-parameter family `y = (2√a c x + 1 − √(4√a c x + 1)) / (2c²)`,
    /// which is `a x²` at `c = 0`.
    Family { a: f64, c: f64 },
    /// Lower arc `y = r − √(r² − x²)`.
    Circle { r: f64 },
    /// Lower arc of `x²/p² + (y − q)²/q² = 1`.
    Ellipse { p: f64, q: f64 },
    /// `y = eˣ − 1 − x`
    ExpShift,
    /// `a x²` for `x < 0`, `b x²` for `x ≥ 0`; C¹ but not C² at the origin.
    Piecewise { a: f64, b: f64 },
    Expression(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    kind: CurveKind,
    domain: Domain,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter {
            name: name.to_string(),
            reason: format!("must be a finite positive number, got {v}"),
        })
    }
}

impl Curve {
    pub fn parabola(a: f64) -> Result<Curve> {
        Ok(Curve {
            kind: CurveKind::Parabola { a: positive("a", a)? },
            domain: Domain::REAL_LINE,
        })
    }

    pub fn family(a: f64, c: f64) -> Result<Curve> {
        let a = positive("a", a)?;
        if !c.is_finite() {
            return Err(Error::InvalidParameter {
                name: "c".into(),
                reason: format!("must be finite, got {c}"),
            });
        }
        let k = a.sqrt() * c;
        let domain = if c > 0.0 {
            Domain::new(-0.25 / k, f64::INFINITY)
        } else if c < 0.0 {
            Domain::new(f64::NEG_INFINITY, -0.25 / k)
        } else {
            Domain::REAL_LINE
        };
        Ok(Curve {
            kind: CurveKind::Family { a, c },
            domain,
        })
    }

    pub fn circle(r: f64) -> Result<Curve> {
        let r = positive("r", r)?;
        Ok(Curve {
            kind: CurveKind::Circle { r },
            domain: Domain::new(-r, r),
        })
    }

    pub fn ellipse(p: f64, q: f64) -> Result<Curve> {
        let p = positive("p", p)?;
        let q = positive("q", q)?;
        Ok(Curve {
            kind: CurveKind::Ellipse { p, q },
            domain: Domain::new(-p, p),
        })
    }

    pub fn expshift() -> Curve {
        Curve {
            kind: CurveKind::ExpShift,
            domain: Domain::REAL_LINE,
        }
    }

    pub fn piecewise(a: f64, b: f64) -> Result<Curve> {
        let a = positive("a", a)?;
        let b = positive("b", b)?;
        if a == b {
            return Err(Error::InvalidParameter {
                name: "b".into(),
                reason: "must differ from `a`".into(),
            });
        }
        Ok(Curve {
            kind: CurveKind::Piecewise { a, b },
            domain: Domain::REAL_LINE,
        })
    }

    /// Expression curves live on the whole line; domain failures surface at evaluation.
    pub fn expression(expr: Expr) -> Curve {
        Curve {
            kind: CurveKind::Expression(expr),
            domain: Domain::REAL_LINE,
        }
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn contains(&self, x: f64) -> bool {
        self.domain.contains(x)
    }

    /// Catalog entries known to have `f'' > 0` everywhere on the domain.
    pub fn is_strictly_convex(&self) -> bool {
        !matches!(
            self.kind,
            CurveKind::Piecewise { .. } | CurveKind::Expression(_)
        )
    }

    /// Points where the curve fails to be C².
    pub fn non_c2_points(&self) -> &'static [f64] {
        match self.kind {
            CurveKind::Piecewise { .. } => &[0.0],
            _ => &[],
        }
    }

    pub fn is_smooth_at(&self, x: f64) -> bool {
        !self.non_c2_points().contains(&x)
    }

    /// `(f, f', f'')` at `x`. At a non-C² point `f''` is the right-hand limit.
    pub fn jet(&self, x: f64) -> Result<Dual2> {
        self.domain.check(x)?;
        let d = match &self.kind {
            CurveKind::Parabola { a } => Dual2 {
                v: a * x * x,
                d1: 2.0 * a * x,
                d2: 2.0 * a,
            },
            CurveKind::Family { a, c } => {
                let w = 4.0 * a.sqrt() * c * x + 1.0;
                let sw = w.sqrt();
                Dual2 {
                    v: 2.0 * a * x * x / (0.5 * (w + 1.0) + sw),
                    d1: 4.0 * a * x / (sw * (sw + 1.0)),
                    d2: 2.0 * a / (w * sw),
                }
            }
            CurveKind::Circle { r } => {
                let s = ((r - x) * (r + x)).sqrt();
                Dual2 {
                    v: x * x / (r + s),
                    d1: x / s,
                    d2: r * r / (s * s * s),
                }
            }
            CurveKind::Ellipse { p, q } => {
                let s = ((p - x) * (p + x)).sqrt();
                Dual2 {
                    v: q * x * x / (p * (p + s)),
                    d1: q * x / (p * s),
                    d2: q * p / (s * s * s),
                }
            }
            CurveKind::ExpShift => Dual2 {
                v: x.exp_m1() - x,
                d1: x.exp_m1(),
                d2: x.exp(),
            },
            CurveKind::Piecewise { a, b } => {
                let k = if x < 0.0 { *a } else { *b };
                Dual2 {
                    v: k * x * x,
                    d1: 2.0 * k * x,
                    d2: 2.0 * k,
                }
            }
            CurveKind::Expression(e) => e.eval_dual(x)?,
        };
        Ok(d)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.jet(x).map(|d| d.v)
    }

    pub fn slope(&self, x: f64) -> Result<f64> {
        self.jet(x).map(|d| d.d1)
    }

    /// Second derivative; the right-hand value at a non-C² point (see [`Curve::is_smooth_at`]).
    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        self.jet(x).map(|d| d.d2)
    }

    pub fn point(&self, x: f64) -> Result<Point2> {
        Ok(Point2::new(x, self.eval(x)?))
    }

    /// Signed curvature with respect to the upward normal, `f'' / (1 + f'²)^{3/2}`.
    pub fn curvature(&self, x: f64) -> Result<f64> {
        let d = self.jet(x)?;
        if !self.is_smooth_at(x) {
            return Err(Error::NonSmoothPoint { x });
        }
        Ok(d.d2 / (1.0 + d.d1 * d.d1).powf(1.5))
    }

    pub fn tangent_line(&self, x: f64) -> Result<Line> {
        let d = self.jet(x)?;
        Line::through(Point2::new(x, d.v), Point2::new(1.0, d.d1))
    }
}

/// Renders the spec-string form accepted by [`crate::dsl::parse_curve_spec`].
impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CurveKind::Parabola { a } => write!(f, "parabola(a={a})"),
            CurveKind::Family { a, c } => write!(f, "family(a={a},c={c})"),
            CurveKind::Circle { r } => write!(f, "circle(r={r})"),
            CurveKind::Ellipse { p, q } => write!(f, "ellipse(p={p},q={q})"),
            CurveKind::ExpShift => f.write_str("expshift"),
            CurveKind::Piecewise { a, b } => write!(f, "piecewise(a={a},b={b})"),
            CurveKind::Expression(e) => write!(f, "expr({e})"),
        }
    }
}
