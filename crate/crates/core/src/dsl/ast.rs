use std::fmt;

use super::dual::Dual2;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Cosh,
    Sinh,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Cosh,
        Func::Sinh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Cosh => "cosh",
            Func::Sinh => "sinh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, arg: Dual2) -> Result<Dual2> {
        let out_of_domain = match self {
            Func::Sqrt => arg.v < 0.0,
            Func::Log => arg.v <= 0.0,
            _ => false,
        };
        if out_of_domain {
            return Err(self.domain_error(arg.v));
        }
        let out = match self {
            Func::Sin => arg.sin(),
            Func::Cos => arg.cos(),
            Func::Exp => arg.exp(),
            Func::Log => arg.ln(),
            Func::Sqrt => arg.sqrt(),
            Func::Cosh => arg.cosh(),
            Func::Sinh => arg.sinh(),
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(self.domain_error(arg.v))
        }
    }

    fn domain_error(self, arg: f64) -> Error {
        Error::Domain {
            function: self.name().to_string(),
            arg,
        }
    }
}

/// Expression tree in the single variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    /// Value and first two derivatives with respect to `x`.
    pub fn eval_dual(&self, x: f64) -> Result<Dual2> {
        match self {
            Expr::Num(v) => Ok(Dual2::constant(*v)),
            Expr::X => Ok(Dual2::variable(x)),
            Expr::Neg(e) => Ok(-e.eval_dual(x)?),
            Expr::Call(f, arg) => f.apply(arg.eval_dual(x)?),
            Expr::Bin(op, lhs, rhs) => {
                let a = lhs.eval_dual(x)?;
                let b = rhs.eval_dual(x)?;
                let out = match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.v == 0.0 {
                            return Err(Error::Domain {
                                function: "/".into(),
                                arg: b.v,
                            });
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        if !b.is_constant() && a.v <= 0.0 {
                            return Err(Error::Domain {
                                function: "^".into(),
                                arg: a.v,
                            });
                        }
                        a.pow(b)
                    }
                };
                if out.is_finite() {
                    Ok(out)
                } else {
                    Err(Error::Domain {
                        function: op.symbol().to_string(),
                        arg: a.v,
                    })
                }
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.eval_dual(x).map(|d| d.v)
    }
}

/// Fully parenthesized rendering; reparsing it yields an identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => f.write_str("x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}
