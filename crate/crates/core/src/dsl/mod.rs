//! Curve-spec strings and single-variable expressions.

mod ast;
mod dual;
mod parser;

pub use ast::{BinOp, Expr, Func};
pub use dual::Dual2;
pub use parser::{parse_curve_spec, parse_expression};

use crate::error::Result;

/// `(f, f', f'')` of an expression at `x`.
pub fn eval_dual(ast: &Expr, x: f64) -> Result<(f64, f64, f64)> {
    let d = ast.eval_dual(x)?;
    Ok((d.v, d.d1, d.d2))
}
