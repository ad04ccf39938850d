//! Tokenizer and recursive-descent parser for curve specs and expressions.
//!
//! ```text
//! spec    := ident [ '(' params ')' ]  |  'expr' '(' expr ')'
//! params  := [ ident '=' ['+'|'-'] number { ',' ident '=' ['+'|'-'] number } ]
//! expr    := term { ('+'|'-') term }
//! term    := unary { ('*'|'/') unary }
//! unary   := '-' unary | power
//! power   := primary [ '^' unary ]          (right-associative)
//! primary := number | 'x' | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`.

use std::collections::BTreeMap;

use super::ast::{BinOp, Expr, Func};
use crate::curve::Curve;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // exponent only if followed by digits, optionally signed
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lexeme = &text[start..i];
            let value: f64 = lexeme.parse().map_err(|_| Error::Syntax {
                offset: start,
                message: format!("malformed number `{lexeme}`"),
            })?;
            out.push((Tok::Num(value), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if b"+-*/^(),=".contains(&c) {
            out.push((Tok::Sym(c as char), i));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(Error::Syntax {
                offset: i,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Self {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            offset: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::bin(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::bin(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat_sym('^') {
            Ok(Expr::bin(BinOp::Pow, base, self.unary()?))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::Ident(name) if name == "x" => {
                self.bump();
                Ok(Expr::X)
            }
            Tok::Ident(name) => match Func::from_name(&name) {
                Some(func) => {
                    self.bump();
                    self.expect_sym('(')?;
                    let arg = self.expr()?;
                    self.expect_sym(')')?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
                None => Err(Error::Syntax {
                    offset: self.offset(),
                    message: format!(
                        "unknown identifier `{name}`, expected `x` or one of \
                         sin, cos, exp, log, sqrt, cosh, sinh"
                    ),
                }),
            },
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            _ => Err(self.error("expression")),
        }
    }

    fn ident(&mut self) -> Result<(String, usize)> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok((name, offset))
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn signed_number(&mut self) -> Result<f64> {
        let sign = if self.eat_sym('-') {
            -1.0
        } else {
            self.eat_sym('+');
            1.0
        };
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(sign * v)
            }
            _ => Err(self.error("number")),
        }
    }

    fn params(&mut self) -> Result<BTreeMap<String, f64>> {
        let mut out = BTreeMap::new();
        if self.eat_sym(')') {
            return Ok(out);
        }
        loop {
            let (name, offset) = self.ident()?;
            self.expect_sym('=')?;
            let value = self.signed_number()?;
            if out.insert(name.clone(), value).is_some() {
                return Err(Error::Syntax {
                    offset,
                    message: format!("duplicate parameter `{name}`"),
                });
            }
            if self.eat_sym(')') {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }
}

/// Parse a standalone expression in `x`.
pub fn parse_expression(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parse a curve spec such as `parabola(a=1)` or `expr(x^2 + 0.1*x^4)`.
pub fn parse_curve_spec(text: &str) -> Result<Curve> {
    let mut p = Parser::new(text)?;
    let (kind, kind_offset) = p.ident()?;
    if kind == "expr" {
        p.expect_sym('(')?;
        let e = p.expr()?;
        p.expect_sym(')')?;
        p.expect_eof()?;
        return Ok(Curve::expression(e));
    }

    let params = if p.eat_sym('(') {
        p.params()?
    } else {
        BTreeMap::new()
    };
    p.expect_eof()?;

    let mut args = ParamSet { params, kind: &kind };
    let curve = match kind.as_str() {
        "parabola" => Curve::parabola(args.take("a")?),
        "family" => {
            let a = args.take("a")?;
            Curve::family(a, args.take("c")?)
        }
        "circle" => Curve::circle(args.take("r")?),
        "ellipse" => {
            let p_ = args.take("p")?;
            Curve::ellipse(p_, args.take("q")?)
        }
        "expshift" => Ok(Curve::expshift()),
        "piecewise" => {
            let a = args.take("a")?;
            Curve::piecewise(a, args.take("b")?)
        }
        _ => {
            return Err(Error::Syntax {
                offset: kind_offset,
                message: format!(
                    "unknown curve `{kind}`, expected one of parabola, family, \
                     circle, ellipse, expshift, piecewise, expr"
                ),
            })
        }
    }?;
    args.finish()?;
    Ok(curve)
}

struct ParamSet<'a> {
    params: BTreeMap<String, f64>,
    kind: &'a str,
}

impl ParamSet<'_> {
    fn take(&mut self, name: &str) -> Result<f64> {
        self.params
            .remove(name)
            .ok_or_else(|| Error::InvalidParameter {
                name: name.to_string(),
                reason: format!("missing for `{}`", self.kind),
            })
    }

    fn finish(self) -> Result<()> {
        match self.params.into_keys().next() {
            None => Ok(()),
            Some(name) => Err(Error::InvalidParameter {
                reason: format!("not accepted by `{}`", self.kind),
                name,
            }),
        }
    }
}
