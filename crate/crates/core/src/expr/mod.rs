//! Scalar expressions in one free variable `t`.
//!
//! Expressions are parsed from ordinary infix text and evaluated either as
//! plain values or as [`Jet`]s, which yields exact derivatives up to a fixed
//! order. Printing an [`Expr`] produces canonical text that parses back to a
//! structurally identical tree.

mod eval;
mod parser;
mod print;

use std::fmt;

use thiserror::Error;

use crate::jet::JetError;

pub use eval::JetConfig;
pub use parser::parse_expression;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Asin,
    Acos,
    Atan,
}

impl UnaryOp {
    pub fn function_name(self) -> Option<&'static str> {
        Some(match self {
            UnaryOp::Neg => return None,
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Asin => "asin",
            UnaryOp::Acos => "acos",
            UnaryOp::Atan => "atan",
        })
    }

    pub fn from_function_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "exp" => UnaryOp::Exp,
            "log" | "ln" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            "asin" => UnaryOp::Asin,
            "acos" => UnaryOp::Acos,
            "atan" => UnaryOp::Atan,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression tree. `Pow` carries a literal exponent; general `f^g` is not
/// representable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {position}: expected one of {expected:?}")]
    Syntax {
        position: usize,
        expected: Vec<String>,
    },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("exponent at byte {position} is not a numeric literal")]
    NonConstantExponent { position: usize },
    #[error(transparent)]
    Jet(#[from] JetError),
}

impl Expr {
    pub fn constant(v: f64) -> Self {
        Expr::Const(v)
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Self {
        Expr::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(base: Expr, exponent: f64) -> Self {
        Expr::Pow(Box::new(base), exponent)
    }

    /// Tree depth, with leaves at depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Unary(_, c) | Expr::Pow(c, _) => 1 + c.depth(),
            Expr::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::to_infix(self))
    }
}

impl std::str::FromStr for Expr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}
