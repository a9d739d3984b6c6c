//! A small expression language for objects on the tangent chart.
//!
//! ```text
//! m = 2
//! fn F: full
//! let w = (-x2*dx1 + x1*dx2)/(x1^2 + x2^2)
//! clift(w)
//! ```
//!
//! Statements are separated by `;` or newlines. Scalars are built from
//! rational literals, coordinates `x1..xm`, `v1..vm`, function symbols
//! (`f`, `g`, `h` are predeclared on the base) and formal partials
//! `D(f, x1, ...)`. Forms use `dx1..dvm` and `^`; `^` is a power when its
//! right side is an integer literal and its left side a scalar. Vector
//! fields use `@x1..@vm`, `xi`; vector-valued forms use `&`, `B`, `id`.
//! Operators: `d`, `db`, `pull`, `clift`, `vlift`, `ins(K, w)`, `lie(K, w)`.

mod eval;
mod lexer;
mod parser;
mod render;

pub use eval::{eval_str, evaluate, Value};
pub use parser::{
    parse, parse_with_dimension, BinOp, DslDocument, Expr, Func, Pos, MAX_DIMENSION, PRELUDE,
};
pub use render::{latex_scalar, render, text, to_json, Format};

/// Errors raised while parsing or evaluating a document.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DslError {
    #[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{column}: undeclared name `{name}`")]
    UndeclaredName {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: index {index} is out of range for m = {m}")]
    IndexOutOfRange {
        index: usize,
        m: usize,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: dimension {value} is outside 1..={max}", max = MAX_DIMENSION)]
    InvalidDimension {
        value: usize,
        line: usize,
        column: usize,
    },
    #[error("the chart dimension was never declared (`m = N`)")]
    MissingDimension,
    #[error("{line}:{column}: {message}")]
    Type {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: {source}")]
    Eval {
        source: crate::Error,
        line: usize,
        column: usize,
    },
}
