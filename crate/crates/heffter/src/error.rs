//! Crate-wide error type.

use thiserror::Error;

use crate::array::Position;
use crate::verify::NecessityClause;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Zero is never a cell entry; an empty cell is simply absent.
    #[error("zero cannot be stored in a cell; empty cells are absent")]
    ZeroEntry,

    #[error("position ({row}, {col}) lies outside a {rows}x{cols} array")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("cell ({}, {}) is already filled", pos.row, pos.col)]
    Overlap { pos: Position },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    Dimension(usize, usize, usize, usize),

    #[error("array is not square ({0}x{1})")]
    NotSquare(usize, usize),

    #[error("{divisor} does not divide {value}")]
    Divisibility { divisor: usize, value: usize },

    #[error("diagonal index {index} outside [1, {n}]")]
    Index { index: usize, n: usize },

    #[error("{0}")]
    Domain(String),

    #[error("unknown builtin array name: {0}")]
    UnknownName(String),

    #[error("no column rotation of the filler meets the target skeleton")]
    NoRotation,

    #[error("extension hypothesis {hypothesis} violated: {detail}")]
    Precondition { hypothesis: String, detail: String },

    #[error("no integer relative Heffter array with n = {n}, k = {k} exists: {clause}")]
    Nonexistent {
        n: usize,
        k: usize,
        clause: NecessityClause,
    },

    #[error("existence for n = {n}, k = {k} is an open case")]
    OpenCase { n: usize, k: usize },

    #[error("ordering is not simple: partial sums repeat modulo {v}")]
    NotSimple { v: i64 },

    #[error("entries do not sum to zero modulo {v}")]
    NonzeroSum { v: i64 },

    #[error("search found a witness for a case recorded as nonexistent")]
    Contradiction,

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("integer overflow in entry arithmetic")]
    Overflow,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(hypothesis: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition {
            hypothesis: hypothesis.into(),
            detail: detail.into(),
        }
    }
}
