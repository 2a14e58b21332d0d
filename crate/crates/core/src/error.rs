use thiserror::Error;

use crate::board::Square;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueensError {
    #[error("board size must be at least 1")]
    EmptyBoard,

    #[error("square ({}, {}) is outside the {n}x{n} board", .square.row, .square.col)]
    SquareOutOfRange { square: Square, n: usize },

    #[error("line {line} does not exist on a {n}x{n} board")]
    LineOutOfRange { line: String, n: usize },

    #[error("queens on ({}, {}) and ({}, {}) share {line}", .first.row, .first.col, .second.row, .second.col)]
    Attacking {
        first: Square,
        second: Square,
        line: String,
    },

    #[error("board size mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} is limited to n <= {limit} (got n = {got})")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = QueensError> = std::result::Result<T, E>;
