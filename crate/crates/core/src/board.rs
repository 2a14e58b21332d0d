//! Chessboard model: squares, lines, partial configurations and attacks.
//!
//! Coordinates are 1-indexed. Row `i` and column `j` range over `1..=n`;
//! the plus-diagonal `DiagPlus(k)` holds the squares with `i + j - (n + 1) = k`
//! and the minus-diagonal `DiagMinus(k)` those with `i - j = k`, so both
//! families are indexed by `k` in `-(n-1)..=n-1` and `k = 0` is a main
//! diagonal of length `n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QueensError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Square {
    pub row: usize,
    pub col: usize,
}

impl Square {
    pub const fn new(row: usize, col: usize) -> Self {
        Square { row, col }
    }

    pub fn is_on_board(self, n: usize) -> bool {
        (1..=n).contains(&self.row) && (1..=n).contains(&self.col)
    }

    pub fn check(self, n: usize) -> Result<()> {
        if self.is_on_board(n) {
            Ok(())
        } else {
            Err(QueensError::SquareOutOfRange { square: self, n })
        }
    }

    /// Plus-diagonal coordinate `i + j - (n + 1)`.
    pub fn plus_diagonal(self, n: usize) -> isize {
        self.row as isize + self.col as isize - (n as isize + 1)
    }

    /// Minus-diagonal coordinate `i - j`.
    pub fn minus_diagonal(self) -> isize {
        self.row as isize - self.col as isize
    }

    /// Dense index `(row - 1) * n + (col - 1)`.
    pub fn index(self, n: usize) -> usize {
        (self.row - 1) * n + (self.col - 1)
    }

    pub fn from_index(index: usize, n: usize) -> Square {
        Square::new(index / n + 1, index % n + 1)
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// One of the `6n - 2` lines of the board.
///
/// The derived ordering (rows, columns, plus-diagonals by `k`, minus-diagonals
/// by `k`) is the canonical iteration order used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineId {
    Row(usize),
    Col(usize),
    DiagPlus(isize),
    DiagMinus(isize),
}

impl LineId {
    pub fn count(n: usize) -> usize {
        6 * n - 2
    }

    pub fn check(self, n: usize) -> Result<()> {
        let ok = match self {
            LineId::Row(i) | LineId::Col(i) => (1..=n).contains(&i),
            LineId::DiagPlus(k) | LineId::DiagMinus(k) => k.unsigned_abs() < n,
        };
        if ok && n > 0 {
            Ok(())
        } else {
            Err(QueensError::LineOutOfRange {
                line: self.to_string(),
                n,
            })
        }
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, LineId::DiagPlus(_) | LineId::DiagMinus(_))
    }

    /// Position in the canonical order, in `0..6n-2`. The line must be valid for `n`.
    pub fn index(self, n: usize) -> usize {
        let diag = |k: isize| (k + n as isize - 1) as usize;
        match self {
            LineId::Row(i) => i - 1,
            LineId::Col(j) => n + j - 1,
            LineId::DiagPlus(k) => 2 * n + diag(k),
            LineId::DiagMinus(k) => 2 * n + (2 * n - 1) + diag(k),
        }
    }

    pub fn from_index(index: usize, n: usize) -> LineId {
        let diag = |i: usize| i as isize - (n as isize - 1);
        if index < n {
            LineId::Row(index + 1)
        } else if index < 2 * n {
            LineId::Col(index - n + 1)
        } else if index < 4 * n - 1 {
            LineId::DiagPlus(diag(index - 2 * n))
        } else {
            LineId::DiagMinus(diag(index - (4 * n - 1)))
        }
    }

    /// All lines of an `n x n` board in canonical order.
    pub fn all(n: usize) -> impl Iterator<Item = LineId> {
        (0..LineId::count(n)).map(move |i| LineId::from_index(i, n))
    }

    /// Number of squares on the line.
    pub fn len(self, n: usize) -> usize {
        match self {
            LineId::Row(_) | LineId::Col(_) => n,
            LineId::DiagPlus(k) | LineId::DiagMinus(k) => n - k.unsigned_abs(),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            LineId::Row(_) => "R",
            LineId::Col(_) => "C",
            LineId::DiagPlus(_) => "D+",
            LineId::DiagMinus(_) => "D-",
        }
    }

    /// The row/column number or diagonal offset.
    pub fn coordinate(self) -> i64 {
        match self {
            LineId::Row(i) | LineId::Col(i) => i as i64,
            LineId::DiagPlus(k) | LineId::DiagMinus(k) => k as i64,
        }
    }

    pub fn from_tag(tag: &str, coordinate: i64) -> Option<LineId> {
        let index = || usize::try_from(coordinate).ok();
        match tag {
            "R" => index().map(LineId::Row),
            "C" => index().map(LineId::Col),
            "D+" => Some(LineId::DiagPlus(coordinate as isize)),
            "D-" => Some(LineId::DiagMinus(coordinate as isize)),
            _ => None,
        }
    }

    pub fn contains(self, sq: Square, n: usize) -> bool {
        match self {
            LineId::Row(i) => sq.row == i,
            LineId::Col(j) => sq.col == j,
            LineId::DiagPlus(k) => sq.plus_diagonal(n) == k,
            LineId::DiagMinus(k) => sq.minus_diagonal() == k,
        }
    }
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineId::Row(i) => write!(f, "R{i}"),
            LineId::Col(j) => write!(f, "C{j}"),
            LineId::DiagPlus(k) => write!(f, "D+{k}"),
            LineId::DiagMinus(k) => write!(f, "D-{k}"),
        }
    }
}

/// The four lines through `sq`: row, column, plus-diagonal, minus-diagonal.
pub fn lines_through(sq: Square, n: usize) -> Result<[LineId; 4]> {
    sq.check(n)?;
    Ok(lines_of(sq, n))
}

pub(crate) fn lines_of(sq: Square, n: usize) -> [LineId; 4] {
    [
        LineId::Row(sq.row),
        LineId::Col(sq.col),
        LineId::DiagPlus(sq.plus_diagonal(n)),
        LineId::DiagMinus(sq.minus_diagonal()),
    ]
}

/// Squares of `line` in increasing row order.
pub fn line_squares(line: LineId, n: usize) -> Result<Vec<Square>> {
    line.check(n)?;
    let squares = match line {
        LineId::Row(i) => (1..=n).map(|j| Square::new(i, j)).collect(),
        LineId::Col(j) => (1..=n).map(|i| Square::new(i, j)).collect(),
        LineId::DiagPlus(k) => (1..=n)
            .filter_map(|i| {
                let j = k + n as isize + 1 - i as isize;
                (1..=n as isize).contains(&j).then(|| Square::new(i, j as usize))
            })
            .collect(),
        LineId::DiagMinus(k) => (1..=n)
            .filter_map(|i| {
                let j = i as isize - k;
                (1..=n as isize).contains(&j).then(|| Square::new(i, j as usize))
            })
            .collect(),
    };
    Ok(squares)
}

/// Occupancy of every line by a set of queens.
#[derive(Clone, Debug)]
pub struct LineOccupancy {
    n: usize,
    occupied: Vec<bool>,
}

impl LineOccupancy {
    pub fn new(n: usize) -> Self {
        LineOccupancy {
            n,
            occupied: vec![false; LineId::count(n)],
        }
    }

    pub fn is_occupied(&self, line: LineId) -> bool {
        self.occupied[line.index(self.n)]
    }

    /// True when some occupied line passes through `sq`.
    pub fn attacks(&self, sq: Square) -> bool {
        lines_of(sq, self.n)
            .iter()
            .any(|l| self.occupied[l.index(self.n)])
    }

    /// Marks the four lines of `sq`, returning the first one already taken.
    fn occupy(&mut self, sq: Square) -> Option<LineId> {
        let lines = lines_of(sq, self.n);
        if let Some(&clash) = lines.iter().find(|l| self.occupied[l.index(self.n)]) {
            return Some(clash);
        }
        for l in lines {
            self.occupied[l.index(self.n)] = true;
        }
        None
    }
}

/// Checks that no two queens share a line. Squares must lie on the board.
pub fn is_valid_partial(queens: &[Square], n: usize) -> Result<bool> {
    if n == 0 {
        return Err(QueensError::EmptyBoard);
    }
    let mut occ = LineOccupancy::new(n);
    for &q in queens {
        q.check(n)?;
        if occ.occupy(q).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A set of mutually non-attacking queens on an `n x n` board.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialConfig {
    n: usize,
    queens: Vec<Square>,
}

impl PartialConfig {
    pub fn new(n: usize, queens: impl IntoIterator<Item = Square>) -> Result<Self> {
        if n == 0 {
            return Err(QueensError::EmptyBoard);
        }
        let mut queens: Vec<Square> = queens.into_iter().collect();
        queens.sort_unstable();
        let mut occ = LineOccupancy::new(n);
        for (idx, &q) in queens.iter().enumerate() {
            q.check(n)?;
            if let Some(line) = occ.occupy(q) {
                let first = queens[..idx]
                    .iter()
                    .copied()
                    .find(|&p| line.contains(p, n))
                    .unwrap_or(q);
                return Err(QueensError::Attacking {
                    first,
                    second: q,
                    line: line.to_string(),
                });
            }
        }
        Ok(PartialConfig { n, queens })
    }

    pub fn empty(n: usize) -> Result<Self> {
        PartialConfig::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Queens in increasing (row, col) order.
    pub fn queens(&self) -> &[Square] {
        &self.queens
    }

    pub fn len(&self) -> usize {
        self.queens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queens.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.queens.len() == self.n
    }

    pub fn contains(&self, sq: Square) -> bool {
        self.queens.binary_search(&sq).is_ok()
    }

    pub fn is_subset_of(&self, other: &PartialConfig) -> bool {
        self.n == other.n && self.queens.iter().all(|&q| other.contains(q))
    }

    pub fn occupancy(&self) -> LineOccupancy {
        let mut occ = LineOccupancy::new(self.n);
        for &q in &self.queens {
            occ.occupy(q);
        }
        occ
    }

    pub fn with_queen(&self, sq: Square) -> Result<PartialConfig> {
        PartialConfig::new(self.n, self.queens.iter().copied().chain([sq]))
    }

    /// Moves every queen by `(di, dj)` onto a board of size `big_n`.
    pub fn shifted(&self, big_n: usize, di: usize, dj: usize) -> Result<PartialConfig> {
        let moved = self.queens.iter().map(|q| Square::new(q.row + di, q.col + dj));
        PartialConfig::new(big_n, moved)
    }

    pub fn transformed(&self, symmetry: Symmetry) -> PartialConfig {
        let mut queens: Vec<Square> = self
            .queens
            .iter()
            .map(|&q| symmetry.apply(q, self.n))
            .collect();
        queens.sort_unstable();
        PartialConfig { n: self.n, queens }
    }

    /// `sum |i + j - (n + 1)| + |i - j|` over the queens: how far they sit from the main diagonals.
    pub fn diagonal_distance_sum(&self) -> u64 {
        self.queens
            .iter()
            .map(|q| (q.plus_diagonal(self.n).unsigned_abs() + q.minus_diagonal().unsigned_abs()) as u64)
            .sum()
    }
}

impl fmt::Display for PartialConfig {
    /// Row `n` is printed first, like a chess diagram.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in (1..=self.n).rev() {
            for col in 1..=self.n {
                let c = if self.contains(Square::new(row, col)) { 'Q' } else { '.' };
                if col > 1 {
                    f.write_str(" ")?;
                }
                write!(f, "{c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Squares sharing no line with any queen of `cfg`. The queens' own squares are excluded.
pub fn unattacked(cfg: &PartialConfig) -> Vec<Square> {
    let occ = cfg.occupancy();
    let n = cfg.n();
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| Square::new(i, j)))
        .filter(|&s| !occ.attacks(s))
        .collect()
}

/// The eight symmetries of the square board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Identity,
    Rotate90,
    Rotate180,
    Rotate270,
    /// Row `i` goes to row `n + 1 - i`.
    FlipRows,
    /// Column `j` goes to column `n + 1 - j`.
    FlipCols,
    Transpose,
    AntiTranspose,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rotate90,
        Symmetry::Rotate180,
        Symmetry::Rotate270,
        Symmetry::FlipRows,
        Symmetry::FlipCols,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
    ];

    pub fn apply(self, sq: Square, n: usize) -> Square {
        let (i, j) = (sq.row, sq.col);
        let (ri, rj) = (n + 1 - i, n + 1 - j);
        match self {
            Symmetry::Identity => sq,
            Symmetry::Rotate90 => Square::new(j, ri),
            Symmetry::Rotate180 => Square::new(ri, rj),
            Symmetry::Rotate270 => Square::new(rj, i),
            Symmetry::FlipRows => Square::new(ri, j),
            Symmetry::FlipCols => Square::new(i, rj),
            Symmetry::Transpose => Square::new(j, i),
            Symmetry::AntiTranspose => Square::new(rj, ri),
        }
    }
}
