//! Board text formats.
//!
//! The board document is JSON: `{"n": 8, "queens": [[4, 2], [5, 4]]}` with
//! `[row, col]` pairs. Algebraic notation (`"b4,d5"`) maps the file letter to
//! the column and the rank number to the row, and only exists for `n <= 26`.

use serde::{Deserialize, Serialize};

use crate::board::{PartialConfig, Square};
use crate::error::{QueensError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardDocument {
    pub n: usize,
    pub queens: Vec<[usize; 2]>,
}

impl BoardDocument {
    pub fn from_config(cfg: &PartialConfig) -> Self {
        BoardDocument {
            n: cfg.n(),
            queens: cfg.queens().iter().map(|q| [q.row, q.col]).collect(),
        }
    }

    pub fn to_config(&self) -> Result<PartialConfig> {
        PartialConfig::new(self.n, self.queens.iter().map(|&[r, c]| Square::new(r, c)))
    }
}

/// Parses a board document, reporting JSON errors with their line and column.
pub fn parse_board_document(text: &str) -> Result<PartialConfig> {
    let doc: BoardDocument = serde_json::from_str(text).map_err(|e| QueensError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_config()
}

pub fn to_board_document(cfg: &PartialConfig) -> String {
    serde_json::to_string(&BoardDocument::from_config(cfg)).expect("board document serializes")
}

pub fn square_to_algebraic(sq: Square) -> Option<String> {
    if !(1..=26).contains(&sq.col) {
        return None;
    }
    let file = (b'a' + (sq.col - 1) as u8) as char;
    Some(format!("{file}{}", sq.row))
}

/// Parses comma- or whitespace-separated tokens such as `"b4,d5"`.
///
/// Errors carry the 1-based column of the offending token within `text`.
pub fn parse_algebraic(text: &str, n: usize) -> Result<Vec<Square>> {
    if n > 26 {
        return Err(QueensError::TooLarge {
            what: "algebraic notation",
            limit: 26,
            got: n,
        });
    }
    let err = |column: usize, message: String| QueensError::Parse {
        line: 1,
        column,
        message,
    };
    let mut squares = Vec::new();
    let mut start = None;
    let bytes = text.as_bytes();
    for pos in 0..=bytes.len() {
        let sep = pos == bytes.len() || bytes[pos] == b',' || bytes[pos].is_ascii_whitespace();
        match (sep, start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                let token = &text[s..pos];
                let mut chars = token.chars();
                let file = chars.next().unwrap();
                if !file.is_ascii_lowercase() {
                    return Err(err(s + 1, format!("expected a file letter in {token:?}")));
                }
                let rank: usize = chars
                    .as_str()
                    .parse()
                    .map_err(|_| err(s + 2, format!("expected a rank number in {token:?}")))?;
                let sq = Square::new(rank, (file as u8 - b'a') as usize + 1);
                if !sq.is_on_board(n) {
                    return Err(err(s + 1, format!("{token} is off the {n}x{n} board")));
                }
                squares.push(sq);
                start = None;
            }
            _ => {}
        }
    }
    Ok(squares)
}
