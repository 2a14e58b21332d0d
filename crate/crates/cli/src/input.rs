//! Reading boards from flags and files.

use std::path::PathBuf;

use clap::Args;
use queens_core::notation::{parse_algebraic, parse_board_document};
use queens_core::{PartialConfig, QueensError, Result, Square};

#[derive(Args, Debug, Clone)]
pub struct BoardArgs {
    /// Board size; may be omitted with --file
    #[arg(long)]
    pub n: Option<usize>,
    /// Queens as algebraic squares ("b4,d5", n <= 26) or row:col pairs ("4:2,5:4")
    #[arg(long)]
    pub board: Option<String>,
    /// Board document: {"n": 8, "queens": [[4, 2], [5, 4]]}
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl BoardArgs {
    pub fn load(&self) -> Result<PartialConfig> {
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| QueensError::Precondition(format!("cannot read {}: {e}", path.display())))?;
            let cfg = parse_board_document(&text)?;
            if let Some(n) = self.n {
                if n != cfg.n() {
                    return Err(QueensError::DimensionMismatch { expected: n, found: cfg.n() });
                }
            }
            if self.board.is_some() {
                return Err(QueensError::Precondition("give either --board or --file, not both".into()));
            }
            return Ok(cfg);
        }
        let n = self
            .n
            .ok_or_else(|| QueensError::Precondition("--n is required unless --file is given".into()))?;
        let squares = match &self.board {
            None => Vec::new(),
            Some(text) if text.contains(':') => parse_pairs(text)?,
            Some(text) => parse_algebraic(text, n)?,
        };
        PartialConfig::new(n, squares)
    }
}

/// `row:col` pairs separated by commas or whitespace.
fn parse_pairs(text: &str) -> Result<Vec<Square>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for token in text.split(|c: char| c == ',' || c.is_whitespace()) {
        let column = offset + 1;
        offset += token.len() + 1;
        if token.is_empty() {
            continue;
        }
        let bad = |message: String| QueensError::Parse { line: 1, column, message };
        let (r, c) = token
            .split_once(':')
            .ok_or_else(|| bad(format!("expected row:col, found {token:?}")))?;
        let r = r.parse().map_err(|_| bad(format!("bad row in {token:?}")))?;
        let c = c.parse().map_err(|_| bad(format!("bad column in {token:?}")))?;
        out.push(Square::new(r, c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_and_errors() {
        assert_eq!(parse_pairs("4:2, 5:4").unwrap(), vec![Square::new(4, 2), Square::new(5, 4)]);
        match parse_pairs("4:2,x:1") {
            Err(QueensError::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
    }
}
