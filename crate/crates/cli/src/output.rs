//! Human and structured output. Structured output is one JSON record per
//! line, ending with a summary record.

use clap::ValueEnum;
use queens_core::notation::BoardDocument;
use queens_core::{is_valid_partial, PartialConfig};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INCOMPLETABLE: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
}

pub struct Out {
    pub format: Format,
}

impl Out {
    pub fn human(&self, text: impl AsRef<str>) {
        if self.format == Format::Human {
            println!("{}", text.as_ref());
        }
    }

    pub fn record(&self, value: Value) {
        if self.format == Format::Structured {
            println!("{}", serde_json::to_string(&value).expect("records serialize"));
        }
    }

    /// Prints a board after re-validating it.
    pub fn board(&self, cfg: &PartialConfig) {
        assert!(
            is_valid_partial(cfg.queens(), cfg.n()).unwrap_or(false),
            "refusing to print an invalid board"
        );
        self.human(cfg.to_string());
    }
}

pub fn board_json(cfg: &PartialConfig) -> Value {
    assert!(
        is_valid_partial(cfg.queens(), cfg.n()).unwrap_or(false),
        "refusing to emit an invalid board"
    );
    json!(BoardDocument::from_config(cfg))
}
