//! Text file formats: `sft v1`, `cylinders v1`, `markov v1`, scan tables
//! (CSV and JSON) and plot data.

mod cylinders;
mod markov;
mod scan;
mod sft;

pub use cylinders::{parse_cylinders, read_cylinders, write_cylinders};
pub(crate) use cylinders::parse_word;
pub use markov::{parse_markov, read_markov, write_markov};
pub use scan::{emit_plotdata, enclosure_json, scan_csv, scan_json, write_text};
pub use sft::{parse_sft, read_sft, write_sft};

use std::path::Path;

use crate::error::{CliError, Result};

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Nonblank lines with `#` comments removed, numbered from 1.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub(crate) fn format_error(path: &Path, line: usize, msg: impl Into<String>) -> CliError {
    CliError::Format {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}
