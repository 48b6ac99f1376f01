//! ```text
//! sft v1
//! d=2
//! 11
//! 10
//! ```
//! Row `i` lists the allowed successors of symbol `i` as 0/1 characters.

use std::path::Path;

use exdim_core::Sft;

use super::{content_lines, format_error, read_file};
use crate::error::Result;

pub fn parse_sft(text: &str, path: &Path) -> Result<Sft> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "sft v1")) => {}
        Some((n, _)) => return Err(format_error(path, n, "expected header `sft v1`")),
        None => return Err(format_error(path, 0, "empty file")),
    }
    let (n, dline) = lines.next().ok_or_else(|| format_error(path, 0, "missing `d=` line"))?;
    let d: usize = dline
        .strip_prefix("d=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| format_error(path, n, "expected `d=<int>`"))?;
    let mut succ = Vec::with_capacity(d);
    for (n, row) in lines.by_ref().take(d) {
        if row.len() != d || !row.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(format_error(path, n, format!("expected {d} characters of 0/1")));
        }
        succ.push(
            row.bytes()
                .enumerate()
                .filter(|(_, b)| *b == b'1')
                .map(|(j, _)| j as u32)
                .collect(),
        );
    }
    if succ.len() != d {
        return Err(format_error(path, 0, format!("expected {d} rows, found {}", succ.len())));
    }
    if let Some((n, _)) = lines.next() {
        return Err(format_error(path, n, "trailing content"));
    }
    Sft::from_successors(d, succ).map_err(|e| format_error(path, 0, e.to_string()))
}

pub fn read_sft(path: &Path) -> Result<Sft> {
    parse_sft(&read_file(path)?, path)
}

pub fn write_sft(sft: &Sft) -> String {
    let mut out = format!("sft v1\nd={}\n", sft.alphabet_size());
    for row in sft.to_matrix() {
        out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Sft::golden_mean();
        let text = write_sft(&g);
        assert_eq!(text, "sft v1\nd=2\n11\n10\n");
        assert!(parse_sft(&text, Path::new("g")).unwrap().same_transitions(&g));
    }

    #[test]
    fn rejects_malformed() {
        let p = Path::new("x");
        assert!(parse_sft("sft v2\nd=1\n1\n", p).is_err());
        assert!(parse_sft("sft v1\nd=2\n11\n", p).is_err());
        assert!(parse_sft("sft v1\nd=2\n12\n10\n", p).is_err());
        assert!(parse_sft("sft v1\nd=1\n1\n1\n", p).is_err());
        assert!(parse_sft("# comment\nsft v1\nd=1\n1 # loop\n", p).is_ok());
    }
}
