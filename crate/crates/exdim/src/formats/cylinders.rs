//! ```text
//! cylinders v1
//! d=2
//! depth=2
//! 00
//! 01
//! ```
//! Words are written in base-`d` digits (`0-9a-z`) when `d <= 36`, and as
//! dot-separated decimal symbol indices otherwise.

use std::path::Path;

use exdim_core::{CylinderSet, Sft};

use super::{content_lines, format_error, read_file};
use crate::error::Result;

fn header_value(line: Option<(usize, &str)>, key: &str, path: &Path) -> Result<usize> {
    let (n, l) = line.ok_or_else(|| format_error(path, 0, format!("missing `{key}=` line")))?;
    l.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| format_error(path, n, format!("expected `{key}=<int>`")))
}

/// Symbols of a word over a `d`-letter alphabet.
pub(crate) fn parse_word(s: &str, d: usize) -> Option<Vec<u32>> {
    if d > 36 {
        return s
            .split('.')
            .map(|t| t.parse::<u32>().ok().filter(|&v| (v as usize) < d))
            .collect();
    }
    s.chars()
        .map(|c| c.to_digit(36).filter(|&v| (v as usize) < d))
        .collect()
}

pub(crate) fn format_word(w: &[u32], d: usize) -> String {
    if d > 36 {
        return w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(".");
    }
    w.iter()
        .map(|&s| std::char::from_digit(s, 36).expect("digit below 36"))
        .collect()
}

pub fn parse_cylinders(text: &str, sft: &Sft, path: &Path) -> Result<CylinderSet> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "cylinders v1")) => {}
        Some((n, _)) => return Err(format_error(path, n, "expected header `cylinders v1`")),
        None => return Err(format_error(path, 0, "empty file")),
    }
    let d = header_value(lines.next(), "d", path)?;
    if d != sft.alphabet_size() {
        return Err(format_error(path, 0, "alphabet size does not match the system"));
    }
    let depth = header_value(lines.next(), "depth", path)?;
    let mut words = Vec::new();
    for (n, l) in lines {
        let w = parse_word(l, d).ok_or_else(|| format_error(path, n, "bad word"))?;
        words.push(w);
    }
    CylinderSet::from_words(sft, depth, words).map_err(|e| format_error(path, 0, e.to_string()))
}

pub fn read_cylinders(path: &Path, sft: &Sft) -> Result<CylinderSet> {
    parse_cylinders(&read_file(path)?, sft, path)
}

pub fn write_cylinders(c: &CylinderSet, sft: &Sft) -> String {
    let d = sft.alphabet_size();
    let mut out = format!("cylinders v1\nd={d}\ndepth={}\n", c.depth());
    for w in c.iter() {
        out.push_str(&format_word(w, d));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = Sft::full(3);
        let c = CylinderSet::from_words(&f, 2, [vec![0, 2], vec![1, 1]]).unwrap();
        let text = write_cylinders(&c, &f);
        assert_eq!(text, "cylinders v1\nd=3\ndepth=2\n02\n11\n");
        assert_eq!(parse_cylinders(&text, &f, Path::new("c")).unwrap(), c);
    }

    #[test]
    fn wide_alphabets_use_dots() {
        let f = Sft::full(40);
        let c = CylinderSet::from_words(&f, 2, [vec![39, 3]]).unwrap();
        let text = write_cylinders(&c, &f);
        assert!(text.ends_with("\n39.3\n"));
        assert_eq!(parse_cylinders(&text, &f, Path::new("c")).unwrap(), c);
    }

    #[test]
    fn rejects_inadmissible_words() {
        let g = Sft::golden_mean();
        assert!(parse_cylinders("cylinders v1\nd=2\ndepth=2\n11\n", &g, Path::new("c")).is_err());
        assert!(parse_cylinders("cylinders v1\nd=2\ndepth=2\n2\n", &g, Path::new("c")).is_err());
    }
}
