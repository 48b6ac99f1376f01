//! Scan tables.
//!
//! CSV: header `k,forbidden_count,value_lo,value_hi,survivor_states`, one row
//! per depth, `nan` for an empty survivor set.
//!
//! JSON: `{"kind", "meta", "rows", "supremum"}` with keys sorted. `supremum`
//! is the enclosure at the deepest row, the best available lower estimate of
//! the limit.
//!
//! Plot data: `k midpoint` per line plus a `<path>.meta.json` sidecar.

use std::path::{Path, PathBuf};

use exdim_core::exceptional::{ScanKind, ScanResult};
use exdim_core::Enclosure;
use serde_json::{json, Value};

use crate::error::{invalid, CliError, Result};
use crate::numfmt::{self, round_sig, Round};

pub fn scan_csv(scan: &ScanResult) -> String {
    let mut out = String::from("k,forbidden_count,value_lo,value_hi,survivor_states\n");
    for r in &scan.rows {
        let (lo, hi) = match r.value {
            Some(v) => (numfmt::lo(v.lo), numfmt::hi(v.hi)),
            None => ("nan".into(), "nan".into()),
        };
        out.push_str(&format!("{},{},{lo},{hi},{}\n", r.k, r.forbidden_count, r.survivor_states));
    }
    out
}

fn num(x: f64, dir: Round) -> Value {
    if x.is_finite() {
        json!(round_sig(x, dir))
    } else {
        Value::Null
    }
}

/// `{"lo", "hi"}` with outward nine-digit rounding, or `null`.
pub fn enclosure_json(e: Option<Enclosure>) -> Value {
    match e {
        Some(e) => json!({ "lo": num(e.lo, Round::Down), "hi": num(e.hi, Round::Up) }),
        None => Value::Null,
    }
}

fn kind_name(kind: ScanKind) -> &'static str {
    match kind {
        ScanKind::Entropy => "entropy",
        ScanKind::Dimension => "dimension",
    }
}

pub fn scan_json(scan: &ScanResult) -> String {
    let m = &scan.meta;
    let rows: Vec<Value> = scan
        .rows
        .iter()
        .map(|r| {
            json!({
                "k": r.k,
                "forbidden_count": r.forbidden_count,
                "value": enclosure_json(r.value),
                "survivor_states": r.survivor_states,
            })
        })
        .collect();
    let doc = json!({
        "kind": kind_name(scan.kind),
        "meta": {
            "system": m.system,
            "target": m.target,
            "tol": num(m.tol, Round::Nearest),
            "reference": enclosure_json(m.reference),
            "hypothesis_holds": m.hypothesis_holds,
            "seed": m.seed,
        },
        "rows": rows,
        "supremum": enclosure_json(scan.last_value()),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json serializes");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes `k midpoint` lines to `path` and metadata to `<path>.meta.json`.
pub fn emit_plotdata(scan: &ScanResult, path: &Path) -> Result<()> {
    if scan.rows.is_empty() {
        return invalid("cannot plot an empty scan");
    }
    let mut data = String::new();
    for r in &scan.rows {
        let mid = r.value.map_or("nan".to_string(), |v| numfmt::near(v.mid()));
        data.push_str(&format!("{} {mid}\n", r.k));
    }
    let empty_rows: Vec<usize> = scan.rows.iter().filter(|r| r.value.is_none()).map(|r| r.k).collect();
    let meta = json!({
        "kind": kind_name(scan.kind),
        "columns": ["k", "midpoint"],
        "system": scan.meta.system,
        "target": scan.meta.target,
        "seed": scan.meta.seed,
        "empty_rows": !empty_rows.is_empty(),
        "empty_ks": empty_rows,
    });
    write_text(path, &data)?;
    let mut m = serde_json::to_string_pretty(&meta).expect("json serializes");
    m.push('\n');
    write_text(&sidecar(path), &m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exdim_core::exceptional::{entropy_scan, Target};
    use exdim_core::Sft;

    fn golden_scan() -> ScanResult {
        entropy_scan(&Sft::full(2), &Target::fixed_point(0), &[1, 2, 3], 1e-12).unwrap()
    }

    #[test]
    fn csv_rows() {
        let csv = scan_csv(&golden_scan());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "k,forbidden_count,value_lo,value_hi,survivor_states");
        // k=1 forbids the word 0; only 1^inf survives
        assert!(lines[1].starts_with("1,1,0,"));
    }

    #[test]
    fn json_has_sorted_keys_and_supremum() {
        let s = scan_json(&golden_scan());
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 3);
        assert!(v["supremum"]["lo"].as_f64().unwrap() > 0.48);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(s.find("\"kind\"").unwrap() < s.find("\"meta\"").unwrap());
    }
}
