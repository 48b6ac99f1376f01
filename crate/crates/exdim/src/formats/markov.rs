//! ```text
//! markov v1
//! ambient=interval
//! cells=2
//! cell 0 interval 0 0.5
//! cell 1 interval 0.5 1
//! branches=4
//! branch 0 0 2 2
//! ...
//! ```
//! Plane systems use `cell <i> box <re_lo> <re_hi> <im_lo> <im_hi>`.
//! Numbers are written in shortest round-trip form, so a written system
//! reads back identically.

use std::fmt::Write;
use std::path::Path;

use exdim_core::markov_systems::{CellGeometry, Region};
use exdim_core::{Ambient, Branch, Enclosure, MarkovSystem};

use super::{content_lines, format_error, read_file};
use crate::error::Result;

pub fn write_markov(ms: &MarkovSystem) -> String {
    let mut out = String::from("markov v1\n");
    let ambient = match ms.ambient() {
        Ambient::Interval => "interval",
        Ambient::Plane => "plane",
    };
    let _ = writeln!(out, "ambient={ambient}");
    let _ = writeln!(out, "cells={}", ms.cells().len());
    for (i, c) in ms.cells().iter().enumerate() {
        match &c.region {
            Region::Interval(e) => {
                let _ = writeln!(out, "cell {i} interval {} {}", e.lo, e.hi);
            }
            Region::Box { re, im } => {
                let _ = writeln!(out, "cell {i} box {} {} {} {}", re.lo, re.hi, im.lo, im.hi);
            }
        }
    }
    let _ = writeln!(out, "branches={}", ms.branches().len());
    for b in ms.branches() {
        let _ = writeln!(out, "branch {} {} {} {}", b.from, b.to, b.deriv.lo, b.deriv.hi);
    }
    out
}

pub fn parse_markov(text: &str, path: &Path) -> Result<MarkovSystem> {
    let err = |n: usize, m: &str| format_error(path, n, m);
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "markov v1")) => {}
        Some((n, _)) => return Err(err(n, "expected header `markov v1`")),
        None => return Err(err(0, "empty file")),
    }
    let count = |key: &str, lines: &mut dyn Iterator<Item = (usize, &str)>| -> Result<(usize, String)> {
        let (n, l) = lines.next().ok_or_else(|| err(0, &format!("missing `{key}=`")))?;
        let v = l
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| err(n, &format!("expected `{key}=`")))?;
        Ok((n, v.trim().to_string()))
    };
    let (n, ambient) = count("ambient", &mut lines)?;
    let ambient = match ambient.as_str() {
        "interval" => Ambient::Interval,
        "plane" => Ambient::Plane,
        _ => return Err(err(n, "ambient must be `interval` or `plane`")),
    };
    let (n, cells) = count("cells", &mut lines)?;
    let ncells: usize = cells.parse().map_err(|_| err(n, "bad cell count"))?;
    let num = |n: usize, s: &str| -> Result<f64> { s.parse::<f64>().map_err(|_| err(n, "bad number")) };
    let mut geometry = Vec::with_capacity(ncells);
    for i in 0..ncells {
        let (n, l) = lines.next().ok_or_else(|| err(0, "missing cell line"))?;
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() < 3 || f[0] != "cell" || f[1] != i.to_string() {
            return Err(err(n, &format!("expected `cell {i} ...`")));
        }
        let region = match (f[2], f.len(), ambient) {
            ("interval", 5, Ambient::Interval) => {
                let (a, b) = (num(n, f[3])?, num(n, f[4])?);
                if !(a <= b) {
                    return Err(err(n, "interval with lo > hi"));
                }
                Region::Interval(Enclosure::new(a, b))
            }
            ("box", 7, Ambient::Plane) => {
                let v = [num(n, f[3])?, num(n, f[4])?, num(n, f[5])?, num(n, f[6])?];
                if !(v[0] <= v[1] && v[2] <= v[3]) {
                    return Err(err(n, "box with lo > hi"));
                }
                Region::Box {
                    re: Enclosure::new(v[0], v[1]),
                    im: Enclosure::new(v[2], v[3]),
                }
            }
            _ => return Err(err(n, "cell kind does not match ambient")),
        };
        geometry.push(CellGeometry { region, depth: 1 });
    }
    let (n, branches) = count("branches", &mut lines)?;
    let nbranches: usize = branches.parse().map_err(|_| err(n, "bad branch count"))?;
    let mut out = Vec::with_capacity(nbranches);
    for _ in 0..nbranches {
        let (n, l) = lines.next().ok_or_else(|| err(0, "missing branch line"))?;
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 5 || f[0] != "branch" {
            return Err(err(n, "expected `branch <from> <to> <lo> <hi>`"));
        }
        let idx = |s: &str| s.parse::<usize>().map_err(|_| err(n, "bad index"));
        let (lo, hi) = (num(n, f[3])?, num(n, f[4])?);
        if !(lo <= hi) {
            return Err(err(n, "derivative bounds with lo > hi"));
        }
        out.push(Branch {
            from: idx(f[1])?,
            to: idx(f[2])?,
            deriv: Enclosure::new(lo, hi),
        });
    }
    if let Some((n, _)) = lines.next() {
        return Err(err(n, "trailing content"));
    }
    MarkovSystem::new(ambient, geometry, out).map_err(|e| err(0, &e.to_string()))
}

pub fn read_markov(path: &Path) -> Result<MarkovSystem> {
    parse_markov(&read_file(path)?, path)
}
