//! Generators of expanding Markov systems: piecewise-linear interval maps,
//! finite-digit Gauss subsystems and quadratic Julia sets near `c = 0`.
//!
//! A system of depth `k` has one cell per admissible `k`-word of the base
//! shift. The branch from cell `u` to cell `v` exists when `u v_last` is
//! admissible; its derivative bound is taken over the cylinder of that
//! `(k+1)`-word and intersected with the bound of the parent cylinder.

mod gauss;
mod julia;
mod linear;

pub use gauss::{gauss_cell_deriv_bounds, gauss_subsystem, GaussFamily};
pub use julia::{quadratic_julia, CellBound, CertificationReport, JuliaConfig, JuliaFamily};
pub use linear::{
    linear_cantor, linear_doubling, linear_full, linear_markov, linear_markov_at, random_linear_markov, LinearFamily,
};

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::symbolic::{BlockCode, CodeKind, Sft};
use crate::thermo::{Ambient, Branch, MarkovSystem, Origin};

/// Hard cap on the number of cells of a generated system.
pub const CELL_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Interval(Enclosure),
    /// Axis-aligned box in the complex plane.
    Box { re: Enclosure, im: Enclosure },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellGeometry {
    pub region: Region,
    pub depth: usize,
}

impl CellGeometry {
    pub fn interval(lo: f64, hi: f64, depth: usize) -> Self {
        CellGeometry {
            region: Region::Interval(Enclosure::new(lo, hi)),
            depth,
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.region {
            Region::Interval(e) => e.width(),
            Region::Box { re, im } => re.width().hypot(im.width()),
        }
    }

    pub fn center(&self) -> Complex64 {
        match &self.region {
            Region::Interval(e) => Complex64::new(e.mid(), 0.0),
            Region::Box { re, im } => Complex64::new(re.mid(), im.mid()),
        }
    }

    /// Euclidean distance from `p` to the region (0 inside).
    pub fn distance_to(&self, p: Complex64) -> f64 {
        let gap = |e: &Enclosure, x: f64| {
            if x < e.lo {
                e.lo - x
            } else if x > e.hi {
                x - e.hi
            } else {
                0.0
            }
        };
        match &self.region {
            Region::Interval(e) => gap(e, p.re).hypot(p.im),
            Region::Box { re, im } => gap(re, p.re).hypot(gap(im, p.im)),
        }
    }

    /// Closed-ball intersection test, with the region padded by `slack`.
    pub fn meets_ball(&self, center: Complex64, radius: f64, slack: f64) -> bool {
        self.distance_to(center) <= radius + slack
    }

    pub fn contains_point(&self, p: Complex64) -> bool {
        self.distance_to(p) == 0.0
    }

    /// Containment up to an absolute slack.
    pub fn contains(&self, other: &CellGeometry, slack: f64) -> bool {
        let inside = |a: &Enclosure, b: &Enclosure| b.lo >= a.lo - slack && b.hi <= a.hi + slack;
        match (&self.region, &other.region) {
            (Region::Interval(a), Region::Interval(b)) => inside(a, b),
            (Region::Box { re: ar, im: ai }, Region::Box { re: br, im: bi }) => inside(ar, br) && inside(ai, bi),
            _ => false,
        }
    }
}

/// Geometry and derivative bounds of every admissible word of one length,
/// words in lexicographic order.
#[derive(Debug, Clone)]
pub(crate) struct Level {
    pub(crate) words: Vec<Vec<u32>>,
    pub(crate) geometry: Vec<CellGeometry>,
    pub(crate) deriv: Vec<Enclosure>,
}

#[derive(Debug)]
pub(crate) enum Family {
    Linear(LinearFamily),
    Gauss(GaussFamily),
    Julia(JuliaFamily),
}

impl Family {
    pub(crate) fn name(&self) -> &'static str {
        match self {
            Family::Linear(_) => "linear",
            Family::Gauss(_) => "gauss",
            Family::Julia(_) => "julia",
        }
    }

    pub(crate) fn base(&self) -> &Sft {
        match self {
            Family::Linear(f) => f.base(),
            Family::Gauss(f) => f.base(),
            Family::Julia(f) => f.base(),
        }
    }

    pub(crate) fn ambient(&self) -> Ambient {
        match self {
            Family::Julia(_) => Ambient::Plane,
            _ => Ambient::Interval,
        }
    }

    /// Levels `1..=max_len`.
    pub(crate) fn levels(&self, max_len: usize) -> Result<Vec<Level>> {
        match self {
            Family::Julia(f) => f.levels(max_len),
            _ => {
                let mut out = Vec::with_capacity(max_len);
                for len in 1..=max_len {
                    let words = self.base().admissible_words(len)?;
                    let mut geometry = Vec::with_capacity(words.len());
                    let mut deriv = Vec::with_capacity(words.len());
                    for w in &words {
                        let (g, d) = match self {
                            Family::Linear(f) => (f.cylinder(w), f.deriv(w)),
                            Family::Gauss(f) => {
                                let g = f.cylinder(w);
                                let d = gauss::deriv_over(&g);
                                (g, d)
                            }
                            Family::Julia(_) => unreachable!(),
                        };
                        geometry.push(g);
                        deriv.push(d);
                    }
                    out.push(Level { words, geometry, deriv });
                }
                Ok(out)
            }
        }
    }

    pub(crate) fn cylinder(&self, word: &[u32]) -> Result<CellGeometry> {
        match self {
            Family::Linear(f) => Ok(f.cylinder(word)),
            Family::Gauss(f) => Ok(f.cylinder(word)),
            Family::Julia(f) => f.cylinder(word),
        }
    }

    /// Inverse branch into base cell `symbol`, for sampling.
    pub(crate) fn inverse_point(&self, symbol: u32, p: Complex64) -> Complex64 {
        match self {
            Family::Linear(f) => Complex64::new(f.inverse(symbol, p.re), 0.0),
            Family::Gauss(f) => Complex64::new(f.inverse(symbol, p.re), 0.0),
            Family::Julia(f) => f.inverse(symbol, p),
        }
    }

    /// A point of base cell `symbol`, for sampling.
    pub(crate) fn base_point(&self, symbol: u32) -> Complex64 {
        match self {
            Family::Julia(f) => f.base_center(symbol),
            _ => self
                .cylinder(&[symbol])
                .map(|g| g.center())
                .unwrap_or(Complex64::new(0.0, 0.0)),
        }
    }

    pub(crate) fn describe(&self) -> String {
        match self {
            Family::Linear(f) => f.describe(),
            Family::Gauss(f) => f.describe(),
            Family::Julia(f) => f.describe(),
        }
    }
}

/// Builds the depth-`depth` system of a family.
pub(crate) fn build(family: Arc<Family>, depth: usize) -> Result<MarkovSystem> {
    if depth == 0 {
        return Err(Error::invalid("depth must be positive"));
    }
    let need = family.base().count_words_transfer(depth + 1);
    if need > CELL_BUDGET {
        return Err(Error::OverBudget {
            what: "cells",
            requested: need as f64,
            limit: CELL_BUDGET as f64,
        });
    }
    let mut levels = family.levels(depth + 1)?;
    for len in 1..levels.len() {
        let (done, rest) = levels.split_at_mut(len);
        let parent = &done[len - 1];
        let child = &mut rest[0];
        for (w, d) in child.words.iter().zip(child.deriv.iter_mut()) {
            if let Ok(p) = parent.words.binary_search_by(|x| x.as_slice().cmp(&w[..len])) {
                *d = d.intersect(&parent.deriv[p]);
            }
        }
    }
    let edges = levels.pop().expect("depth + 1 levels");
    let cells = levels.pop().expect("depth levels");
    let mut branches = Vec::with_capacity(edges.words.len());
    for (w, d) in edges.words.iter().zip(&edges.deriv) {
        let from = cells.words.binary_search_by(|x| x.as_slice().cmp(&w[..depth]));
        let to = cells.words.binary_search_by(|x| x.as_slice().cmp(&w[1..]));
        if let (Ok(from), Ok(to)) = (from, to) {
            branches.push(Branch { from, to, deriv: *d });
        }
    }
    let code = BlockCode::from_words(CodeKind::HigherBlock, depth, family.base().alphabet_size(), cells.words);
    let ms = MarkovSystem::new(family.ambient(), cells.geometry, branches)?;
    if let Family::Julia(f) = family.as_ref() {
        f.check_expansion(&ms, &code, depth)?;
    }
    Ok(ms.with_origin(Origin { family, depth, code }))
}

/// The same system rebuilt `extra` levels deeper. Survivor subsystems are
/// refined by rebuilding their parent family, so this applies to systems
/// produced by a generator.
pub fn refine(ms: &MarkovSystem, extra: usize) -> Result<MarkovSystem> {
    let o = ms
        .origin()
        .ok_or(Error::Unsupported("refinement needs a generated system"))?;
    if extra == 0 {
        return Ok(ms.clone());
    }
    build(o.family.clone(), o.depth + extra)
}

/// Geometry of the cylinder of an admissible base word.
pub fn cell_lookup(ms: &MarkovSystem, word: &[u32]) -> Result<CellGeometry> {
    let o = ms
        .origin()
        .ok_or(Error::Unsupported("cell lookup needs a generated system"))?;
    if !o.family.base().is_admissible(word) {
        return Err(Error::Inadmissible);
    }
    o.family.cylinder(word)
}

/// Base shift of the generating family.
pub fn base_shift(ms: &MarkovSystem) -> Result<&Sft> {
    ms.origin()
        .map(|o| o.family.base())
        .ok_or(Error::Unsupported("base shift needs a generated system"))
}

/// Words and geometry of all admissible base words of length `k`.
pub fn level_geometry(ms: &MarkovSystem, k: usize) -> Result<(Vec<Vec<u32>>, Vec<CellGeometry>)> {
    let o = ms
        .origin()
        .ok_or(Error::Unsupported("geometry needs a generated system"))?;
    if k == 0 {
        return Err(Error::invalid("depth must be positive"));
    }
    let need = o.family.base().count_words_transfer(k);
    if need > CELL_BUDGET {
        return Err(Error::OverBudget {
            what: "cells",
            requested: need as f64,
            limit: CELL_BUDGET as f64,
        });
    }
    let level = o.family.levels(k)?.pop().expect("k levels");
    Ok((level.words, level.geometry))
}

/// Human-readable description of the generating family.
pub fn describe(ms: &MarkovSystem) -> String {
    match ms.origin() {
        Some(o) => o.family.describe(),
        None => String::from("explicit"),
    }
}

pub(crate) fn family_of(ms: &MarkovSystem) -> Result<&Family> {
    ms.origin()
        .map(|o| o.family.as_ref())
        .ok_or(Error::Unsupported("operation needs a generated system"))
}

/// Checks that each branch's image cylinder lies in its source cell and
/// that its shift lies in the target cell.
pub fn verify_markov(ms: &MarkovSystem, slack: f64) -> Result<bool> {
    let o = ms
        .origin()
        .ok_or(Error::Unsupported("verification needs a generated system"))?;
    for b in ms.branches() {
        let u = o.code.word_of(b.from);
        let v = o.code.word_of(b.to);
        let mut w = u.to_vec();
        w.push(*v.last().unwrap());
        let image = o.family.cylinder(&w)?;
        if !ms.cells()[b.from].contains(&image, slack) {
            return Ok(false);
        }
        let shifted = o.family.cylinder(&w[1..])?;
        if !ms.cells()[b.to].contains(&shifted, slack) {
            return Ok(false);
        }
    }
    Ok(true)
}
