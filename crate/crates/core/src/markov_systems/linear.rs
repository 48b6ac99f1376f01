use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;

use super::{build, CellGeometry, Family};
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::symbolic::Sft;
use crate::thermo::MarkovSystem;

const MARKOV_SLACK: f64 = 1e-12;

/// Orientation-preserving affine branches `f(x) = o_i + slope_i (x - a_i)` on
/// cells `I_i = [a_i, b_i]`, where `o_i` is the left end of the leftmost
/// allowed target.
#[derive(Debug, Clone)]
pub struct LinearFamily {
    base: Sft,
    cells: Vec<Enclosure>,
    slopes: Vec<f64>,
    offsets: Vec<f64>,
}

impl LinearFamily {
    pub fn new(slopes: &[f64], transitions: &Sft, cells: &[(f64, f64)]) -> Result<Self> {
        let d = transitions.alphabet_size();
        if d == 0 {
            return Err(Error::EmptySystem);
        }
        if slopes.len() != d || cells.len() != d {
            return Err(Error::invalid("need one slope and one cell per symbol"));
        }
        for &(a, b) in cells {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::invalid("cells must be finite intervals with a < b"));
            }
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| cells[i].0.total_cmp(&cells[j].0));
        for p in order.windows(2) {
            if cells[p[0]].1 > cells[p[1]].0 + MARKOV_SLACK {
                return Err(Error::invalid("cells overlap"));
            }
        }
        for &s in slopes {
            if !s.is_finite() {
                return Err(Error::invalid("slopes must be finite"));
            }
            if s <= 1.0 {
                return Err(Error::NotExpanding);
            }
        }
        let mut offsets = Vec::with_capacity(d);
        for i in 0..d {
            let o = transitions
                .successors(i)
                .map(|j| cells[j].0)
                .fold(f64::INFINITY, f64::min);
            let o = if o.is_finite() { o } else { cells[i].0 };
            let top = o + slopes[i] * (cells[i].1 - cells[i].0);
            for j in transitions.successors(i) {
                if cells[j].0 < o - MARKOV_SLACK || cells[j].1 > top + MARKOV_SLACK {
                    return Err(Error::NotMarkov { from: i, to: j });
                }
            }
            offsets.push(o);
        }
        Ok(LinearFamily {
            base: transitions.clone(),
            cells: cells.iter().map(|&(a, b)| Enclosure::new(a, b)).collect(),
            slopes: slopes.to_vec(),
            offsets,
        })
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn cells(&self) -> &[Enclosure] {
        &self.cells
    }

    pub(crate) fn inverse(&self, symbol: u32, y: f64) -> f64 {
        let i = symbol as usize;
        self.cells[i].lo + (y - self.offsets[i]) / self.slopes[i]
    }

    pub(crate) fn cylinder(&self, word: &[u32]) -> CellGeometry {
        let mut e = self.cells[*word.last().unwrap() as usize];
        for &s in word[..word.len() - 1].iter().rev() {
            let lo = self.inverse(s, e.lo);
            let hi = self.inverse(s, e.hi);
            e = Enclosure::new(lo, hi).outward(1).intersect(&self.cells[s as usize]);
        }
        CellGeometry {
            region: super::Region::Interval(e),
            depth: word.len(),
        }
    }

    pub(crate) fn deriv(&self, word: &[u32]) -> Enclosure {
        Enclosure::point(self.slopes[word[0] as usize])
    }

    pub(crate) fn describe(&self) -> String {
        format!("linear slopes={:?}", self.slopes)
    }
}

/// Depth-1 piecewise-linear Markov system.
pub fn linear_markov(slopes: &[f64], transitions: &Sft, cells: &[(f64, f64)]) -> Result<MarkovSystem> {
    linear_markov_at(slopes, transitions, cells, 1)
}

/// Piecewise-linear Markov system refined to cells of word length `depth`.
pub fn linear_markov_at(slopes: &[f64], transitions: &Sft, cells: &[(f64, f64)], depth: usize) -> Result<MarkovSystem> {
    let family = LinearFamily::new(slopes, transitions, cells)?;
    build(Arc::new(Family::Linear(family)), depth)
}

/// Middle-thirds Cantor system: `3x` on `[0,1/3]`, `3x-2` on `[2/3,1]`.
pub fn linear_cantor(depth: usize) -> Result<MarkovSystem> {
    linear_markov_at(&[3.0, 3.0], &Sft::full(2), &[(0.0, 1.0 / 3.0), (2.0 / 3.0, 1.0)], depth)
}

/// Doubling map on `[0,1/2] ∪ [1/2,1]`.
pub fn linear_doubling(depth: usize) -> Result<MarkovSystem> {
    linear_markov_at(&[2.0, 2.0], &Sft::full(2), &[(0.0, 0.5), (0.5, 1.0)], depth)
}

/// Full `d`-branch system with common slope `lambda >= d` on `[0,1]`.
pub fn linear_full(d: usize, lambda: f64, depth: usize) -> Result<MarkovSystem> {
    if d == 0 {
        return Err(Error::EmptySystem);
    }
    if lambda < d as f64 {
        return Err(Error::invalid("slope must be at least the number of branches"));
    }
    let cells: Vec<(f64, f64)> = (0..d)
        .map(|i| {
            let a = i as f64 / d as f64;
            (a, a + 1.0 / lambda)
        })
        .collect();
    linear_markov_at(&alloc::vec![lambda; d], &Sft::full(d), &cells, depth)
}

/// Random realizable system: `d` symbols on cells `[2i, 2i+1]`, random
/// transitions with every row nonempty, slopes at least the span of each
/// row's targets so the image covers them.
pub fn random_linear_markov<R: Rng>(rng: &mut R, max_symbols: usize) -> Result<MarkovSystem> {
    if max_symbols < 2 {
        return Err(Error::invalid("need at least two symbols"));
    }
    let d = rng.gen_range(2..=max_symbols);
    let mut succ: Vec<Vec<u32>> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut row: Vec<u32> = (0..d as u32).filter(|_| rng.gen_bool(0.6)).collect();
        if row.is_empty() {
            row.push(rng.gen_range(0..d as u32));
        }
        succ.push(row);
    }
    let slopes: Vec<f64> = succ
        .iter()
        .map(|row| {
            let lo = *row.first().unwrap() as f64;
            let hi = *row.last().unwrap() as f64;
            let span = 2.0 * (hi - lo) + 1.0;
            span.max(1.5) + 6.0 * rng.gen::<f64>()
        })
        .collect();
    let cells: Vec<(f64, f64)> = (0..d).map(|i| (2.0 * i as f64, 2.0 * i as f64 + 1.0)).collect();
    let sft = Sft::from_successors(d, succ)?;
    linear_markov(&slopes, &sft, &cells)
}
