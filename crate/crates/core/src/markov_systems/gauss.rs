use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{build, CellGeometry, Family, Region};
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::symbolic::Sft;
use crate::thermo::MarkovSystem;

/// Gauss map `x -> 1/x mod 1` restricted to continued fractions with digits
/// in a finite set. Symbol `i` stands for `digits[i]`.
#[derive(Debug, Clone)]
pub struct GaussFamily {
    digits: Vec<u32>,
    base: Sft,
}

impl GaussFamily {
    pub fn new(digits: &[u32]) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::EmptySystem);
        }
        let mut d = digits.to_vec();
        d.sort_unstable();
        d.dedup();
        if d.len() != digits.len() || d[0] == 0 {
            return Err(Error::invalid("digits must be distinct positive integers"));
        }
        let base = Sft::full(d.len());
        Ok(GaussFamily { digits: d, base })
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    fn digit(&self, symbol: u32) -> f64 {
        self.digits[symbol as usize] as f64
    }

    pub(crate) fn inverse(&self, symbol: u32, y: f64) -> f64 {
        1.0 / (self.digit(symbol) + y)
    }

    pub(crate) fn cylinder(&self, word: &[u32]) -> CellGeometry {
        let n = self.digit(*word.last().unwrap());
        let mut e = Enclosure::new(1.0 / (n + 1.0), 1.0 / n).outward(1);
        for &s in word[..word.len() - 1].iter().rev() {
            let n = self.digit(s);
            // x -> 1/(n + x) reverses order
            e = Enclosure::new(1.0 / (n + e.hi), 1.0 / (n + e.lo)).outward(1);
        }
        CellGeometry {
            region: Region::Interval(e),
            depth: word.len(),
        }
    }

    pub(crate) fn describe(&self) -> String {
        format!("gauss digits={:?}", self.digits)
    }
}

/// `|f'(x)| = 1/x^2` over an interval cell.
pub(crate) fn deriv_over(g: &CellGeometry) -> Enclosure {
    match &g.region {
        Region::Interval(e) => Enclosure::new(1.0 / (e.hi * e.hi), 1.0 / (e.lo * e.lo)).outward(2),
        Region::Box { .. } => unreachable!("gauss cells are intervals"),
    }
}

/// Gauss subsystem on `digits` with cells of word length `depth`.
pub fn gauss_subsystem(digits: &[u32], depth: usize) -> Result<MarkovSystem> {
    let family = GaussFamily::new(digits)?;
    build(Arc::new(Family::Gauss(family)), depth)
}

/// Bounds on `|f'|` over the cylinder of `word` (symbols index `digits`).
pub fn gauss_cell_deriv_bounds(digits: &[u32], word: &[u32]) -> Result<Enclosure> {
    let family = GaussFamily::new(digits)?;
    if !family.base.is_admissible(word) {
        return Err(Error::Inadmissible);
    }
    Ok(deriv_over(&family.cylinder(word)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov_systems::{cell_lookup, verify_markov};
    use crate::thermo::bowen_root;
    use num_complex::Complex64;

    #[test]
    fn digit_two_cell() {
        let b = gauss_cell_deriv_bounds(&[1, 2], &[1]).unwrap();
        assert!(b.contains(4.0) && b.contains(9.0));
        assert!(b.width() < 5.0 + 1e-12);
    }

    #[test]
    fn single_digit_fixed_point() {
        let ms = gauss_subsystem(&[1], 20).unwrap();
        let g = cell_lookup(&ms, &[0; 30]).unwrap();
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!(g.contains_point(Complex64::new(golden, 0.0)));
        assert!(g.diameter() < 1e-10);
        let d = bowen_root(&ms, 1e-12).unwrap();
        assert_eq!((d.lower, d.upper), (0.0, 0.0));
    }

    #[test]
    fn cylinders_nest() {
        let ms = gauss_subsystem(&[1, 2, 5], 3).unwrap();
        assert!(verify_markov(&ms, 1e-15).unwrap());
        assert!(ms.is_expanding());
    }

    #[test]
    fn digits_one_two_dimension() {
        let ms = gauss_subsystem(&[1, 2], 10).unwrap();
        let d = bowen_root(&ms, 1e-10).unwrap();
        assert!(d.contains(0.531_280_506_277_205_1), "{d:?}");
        assert!(d.width() < 1e-3);
    }
}
