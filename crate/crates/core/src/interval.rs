//! Closed real intervals with outward rounding.

use core::fmt;

/// A closed interval `[lo, hi]` used for every certified enclosure in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted enclosure [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Enclosure { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Intersection; falls back to `self` when the two are disjoint (only
    /// possible through rounding of enclosures of the same quantity).
    pub fn intersect(&self, other: &Enclosure) -> Enclosure {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Enclosure::new(lo, hi)
        } else {
            *self
        }
    }

    /// Widen by `n` units in the last place on each side.
    pub fn outward(&self, n: u32) -> Enclosure {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for _ in 0..n {
            lo = lo.next_down();
            hi = hi.next_up();
        }
        Enclosure { lo, hi }
    }

    /// Widen by a relative amount `rel` (applied to the magnitude of each endpoint).
    pub fn inflate_rel(&self, rel: f64) -> Enclosure {
        Enclosure {
            lo: (self.lo - rel * self.lo.abs()).next_down(),
            hi: (self.hi + rel * self.hi.abs()).next_up(),
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
