//! Quadratic Julia sets `J(z^2 + c)` for `c` near 0, coded by the binary
//! expansion of the external angle (the two-branch quasicircle coding).
//!
//! A cover by disks at a base depth `m0` is certified self-consistent: every
//! inverse branch maps each child disk into its parent's disk. Deeper cells
//! are images of shallower ones under the inverse branch whose root lies
//! closest to the parent center. Each cell also carries bounds on `|z|`,
//! propagated through `|z|^2 = |f(z) - c|`, which give `|f'| = 2|z|`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
// unused when std is linked, which provides the inherent float methods
#[allow(unused_imports)]
use num_traits::Float;

use super::{build, CellGeometry, Family, Level, Region};
use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::symbolic::{BlockCode, Sft};
use crate::thermo::MarkovSystem;

const MIN_BASE_DEPTH: usize = 2;
const MAX_BASE_DEPTH: usize = 10;
const MAX_RADIUS_ITERATIONS: usize = 5000;
const MAX_MODULUS_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JuliaConfig {
    pub c: Complex64,
    pub depth: usize,
    /// Required gap: every branch must satisfy `|f'| > 1 + expansion_margin`.
    pub expansion_margin: f64,
}

impl JuliaConfig {
    pub fn new(c: Complex64, depth: usize) -> Self {
        JuliaConfig {
            c,
            depth,
            expansion_margin: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellBound {
    pub word: Vec<u32>,
    pub deriv: Enclosure,
}

/// Why a quadratic Julia system could not be certified.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub c_re: f64,
    pub c_im: f64,
    pub depth: usize,
    pub margin: f64,
    /// Smallest lower derivative bound found (0 when no cover was certified).
    pub min_deriv: f64,
    pub reason: String,
    /// Branches whose lower derivative bound is at most `1 + margin`.
    pub cells: Vec<CellBound>,
}

#[derive(Debug, Clone, Copy)]
struct JCell {
    center: Complex64,
    radius: f64,
    modulus: Enclosure,
    re: Enclosure,
    im: Enclosure,
}

impl JCell {
    fn geometry(&self, depth: usize) -> CellGeometry {
        CellGeometry {
            region: Region::Box { re: self.re, im: self.im },
            depth,
        }
    }

    fn deriv(&self) -> Enclosure {
        Enclosure::new(2.0 * self.modulus.lo, 2.0 * self.modulus.hi).outward(1)
    }
}

#[derive(Debug, Clone)]
pub struct JuliaFamily {
    c: Complex64,
    margin: f64,
    base_depth: usize,
    base: Sft,
    /// `table[n - 1][i]`: cell of the `n`-word with binary value `i`, `n <= base_depth`.
    table: Vec<Vec<JCell>>,
}

fn report(c: Complex64, depth: usize, margin: f64, reason: String) -> Error {
    Error::NotCertifiedExpanding(Box::new(CertificationReport {
        c_re: c.re,
        c_im: c.im,
        depth,
        margin,
        min_deriv: 0.0,
        reason,
        cells: Vec::new(),
    }))
}

/// Root of `s` with the given sign convention: the one closer to `reference`.
fn root_near(s: Complex64, reference: Complex64) -> Complex64 {
    let r = s.sqrt();
    if (r - reference).norm() <= (-r - reference).norm() {
        r
    } else {
        -r
    }
}

/// Lipschitz constant of a branch of `sqrt(. - c)` on the disk of radius `r`
/// around a point at distance `m > r` from `c`.
fn lipschitz(m: f64, r: f64) -> f64 {
    1.0 / (m.sqrt() * (1.0 + (1.0 - r / m).max(0.0).sqrt()))
}

fn sqrt_enclosure(q: Enclosure) -> Enclosure {
    Enclosure::new(q.lo.max(0.0).sqrt().next_down().max(0.0), q.hi.sqrt().next_up())
}

/// Bounds on `|v - c|` over a cell.
fn shifted_modulus(cell: &JCell, c: Complex64) -> Enclosure {
    let m = (cell.center - c).norm();
    let cn = c.norm();
    let lo = (m - cell.radius).max(cell.modulus.lo - cn).max(0.0);
    let hi = (m + cell.radius).min(cell.modulus.hi + cn);
    Enclosure::new(lo.min(hi), hi).outward(2)
}

fn disk_box(center: Complex64, radius: f64) -> (Enclosure, Enclosure) {
    (
        Enclosure::new(center.re - radius, center.re + radius).outward(1),
        Enclosure::new(center.im - radius, center.im + radius).outward(1),
    )
}

/// Point of the Julia set with external angle given by `word` followed by
/// `1 0 0 ...` (the midpoint of the cylinder).
fn angle_point(c: Complex64, beta: Complex64, word: &[u32]) -> Complex64 {
    let mut bits: Vec<u32> = word.to_vec();
    bits.push(1);
    let theta = |j: usize| {
        let mut t = 0.0;
        let mut scale = 0.5;
        for &b in bits[j..].iter().take(53) {
            t += b as f64 * scale;
            scale *= 0.5;
        }
        t
    };
    // The tail is 0^inf, whose point is the fixed point beta.
    let mut z = beta;
    for j in (0..bits.len()).rev() {
        let reference = Complex64::from_polar(1.0, TAU * theta(j));
        let r = (z - c).sqrt();
        z = if (r * reference.conj()).re >= 0.0 { r } else { -r };
    }
    z
}

fn propagate(child: &JCell, parent: &JCell, c: Complex64) -> Option<JCell> {
    let s = child.center - c;
    let m = s.norm();
    if !(m > child.radius * (1.0 + 1e-12)) {
        return None;
    }
    let root = root_near(s, parent.center);
    let radius = lipschitz(m, child.radius) * child.radius * (1.0 + 8.0 * f64::EPSILON) + 4.0 * f64::EPSILON * root.norm();
    let modulus = sqrt_enclosure(shifted_modulus(child, c));
    let modulus = if modulus.overlaps(&parent.modulus) {
        modulus.intersect(&parent.modulus)
    } else {
        modulus
    };
    let (re, im) = disk_box(root, radius);
    Some(JCell {
        center: root,
        radius,
        modulus,
        re: if re.overlaps(&parent.re) { re.intersect(&parent.re) } else { re },
        im: if im.overlaps(&parent.im) { im.intersect(&parent.im) } else { im },
    })
}

fn base_table(c: Complex64, m0: usize) -> Option<Vec<Vec<JCell>>> {
    let beta = (1.0 + (Complex64::new(1.0, 0.0) - 4.0 * c).sqrt()) / 2.0;
    let n = 1usize << m0;
    let half = n >> 1;
    let word_of = |idx: usize, len: usize| -> Vec<u32> { (0..len).rev().map(|b| ((idx >> b) & 1) as u32).collect() };
    let centers: Vec<Complex64> = (0..n).map(|i| angle_point(c, beta, &word_of(i, m0))).collect();
    if centers.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }

    // r_w >= |g(z_{w'b}) - z_w| + L r_{w'b} for both children w'b of w' = shift(w)
    let rhs = |r: &[f64]| -> Option<Vec<f64>> {
        let mut out = vec![0.0; n];
        for idx in 0..n {
            let tail = idx & (half - 1);
            let mut worst = 0.0f64;
            for b in 0..2 {
                let ch = (tail << 1) | b;
                let s = centers[ch] - c;
                let m = s.norm();
                if !(m > r[ch]) {
                    return None;
                }
                let root = root_near(s, centers[idx]);
                let v = (root - centers[idx]).norm() + lipschitz(m, r[ch]) * r[ch];
                worst = worst.max(v);
            }
            out[idx] = worst;
        }
        Some(out)
    };
    let mut r = vec![0.0; n];
    let mut converged = false;
    for _ in 0..MAX_RADIUS_ITERATIONS {
        let next = rhs(&r)?;
        let change = next
            .iter()
            .zip(&r)
            .map(|(a, b)| (a - b).abs() - 1e-12 * a)
            .fold(f64::NEG_INFINITY, f64::max);
        r = next;
        if r.iter().zip(&centers).any(|(&x, z)| x > 0.5 * z.norm()) {
            return None;
        }
        if change <= 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let inflated: Vec<f64> = r.iter().map(|x| x * (1.0 + 1e-9) + 1e-14).collect();
    let check = rhs(&inflated)?;
    if check.iter().zip(&inflated).any(|(a, b)| a > b) {
        return None;
    }
    let r = inflated;

    let mut cells: Vec<JCell> = (0..n)
        .map(|i| {
            let z = centers[i];
            let (re, im) = disk_box(z, r[i]);
            JCell {
                center: z,
                radius: r[i],
                modulus: Enclosure::new((z.norm() - r[i]).max(0.0), z.norm() + r[i]).outward(1),
                re,
                im,
            }
        })
        .collect();
    for _ in 0..MAX_MODULUS_ITERATIONS {
        let mut changed = false;
        let snapshot = cells.clone();
        for idx in 0..n {
            let tail = idx & (half - 1);
            let q0 = shifted_modulus(&snapshot[tail << 1], c);
            let q1 = shifted_modulus(&snapshot[(tail << 1) | 1], c);
            let m = sqrt_enclosure(q0.hull(&q1));
            let cur = cells[idx].modulus;
            if m.overlaps(&cur) {
                let next = m.intersect(&cur);
                if next != cur {
                    changed = true;
                    cells[idx].modulus = next;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut table = vec![cells];
    for len in (1..m0).rev() {
        let below = table.last().unwrap();
        let level: Vec<JCell> = (0..(1usize << len))
            .map(|p| {
                let (a, b) = (&below[2 * p], &below[2 * p + 1]);
                let center = (a.center + b.center) / 2.0;
                let radius = ((a.center - center).norm() + a.radius).max((b.center - center).norm() + b.radius) * (1.0 + 4.0 * f64::EPSILON);
                JCell {
                    center,
                    radius,
                    modulus: a.modulus.hull(&b.modulus),
                    re: a.re.hull(&b.re),
                    im: a.im.hull(&b.im),
                }
            })
            .collect();
        table.push(level);
    }
    table.reverse();
    Some(table)
}

impl JuliaFamily {
    /// Finds and certifies a base cover for parameter `c`.
    pub fn certify(c: Complex64, margin: f64) -> Result<Self> {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::invalid("parameter must be finite"));
        }
        if !(margin >= 0.0) {
            return Err(Error::invalid("expansion margin must be nonnegative"));
        }
        for m0 in MIN_BASE_DEPTH..=MAX_BASE_DEPTH {
            if let Some(table) = base_table(c, m0) {
                return Ok(JuliaFamily {
                    c,
                    margin,
                    base_depth: m0,
                    base: Sft::full(2),
                    table,
                });
            }
        }
        Err(report(
            c,
            MAX_BASE_DEPTH,
            margin,
            String::from("no self-consistent disk cover for the two-branch coding"),
        ))
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn base_depth(&self) -> usize {
        self.base_depth
    }

    fn cells(&self, max_len: usize) -> Result<Vec<Vec<JCell>>> {
        let mut out: Vec<Vec<JCell>> = self.table.iter().take(max_len).cloned().collect();
        for len in (self.base_depth + 1)..=max_len {
            let prev = out.last().unwrap();
            let mask = (1usize << (len - 1)) - 1;
            let mut level = Vec::with_capacity(1 << len);
            for idx in 0..(1usize << len) {
                let cell = propagate(&prev[idx & mask], &prev[idx >> 1], self.c)
                    .ok_or_else(|| report(self.c, len, self.margin, format!("cover degenerates at depth {len}")))?;
                level.push(cell);
            }
            out.push(level);
        }
        Ok(out)
    }

    pub(crate) fn levels(&self, max_len: usize) -> Result<Vec<Level>> {
        let cells = self.cells(max_len)?;
        Ok(cells
            .into_iter()
            .enumerate()
            .map(|(k, level)| {
                let len = k + 1;
                Level {
                    words: (0..level.len())
                        .map(|i| (0..len).rev().map(|b| ((i >> b) & 1) as u32).collect())
                        .collect(),
                    geometry: level.iter().map(|c| c.geometry(len)).collect(),
                    deriv: level.iter().map(JCell::deriv).collect(),
                }
            })
            .collect())
    }

    fn index(word: &[u32]) -> usize {
        word.iter().fold(0usize, |a, &b| (a << 1) | b as usize)
    }

    pub(crate) fn cylinder(&self, word: &[u32]) -> Result<CellGeometry> {
        let n = word.len();
        let m0 = self.base_depth;
        if n <= m0 {
            return Ok(self.table[n - 1][Self::index(word)].geometry(n));
        }
        let mut cur: Vec<JCell> = (0..=(n - m0))
            .map(|i| self.table[m0 - 1][Self::index(&word[i..i + m0])])
            .collect();
        for len in (m0 + 1)..=n {
            let next: Option<Vec<JCell>> = (0..=(n - len))
                .map(|i| propagate(&cur[i + 1], &cur[i], self.c))
                .collect();
            cur = next.ok_or_else(|| report(self.c, len, self.margin, format!("cover degenerates at depth {len}")))?;
        }
        Ok(cur[0].geometry(n))
    }

    pub(crate) fn inverse(&self, symbol: u32, p: Complex64) -> Complex64 {
        root_near(p - self.c, self.base_center(symbol))
    }

    pub(crate) fn base_center(&self, symbol: u32) -> Complex64 {
        self.table[0][symbol as usize].center
    }

    pub(crate) fn check_expansion(&self, ms: &MarkovSystem, code: &BlockCode, depth: usize) -> Result<()> {
        let threshold = 1.0 + self.margin;
        let min = ms.min_deriv();
        if min > threshold {
            return Ok(());
        }
        let cells = ms
            .branches()
            .iter()
            .filter(|b| b.deriv.lo <= threshold)
            .map(|b| {
                let mut word = code.word_of(b.from).to_vec();
                word.push(*code.word_of(b.to).last().unwrap());
                CellBound { word, deriv: b.deriv }
            })
            .collect();
        Err(Error::NotCertifiedExpanding(Box::new(CertificationReport {
            c_re: self.c.re,
            c_im: self.c.im,
            depth,
            margin: self.margin,
            min_deriv: min,
            reason: String::from("derivative bound does not exceed 1 + margin"),
            cells,
        })))
    }

    pub(crate) fn describe(&self) -> String {
        format!("julia c={}{:+}i", self.c.re, self.c.im)
    }
}

/// Markov system for `J(z^2 + c)` with cells of word length `depth`.
pub fn quadratic_julia(cfg: JuliaConfig) -> Result<MarkovSystem> {
    let family = JuliaFamily::certify(cfg.c, cfg.expansion_margin)?;
    build(Arc::new(Family::Julia(family)), cfg.depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov_systems::{cell_lookup, verify_markov};
    use crate::thermo::{bowen_root, sandwich_check};

    #[test]
    fn unit_circle() {
        let ms = quadratic_julia(JuliaConfig::new(Complex64::new(0.0, 0.0), 8)).unwrap();
        assert_eq!(ms.cells().len(), 256);
        for b in ms.branches() {
            assert!(b.deriv.contains(2.0) && b.deriv.width() < 1e-12, "{:?}", b.deriv);
        }
        let d = bowen_root(&ms, 1e-12).unwrap();
        assert!(d.contains(1.0) && d.width() < 1e-9, "{d:?}");
        assert!(verify_markov(&ms, 1e-12).unwrap());
        // angle 1/3 -> word 0101...
        let word: Vec<u32> = (0..20).map(|i| (i % 2) as u32).collect();
        let g = cell_lookup(&ms, &word).unwrap();
        assert!(g.contains_point(Complex64::from_polar(1.0, TAU / 3.0)), "{g:?}");
    }

    #[test]
    fn small_parameter_dimension() {
        let ms = quadratic_julia(JuliaConfig::new(Complex64::new(-0.1, 0.0), 10)).unwrap();
        let d = bowen_root(&ms, 1e-10).unwrap();
        assert!(d.lower > 0.99 && d.upper < 1.01 && d.upper > 1.0, "{d:?}");
        assert!(d.width() < 1e-2, "{d:?}");
        let s = sandwich_check(&ms, 1e-10).unwrap();
        assert!(s.pass);
    }

    #[test]
    fn lookup_matches_levels() {
        let ms = quadratic_julia(JuliaConfig::new(Complex64::new(-0.1, 0.05), 7)).unwrap();
        let words = ms.cell_words().unwrap().clone();
        for (i, w) in words.words().iter().enumerate().step_by(9) {
            assert_eq!(cell_lookup(&ms, w).unwrap(), ms.cells()[i]);
        }
    }

    #[test]
    fn basilica_is_rejected() {
        let r = quadratic_julia(JuliaConfig::new(Complex64::new(-1.0, 0.0), 8));
        match r {
            Err(Error::NotCertifiedExpanding(rep)) => assert!(rep.min_deriv <= 1.0 + rep.margin),
            other => panic!("{other:?}"),
        }
    }
}
