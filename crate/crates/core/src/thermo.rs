//! Thermodynamic formalism on expanding Markov systems.
//!
//! For the geometric potential `-s log|f'|` the pressure is the logarithm
//! of the Perron root of the transition matrix weighted by `|f'|^{-s}`.
//! Each branch carries an interval of derivative values, so evaluating the
//! weights at the two ends of every interval gives certified lower and upper
//! pressure curves. Both are strictly decreasing in `s`, and bisection on
//! each brackets the zero of the true pressure, i.e. the Hausdorff dimension
//! of the repeller.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

// unused when std is linked, which provides the inherent float methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::linalg::{strongly_connected_components, PerronSolver};
use crate::markov_systems::{CellGeometry, Family};
use crate::symbolic::{BlockCode, Sft};

/// Largest iterate tried when single-step expansion fails.
pub const MAX_ITERATE: usize = 8;
/// Bisection step cap for [`bowen_root`].
pub const MAX_BISECTION_STEPS: usize = 200;
/// Hard cap on branch counts of derived systems.
pub const BRANCH_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    Interval,
    Plane,
}

impl Ambient {
    pub fn dimension(&self) -> f64 {
        match self {
            Ambient::Interval => 1.0,
            Ambient::Plane => 2.0,
        }
    }
}

/// Inverse branch from cell `to` into cell `from`, with bounds on `|f'|`
/// over its image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub from: usize,
    pub to: usize,
    pub deriv: Enclosure,
}

/// How a system was generated; needed for refinement and geometry lookups.
#[derive(Debug, Clone)]
pub(crate) struct Origin {
    pub(crate) family: Arc<Family>,
    pub(crate) depth: usize,
    pub(crate) code: BlockCode,
}

/// Cells, expanding branches with certified derivative bounds, and the
/// induced transition structure.
#[derive(Debug, Clone)]
pub struct MarkovSystem {
    ambient: Ambient,
    cells: Vec<CellGeometry>,
    branches: Vec<Branch>,
    transitions: Sft,
    origin: Option<Origin>,
}

impl MarkovSystem {
    /// Explicit system from cells and branches. Multiple branches between one
    /// pair of cells are allowed.
    pub fn new(ambient: Ambient, cells: Vec<CellGeometry>, mut branches: Vec<Branch>) -> Result<Self> {
        let n = cells.len();
        for b in &branches {
            if b.from >= n || b.to >= n {
                return Err(Error::invalid("branch refers to a missing cell"));
            }
            if !(b.deriv.lo > 0.0) || !(b.deriv.lo <= b.deriv.hi) || !b.deriv.hi.is_finite() {
                return Err(Error::invalid("derivative bounds must satisfy 0 < lo <= hi < inf"));
            }
        }
        branches.sort_by(|a, b| (a.from, a.to).cmp(&(b.from, b.to)));
        let mut succ = vec![Vec::new(); n];
        for b in &branches {
            succ[b.from].push(b.to as u32);
        }
        let transitions = Sft::from_successors(n, succ)?;
        Ok(MarkovSystem {
            ambient,
            cells,
            branches,
            transitions,
            origin: None,
        })
    }

    pub(crate) fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = Some(origin);
        self
    }

    pub(crate) fn origin(&self) -> Option<&Origin> {
        self.origin.as_ref()
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn cells(&self) -> &[CellGeometry] {
        &self.cells
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn transitions(&self) -> &Sft {
        &self.transitions
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty() || self.transitions.trim().is_empty()
    }

    /// Refinement depth (length of the cell words) when generated by a family.
    pub fn depth(&self) -> Option<usize> {
        self.origin.as_ref().map(|o| o.depth)
    }

    /// Base-alphabet word of every cell when generated by a family.
    pub fn cell_words(&self) -> Option<&BlockCode> {
        self.origin.as_ref().map(|o| &o.code)
    }

    /// Short description of the generating family (`explicit` otherwise).
    pub fn family_name(&self) -> &'static str {
        self.origin.as_ref().map_or("explicit", |o| o.family.name())
    }

    pub fn min_deriv(&self) -> f64 {
        self.branches.iter().map(|b| b.deriv.lo).fold(f64::INFINITY, f64::min)
    }

    pub fn is_expanding(&self) -> bool {
        !self.branches.is_empty() && self.min_deriv() > 1.0
    }

    /// Subsystem on the cells with `keep[i]`, trimmed to cells on bi-infinite
    /// paths. Geometry, derivative bounds and cell words carry over.
    pub fn restrict(&self, keep: &[bool]) -> MarkovSystem {
        let (induced, kept) = self.transitions.induced(keep);
        let (_, kept2) = induced.trim_with_map();
        let survivors: Vec<usize> = kept2.iter().map(|&i| kept[i]).collect();
        let mut new_index = vec![usize::MAX; self.cells.len()];
        for (k, &i) in survivors.iter().enumerate() {
            new_index[i] = k;
        }
        let cells = survivors.iter().map(|&i| self.cells[i].clone()).collect();
        let branches = self
            .branches
            .iter()
            .filter(|b| new_index[b.from] != usize::MAX && new_index[b.to] != usize::MAX)
            .map(|b| Branch {
                from: new_index[b.from],
                to: new_index[b.to],
                deriv: b.deriv,
            })
            .collect();
        let mut ms = MarkovSystem::new(self.ambient, cells, branches).expect("restriction is well formed");
        if let Some(o) = &self.origin {
            ms.origin = Some(Origin {
                family: o.family.clone(),
                depth: o.depth,
                code: o.code.restrict(&survivors),
            });
        }
        ms
    }

    /// The `n`-fold system: one branch per admissible path of `n` branches,
    /// derivative intervals multiplied along the path.
    pub fn power_system(&self, n: usize) -> Result<MarkovSystem> {
        if n == 0 {
            return Err(Error::invalid("iterate must be positive"));
        }
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); self.cells.len()];
        for (k, b) in self.branches.iter().enumerate() {
            by_source[b.from].push(k);
        }
        let mut paths: Vec<Branch> = self.branches.clone();
        for _ in 1..n {
            let mut next = Vec::new();
            for p in &paths {
                for &k in &by_source[p.to] {
                    if next.len() >= BRANCH_BUDGET {
                        return Err(Error::OverBudget {
                            what: "iterated branches",
                            requested: (next.len() + 1) as f64,
                            limit: BRANCH_BUDGET as f64,
                        });
                    }
                    let b = &self.branches[k];
                    next.push(Branch {
                        from: p.from,
                        to: b.to,
                        deriv: Enclosure::new(p.deriv.lo * b.deriv.lo, p.deriv.hi * b.deriv.hi).outward(1),
                    });
                }
            }
            paths = next;
        }
        MarkovSystem::new(self.ambient, self.cells.clone(), paths)
    }

    /// Smallest `n <= MAX_ITERATE` whose `n`-step products of lower derivative
    /// bounds all exceed 1.
    pub fn expanding_iterate(&self) -> Option<usize> {
        if self.branches.is_empty() {
            return None;
        }
        // min over n-paths ending at each cell of the summed log lower bounds
        let m = self.cells.len();
        let mut best = vec![0.0f64; m];
        for n in 1..=MAX_ITERATE {
            let mut next = vec![f64::INFINITY; m];
            for b in &self.branches {
                let v = best[b.from] + b.deriv.lo.ln();
                if v < next[b.to] {
                    next[b.to] = v;
                }
            }
            // Cells never reached by an n-path impose no constraint.
            let worst = next.iter().copied().fold(f64::INFINITY, f64::min);
            if worst > 0.0 {
                return Some(n);
            }
            best = next;
        }
        None
    }

    fn expanding_form(&self) -> Result<(MarkovSystem, usize)> {
        if self.is_expanding() {
            return Ok((self.clone(), 1));
        }
        match self.expanding_iterate() {
            Some(n) => Ok((self.power_system(n)?, n)),
            None => Err(Error::NotExpanding),
        }
    }
}

/// Pressure enclosure `[P_lo, P_hi]` (nats) at exponent `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureSample {
    pub s: f64,
    pub enclosure: Enclosure,
}

/// Certified `[lower, upper]` bracket of a Hausdorff dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionInterval {
    pub lower: f64,
    pub upper: f64,
}

impl DimensionInterval {
    pub fn new(lower: f64, upper: f64) -> Self {
        DimensionInterval { lower, upper }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn as_enclosure(&self) -> Enclosure {
        Enclosure::new(self.lower, self.upper)
    }
}

/// Bounds on Lyapunov exponents of all ergodic measures of the system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovBounds {
    pub chi_min: f64,
    pub chi_max: f64,
}

impl LyapunovBounds {
    /// Center `χ` of the `(χ, ε)` description.
    pub fn chi(&self) -> f64 {
        0.5 * (self.chi_min + self.chi_max)
    }

    /// Radius `ε` of the `(χ, ε)` description.
    pub fn epsilon(&self) -> f64 {
        0.5 * (self.chi_max - self.chi_min)
    }
}

/// Entropy and Lyapunov exponent of an ergodic measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicData {
    pub h_mu: f64,
    pub chi_mu: f64,
}

/// Reusable pressure evaluation for one system.
#[derive(Debug, Clone)]
pub struct PressureCurve {
    solver: PerronSolver,
    log_lo: Vec<f64>,
    log_hi: Vec<f64>,
    scale: f64,
    tol: f64,
}

impl PressureCurve {
    pub fn new(ms: &MarkovSystem, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if ms.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(Self::build(ms, 1, tol))
    }

    fn build(ms: &MarkovSystem, iterate: usize, tol: f64) -> Self {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); ms.cells.len()];
        for b in &ms.branches {
            rows[b.from].push(b.to);
        }
        let solver = PerronSolver::new(ms.cells.len(), |i| rows[i].iter().copied());
        PressureCurve {
            solver,
            log_lo: ms.branches.iter().map(|b| b.deriv.lo.ln().next_down()).collect(),
            log_hi: ms.branches.iter().map(|b| b.deriv.hi.ln().next_up()).collect(),
            scale: iterate as f64,
            tol,
        }
    }

    /// Lower pressure (weights from the largest derivatives).
    pub fn lower(&self, s: f64) -> f64 {
        let w: Vec<f64> = self.log_hi.iter().map(|l| (-s * l).exp().next_down()).collect();
        let rho = self.solver.radius(&w, self.tol * 0.1);
        log_down(rho.lo) / self.scale
    }

    /// Upper pressure (weights from the smallest derivatives).
    pub fn upper(&self, s: f64) -> f64 {
        let w: Vec<f64> = self.log_lo.iter().map(|l| (-s * l).exp().next_up()).collect();
        let rho = self.solver.radius(&w, self.tol * 0.1);
        log_up(rho.hi) / self.scale
    }

    pub fn sample(&self, s: f64) -> PressureSample {
        let lo = self.lower(s);
        let hi = self.upper(s).max(lo);
        PressureSample {
            s,
            enclosure: Enclosure::new(lo, hi),
        }
    }
}

fn log_down(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln().next_down()
    }
}

fn log_up(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln().next_up()
    }
}

/// Pressure of `-s log|f'|`.
pub fn pressure(ms: &MarkovSystem, s: f64, tol: f64) -> Result<PressureSample> {
    if !(s >= 0.0) {
        return Err(Error::invalid("pressure exponent must be nonnegative"));
    }
    Ok(PressureCurve::new(ms, tol)?.sample(s))
}

/// Hausdorff dimension of the repeller by bisection on both pressure curves.
///
/// The lower endpoint satisfies `P_lo(lower) >= 0` and the upper endpoint
/// `P_hi(upper) <= 0`, so the zero of the true pressure lies between them.
pub fn bowen_root(ms: &MarkovSystem, tol: f64) -> Result<DimensionInterval> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if ms.is_empty() {
        return Err(Error::EmptySystem);
    }
    let (expanding, n) = ms.expanding_form()?;
    if has_zero_entropy(ms) {
        // finitely many periodic orbits and orbits connecting them
        return Ok(DimensionInterval::new(0.0, 0.0));
    }
    let curve = PressureCurve::build(&expanding, n, tol);
    let top = ms.ambient.dimension();

    let mut right = top + 1.0;
    let mut steps = 0;
    while curve.upper(right) > 0.0 {
        // Only abstract systems with no geometric realization get here.
        right *= 2.0;
        steps += 1;
        if steps > 64 {
            return Err(Error::NotExpanding);
        }
    }

    let lower = bisect(0.0, right, tol, |s| curve.lower(s) >= 0.0);
    let upper = bisect(0.0, right, tol, |s| curve.upper(s) > 0.0).1;
    let lower = lower.0.min(top);
    let upper = upper.min(top).max(lower);
    Ok(DimensionInterval::new(lower, upper))
}

/// True when every strongly connected part of the branch multigraph is a
/// single cycle (or a vertex without a loop).
fn has_zero_entropy(ms: &MarkovSystem) -> bool {
    let n = ms.cells.len();
    let comps = strongly_connected_components(n, |i| ms.transitions.successors(i));
    let mut comp_of = vec![0usize; n];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    let mut internal = vec![0usize; comps.len()];
    for b in &ms.branches {
        if comp_of[b.from] == comp_of[b.to] {
            internal[comp_of[b.from]] += 1;
        }
    }
    comps
        .iter()
        .zip(&internal)
        .all(|(members, &e)| e == 0 || e == members.len())
}

/// Bisection for a predicate true at `a` and false at `b`; returns the final bracket.
fn bisect(mut a: f64, mut b: f64, tol: f64, holds: impl Fn(f64) -> bool) -> (f64, f64) {
    if !holds(a) {
        return (a, a);
    }
    for _ in 0..MAX_BISECTION_STEPS {
        if b - a <= 0.5 * tol {
            break;
        }
        let m = 0.5 * (a + b);
        if holds(m) {
            a = m;
        } else {
            b = m;
        }
    }
    (a, b)
}

/// Per-branch extremes of `log|f'|`.
pub fn lyapunov_bounds(ms: &MarkovSystem) -> Result<LyapunovBounds> {
    if ms.branches.is_empty() {
        return Err(Error::EmptySystem);
    }
    let (expanding, n) = ms.expanding_form()?;
    let chi_min = expanding
        .branches
        .iter()
        .map(|b| b.deriv.lo.ln())
        .fold(f64::INFINITY, f64::min);
    let chi_max = expanding
        .branches
        .iter()
        .map(|b| b.deriv.hi.ln())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(LyapunovBounds {
        chi_min: (chi_min / n as f64).next_down(),
        chi_max: (chi_max / n as f64).next_up(),
    })
}

/// Tightened bounds from the minimum mean cycle of `log deriv_lo` and the
/// maximum mean cycle of `log deriv_hi` (Karp). Ergodic averages lie in
/// the closed hull of the cycle means.
pub fn lyapunov_bounds_cycle_mean(ms: &MarkovSystem) -> Result<LyapunovBounds> {
    let trimmed = {
        let keep = vec![true; ms.cells.len()];
        ms.restrict(&keep)
    };
    if trimmed.branches.is_empty() {
        return Err(Error::EmptySystem);
    }
    let lo: Vec<f64> = trimmed.branches.iter().map(|b| b.deriv.lo.ln()).collect();
    let hi: Vec<f64> = trimmed.branches.iter().map(|b| -b.deriv.hi.ln()).collect();
    let chi_min = min_mean_cycle(&trimmed, &lo);
    let chi_max = -min_mean_cycle(&trimmed, &hi);
    if !(chi_min > 0.0) {
        return Err(Error::NotExpanding);
    }
    Ok(LyapunovBounds {
        chi_min: chi_min.next_down(),
        chi_max: chi_max.next_up(),
    })
}

/// Minimum cycle mean over all cycles (Karp's theorem per strongly connected
/// component, two passes so memory stays linear).
fn min_mean_cycle(ms: &MarkovSystem, weight: &[f64]) -> f64 {
    let n = ms.cells.len();
    let comps = strongly_connected_components(n, |i| ms.transitions.successors(i));
    let mut comp_of = vec![usize::MAX; n];
    let mut local = vec![0usize; n];
    for (c, members) in comps.iter().enumerate() {
        for (k, &v) in members.iter().enumerate() {
            comp_of[v] = c;
            local[v] = k;
        }
    }
    let mut best = f64::INFINITY;
    for (c, members) in comps.iter().enumerate() {
        let edges: Vec<(usize, usize, f64)> = ms
            .branches
            .iter()
            .zip(weight)
            .filter(|(b, _)| comp_of[b.from] == c && comp_of[b.to] == c)
            .map(|(b, &w)| (local[b.from], local[b.to], w))
            .collect();
        if edges.is_empty() {
            continue;
        }
        let m = members.len();
        let step = |d: &[f64]| {
            let mut next = vec![f64::INFINITY; m];
            for &(u, v, w) in &edges {
                let x = d[u] + w;
                if x < next[v] {
                    next[v] = x;
                }
            }
            next
        };
        let mut d = vec![f64::INFINITY; m];
        d[0] = 0.0;
        for _ in 0..m {
            d = step(&d);
        }
        let dm = d;
        let mut worst = vec![f64::NEG_INFINITY; m];
        let mut d = vec![f64::INFINITY; m];
        d[0] = 0.0;
        for k in 0..m {
            for v in 0..m {
                if dm[v].is_finite() && d[v].is_finite() {
                    let r = (dm[v] - d[v]) / (m - k) as f64;
                    if r > worst[v] {
                        worst[v] = r;
                    }
                }
            }
            d = step(&d);
        }
        for v in 0..m {
            if dm[v].is_finite() && worst[v] < best {
                best = worst[v];
            }
        }
    }
    best
}

/// Result of [`sandwich_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichReport {
    pub entropy: Enclosure,
    pub lyapunov: LyapunovBounds,
    pub dimension: DimensionInterval,
    /// `h / chi_max`
    pub lower_bound: f64,
    /// `h / chi_min`
    pub upper_bound: f64,
    pub pass: bool,
}

/// Checks `h/chi_max <= dim <= h/chi_min` for the Bowen enclosure.
pub fn sandwich_check(ms: &MarkovSystem, tol: f64) -> Result<SandwichReport> {
    let entropy = PressureCurve::new(ms, tol)?.sample(0.0).enclosure;
    let entropy = Enclosure::new(entropy.lo.max(0.0), entropy.hi.max(0.0));
    let lyapunov = lyapunov_bounds(ms)?;
    let dimension = bowen_root(ms, tol)?;
    let lower_bound = entropy.lo / lyapunov.chi_max;
    let upper_bound = entropy.hi / lyapunov.chi_min;
    let pass = lower_bound - tol <= dimension.lower && dimension.upper <= upper_bound + tol;
    Ok(SandwichReport {
        entropy,
        lyapunov,
        dimension,
        lower_bound,
        upper_bound,
        pass,
    })
}

/// `h_mu / chi_mu`.
pub fn measure_dimension(e: ErgodicData) -> Result<f64> {
    if !(e.chi_mu > 0.0) {
        return Err(Error::NonpositiveExponent);
    }
    Ok(e.h_mu / e.chi_mu)
}

/// `(h_sub / h_full) * (chi_min / chi_max) * dim_full.lower`.
pub fn dimension_lower_bound(
    h_sub: f64,
    h_full: f64,
    lb: &LyapunovBounds,
    dim_full: &DimensionInterval,
) -> Result<f64> {
    if !(h_full > 0.0) {
        return Err(Error::ZeroEntropy);
    }
    if !(h_sub >= 0.0) || h_sub > h_full {
        return Err(Error::invalid("require 0 <= h_sub <= h_full"));
    }
    Ok((h_sub / h_full) * (lb.chi_min / lb.chi_max) * dim_full.lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov_systems::{linear_markov, Region};

    const TOL: f64 = 1e-12;

    fn cell(lo: f64, hi: f64) -> CellGeometry {
        CellGeometry {
            region: Region::Interval(Enclosure::new(lo, hi)),
            depth: 1,
        }
    }

    fn uniform(slopes: &[f64], rows: &[&str]) -> MarkovSystem {
        let sft = Sft::from_rows(rows).unwrap();
        let mut branches = Vec::new();
        for i in 0..slopes.len() {
            for j in sft.successors(i) {
                branches.push(Branch {
                    from: i,
                    to: j,
                    deriv: Enclosure::point(slopes[i]),
                });
            }
        }
        let cells = (0..slopes.len()).map(|i| cell(i as f64, i as f64 + 0.5)).collect();
        MarkovSystem::new(Ambient::Interval, cells, branches).unwrap()
    }

    fn cantor() -> MarkovSystem {
        uniform(&[3.0, 3.0], &["11", "11"])
    }

    #[test]
    fn pressure_examples() {
        let ms = cantor();
        let p0 = pressure(&ms, 0.0, TOL).unwrap().enclosure;
        assert!(p0.contains(2f64.ln()) && p0.width() < 1e-12);
        let p1 = pressure(&ms, 1.0, TOL).unwrap().enclosure;
        assert!((p1.mid() - (2.0f64 / 3.0).ln()).abs() < 1e-12);
        let s = 2f64.ln() / 3f64.ln();
        let ps = pressure(&ms, s, TOL).unwrap().enclosure;
        assert!(ps.lo <= 1e-12 && ps.hi >= -1e-12, "{ps}");
        assert!(pressure(&ms, -1.0, TOL).is_err());
    }

    #[test]
    fn bowen_examples() {
        let d = bowen_root(&cantor(), TOL).unwrap();
        assert!(d.contains(2f64.ln() / 3f64.ln()) && d.width() <= 2.0 * TOL, "{d:?}");
        let d = bowen_root(&uniform(&[2.0, 2.0], &["11", "11"]), TOL).unwrap();
        assert!(d.contains(1.0) && d.width() <= 2.0 * TOL, "{d:?}");
        let single = uniform(&[2.5], &["1"]);
        assert_eq!(bowen_root(&single, TOL).unwrap(), DimensionInterval::new(0.0, 0.0));
        // 2^-s + 4^-s = 1 gives 2^-s = 1/phi
        let mixed = bowen_root(&uniform(&[2.0, 4.0], &["11", "11"]), TOL).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(mixed.contains(phi.ln() / 2f64.ln()), "{mixed:?}");
    }

    #[test]
    fn non_expanding_is_rejected() {
        let ms = uniform(&[0.9, 0.9], &["11", "11"]);
        assert_eq!(bowen_root(&ms, TOL), Err(Error::NotExpanding));
        assert_eq!(lyapunov_bounds(&ms), Err(Error::NotExpanding));
    }

    #[test]
    fn eventually_expanding_uses_iterate() {
        // 0 -> 1 -> 0 with derivatives 0.8 and 2: two-step product 1.6
        let ms = uniform(&[0.8, 2.0], &["01", "10"]);
        assert!(!ms.is_expanding());
        assert_eq!(ms.expanding_iterate(), Some(2));
        let p2 = ms.power_system(2).unwrap();
        assert!(p2.is_expanding());
        assert_eq!(bowen_root(&ms, TOL).unwrap(), DimensionInterval::new(0.0, 0.0));
        let lb = lyapunov_bounds(&ms).unwrap();
        assert!((lb.chi_min - 0.5 * 1.6f64.ln()).abs() < 1e-12);

        // full 2-branch system with one contracting branch
        let ms = uniform(&[0.9, 4.0], &["01", "11"]);
        let n = ms.expanding_iterate().unwrap();
        let direct = bowen_root(&ms, TOL).unwrap();
        let via_power = bowen_root(&ms.power_system(n).unwrap(), TOL).unwrap();
        assert!((direct.mid() - via_power.mid()).abs() < 1e-10);
    }

    #[test]
    fn lyapunov_examples() {
        let lb = lyapunov_bounds(&cantor()).unwrap();
        assert!((lb.chi_min - 3f64.ln()).abs() < 1e-15 && (lb.chi_max - 3f64.ln()).abs() < 1e-15);
        let lb = lyapunov_bounds(&uniform(&[2.0, 4.0], &["11", "11"])).unwrap();
        assert!((lb.chi_min - 2f64.ln()).abs() < 1e-15 && (lb.chi_max - 4f64.ln()).abs() < 1e-15);
        assert!((lb.chi() - 0.5 * (2f64.ln() + 4f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn cycle_means_tighten() {
        // 0 -> 1 -> 0 only: every orbit alternates slopes 2 and 8, mean log 4
        let ms = uniform(&[2.0, 8.0], &["01", "10"]);
        let coarse = lyapunov_bounds(&ms).unwrap();
        let tight = lyapunov_bounds_cycle_mean(&ms).unwrap();
        assert!((tight.chi_min - 4f64.ln()).abs() < 1e-12);
        assert!((tight.chi_max - 4f64.ln()).abs() < 1e-12);
        assert!(coarse.chi_min < tight.chi_min && tight.chi_max < coarse.chi_max);

        let ms = uniform(&[2.0, 8.0], &["11", "11"]);
        let tight = lyapunov_bounds_cycle_mean(&ms).unwrap();
        assert!((tight.chi_min - 2f64.ln()).abs() < 1e-12);
        assert!((tight.chi_max - 8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sandwich_examples() {
        let r = sandwich_check(&cantor(), TOL).unwrap();
        assert!(r.pass);
        assert!((r.lower_bound - r.upper_bound).abs() < 1e-12);
        let r = sandwich_check(&uniform(&[2.0, 4.0], &["11", "11"]), TOL).unwrap();
        assert!(r.pass);
        assert!((r.lower_bound - 0.5).abs() < 1e-12 && (r.upper_bound - 1.0).abs() < 1e-12);
        assert!(r.dimension.lower >= 0.5 - TOL && r.dimension.upper <= 1.0 + TOL);
    }

    #[test]
    fn measure_dimension_examples() {
        let d = |h: f64, c: f64| measure_dimension(ErgodicData { h_mu: h, chi_mu: c });
        assert!((d(2f64.ln(), 3f64.ln()).unwrap() - 0.630_929_753_571_457_4).abs() < 1e-15);
        assert_eq!(d(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(d(2f64.ln(), 2f64.ln()).unwrap(), 1.0);
        assert_eq!(d(1.0, 0.0), Err(Error::NonpositiveExponent));
    }

    #[test]
    fn lower_bound_examples() {
        let cantor_lb = LyapunovBounds {
            chi_min: 3f64.ln(),
            chi_max: 3f64.ln(),
        };
        let s = 2f64.ln() / 3f64.ln();
        let dim = DimensionInterval::new(s, s);
        let h = 2f64.ln();
        assert_eq!(dimension_lower_bound(h, h, &cantor_lb, &dim).unwrap(), s);
        assert!((dimension_lower_bound(0.5 * h, h, &cantor_lb, &dim).unwrap() - 0.315_464_876_785_728_7).abs() < 1e-15);
        assert_eq!(dimension_lower_bound(0.0, h, &cantor_lb, &dim).unwrap(), 0.0);
        assert_eq!(dimension_lower_bound(0.0, 0.0, &cantor_lb, &dim), Err(Error::ZeroEntropy));
    }

    #[test]
    fn pressure_contains_entropy_at_zero() {
        let ms = linear_markov(&[2.0, 2.0], &Sft::golden_mean(), &[(0.0, 0.5), (0.75, 1.0)]).unwrap();
        let h = ms.transitions().entropy(TOL).bounds().unwrap();
        let p0 = pressure(&ms, 0.0, TOL).unwrap().enclosure;
        assert!(p0.overlaps(&h));
    }
}
