//! Nonnegative sparse matrices and certified Perron root enclosures.
//!
//! The spectral radius of a nonnegative matrix is the maximum over the
//! diagonal blocks of its strongly connected components. Within an
//! irreducible block, every positive vector `x` satisfies the
//! Collatz–Wielandt bracket
//!
//! ```text
//! min_i (Ax)_i / x_i  <=  rho(A)  <=  max_i (Ax)_i / x_i
//! ```
//!
//! so power iteration yields a shrinking enclosure rather than a point
//! estimate. Blocks with period `p > 1` are iterated on `A + alpha I`,
//! which is primitive and shares the Perron vector of `A`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::Enclosure;

/// Power-iteration cap per irreducible block.
pub const MAX_POWER_ITERATIONS: usize = 1_000_000;
/// Default width target for radius enclosures.
pub const DEFAULT_TOL: f64 = 1e-12;

const STALL_WINDOW: usize = 200;

/// Square nonnegative matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl NonnegMatrix {
    pub fn zeros(n: usize) -> Self {
        NonnegMatrix {
            n,
            row_ptr: vec![0; n + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid("matrix is not square"));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, triplets)
    }

    /// Builds from `(row, col, value)` entries; duplicates are summed and
    /// explicit zeros dropped.
    pub fn from_triplets<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut entries: Vec<(usize, usize, f64)> = entries.into_iter().collect();
        for &(i, j, v) in &entries {
            if i >= n || j >= n {
                return Err(Error::invalid("matrix index out of range"));
            }
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid("matrix entries must be finite and nonnegative"));
            }
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            if v == 0.0 {
                continue;
            }
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            last = Some((i, j));
            row_ptr[i + 1] += 1;
            cols.push(j as u32);
            vals.push(v);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(NonnegMatrix {
            n,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .zip(&self.vals[r])
            .map(|(&j, &v)| (j as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn spectral_radius(&self, tol: f64) -> Enclosure {
        let solver = PerronSolver::new(self.n, |i| self.row(i).map(|(j, _)| j));
        solver.radius(&self.vals, tol)
    }
}

/// Convenience wrapper: certified enclosure of the Perron root of `m`.
pub fn spectral_radius(m: &NonnegMatrix, tol: f64) -> Result<Enclosure> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    Ok(m.spectral_radius(tol))
}

/// Strongly connected components (iterative Tarjan). Components are
/// returned with sorted members, ordered by smallest member.
pub fn strongly_connected_components<F, I>(n: usize, successors: F) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut next_index = 0usize;

    // Materialized adjacency keeps the explicit DFS stack simple.
    let adj: Vec<Vec<usize>> = (0..n).map(|v| successors(v).collect()).collect();
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Period (gcd of cycle lengths) of a strongly connected vertex set.
/// Returns 0 for a single vertex without a self-loop.
pub fn component_period<F, I>(members: &[usize], n: usize, successors: F) -> usize
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut in_comp = vec![false; n];
    for &v in members {
        in_comp[v] = true;
    }
    let mut level = vec![usize::MAX; n];
    let root = members[0];
    level[root] = 0;
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(root);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        for v in successors(u) {
            if !in_comp[v] {
                continue;
            }
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                let d = (level[u] + 1).abs_diff(level[v]);
                g = gcd(g, d);
            }
        }
    }
    g
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Debug, Clone)]
enum Block {
    /// Single vertex carrying the value indices of its self-loops.
    Loop(Vec<usize>),
    Cyclic {
        row_ptr: Vec<usize>,
        cols: Vec<u32>,
        /// Position of each local entry in the global value array.
        slots: Vec<usize>,
        period: usize,
    },
}

/// Precomputed block structure for repeated radius evaluations on a fixed
/// sparsity pattern with varying weights (pressure curves, bisection).
#[derive(Debug, Clone)]
pub struct PerronSolver {
    n: usize,
    nnz: usize,
    max_row_nnz: usize,
    blocks: Vec<Block>,
}

impl PerronSolver {
    /// `successors(i)` must enumerate the column indices of row `i` in the
    /// same order as the value array later passed to [`PerronSolver::radius`].
    pub fn new<F, I>(n: usize, successors: F) -> Self
    where
        F: Fn(usize) -> I,
        I: Iterator<Item = usize>,
    {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| successors(i).collect()).collect();
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + rows[i].len();
        }
        let max_row_nnz = rows.iter().map(Vec::len).max().unwrap_or(0);
        let comps = strongly_connected_components(n, |i| rows[i].iter().copied());
        let mut comp_of = vec![0usize; n];
        let mut local = vec![0usize; n];
        for (c, members) in comps.iter().enumerate() {
            for (k, &v) in members.iter().enumerate() {
                comp_of[v] = c;
                local[v] = k;
            }
        }
        let mut blocks = Vec::new();
        for (c, members) in comps.iter().enumerate() {
            if members.len() == 1 {
                let v = members[0];
                let slots: Vec<usize> = (0..rows[v].len())
                    .filter(|&pos| rows[v][pos] == v)
                    .map(|pos| offsets[v] + pos)
                    .collect();
                if !slots.is_empty() {
                    blocks.push(Block::Loop(slots));
                }
                continue;
            }
            let mut row_ptr = Vec::with_capacity(members.len() + 1);
            row_ptr.push(0);
            let mut cols = Vec::new();
            let mut slots = Vec::new();
            for &v in members {
                for (pos, &j) in rows[v].iter().enumerate() {
                    if comp_of[j] == c {
                        cols.push(local[j] as u32);
                        slots.push(offsets[v] + pos);
                    }
                }
                row_ptr.push(cols.len());
            }
            let period = component_period(members, n, |i| rows[i].iter().copied());
            blocks.push(Block::Cyclic {
                row_ptr,
                cols,
                slots,
                period,
            });
        }
        PerronSolver {
            n,
            nnz: offsets[n],
            max_row_nnz,
            blocks,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Enclosure of the spectral radius for the given entry values (laid out
    /// row by row in successor order).
    pub fn radius(&self, vals: &[f64], tol: f64) -> Enclosure {
        assert_eq!(vals.len(), self.nnz, "value array does not match pattern");
        // relative rounding slack of one Collatz–Wielandt ratio
        let slack = (self.max_row_nnz as f64 + 3.0) * f64::EPSILON;
        let mut best = Enclosure::point(0.0);
        for block in &self.blocks {
            let e = match block {
                Block::Loop(slots) => Enclosure::point(slots.iter().map(|&s| vals[s]).sum()).outward(slots.len() as u32),
                Block::Cyclic {
                    row_ptr,
                    cols,
                    slots,
                    period,
                } => {
                    let local: Vec<f64> = slots.iter().map(|&s| vals[s]).collect();
                    let raw = power_iterate(row_ptr, cols, &local, *period, tol);
                    raw.inflate_rel(slack)
                }
            };
            best = Enclosure::new(best.lo.max(e.lo), best.hi.max(e.hi));
        }
        Enclosure::new(best.lo.max(0.0), best.hi.max(0.0))
    }
}

fn power_iterate(row_ptr: &[usize], cols: &[u32], vals: &[f64], period: usize, tol: f64) -> Enclosure {
    let m = row_ptr.len() - 1;
    let mut x = vec![1.0f64; m];
    let mut y = vec![0.0f64; m];

    let mut min_row = f64::INFINITY;
    let mut max_row: f64 = 0.0;
    for i in 0..m {
        let s: f64 = vals[row_ptr[i]..row_ptr[i + 1]].iter().sum();
        min_row = min_row.min(s);
        max_row = max_row.max(s);
    }
    if max_row == 0.0 {
        return Enclosure::point(0.0);
    }
    // Row sums bracket the radius; they are the Collatz–Wielandt ratios of x = 1.
    let mut lo = min_row;
    let mut hi = max_row;
    let shift = if period > 1 { 0.5 * (min_row + max_row) } else { 0.0 };

    let mut best_width = hi - lo;
    let mut since_improved = 0usize;
    for _ in 0..MAX_POWER_ITERATIONS {
        if hi - lo <= tol {
            break;
        }
        for i in 0..m {
            let mut acc = 0.0;
            for k in row_ptr[i]..row_ptr[i + 1] {
                acc += vals[k] * x[cols[k] as usize];
            }
            y[i] = acc;
        }
        let mut rmin = f64::INFINITY;
        let mut rmax: f64 = 0.0;
        for i in 0..m {
            let r = y[i] / x[i];
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
        if rmin.is_finite() {
            lo = lo.max(rmin);
        }
        if rmax.is_finite() {
            hi = hi.min(rmax);
        }
        let mut norm: f64 = 0.0;
        for i in 0..m {
            y[i] += shift * x[i];
            norm = norm.max(y[i]);
        }
        if !(norm > 0.0) || !norm.is_finite() {
            break;
        }
        let mut degenerate = false;
        for i in 0..m {
            x[i] = y[i] / norm;
            if !(x[i] > 0.0) {
                degenerate = true;
            }
        }
        if degenerate {
            // Underflow in the iterate; the bracket collected so far stays valid.
            break;
        }
        let w = hi - lo;
        if w < best_width {
            best_width = w;
            since_improved = 0;
        } else {
            since_improved += 1;
            if since_improved >= STALL_WINDOW {
                break;
            }
        }
    }
    if lo > hi {
        // Only reachable through rounding when the bracket has collapsed.
        let mid = 0.5 * (lo + hi);
        return Enclosure::new(mid, mid);
    }
    Enclosure::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[f64]]) -> NonnegMatrix {
        NonnegMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_radius_is_one() {
        let e = dense(&[&[1.0, 0.0], &[0.0, 1.0]]).spectral_radius(1e-12);
        assert!(e.contains(1.0) && e.width() <= 1e-12);
    }

    #[test]
    fn golden_ratio() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let e = dense(&[&[1.0, 1.0], &[1.0, 0.0]]).spectral_radius(1e-12);
        assert!(e.contains(phi), "{e}");
        assert!(e.width() <= 1e-12);
    }

    #[test]
    fn reducible_takes_block_maximum() {
        let e = dense(&[&[2.0, 1.0], &[0.0, 1.0]]).spectral_radius(1e-12);
        assert!(e.contains(2.0) && e.width() <= 1e-12);
    }

    #[test]
    fn zero_matrix_and_nilpotent() {
        assert_eq!(NonnegMatrix::zeros(3).spectral_radius(1e-12), Enclosure::point(0.0));
        let e = dense(&[&[0.0, 1.0], &[0.0, 0.0]]).spectral_radius(1e-12);
        assert_eq!(e, Enclosure::point(0.0));
    }

    #[test]
    fn periodic_block_converges() {
        // 3-cycle with weights 1, 2, 4: radius = 8^(1/3) = 2.
        let e = dense(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0], &[4.0, 0.0, 0.0]]).spectral_radius(1e-12);
        assert!(e.contains(2.0) && e.width() <= 1e-12, "{e}");
        // bipartite: [[0,A],[B,0]] with radius sqrt(rho(AB))
        let e = dense(&[&[0.0, 0.0, 1.0, 1.0], &[0.0, 0.0, 1.0, 0.0], &[1.0, 1.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0]])
            .spectral_radius(1e-12);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(e.contains(phi), "{e}");
    }

    #[test]
    fn scc_and_period() {
        // 0 -> 1 -> 2 -> 0, 3 -> 3, 2 -> 3
        let adj: [&[usize]; 4] = [&[1], &[2], &[0, 3], &[3]];
        let comps = strongly_connected_components(4, |i| adj[i].iter().copied());
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(component_period(&comps[0], 4, |i| adj[i].iter().copied()), 3);
        assert_eq!(component_period(&comps[1], 4, |i| adj[i].iter().copied()), 1);
    }

    #[test]
    fn duplicates_are_summed() {
        let m = NonnegMatrix::from_triplets(1, [(0, 0, 1.5), (0, 0, 0.5)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), 2.0);
        assert!(NonnegMatrix::from_triplets(1, [(0, 0, -1.0)]).is_err());
    }
}
