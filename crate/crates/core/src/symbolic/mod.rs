//! Subshifts of finite type.
//!
//! An [`Sft`] is a finite alphabet `{0, .., d-1}` together with an allowed
//! transition relation. Entropy is the logarithm of the Perron root of the
//! 0/1 transition matrix; the word-counting routines are the brute-force
//! check on that.

mod code;
mod words;

pub use code::{forbid_words, higher_block, power_shift, prune, BlockCode, CodeKind};
pub use words::{a_n_cylinders, preimage_cylinders, CylinderSet, Word};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

// unused when std is linked, which provides the inherent float methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::interval::Enclosure;
use crate::linalg::{component_period, strongly_connected_components, PerronSolver};

/// Alphabets up to this size keep one `u64` bitmask per row.
pub const DENSE_LIMIT: usize = 64;

/// Enumeration guard for [`Sft::count_words`]: `d^n` may not exceed this.
pub const COUNT_BUDGET: f64 = 1e8;

/// Upper bound on the number of symbols produced by recodings.
pub const ALPHABET_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Rows {
    Dense(Vec<u64>),
    Sparse(Vec<Vec<u32>>),
}

/// A one-sided subshift of finite type. The alphabet size `0` is the
/// distinguished empty system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    size: usize,
    rows: Rows,
    labels: Option<Vec<String>>,
}

/// Iterator over the allowed successors of a symbol, in increasing order.
pub enum Successors<'a> {
    Bits(u64),
    List(core::slice::Iter<'a, u32>),
}

impl Iterator for Successors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            Successors::Bits(b) => {
                if *b == 0 {
                    None
                } else {
                    let j = b.trailing_zeros() as usize;
                    *b &= *b - 1;
                    Some(j)
                }
            }
            Successors::List(it) => it.next().map(|&j| j as usize),
        }
    }
}

impl Sft {
    pub fn empty() -> Self {
        Sft {
            size: 0,
            rows: Rows::Dense(Vec::new()),
            labels: None,
        }
    }

    /// Full shift on `d` symbols.
    pub fn full(d: usize) -> Self {
        let succ = (0..d).map(|_| (0..d as u32).collect()).collect();
        Sft::from_successors(d, succ).expect("full shift is well formed")
    }

    /// The golden-mean shift: symbol 1 may not follow itself.
    pub fn golden_mean() -> Self {
        Sft::from_rows(&["11", "10"]).expect("golden mean is well formed")
    }

    pub fn from_successors(size: usize, mut succ: Vec<Vec<u32>>) -> Result<Self> {
        if succ.len() != size {
            return Err(Error::invalid("successor table length differs from alphabet size"));
        }
        for row in succ.iter_mut() {
            row.sort_unstable();
            row.dedup();
            if row.last().is_some_and(|&j| j as usize >= size) {
                return Err(Error::invalid("transition target outside alphabet"));
            }
        }
        let rows = if size <= DENSE_LIMIT {
            Rows::Dense(
                succ.iter()
                    .map(|r| r.iter().fold(0u64, |m, &j| m | (1u64 << j)))
                    .collect(),
            )
        } else {
            Rows::Sparse(succ)
        };
        Ok(Sft {
            size,
            rows,
            labels: None,
        })
    }

    pub fn from_matrix(m: &[Vec<bool>]) -> Result<Self> {
        let d = m.len();
        let mut succ = Vec::with_capacity(d);
        for row in m {
            if row.len() != d {
                return Err(Error::invalid("transition matrix is not square"));
            }
            succ.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(j, _)| j as u32)
                    .collect(),
            );
        }
        Sft::from_successors(d, succ)
    }

    /// Rows written as strings of `0`/`1`, e.g. `["11", "10"]`.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let mut m = Vec::with_capacity(rows.len());
        for r in rows {
            let mut row = Vec::with_capacity(r.len());
            for ch in r.chars() {
                match ch {
                    '0' => row.push(false),
                    '1' => row.push(true),
                    _ => return Err(Error::invalid("transition rows must contain only 0 and 1")),
                }
            }
            m.push(row);
        }
        Sft::from_matrix(&m)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::invalid("label count differs from alphabet size"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn alphabet_size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.rows, Rows::Dense(_))
    }

    pub fn allows(&self, i: usize, j: usize) -> bool {
        match &self.rows {
            Rows::Dense(r) => r[i] >> j & 1 == 1,
            Rows::Sparse(r) => r[i].binary_search(&(j as u32)).is_ok(),
        }
    }

    pub fn successors(&self, i: usize) -> Successors<'_> {
        match &self.rows {
            Rows::Dense(r) => Successors::Bits(r[i]),
            Rows::Sparse(r) => Successors::List(r[i].iter()),
        }
    }

    pub fn out_degree(&self, i: usize) -> usize {
        match &self.rows {
            Rows::Dense(r) => r[i].count_ones() as usize,
            Rows::Sparse(r) => r[i].len(),
        }
    }

    pub fn edge_count(&self) -> usize {
        (0..self.size).map(|i| self.out_degree(i)).sum()
    }

    pub fn predecessor_lists(&self) -> Vec<Vec<u32>> {
        let mut pred = vec![Vec::new(); self.size];
        for i in 0..self.size {
            for j in self.successors(i) {
                pred[j].push(i as u32);
            }
        }
        pred
    }

    pub fn successor_lists(&self) -> Vec<Vec<u32>> {
        (0..self.size)
            .map(|i| self.successors(i).map(|j| j as u32).collect())
            .collect()
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.allows(i, j)).collect())
            .collect()
    }

    /// Same alphabet size and transition relation (labels ignored).
    pub fn same_transitions(&self, other: &Sft) -> bool {
        self.size == other.size && (0..self.size).all(|i| self.successors(i).eq(other.successors(i)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display label of a symbol: explicit label if present, else a base-36 digit
    /// (or the decimal index with a leading `#` beyond 36 symbols).
    pub fn label(&self, i: usize) -> String {
        if let Some(l) = &self.labels {
            return l[i].clone();
        }
        symbol_digit(i, self.size)
    }

    /// Subsystem induced on the symbols with `keep[i] == true`. Returns the new
    /// system and the original index of each kept symbol.
    pub fn induced(&self, keep: &[bool]) -> (Sft, Vec<usize>) {
        let kept: Vec<usize> = (0..self.size).filter(|&i| keep[i]).collect();
        let mut new_index = vec![u32::MAX; self.size];
        for (k, &i) in kept.iter().enumerate() {
            new_index[i] = k as u32;
        }
        let succ = kept
            .iter()
            .map(|&i| {
                self.successors(i)
                    .filter(|&j| keep[j])
                    .map(|j| new_index[j])
                    .collect()
            })
            .collect();
        let mut sft = Sft::from_successors(kept.len(), succ).expect("induced subsystem is well formed");
        if let Some(l) = &self.labels {
            sft.labels = Some(kept.iter().map(|&i| l[i].clone()).collect());
        }
        (sft, kept)
    }

    /// Removes symbols that lie on no bi-infinite admissible path.
    pub fn trim(&self) -> Sft {
        self.trim_with_map().0
    }

    /// [`Sft::trim`] plus the original index of every surviving symbol.
    pub fn trim_with_map(&self) -> (Sft, Vec<usize>) {
        let n = self.size;
        let mut alive = vec![true; n];
        let mut out_deg: Vec<usize> = (0..n).map(|i| self.out_degree(i)).collect();
        let pred = self.predecessor_lists();
        let mut in_deg: Vec<usize> = pred.iter().map(Vec::len).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&i| out_deg[i] == 0 || in_deg[i] == 0).collect();
        for &i in &queue {
            alive[i] = false;
        }
        while let Some(v) = queue.pop() {
            for w in self.successors(v) {
                if alive[w] {
                    in_deg[w] -= 1;
                    if in_deg[w] == 0 {
                        alive[w] = false;
                        queue.push(w);
                    }
                }
            }
            for &u in &pred[v] {
                let u = u as usize;
                if alive[u] {
                    out_deg[u] -= 1;
                    if out_deg[u] == 0 {
                        alive[u] = false;
                        queue.push(u);
                    }
                }
            }
        }
        if alive.iter().all(|&a| !a) {
            return (Sft::empty(), Vec::new());
        }
        self.induced(&alive)
    }

    /// Strongly connected components of the transition digraph with periods.
    pub fn components(&self) -> ComponentReport {
        let comps = strongly_connected_components(self.size, |i| self.successors(i));
        let components: Vec<Component> = comps
            .into_iter()
            .map(|symbols| {
                let period = component_period(&symbols, self.size, |i| self.successors(i));
                Component { symbols, period }
            })
            .collect();
        let irreducible = self.size > 0 && components.len() == 1 && components[0].period > 0;
        let mixing = irreducible && components[0].period == 1;
        ComponentReport {
            components,
            irreducible,
            mixing,
        }
    }

    /// Certified enclosure of the Perron root of the transition matrix.
    pub fn spectral_radius(&self, tol: f64) -> Enclosure {
        if self.size == 0 {
            return Enclosure::point(0.0);
        }
        let solver = PerronSolver::new(self.size, |i| self.successors(i));
        let ones = vec![1.0; self.edge_count()];
        solver.radius(&ones, tol)
    }

    /// Topological entropy in nats.
    pub fn entropy(&self, tol: f64) -> EntropyValue {
        let rho = self.spectral_radius(tol);
        // Integer matrices have radius 0 or at least 1.
        if rho.hi < 0.5 {
            return EntropyValue::Empty;
        }
        let lo = rho.lo.max(1.0).ln().max(0.0);
        let hi = rho.hi.max(1.0).ln().next_up();
        EntropyValue::Bounds(Enclosure::new(lo.min(hi), hi))
    }

    /// Exact number of admissible words of length `n`, by enumeration.
    pub fn count_words(&self, n: usize) -> Result<u128> {
        if n == 0 {
            return Err(Error::invalid("word length must be positive"));
        }
        if self.size == 0 {
            return Ok(0);
        }
        let requested = (self.size as f64).powi(n as i32);
        if requested > COUNT_BUDGET {
            return Err(Error::OverBudget {
                what: "word enumeration",
                requested,
                limit: COUNT_BUDGET,
            });
        }
        let mut count: u128 = 0;
        // Explicit DFS over admissible prefixes: (last symbol, length).
        let mut stack: Vec<(usize, usize)> = (0..self.size).map(|s| (s, 1)).collect();
        while let Some((last, len)) = stack.pop() {
            if len == n {
                count += 1;
                continue;
            }
            for next in self.successors(last) {
                stack.push((next, len + 1));
            }
        }
        Ok(count)
    }

    /// Number of admissible words of length `n` via the transfer recursion
    /// (sum of the entries of the `(n-1)`-th matrix power). Saturates at `u128::MAX`.
    pub fn count_words_transfer(&self, n: usize) -> u128 {
        if n == 0 || self.size == 0 {
            return 0;
        }
        let mut v = vec![1u128; self.size];
        for _ in 1..n {
            let mut w = vec![0u128; self.size];
            for i in 0..self.size {
                if v[i] == 0 {
                    continue;
                }
                for j in self.successors(i) {
                    w[j] = w[j].saturating_add(v[i]);
                }
            }
            v = w;
        }
        v.iter().fold(0u128, |a, &b| a.saturating_add(b))
    }

    /// All admissible words of length `n` in lexicographic order.
    pub fn admissible_words(&self, n: usize) -> Result<Vec<Vec<u32>>> {
        if n == 0 || self.size == 0 {
            return Ok(Vec::new());
        }
        let mut level: Vec<Vec<u32>> = (0..self.size as u32).map(|s| vec![s]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for w in &level {
                for s in self.successors(*w.last().unwrap() as usize) {
                    if next.len() >= ALPHABET_BUDGET {
                        return Err(Error::OverBudget {
                            what: "admissible words",
                            requested: (next.len() + 1) as f64,
                            limit: ALPHABET_BUDGET as f64,
                        });
                    }
                    let mut x = w.clone();
                    x.push(s as u32);
                    next.push(x);
                }
            }
            level = next;
        }
        Ok(level)
    }

    pub fn is_admissible(&self, word: &[u32]) -> bool {
        !word.is_empty()
            && word.iter().all(|&s| (s as usize) < self.size)
            && word.windows(2).all(|p| self.allows(p[0] as usize, p[1] as usize))
    }
}

pub(crate) fn symbol_digit(i: usize, size: usize) -> String {
    if size <= 36 {
        let c = core::char::from_digit(i as u32, 36).unwrap();
        let mut s = String::new();
        s.push(c);
        s
    } else {
        alloc::format!("#{i}")
    }
}

/// Topological entropy (nats) or the marker for an empty language.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyValue {
    Empty,
    Bounds(Enclosure),
}

impl EntropyValue {
    pub fn is_empty(&self) -> bool {
        matches!(self, EntropyValue::Empty)
    }

    /// Midpoint of the enclosure.
    pub fn value(&self) -> Option<f64> {
        match self {
            EntropyValue::Empty => None,
            EntropyValue::Bounds(e) => Some(e.mid()),
        }
    }

    pub fn bounds(&self) -> Option<Enclosure> {
        match self {
            EntropyValue::Empty => None,
            EntropyValue::Bounds(e) => Some(*e),
        }
    }

    /// Lower endpoint, with the empty language ordered below every value.
    pub fn lower_or_neg_inf(&self) -> f64 {
        self.bounds().map_or(f64::NEG_INFINITY, |e| e.lo)
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyValue::Empty => f.write_str("empty"),
            EntropyValue::Bounds(e) => e.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub symbols: Vec<usize>,
    /// gcd of cycle lengths; 0 for a single symbol without a self-loop.
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    pub irreducible: bool,
    pub mixing: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOG_PHI: f64 = 0.481_211_825_059_603_4;

    #[test]
    fn trim_examples() {
        assert!(Sft::full(2).trim().same_transitions(&Sft::full(2)));
        assert!(Sft::from_rows(&["01", "00"]).unwrap().trim().is_empty());
        let with_dead = Sft::from_rows(&["111", "101", "000"]).unwrap();
        let (t, kept) = with_dead.trim_with_map();
        assert!(t.same_transitions(&Sft::golden_mean()));
        assert_eq!(kept, vec![0, 1]);
    }

    #[test]
    fn trim_removes_chains_into_sinks() {
        // 0 <-> 0, 0 -> 1 -> 2 (2 is a sink): only symbol 0 survives
        let s = Sft::from_rows(&["110", "001", "000"]).unwrap();
        let (t, kept) = s.trim_with_map();
        assert_eq!(kept, vec![0]);
        assert_eq!(t.alphabet_size(), 1);
        assert!(t.allows(0, 0));
    }

    #[test]
    fn components_examples() {
        let r = Sft::full(2).components();
        assert_eq!(r.components, vec![Component { symbols: vec![0, 1], period: 1 }]);
        assert!(r.irreducible && r.mixing);

        let r = Sft::from_rows(&["010", "001", "100"]).unwrap().components();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].period, 3);
        assert!(r.irreducible && !r.mixing);

        let r = Sft::from_rows(&["110", "110", "001"]).unwrap().components();
        let periods: Vec<usize> = r.components.iter().map(|c| c.period).collect();
        assert_eq!(periods, vec![1, 1]);
        assert!(!r.irreducible);
    }

    #[test]
    fn entropy_examples() {
        let e = Sft::full(2).entropy(1e-12).bounds().unwrap();
        assert!(e.contains(2f64.ln()) && e.width() <= 1e-12);
        let e = Sft::golden_mean().entropy(1e-12).bounds().unwrap();
        assert!(e.contains(LOG_PHI), "{e}");
        assert!(Sft::from_rows(&["01", "00"]).unwrap().entropy(1e-12).is_empty());
        assert!(Sft::empty().entropy(1e-12).is_empty());
        // a single periodic orbit has zero entropy, not an empty language
        let e = Sft::from_rows(&["01", "10"]).unwrap().entropy(1e-12);
        assert!(e.value().unwrap().abs() < 1e-15);
    }

    #[test]
    fn count_words_examples() {
        assert_eq!(Sft::full(2).count_words(3).unwrap(), 8);
        assert_eq!(Sft::golden_mean().count_words(4).unwrap(), 8);
        assert_eq!(Sft::empty().count_words(5).unwrap(), 0);
        assert!(matches!(Sft::full(10).count_words(9), Err(Error::OverBudget { .. })));
        for n in 1..15 {
            assert_eq!(
                Sft::golden_mean().count_words(n).unwrap(),
                Sft::golden_mean().count_words_transfer(n)
            );
        }
    }

    #[test]
    fn golden_mean_growth_matches_entropy() {
        // log-growth fit from consecutive counts (ratio of Fibonacci numbers)
        let g = Sft::golden_mean();
        let c24 = g.count_words(24).unwrap() as f64;
        let c25 = g.count_words(25).unwrap() as f64;
        assert!(((c25 / c24).ln() - LOG_PHI).abs() < 1e-9);
    }

    #[test]
    fn large_alphabets_use_sparse_rows() {
        assert!(Sft::full(64).is_dense());
        let s = Sft::full(65);
        assert!(!s.is_dense());
        assert!(s.allows(64, 0));
        let e = s.entropy(1e-12).bounds().unwrap();
        assert!(e.contains(65f64.ln()));
    }
}
