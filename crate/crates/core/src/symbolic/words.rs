use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::borrow::Borrow;

use super::Sft;
use crate::error::{Error, Result};

/// A nonempty admissible word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(sft: &Sft, symbols: Vec<u32>) -> Result<Word> {
        if sft.is_admissible(&symbols) {
            Ok(Word(symbols))
        } else {
            Err(Error::Inadmissible)
        }
    }

    pub(crate) fn from_vec(symbols: Vec<u32>) -> Word {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl Borrow<[u32]> for Word {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

/// A finite union of cylinders, all given by words of one common depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderSet {
    depth: usize,
    words: BTreeSet<Word>,
}

impl CylinderSet {
    pub fn empty(depth: usize) -> CylinderSet {
        CylinderSet {
            depth,
            words: BTreeSet::new(),
        }
    }

    /// Validates length and admissibility of every word.
    pub fn from_words<I>(sft: &Sft, depth: usize, words: I) -> Result<CylinderSet>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        if depth == 0 {
            return Err(Error::invalid("cylinder depth must be positive"));
        }
        let mut set = CylinderSet::empty(depth);
        for w in words {
            if w.len() != depth {
                return Err(Error::invalid("cylinder words must share the set depth"));
            }
            set.words.insert(Word::new(sft, w)?);
        }
        Ok(set)
    }

    /// Every admissible word of length `depth`.
    pub fn all(sft: &Sft, depth: usize) -> Result<CylinderSet> {
        let words = sft.admissible_words(depth)?;
        Ok(CylinderSet {
            depth,
            words: words.into_iter().map(Word).collect(),
        })
    }

    pub(crate) fn from_raw(depth: usize, words: BTreeSet<Word>) -> CylinderSet {
        CylinderSet { depth, words }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.words.iter().map(|w| w.symbols())
    }

    pub fn contains(&self, word: &[u32]) -> bool {
        self.words.contains(word)
    }

    /// True if some length-`depth` window of `word` belongs to the set.
    pub fn occurs_in(&self, word: &[u32]) -> bool {
        word.len() >= self.depth && word.windows(self.depth).any(|w| self.words.contains(w))
    }

    pub fn insert(&mut self, sft: &Sft, word: Vec<u32>) -> Result<bool> {
        if word.len() != self.depth {
            return Err(Error::invalid("cylinder words must share the set depth"));
        }
        Ok(self.words.insert(Word::new(sft, word)?))
    }

    /// The same union of cylinders written at depth `m >= depth` by admissible
    /// right extension.
    pub fn extend_to(&self, sft: &Sft, m: usize) -> Result<CylinderSet> {
        if m < self.depth {
            return Err(Error::DepthMismatch);
        }
        let mut out = BTreeSet::new();
        let mut stack: Vec<Vec<u32>> = self.words.iter().map(|w| w.0.clone()).collect();
        while let Some(w) = stack.pop() {
            if w.len() == m {
                out.insert(Word(w));
                continue;
            }
            for s in sft.successors(*w.last().unwrap() as usize) {
                let mut x = w.clone();
                x.push(s as u32);
                stack.push(x);
            }
        }
        Ok(CylinderSet {
            depth: m,
            words: out,
        })
    }

    /// Union after normalizing both sets to the larger depth.
    pub fn union(&self, other: &CylinderSet, sft: &Sft) -> Result<CylinderSet> {
        let m = self.depth.max(other.depth);
        let mut a = self.extend_to(sft, m)?;
        let b = other.extend_to(sft, m)?;
        a.words.extend(b.words);
        Ok(a)
    }

    /// Equality as sets of sequences (compares at the common depth).
    pub fn same_set(&self, other: &CylinderSet, sft: &Sft) -> Result<bool> {
        let m = self.depth.max(other.depth);
        Ok(self.extend_to(sft, m)? == other.extend_to(sft, m)?)
    }
}

/// `sigma^{-j}` of a cylinder union: admissible words of length `depth + j`
/// whose length-`depth` suffix lies in `c`.
pub fn preimage_cylinders(sft: &Sft, c: &CylinderSet, j: usize) -> Result<CylinderSet> {
    if c.is_empty() {
        return Err(Error::invalid("preimage of an empty cylinder set"));
    }
    let pred = sft.predecessor_lists();
    let target = c.depth + j;
    let mut out = BTreeSet::new();
    let mut stack: Vec<Vec<u32>> = c.words.iter().map(|w| w.0.clone()).collect();
    while let Some(w) = stack.pop() {
        if w.len() == target {
            out.insert(Word(w));
            continue;
        }
        for &p in &pred[w[0] as usize] {
            let mut x = vec![p];
            x.extend_from_slice(&w);
            stack.push(x);
        }
    }
    Ok(CylinderSet {
        depth: target,
        words: out,
    })
}

/// `A_N = A ∪ σ^{-1}A ∪ … ∪ σ^{-(N-1)}A` at the common depth `depth(A) + N - 1`.
pub fn a_n_cylinders(sft: &Sft, a: &CylinderSet, n: usize) -> Result<CylinderSet> {
    if a.is_empty() {
        return Err(Error::invalid("A_N of an empty cylinder set"));
    }
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let depth = a.depth + n - 1;
    let mut out = CylinderSet::empty(depth);
    for j in 0..n {
        let pre = preimage_cylinders(sft, a, j)?.extend_to(sft, depth)?;
        out.words.extend(pre.words);
    }
    Ok(out)
}
