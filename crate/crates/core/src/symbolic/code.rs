//! Recodings of an SFT by blocks of symbols.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::{CylinderSet, Sft, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    /// Symbols are `N`-words overlapping in `N - 1` places; conjugate to the base.
    HigherBlock,
    /// Symbols are `N`-words concatenated without overlap; represents `σ^N`.
    Power,
}

/// Dictionary between a recoded SFT and its base alphabet. `words[i]` is
/// the base word of coded symbol `i`; the list is sorted, so lookups are
/// binary searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCode {
    kind: CodeKind,
    block_len: usize,
    base_size: usize,
    words: Vec<Vec<u32>>,
}

impl BlockCode {
    pub fn identity(base: &Sft) -> BlockCode {
        BlockCode {
            kind: CodeKind::HigherBlock,
            block_len: 1,
            base_size: base.alphabet_size(),
            words: (0..base.alphabet_size() as u32).map(|s| alloc::vec![s]).collect(),
        }
    }

    pub(crate) fn from_words(kind: CodeKind, block_len: usize, base_size: usize, words: Vec<Vec<u32>>) -> BlockCode {
        BlockCode {
            kind,
            block_len,
            base_size,
            words,
        }
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word_of(&self, symbol: usize) -> &[u32] {
        &self.words[symbol]
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn symbol_of(&self, word: &[u32]) -> Option<usize> {
        self.words.binary_search_by(|w| w.as_slice().cmp(word)).ok()
    }

    /// Coded word of a base word. Higher-block codes read sliding windows
    /// (result length `len - N + 1`); power codes read consecutive chunks
    /// (length must be a multiple of `N`).
    pub fn encode(&self, base_word: &[u32]) -> Option<Vec<u32>> {
        let n = self.block_len;
        if base_word.len() < n {
            return None;
        }
        match self.kind {
            CodeKind::HigherBlock => base_word
                .windows(n)
                .map(|w| self.symbol_of(w).map(|s| s as u32))
                .collect(),
            CodeKind::Power => {
                if base_word.len() % n != 0 {
                    return None;
                }
                base_word
                    .chunks(n)
                    .map(|w| self.symbol_of(w).map(|s| s as u32))
                    .collect()
            }
        }
    }

    pub fn decode(&self, coded: &[u32]) -> Vec<u32> {
        let mut out = Vec::new();
        for (k, &s) in coded.iter().enumerate() {
            let w = &self.words[s as usize];
            match self.kind {
                CodeKind::HigherBlock if k > 0 => out.push(*w.last().unwrap()),
                _ => out.extend_from_slice(w),
            }
        }
        out
    }

    /// Code restricted to the listed coded symbols (in their new order).
    pub fn restrict(&self, kept: &[usize]) -> BlockCode {
        BlockCode {
            kind: self.kind,
            block_len: self.block_len,
            base_size: self.base_size,
            words: kept.iter().map(|&i| self.words[i].clone()).collect(),
        }
    }

    /// Image of a base cylinder set in the coded alphabet.
    ///
    /// Higher-block: a base cylinder of depth `k` becomes the coded words of
    /// length `max(1, k - N + 1)` whose decoding starts with it. Power: coded
    /// words of `ceil(k / N)` blocks whose decoding starts with it.
    pub fn transport(&self, target: &CylinderSet, coded: &Sft) -> Result<CylinderSet> {
        let k = target.depth();
        if target
            .iter()
            .any(|w| w.iter().any(|&s| s as usize >= self.base_size))
        {
            return Err(Error::DepthMismatch);
        }
        if coded.alphabet_size() != self.words.len() {
            return Err(Error::DepthMismatch);
        }
        let n = self.block_len;
        let depth = match self.kind {
            CodeKind::HigherBlock => k.saturating_sub(n).saturating_add(1).max(1),
            CodeKind::Power => k.div_ceil(n),
        };
        let mut out = BTreeSet::new();
        // Enumerate coded words of the target depth whose decoding has a
        // prefix in the target; first symbols are pruned by prefix agreement.
        let mut stack: Vec<Vec<u32>> = Vec::new();
        for s in 0..self.words.len() {
            if prefix_compatible(&self.decode(&[s as u32]), target) {
                stack.push(alloc::vec![s as u32]);
            }
        }
        while let Some(w) = stack.pop() {
            let base = self.decode(&w);
            if w.len() == depth {
                if target.contains(&base[..k]) {
                    out.insert(Word::from_vec(w));
                }
                continue;
            }
            for s in coded.successors(*w.last().unwrap() as usize) {
                let mut x = w.clone();
                x.push(s as u32);
                if prefix_compatible(&self.decode(&x), target) {
                    stack.push(x);
                }
            }
        }
        Ok(CylinderSet::from_raw(depth, out))
    }
}

fn prefix_compatible(base: &[u32], target: &CylinderSet) -> bool {
    let k = target.depth();
    if base.len() >= k {
        target.contains(&base[..k])
    } else {
        target.iter().any(|w| w.starts_with(base))
    }
}

fn coded_labels(base: &Sft, words: &[Vec<u32>]) -> Vec<String> {
    words
        .iter()
        .map(|w| w.iter().map(|&s| base.label(s as usize)).collect::<String>())
        .collect()
}

/// The `N`-block presentation of `sft` (conjugate to it).
pub fn higher_block(sft: &Sft, n: usize) -> Result<(Sft, BlockCode)> {
    if sft.is_empty() {
        return Err(Error::EmptySystem);
    }
    if n == 0 {
        return Err(Error::invalid("block length must be positive"));
    }
    let words = sft.admissible_words(n)?;
    let code = BlockCode {
        kind: CodeKind::HigherBlock,
        block_len: n,
        base_size: sft.alphabet_size(),
        words,
    };
    let mut succ = Vec::with_capacity(code.words.len());
    let mut shifted: Vec<u32> = Vec::with_capacity(n);
    for w in &code.words {
        let mut row = Vec::new();
        shifted.clear();
        shifted.extend_from_slice(&w[1..]);
        shifted.push(0);
        for b in sft.successors(*w.last().unwrap() as usize) {
            *shifted.last_mut().unwrap() = b as u32;
            if let Some(t) = code.symbol_of(&shifted) {
                row.push(t as u32);
            }
        }
        succ.push(row);
    }
    let labels = coded_labels(sft, &code.words);
    let coded = Sft::from_successors(code.words.len(), succ)?.with_labels(labels)?;
    Ok((coded, code))
}

/// The `N`-th power `σ^N` as an SFT on admissible `N`-words.
pub fn power_shift(sft: &Sft, n: usize) -> Result<(Sft, BlockCode)> {
    if sft.is_empty() {
        return Err(Error::EmptySystem);
    }
    if n == 0 {
        return Err(Error::invalid("power must be positive"));
    }
    let words = sft.admissible_words(n)?;
    // Sorted words with equal first symbol form contiguous ranges.
    let d = sft.alphabet_size();
    let mut first_range = alloc::vec![(0usize, 0usize); d];
    let mut start = 0;
    while start < words.len() {
        let f = words[start][0];
        let mut end = start;
        while end < words.len() && words[end][0] == f {
            end += 1;
        }
        first_range[f as usize] = (start, end);
        start = end;
    }
    let succ = words
        .iter()
        .map(|w| {
            let mut row = Vec::new();
            for b in sft.successors(*w.last().unwrap() as usize) {
                let (s, e) = first_range[b];
                row.extend((s..e).map(|t| t as u32));
            }
            row
        })
        .collect();
    let labels = coded_labels(sft, &words);
    let code = BlockCode {
        kind: CodeKind::Power,
        block_len: n,
        base_size: d,
        words,
    };
    let coded = Sft::from_successors(code.words.len(), succ)?.with_labels(labels)?;
    Ok((coded, code))
}

/// Survivor subsystem avoiding every word of `forbidden`, presented on
/// blocks of length `max(depth, 2)` and trimmed. The returned code lists
/// the base block of each surviving symbol.
pub fn prune(sft: &Sft, forbidden: &CylinderSet) -> Result<(Sft, BlockCode)> {
    if sft.is_empty() {
        return Ok((Sft::empty(), BlockCode::identity(sft)));
    }
    let len = forbidden.depth().max(2);
    let (coded, code) = higher_block(sft, len)?;
    let keep: Vec<bool> = code.words.iter().map(|w| !forbidden.occurs_in(w)).collect();
    let (induced, kept) = coded.induced(&keep);
    let (trimmed, kept2) = induced.trim_with_map();
    let survivors: Vec<usize> = kept2.iter().map(|&i| kept[i]).collect();
    Ok((trimmed, code.restrict(&survivors)))
}

/// Survivor SFT avoiding `forbidden` (may be empty).
pub fn forbid_words(sft: &Sft, forbidden: &CylinderSet) -> Result<Sft> {
    prune(sft, forbidden).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const TOL: f64 = 1e-12;
    const LOG_PHI: f64 = 0.481_211_825_059_603_4;

    fn h(s: &Sft) -> f64 {
        s.entropy(TOL).value().unwrap()
    }

    #[test]
    fn higher_block_examples() {
        let (s1, c1) = higher_block(&Sft::golden_mean(), 1).unwrap();
        assert!(s1.same_transitions(&Sft::golden_mean()));
        assert_eq!(c1.len(), 2);

        let (s3, _) = higher_block(&Sft::full(2), 3).unwrap();
        assert_eq!(s3.alphabet_size(), 8);
        assert!((h(&s3) - 2f64.ln()).abs() <= 2.0 * TOL);

        let (g2, code) = higher_block(&Sft::golden_mean(), 2).unwrap();
        assert_eq!(code.words(), &[vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(g2.labels().unwrap(), &["00", "01", "10"]);
        assert!((h(&g2) - LOG_PHI).abs() <= 2.0 * TOL);
    }

    #[test]
    fn power_shift_examples() {
        let (p, _) = power_shift(&Sft::full(2), 2).unwrap();
        assert!(p.same_transitions(&Sft::full(4)));
        let (gp, _) = power_shift(&Sft::golden_mean(), 2).unwrap();
        assert!((h(&gp) - 2.0 * LOG_PHI).abs() <= 2.0 * TOL);
        // brute force growth of the power shift itself
        let c = gp.count_words(12).unwrap() as f64 / gp.count_words(11).unwrap() as f64;
        assert!((c.ln() - 0.962_423_650_119_206_9).abs() < 1e-6);
    }

    #[test]
    fn encode_decode() {
        let f = Sft::full(2);
        let (_, hb) = higher_block(&f, 3).unwrap();
        let w = [0u32, 1, 1, 0, 1];
        let c = hb.encode(&w).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(hb.decode(&c), w);
        let (_, pw) = power_shift(&f, 2).unwrap();
        assert_eq!(pw.encode(&w), None);
        let c = pw.encode(&w[..4]).unwrap();
        assert_eq!(pw.decode(&c), &w[..4]);
    }

    #[test]
    fn forbid_examples() {
        let f = Sft::full(2);
        let cyl = |ws: &[&[u32]]| {
            CylinderSet::from_words(&f, ws[0].len(), ws.iter().map(|w| w.to_vec())).unwrap()
        };
        assert!((h(&forbid_words(&f, &cyl(&[&[0, 0]])).unwrap()) - LOG_PHI).abs() < 1e-11);
        let single = forbid_words(&f, &cyl(&[&[0]])).unwrap();
        assert_eq!(single.alphabet_size(), 1);
        assert!(h(&single).abs() < 1e-15);
        // largest root of x^3 = x^2 + x + 1
        let trib = 1.839_286_755_214_161_1f64.ln();
        assert!((h(&forbid_words(&f, &cyl(&[&[0, 0, 0]])).unwrap()) - trib).abs() < 1e-11);
        assert!(forbid_words(&f, &cyl(&[&[0], &[1]])).unwrap().is_empty());
        let none = forbid_words(&f, &CylinderSet::empty(1)).unwrap();
        assert!((h(&none) - 2f64.ln()).abs() < 1e-11);
    }

    #[test]
    fn transport_examples() {
        let g = Sft::golden_mean();
        let (g2, code) = higher_block(&g, 2).unwrap();
        let target = CylinderSet::from_words(&g, 1, [vec![0]]).unwrap();
        let t = code.transport(&target, &g2).unwrap();
        // coded symbols 0 = "00", 1 = "01"
        assert_eq!(t.depth(), 1);
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![&[0u32][..], &[1u32][..]]);

        let f = Sft::full(2);
        let (f3, code3) = higher_block(&f, 3).unwrap();
        let t = code3
            .transport(&CylinderSet::from_words(&f, 3, [vec![0, 0, 0]]).unwrap(), &f3)
            .unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(code3.word_of(t.iter().next().unwrap()[0] as usize), &[0, 0, 0]);

        let (f1, id) = higher_block(&f, 1).unwrap();
        let c = CylinderSet::from_words(&f, 2, [vec![0, 1]]).unwrap();
        assert_eq!(id.transport(&c, &f1).unwrap(), c);

        let bad = CylinderSet::from_words(&Sft::full(3), 1, [vec![2]]).unwrap();
        assert_eq!(code3.transport(&bad, &f3), Err(Error::DepthMismatch));
    }
}
