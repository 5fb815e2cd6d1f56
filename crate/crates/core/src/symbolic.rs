//! Alphabet, incidence matrix and admissible words of the subshift of finite
//! type, plus the correspondence between integer translates and words that
//! every scaling operator relies on.
//!
//! Digit convention: a word `ω = (ω_0, …, ω_{n-1})` is read as a big-endian
//! base-`N` numeral, so `ω_{n-1-i}` is the coefficient of `N^i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square 0/1 transition matrix over the alphabet `{0, …, N-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceMatrix {
    size: usize,
    bits: Vec<bool>,
}

impl IncidenceMatrix {
    /// Builds the matrix from 0/1 rows. Rejects non-square input, entries
    /// other than 0/1, `N < 2`, and dead symbols (all-zero rows or columns).
    pub fn new(rows: &[Vec<u8>]) -> Result<Self> {
        let size = rows.len();
        if size < 2 {
            return Err(Error::Input(format!(
                "alphabet size must be at least 2, got {size}"
            )));
        }
        let mut bits = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Input(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => bits.push(false),
                    1 => bits.push(true),
                    other => {
                        return Err(Error::Input(format!(
                            "entry ({i},{j}) is {other}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        let m = IncidenceMatrix { size, bits };
        for i in 0..size {
            if !(0..size).any(|j| m.allows(i, j)) {
                return Err(Error::Input(format!("row {i} has no allowed transition")));
            }
            if !(0..size).any(|j| m.allows(j, i)) {
                return Err(Error::Input(format!("column {i} has no allowed transition")));
            }
        }
        Ok(m)
    }

    /// All transitions allowed (the iterated-function-system case).
    pub fn full(size: usize) -> Result<Self> {
        Self::new(&vec![vec![1u8; size]; size])
    }

    /// `[[1,1],[1,0]]`, the incidence matrix of the golden-mean shift.
    pub fn golden_mean() -> Self {
        Self::new(&[vec![1, 1], vec![1, 0]]).expect("golden-mean matrix is valid")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.size + j]
    }

    /// Symbols `j` with `A_ij = 1`, ascending.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&j| self.allows(i, j))
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.successors(i).count()
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.allows(i, j) as u8).collect())
            .collect()
    }

    pub fn check_symbol(&self, s: usize) -> Result<()> {
        if s < self.size {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: s,
                size: self.size,
            })
        }
    }
}

/// Finite admissible word of length at least one; names a cylinder set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    /// Checked constructor: nonempty, symbols in range, admissible under `a`.
    pub fn new(a: &IncidenceMatrix, symbols: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Input("words must have length at least 1".into()));
        }
        if !is_admissible(a, &symbols)? {
            return Err(Error::Inadmissible(digits(&symbols)));
        }
        Ok(Word(symbols))
    }

    pub fn letter(a: &IncidenceMatrix, s: usize) -> Result<Self> {
        a.check_symbol(s)?;
        Ok(Word(vec![s]))
    }

    /// Caller guarantees admissibility.
    pub(crate) fn from_vec_unchecked(symbols: Vec<usize>) -> Self {
        debug_assert!(!symbols.is_empty());
        Word(symbols)
    }

    /// Parses a digit string such as `"010"` (one character per symbol,
    /// base 36 for alphabets larger than ten).
    pub fn parse(a: &IncidenceMatrix, s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Input(format!("bad symbol character {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(a, symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// `ωj` if the junction is allowed.
    pub fn extend(&self, a: &IncidenceMatrix, j: usize) -> Option<Word> {
        if a.allows(self.last(), j) {
            let mut v = self.0.clone();
            v.push(j);
            Some(Word(v))
        } else {
            None
        }
    }

    /// Concatenation `ωσ` if `A_{ω_last σ_0} = 1`.
    pub fn concat(&self, a: &IncidenceMatrix, other: &Word) -> Option<Word> {
        if a.allows(self.last(), other.first()) {
            let mut v = self.0.clone();
            v.extend_from_slice(&other.0);
            Some(Word(v))
        } else {
            None
        }
    }

    /// First `n` symbols, `1 <= n <= len`.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Symbols from index `n` on, `n < len`.
    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// All admissible words of length `len` that start with `self`, in
    /// lexicographic order. Returns `[self]` when `len == self.len()`.
    pub fn extensions(&self, a: &IncidenceMatrix, len: usize) -> Vec<Word> {
        let mut out = vec![self.clone()];
        for _ in self.len()..len {
            out = out
                .iter()
                .flat_map(|w| a.successors(w.last()).filter_map(move |j| w.extend(a, j)))
                .collect();
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits(&self.0))
    }
}

fn digits(symbols: &[usize]) -> String {
    symbols
        .iter()
        .map(|&s| std::char::from_digit(s as u32, 36).unwrap_or('?'))
        .collect()
}

/// `Σ_A^n` in lexicographic order.
pub fn enumerate_words(a: &IncidenceMatrix, n: usize) -> Vec<Word> {
    if n == 0 {
        return Vec::new();
    }
    (0..a.size())
        .flat_map(|s| Word(vec![s]).extensions(a, n))
        .collect()
}

/// True iff every adjacent pair is allowed by `a`.
pub fn is_admissible(a: &IncidenceMatrix, seq: &[usize]) -> Result<bool> {
    for &s in seq {
        a.check_symbol(s)?;
    }
    Ok(seq.windows(2).all(|p| a.allows(p[0], p[1])))
}

/// `c(ω) = Σ_i ω_{n-1-i} N^i`.
pub fn word_offset(w: &Word, n: usize) -> i64 {
    w.0.iter().fold(0i64, |acc, &s| acc * n as i64 + s as i64)
}

/// `N^n`; panics on overflow, which only happens for scales far beyond
/// anything representable as a step function.
pub fn block_size(n_symbols: usize, scale: usize) -> i64 {
    (n_symbols as i64)
        .checked_pow(scale as u32)
        .expect("N^n overflows i64")
}

/// `m = c(ω) + N^n·block`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslateDecomposition {
    pub word: Word,
    pub block: i64,
}

impl TranslateDecomposition {
    pub fn reconstruct(&self, n_symbols: usize) -> i64 {
        word_offset(&self.word, n_symbols)
            + block_size(n_symbols, self.word.len()) * self.block
    }
}

/// Splits `m` into the admissible word spelled by its `n` low base-`N`
/// digits and the block index. Returns `None` when those digits are not
/// admissible.
pub fn decompose_translate(m: i64, n: usize, a: &IncidenceMatrix) -> Option<TranslateDecomposition> {
    if n == 0 {
        return None;
    }
    let base = a.size() as i64;
    let modulus = block_size(a.size(), n);
    let r = m.rem_euclid(modulus);
    let block = (m - r) / modulus;
    let mut symbols = vec![0usize; n];
    let mut rest = r;
    for slot in symbols.iter_mut().rev() {
        *slot = (rest % base) as usize;
        rest /= base;
    }
    if symbols.windows(2).all(|p| a.allows(p[0], p[1])) {
        Some(TranslateDecomposition {
            word: Word(symbols),
            block,
        })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> IncidenceMatrix {
        IncidenceMatrix::golden_mean()
    }

    fn w(v: &[usize]) -> Word {
        Word::new(&golden(), v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_dead_symbols_and_small_alphabets() {
        assert!(IncidenceMatrix::new(&[vec![1, 0], vec![1, 0]]).is_err());
        assert!(IncidenceMatrix::new(&[vec![1, 1], vec![0, 0]]).is_err());
        assert!(IncidenceMatrix::new(&[vec![1]]).is_err());
        assert!(IncidenceMatrix::new(&[vec![1, 2], vec![1, 1]]).is_err());
        assert!(IncidenceMatrix::new(&[vec![1, 1], vec![1]]).is_err());
    }

    #[test]
    fn golden_mean_words() {
        let a = golden();
        assert_eq!(enumerate_words(&a, 1), vec![w(&[0]), w(&[1])]);
        assert_eq!(
            enumerate_words(&a, 2),
            vec![w(&[0, 0]), w(&[0, 1]), w(&[1, 0])]
        );
        assert_eq!(enumerate_words(&a, 4).len(), 8);
    }

    #[test]
    fn admissibility() {
        let a = golden();
        assert!(is_admissible(&a, &[0, 1, 0]).unwrap());
        assert!(!is_admissible(&a, &[1, 1]).unwrap());
        assert!(is_admissible(&a, &[1]).unwrap());
        assert!(matches!(
            is_admissible(&a, &[0, 2]),
            Err(Error::SymbolOutOfRange { symbol: 2, .. })
        ));
    }

    #[test]
    fn offsets() {
        assert_eq!(word_offset(&w(&[0]), 2), 0);
        assert_eq!(word_offset(&w(&[0, 1]), 2), 1);
        assert_eq!(word_offset(&w(&[1, 0]), 2), 2);
    }

    #[test]
    fn decompositions() {
        let a = golden();
        let d = decompose_translate(5, 2, &a).unwrap();
        assert_eq!(d.word, w(&[0, 1]));
        assert_eq!(d.block, 1);
        assert!(decompose_translate(3, 2, &a).is_none());
        let d = decompose_translate(-4, 2, &a).unwrap();
        assert_eq!(d.word, w(&[0, 0]));
        assert_eq!(d.block, -1);
    }

    #[test]
    fn word_parsing_and_display() {
        let a = golden();
        assert_eq!(Word::parse(&a, "010").unwrap(), w(&[0, 1, 0]));
        assert!(Word::parse(&a, "011").is_err());
        assert_eq!(w(&[1, 0, 0]).to_string(), "100");
    }

    #[test]
    fn extensions_and_concat() {
        let a = golden();
        assert_eq!(w(&[0, 1]).extensions(&a, 4), vec![w(&[0, 1, 0, 0]), w(&[0, 1, 0, 1])]);
        assert_eq!(w(&[1]).concat(&a, &w(&[0, 1])), Some(w(&[1, 0, 1])));
        assert_eq!(w(&[1]).concat(&a, &w(&[1, 0])), None);
    }
}
