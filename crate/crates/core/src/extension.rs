//! Extending a variable-length non-overlapping code to a fixed-length one.
//!
//! With `n` the longest codeword length of `S`, every codeword `s` is
//! replaced by
//!
//! ```text
//! ext(s) = { s ‖ suffix(x, n - |s|) : x ∈ S, |x| > n - |s| }
//! ```
//!
//! The union of these sets is a fixed-length code of length `n`. When `S` is
//! non-overlapping the result is non-overlapping too, the sets `ext(s)` are
//! pairwise disjoint, and the union has at least `|S|` words. Since the union
//! is a fixed-length code of length `n`, `|S| <= C(n, q)`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::codes::{check_non_overlapping, Code, CodeError};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("cannot extend an empty code")]
    EmptyCode,
    #[error("suffix length {k} out of range 1..{max_len}")]
    Range { k: usize, max_len: usize },
    #[error("{0} is not a codeword")]
    NotACodeword(Word),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// `suf(S, k)`: the distinct length-`k` suffixes of codewords longer than `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixSet {
    pub k: usize,
    pub suffixes: BTreeSet<Word>,
}

impl SuffixSet {
    pub fn len(&self) -> usize {
        self.suffixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.suffixes.is_empty()
    }
}

fn longest(code: &Code) -> Result<usize, ExtensionError> {
    code.max_len().ok_or(ExtensionError::EmptyCode)
}

pub fn suffix_set(code: &Code, k: usize) -> Result<SuffixSet, ExtensionError> {
    let max_len = longest(code)?;
    if k == 0 || k >= max_len {
        return Err(ExtensionError::Range { k, max_len });
    }
    Ok(SuffixSet {
        k,
        suffixes: raw_suffixes(code, k),
    })
}

fn raw_suffixes(code: &Code, k: usize) -> BTreeSet<Word> {
    code.iter()
        .filter(|x| x.len() > k)
        .map(|x| Word::from(&x.symbols()[x.len() - k..]))
        .collect()
}

fn extend_word(word: &Word, code: &Code, n: usize) -> BTreeSet<Word> {
    let pad = n - word.len();
    if pad == 0 {
        // every suffix of length 0 is the empty word
        return BTreeSet::from([word.clone()]);
    }
    raw_suffixes(code, pad)
        .iter()
        .map(|tail| word.concat(tail))
        .collect()
}

/// The extension set of one codeword.
pub fn per_word_extension(word: &Word, code: &Code) -> Result<BTreeSet<Word>, ExtensionError> {
    if !code.contains(word) {
        return Err(ExtensionError::NotACodeword(word.clone()));
    }
    Ok(extend_word(word, code, longest(code)?))
}

/// Extends a non-overlapping code to a fixed-length non-overlapping code of
/// the same maximum length.
pub fn extend(code: &Code) -> Result<Code, ExtensionError> {
    longest(code)?;
    check_non_overlapping(code)?;
    extend_unchecked(code)
}

/// The same construction without the non-overlap precondition.
///
/// Only meaningful for demonstrating what happens when the hypothesis
/// fails; nothing is guaranteed about the output.
pub fn extend_unchecked(code: &Code) -> Result<Code, ExtensionError> {
    let n = longest(code)?;
    let words = code.iter().flat_map(|s| extend_word(s, code, n)).collect();
    Ok(Code::from_set(code.alphabet(), words))
}

/// `|S_n| + Σ_{i=m}^{n-1} |suf(S, n-i)| · |S_i|`, computed from the slices
/// and suffix sets without materializing the extension.
pub fn extension_size(code: &Code) -> Result<usize, ExtensionError> {
    let n = longest(code)?;
    let m = code.min_len().unwrap_or(n);
    check_non_overlapping(code)?;
    let mut total = code.slice_len(n);
    for i in m..n {
        let slice = code.slice_len(i);
        if slice > 0 {
            total += suffix_set(code, n - i)?.len() * slice;
        }
    }
    Ok(total)
}
