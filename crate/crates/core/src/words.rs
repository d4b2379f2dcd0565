//! Primitive operations on q-ary words.
//!
//! A [`Word`] is a finite sequence of small non-negative integer symbols. It
//! does not carry its alphabet size; validity against an [`Alphabet`] is
//! checked when words are admitted into a [`Code`](crate::codes::Code).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub type Symbol = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("length {k} out of range for word of length {len}")]
    Range { k: usize, len: usize },
    #[error("word of length {len} is too short (need at least {min})")]
    TooShort { len: usize, min: usize },
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(Symbol),
    #[error("symbol {symbol} is not in the alphabet of size {q}")]
    SymbolOutOfRange { symbol: Symbol, q: Symbol },
    #[error("cannot parse word {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// The alphabet `{0, .., q-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    q: Symbol,
}

impl Alphabet {
    pub fn new(q: Symbol) -> Result<Self, WordError> {
        if q < 2 {
            return Err(WordError::AlphabetTooSmall(q));
        }
        Ok(Alphabet { q })
    }

    #[inline]
    pub fn size(self) -> Symbol {
        self.q
    }

    pub fn contains(self, symbol: Symbol) -> bool {
        symbol < self.q
    }

    pub fn validate(self, word: &Word) -> Result<(), WordError> {
        match word.symbols().iter().find(|&&s| !self.contains(s)) {
            Some(&symbol) => Err(WordError::SymbolOutOfRange { symbol, q: self.q }),
            None => Ok(()),
        }
    }

    /// All words of length `len` in lexicographic order.
    pub fn words_of_length(self, len: usize) -> impl Iterator<Item = Word> {
        let q = self.q;
        let total = (q as u64).checked_pow(len as u32);
        let mut current = Some(vec![0; len]);
        let mut emitted = 0u64;
        std::iter::from_fn(move || {
            let word = current.take()?;
            emitted += 1;
            if total.is_none_or(|t| emitted < t) {
                let mut next = word.clone();
                // odometer increment, last symbol fastest
                for slot in next.iter_mut().rev() {
                    *slot += 1;
                    if *slot < q {
                        break;
                    }
                    *slot = 0;
                }
                current = Some(next);
            }
            Some(Word(word))
        })
    }

    /// All words with lengths in `min_len..=max_len`, in canonical order.
    pub fn words_up_to(self, min_len: usize, max_len: usize) -> impl Iterator<Item = Word> {
        (min_len..=max_len).flat_map(move |len| self.words_of_length(len))
    }

    /// Renders a word in the text form used by code files.
    pub fn render(self, word: &Word) -> String {
        if self.q <= 10 {
            word.symbols()
                .iter()
                .map(|s| char::from_digit(*s, 10).unwrap_or('?'))
                .collect()
        } else {
            word.comma_form()
        }
    }

    /// Parses either the digit form (only for `q <= 10`) or the
    /// comma-separated form, and checks every symbol against the alphabet.
    pub fn parse(self, text: &str) -> Result<Word, WordError> {
        let text = text.trim();
        let err = |reason: &str| WordError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if text.is_empty() {
            return Err(err("empty word"));
        }
        let symbols: Vec<Symbol> = if text.contains(',') || self.q > 10 {
            text.split(',')
                .map(|part| part.trim().parse::<Symbol>().map_err(|_| err("bad symbol")))
                .collect::<Result<_, _>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| err("expected a decimal digit")))
                .collect::<Result<_, _>>()?
        };
        let word = Word(symbols);
        self.validate(&word)?;
        Ok(word)
    }
}

/// An immutable sequence of symbols.
///
/// Ordering is shorter-first, then lexicographic; every set of words in this
/// crate iterates in that order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn max_symbol(&self) -> Option<Symbol> {
        self.0.iter().copied().max()
    }

    /// The first `k` symbols; `k = 0` gives the empty word.
    pub fn prefix(&self, k: usize) -> Result<Word, WordError> {
        self.check_len(k)?;
        Ok(Word(self.0[..k].to_vec()))
    }

    /// The last `k` symbols; `k = 0` gives the empty word.
    pub fn suffix(&self, k: usize) -> Result<Word, WordError> {
        self.check_len(k)?;
        Ok(Word(self.0[self.len() - k..].to_vec()))
    }

    fn check_len(&self, k: usize) -> Result<(), WordError> {
        if k > self.len() {
            Err(WordError::Range { k, len: self.len() })
        } else {
            Ok(())
        }
    }

    /// Nontrivial prefixes: lengths `1..len`.
    pub fn proper_prefixes(&self) -> BTreeSet<Word> {
        (1..self.len()).map(|k| Word(self.0[..k].to_vec())).collect()
    }

    /// Nontrivial suffixes: lengths `1..len`.
    pub fn proper_suffixes(&self) -> BTreeSet<Word> {
        let n = self.len();
        (1..n).map(|k| Word(self.0[n - k..].to_vec())).collect()
    }

    pub fn concat(&self, tail: &Word) -> Word {
        let mut symbols = Vec::with_capacity(self.len() + tail.len());
        symbols.extend_from_slice(&self.0);
        symbols.extend_from_slice(&tail.0);
        Word(symbols)
    }

    /// Smallest offset `j` at which `self` occurs inside `haystack`.
    pub fn find_in(&self, haystack: &Word) -> Option<usize> {
        find_subword(&self.0, &haystack.0)
    }

    pub fn is_subword_of(&self, haystack: &Word) -> bool {
        self.find_in(haystack).is_some()
    }

    pub fn is_proper_prefix_of(&self, other: &Word) -> bool {
        self.len() < other.len() && other.0.starts_with(&self.0)
    }

    /// True iff no nontrivial prefix of the word is also a suffix of it.
    pub fn is_self_non_overlapping(&self) -> Result<bool, WordError> {
        if self.len() < 2 {
            return Err(WordError::TooShort {
                len: self.len(),
                min: 2,
            });
        }
        Ok(longest_border(&self.0) == 0)
    }

    pub fn comma_form(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        parts.join(",")
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }
}

impl From<&[Symbol]> for Word {
    fn from(symbols: &[Symbol]) -> Self {
        Word(symbols.to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        if self.0.iter().all(|&s| s < 10) {
            for &s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            f.write_str(&self.comma_form())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Naive scan; the words handled here are at most a few dozen symbols.
pub fn find_subword(needle: &[Symbol], haystack: &[Symbol]) -> Option<usize> {
    if needle.is_empty() {
        return Some(0);
    }
    if needle.len() > haystack.len() {
        return None;
    }
    haystack.windows(needle.len()).position(|w| w == needle)
}

/// Length of the longest nontrivial border, via the prefix function.
pub fn longest_border(symbols: &[Symbol]) -> usize {
    let n = symbols.len();
    if n == 0 {
        return 0;
    }
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && symbols[i] != symbols[k] {
            k = pi[k - 1];
        }
        if symbols[i] == symbols[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi[n - 1]
}

/// Smallest `k` in `1..min(|u|,|v|)` with `prefix(u,k) = suffix(v,k)`.
///
/// This is condition 1 for the ordered pair `(u, v)`: any common element of
/// the proper prefixes of `u` and the proper suffixes of `v` has one length.
pub fn shared_prefix_suffix(u: &[Symbol], v: &[Symbol]) -> Option<usize> {
    let limit = u.len().min(v.len());
    (1..limit).find(|&k| u[..k] == v[v.len() - k..])
}
