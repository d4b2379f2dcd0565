//! Codes and the predicates that certify them.
//!
//! A code is non-overlapping when
//!
//! 1. no nontrivial prefix of a codeword is a nontrivial suffix of any
//!    codeword, the same codeword included, and
//! 2. no codeword occurs as a contiguous subword of a different codeword.
//!
//! Every failed check returns a [`Witness`] that can be re-verified on its own.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::words::{shared_prefix_suffix, Alphabet, Symbol, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("codeword {word} has length {len}; codewords need length at least 2")]
    ShortCodeword { word: Word, len: usize },
    #[error("duplicate codeword {0}")]
    Duplicate(Word),
    #[error("code is overlapping: {0}")]
    Overlapping(Box<Witness>),
    #[error("length bound n = {n} is smaller than the longest codeword ({max_len})")]
    LengthBound { n: usize, max_len: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A finite set of codewords over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    alphabet: Alphabet,
    words: BTreeSet<Word>,
    range: Option<(usize, usize)>,
}

impl Code {
    /// Builds a code, rejecting invalid symbols, codewords shorter than 2,
    /// and repeated codewords.
    pub fn new<I>(alphabet: Alphabet, words: I) -> Result<Self, CodeError>
    where
        I: IntoIterator<Item = Word>,
    {
        let mut set = BTreeSet::new();
        for word in words {
            alphabet.validate(&word)?;
            if word.len() < 2 {
                let len = word.len();
                return Err(CodeError::ShortCodeword { word, len });
            }
            if set.contains(&word) {
                return Err(CodeError::Duplicate(word));
            }
            set.insert(word);
        }
        Ok(Self::from_set(alphabet, set))
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self::from_set(alphabet, BTreeSet::new())
    }

    pub(crate) fn from_set(alphabet: Alphabet, words: BTreeSet<Word>) -> Self {
        let range = match (words.iter().map(Word::len).min(), words.iter().map(Word::len).max()) {
            (Some(m), Some(n)) => Some((m, n)),
            _ => None,
        };
        Code {
            alphabet,
            words,
            range,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn q(&self) -> Symbol {
        self.alphabet.size()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Shortest codeword length `m`, if the code is non-empty.
    pub fn min_len(&self) -> Option<usize> {
        self.range.map(|(m, _)| m)
    }

    /// Longest codeword length `n`, if the code is non-empty.
    pub fn max_len(&self) -> Option<usize> {
        self.range.map(|(_, n)| n)
    }

    pub fn is_fixed_length(&self) -> bool {
        matches!(self.range, Some((m, n)) if m == n)
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.words.contains(word)
    }

    /// Codewords in canonical (shortlex) order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Word> + ExactSizeIterator {
        self.words.iter()
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    /// The slice `S_i` of codewords of length exactly `len`.
    pub fn slice(&self, len: usize) -> impl Iterator<Item = &Word> {
        self.words.iter().filter(move |w| w.len() == len)
    }

    pub fn slice_len(&self, len: usize) -> usize {
        self.slice(len).count()
    }

    /// A copy of the code with one more word, without any checks beyond
    /// alphabet and length validity.
    pub fn with_word(&self, word: Word) -> Result<Code, CodeError> {
        let mut words = self.words.clone();
        self.alphabet.validate(&word)?;
        if word.len() < 2 {
            let len = word.len();
            return Err(CodeError::ShortCodeword { word, len });
        }
        if !words.insert(word.clone()) {
            return Err(CodeError::Duplicate(word));
        }
        Ok(Self::from_set(self.alphabet, words))
    }

    pub fn subset<F>(&self, mut keep: F) -> Code
    where
        F: FnMut(&Word) -> bool,
    {
        let words = self.words.iter().filter(|w| keep(w)).cloned().collect();
        Self::from_set(self.alphabet, words)
    }

    /// Renders the code file: a `# q=<q>` header then one word per line.
    pub fn render(&self) -> String {
        let mut out = format!("# q={}\n", self.q());
        for word in &self.words {
            out.push_str(&self.alphabet.render(word));
            out.push('\n');
        }
        out
    }

    /// Parses the code file format.
    ///
    /// Lines starting with `#` are comments; one of them must be the
    /// `# q=<int>` header and it must precede the first word. Blank lines
    /// are skipped.
    pub fn parse(text: &str) -> Result<Code, CodeError> {
        let mut alphabet: Option<Alphabet> = None;
        let mut words = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            let parse_err = |reason: String| CodeError::Parse {
                line: line_no,
                reason,
            };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(value) = header_value(comment) {
                    if alphabet.is_some() {
                        return Err(parse_err("repeated q header".into()));
                    }
                    let q: Symbol = value
                        .parse()
                        .map_err(|_| parse_err(format!("bad alphabet size {value:?}")))?;
                    alphabet = Some(Alphabet::new(q).map_err(|e| parse_err(e.to_string()))?);
                }
                continue;
            }
            let alphabet = alphabet
                .ok_or_else(|| parse_err("missing `# q=<int>` header before first word".into()))?;
            let word = alphabet.parse(line).map_err(|e| parse_err(e.to_string()))?;
            if word.len() < 2 {
                return Err(parse_err(format!("codeword {word} is shorter than 2")));
            }
            if !words.insert(word.clone()) {
                return Err(parse_err(format!("duplicate codeword {word}")));
            }
        }
        let alphabet = alphabet.ok_or(CodeError::Parse {
            line: 0,
            reason: "missing `# q=<int>` header".into(),
        })?;
        Ok(Code::from_set(alphabet, words))
    }
}

fn header_value(comment: &str) -> Option<&str> {
    let rest = comment.trim().strip_prefix("q")?.trim_start();
    Some(rest.strip_prefix('=')?.trim())
}

impl<'a> IntoIterator for &'a Code {
    type Item = &'a Word;
    type IntoIter = std::collections::btree_set::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum WitnessKind {
    /// `evidence` is a proper prefix of `u` and a proper suffix of `v`.
    PrefixSuffixOverlap,
    /// `u` occurs in `v` at `offset`.
    SubwordContainment,
    /// `u` is a proper prefix of `v`.
    PrefixOfAnother,
}

/// A self-contained certificate that a code violates a predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub u: Word,
    pub v: Word,
    pub evidence: Word,
    pub offset: Option<usize>,
}

impl Witness {
    /// Re-checks the certificate from its own fields.
    pub fn verify(&self) -> bool {
        match self.kind {
            WitnessKind::PrefixSuffixOverlap => {
                !self.evidence.is_empty()
                    && self.u.proper_prefixes().contains(&self.evidence)
                    && self.v.proper_suffixes().contains(&self.evidence)
            }
            WitnessKind::SubwordContainment => {
                let Some(j) = self.offset else { return false };
                self.u != self.v
                    && self.evidence == self.u
                    && j + self.u.len() <= self.v.len()
                    && self.v.symbols()[j..j + self.u.len()] == *self.u.symbols()
            }
            WitnessKind::PrefixOfAnother => {
                self.evidence == self.u && self.u.is_proper_prefix_of(&self.v)
            }
        }
    }

    pub fn to_json(&self, alphabet: Alphabet) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "u": alphabet.render(&self.u),
            "v": alphabet.render(&self.v),
            "evidence": alphabet.render(&self.evidence),
            "offset": self.offset,
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WitnessKind::PrefixSuffixOverlap => write!(
                f,
                "prefix {} of {} is a suffix of {}",
                self.evidence, self.u, self.v
            ),
            WitnessKind::SubwordContainment => write!(
                f,
                "{} subword of {} at offset {}",
                self.u,
                self.v,
                self.offset.unwrap_or(0)
            ),
            WitnessKind::PrefixOfAnother => {
                write!(f, "{} is a prefix of {}", self.u, self.v)
            }
        }
    }
}

/// Condition 1 for the ordered pair `(u, v)`.
fn prefix_suffix_witness(u: &Word, v: &Word) -> Option<Witness> {
    shared_prefix_suffix(u.symbols(), v.symbols()).map(|k| Witness {
        kind: WitnessKind::PrefixSuffixOverlap,
        u: u.clone(),
        v: v.clone(),
        evidence: Word::from(&u.symbols()[..k]),
        offset: None,
    })
}

/// Condition 2: `u` embedded in a different `v`.
fn containment_witness(u: &Word, v: &Word) -> Option<Witness> {
    if u == v || u.len() > v.len() {
        return None;
    }
    u.find_in(v).map(|j| Witness {
        kind: WitnessKind::SubwordContainment,
        u: u.clone(),
        v: v.clone(),
        evidence: u.clone(),
        offset: Some(j),
    })
}

/// First violation of either condition for the ordered pair `(u, v)`.
pub fn ordered_pair_violation(u: &Word, v: &Word) -> Option<Witness> {
    prefix_suffix_witness(u, v).or_else(|| containment_witness(u, v))
}

/// True iff `{u, v}` (or `{u}` when equal) is non-overlapping.
pub fn compatible(u: &Word, v: &Word) -> bool {
    let self_ok = |w: &Word| shared_prefix_suffix(w.symbols(), w.symbols()).is_none();
    self_ok(u) && (u == v || (self_ok(v) && cross_compatible(u, v)))
}

/// The conditions between two distinct words, ignoring each word's own
/// self-overlap.
pub fn cross_compatible(u: &Word, v: &Word) -> bool {
    let (a, b) = (u.symbols(), v.symbols());
    if shared_prefix_suffix(a, b).is_some() || shared_prefix_suffix(b, a).is_some() {
        return false;
    }
    let (short, long) = if a.len() <= b.len() { (u, v) } else { (v, u) };
    !short.is_subword_of(long)
}

/// True iff `word` can join `code` with the result still non-overlapping,
/// assuming `code` is non-overlapping already.
pub fn can_extend(code: &Code, word: &Word) -> bool {
    !code.contains(word)
        && word.len() >= 2
        && compatible(word, word)
        && code.iter().all(|s| cross_compatible(s, word))
}

/// The first violation of non-overlap, scanning ordered pairs `(u, v)` in
/// canonical order with `u` outer.
pub fn non_overlap_witness(code: &Code) -> Option<Witness> {
    if is_non_overlapping(code) {
        return None;
    }
    code.iter()
        .flat_map(|u| code.iter().map(move |v| (u, v)))
        .find_map(|(u, v)| ordered_pair_violation(u, v))
}

/// Decides non-overlap with hash lookups instead of a pairwise scan: every
/// proper suffix is looked up among the proper prefixes, and every window of
/// a codeword is looked up among the shorter codewords.
pub fn is_non_overlapping(code: &Code) -> bool {
    let mut prefixes: HashSet<&[Symbol]> = HashSet::new();
    for w in code.iter() {
        let s = w.symbols();
        prefixes.extend((1..s.len()).map(|k| &s[..k]));
    }
    let shorter: HashSet<&[Symbol]> = code.iter().map(Word::symbols).collect();
    let lengths: BTreeSet<usize> = code.iter().map(Word::len).collect();
    code.iter().all(|w| {
        let s = w.symbols();
        (1..s.len()).all(|k| !prefixes.contains(&s[s.len() - k..]))
            && lengths
                .range(..s.len())
                .all(|&len| s.windows(len).all(|win| !shorter.contains(win)))
    })
}

pub fn check_non_overlapping(code: &Code) -> Result<(), CodeError> {
    match non_overlap_witness(code) {
        Some(w) => Err(CodeError::Overlapping(Box::new(w))),
        None => Ok(()),
    }
}

pub fn prefix_code_witness(code: &Code) -> Option<Witness> {
    if is_prefix_code(code) {
        return None;
    }
    code.iter()
        .flat_map(|u| code.iter().map(move |v| (u, v)))
        .find(|(u, v)| u.is_proper_prefix_of(v))
        .map(|(u, v)| Witness {
            kind: WitnessKind::PrefixOfAnother,
            u: u.clone(),
            v: v.clone(),
            evidence: u.clone(),
            offset: Some(0),
        })
}

pub fn is_prefix_code(code: &Code) -> bool {
    let words: HashSet<&[Symbol]> = code.iter().map(Word::symbols).collect();
    code.iter().all(|w| {
        let s = w.symbols();
        (1..s.len()).all(|k| !words.contains(&s[..k]))
    })
}

/// Maximality relative to all words of lengths `2..=n`.
///
/// Returns `Ok(None)` if the code is maximal, otherwise the first word in
/// canonical order that can be added.
pub fn maximality_witness(code: &Code, n: usize) -> Result<Option<Word>, CodeError> {
    if let Some(max_len) = code.max_len() {
        if n < max_len {
            return Err(CodeError::LengthBound { n, max_len });
        }
    }
    if n < 2 {
        return Err(CodeError::LengthBound { n, max_len: 2 });
    }
    check_non_overlapping(code)?;
    Ok(code
        .alphabet()
        .words_up_to(2, n)
        .find(|x| can_extend(code, x)))
}

pub fn is_maximal(code: &Code, n: usize) -> Result<bool, CodeError> {
    maximality_witness(code, n).map(|w| w.is_none())
}


#[cfg(test)]
mod tests {
    use super::test_util::{code, w};
    use super::*;

    #[test]
    fn paper_examples() {
        let witness = non_overlap_witness(&code(2, &["1100", "10"])).unwrap();
        assert_eq!(witness.kind, WitnessKind::SubwordContainment);
        assert_eq!((witness.u.clone(), witness.v.clone()), (w("10"), w("1100")));
        assert_eq!(witness.offset, Some(1));
        assert!(witness.verify());
        assert_eq!(witness.to_string(), "10 subword of 1100 at offset 1");

        assert!(is_non_overlapping(&code(2, &["11000", "11010"])));
        assert!(is_non_overlapping(&code(3, &["12", "102"])));

        let witness = non_overlap_witness(&code(2, &["1001"])).unwrap();
        assert_eq!(witness.kind, WitnessKind::PrefixSuffixOverlap);
        assert_eq!(witness.evidence, w("1"));
        assert!(witness.verify());
    }

    #[test]
    fn empty_and_singleton() {
        let empty = Code::empty(Alphabet::new(2).unwrap());
        assert!(is_non_overlapping(&empty));
        assert!(is_prefix_code(&empty));
        assert_eq!(empty.max_len(), None);
        assert!(is_non_overlapping(&code(2, &["01"])));
    }

    #[test]
    fn prefix_code_examples() {
        assert!(is_prefix_code(&code(2, &["11000", "11010"])));
        let c = code(2, &["01", "011"]);
        assert!(!is_prefix_code(&c));
        let witness = prefix_code_witness(&c).unwrap();
        assert_eq!(witness.kind, WitnessKind::PrefixOfAnother);
        assert!(witness.verify());
    }

    #[test]
    fn maximality_examples() {
        assert!(matches!(
            is_maximal(&code(2, &["11000", "11010"]), 2),
            Err(CodeError::LengthBound { n: 2, max_len: 5 })
        ));
        assert_eq!(is_maximal(&code(2, &["01"]), 2), Ok(true));
        let empty = Code::empty(Alphabet::new(2).unwrap());
        assert_eq!(maximality_witness(&empty, 2), Ok(Some(w("01"))));
        assert!(matches!(
            is_maximal(&code(2, &["1001"]), 4),
            Err(CodeError::Overlapping(_))
        ));
    }

    #[test]
    fn construction_rejects_bad_words() {
        let a = Alphabet::new(2).unwrap();
        assert!(matches!(
            Code::new(a, [w("0")]),
            Err(CodeError::ShortCodeword { .. })
        ));
        assert!(matches!(
            Code::new(a, [w("01"), w("01")]),
            Err(CodeError::Duplicate(_))
        ));
        assert!(matches!(Code::new(a, [w("02")]), Err(CodeError::Word(_))));
    }

    #[test]
    fn slices_and_range() {
        let c = code(3, &["12", "102", "0112"]);
        assert_eq!(c.min_len(), Some(2));
        assert_eq!(c.max_len(), Some(4));
        assert_eq!(c.slice(3).collect::<Vec<_>>(), vec![&w("102")]);
        assert_eq!(c.slice_len(5), 0);
        assert!(!c.is_fixed_length());
    }

    #[test]
    fn file_format() {
        let c = code(3, &["102", "12"]);
        let text = c.render();
        assert_eq!(text, "# q=3\n12\n102\n");
        assert_eq!(Code::parse(&text).unwrap(), c);

        let parsed = Code::parse("# a comment\n# q = 3\n\n1,0,2\n12\n").unwrap();
        assert_eq!(parsed, c);

        assert!(matches!(
            Code::parse("12\n# q=3\n"),
            Err(CodeError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Code::parse("# q=2\n01\n012\n"),
            Err(CodeError::Parse { line: 3, .. })
        ));
        assert!(matches!(Code::parse(""), Err(CodeError::Parse { .. })));
        assert!(matches!(
            Code::parse("# q=2\n0\n"),
            Err(CodeError::Parse { line: 2, .. })
        ));

        let big = Code::new(Alphabet::new(12).unwrap(), [Word::new(vec![3, 11, 0])]).unwrap();
        assert_eq!(big.render(), "# q=12\n3,11,0\n");
        assert_eq!(Code::parse(&big.render()).unwrap(), big);
    }

    #[test]
    fn compatible_agrees_with_full_predicate() {
        let a = Alphabet::new(2).unwrap();
        let words: Vec<Word> = a.words_up_to(2, 4).collect();
        for u in &words {
            for v in &words {
                let pair = Code::from_set(a, [u.clone(), v.clone()].into_iter().collect());
                assert_eq!(compatible(u, v), is_non_overlapping(&pair), "{u} {v}");
            }
        }
    }
}
