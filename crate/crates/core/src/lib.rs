//! Construction, verification, exact search, and bounds for q-ary
//! non-overlapping (cross-bifix-free) codes, fixed-length and
//! variable-length.
//!
//! - [`words`]: prefixes, suffixes, subwords, self-overlap.
//! - [`codes`]: the non-overlapping and prefix-code predicates, with
//!   re-checkable witnesses, and the code file format.
//! - [`extension`]: extending a variable-length non-overlapping code to a
//!   fixed-length one of the same maximum length.
//! - [`search`]: exact maximum codes by clique branch and bound, greedy
//!   maximal codes, the classic construction.
//! - [`bounds`]: exact Levenshtein, trivial-sum, and average-length bounds.
//! - [`cli`]: the `nocode` command line.

pub mod bounds;
pub mod cli;
pub mod codes;
pub mod extension;
pub mod search;
pub mod words;

pub use codes::{Code, CodeError, Witness, WitnessKind};
pub use words::{Alphabet, Symbol, Word, WordError};
