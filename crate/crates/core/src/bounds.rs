//! Closed-form bounds on code size and average codeword length.
//!
//! Everything here is exact: bounds are big rationals, and floors, ceilings
//! and logarithms are decided by integer comparisons.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::codes::{check_non_overlapping, Code, CodeError};
use crate::words::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no value of C({0}, q) supplied")]
    MissingLength(usize),
    #[error("average length of an empty code is undefined")]
    EmptyCode,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

fn big(x: impl Into<BigUint>) -> BigUint {
    x.into()
}

fn pow(base: u64, exp: usize) -> BigUint {
    Pow::pow(big(base), exp)
}

fn ratio(numer: BigUint, denom: BigUint) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

/// Renders an exact rational as `num/den`, or `num` when integral.
pub fn render_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A JSON integer of arbitrary size.
pub fn json_uint(x: &BigUint) -> Value {
    serde_json::from_str(&x.to_string()).expect("decimal digits form a JSON number")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevenshteinBound {
    /// `(n-1)^(n-1) · q^n / n^n`, reduced.
    pub value: BigRational,
    pub floor: BigUint,
}

/// `C(n, q) <= ((n-1)/n)^(n-1) · q^n / n`.
pub fn levenshtein_upper(n: usize, q: Symbol) -> LevenshteinBound {
    let numer = pow(n as u64 - 1, n - 1) * pow(q as u64, n);
    let denom = pow(n as u64, n);
    let floor = &numer / &denom;
    LevenshteinBound {
        value: ratio(numer, denom),
        floor,
    }
}

/// `(q-1)^(n-1)`, the size of the classic construction at length `n`.
pub fn classic_lower(n: usize, q: Symbol) -> BigUint {
    pow(q as u64 - 1, n - 1)
}

/// Where a table of `C(i, q)` values came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Computed by exact search.
    Exact,
    /// Floored Levenshtein bounds, an over-estimate.
    LevenshteinFloor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CTable {
    pub q: Symbol,
    pub source: Provenance,
    pub values: BTreeMap<usize, BigUint>,
}

impl CTable {
    pub fn levenshtein_floors(m: usize, n: usize, q: Symbol) -> Self {
        CTable {
            q,
            source: Provenance::LevenshteinFloor,
            values: (m..=n).map(|i| (i, levenshtein_upper(i, q).floor)).collect(),
        }
    }

    pub fn exact(q: Symbol, values: impl IntoIterator<Item = (usize, usize)>) -> Self {
        CTable {
            q,
            source: Provenance::Exact,
            values: values.into_iter().map(|(i, c)| (i, big(c as u64))).collect(),
        }
    }
}

/// `Σ_{i=m}^{n} C(i, q)`.
pub fn trivial_sum_upper(m: usize, n: usize, table: &CTable) -> Result<BigUint, BoundError> {
    if m < 2 || m > n {
        return Err(BoundError::InvalidParameters(format!(
            "need 2 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    (m..=n).try_fold(BigUint::zero(), |acc, i| {
        table
            .values
            .get(&i)
            .map(|c| acc + c)
            .ok_or(BoundError::MissingLength(i))
    })
}

/// `⌈log_q c⌉`: the smallest `t` with `q^t >= c`.
pub fn ceil_log(c: u64, q: Symbol) -> u32 {
    let q = q as u128;
    let target = c as u128;
    let mut power = 1u128;
    let mut t = 0;
    while power < target {
        power *= q;
        t += 1;
    }
    t
}

/// Lower bound on the average codeword length of a non-overlapping code of
/// size `c`.
pub fn entropy_avg_lower(c: u64, q: Symbol) -> Result<u32, BoundError> {
    if c == 0 || q < 2 {
        return Err(BoundError::InvalidParameters(format!(
            "need C >= 1 and q >= 2, got C = {c}, q = {q}"
        )));
    }
    Ok(ceil_log(c, q))
}

/// Mean codeword length under the uniform distribution.
pub fn average_length(code: &Code) -> Result<BigRational, BoundError> {
    if code.is_empty() {
        return Err(BoundError::EmptyCode);
    }
    let total: u64 = code.iter().map(|w| w.len() as u64).sum();
    Ok(ratio(big(total), big(code.len() as u64)))
}

/// Whether `(q-1)^(n-2) > q^(n-3)`, which makes
/// `⌈log_q (q-1)^(n-2)⌉ = n - 2`.
pub fn classic_trend_holds(n: usize, q: Symbol) -> bool {
    if n < 3 {
        return false;
    }
    pow(q as u64 - 1, n - 2) > pow(q as u64, n - 3)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub q: Symbol,
    pub levenshtein: LevenshteinBound,
    pub classic_lower: BigUint,
    pub trivial_sum: Option<(usize, BigUint, Provenance)>,
    pub exact_c: Option<usize>,
}

impl BoundReport {
    pub fn new(n: usize, q: Symbol) -> Result<Self, BoundError> {
        if n < 2 || q < 2 {
            return Err(BoundError::InvalidParameters(format!(
                "need n >= 2 and q >= 2, got n = {n}, q = {q}"
            )));
        }
        Ok(BoundReport {
            n,
            q,
            levenshtein: levenshtein_upper(n, q),
            classic_lower: classic_lower(n, q),
            trivial_sum: None,
            exact_c: None,
        })
    }

    pub fn with_exact(mut self, c: usize) -> Result<Self, BoundError> {
        let value = big(c as u64);
        if value < self.classic_lower || value > self.levenshtein.floor {
            return Err(BoundError::Invariant(format!(
                "C({}, {}) = {c} is outside [{}, {}]",
                self.n, self.q, self.classic_lower, self.levenshtein.floor
            )));
        }
        self.exact_c = Some(c);
        Ok(self)
    }

    pub fn with_trivial_sum(mut self, m: usize, table: &CTable) -> Result<Self, BoundError> {
        let sum = trivial_sum_upper(m, self.n, table)?;
        self.trivial_sum = Some((m, sum, table.source));
        Ok(self)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::json!({
            "n": self.n,
            "q": self.q,
            "levenshtein_real": render_ratio(&self.levenshtein.value),
            "levenshtein_floor": json_uint(&self.levenshtein.floor),
            "classic_lower": json_uint(&self.classic_lower),
            "trivial_sum_upper": Value::Null,
            "exact_C": self.exact_c,
        });
        if let Some((m, sum, source)) = &self.trivial_sum {
            obj["trivial_sum_upper"] = serde_json::json!({
                "m": m,
                "value": json_uint(sum),
                "source": source,
            });
        }
        obj
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, q = {}", self.n, self.q)?;
        writeln!(
            f,
            "levenshtein upper bound: {} (floor {})",
            render_ratio(&self.levenshtein.value),
            self.levenshtein.floor
        )?;
        writeln!(f, "classic lower bound: {}", self.classic_lower)?;
        if let Some((m, sum, source)) = &self.trivial_sum {
            writeln!(f, "trivial sum bound over lengths {m}..={}: {sum} ({source:?})", self.n)?;
        }
        if let Some(c) = self.exact_c {
            writeln!(f, "exact C(n, q): {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthReport {
    pub code_size: usize,
    pub q: Symbol,
    pub avg_length: BigRational,
    pub entropy_floor: u32,
    pub n: usize,
    pub bracket_low: usize,
    /// `entropy_floor >= n - 2` for this code.
    pub reaches_bracket: bool,
}

/// Average-length statistics for a non-empty non-overlapping code.
pub fn length_report(code: &Code) -> Result<LengthReport, BoundError> {
    let avg_length = average_length(code)?;
    check_non_overlapping(code)?;
    let n = code.max_len().unwrap_or(0);
    let entropy_floor = entropy_avg_lower(code.len() as u64, code.q())?;
    let floor = BigRational::from_integer(entropy_floor.into());
    if floor > avg_length || avg_length > BigRational::from_integer(n.into()) {
        return Err(BoundError::Invariant(format!(
            "expected {entropy_floor} <= {} <= {n}",
            render_ratio(&avg_length)
        )));
    }
    let bracket_low = n.saturating_sub(2);
    Ok(LengthReport {
        code_size: code.len(),
        q: code.q(),
        avg_length,
        entropy_floor,
        n,
        bracket_low,
        reaches_bracket: entropy_floor as usize >= bracket_low,
    })
}

impl LengthReport {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "code_size": self.code_size,
            "q": self.q,
            "avg_length": render_ratio(&self.avg_length),
            "entropy_floor": self.entropy_floor,
            "n": self.n,
            "bracket_low": self.bracket_low,
            "reaches_bracket": self.reaches_bracket,
        })
    }
}

impl fmt::Display for LengthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code size: {}", self.code_size)?;
        writeln!(f, "q: {}", self.q)?;
        writeln!(f, "average length L: {}", render_ratio(&self.avg_length))?;
        writeln!(f, "ceil(log_q size): {}", self.entropy_floor)?;
        writeln!(f, "max length n: {}", self.n)?;
        writeln!(f, "n - 2: {}", self.bracket_low)?;
        writeln!(f, "ceil(log_q size) >= n - 2: {}", self.reaches_bracket)
    }
}

/// The floor of an exact rational, for callers that only hold the value.
pub fn floor_of(r: &BigRational) -> Option<BigUint> {
    let (q, _) = r.numer().div_mod_floor(r.denom());
    q.to_biguint()
}
