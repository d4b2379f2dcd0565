//! Exact maximum-code search, greedy maximal codes, and the classic
//! construction.
//!
//! Both exact searches reduce to maximum clique. Vertices are the
//! self-non-overlapping candidate words in canonical order; two words are
//! adjacent when the pair is non-overlapping. For fixed length only the
//! prefix/suffix condition can fail. For variable length the subword
//! condition joins it, and the relation stays symmetric.
//!
//! The exhaustive strategy branches include-first over candidates in
//! ascending index order and only prunes subtrees that cannot beat the
//! incumbent strictly, so the first maximum clique it reaches is the
//! lexicographically smallest one. Branch and bound relabels vertices in
//! degeneracy order, colors greedily and branches from the highest color
//! class. It finds a maximum of the same size, not necessarily the same code,
//! and is deterministic.

use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounds::levenshtein_upper;
use crate::codes::{compatible, cross_compatible, Code};
use crate::words::{Alphabet, Symbol, Word};

/// Default limit on the number of raw candidate words (`q^n`, or
/// `q^2 + .. + q^n` for variable length).
pub const DEFAULT_CANDIDATE_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Complete search pruned only by the candidate count.
    Exhaustive,
    /// Complete search pruned by greedy coloring, with the Levenshtein bound
    /// as a global stop for fixed-length searches.
    #[default]
    BranchAndBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: Option<u64>,
    pub strategy: Strategy,
    pub candidate_cap: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: None,
            strategy: Strategy::BranchAndBound,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

impl SearchConfig {
    pub fn exhaustive() -> Self {
        SearchConfig {
            strategy: Strategy::Exhaustive,
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.node_budget = Some(nodes);
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.candidate_cap = cap;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub q: Symbol,
    pub cardinality: usize,
    pub code: Code,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn to_json(&self) -> serde_json::Value {
        let alphabet = self.code.alphabet();
        let words: Vec<String> = self.code.iter().map(|w| alphabet.render(w)).collect();
        serde_json::json!({
            "n": self.n,
            "q": self.q,
            "cardinality": self.cardinality,
            "code": words,
            "nodes_expanded": self.nodes_expanded,
            "elapsed_ms": self.elapsed.as_millis() as u64,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{candidates} candidate words exceed the cap of {cap}")]
    OverCap { candidates: u128, cap: u64 },
    #[error("node budget of {budget} exhausted; best code found has {} words", best.cardinality)]
    BudgetExhausted {
        budget: u64,
        best: Box<SearchResult>,
    },
}

fn check_params(n: usize, q: Symbol) -> Result<Alphabet, SearchError> {
    if n < 2 {
        return Err(SearchError::InvalidParameters(format!(
            "length n = {n} must be at least 2"
        )));
    }
    Alphabet::new(q).map_err(|e| SearchError::InvalidParameters(e.to_string()))
}

/// `q^lo + .. + q^hi`, saturating.
pub fn candidate_count(q: Symbol, lo: usize, hi: usize) -> u128 {
    (lo..=hi)
        .map(|i| {
            u32::try_from(i)
                .ok()
                .and_then(|e| (q as u128).checked_pow(e))
                .unwrap_or(u128::MAX)
        })
        .fold(0u128, |acc, x| acc.saturating_add(x))
}

fn check_cap(candidates: u128, cfg: &SearchConfig) -> Result<(), SearchError> {
    if candidates > cfg.candidate_cap as u128 {
        Err(SearchError::OverCap {
            candidates,
            cap: cfg.candidate_cap,
        })
    } else {
        Ok(())
    }
}

/// Exact `C(n, q)`: the largest fixed-length non-overlapping code.
pub fn max_fixed(n: usize, q: Symbol, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    let alphabet = check_params(n, q)?;
    check_cap(candidate_count(q, n, n), cfg)?;
    let graph = CompatibilityGraph::build(alphabet, n, n);
    run(&graph, alphabet, n, Vec::new(), 0, cfg)
}

/// Exact maximum size of a non-overlapping code with lengths in `2..=n`.
///
/// Branch and bound first solves the fixed-length problem at length `n` and
/// starts from that code, which is itself a variable-length candidate.
pub fn max_variable(n: usize, q: Symbol, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    let alphabet = check_params(n, q)?;
    check_cap(candidate_count(q, 2, n), cfg)?;
    let graph = CompatibilityGraph::build(alphabet, 2, n);
    let (seed, seed_nodes) = match cfg.strategy {
        Strategy::BranchAndBound if n > 2 => match max_fixed(n, q, cfg) {
            Ok(fixed) => (graph.indices_of(&fixed.code), fixed.nodes_expanded),
            Err(SearchError::BudgetExhausted { best, .. }) => {
                return Err(SearchError::BudgetExhausted {
                    budget: cfg.node_budget.unwrap_or(0),
                    best: Box::new(SearchResult { n, ..*best }),
                })
            }
            Err(e) => return Err(e),
        },
        _ => (Vec::new(), 0),
    };
    run(&graph, alphabet, n, seed, seed_nodes, cfg)
}

fn run(
    graph: &CompatibilityGraph,
    alphabet: Alphabet,
    n: usize,
    seed: Vec<usize>,
    seed_nodes: u64,
    cfg: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    let start = Instant::now();
    // With a single candidate length the Levenshtein bound caps any clique.
    let stop_at = match cfg.strategy {
        Strategy::BranchAndBound if graph.single_length() => {
            levenshtein_upper(n, alphabet.size()).floor.to_usize()
        }
        _ => None,
    };
    let budget = cfg.node_budget.map(|b| b.saturating_sub(seed_nodes));
    let seed_size = seed.len();
    let (chosen, nodes, halted) = match cfg.strategy {
        Strategy::Exhaustive => {
            let mut search = CliqueSearch::new(&graph.adjacency, Branching::Canonical, budget);
            search.incumbent = seed_size.saturating_sub(1);
            search.solve();
            (search.best, search.nodes, search.halted)
        }
        Strategy::BranchAndBound => {
            let order = degeneracy_order(&graph.adjacency);
            let relabelled = permute(&graph.adjacency, &order);
            let mut search = CliqueSearch::new(&relabelled, Branching::Colored, budget);
            search.incumbent = seed_size.saturating_sub(1);
            search.stop_at = stop_at;
            search.solve();
            let found: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
            let chosen = if found.len() < seed_size { seed } else { found };
            (chosen, search.nodes, search.halted)
        }
    };
    let words = chosen.iter().map(|&i| graph.words[i].clone()).collect();
    let code = Code::from_set(alphabet, words);
    let result = SearchResult {
        n,
        q: alphabet.size(),
        cardinality: code.len(),
        code,
        nodes_expanded: seed_nodes + nodes,
        elapsed: start.elapsed(),
    };
    match halted {
        Some(Halt::Budget) => Err(SearchError::BudgetExhausted {
            budget: cfg.node_budget.unwrap_or(0),
            best: Box::new(result),
        }),
        _ => Ok(result),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(bits: usize) -> Self {
        Bitset(vec![0; bits.div_ceil(64)])
    }

    fn full(bits: usize) -> Self {
        let mut set = Self::new(bits);
        for i in 0..bits {
            set.insert(i);
        }
        set
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn count(&self) -> usize {
        self.0.iter().map(|b| b.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn subtract_in_place(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(i, &b)| i * 64 + b.trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let tz = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(i * 64 + tz)
            })
        })
    }
}

struct CompatibilityGraph {
    words: Vec<Word>,
    adjacency: Vec<Bitset>,
}

impl CompatibilityGraph {
    fn build(alphabet: Alphabet, min_len: usize, max_len: usize) -> Self {
        let words: Vec<Word> = alphabet
            .words_up_to(min_len, max_len)
            .filter(|w| compatible(w, w))
            .collect();
        let v = words.len();
        let mut adjacency = vec![Bitset::new(v); v];
        for i in 0..v {
            for j in i + 1..v {
                if cross_compatible(&words[i], &words[j]) {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        CompatibilityGraph { words, adjacency }
    }

    fn single_length(&self) -> bool {
        self.words.first().map(Word::len) == self.words.last().map(Word::len)
    }

    fn indices_of(&self, code: &Code) -> Vec<usize> {
        code.iter()
            .filter_map(|w| self.words.binary_search(w).ok())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Halt {
    Budget,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branching {
    /// Ascending index order, bounded by the candidate count.
    Canonical,
    /// Highest color class first.
    Colored,
}

struct CliqueSearch<'a> {
    adjacency: &'a [Bitset],
    branching: Branching,
    budget: Option<u64>,
    stop_at: Option<usize>,
    nodes: u64,
    /// Cliques must beat this size to be recorded or explored.
    incumbent: usize,
    best: Vec<usize>,
    halted: Option<Halt>,
}

impl<'a> CliqueSearch<'a> {
    fn new(adjacency: &'a [Bitset], branching: Branching, budget: Option<u64>) -> Self {
        CliqueSearch {
            adjacency,
            branching,
            budget,
            stop_at: None,
            nodes: 0,
            incumbent: 0,
            best: Vec::new(),
            halted: None,
        }
    }

    fn solve(&mut self) {
        let all = Bitset::full(self.adjacency.len());
        let mut clique = Vec::new();
        self.expand(&mut clique, all);
    }

    /// Node bookkeeping; returns false when the search must unwind.
    fn enter(&mut self, clique: &[usize]) -> bool {
        if self.halted.is_some() {
            return false;
        }
        if self.budget.is_some_and(|b| self.nodes >= b) {
            self.halted = Some(Halt::Budget);
            return false;
        }
        self.nodes += 1;
        if clique.len() > self.incumbent {
            self.best = clique.to_vec();
            self.incumbent = clique.len();
            if self.stop_at.is_some_and(|t| self.incumbent >= t) {
                self.halted = Some(Halt::Target);
                return false;
            }
        }
        true
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut candidates: Bitset) {
        if !self.enter(clique) || candidates.is_empty() {
            return;
        }
        // (vertex, bound on the clique number of what is left from here on)
        let order: Vec<(usize, usize)> = match self.branching {
            Branching::Canonical => {
                let total = candidates.count();
                candidates
                    .iter()
                    .enumerate()
                    .map(|(rank, v)| (v, total - rank))
                    .collect()
            }
            Branching::Colored => color_classes(&candidates, self.adjacency)
                .into_iter()
                .rev()
                .collect(),
        };
        for (v, bound) in order {
            if clique.len() + bound <= self.incumbent {
                return;
            }
            candidates.remove(v);
            clique.push(v);
            let next = candidates.intersect(&self.adjacency[v]);
            self.expand(clique, next);
            clique.pop();
            if self.halted.is_some() {
                return;
            }
        }
    }
}

/// Greedy coloring built one class at a time in index order.
///
/// Returns the candidates sorted by color with their color number. Every
/// vertex at or before a position has color at most the one listed there,
/// so that color bounds the clique number of the prefix.
fn color_classes(candidates: &Bitset, adjacency: &[Bitset]) -> Vec<(usize, usize)> {
    let mut uncolored = candidates.clone();
    let mut colored = Vec::with_capacity(candidates.count());
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut class = uncolored.clone();
        while let Some(v) = class.first() {
            class.remove(v);
            uncolored.remove(v);
            class.subtract_in_place(&adjacency[v]);
            colored.push((v, color));
        }
    }
    colored
}

/// Minimum-width (degeneracy) order: repeatedly take a vertex of least
/// remaining degree and place it last. Ties go to the lower index.
fn degeneracy_order(adjacency: &[Bitset]) -> Vec<usize> {
    let v = adjacency.len();
    let mut degree: Vec<usize> = adjacency.iter().map(Bitset::count).collect();
    let mut removed = vec![false; v];
    let mut order = vec![0; v];
    for slot in (0..v).rev() {
        let next = (0..v)
            .filter(|&i| !removed[i])
            .min_by_key(|&i| (degree[i], i))
            .expect("one vertex per slot");
        removed[next] = true;
        order[slot] = next;
        for u in adjacency[next].iter() {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    order
}

/// The adjacency rows relabelled so that vertex `i` is `order[i]`.
fn permute(adjacency: &[Bitset], order: &[usize]) -> Vec<Bitset> {
    let mut position = vec![0; order.len()];
    for (i, &old) in order.iter().enumerate() {
        position[old] = i;
    }
    order
        .iter()
        .map(|&old| {
            let mut row = Bitset::new(order.len());
            for u in adjacency[old].iter() {
                row.insert(position[u]);
            }
            row
        })
        .collect()
}

/// A maximal non-overlapping code with lengths in `2..=n`.
///
/// Candidates are scanned in canonical order for seed 0 and in a
/// seed-determined shuffle otherwise; each one that keeps the code
/// non-overlapping is added.
pub fn greedy_maximal(n: usize, q: Symbol, seed: u64) -> Result<Code, SearchError> {
    let alphabet = check_params(n, q)?;
    let mut candidates: Vec<Word> = alphabet
        .words_up_to(2, n)
        .filter(|w| compatible(w, w))
        .collect();
    if seed != 0 {
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut chosen: Vec<Word> = Vec::new();
    for word in candidates {
        if chosen.iter().all(|s| cross_compatible(s, &word)) {
            chosen.push(word);
        }
    }
    Ok(Code::from_set(alphabet, chosen.into_iter().collect()))
}

/// All length-`n` words starting with 0 whose other symbols are nonzero.
pub fn classic_construction(n: usize, q: Symbol) -> Result<Code, SearchError> {
    let alphabet = check_params(n, q)?;
    let tails = Alphabet::new(q - 1)
        .map(|a| a.words_of_length(n - 1).collect::<Vec<_>>())
        // q = 2 leaves one nonzero symbol and a single word
        .unwrap_or_else(|_| vec![Word::new(vec![0; n - 1])]);
    let words = tails
        .into_iter()
        .map(|tail| {
            let mut symbols = Vec::with_capacity(n);
            symbols.push(0);
            symbols.extend(tail.symbols().iter().map(|s| s + 1));
            Word::new(symbols)
        })
        .collect();
    Ok(Code::from_set(alphabet, words))
}
