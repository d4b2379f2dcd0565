//! Independent oracles and corpus helpers shared by the integration tests.
//!
//! The oracles work on plain symbol vectors and follow the definitions
//! literally, without touching the library's predicates.

#![allow(dead_code)]

use std::collections::BTreeSet;

use nocode::search::greedy_maximal;
use nocode::{Alphabet, Code, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn w(s: &str) -> Word {
    Word::new(s.chars().map(|c| c.to_digit(10).unwrap()).collect())
}

pub fn code(q: u32, words: &[&str]) -> Code {
    Code::new(Alphabet::new(q).unwrap(), words.iter().map(|s| w(s))).unwrap()
}

pub fn prefixes(x: &[u32]) -> BTreeSet<Vec<u32>> {
    (1..x.len()).map(|k| x[..k].to_vec()).collect()
}

pub fn suffixes(x: &[u32]) -> BTreeSet<Vec<u32>> {
    (1..x.len()).map(|k| x[x.len() - k..].to_vec()).collect()
}

pub fn occurs_in(u: &[u32], v: &[u32]) -> bool {
    u.len() <= v.len() && (0..=v.len() - u.len()).any(|j| &v[j..j + u.len()] == u)
}

/// Both conditions, by set intersection and window scanning.
pub fn oracle_non_overlapping(words: &[Vec<u32>]) -> bool {
    for u in words {
        for v in words {
            if !prefixes(u).is_disjoint(&suffixes(v)) {
                return false;
            }
            if u != v && occurs_in(u, v) {
                return false;
            }
        }
    }
    true
}

pub fn symbols(code: &Code) -> Vec<Vec<u32>> {
    code.iter().map(|w| w.symbols().to_vec()).collect()
}

pub fn all_words(q: u32, lo: usize, hi: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for len in lo..=hi {
        let total = (q as usize).pow(len as u32);
        for mut i in 0..total {
            let mut word = vec![0; len];
            for slot in word.iter_mut().rev() {
                *slot = (i % q as usize) as u32;
                i /= q as usize;
            }
            out.push(word);
        }
    }
    out
}

/// Largest non-overlapping subset of the words with lengths in `lo..=hi`, by
/// depth-first enumeration of every non-overlapping subset.
pub fn brute_force_max(q: u32, lo: usize, hi: usize) -> usize {
    brute_force_first_max(q, lo, hi).len()
}

/// The maximum code that comes first when codes are compared as ascending
/// sequences of words in shortlex order.
pub fn brute_force_first_max(q: u32, lo: usize, hi: usize) -> Vec<Vec<u32>> {
    fn go(cands: &[Vec<u32>], from: usize, chosen: &mut Vec<Vec<u32>>, best: &mut Vec<Vec<u32>>) {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        for i in from..cands.len() {
            chosen.push(cands[i].clone());
            if oracle_non_overlapping(chosen) {
                go(cands, i + 1, chosen, best);
            }
            chosen.pop();
        }
    }
    let cands: Vec<Vec<u32>> = all_words(q, lo, hi)
        .into_iter()
        .filter(|x| oracle_non_overlapping(std::slice::from_ref(x)))
        .collect();
    let mut best = Vec::new();
    go(&cands, 0, &mut Vec::new(), &mut best);
    best
}

/// Greedy maximal codes for a range of seeds, plus random subsets of each.
pub fn corpus(n: usize, q: u32, seeds: u64, subsets_per_code: usize) -> Vec<Code> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ q as u64);
    let mut out = Vec::new();
    for seed in 0..seeds {
        let code = greedy_maximal(n, q, seed).unwrap();
        for _ in 0..subsets_per_code {
            let mut words: Vec<Word> = code.iter().cloned().collect();
            words.shuffle(&mut rng);
            let keep = rng.gen_range(1..=words.len());
            words.truncate(keep);
            out.push(Code::new(code.alphabet(), words).unwrap());
        }
        out.push(code);
    }
    out
}
