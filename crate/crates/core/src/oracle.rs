//! Exact brute-force ground truth: shortest reset words by subset BFS,
//! pairwise compression distances, and spans of all short words.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::automaton::{words_up_to, Automaton, PairGraph, StateSet, Word};
use crate::error::{Error, Result};
use crate::linalg::{row_space_basis, to_integer_row, RatVec};

/// Largest automaton the subset BFS accepts.
pub const ORACLE_MAX_STATES: usize = 24;

/// Default limit for the BFS bookkeeping, in bytes.
pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 30;

/// Rough cost of one visited subset in the hash map.
const BYTES_PER_ENTRY: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub max_states: usize,
    pub memory_budget: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_states: ORACLE_MAX_STATES,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// A shortest reset word; `word` is the lexicographically smallest one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestReset {
    pub length: usize,
    pub word: Word,
}

/// Per-letter images of every byte of a subset mask.
struct ByteTables {
    chunks: usize,
    // tables[letter][chunk][byte]
    tables: Vec<Vec<[u32; 256]>>,
}

impl ByteTables {
    fn new(a: &Automaton) -> Self {
        let chunks = a.n().div_ceil(8);
        let tables = (0..a.k())
            .map(|letter| {
                (0..chunks)
                    .map(|c| {
                        let mut t = [0u32; 256];
                        for (byte, slot) in t.iter_mut().enumerate() {
                            for bit in 0..8 {
                                let q = c * 8 + bit;
                                if byte >> bit & 1 == 1 && q < a.n() {
                                    *slot |= 1 << a.step(q, letter);
                                }
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        ByteTables { chunks, tables }
    }

    fn image(&self, mask: u32, letter: usize) -> u32 {
        let t = &self.tables[letter];
        (0..self.chunks).fold(0, |acc, c| acc | t[c][(mask >> (8 * c) & 0xff) as usize])
    }
}

fn to_mask(s: &StateSet) -> u32 {
    s.iter().fold(0, |m, q| m | 1 << q)
}

/// Shortest word taking `start` to at most one state, by BFS over subsets.
/// Returns `None` when no such word exists.
pub fn shortest_compression_from(a: &Automaton, start: &StateSet, opts: &OracleOptions) -> Result<Option<Word>> {
    let n = a.n();
    let cap = opts.max_states.min(ORACLE_MAX_STATES);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "states for the subset search".into(),
            limit: cap as u128,
        });
    }
    // letters are stored in a byte, with u8::MAX marking the start
    if a.k() >= u8::MAX as usize {
        return Err(Error::CapExceeded {
            what: "letters for the subset search".into(),
            limit: u8::MAX as u128 - 1,
        });
    }
    let start = to_mask(start);
    if start.count_ones() <= 1 {
        return Ok(Some(Word::empty()));
    }
    let tables = ByteTables::new(a);
    let max_entries = (opts.memory_budget / BYTES_PER_ENTRY).max(1);
    let mut parent: HashMap<u32, (u32, u8)> = HashMap::new();
    parent.insert(start, (start, u8::MAX));
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for letter in 0..a.k() {
            let t = tables.image(s, letter);
            if parent.contains_key(&t) {
                continue;
            }
            parent.insert(t, (s, letter as u8));
            if t.count_ones() == 1 {
                let mut letters = Vec::new();
                let mut cur = t;
                while cur != start {
                    let (p, l) = parent[&cur];
                    letters.push(l as usize);
                    cur = p;
                }
                letters.reverse();
                return Ok(Some(Word::from_letters(letters)));
            }
            if parent.len() > max_entries {
                return Err(Error::CapExceeded {
                    what: "visited subsets within the memory budget".into(),
                    limit: max_entries as u128,
                });
            }
            queue.push_back(t);
        }
    }
    Ok(None)
}

/// The reset threshold with a lexicographically minimal shortest reset
/// word, or `None` if the automaton is not synchronizing.
pub fn exact_reset_threshold(a: &Automaton) -> Result<Option<ShortestReset>> {
    exact_reset_threshold_with(a, &OracleOptions::default())
}

pub fn exact_reset_threshold_with(a: &Automaton, opts: &OracleOptions) -> Result<Option<ShortestReset>> {
    Ok(
        shortest_compression_from(a, &StateSet::full(a.n()), opts)?.map(|word| ShortestReset {
            length: word.len(),
            word,
        }),
    )
}

/// Shortest merging distance of every pair, and their maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairThresholds {
    /// `None` when some pair cannot be merged.
    pub max: Option<usize>,
    pub per_pair: Vec<((usize, usize), Option<usize>)>,
}

pub fn exact_pair_threshold(a: &Automaton) -> PairThresholds {
    let pg = PairGraph::new(a);
    let mut per_pair = Vec::new();
    for p in 0..a.n() {
        for q in p + 1..a.n() {
            per_pair.push(((p, q), pg.distance(p, q)));
        }
    }
    let max = per_pair.iter().try_fold(0, |m, (_, d)| d.map(|d| m.max(d)));
    PairThresholds { max, per_pair }
}

/// Largest number of words a brute-force span may enumerate.
pub const BRUTE_WORD_LIMIT: u128 = 1_000_000;

fn distinct_maps(a: &Automaton, d: usize) -> Result<Vec<Vec<usize>>> {
    let k = a.k() as u128;
    let count = k.checked_pow(d as u32).unwrap_or(u128::MAX);
    if count > BRUTE_WORD_LIMIT {
        return Err(Error::Budget(format!("{}^{d} words exceed {BRUTE_WORD_LIMIT}", a.k())));
    }
    let mut seen = HashSet::new();
    for w in words_up_to(a.k(), d) {
        seen.insert(a.word_map(&w)?);
    }
    let mut maps: Vec<Vec<usize>> = seen.into_iter().collect();
    maps.sort();
    Ok(maps)
}

/// Basis of `⟨α[w] : w ∈ Σ^{≤d}⟩` computed from every word at once.
pub fn brute_span(a: &Automaton, alpha: &RatVec, d: usize) -> Result<Vec<Vec<BigInt>>> {
    if alpha.len() != a.n() {
        return Err(Error::LengthMismatch {
            expected: a.n(),
            got: alpha.len(),
        });
    }
    let rows: Vec<Vec<BigInt>> = distinct_maps(a, d)?
        .iter()
        .map(|m| to_integer_row(&alpha.push_forward(m).0))
        .collect();
    Ok(row_space_basis(&rows))
}

/// Basis of `⟨[w] : w ∈ Σ^{≤d}⟩`, matrices flattened row by row.
pub fn brute_matrix_span(a: &Automaton, d: usize) -> Result<Vec<Vec<BigInt>>> {
    let n = a.n();
    let rows: Vec<Vec<BigInt>> = distinct_maps(a, d)?
        .iter()
        .map(|m| {
            let mut v = vec![BigInt::zero(); n * n];
            for (q, &t) in m.iter().enumerate() {
                v[q * n + t] = BigInt::from(1);
            }
            v
        })
        .collect();
    Ok(row_space_basis(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cerny(n: usize) -> Automaton {
        let a: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut b: Vec<usize> = (0..n).collect();
        b[n - 1] = 0;
        Automaton::from_letters(n, &[a, b]).unwrap()
    }

    #[test]
    fn cerny_thresholds() {
        for n in 2..=6 {
            let r = exact_reset_threshold(&cerny(n)).unwrap().unwrap();
            assert_eq!(r.length, (n - 1) * (n - 1));
            assert!(cerny(n).is_reset_word(&r.word).unwrap());
        }
        // b a^3 b a^3 b, the only shortest reset word of C_4
        let w = exact_reset_threshold(&cerny(4)).unwrap().unwrap().word;
        assert_eq!(w, Word::from_letters([1, 0, 0, 0, 1, 0, 0, 0, 1]));
    }

    #[test]
    fn trivial_and_infinite() {
        let one = Automaton::from_letters(1, &[vec![0]]).unwrap();
        assert_eq!(exact_reset_threshold(&one).unwrap().unwrap().length, 0);
        let perm = Automaton::from_letters(2, &[vec![1, 0]]).unwrap();
        assert_eq!(exact_reset_threshold(&perm).unwrap(), None);
        assert_eq!(exact_pair_threshold(&perm).max, None);
        assert_eq!(exact_pair_threshold(&one).max, Some(0));
    }

    #[test]
    fn caps() {
        let big = Automaton::from_letters(25, &[(0..25).collect()]).unwrap();
        assert!(matches!(exact_reset_threshold(&big), Err(Error::CapExceeded { .. })));
        let tight = OracleOptions {
            max_states: 24,
            memory_budget: BYTES_PER_ENTRY * 4,
        };
        assert!(matches!(
            exact_reset_threshold_with(&cerny(6), &tight),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn brute_spans() {
        let a = cerny(4);
        assert_eq!(brute_span(&a, &RatVec::uniform(4), 0).unwrap().len(), 1);
        assert_eq!(brute_span(&a, &RatVec::uniform(4), 3).unwrap().len(), 4);
        let perm = Automaton::from_letters(3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert!(brute_span(&perm, &RatVec::uniform(3), 4).unwrap().len() < 3);
        assert!(brute_span(&a, &RatVec::uniform(4), 30).is_err());
    }
}
