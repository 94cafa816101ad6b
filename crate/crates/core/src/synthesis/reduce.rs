//! Reduction of `Σ^{≤d}` to a small set of words with the same span.
//!
//! All variants grow the set by length: iteration `i` tries every one-letter
//! extension of the words of length `i − 1` already kept, keeps those that
//! enlarge the current span, and stops at the first iteration that keeps
//! nothing.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::automaton::{Automaton, Word};
use crate::error::{Error, Result};
use crate::induced::WordSet;
use crate::linalg::{pattern_is_primitive, to_integer_row, RatVec, SpanBasis};

/// Output of a reduction procedure.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Kept words in shortlex order.
    pub words: Vec<Word>,
    /// Dimension of the span.
    pub rank: usize,
    /// Length of the longest kept word.
    pub max_len: usize,
    /// Whether an iteration kept nothing before the length limit was hit.
    pub stagnated: bool,
}

impl Reduction {
    pub fn word_set(&self) -> WordSet {
        WordSet::new(self.words.clone()).expect("reductions always keep ε")
    }
}

/// Which vectors the words stand for.
#[derive(Debug, Clone)]
pub enum ReduceMode {
    /// The word matrices `[w]`, flattened.
    General,
    /// The vectors `α[w]`.
    Alpha(RatVec),
}

type Embed<'a> = Box<dyn Fn(&[usize]) -> Vec<BigInt> + 'a>;

fn matrix_embedding(n: usize) -> Embed<'static> {
    Box::new(move |map: &[usize]| {
        let mut v = vec![BigInt::zero(); n * n];
        for (q, &t) in map.iter().enumerate() {
            v[q * n + t] = BigInt::from(1);
        }
        v
    })
}

fn alpha_embedding(alpha: &RatVec) -> Embed<'static> {
    let ints = to_integer_row(&alpha.0);
    Box::new(move |map: &[usize]| {
        let mut v = vec![BigInt::zero(); ints.len()];
        for (q, &t) in map.iter().enumerate() {
            if !ints[q].is_zero() {
                v[t] += &ints[q];
            }
        }
        v
    })
}

fn embedding(a: &Automaton, mode: &ReduceMode) -> Result<Embed<'static>> {
    match mode {
        ReduceMode::General => Ok(matrix_embedding(a.n())),
        ReduceMode::Alpha(alpha) => {
            if alpha.len() != a.n() {
                return Err(Error::LengthMismatch {
                    expected: a.n(),
                    got: alpha.len(),
                });
            }
            Ok(alpha_embedding(alpha))
        }
    }
}

/// The shared reduction loop. `allowed` restricts candidates to a word set;
/// `done` is consulted after every iteration with the current basis and
/// iteration index and may stop the loop early.
pub(crate) fn reduce_with(
    a: &Automaton,
    d: usize,
    allowed: Option<&HashSet<Word>>,
    embed: &dyn Fn(&[usize]) -> Vec<BigInt>,
    done: &mut dyn FnMut(&SpanBasis, usize) -> Result<bool>,
) -> Result<(Reduction, SpanBasis)> {
    let id: Vec<usize> = (0..a.n()).collect();
    let v0 = embed(&id);
    let mut basis = SpanBasis::new(v0.len());
    basis.insert_int(v0)?;
    let mut words = vec![Word::empty()];
    let mut maps = vec![id];
    let mut frontier = vec![0usize];
    let mut max_len = 0;
    let mut stagnated = false;
    if !done(&basis, 0)? {
        for i in 1..=d {
            let mut added = Vec::new();
            for &u in &frontier {
                for letter in 0..a.k() {
                    let w = words[u].with_letter(letter);
                    if allowed.is_some_and(|s| !s.contains(&w)) {
                        continue;
                    }
                    let m: Vec<usize> = maps[u].iter().map(|&q| a.step(q, letter)).collect();
                    if basis.insert_int(embed(&m))? {
                        added.push(words.len());
                        words.push(w);
                        maps.push(m);
                    }
                }
            }
            if added.is_empty() {
                stagnated = true;
                break;
            }
            max_len = i;
            frontier = added;
            if done(&basis, i)? {
                break;
            }
        }
    }
    let rank = basis.rank();
    Ok((
        Reduction {
            words,
            rank,
            max_len,
            stagnated,
        },
        basis,
    ))
}

/// Words `W ⊆ Σ^{≤d}` with `⟨[w] : w ∈ W⟩ = ⟨[w] : w ∈ Σ^{≤d}⟩`.
pub fn reduce_general(a: &Automaton, d: usize) -> Result<Reduction> {
    let embed = matrix_embedding(a.n());
    Ok(reduce_with(a, d, None, &embed, &mut |_, _| Ok(false))?.0)
}

/// Words `W ⊆ Σ^{≤d}` with `⟨α[w] : w ∈ W⟩ = ⟨α[w] : w ∈ Σ^{≤d}⟩`.
pub fn reduce_alpha(a: &Automaton, d: usize, alpha: &RatVec) -> Result<Reduction> {
    let embed = embedding(a, &ReduceMode::Alpha(alpha.clone()))?;
    Ok(reduce_with(a, d, None, &embed, &mut |_, _| Ok(false))?.0)
}

/// Checks that deleting any non-empty factor of a member yields a member.
pub fn check_factor_closed(words: &[Word]) -> Result<()> {
    let set: HashSet<&Word> = words.iter().collect();
    for w in words {
        let l = w.letters();
        for i in 0..l.len() {
            for j in i + 1..=l.len() {
                let shorter: Word = l[..i].iter().chain(&l[j..]).copied().collect();
                if !set.contains(&shorter) {
                    return Err(Error::NotFactorClosed {
                        word: w.clone(),
                        missing: shorter,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Reduces an arbitrary factor-closed set.
///
/// The length-by-length loop only extends kept words, so a member whose
/// prefix was dropped is never tried there. A final pass over all members
/// adds any that are still independent, which makes the span equality hold
/// unconditionally.
pub fn reduce_factor_closed(a: &Automaton, ws: &[Word], mode: &ReduceMode) -> Result<Reduction> {
    if ws.is_empty() {
        return Err(Error::Precondition("word set must be non-empty".into()));
    }
    ws.iter().try_for_each(|w| a.check_word(w))?;
    check_factor_closed(ws)?;
    let embed = embedding(a, mode)?;
    let allowed: HashSet<Word> = ws.iter().cloned().collect();
    let d = ws.iter().map(Word::len).max().unwrap_or(0);
    let (mut red, mut basis) = reduce_with(a, d, Some(&allowed), &embed, &mut |_, _| Ok(false))?;
    let mut sorted: Vec<&Word> = ws.iter().collect();
    sorted.sort();
    for w in sorted {
        if basis.insert_int(embed(&a.word_map(w)?))? {
            red.words.push(w.clone());
            red.max_len = red.max_len.max(w.len());
        }
    }
    red.words.sort();
    red.rank = basis.rank();
    Ok(red)
}

/// Words `W ⊆ Σ^{≤d}` such that `W·W1` restricted to `R = Q.W1` is primitive.
///
/// A candidate is kept when it contributes a transition (on `R`) missing
/// from the current pattern. Fails with [`Error::NotPrimitive`] if an
/// iteration keeps nothing before primitivity is reached.
pub fn reduce_primitive(a: &Automaton, w1: &WordSet, d: usize) -> Result<Vec<Word>> {
    w1.check(a)?;
    let w1_maps: Vec<Vec<usize>> = w1.words().iter().map(|w| a.word_map(w)).collect::<Result<_>>()?;
    let mut in_r = vec![false; a.n()];
    for m in &w1_maps {
        for &t in m {
            in_r[t] = true;
        }
    }
    let r_list: Vec<usize> = (0..a.n()).filter(|&q| in_r[q]).collect();
    let mut pos = vec![usize::MAX; a.n()];
    for (i, &q) in r_list.iter().enumerate() {
        pos[q] = i;
    }
    let r = r_list.len();
    let mut pattern = vec![vec![false; r]; r];
    // returns whether the word added a new entry
    let absorb = |map: &[usize], pattern: &mut Vec<Vec<bool>>| {
        let mut fresh = false;
        for m1 in &w1_maps {
            for (i, &p) in r_list.iter().enumerate() {
                let j = pos[m1[map[p]]];
                if !pattern[i][j] {
                    pattern[i][j] = true;
                    fresh = true;
                }
            }
        }
        fresh
    };
    let id: Vec<usize> = (0..a.n()).collect();
    absorb(&id, &mut pattern);
    let mut words = vec![Word::empty()];
    let mut maps = vec![id];
    if pattern_is_primitive(&pattern) {
        return Ok(words);
    }
    let mut frontier = vec![0usize];
    for _ in 1..=d {
        let mut added = Vec::new();
        for &u in &frontier {
            for letter in 0..a.k() {
                let m: Vec<usize> = maps[u].iter().map(|&q| a.step(q, letter)).collect();
                if absorb(&m, &mut pattern) {
                    added.push(words.len());
                    words.push(words[u].with_letter(letter));
                    maps.push(m);
                    if pattern_is_primitive(&pattern) {
                        words.sort();
                        return Ok(words);
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        frontier = added;
    }
    Err(Error::NotPrimitive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::words_up_to;
    use crate::linalg::span_rank;

    fn c4() -> Automaton {
        Automaton::from_letters(4, &[vec![1, 2, 3, 0], vec![0, 1, 2, 0]]).unwrap()
    }

    fn flat(a: &Automaton, w: &Word) -> RatVec {
        crate::linalg::word_matrix(a, w).unwrap().flatten()
    }

    #[test]
    fn zero_length_gives_epsilon() {
        let r = reduce_general(&c4(), 0).unwrap();
        assert_eq!(r.words, vec![Word::empty()]);
    }

    #[test]
    fn general_span_matches_all_words() {
        let a = c4();
        let r = reduce_general(&a, 3).unwrap();
        let all: Vec<RatVec> = words_up_to(2, 3).map(|w| flat(&a, &w)).collect();
        let kept: Vec<RatVec> = r.words.iter().map(|w| flat(&a, w)).collect();
        assert_eq!(r.rank, span_rank(&all).unwrap());
        assert_eq!(span_rank(&kept).unwrap(), r.rank);
        assert!(r.words.len() <= 16);
    }

    #[test]
    fn cyclic_permutation_powers() {
        let a = Automaton::from_letters(4, &[vec![1, 2, 3, 0]]).unwrap();
        let r = reduce_general(&a, 3).unwrap();
        assert_eq!(r.words, (0..4).map(|i| Word::power(0, i)).collect::<Vec<_>>());
        let r = reduce_general(&a, 10).unwrap();
        assert!(r.stagnated);
        assert_eq!(r.max_len, 3);
    }

    #[test]
    fn factor_closed_checks() {
        let a = c4();
        let ab = Word::from_letters([0, 1]);
        assert!(matches!(
            reduce_factor_closed(&a, &[ab.clone()], &ReduceMode::General),
            Err(Error::NotFactorClosed { .. })
        ));
        let all: Vec<Word> = words_up_to(2, 3).collect();
        let via_closed = reduce_factor_closed(&a, &all, &ReduceMode::General).unwrap();
        assert_eq!(via_closed.words, reduce_general(&a, 3).unwrap().words);
        let ws = vec![
            Word::empty(),
            Word::letter(0),
            Word::letter(1),
            ab,
            Word::from_letters([1, 0]),
        ];
        let red = reduce_factor_closed(&a, &ws, &ReduceMode::General).unwrap();
        let full: Vec<RatVec> = ws.iter().map(|w| flat(&a, w)).collect();
        assert_eq!(red.rank, span_rank(&full).unwrap());
    }

    #[test]
    fn primitive_reduction() {
        let a = c4();
        let w = reduce_primitive(&a, &WordSet::singleton(Word::empty()), 3).unwrap();
        // I + [a] is already primitive for the 4-cycle
        assert_eq!(w, vec![Word::empty(), Word::letter(0)]);
        let reset = Word::from_letters([1, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(
            reduce_primitive(&a, &WordSet::singleton(reset), 3).unwrap(),
            vec![Word::empty()]
        );
        // the identity permutation never connects its two states
        let perm = Automaton::from_letters(2, &[vec![0, 1]]).unwrap();
        assert_eq!(
            reduce_primitive(&perm, &WordSet::singleton(Word::empty()), 5),
            Err(Error::NotPrimitive)
        );
    }
}
