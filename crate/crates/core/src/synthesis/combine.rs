use num_traits::{One, Zero};

use crate::automaton::{Automaton, Word};
use crate::error::{Error, Result};
use crate::induced::{build_induced, InducedAutomaton, WordSet};
use crate::linalg::{bareiss_det, pattern_is_primitive, stationary_distribution, Rat, RatMat, RatVec, SpanBasis};

/// Largest number of halvings tried for the mixing weight.
pub const MAX_HALVINGS: u32 = 64;

/// The automaton `C = A_c(W1, W ∪ W2)` with a mixing weight that keeps `W`
/// complete for the stationary vector of the mixed chain.
#[derive(Debug, Clone)]
pub struct Combination {
    pub c: InducedAutomaton,
    /// The weight `δ' = 2^{-halvings}` given to `W`.
    pub delta: Rat,
    pub halvings: u32,
    /// Stationary vector of the chain on `C` (length `n`).
    pub beta: RatVec,
    /// The `n` words of `W` whose vectors form the determinant.
    pub independent: Vec<Word>,
    /// `det(β[w_i])`, nonzero.
    pub det: Rat,
    pub synchronizing: bool,
}

fn pad(v: &RatVec, idx: &[usize], n: usize) -> RatVec {
    let mut out = RatVec::zeros(n);
    for (i, &q) in idx.iter().enumerate() {
        out.0[q] = v[i].clone();
    }
    out
}

fn rows_of(alpha: &RatVec, maps: &[Vec<usize>]) -> Result<RatMat> {
    RatMat::from_rows(maps.iter().map(|m| alpha.push_forward(m).0).collect())
}

/// Mixes a complete set `W` into the letters of a primitive induced
/// automaton `A_c(W1, W2)`, halving the weight of `W` from `1/2` until `W`
/// stays complete for the stationary vector of the mixed chain.
pub fn combine_complete_primitive(a: &Automaton, w1: &WordSet, w2: &WordSet, w: &WordSet) -> Result<Combination> {
    let n = a.n();
    w.check(a)?;
    if !a.is_strongly_connected() {
        return Err(Error::Precondition("the automaton must be strongly connected".into()));
    }
    let b = build_induced(a, w1, w2)?;
    let r_list = b.state_list().to_vec();
    let p2 = w2.weighted_matrix(a)?;
    let p1 = w1.weighted_matrix(a)?;
    if !pattern_is_primitive(&p2.mul(&p1).restrict(&r_list).pattern()) {
        return Err(Error::Precondition(
            "the induced automaton's digraph is not primitive".into(),
        ));
    }
    let alpha = pad(
        &stationary_distribution(&p2.mul(&p1).restrict(&r_list))?.alpha,
        &r_list,
        n,
    );

    // first n words of W with independent α[w]
    let mut basis = SpanBasis::new(n);
    let mut independent = Vec::new();
    let mut maps = Vec::new();
    for word in w.words() {
        let m = a.word_map(word)?;
        if basis.insert(&alpha.push_forward(&m))? {
            independent.push(word.clone());
            maps.push(m);
            if basis.is_full() {
                break;
            }
        }
    }
    if !basis.is_full() {
        return Err(Error::Precondition(format!(
            "W spans only {} of {n} dimensions for the stationary vector",
            basis.rank()
        )));
    }
    debug_assert!(!bareiss_det(&rows_of(&alpha, &maps)?)?.is_zero());

    let size = Rat::from_integer((w.len() as u64).into());
    let mut mix_w = RatMat::zeros(n, n);
    for word in w.words() {
        for (q, t) in a.word_map(word)?.into_iter().enumerate() {
            mix_w[(q, t)] += Rat::one() / &size;
        }
    }
    let mut delta = Rat::one();
    for halvings in 1..=MAX_HALVINGS {
        delta /= Rat::from_integer(2.into());
        let s = p2.scale(&(Rat::one() - &delta)).add(&mix_w.scale(&delta)).mul(&p1);
        let st = stationary_distribution(&s.restrict(&r_list))?;
        if !st.unique {
            return Err(Error::Internal("mixed chain lost its unique stationary vector".into()));
        }
        let beta = pad(&st.alpha, &r_list, n);
        let det = bareiss_det(&rows_of(&beta, &maps)?)?;
        if det.is_zero() {
            continue;
        }
        // W ∪ W2 with weights (1−δ)P2 + δ/|W|
        let mut words: Vec<Word> = w2.words().to_vec();
        let mut dist: Vec<Rat> = (0..w2.len())
            .map(|i| w2.probability(i) * (Rat::one() - &delta))
            .collect();
        for word in w.words() {
            let share = &delta / &size;
            match words.iter().position(|x| x == word) {
                Some(i) => dist[i] += share,
                None => {
                    words.push(word.clone());
                    dist.push(share);
                }
            }
        }
        let c = build_induced(a, w1, &WordSet::with_distribution(words, dist)?)?;
        if c.markov()? != s.restrict(&r_list) {
            return Err(Error::Internal("mixed chain differs from the chain of C".into()));
        }
        let synchronizing = c.to_automaton().is_synchronizing();
        return Ok(Combination {
            c,
            delta,
            halvings,
            beta,
            independent,
            det,
            synchronizing,
        });
    }
    Err(Error::SearchExhausted(format!(
        "no weight 2^-t with t ≤ {MAX_HALVINGS} keeps W complete"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::reduce_alpha;

    fn c4() -> Automaton {
        Automaton::from_letters(4, &[vec![1, 2, 3, 0], vec![0, 1, 2, 0]]).unwrap()
    }

    #[test]
    fn complete_w2_combines_at_first_halving() {
        let a = c4();
        let w1 = WordSet::singleton(Word::empty());
        let w2 = WordSet::all_up_to(2, 1);
        let b = build_induced(&a, &w1, &w2).unwrap();
        let (alpha, unique) = b.stationary().unwrap();
        assert!(unique);
        let w = reduce_alpha(&a, 3, &alpha).unwrap().word_set();
        let comb = combine_complete_primitive(&a, &w1, &w2, &w).unwrap();
        assert!(comb.synchronizing);
        assert!(!comb.det.is_zero());
        assert!(comb.delta > Rat::zero() && comb.delta < Rat::one());
        assert_eq!(comb.independent.len(), 4);
    }

    #[test]
    fn incomplete_w_is_rejected() {
        let a = c4();
        let w1 = WordSet::singleton(Word::empty());
        let w2 = WordSet::all_up_to(2, 1);
        let w = WordSet::singleton(Word::letter(0));
        assert!(matches!(
            combine_complete_primitive(&a, &w1, &w2, &w),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_state() {
        let a = Automaton::from_letters(1, &[vec![0]]).unwrap();
        let e = WordSet::singleton(Word::empty());
        let comb = combine_complete_primitive(&a, &e, &e, &e).unwrap();
        assert!(comb.synchronizing);
        assert_eq!(comb.halvings, 1);
    }
}
