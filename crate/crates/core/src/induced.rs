//! Induced automata on the image of a word set, and completeness checks.
//!
//! For word sets `W1`, `W2` the induced automaton lives on `R = Q.W1` and
//! reads composite letters `w2 w1`. Its Markov chain is `[P2][P1]`
//! restricted to `R`.

use num_traits::{Signed, Zero};

use crate::automaton::{words_up_to, Automaton, StateSet, Word};
use crate::error::{Error, Result};
use crate::linalg::{markov_matrix, stationary_distribution, LetterDistribution, Rat, RatMat, RatVec, SpanBasis};
use crate::synthesis::reduce_alpha;

/// A non-empty set of words with an optional positive distribution.
/// Without an explicit distribution the set is weighted uniformly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    words: Vec<Word>,
    dist: Option<Vec<Rat>>,
}

impl WordSet {
    /// Keeps the first occurrence of repeated words.
    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let out: Vec<Word> = words.into_iter().filter(|w| seen.insert(w.clone())).collect();
        if out.is_empty() {
            return Err(Error::Precondition("word set must be non-empty".into()));
        }
        Ok(WordSet { words: out, dist: None })
    }

    pub fn with_distribution(words: Vec<Word>, dist: Vec<Rat>) -> Result<Self> {
        if words.len() != dist.len() {
            return Err(Error::LengthMismatch {
                expected: words.len(),
                got: dist.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(w) = words.iter().find(|w| !seen.insert(*w)) {
            return Err(Error::Precondition(format!("word `{w}` listed twice")));
        }
        // validates positivity and total mass
        LetterDistribution::new(dist.clone())?;
        Ok(WordSet {
            words,
            dist: Some(dist),
        })
    }

    pub fn singleton(w: Word) -> Self {
        WordSet {
            words: vec![w],
            dist: None,
        }
    }

    /// `Σ^{≤d}` in shortlex order.
    pub fn all_up_to(k: usize, d: usize) -> Self {
        WordSet {
            words: words_up_to(k, d).collect(),
            dist: None,
        }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn distribution(&self) -> Option<&[Rat]> {
        self.dist.as_deref()
    }

    pub fn probability(&self, i: usize) -> Rat {
        match &self.dist {
            Some(d) => d[i].clone(),
            None => Rat::new(1.into(), (self.words.len() as u64).into()),
        }
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn check(&self, a: &Automaton) -> Result<()> {
        self.words.iter().try_for_each(|w| a.check_word(w))
    }

    /// `[P] = Σ P(w) [w]`.
    pub fn weighted_matrix(&self, a: &Automaton) -> Result<RatMat> {
        let mut m = RatMat::zeros(a.n(), a.n());
        for (i, w) in self.words.iter().enumerate() {
            let p = self.probability(i);
            for (q, t) in a.word_map(w)?.into_iter().enumerate() {
                m[(q, t)] += &p;
            }
        }
        Ok(m)
    }
}

/// One letter `w2 w1` of an induced automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeLetter {
    pub w2: Word,
    pub w1: Word,
    /// Images of the states of `R`, as positions in `R`.
    pub action: Vec<usize>,
}

impl CompositeLetter {
    pub fn word(&self) -> Word {
        self.w2.concat(&self.w1)
    }
}

/// `A_c(W1, W2)`: states `R = Q.W1`, letters `W2 W1` deduplicated by action on `R`.
#[derive(Debug, Clone)]
pub struct InducedAutomaton {
    base: Automaton,
    w1: WordSet,
    w2: WordSet,
    r_states: StateSet,
    r_list: Vec<usize>,
    letters: Vec<CompositeLetter>,
}

/// Builds `A_c(W1, W2)`. Composite letters are enumerated by
/// `(|w2|, w2, |w1|, w1)` and only the first word of each action on `R` is kept.
pub fn build_induced(a: &Automaton, w1: &WordSet, w2: &WordSet) -> Result<InducedAutomaton> {
    w1.check(a)?;
    w2.check(a)?;
    let mut r_states = StateSet::empty(a.n());
    let w1_maps: Vec<Vec<usize>> = w1.words().iter().map(|w| a.word_map(w)).collect::<Result<_>>()?;
    for m in &w1_maps {
        for &t in m {
            r_states.insert(t);
        }
    }
    let r_list = r_states.to_vec();
    let mut pos = vec![usize::MAX; a.n()];
    for (i, &q) in r_list.iter().enumerate() {
        pos[q] = i;
    }
    let mut w2_sorted: Vec<&Word> = w2.words().iter().collect();
    w2_sorted.sort();
    let mut w1_order: Vec<usize> = (0..w1.len()).collect();
    w1_order.sort_by(|&i, &j| w1.words()[i].cmp(&w1.words()[j]));

    let mut seen = std::collections::HashSet::new();
    let mut letters = Vec::new();
    for u in w2_sorted {
        let u_on_r: Vec<usize> = r_list.iter().map(|&q| a.run(q, u)).collect();
        for &j in &w1_order {
            let action: Vec<usize> = u_on_r.iter().map(|&p| pos[w1_maps[j][p]]).collect();
            if seen.insert(action.clone()) {
                letters.push(CompositeLetter {
                    w2: u.clone(),
                    w1: w1.words()[j].clone(),
                    action,
                });
            }
        }
    }
    Ok(InducedAutomaton {
        base: a.clone(),
        w1: w1.clone(),
        w2: w2.clone(),
        r_states,
        r_list,
        letters,
    })
}

impl InducedAutomaton {
    pub fn base(&self) -> &Automaton {
        &self.base
    }

    pub fn w1(&self) -> &WordSet {
        &self.w1
    }

    pub fn w2(&self) -> &WordSet {
        &self.w2
    }

    /// `R = Q.W1`.
    pub fn states(&self) -> &StateSet {
        &self.r_states
    }

    pub fn state_list(&self) -> &[usize] {
        &self.r_list
    }

    pub fn r(&self) -> usize {
        self.r_list.len()
    }

    pub fn letters(&self) -> &[CompositeLetter] {
        &self.letters
    }

    /// The induced automaton as a plain automaton on `0..r`, letters in order.
    pub fn to_automaton(&self) -> Automaton {
        let maps: Vec<Vec<usize>> = self.letters.iter().map(|l| l.action.clone()).collect();
        Automaton::from_letters(self.r(), &maps).expect("composite letters map R into R")
    }

    /// `[P2][P1]` on the whole state space; rows outside `R` are kept.
    pub fn full_markov(&self) -> Result<RatMat> {
        Ok(self
            .w2
            .weighted_matrix(&self.base)?
            .mul(&self.w1.weighted_matrix(&self.base)?))
    }

    /// The `r × r` transition matrix of the chain on `R`.
    pub fn markov(&self) -> Result<RatMat> {
        Ok(self.full_markov()?.restrict(&self.r_list))
    }

    /// Stationary vector of the induced chain, zero-padded to length `n`,
    /// and whether it is unique.
    pub fn stationary(&self) -> Result<(RatVec, bool)> {
        let st = stationary_distribution(&self.markov()?)?;
        let mut alpha = RatVec::zeros(self.base.n());
        for (i, &q) in self.r_list.iter().enumerate() {
            alpha.0[q] = st.alpha[i].clone();
        }
        Ok((alpha, st.unique))
    }
}

/// `[P2][P1]` restricted to `R`, for the distributions carried by the word sets.
pub fn induced_markov(b: &InducedAutomaton) -> Result<RatMat> {
    b.markov()
}

/// Whether `{α[w] : w ∈ words}` spans exactly the coordinate subspace `V_S`.
pub fn is_complete(a: &Automaton, words: &[Word], alpha: &RatVec, states: &StateSet) -> Result<bool> {
    if alpha.len() != a.n() {
        return Err(Error::LengthMismatch {
            expected: a.n(),
            got: alpha.len(),
        });
    }
    let mut basis = SpanBasis::new(a.n());
    for w in words {
        let v = alpha.push_forward(&a.word_map(w)?);
        if v.iter().enumerate().any(|(q, x)| !x.is_zero() && !states.contains(q)) {
            return Ok(false);
        }
        basis.insert(&v)?;
        if basis.rank() == states.len() {
            break;
        }
    }
    Ok(basis.rank() == states.len())
}

/// `(x, α[w])` for a word acting by `map`: the α-mass of the preimage of `x`.
pub fn extension_value(x: &StateSet, alpha: &RatVec, map: &[usize]) -> Rat {
    map.iter()
        .enumerate()
        .filter(|(_, &t)| x.contains(t))
        .fold(Rat::zero(), |acc, (q, _)| acc + &alpha[q])
}

/// The first word (in the given order) with `(x, α[w]) > (x, α)`.
pub fn find_extension_word<'w>(a: &Automaton, x: &StateSet, alpha: &RatVec, words: &'w [Word]) -> Result<&'w Word> {
    let base = x.iter().fold(Rat::zero(), |acc, q| acc + &alpha[q]);
    for w in words {
        if extension_value(x, alpha, &a.word_map(w)?) > base {
            return Ok(w);
        }
    }
    Err(Error::CriterionViolated(format!("no word extends {x}")))
}

/// Decides synchronization through completeness of `Σ^{≤n−1}` for the
/// stationary distribution of the chain driven by `p`.
pub fn criterion_synchronizing(a: &Automaton, p: &LetterDistribution) -> Result<bool> {
    if !a.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let st = stationary_distribution(&markov_matrix(a, p)?)?;
    let alpha = st.alpha;
    if alpha.iter().any(|x| !x.is_positive()) {
        return Err(Error::Internal(
            "stationary vector of a strongly connected chain must be positive".into(),
        ));
    }
    let reduced = reduce_alpha(a, a.n() - 1, &alpha)?;
    is_complete(a, &reduced.words, &alpha, &StateSet::full(a.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn c4() -> Automaton {
        Automaton::from_letters(4, &[vec![1, 2, 3, 0], vec![0, 1, 2, 0]]).unwrap()
    }

    #[test]
    fn identity_w1_keeps_letters() {
        let a = c4();
        let b = build_induced(&a, &WordSet::singleton(Word::empty()), &WordSet::all_up_to(2, 1)).unwrap();
        assert_eq!(b.r(), 4);
        // ε, a, b
        assert_eq!(b.letters().len(), 3);
        assert_eq!(b.letters()[1].action, vec![1, 2, 3, 0]);
        let m = b.markov().unwrap();
        assert!(m.is_row_stochastic());
    }

    #[test]
    fn image_of_b() {
        let a = c4();
        let b = build_induced(
            &a,
            &WordSet::singleton(Word::letter(1)),
            &WordSet::singleton(Word::empty()),
        )
        .unwrap();
        assert_eq!(b.state_list(), &[0, 1, 2]);
        let b2 = build_induced(&a, &WordSet::singleton(Word::letter(1)), &WordSet::all_up_to(2, 1)).unwrap();
        let m = b2.markov().unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        assert!(m.is_row_stochastic());
    }

    #[test]
    fn singleton_w2_gives_word_matrix() {
        let a = c4();
        let w = Word::from_letters([1, 0]);
        let b = build_induced(&a, &WordSet::singleton(Word::empty()), &WordSet::singleton(w.clone())).unwrap();
        assert_eq!(b.markov().unwrap(), crate::linalg::word_matrix(&a, &w).unwrap());
    }

    #[test]
    fn completeness_examples() {
        let a = c4();
        let alpha = stationary_distribution(&markov_matrix(&a, &LetterDistribution::uniform(2)).unwrap())
            .unwrap()
            .alpha;
        let q = StateSet::full(4);
        assert!(!is_complete(&a, &[Word::empty()], &alpha, &q).unwrap());
        let all: Vec<Word> = words_up_to(2, 3).collect();
        assert!(is_complete(&a, &all, &alpha, &q).unwrap());
    }

    #[test]
    fn extension_word_on_c4() {
        let a = c4();
        let alpha = RatVec::uniform(4);
        let x = StateSet::singleton(4, 0);
        let words = vec![Word::letter(0), Word::letter(1)];
        // preimage of 0 under a is {3}: no gain; under b it is {0,3}
        assert_eq!(find_extension_word(&a, &x, &alpha, &words).unwrap(), &Word::letter(1));
        assert!(find_extension_word(&a, &StateSet::full(4), &alpha, &words).is_err());
        assert_eq!(extension_value(&x, &alpha, &[0, 1, 2, 0]), rat(1, 2));
    }

    #[test]
    fn criterion_on_small_cases() {
        assert!(criterion_synchronizing(&c4(), &LetterDistribution::uniform(2)).unwrap());
        let perm = Automaton::from_letters(2, &[vec![1, 0]]).unwrap();
        assert!(!criterion_synchronizing(&perm, &LetterDistribution::uniform(1)).unwrap());
        let split = Automaton::from_letters(2, &[vec![0, 1]]).unwrap();
        assert_eq!(
            criterion_synchronizing(&split, &LetterDistribution::uniform(1)),
            Err(Error::NotStronglyConnected)
        );
    }
}
