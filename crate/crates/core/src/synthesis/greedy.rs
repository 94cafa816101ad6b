use num_traits::Zero;

use super::certificate::{bounds, BoundKind, ResetCertificate};
use crate::automaton::{Automaton, PairGraph, StateSet, Word};
use crate::error::{Error, Result};
use crate::induced::{build_induced, WordSet};
use crate::linalg::{ds_count, Rat, RatVec};

/// A greedy extension run with the quantities its bound depends on.
#[derive(Debug, Clone)]
pub struct ExtensionRun {
    pub certificate: ResetCertificate,
    /// Number of extension words used, including a leading letter when `R = Q`.
    pub steps: usize,
    /// `DS(α)`, or an upper bound for it when the exact count hit its cap.
    pub ds: u128,
    pub ds_exact: bool,
    /// `(x_j, α)` after every composite step, strictly increasing.
    pub values: Vec<Rat>,
}

fn mass(x: &[bool], alpha: &[Rat]) -> Rat {
    x.iter()
        .zip(alpha)
        .filter(|(&b, _)| b)
        .fold(Rat::zero(), |acc, (_, v)| acc + v)
}

/// Greedy extension over the induced automaton `A_c(W1, W2)`.
///
/// Starting from a single state `q` of `R = Q.W1`, repeatedly replaces the
/// current set `x` by its preimage (inside `R`) under the first composite
/// letter that increases `(x, α)`, until `x = R`. The result is
/// `w0 u_m ⋯ u_0`. When `R = Q` the start is the smallest state with a
/// non-injective letter, which is used as `u_0`, and `w0` is dropped.
pub fn greedy_extension(a: &Automaton, w1: &WordSet, w2: &WordSet, alpha: &RatVec, w0: &Word) -> Result<ExtensionRun> {
    let n = a.n();
    if alpha.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    a.check_word(w0)?;
    if n == 1 {
        let certificate = ResetCertificate::new(a, Word::empty(), BoundKind::Trivial, 0, Vec::new())?;
        return Ok(ExtensionRun {
            certificate,
            steps: 0,
            ds: 1,
            ds_exact: true,
            values: Vec::new(),
        });
    }
    let b = build_induced(a, w1, w2)?;
    let r_list = b.state_list();
    let r = r_list.len();
    let full = r == n;
    let image = a.apply_word(&StateSet::full(n), w0)?;
    if !full && &image != b.states() {
        return Err(Error::Precondition(format!(
            "Q.w0 = {image} differs from R = {}",
            b.states()
        )));
    }
    if !alpha.is_stochastic()
        || alpha
            .iter()
            .enumerate()
            .any(|(q, v)| !v.is_zero() && !b.states().contains(q))
    {
        return Err(Error::Precondition(
            "α must be a stochastic vector supported on R".into(),
        ));
    }
    let (ds, ds_exact) = match ds_count(alpha) {
        Ok(ds) => (ds, true),
        Err(Error::DsCapExceeded { bound }) => (bound, false),
        Err(e) => return Err(e),
    };
    let alpha_r: Vec<Rat> = r_list.iter().map(|&q| alpha[q].clone()).collect();

    // x as membership over positions of R
    let mut x = vec![false; r];
    let mut chosen: Vec<Word> = Vec::new();
    if full {
        let (q, letter) = (0..n)
            .flat_map(|q| (0..a.k()).map(move |l| (q, l)))
            .find(|&(q, l)| (0..n).filter(|&p| a.step(p, l) == q).count() > 1)
            .ok_or_else(|| Error::CriterionViolated("every letter is a permutation".into()))?;
        for p in 0..n {
            x[p] = a.step(p, letter) == q;
        }
        chosen.push(Word::letter(letter));
    } else {
        x[0] = true;
    }
    let mut values = vec![mass(&x, &alpha_r)];
    while x.iter().any(|&b| !b) {
        let current = values.last().expect("values start non-empty");
        let found = b.letters().iter().find_map(|l| {
            let pre: Vec<bool> = l.action.iter().map(|&t| x[t]).collect();
            let v = mass(&pre, &alpha_r);
            (v > *current).then_some((pre, v, l))
        });
        let Some((pre, v, l)) = found else {
            let states: Vec<usize> = (0..r).filter(|&i| x[i]).map(|i| r_list[i]).collect();
            return Err(Error::CriterionViolated(format!(
                "no composite letter extends {}",
                StateSet::from_states(n, states)
            )));
        };
        x = pre;
        values.push(v);
        chosen.push(l.word());
    }
    let steps = chosen.len();
    if ds_exact && steps as u128 > ds.saturating_sub(1) {
        return Err(Error::Internal(format!(
            "{steps} extension steps exceed DS(α) − 1 = {}",
            ds - 1
        )));
    }
    let mut word = if full { Word::empty() } else { w0.clone() };
    for u in chosen.iter().rev() {
        word.append(u);
    }
    let bound = bounds::extension(w0.len(), ds, w1.max_len(), w2.max_len(), full);
    let certificate = ResetCertificate::new(a, word, BoundKind::Extension, bound, chosen)?;
    Ok(ExtensionRun {
        certificate,
        steps,
        ds,
        ds_exact,
        values,
    })
}

/// Compresses `start` to one state by repeatedly merging the closest pair.
pub fn greedy_compression_from(a: &Automaton, start: &StateSet) -> Result<(Word, Vec<Word>)> {
    let pg = PairGraph::new(a);
    let mut s = start.clone();
    let mut word = Word::empty();
    let mut steps = Vec::new();
    while s.len() > 1 {
        let Some((_, p, q)) = pg.closest_pair_in(&s) else {
            let v = s.to_vec();
            return Err(Error::NotSynchronizing {
                pair: Some((v[0], v[1])),
            });
        };
        let w = pg.merging_word(p, q).expect("distance is finite");
        s = a.apply_word(&s, &w)?;
        word.append(&w);
        steps.push(w);
    }
    Ok((word, steps))
}

/// Greedy pair compression from `Q`, certified against `(n−1)·max pair distance`.
pub fn greedy_compression(a: &Automaton) -> Result<ResetCertificate> {
    if let Some(pair) = a.incompressible_pair() {
        return Err(Error::NotSynchronizing { pair: Some(pair) });
    }
    let (word, steps) = greedy_compression_from(a, &StateSet::full(a.n()))?;
    let dist = PairGraph::new(a).max_distance().unwrap_or(0);
    ResetCertificate::new(a, word, BoundKind::Pairwise, bounds::pairwise(a.n(), dist), steps)
}
