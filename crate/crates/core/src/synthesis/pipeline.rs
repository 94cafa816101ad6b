use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::certificate::{bounds, BoundKind, ResetCertificate};
use super::greedy::greedy_compression_from;
use super::reduce::reduce_with;
use crate::automaton::{distinct_actions, Automaton, PairGraph, StateSet, Word};
use crate::error::{Error, Result};
use crate::oracle::{shortest_compression_from, OracleOptions};

/// Induced automata up to this many states are reset exactly.
pub const EXACT_INDUCED_STATES: usize = 20;

/// Cap on the number of distinct actions of short words on `Q.w`.
pub const ACTION_CAP: usize = 1 << 18;

/// A small-rank pipeline run.
#[derive(Debug, Clone)]
pub struct SmallRankRun {
    pub certificate: ResetCertificate,
    /// `|Q.w|`.
    pub r: usize,
    /// `max(d_complete, d_reach, 1)`.
    pub d: usize,
    /// First length at which the words on the sink component span every constant map.
    pub d_complete: usize,
    /// Longest shortest path from a state into `S ∩ Q.w`.
    pub d_reach: usize,
    /// `|w| + (|w|+d)(r²−r)/2`.
    pub pair_compression_bound: u128,
    /// Number of letters of the induced automaton.
    pub induced_letters: usize,
    /// Whether the induced automaton was reset by exact search.
    pub exact: bool,
}

/// A length `d ≤ |S| − 1` for which `Σ^{≤d}` is complete for `V_S` with
/// respect to every stochastic vector supported on the sink `s`.
///
/// For each such vector `g` the spans of `g[Σ^{≤j}]` grow strictly until they
/// stop, so they are stable by `j = |S| − 1`; in a synchronizing automaton the
/// stable span contains every `[q]`. A smaller `d` is returned when the
/// words of length at most `d`, restricted to `S`, already span every
/// constant map `J_q` (all rows equal to `[q]`), since `g J_q = [q]`.
pub fn sink_completeness_length(a: &Automaton, s: &StateSet) -> Result<usize> {
    let states = s.to_vec();
    let m = states.len();
    if m <= 1 {
        return Ok(0);
    }
    let mut pos = vec![usize::MAX; a.n()];
    for (i, &q) in states.iter().enumerate() {
        pos[q] = i;
    }
    let letters: Vec<Vec<usize>> = (0..a.k())
        .map(|l| states.iter().map(|&q| pos[a.step(q, l)]).collect())
        .collect();
    let sub = Automaton::from_letters(m, &letters)?;
    if !sub.is_synchronizing() {
        return Err(Error::NotSynchronizing {
            pair: sub.incompressible_pair().map(|(p, q)| (states[p], states[q])),
        });
    }
    let embed = |map: &[usize]| {
        let mut v = vec![BigInt::zero(); m * m];
        for (p, &t) in map.iter().enumerate() {
            v[p * m + t] = BigInt::from(1);
        }
        v
    };
    let constants: Vec<Vec<BigInt>> = (0..m).map(|q| embed(&vec![q; m])).collect();
    let mut found = None;
    reduce_with(&sub, m - 1, None, &embed, &mut |basis, i| {
        for c in &constants {
            if !basis.contains_int(c.clone())? {
                return Ok(false);
            }
        }
        found = Some(i);
        Ok(true)
    })?;
    Ok(found.unwrap_or(m - 1))
}

/// The induced automaton `A_c({w}, Σ^{≤d})` as a plain automaton on the
/// positions of `Q.w`, with the word of every letter.
pub(crate) fn induced_by_word(a: &Automaton, w: &Word, d: usize) -> Result<(Automaton, Vec<Word>, Vec<usize>)> {
    let image = a.apply_word(&StateSet::full(a.n()), w)?;
    let r_list = image.to_vec();
    let mut pos = vec![usize::MAX; a.n()];
    for (i, &q) in r_list.iter().enumerate() {
        pos[q] = i;
    }
    let mut seen = HashSet::new();
    let mut maps = Vec::new();
    let mut words = Vec::new();
    for (u, img) in distinct_actions(a, &r_list, d, ACTION_CAP)? {
        let action: Vec<usize> = img.iter().map(|&q| pos[a.run(q, w)]).collect();
        if seen.insert(action.clone()) {
            maps.push(action);
            words.push(u.concat(w));
        }
    }
    Ok((Automaton::from_letters(r_list.len(), &maps)?, words, r_list))
}

/// Resets `start` in an induced automaton: exact for small ones, greedy otherwise.
pub(crate) fn reset_induced(b: &Automaton, start: &StateSet) -> Result<(Word, bool)> {
    if b.n() <= EXACT_INDUCED_STATES {
        let opts = OracleOptions {
            max_states: EXACT_INDUCED_STATES,
            ..OracleOptions::default()
        };
        match shortest_compression_from(b, start, &opts) {
            Ok(Some(w)) => return Ok((w, true)),
            Ok(None) => return Err(Error::NotSynchronizing { pair: None }),
            Err(Error::CapExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((greedy_compression_from(b, start)?.0, false))
}

/// Small-rank pipeline: from a word `w` of rank `r`, resets `Q.w` inside
/// the induced automaton whose letters are `u w` for `u ∈ Σ^{≤d}`.
pub fn small_rank_pipeline(a: &Automaton, w: &Word) -> Result<SmallRankRun> {
    a.check_word(w)?;
    if let Some(pair) = a.incompressible_pair() {
        return Err(Error::NotSynchronizing { pair: Some(pair) });
    }
    let n = a.n();
    let r = a.rank_of_word(w)?;
    let sink = a.sink_component().ok_or(Error::NotSynchronizing { pair: None })?;
    let d_complete = sink_completeness_length(a, &sink)?;
    let target = a.apply_word(&StateSet::full(n), w)?.intersection(&sink);
    if target.is_empty() {
        return Err(Error::Precondition("Q.w misses the sink component".into()));
    }
    let d_reach = a
        .distances_to(&target)
        .into_iter()
        .map(|d| d.ok_or_else(|| Error::Internal("sink component unreachable".into())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let d = d_complete.max(d_reach).max(1);
    let pair_compression_bound = bounds::small_rank_pairs(w.len(), d, r);
    let (b, letters, _) = induced_by_word(a, w, d)?;
    let (zb, exact) = reset_induced(&b, &StateSet::full(b.n()))?;
    let mut word = w.clone();
    let mut steps = vec![w.clone()];
    for &l in zb.letters() {
        word.append(&letters[l]);
        steps.push(letters[l].clone());
    }
    let certificate = ResetCertificate::new(a, word, BoundKind::SmallRank, bounds::small_rank(w.len(), d, r), steps)?;
    Ok(SmallRankRun {
        certificate,
        r,
        d,
        d_complete,
        d_reach,
        pair_compression_bound,
        induced_letters: letters.len(),
        exact,
    })
}

/// The pipeline with one extra compression of `Q.w` before entering the
/// induced automaton: returns `w v w z` where `v` is a shortest word
/// compressing `Q.w` and `z` resets `Q.w.v.w` over letters `u w`, `u ∈ Σ^{≤d}`.
pub fn small_rank_pipeline_refined(a: &Automaton, w: &Word, d: usize) -> Result<(Word, Vec<Word>)> {
    a.check_word(w)?;
    let image = a.apply_word(&StateSet::full(a.n()), w)?;
    if image.len() <= 1 {
        return Ok((w.clone(), vec![w.clone()]));
    }
    let pg = PairGraph::new(a);
    let (_, p, q) = pg.closest_pair_in(&image).ok_or_else(|| {
        let v = image.to_vec();
        Error::NotSynchronizing {
            pair: Some((v[0], v[1])),
        }
    })?;
    let v = pg.merging_word(p, q).expect("distance is finite");
    let (b, letters, r_list) = induced_by_word(a, w, d)?;
    let entered = a.apply_word(&image, &v.concat(w))?;
    let mut pos = vec![usize::MAX; a.n()];
    for (i, &s) in r_list.iter().enumerate() {
        pos[s] = i;
    }
    let start = StateSet::from_states(b.n(), entered.iter().map(|s| pos[s]));
    let (zb, _) = reset_induced(&b, &start)?;
    let mut word = w.concat(&v).concat(w);
    let mut steps = vec![w.clone(), v, w.clone()];
    for &l in zb.letters() {
        word.append(&letters[l]);
        steps.push(letters[l].clone());
    }
    Ok((word, steps))
}
