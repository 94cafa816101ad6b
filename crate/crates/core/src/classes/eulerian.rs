use num_traits::{One, Signed, Zero};

use crate::automaton::{Automaton, StateSet, Word};
use crate::error::{Error, Result};
use crate::induced::WordSet;
use crate::linalg::{markov_matrix, stationary_distribution, LetterDistribution, Rat, RatVec};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::synthesis::{bounds, greedy_extension, reduce_alpha, BoundKind, ResetCertificate};

use super::route_to_sink;

/// Largest number of candidate sets `E_c` examined.
pub const EULERIAN_CANDIDATE_BUDGET: u128 = 100_000;

/// A letter distribution whose stationary vector is constant on `n − c` states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiEulerianWitness {
    pub c: usize,
    pub e_set: StateSet,
    /// The state of `E_c` whose column is left free; the one with in-edges
    /// from outside `E_c` when there is such a state.
    pub s: usize,
    pub p: LetterDistribution,
    pub alpha: RatVec,
    /// Smallest letter probability found by the program, positive.
    pub t: Rat,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Maximizes the smallest letter probability subject to the columns of
/// `[P]` at `cols` summing to one.
fn column_program(a: &Automaton, cols: &[usize]) -> Option<(Vec<Rat>, Rat)> {
    let k = a.k();
    let mut obj = vec![Rat::zero(); k + 1];
    obj[k] = Rat::one();
    let mut lp = LinearProgram::maximize(obj);
    let mut total = vec![Rat::one(); k + 1];
    total[k] = Rat::zero();
    lp.constrain(total, Relation::Eq, Rat::one());
    for &j in cols {
        let mut row: Vec<Rat> = (0..k)
            .map(|l| Rat::from_integer(((0..a.n()).filter(|&q| a.step(q, l) == j).count() as i64).into()))
            .collect();
        row.push(Rat::zero());
        lp.constrain(row, Relation::Eq, Rat::one());
    }
    for l in 0..k {
        let mut row = vec![Rat::zero(); k + 1];
        row[l] = Rat::one();
        row[k] = -Rat::one();
        lp.constrain(row, Relation::Ge, Rat::zero());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => Some((x[..k].to_vec(), value)),
        _ => None,
    }
}

/// Searches the `(n−c)`-subsets in lexicographic order for a positive
/// letter distribution whose stationary vector is constant on the subset.
///
/// The column condition (columns of `[P]` at `E_c \ {s}` summing to one)
/// is linear in `P` and solved exactly; the stationary vector is then
/// computed and its equal entries on `E_c` checked.
pub fn detect_quasi_eulerian(a: &Automaton, c: usize) -> Result<Option<QuasiEulerianWitness>> {
    let n = a.n();
    if c >= n {
        return Err(Error::Precondition(format!(
            "c = {c} leaves no states in E_c for n = {n}"
        )));
    }
    let size = n - c;
    let count = binomial(n, size);
    if count > EULERIAN_CANDIDATE_BUDGET {
        return Err(Error::Budget(format!(
            "{count} candidate sets exceed {EULERIAN_CANDIDATE_BUDGET}"
        )));
    }
    let mut comb: Vec<usize> = (0..size).collect();
    loop {
        let e_set = StateSet::from_states(n, comb.iter().copied());
        let entered: Vec<usize> = comb
            .iter()
            .copied()
            .filter(|&j| (0..n).any(|q| !e_set.contains(q) && (0..a.k()).any(|l| a.step(q, l) == j)))
            .collect();
        if entered.len() <= 1 {
            let candidates = if entered.is_empty() { comb.clone() } else { entered };
            for s in candidates {
                let cols: Vec<usize> = comb.iter().copied().filter(|&j| j != s).collect();
                let Some((probs, t)) = column_program(a, &cols) else {
                    continue;
                };
                let p = LetterDistribution::new(probs)?;
                let alpha = stationary_distribution(&markov_matrix(a, &p)?)?.alpha;
                let first = &alpha[comb[0]];
                if comb.iter().all(|&q| &alpha[q] == first) {
                    return Ok(Some(QuasiEulerianWitness {
                        c,
                        e_set,
                        s,
                        p,
                        alpha,
                        t,
                    }));
                }
            }
        }
        if !next_combination(&mut comb, n) {
            return Ok(None);
        }
    }
}

#[derive(Debug, Clone)]
pub struct EulerianRun {
    pub certificate: ResetCertificate,
    pub witness: QuasiEulerianWitness,
    /// Length of the longest word needed for completeness.
    pub d: usize,
    /// Size of the expanded word set.
    pub expanded: usize,
    pub ds: u128,
    /// Set when the input was reduced to its sink component first.
    pub prefix: Option<Word>,
}

/// `{b u : u a proper suffix of a word of U, b ∈ Σ}`, shortlex-sorted.
pub fn suffix_expansion(k: usize, u: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = u
        .iter()
        .flat_map(|w| w.proper_suffixes())
        .flat_map(|s| (0..k).map(move |b| Word::letter(b).concat(&s)))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn eulerian_strongly_connected(a: &Automaton, witness: QuasiEulerianWitness) -> Result<EulerianRun> {
    let n = a.n();
    let alpha = &witness.alpha;
    let reduced = reduce_alpha(a, n - 1, alpha)?;
    if reduced.rank < n {
        return Err(Error::CriterionViolated(format!(
            "words up to length {} span only {} of {n} dimensions",
            n - 1,
            reduced.rank
        )));
    }
    let d = reduced.max_len;
    let w = WordSet::new(suffix_expansion(a.k(), &reduced.words))?;
    let run = greedy_extension(a, &WordSet::singleton(Word::empty()), &w, alpha, &Word::empty())?;
    let certificate =
        run.certificate
            .recertify(a, BoundKind::QuasiEulerian, bounds::quasi_eulerian(witness.c, n, d))?;
    Ok(EulerianRun {
        certificate,
        witness,
        d,
        expanded: w.len(),
        ds: run.ds,
        prefix: None,
    })
}

/// Reset word for an automaton that is quasi-Eulerian with respect to `c`.
///
/// Inputs that are not strongly connected are first mapped into the sink
/// component, which must itself be quasi-Eulerian for `c`; the bound is then
/// the prefix length plus the bound for the sink.
pub fn quasi_eulerian_reset(a: &Automaton, c: usize) -> Result<EulerianRun> {
    let n = a.n();
    if n == 1 {
        let certificate = ResetCertificate::new(a, Word::empty(), BoundKind::Trivial, 0, Vec::new())?;
        let p = LetterDistribution::uniform(a.k());
        let witness = QuasiEulerianWitness {
            c: 0,
            e_set: StateSet::full(1),
            s: 0,
            p,
            alpha: RatVec::uniform(1),
            t: Rat::one() / Rat::from_integer((a.k() as i64).into()),
        };
        return Ok(EulerianRun {
            certificate,
            witness,
            d: 0,
            expanded: 0,
            ds: 1,
            prefix: None,
        });
    }
    if let Some(pair) = a.incompressible_pair() {
        return Err(Error::NotSynchronizing { pair: Some(pair) });
    }
    let witness = detect_quasi_eulerian(a, c)?
        .ok_or_else(|| Error::ClassMismatch(format!("no quasi-Eulerian structure with c = {c}")))?;
    let Some(route) = route_to_sink(a)? else {
        return eulerian_strongly_connected(a, witness);
    };
    let inner = quasi_eulerian_reset(&route.sub, c.min(route.sub.n() - 1))?;
    let word = route.v.concat(inner.certificate.word());
    let bound = route.v.len() as u128 + inner.certificate.bound();
    let mut steps = vec![route.v.clone()];
    steps.extend(inner.certificate.steps().iter().cloned());
    let certificate = ResetCertificate::new(a, word, BoundKind::QuasiEulerian, bound, steps)?;
    Ok(EulerianRun {
        certificate,
        prefix: Some(route.v),
        ..inner
    })
}
