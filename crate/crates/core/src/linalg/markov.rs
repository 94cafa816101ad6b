//! Word matrices, Markov chains of automata, and their stationary vectors.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{solve, LetterDistribution, Rat, RatMat, RatVec};
use crate::automaton::{Automaton, Word};
use crate::error::{Error, Result};

/// Distinct-sum enumeration gives up past this many sums.
pub const DS_CAP: usize = 1 << 20;

/// The 0/1 matrix `[w]` with a one at `(q, q.w)`.
pub fn word_matrix(a: &Automaton, w: &Word) -> Result<RatMat> {
    let map = a.word_map(w)?;
    let mut m = RatMat::zeros(a.n(), a.n());
    for (q, &t) in map.iter().enumerate() {
        m[(q, t)] = Rat::one();
    }
    Ok(m)
}

/// `S(A, P) = Σ P(a) [a]`.
pub fn markov_matrix(a: &Automaton, p: &LetterDistribution) -> Result<RatMat> {
    if p.len() != a.k() {
        return Err(Error::LengthMismatch {
            expected: a.k(),
            got: p.len(),
        });
    }
    let mut m = RatMat::zeros(a.n(), a.n());
    for (letter, prob) in p.probs().iter().enumerate() {
        for q in 0..a.n() {
            m[(q, a.step(q, letter))] += prob;
        }
    }
    Ok(m)
}

/// A stationary vector together with whether it is the only one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stationary {
    pub alpha: RatVec,
    pub unique: bool,
}

/// Closed classes (sink SCCs) of the nonzero pattern, each sorted, ordered by smallest member.
fn closed_classes(pattern: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = pattern.len();
    let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (i, row) in pattern.iter().enumerate() {
        for (j, &nz) in row.iter().enumerate() {
            if nz {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut comp = vec![0; n];
    let sccs = tarjan_scc(&g);
    for (c, scc) in sccs.iter().enumerate() {
        for v in scc {
            comp[v.index()] = c;
        }
    }
    let mut closed: Vec<Vec<usize>> = sccs
        .iter()
        .enumerate()
        .filter(|(c, scc)| {
            scc.iter()
                .all(|v| (0..n).all(|j| !pattern[v.index()][j] || comp[j] == *c))
        })
        .map(|(_, scc)| {
            let mut s: Vec<usize> = scc.iter().map(|v| v.index()).collect();
            s.sort_unstable();
            s
        })
        .collect();
    closed.sort();
    closed
}

/// Solves `x (M − I) = 0`, `Σx = 1` on a matrix with a single closed class by
/// replacing the first equation with the all-ones row.
fn solve_single_class(m: &RatMat) -> Result<RatVec> {
    let n = m.rows();
    let mut sys = m.add(&RatMat::identity(n).scale(&-Rat::one())).transpose();
    for j in 0..n {
        sys[(0, j)] = Rat::one();
    }
    let rhs = RatVec::unit(n, 0);
    match solve(&sys, &rhs)? {
        Some((x, rank)) if rank == n => Ok(x),
        _ => Err(Error::Internal(
            "stationary system is singular on a single closed class".into(),
        )),
    }
}

/// A stochastic `α` with `α M = α`.
///
/// When the chain has one closed class the solution is unique. Otherwise the
/// returned vector is supported on the closed class with the smallest state
/// and `unique` is false.
pub fn stationary_distribution(m: &RatMat) -> Result<Stationary> {
    if m.rows() != m.cols() {
        return Err(Error::LengthMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    if m.rows() == 0 || !m.is_row_stochastic() {
        return Err(Error::InvalidDistribution("matrix is not row-stochastic".into()));
    }
    let classes = closed_classes(&m.pattern());
    let unique = classes.len() == 1;
    let alpha = if unique {
        solve_single_class(m)?
    } else {
        let class = &classes[0];
        let sub = solve_single_class(&m.restrict(class))?;
        let mut alpha = RatVec::zeros(m.rows());
        for (i, &q) in class.iter().enumerate() {
            alpha.0[q] = sub[i].clone();
        }
        alpha
    };
    if !alpha.is_stochastic() || alpha.mul_mat(m) != alpha {
        return Err(Error::Internal("stationary vector failed verification".into()));
    }
    Ok(Stationary { alpha, unique })
}

fn bool_mul(a: &[FixedBitSet], b: &[FixedBitSet]) -> Vec<FixedBitSet> {
    a.iter()
        .map(|row| {
            let mut out = FixedBitSet::with_capacity(b.len());
            for j in row.ones() {
                out.union_with(&b[j]);
            }
            out
        })
        .collect()
}

/// Whether a boolean square pattern is primitive, via its `((r−1)²+1)`-th power.
pub fn pattern_is_primitive(pattern: &[Vec<bool>]) -> bool {
    let r = pattern.len();
    if r == 0 {
        return false;
    }
    let base: Vec<FixedBitSet> = pattern
        .iter()
        .map(|row| {
            let mut s = FixedBitSet::with_capacity(r);
            for (j, &b) in row.iter().enumerate() {
                s.set(j, b);
            }
            s
        })
        .collect();
    let mut e = (r - 1) * (r - 1) + 1;
    let mut acc: Option<Vec<FixedBitSet>> = None;
    let mut sq = base;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => sq.clone(),
                Some(x) => bool_mul(&x, &sq),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        sq = bool_mul(&sq, &sq);
    }
    acc.expect("exponent is positive")
        .iter()
        .all(|row| row.count_ones(..) == r)
}

/// Primitivity of `m` restricted to the rows and columns in `idx`.
pub fn is_primitive(m: &RatMat, idx: &[usize]) -> Result<bool> {
    if !m.is_nonnegative() {
        return Err(Error::Precondition("primitivity needs a non-negative matrix".into()));
    }
    let p = m.pattern();
    let sub: Vec<Vec<bool>> = idx.iter().map(|&i| idx.iter().map(|&j| p[i][j]).collect()).collect();
    Ok(pattern_is_primitive(&sub))
}

/// `DS(g)`: the number of distinct positive subset sums of the entries of `g`.
pub fn ds_count(g: &RatVec) -> Result<u128> {
    if !g.is_nonnegative() {
        return Err(Error::Precondition("distinct sums need a non-negative vector".into()));
    }
    let lcm = g.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut sums: HashSet<BigInt> = HashSet::from([BigInt::zero()]);
    for x in g.iter().filter(|x| x.is_positive()) {
        let v = x.numer() * (&lcm / x.denom());
        let shifted: Vec<BigInt> = sums.iter().map(|s| s + &v).collect();
        sums.extend(shifted);
        if sums.len() > DS_CAP {
            let bound = 1u128.checked_shl(g.len() as u32).map_or(u128::MAX, |b| b - 1);
            return Err(Error::DsCapExceeded { bound });
        }
    }
    Ok((sums.len() - 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_int};

    fn c4() -> Automaton {
        Automaton::from_letters(4, &[vec![1, 2, 3, 0], vec![0, 1, 2, 0]]).unwrap()
    }

    #[test]
    fn c4_word_matrices() {
        let a = c4();
        let ma = RatMat::from_integers(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]]);
        let mb = RatMat::from_integers(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 0, 0]]);
        let mba = RatMat::from_integers(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 1, 0, 0]]);
        assert_eq!(word_matrix(&a, &Word::letter(0)).unwrap(), ma);
        assert_eq!(word_matrix(&a, &Word::letter(1)).unwrap(), mb);
        assert_eq!(word_matrix(&a, &Word::from_letters([1, 0])).unwrap(), mba);
        assert_eq!(mb.mul(&ma), mba);
        assert_eq!(word_matrix(&a, &Word::empty()).unwrap(), RatMat::identity(4));
    }

    #[test]
    fn markov_matrix_of_c4() {
        let a = c4();
        let p = LetterDistribution::new(vec![rat(7, 10), rat(3, 10)]).unwrap();
        let m = markov_matrix(&a, &p).unwrap();
        assert_eq!(m[(0, 1)], rat(7, 10));
        assert_eq!(m[(0, 0)], rat(3, 10));
        assert_eq!(m[(3, 0)], rat_int(1));
        assert!(m.is_row_stochastic());
    }

    #[test]
    fn stationary_of_c4_is_fixed() {
        let a = c4();
        let m = markov_matrix(&a, &LetterDistribution::uniform(2)).unwrap();
        let st = stationary_distribution(&m).unwrap();
        assert!(st.unique);
        assert_eq!(st.alpha.mul_mat(&m), st.alpha);
        assert_eq!(st.alpha.sum(), rat_int(1));
        assert!(st.alpha.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn stationary_with_two_closed_classes() {
        let m = RatMat::from_integers(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let st = stationary_distribution(&m).unwrap();
        assert!(!st.unique);
        assert_eq!(st.alpha, RatVec(vec![rat(1, 2), rat(1, 2), rat_int(0)]));
        assert!(stationary_distribution(&RatMat::from_integers(&[&[1, 1], &[0, 1]])).is_err());
    }

    #[test]
    fn primitivity() {
        let a = c4();
        let m = markov_matrix(&a, &LetterDistribution::uniform(2)).unwrap();
        assert!(is_primitive(&m, &[0, 1, 2, 3]).unwrap());
        let perm = RatMat::from_integers(&[&[0, 1], &[1, 0]]);
        assert!(!is_primitive(&perm, &[0, 1]).unwrap());
        assert!(is_primitive(&RatMat::from_integers(&[&[1]]), &[0]).unwrap());
    }

    #[test]
    fn distinct_sums() {
        assert_eq!(ds_count(&RatVec::uniform(5)).unwrap(), 5);
        assert_eq!(ds_count(&RatVec(vec![rat(1, 2), rat(1, 4), rat(1, 4)])).unwrap(), 4);
        assert_eq!(ds_count(&RatVec(vec![rat_int(0), rat_int(1)])).unwrap(), 1);
        assert!(ds_count(&RatVec(vec![rat_int(-1)])).is_err());
    }

    #[test]
    fn distinct_sums_cap() {
        // powers of two give 2^n distinct sums
        let g = RatVec((0..22).map(|i| Rat::from_integer(BigInt::one() << i)).collect());
        assert_eq!(ds_count(&g), Err(Error::DsCapExceeded { bound: (1 << 22) - 1 }));
    }
}
