//! Fraction-free elimination over the integers.
//!
//! Rational rows are first scaled to primitive integer rows (which preserves
//! spans and solution sets), then eliminated with Bareiss-style updates.
//! Pivots are the first nonzero entry by lowest row index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rat, RatMat, RatVec};
use crate::error::{Error, Result};

/// Scales a rational row to a primitive integer row (gcd of entries 1,
/// first nonzero entry positive). The zero row maps to the zero row.
pub fn to_integer_row(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut row: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let neg = row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if neg { -g } else { g };
    if !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// An incrementally built echelon basis of a subspace of `Q^dim`.
///
/// Each stored row has zeros at the pivots of all rows stored before it,
/// so sequential reduction in insertion order fully reduces a vector.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    dim: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        SpanBasis { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (p, b) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let g = v[*p].gcd(&b[*p]);
            let mv = &b[*p] / &g;
            let mb = &v[*p] / &g;
            for (x, y) in v.iter_mut().zip(b) {
                let scaled = &*x * &mv;
                *x = if y.is_zero() { scaled } else { scaled - &mb * y };
            }
            make_primitive(&mut v);
        }
        v
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    /// Adds `v` if it is independent of the current basis; returns whether it was added.
    pub fn insert_int(&mut self, v: Vec<BigInt>) -> Result<bool> {
        self.check_len(v.len())?;
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    pub fn insert(&mut self, v: &RatVec) -> Result<bool> {
        self.insert_int(to_integer_row(&v.0))
    }

    pub fn contains_int(&self, v: Vec<BigInt>) -> Result<bool> {
        self.check_len(v.len())?;
        Ok(self.reduce(v).iter().all(|x| x.is_zero()))
    }

    pub fn contains(&self, v: &RatVec) -> Result<bool> {
        self.contains_int(to_integer_row(&v.0))
    }

    /// The stored basis rows (primitive integer vectors).
    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }
}

/// Forward Bareiss elimination in place. Returns `(pivot rows, pivot columns, swap parity)`.
/// Only columns `< pivot_cols_limit` are eligible as pivots.
fn bareiss_forward(m: &mut [Vec<BigInt>], pivot_cols_limit: usize) -> (usize, Vec<usize>, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut odd = false;
    for c in 0..pivot_cols_limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            odd = !odd;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (r, pivots, odd)
}

/// Rank of a set of integer rows by fraction-free elimination.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    bareiss_forward(&mut m, cols).0
}

/// A basis of the row space: the nonzero rows after elimination, made primitive.
pub fn row_space_basis(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let rank = bareiss_forward(&mut m, cols).0;
    m.truncate(rank);
    for row in m.iter_mut() {
        make_primitive(row);
    }
    m
}

/// Determinant of a square rational matrix.
pub fn bareiss_det(a: &RatMat) -> Result<Rat> {
    if a.rows() != a.cols() {
        return Err(Error::LengthMismatch {
            expected: a.rows(),
            got: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Rat::one());
    }
    // det(A) = det(scaled) / Π scale_i
    let mut scale = Rat::one();
    let mut m = Vec::with_capacity(n);
    for i in 0..n {
        let row = a.row(i).0;
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        scale *= Rat::from_integer(lcm.clone());
        m.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect::<Vec<_>>());
    }
    let (rank, _, odd) = bareiss_forward(&mut m, n);
    if rank < n {
        return Ok(Rat::zero());
    }
    let det = Rat::from_integer(m[n - 1][n - 1].clone()) / scale;
    Ok(if odd { -det } else { det })
}

fn check_lengths(vs: &[RatVec]) -> Result<usize> {
    let n = vs.first().map_or(0, |v| v.len());
    if let Some(v) = vs.iter().find(|v| v.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: v.len(),
        });
    }
    Ok(n)
}

/// Dimension of the span of `vs`.
pub fn span_rank(vs: &[RatVec]) -> Result<usize> {
    check_lengths(vs)?;
    let rows: Vec<Vec<BigInt>> = vs.iter().map(|v| to_integer_row(&v.0)).collect();
    Ok(bareiss_rank(&rows))
}

/// Whether `v` lies in the span of `vs`.
pub fn in_span(v: &RatVec, vs: &[RatVec]) -> Result<bool> {
    if let Some(first) = vs.first() {
        if first.len() != v.len() {
            return Err(Error::LengthMismatch {
                expected: first.len(),
                got: v.len(),
            });
        }
    } else {
        return Ok(v.iter().all(|x| x.is_zero()));
    }
    let base = span_rank(vs)?;
    let mut all = vs.to_vec();
    all.push(v.clone());
    Ok(span_rank(&all)? == base)
}

/// Solves `A x = b`. Returns one solution (free variables set to zero) and
/// the rank of `A`, or `None` if the system is inconsistent.
pub fn solve(a: &RatMat, b: &RatVec) -> Result<Option<(RatVec, usize)>> {
    if a.rows() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let n = a.cols();
    let mut m: Vec<Vec<BigInt>> = (0..a.rows())
        .map(|i| {
            let mut row = a.row(i).0;
            row.push(b[i].clone());
            to_integer_row(&row)
        })
        .collect();
    let (rank, pivots, _) = bareiss_forward(&mut m, n);
    if m[rank..].iter().any(|row| !row[n].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &c) in pivots.iter().enumerate().rev() {
        let mut acc = Rat::from_integer(m[i][n].clone());
        for j in c + 1..n {
            if !m[i][j].is_zero() && !x[j].is_zero() {
                acc -= Rat::from_integer(m[i][j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rat::from_integer(m[i][c].clone());
    }
    Ok(Some((RatVec(x), rank)))
}
