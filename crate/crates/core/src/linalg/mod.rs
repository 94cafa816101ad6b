//! Exact rational vectors and matrices.
//!
//! Everything on the certificate path is exact: span membership, ranks and
//! determinants are decided over the rationals, never with tolerances.

mod elim;
mod markov;

pub use elim::{bareiss_det, bareiss_rank, in_span, row_space_basis, solve, span_rank, to_integer_row, SpanBasis};
pub use markov::{
    ds_count, is_primitive, markov_matrix, pattern_is_primitive, stationary_distribution, word_matrix, Stationary,
    DS_CAP,
};

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::automaton::StateSet;
use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form.
pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Parses `p/q` or `p`. Rejects zero denominators and anything else.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = |m: &str| Error::parse(1, format!("invalid rational `{s}`: {m}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !den.bytes().all(|b| b.is_ascii_digit()) || den.is_empty() {
        return Err(bad("expected p/q with decimal integers"));
    }
    let p: BigInt = num.parse().map_err(|_| bad("numerator"))?;
    let q: BigInt = den.parse().map_err(|_| bad("denominator"))?;
    if q.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(p, q))
}

/// A row vector of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Rat::zero(); n])
    }

    /// The characteristic vector `[S]`.
    pub fn characteristic(s: &StateSet) -> Self {
        let mut v = Self::zeros(s.universe());
        for q in s.iter() {
            v.0[q] = Rat::one();
        }
        v
    }

    pub fn unit(n: usize, q: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[q] = Rat::one();
        v
    }

    pub fn uniform(n: usize) -> Self {
        RatVec(vec![rat(1, n as i64); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn sum(&self) -> Rat {
        self.0.iter().fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        assert_eq!(self.len(), other.len(), "dot of vectors with different lengths");
        self.0.iter().zip(&other.0).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
    }

    pub fn scale(&self, c: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn is_stochastic(&self) -> bool {
        self.is_nonnegative() && self.sum().is_one()
    }

    /// `v · M`
    pub fn mul_mat(&self, m: &RatMat) -> RatVec {
        assert_eq!(self.len(), m.rows());
        let mut out = RatVec::zeros(m.cols());
        for (i, x) in self.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..m.cols() {
                let e = &m[(i, j)];
                if !e.is_zero() {
                    out.0[j] += x * e;
                }
            }
        }
        out
    }

    /// `v · [w]` for a word acting by the map `q ↦ image[q]`: mass at `q`
    /// moves to `image[q]`.
    pub fn push_forward(&self, image: &[usize]) -> RatVec {
        let mut out = RatVec::zeros(self.len());
        for (q, x) in self.0.iter().enumerate() {
            if !x.is_zero() {
                out.0[image[q]] += x;
            }
        }
        out
    }

    /// Support of the vector as a state set.
    pub fn support(&self) -> StateSet {
        StateSet::from_states(
            self.len(),
            self.0.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i),
        )
    }
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rat).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if let Some(bad) = rows.iter().find(|x| x.len() != c) {
            return Err(Error::LengthMismatch {
                expected: c,
                got: bad.len(),
            });
        }
        Ok(RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Self {
        RatMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()).unwrap()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> RatVec {
        RatVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let x = &self[(i, l)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let y = &other[(l, j)];
                    if !y.is_zero() {
                        out[(i, j)] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Square submatrix on the given row/column indices.
    pub fn restrict(&self, idx: &[usize]) -> RatMat {
        let mut m = RatMat::zeros(idx.len(), idx.len());
        for (i, &r) in idx.iter().enumerate() {
            for (j, &c) in idx.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_row_stochastic(&self) -> bool {
        self.is_nonnegative() && (0..self.rows).all(|i| self.row(i).sum().is_one())
    }

    /// Nonzero pattern as boolean rows.
    pub fn pattern(&self) -> Vec<Vec<bool>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| !self[(i, j)].is_zero()).collect())
            .collect()
    }

    /// Row-major flattening, used to treat matrices as vectors.
    pub fn flatten(&self) -> RatVec {
        RatVec(self.data.clone())
    }
}

impl Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let parts: Vec<String> = (0..self.cols).map(|j| format_rat(&self[(i, j)])).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A strictly positive probability distribution on the letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterDistribution(Vec<Rat>);

impl LetterDistribution {
    pub fn new(probs: Vec<Rat>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_positive()) {
            return Err(Error::InvalidDistribution(format!("probability {p} is not positive")));
        }
        let total = probs.iter().fold(Rat::zero(), |a, x| a + x);
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(LetterDistribution(probs))
    }

    pub fn uniform(k: usize) -> Self {
        LetterDistribution(vec![rat(1, k as i64); k])
    }

    pub fn probs(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_form() {
        assert_eq!(format_rat(&rat(6, 4)), "3/2");
        assert_eq!(format_rat(&rat(4, 2)), "2");
        assert_eq!(format_rat(&rat(-1, 3)), "-1/3");
        assert_eq!(parse_rat("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        for bad in ["1/0", "", "/", "1/", "a/b", "1/-2", "+1", "1.5", "1//2"] {
            assert!(parse_rat(bad).is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn letter_distribution_validation() {
        assert!(LetterDistribution::new(vec![rat(7, 10), rat(3, 10)]).is_ok());
        assert!(LetterDistribution::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(LetterDistribution::new(vec![rat(1, 1), rat(0, 1)]).is_err());
        assert!(LetterDistribution::new(vec![]).is_err());
    }

    #[test]
    fn vector_helpers() {
        let v = RatVec(vec![rat(1, 2), rat(1, 4), rat(1, 4)]);
        assert!(v.is_stochastic());
        assert_eq!(
            v.push_forward(&[2, 2, 0]),
            RatVec(vec![rat(1, 4), rat(0, 1), rat(3, 4)])
        );
        assert_eq!(v.support().len(), 3);
    }
}
