use std::fmt;

use crate::automaton::{Automaton, Word};
use crate::error::{Error, Result};

/// Which guarantee a certificate's length bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    /// Greedy extension over a complete induced automaton.
    Extension,
    /// Repeated pair compression.
    Pairwise,
    /// Compression through the image of a word of small rank.
    SmallRank,
    /// Prefix-code decoders.
    Decoder,
    QuasiEulerian,
    QuasiOneCluster,
    /// One-state automata.
    Trivial,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Extension => "extension",
            BoundKind::Pairwise => "pairwise",
            BoundKind::SmallRank => "small-rank",
            BoundKind::Decoder => "decoder",
            BoundKind::QuasiEulerian => "quasi-eulerian",
            BoundKind::QuasiOneCluster => "quasi-one-cluster",
            BoundKind::Trivial => "trivial",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A reset word together with the length bound it was certified against.
///
/// Construction re-checks both that the word resets the automaton and that
/// it respects the bound, so a value of this type is always valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResetCertificate {
    fingerprint: String,
    word: Word,
    kind: BoundKind,
    bound: u128,
    steps: Vec<Word>,
}

impl ResetCertificate {
    pub fn new(a: &Automaton, word: Word, kind: BoundKind, bound: u128, steps: Vec<Word>) -> Result<Self> {
        if !a.is_reset_word(&word)? {
            return Err(Error::Internal(format!(
                "synthesized word `{word}` has rank {}",
                a.rank_of_word(&word)?
            )));
        }
        if word.len() as u128 > bound {
            return Err(Error::Internal(format!(
                "synthesized word of length {} exceeds the {kind} bound {bound}",
                word.len()
            )));
        }
        Ok(ResetCertificate {
            fingerprint: a.fingerprint(),
            word,
            kind,
            bound,
            steps,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn bound(&self) -> u128 {
        self.bound
    }

    /// The words chosen by the synthesis, in the order they were found.
    pub fn steps(&self) -> &[Word] {
        &self.steps
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Re-labels the bound, checking the word against the new value.
    pub fn recertify(self, a: &Automaton, kind: BoundKind, bound: u128) -> Result<Self> {
        ResetCertificate::new(a, self.word, kind, bound, self.steps)
    }

    /// Line-oriented `key=value` record.
    pub fn to_record(&self) -> String {
        let steps: Vec<String> = self.steps.iter().map(Word::to_machine).collect();
        format!(
            "automaton={}\nword={}\nlength={}\nbound={}\nbound_value={}\nsteps={}\n",
            self.fingerprint,
            self.word.to_machine(),
            self.word.len(),
            self.kind,
            self.bound,
            steps.join(",")
        )
    }
}

/// Length bounds, in saturating integer arithmetic.
pub mod bounds {
    fn u(x: usize) -> u128 {
        x as u128
    }

    /// Greedy extension: `|w0| + (DS−1)(d1+d2)` when `R ≠ Q`,
    /// `1 + (DS−2)(d1+d2)` when `R = Q` (then `w0` is not used).
    pub fn extension(w0: usize, ds: u128, d1: usize, d2: usize, full: bool) -> u128 {
        let step = u(d1 + d2);
        if full {
            1 + ds.saturating_sub(2).saturating_mul(step)
        } else {
            u(w0).saturating_add(ds.saturating_sub(1).saturating_mul(step))
        }
    }

    /// Word of rank `r` and length `w`, completeness length `d`.
    pub fn small_rank(w: usize, d: usize, r: usize) -> u128 {
        let (w, d, r) = (u(w), u(d), u(r));
        if r >= 4 {
            (w + d) * ((r * r * r - r) / 6) - d
        } else {
            w + (w + d) * (r.saturating_sub(1)).pow(2)
        }
    }

    pub fn small_rank_pairs(w: usize, d: usize, r: usize) -> u128 {
        let (w, d, r) = (u(w), u(d), u(r));
        w + (w + d) * ((r * r - r) / 2)
    }

    /// `n`-state decoders with `r = ⌈log_k n⌉`.
    pub fn decoder(r: usize, n: usize) -> u128 {
        let (r, n) = (u(r), u(n));
        let factor = if r >= 4 {
            (r * r * r - r) / 6 - 1
        } else {
            r.saturating_sub(1).pow(2)
        };
        2 + (r + n).saturating_sub(1) * factor
    }

    pub fn decoder_pairs(r: usize, n: usize) -> u128 {
        let (r, n) = (u(r), u(n));
        r + (r + n).saturating_sub(1) * ((r * r - r) / 2)
    }

    pub fn quasi_eulerian(c: usize, n: usize, d: usize) -> u128 {
        if c > 0 {
            (1u128 << c.min(100)).saturating_mul(u(n - c + 1)).saturating_mul(u(d))
        } else {
            1 + u(n.saturating_sub(2)) * u(d)
        }
    }

    pub fn quasi_one_cluster(c: usize, n: usize, r: usize) -> u128 {
        if c > 0 {
            (1u128 << c.min(100))
                .saturating_mul(u(2 * n - c))
                .saturating_mul(u(n - c + 1))
        } else {
            1 + u((2 * n).saturating_sub(r)) * u(n.saturating_sub(2))
        }
    }

    /// Compressing `m` states one pair at a time, each pair within distance `dist`.
    pub fn pairwise(m: usize, dist: usize) -> u128 {
        u(m.saturating_sub(1)) * u(dist)
    }
}
