use super::prefix::Decoder;
use crate::automaton::{words_of_length, Word};
use crate::error::{Error, Result};
use crate::synthesis::{bounds, small_rank_pipeline, small_rank_pipeline_refined, BoundKind, ResetCertificate};

/// `⌈log_k n⌉` for `n ≥ 1`, `k ≥ 2`.
pub fn ceil_log(k: usize, n: usize) -> usize {
    let mut r = 0;
    let mut p = 1usize;
    while p < n {
        p = p.saturating_mul(k);
        r += 1;
    }
    r
}

/// Whether every state reaches the root on some nonempty prefix of `w`.
fn hits_root_everywhere(d: &Decoder, w: &Word) -> bool {
    let a = d.automaton();
    (0..a.n()).all(|q| {
        let mut x = q;
        w.letters().iter().any(|&l| {
            x = a.step(x, l);
            x == d.root()
        })
    })
}

/// The first word, by length and then lexicographically, of length at most
/// `⌈log_k n⌉` that sends every state through the root. Such a word has
/// rank at most its length.
pub fn small_rank_word(d: &Decoder) -> Result<Word> {
    if d.n() == 1 {
        return Ok(Word::empty());
    }
    let r = ceil_log(d.k(), d.n());
    (1..=r)
        .flat_map(|len| words_of_length(d.k(), len))
        .find(|w| hits_root_everywhere(d, w))
        .ok_or_else(|| {
            Error::Internal(format!(
                "no word of length at most {r} passes every state through the root"
            ))
        })
}

#[derive(Debug, Clone)]
pub struct DecoderRun {
    pub certificate: ResetCertificate,
    /// `⌈log_k n⌉`.
    pub r: usize,
    /// The small-rank word the synthesis starts from.
    pub w: Word,
    /// `|Q.w|`.
    pub rank: usize,
    /// Completeness length used by the induced automaton.
    pub d: usize,
    /// Lengths of the plain pipeline word and of the word with the extra
    /// compression of `Q.w`.
    pub pipeline_len: usize,
    pub refined_len: usize,
    /// Bound for compressing a single pair of states.
    pub pair_bound: u128,
}

/// Reset word for a synchronizing decoder, certified against
/// `2 + (r+n−1)((r³−r)/6 − 1)` for `r ≥ 4` and `2 + (r+n−1)(r−1)²` otherwise,
/// with `r = ⌈log_k n⌉`. The shorter of the plain small-rank pipeline word
/// and the word that first compresses `Q.w` by a shortest word is kept.
pub fn decoder_reset(d: &Decoder) -> Result<DecoderRun> {
    let a = d.automaton();
    let n = d.n();
    let r = ceil_log(d.k(), n);
    let pair_bound = bounds::decoder_pairs(r, n);
    if n == 1 {
        let certificate = ResetCertificate::new(a, Word::empty(), BoundKind::Trivial, 0, Vec::new())?;
        return Ok(DecoderRun {
            certificate,
            r,
            w: Word::empty(),
            rank: 1,
            d: 0,
            pipeline_len: 0,
            refined_len: 0,
            pair_bound,
        });
    }
    if let Some(pair) = a.incompressible_pair() {
        return Err(Error::NotSynchronizing { pair: Some(pair) });
    }
    let w = small_rank_word(d)?;
    let run = small_rank_pipeline(a, &w)?;
    let (refined, refined_steps) = small_rank_pipeline_refined(a, &w, run.d)?;
    let pipeline_len = run.certificate.len();
    let refined_len = refined.len();
    let (word, steps) = if refined_len < pipeline_len {
        (refined, refined_steps)
    } else {
        (run.certificate.word().clone(), run.certificate.steps().to_vec())
    };
    let certificate = ResetCertificate::new(a, word, BoundKind::Decoder, bounds::decoder(r, n), steps)?;
    Ok(DecoderRun {
        certificate,
        r,
        w,
        rank: run.r,
        d: run.d,
        pipeline_len,
        refined_len,
        pair_bound,
    })
}
