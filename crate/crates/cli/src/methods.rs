use std::fmt;
use std::str::FromStr;

use synchro::classes::{letter_clusters, quasi_eulerian_reset, quasi_one_cluster_reset};
use synchro::codes::{decoder_reset, Decoder};
use synchro::induced::{build_induced, WordSet};
use synchro::synthesis::{greedy_compression, greedy_extension, reduce_general, small_rank_pipeline, ResetCertificate};
use synchro::{Automaton, Error, Result, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    GreedyExtension,
    GreedyCompression,
    SmallRank,
    Decoder,
    QuasiEulerian(usize),
    QuasiOneCluster(usize),
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let with_c = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| format!("bad class parameter in `{s}`"))
        };
        match s {
            "auto" => Ok(Method::Auto),
            "greedy-ext" => Ok(Method::GreedyExtension),
            "greedy-comp" => Ok(Method::GreedyCompression),
            "small-rank" => Ok(Method::SmallRank),
            "decoder" => Ok(Method::Decoder),
            _ => {
                if let Some(rest) = s.strip_prefix("quasi-eulerian:") {
                    Ok(Method::QuasiEulerian(with_c(rest)?))
                } else if let Some(rest) = s.strip_prefix("quasi-one-cluster:") {
                    Ok(Method::QuasiOneCluster(with_c(rest)?))
                } else {
                    Err(format!(
                        "unknown method `{s}` (auto, greedy-ext, greedy-comp, small-rank, decoder, \
                         quasi-eulerian:C, quasi-one-cluster:C)"
                    ))
                }
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Auto => f.write_str("auto"),
            Method::GreedyExtension => f.write_str("greedy-ext"),
            Method::GreedyCompression => f.write_str("greedy-comp"),
            Method::SmallRank => f.write_str("small-rank"),
            Method::Decoder => f.write_str("decoder"),
            Method::QuasiEulerian(c) => write!(f, "quasi-eulerian:{c}"),
            Method::QuasiOneCluster(c) => write!(f, "quasi-one-cluster:{c}"),
        }
    }
}

/// A certificate plus the method-specific quantities behind its bound.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub method: Method,
    pub certificate: ResetCertificate,
    pub details: Vec<(String, String)>,
}

fn detail(key: &str, value: impl fmt::Display) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn extension(a: &Automaton) -> Result<Synthesis> {
    if !a.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let n = a.n();
    let w1 = WordSet::singleton(Word::empty());
    let w2 = reduce_general(a, n - 1)?.word_set();
    let (alpha, unique) = build_induced(a, &w1, &w2)?.stationary()?;
    let run = greedy_extension(a, &w1, &w2, &alpha, &Word::empty())?;
    Ok(Synthesis {
        method: Method::GreedyExtension,
        certificate: run.certificate,
        details: vec![
            detail("words", w2.len()),
            detail("d", w2.max_len()),
            detail("ds", run.ds),
            detail("ds_exact", run.ds_exact),
            detail("steps", run.steps),
            detail("stationary_unique", unique),
        ],
    })
}

pub fn run_method(a: &Automaton, method: Method) -> Result<Synthesis> {
    if let Some(pair) = a.incompressible_pair() {
        return Err(Error::NotSynchronizing { pair: Some(pair) });
    }
    match method {
        Method::Auto => auto(a),
        Method::GreedyExtension => extension(a),
        Method::GreedyCompression => Ok(Synthesis {
            method,
            certificate: greedy_compression(a)?,
            details: Vec::new(),
        }),
        Method::SmallRank => {
            let (rank, letter) = a.min_letter_rank();
            let run = small_rank_pipeline(a, &Word::letter(letter))?;
            Ok(Synthesis {
                method,
                certificate: run.certificate,
                details: vec![
                    detail("letter", letter),
                    detail("r", rank),
                    detail("d", run.d),
                    detail("pair_bound", run.pair_compression_bound),
                    detail("exact_induced", run.exact),
                ],
            })
        }
        Method::Decoder => {
            let d =
                Decoder::from_automaton(a).ok_or_else(|| Error::ClassMismatch("not a prefix-code decoder".into()))?;
            let run = decoder_reset(&d)?;
            Ok(Synthesis {
                method,
                certificate: run.certificate,
                details: vec![
                    detail("r", run.r),
                    detail("w", run.w.to_machine()),
                    detail("rank", run.rank),
                    detail("d", run.d),
                    detail("pipeline_length", run.pipeline_len),
                    detail("refined_length", run.refined_len),
                    detail("pair_bound", run.pair_bound),
                ],
            })
        }
        Method::QuasiEulerian(c) => {
            let run = quasi_eulerian_reset(a, c)?;
            Ok(Synthesis {
                method,
                certificate: run.certificate,
                details: vec![
                    detail("c", run.witness.c),
                    detail("e_set", &run.witness.e_set),
                    detail("d", run.d),
                    detail("ds", run.ds),
                ],
            })
        }
        Method::QuasiOneCluster(c) => {
            let run = quasi_one_cluster_reset(a, c)?;
            Ok(Synthesis {
                method,
                certificate: run.certificate,
                details: vec![
                    detail("letter", run.letter),
                    detail("c", run.c),
                    detail("cycle", run.cycle_len),
                    detail("h", run.h),
                    detail("r", run.r),
                    detail("ds", run.ds),
                ],
            })
        }
    }
}

/// Errors that only mean "this method does not apply here".
fn not_applicable(e: &Error) -> bool {
    matches!(
        e,
        Error::ClassMismatch(_)
            | Error::Budget(_)
            | Error::CapExceeded { .. }
            | Error::CriterionViolated(_)
            | Error::Precondition(_)
            | Error::NotStronglyConnected
    )
}

/// The smallest certified bound among the applicable methods, earlier
/// methods winning ties: decoder, quasi-one-cluster, quasi-Eulerian with
/// `c ≤ 2`, greedy compression.
fn auto(a: &Automaton) -> Result<Synthesis> {
    let mut candidates = Vec::new();
    if Decoder::from_automaton(a).is_some() {
        candidates.push(Method::Decoder);
    }
    let c = (0..a.k())
        .map(|l| letter_clusters(a, l).map(|cs| cs.other_cycle_states))
        .collect::<Result<Vec<_>>>()?;
    candidates.push(Method::QuasiOneCluster(c.into_iter().min().unwrap_or(0)));
    let mut results = Vec::new();
    for m in candidates {
        match run_method(a, m) {
            Ok(s) => results.push(s),
            Err(e) if not_applicable(&e) => {}
            Err(e) => return Err(e),
        }
    }
    for c in 0..=2.min(a.n().saturating_sub(1)) {
        match run_method(a, Method::QuasiEulerian(c)) {
            Ok(s) => {
                results.push(s);
                break;
            }
            Err(e) if not_applicable(&e) => {}
            Err(e) => return Err(e),
        }
    }
    results.push(run_method(a, Method::GreedyCompression)?);
    let best = results
        .iter()
        .enumerate()
        .min_by_key(|(i, s)| (s.certificate.bound(), *i))
        .map(|(i, _)| i)
        .expect("greedy compression always applies");
    let mut chosen = results.swap_remove(best);
    chosen.details.insert(0, detail("chosen", chosen.method));
    chosen.method = Method::Auto;
    Ok(chosen)
}
