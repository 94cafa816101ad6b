use rayon::prelude::*;

use synchro::codes::{decoder_reset, gen_random_decoder, gen_random_dfa};
use synchro::oracle::{exact_reset_threshold_with, OracleOptions};
use synchro::synthesis::greedy_compression;
use synchro::{Error, Result};

use crate::report::{Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    /// Uniform random automata, certificates from greedy compression.
    RandomDfaRt,
    /// Uniform random binary decoders, certificates from the decoder synthesis.
    RandomDecoderRt,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::RandomDfaRt => "random-dfa-rt",
            Kind::RandomDecoderRt => "random-decoder-rt",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Params {
    pub kind: Kind,
    pub n_min: usize,
    pub n_max: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub oracle: OracleOptions,
}

/// Per-sample outcome: `None` for non-synchronizing instances.
#[derive(Debug, Clone, Copy)]
struct Sample {
    rt: Option<usize>,
    cert: usize,
}

/// Seed of sample `i` at size `n`, independent of evaluation order.
pub fn sample_seed(seed: u64, n: usize, i: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((n as u64) << 40) ^ i as u64
}

fn run_sample(p: &Params, n: usize, i: usize) -> Result<Option<Sample>> {
    let s = sample_seed(p.seed, n, i);
    let (a, cert) = match p.kind {
        Kind::RandomDfaRt => {
            let a = gen_random_dfa(n, p.k, s)?;
            if !a.is_synchronizing() {
                return Ok(None);
            }
            let cert = greedy_compression(&a)?.len();
            (a, cert)
        }
        Kind::RandomDecoderRt => {
            let d = gen_random_decoder(n, s)?;
            if !d.automaton().is_synchronizing() {
                return Ok(None);
            }
            let cert = decoder_reset(&d)?.certificate.len();
            (d.into_automaton(), cert)
        }
    };
    let rt = match exact_reset_threshold_with(&a, &p.oracle) {
        Ok(r) => r.map(|r| r.length),
        Err(Error::CapExceeded { .. }) | Err(Error::Budget(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Some(Sample { rt, cert }))
}

fn median(sorted: &[usize]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2] as f64
    } else {
        (sorted[m / 2 - 1] + sorted[m / 2]) as f64 / 2.0
    }
}

fn stats(values: &mut [usize]) -> [String; 3] {
    if values.is_empty() {
        return ["-".into(), "-".into(), "-".into()];
    }
    values.sort_unstable();
    let mean = values.iter().sum::<usize>() as f64 / values.len() as f64;
    [
        format!("{mean:.3}"),
        format!("{:.1}", median(values)),
        values[values.len() - 1].to_string(),
    ]
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fitted_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn run(p: &Params) -> Result<Report> {
    if p.n_min == 0 || p.n_min > p.n_max {
        return Err(Error::Precondition(format!("bad size range {}..={}", p.n_min, p.n_max)));
    }
    let mut table = Table {
        name: p.kind.name().to_string(),
        columns: [
            "n",
            "samples",
            "synchronizing",
            "mean_rt",
            "median_rt",
            "max_rt",
            "mean_cert",
            "median_cert",
            "max_cert",
        ]
        .map(String::from)
        .to_vec(),
        rows: Vec::new(),
    };
    let mut points = Vec::new();
    let mut total_sync = 0usize;
    for n in p.n_min..=p.n_max {
        if p.samples == 0 {
            continue;
        }
        let results: Vec<Option<Sample>> = (0..p.samples)
            .into_par_iter()
            .map(|i| run_sample(p, n, i))
            .collect::<Result<_>>()?;
        let sync: Vec<Sample> = results.into_iter().flatten().collect();
        total_sync += sync.len();
        let mut rts: Vec<usize> = sync.iter().filter_map(|s| s.rt).collect();
        let mut certs: Vec<usize> = sync.iter().map(|s| s.cert).collect();
        if !rts.is_empty() {
            let mean = rts.iter().sum::<usize>() as f64 / rts.len() as f64;
            if mean > 0.0 {
                points.push((n as f64, mean));
            }
        }
        let [mean_rt, median_rt, max_rt] = stats(&mut rts);
        let [mean_c, median_c, max_c] = stats(&mut certs);
        table.rows.push(vec![
            n.to_string(),
            p.samples.to_string(),
            sync.len().to_string(),
            mean_rt,
            median_rt,
            max_rt,
            mean_c,
            median_c,
            max_c,
        ]);
    }
    let mut report = Report::new();
    report
        .field("experiment", p.kind.name())
        .field("n_min", p.n_min)
        .field("n_max", p.n_max)
        .field("samples", p.samples)
        .field("seed", p.seed);
    if p.kind == Kind::RandomDfaRt {
        report.field("k", p.k);
    }
    let attempted = p.samples * (p.n_max - p.n_min + 1);
    if attempted > 0 {
        report.field(
            "synchronizing_fraction",
            format!("{:.4}", total_sync as f64 / attempted as f64),
        );
    }
    match fitted_exponent(&points) {
        Some(e) => report.field("fitted_exponent", format!("{e:.4}")),
        None => report.field("fitted_exponent", "-"),
    };
    report.table(table);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_of_a_power_law() {
        let pts: Vec<(f64, f64)> = (2..8).map(|n| (n as f64, (n as f64).powf(1.5))).collect();
        assert!((fitted_exponent(&pts).unwrap() - 1.5).abs() < 1e-9);
        assert!(fitted_exponent(&pts[..1]).is_none());
    }

    #[test]
    fn empty_experiment() {
        let p = Params {
            kind: Kind::RandomDfaRt,
            n_min: 4,
            n_max: 6,
            k: 2,
            samples: 0,
            seed: 1,
            oracle: OracleOptions::default(),
        };
        let out = run(&p).unwrap().render(false);
        assert!(out.ends_with("table=random-dfa-rt\nn samples synchronizing mean_rt median_rt max_rt mean_cert median_cert max_cert\nend\n"));
    }
}
