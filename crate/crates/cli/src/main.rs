mod experiment;
mod methods;
mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use synchro::classes::{detect_quasi_eulerian, letter_clusters};
use synchro::codes::{
    gen_cerny, gen_random_decoder, gen_random_dfa, gen_random_eulerian, gen_xnk, Decoder, PrefixCode,
};
use synchro::oracle::{exact_reset_threshold_with, OracleOptions, DEFAULT_MEMORY_BUDGET};
use synchro::{Automaton, Error, StateSet};

use methods::{run_method, Method};
use report::Report;

/// Environment variable with the oracle memory budget in bytes.
const MEMORY_BUDGET_VAR: &str = "SYNCHRO_MEMORY_BUDGET";

#[derive(Parser)]
#[command(
    name = "synchro",
    version,
    about = "Reset words with certified length bounds for synchronizing automata"
)]
struct Cli {
    /// Human-readable output instead of key=value lines.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an automaton from a named family.
    Gen {
        /// Write the automaton here instead of standard output; decoder
        /// labels go to `<output>.labels`.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,

        #[command(subcommand)]
        family: Family,
    },
    /// Report structural properties and class memberships.
    Analyze { file: PathBuf },
    /// Synthesize a reset word with a certified length bound.
    Synth {
        file: PathBuf,
        /// auto, greedy-ext, greedy-comp, small-rank, decoder,
        /// quasi-eulerian:C or quasi-one-cluster:C.
        #[arg(short, long, default_value = "auto")]
        method: Method,
    },
    /// Exact reset threshold and the lexicographically least shortest reset word.
    Oracle { file: PathBuf },
    /// Batch statistics of reset thresholds over random instances.
    Experiment {
        #[arg(value_enum)]
        kind: experiment::Kind,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Alphabet size for random automata.
        #[arg(short, long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Family {
    /// The Černý automaton C_n.
    Cerny { n: usize },
    /// The k-ary decoder X_{n,k}.
    Xnk { n: usize, k: usize },
    /// Uniformly random automaton.
    RandomDfa {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Uniformly random binary decoder with n states.
    RandomDecoder {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random automaton with every in-degree equal to k.
    RandomEulerian {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The decoder of a prefix code file.
    FromCode { file: PathBuf },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Lib(e) => match e {
                Error::CapExceeded { .. }
                | Error::DsCapExceeded { .. }
                | Error::Budget(_)
                | Error::SearchExhausted(_) => 3,
                Error::Internal(_) => 4,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_input(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// An automaton file, or a prefix code file read as its decoder.
fn load_automaton(path: &PathBuf) -> CliResult<Automaton> {
    let text = read_input(path)?;
    match Automaton::parse(&text) {
        Ok(a) => Ok(a),
        Err(e) => match PrefixCode::parse(&text) {
            Ok(code) => Ok(Decoder::from_code(&code)?.into_automaton()),
            Err(_) => Err(e.into()),
        },
    }
}

fn oracle_options() -> CliResult<OracleOptions> {
    let memory_budget = match std::env::var(MEMORY_BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MEMORY_BUDGET_VAR} must be a byte count, got `{v}`")))?,
        Err(_) => DEFAULT_MEMORY_BUDGET,
    };
    Ok(OracleOptions {
        memory_budget,
        ..OracleOptions::default()
    })
}

fn cmd_gen(family: &Family, output: Option<&PathBuf>) -> CliResult<String> {
    let mut meta = Report::new();
    let mut labels = None;
    let a = match family {
        Family::Cerny { n } => {
            meta.field("family", "cerny");
            gen_cerny(*n)?
        }
        Family::Xnk { n, k } => {
            meta.field("family", "xnk");
            gen_xnk(*n, *k)?
        }
        Family::RandomDfa { n, k, seed } => {
            meta.field("family", "random-dfa").field("seed", seed);
            gen_random_dfa(*n, *k, *seed)?
        }
        Family::RandomEulerian { n, k, seed } => {
            meta.field("family", "random-eulerian").field("seed", seed);
            gen_random_eulerian(*n, *k, *seed)?
        }
        Family::RandomDecoder { n, seed } => {
            meta.field("family", "random-decoder").field("seed", seed);
            let d = gen_random_decoder(*n, *seed)?;
            meta.field("height", d.height());
            labels = Some(d.labels_text());
            d.into_automaton()
        }
        Family::FromCode { file } => {
            let code = PrefixCode::parse(&read_input(file)?)?;
            let d = Decoder::from_code(&code)?;
            meta.field("family", "prefix-code")
                .field("codewords", code.len())
                .field("height", d.height());
            labels = Some(d.labels_text());
            d.into_automaton()
        }
    };
    meta.field("n", a.n())
        .field("k", a.k())
        .field("fingerprint", a.fingerprint());
    match output {
        Some(path) => {
            fs::write(path, meta.render_comments() + &a.to_text())
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            if let Some(l) = &labels {
                let lpath = PathBuf::from(format!("{}.labels", path.display()));
                fs::write(&lpath, l).map_err(|e| CliError::Io(format!("{}: {e}", lpath.display())))?;
                meta.field("labels", lpath.display());
            }
            meta.field("output", path.display());
            Ok(meta.render(false))
        }
        None => {
            let mut out = meta.render_comments();
            if let Some(l) = &labels {
                out.extend(l.lines().map(|line| format!("# label {line}\n")));
            }
            Ok(out + &a.to_text())
        }
    }
}

fn cmd_analyze(a: &Automaton) -> CliResult<Report> {
    let n = a.n();
    let mut r = Report::new();
    r.field("n", n).field("k", a.k()).field("fingerprint", a.fingerprint());
    let pair = a.incompressible_pair();
    r.field("synchronizing", pair.is_none());
    if let Some((p, q)) = pair {
        r.field("incompressible_pair", format!("{p},{q}"));
    }
    r.field("strongly_connected", a.is_strongly_connected());
    match a.sink_component() {
        Some(s) => r.field("sink_component", s),
        None => r.field("sink_component", "-"),
    };
    let ranks: Vec<usize> = (0..a.k())
        .map(|l| {
            a.apply_word(&StateSet::full(n), &synchro::Word::letter(l))
                .map(|s| s.len())
        })
        .collect::<synchro::Result<_>>()?;
    r.field(
        "letter_ranks",
        ranks.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
    );
    let (min_rank, _) = a.min_letter_rank();
    r.field("min_letter_rank", min_rank);
    // a letter of rank r with r³ ≤ 6n − 6 settles the Černý conjecture
    let cube = (min_rank as u128).pow(3);
    r.field("cerny_rank_condition", cube <= 6 * n as u128 - 6 || n == 1);
    let mut min_c = usize::MAX;
    for l in 0..a.k() {
        let cs = letter_clusters(a, l)?;
        min_c = min_c.min(cs.other_cycle_states);
        r.field(format!("letter.{l}.clusters"), cs.clusters.len())
            .field(format!("letter.{l}.largest_cycle"), cs.largest_cycle().len())
            .field(format!("letter.{l}.height"), cs.h)
            .field(format!("letter.{l}.other_cycle_states"), cs.other_cycle_states);
    }
    r.field("quasi_one_cluster_c", min_c);
    for c in 0..=2.min(n - 1) {
        let value = match detect_quasi_eulerian(a, c) {
            Ok(Some(_)) => "true".to_string(),
            Ok(None) => "false".to_string(),
            Err(Error::Budget(_)) => "budget".to_string(),
            Err(e) => return Err(e.into()),
        };
        r.field(format!("quasi_eulerian.c{c}"), value);
    }
    r.field("decoder", Decoder::from_automaton(a).is_some());
    Ok(r)
}

fn cmd_synth(a: &Automaton, method: Method) -> CliResult<Report> {
    let s = run_method(a, method)?;
    let word = s.certificate.word();
    // the certificate is checked on construction; re-check before printing
    if !a.is_reset_word(word)? {
        return Err(Error::Internal(format!("word `{word}` does not reset the automaton")).into());
    }
    let mut r = Report::new();
    r.field("method", s.method)
        .field("fingerprint", a.fingerprint())
        .field("word", word.to_machine())
        .field("length", word.len())
        .field("bound_kind", s.certificate.kind())
        .field("bound", s.certificate.bound())
        .field("verified", true);
    for (k, v) in &s.details {
        r.field(k.as_str(), v);
    }
    Ok(r)
}

fn cmd_oracle(a: &Automaton) -> CliResult<Report> {
    let mut r = Report::new();
    r.field("n", a.n()).field("fingerprint", a.fingerprint());
    match exact_reset_threshold_with(a, &oracle_options()?)? {
        Some(s) => {
            r.field("synchronizing", true)
                .field("rt", s.length)
                .field("word", s.word.to_machine());
        }
        None => {
            r.field("synchronizing", false);
            if let Some((p, q)) = a.incompressible_pair() {
                r.field("incompressible_pair", format!("{p},{q}"));
            }
        }
    }
    Ok(r)
}

fn run(cli: Cli) -> CliResult<String> {
    let report = match cli.command {
        Command::Gen { output, family } => return cmd_gen(&family, output.as_ref()),
        Command::Analyze { file } => cmd_analyze(&load_automaton(&file)?)?,
        Command::Synth { file, method } => cmd_synth(&load_automaton(&file)?, method)?,
        Command::Oracle { file } => cmd_oracle(&load_automaton(&file)?)?,
        Command::Experiment {
            kind,
            n_min,
            n_max,
            k,
            samples,
            seed,
        } => experiment::run(&experiment::Params {
            kind,
            n_min,
            n_max,
            k,
            samples,
            seed,
            oracle: oracle_options()?,
        })?,
    };
    Ok(report.render(cli.pretty))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
