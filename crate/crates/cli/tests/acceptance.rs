//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Bound formulas, spans, subset sums and tree enumerations are recomputed
//! here rather than taken from the library.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use synchro::classes::quasi_eulerian_reset;
use synchro::codes::{
    decoder_reset, gen_cerny, gen_random_decoder, gen_random_dfa, gen_random_eulerian, gen_xnk, xnk_reset_word,
};
use synchro::induced::{build_induced, criterion_synchronizing, WordSet};
use synchro::linalg::{rat, word_matrix, LetterDistribution, Rat, RatVec};
use synchro::oracle::{brute_matrix_span, brute_span, exact_reset_threshold};
use synchro::synthesis::{greedy_extension, reduce_alpha, reduce_general};
use synchro::{Automaton, Word};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zero() -> Rat {
    rat(0, 1)
}

/// Runs `w` from every state by single steps; the size of the image.
fn image_size(a: &Automaton, w: &Word) -> usize {
    let mut seen = BTreeSet::new();
    for q in 0..a.n() {
        seen.insert(w.letters().iter().fold(q, |p, &l| a.step(p, l)));
    }
    seen.len()
}

/// Rank over the rationals by plain Gaussian elimination.
fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for j in 0..m.len() {
            if j != r && m[j][c] != zero() {
                let f = &m[j][c] / &pivot;
                for t in c..cols {
                    let v = &f * &m[r][t];
                    m[j][t] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

fn to_rat_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect()
}

fn same_span(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    let both: Vec<Vec<Rat>> = a.iter().chain(b).cloned().collect();
    let r = rank(&both);
    rank(a) == r && rank(b) == r
}

/// Number of distinct positive subset sums, by listing all subsets.
fn subset_sums(v: &[Rat]) -> u128 {
    let mut sums = BTreeSet::new();
    for mask in 1u32..(1 << v.len()) {
        let s = (0..v.len())
            .filter(|i| mask >> i & 1 == 1)
            .fold(zero(), |acc, i| acc + &v[i]);
        if s > zero() {
            sums.insert(s);
        }
    }
    sums.len() as u128
}

fn ceil_log2(n: usize) -> usize {
    let mut r = 0;
    while (1usize << r) < n {
        r += 1;
    }
    r
}

fn decoder_formula(r: u128, n: u128) -> u128 {
    let factor = if r >= 4 {
        (r * r * r - r) / 6 - 1
    } else {
        (r.max(1) - 1) * (r.max(1) - 1)
    };
    2 + (r + n - 1) * factor
}

fn random_positive(rng: &mut ChaCha8Rng, n: usize) -> RatVec {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..12)).collect();
    let total: i64 = w.iter().sum();
    RatVec(w.iter().map(|&x| rat(x, total)).collect())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 2..=8usize {
        let a = gen_cerny(n).map_err(|e| e.to_string())?;
        let rt = exact_reset_threshold(&a)
            .map_err(|e| e.to_string())?
            .ok_or("C_n not synchronizing")?
            .length;
        check(rt == (n - 1) * (n - 1), || format!("n={n}: rt={rt}"))?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("rt(C_n) = (n-1)^2 for n=2..8 in {:.2}s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let a = gen_cerny(4).map_err(|e| e.to_string())?;
    let expected: [(&str, Word, [[i64; 4]; 4]); 3] = [
        (
            "a",
            Word::letter(0),
            [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]],
        ),
        (
            "b",
            Word::letter(1),
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]],
        ),
        (
            "ba",
            Word::from_letters([1, 0]),
            [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]],
        ),
    ];
    for (name, w, m) in expected {
        let got = word_matrix(&a, &w).map_err(|e| e.to_string())?;
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                check(got.row(i).0[j] == rat(v, 1), || {
                    format!("[{name}] differs at ({i},{j})")
                })?;
            }
        }
    }
    Ok("[a], [b], [ba] of C_4 match entry for entry".into())
}

fn criterion_3() -> Outcome {
    let mut count = 0;
    for k in 3..=5usize {
        for n in k + 2..=14 {
            let a = gen_xnk(n, k).map_err(|e| e.to_string())?;
            let rt = exact_reset_threshold(&a)
                .map_err(|e| e.to_string())?
                .ok_or("X_{n,k} not synchronizing")?
                .length;
            let expected = 2 * n.div_ceil(k + 1);
            check(rt == expected, || format!("n={n} k={k}: rt={rt}, expected {expected}"))?;
            let ell = n.div_ceil(k + 1) - 1;
            let mut w = vec![k - 1];
            w.extend(std::iter::repeat_n(0, 2 * ell));
            w.push(k - 1);
            let w = Word::from_letters(w);
            check(xnk_reset_word(n, k).map_err(|e| e.to_string())? == w, || {
                format!("n={n} k={k}: reset word differs")
            })?;
            check(image_size(&a, &w) == 1, || {
                format!("n={n} k={k}: a_k a_1^2l a_k has rank > 1")
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "rt(X_n,k) = 2*ceil(n/(k+1)) and the reset word has rank 1 on {count} instances"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let runs = 1000;
    for i in 0..runs {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=3);
        let d = rng.gen_range(0..=4);
        let a = gen_random_dfa(n, k, rng.gen()).map_err(|e| e.to_string())?;

        let general = reduce_general(&a, d).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<Rat>> = general
            .words
            .iter()
            .map(|w| {
                let mut v = vec![zero(); n * n];
                for (q, t) in a.word_map(w).unwrap().into_iter().enumerate() {
                    v[q * n + t] = rat(1, 1);
                }
                v
            })
            .collect();
        let brute = to_rat_rows(&brute_matrix_span(&a, d).map_err(|e| e.to_string())?);
        check(same_span(&rows, &brute), || {
            format!("run {i}: reduce_general span differs (n={n} k={k} d={d})")
        })?;

        let alpha = random_positive(&mut rng, n);
        let red = reduce_alpha(&a, d, &alpha).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<Rat>> = red
            .words
            .iter()
            .map(|w| {
                let mut v = vec![zero(); n];
                for (q, t) in a.word_map(w).unwrap().into_iter().enumerate() {
                    v[t] += &alpha.0[q];
                }
                v
            })
            .collect();
        let brute = to_rat_rows(&brute_span(&a, &alpha, d).map_err(|e| e.to_string())?);
        check(same_span(&rows, &brute), || {
            format!("run {i}: reduce_alpha span differs (n={n} k={k} d={d})")
        })?;
    }
    Ok(format!("{runs} automata, both reductions span the brute-force spaces"))
}

fn criterion_5() -> Outcome {
    let uniform = LetterDistribution::uniform(2);
    let mut exhaustive = 0;
    for n in 1..=3usize {
        for code in 0..n.pow(2 * n as u32) {
            let mut c = code;
            let delta: Vec<usize> = (0..2 * n)
                .map(|_| {
                    let t = c % n;
                    c /= n;
                    t
                })
                .collect();
            let a = Automaton::new(n, 2, delta).map_err(|e| e.to_string())?;
            if !a.is_strongly_connected() {
                continue;
            }
            let crit = criterion_synchronizing(&a, &uniform).map_err(|e| e.to_string())?;
            check(crit == a.is_synchronizing(), || {
                format!("disagreement on {:?}", a.table())
            })?;
            exhaustive += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut random = 0;
    while random < 10_000 {
        let n = rng.gen_range(2..=8);
        let k = rng.gen_range(1..=3);
        let a = gen_random_dfa(n, k, rng.gen()).map_err(|e| e.to_string())?;
        if !a.is_strongly_connected() {
            continue;
        }
        let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..6)).collect();
        let total: i64 = w.iter().sum();
        let p = LetterDistribution::new(w.iter().map(|&x| rat(x, total)).collect()).map_err(|e| e.to_string())?;
        let crit = criterion_synchronizing(&a, &p).map_err(|e| e.to_string())?;
        check(crit == a.is_synchronizing(), || {
            format!("disagreement on {:?}", a.table())
        })?;
        random += 1;
    }
    Ok(format!(
        "{exhaustive} exhaustive and {random} random strongly connected automata, no disagreement"
    ))
}

fn criterion_6() -> Outcome {
    let mut corpus: Vec<Automaton> = (2..=7).map(|n| gen_cerny(n).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    while corpus.len() < 200 {
        let n = rng.gen_range(2..=8);
        let k = rng.gen_range(2..=3);
        let a = if rng.gen_bool(0.25) {
            gen_random_eulerian(n, k, rng.gen())
        } else {
            gen_random_dfa(n, k, rng.gen())
        }
        .map_err(|e| e.to_string())?;
        if a.is_strongly_connected() && a.is_synchronizing() {
            corpus.push(a);
        }
    }
    let (mut full_runs, mut partial_runs) = (0, 0);
    for a in &corpus {
        let n = a.n();
        // R = Q: W1 = {ε}, W2 from the matrix reduction
        let w1 = WordSet::singleton(Word::empty());
        let w2 = reduce_general(a, n - 1).map_err(|e| e.to_string())?.word_set();
        let (alpha, _) = build_induced(a, &w1, &w2)
            .and_then(|b| b.stationary())
            .map_err(|e| e.to_string())?;
        let run = greedy_extension(a, &w1, &w2, &alpha, &Word::empty()).map_err(|e| e.to_string())?;
        let ds = subset_sums(&alpha.0);
        check(run.steps as u128 <= ds - 1, || {
            format!("{:?}: {} steps, DS={ds}", a.table(), run.steps)
        })?;
        let bound = 1 + (ds - 2) * w2.max_len() as u128;
        check(run.certificate.len() as u128 <= bound, || {
            format!("{:?}: length {} > {bound}", a.table(), run.certificate.len())
        })?;
        check(image_size(a, run.certificate.word()) == 1, || {
            format!("{:?}: not a reset word", a.table())
        })?;
        full_runs += 1;

        // R ≠ Q: W1 = {w0} for a letter of rank < n, W2 = all words of length < n
        let Some(l) = (0..a.k()).find(|&l| image_size(a, &Word::letter(l)) < n) else {
            continue;
        };
        let w0 = Word::letter(l);
        let w1 = WordSet::singleton(w0.clone());
        let w2 = WordSet::all_up_to(a.k(), n - 1);
        let (alpha, _) = build_induced(a, &w1, &w2)
            .and_then(|b| b.stationary())
            .map_err(|e| e.to_string())?;
        let run = greedy_extension(a, &w1, &w2, &alpha, &w0).map_err(|e| e.to_string())?;
        let ds = subset_sums(&alpha.0);
        check(run.steps as u128 <= ds - 1, || {
            format!("{:?}: {} steps, DS={ds}", a.table(), run.steps)
        })?;
        let bound = 1 + (ds - 1) * (1 + (n - 1)) as u128;
        check(run.certificate.len() as u128 <= bound, || {
            format!("{:?}: length {} > {bound}", a.table(), run.certificate.len())
        })?;
        check(image_size(a, run.certificate.word()) == 1, || {
            format!("{:?}: not a reset word", a.table())
        })?;
        partial_runs += 1;
    }
    Ok(format!(
        "{full_runs} runs with R = Q and {partial_runs} with R != Q within step count and length bounds"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut runs = 0;
    let mut slack_min = u128::MAX;
    while runs < 500 {
        let n = rng.gen_range(2..=12);
        let d = gen_random_decoder(n, rng.gen()).map_err(|e| e.to_string())?;
        let a = d.automaton();
        let Some(shortest) = exact_reset_threshold(a).map_err(|e| e.to_string())? else {
            continue;
        };
        let run = decoder_reset(&d).map_err(|e| e.to_string())?;
        let len = run.certificate.len();
        let bound = decoder_formula(ceil_log2(n) as u128, n as u128);
        check(len as u128 <= bound, || {
            format!("{:?}: length {len} > {bound}", a.table())
        })?;
        check(len >= shortest.length, || {
            format!("{:?}: length {len} below rt {}", a.table(), shortest.length)
        })?;
        check(image_size(a, run.certificate.word()) == 1, || {
            format!("{:?}: not a reset word", a.table())
        })?;
        slack_min = slack_min.min(bound - len as u128);
        runs += 1;
    }
    Ok(format!(
        "{runs} synchronizing binary decoders, rt <= length <= bound, least slack {slack_min}"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut runs = 0;
    while runs < 100 {
        let n = rng.gen_range(3..=10);
        let k = rng.gen_range(2..=3);
        let a = gen_random_eulerian(n, k, rng.gen()).map_err(|e| e.to_string())?;
        let mut indeg = vec![0; n];
        for &t in a.table() {
            indeg[t] += 1;
        }
        check(indeg.iter().all(|&d| d == k), || {
            format!("{:?} is not Eulerian", a.table())
        })?;
        if !a.is_strongly_connected() || !a.is_synchronizing() {
            continue;
        }
        let run = quasi_eulerian_reset(&a, 0).map_err(|e| e.to_string())?;
        let len = run.certificate.len();
        let bound = 1 + (n - 2) * (n - 1);
        check(len <= bound, || format!("{:?}: length {len} > {bound}", a.table()))?;
        check(image_size(&a, run.certificate.word()) == 1, || {
            format!("{:?}: not a reset word", a.table())
        })?;
        runs += 1;
    }
    Ok(format!("{runs} Eulerian synchronizing automata within 1+(n-2)(n-1)"))
}

/// Codeword lists of all full binary trees with `n` internal nodes.
fn all_trees(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![vec![vec![]]];
    }
    let mut out = Vec::new();
    for left in 0..n {
        for l in all_trees(left) {
            for r in all_trees(n - 1 - left) {
                let mut words: Vec<Vec<usize>> = l.iter().map(|w| [&[0][..], w].concat()).collect();
                words.extend(r.iter().map(|w| [&[1][..], w].concat()));
                words.sort();
                out.push(words);
            }
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let trees = all_trees(3);
    check(trees.len() == 5, || {
        format!("{} trees with 3 internal nodes", trees.len())
    })?;
    let index: HashMap<Vec<Vec<usize>>, usize> = trees.into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    let samples = 100_000u64;
    let mut counts = [0u64; 5];
    for seed in 0..samples {
        let d = gen_random_decoder(3, seed).map_err(|e| e.to_string())?;
        let mut words: Vec<Vec<usize>> = d
            .code()
            .map_err(|e| e.to_string())?
            .words()
            .iter()
            .map(|w| w.letters().to_vec())
            .collect();
        words.sort();
        let i = *index
            .get(&words)
            .ok_or_else(|| format!("seed {seed}: unknown code {words:?}"))?;
        counts[i] += 1;
    }
    let expected = samples as f64 / 5.0;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let p = 1.0 - ChiSquared::new(4.0).unwrap().cdf(stat);
    check(p > 0.001, || {
        format!("chi-square {stat:.3}, p = {p:.5}, counts {counts:?}")
    })?;
    Ok(format!("counts {counts:?}, chi-square {stat:.3}, p = {p:.4}"))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_synchro"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "synchro {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

/// Least-squares slope of `ln y` against `ln x`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_10() -> Outcome {
    let mut summary = Vec::new();
    for kind in ["random-dfa-rt", "random-decoder-rt"] {
        let out = run_cli(&[
            "experiment",
            kind,
            "--n-min",
            "4",
            "--n-max",
            "14",
            "--samples",
            "200",
            "--seed",
            "10",
        ])?;
        let text = String::from_utf8(out).map_err(|e| e.to_string())?;
        let mut lines = text.lines().skip_while(|l| !l.starts_with("table="));
        lines.next();
        let header: Vec<&str> = lines.next().ok_or("missing table header")?.split(' ').collect();
        let col = |name: &str| {
            header
                .iter()
                .position(|&h| h == name)
                .ok_or(format!("missing column {name}"))
        };
        let (cn, cm) = (col("n")?, col("mean_rt")?);
        let mut points = Vec::new();
        for line in lines.take_while(|&l| l != "end") {
            let cells: Vec<&str> = line.split(' ').collect();
            let n: f64 = cells[cn].parse().map_err(|_| format!("bad row `{line}`"))?;
            let mean: f64 = cells[cm].parse().map_err(|_| format!("bad row `{line}`"))?;
            points.push((n, mean));
        }
        check(points.len() == 11, || format!("{kind}: {} rows", points.len()))?;
        let e = slope(&points);
        let reported: f64 = text
            .lines()
            .find_map(|l| l.strip_prefix("fitted_exponent="))
            .and_then(|v| v.parse().ok())
            .ok_or("missing fitted_exponent")?;
        check((e - reported).abs() < 1e-3, || {
            format!("{kind}: reported exponent {reported}, refit {e}")
        })?;
        check(e < 2.5, || format!("{kind}: fitted exponent {e:.3}"))?;
        summary.push(format!("{kind} exponent {e:.3}"));
    }
    Ok(format!("{} (guard < 2.5)", summary.join(", ")))
}

fn criterion_11() -> Outcome {
    let dir = std::env::temp_dir().join(format!("synchro-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = |name: &str| -> PathBuf { dir.join(name) };
    let files = [
        (path("dfa.txt"), vec!["gen", "random-dfa", "9", "2", "--seed", "11"]),
        (path("dec.txt"), vec!["gen", "random-decoder", "10", "--seed", "1"]),
        (path("xnk.txt"), vec!["gen", "xnk", "7", "3"]),
    ];
    let mut commands: Vec<Vec<String>> = Vec::new();
    for (file, args) in &files {
        let text = run_cli(args)?;
        std::fs::write(file, &text).map_err(|e| e.to_string())?;
        commands.push(args.iter().map(|s| s.to_string()).collect());
        let f = file.display().to_string();
        for sub in [
            vec!["analyze"],
            vec!["synth"],
            vec!["synth", "-m", "greedy-ext"],
            vec!["oracle"],
        ] {
            let mut c: Vec<String> = sub.iter().map(|s| s.to_string()).collect();
            c.push(f.clone());
            commands.push(c);
        }
    }
    commands.push(
        [
            "experiment",
            "random-dfa-rt",
            "--n-min",
            "4",
            "--n-max",
            "9",
            "--samples",
            "40",
            "--seed",
            "3",
        ]
        .map(String::from)
        .to_vec(),
    );
    for c in &commands {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let first = bin().args(&args).output().map_err(|e| e.to_string())?;
        let second = bin().args(&args).output().map_err(|e| e.to_string())?;
        check(first.status.code() == second.status.code(), || {
            format!("{c:?}: exit codes differ")
        })?;
        check(first.stdout == second.stdout, || format!("{c:?}: outputs differ"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical across two runs", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 11] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ];
    let outcomes: Vec<(Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|f| {
                s.spawn(move || {
                    let start = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (r, start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = Vec::new();
    for (i, (outcome, t)) in outcomes.iter().enumerate() {
        match outcome {
            Ok(msg) => println!("PASS criterion {}: {msg} [{:.1}s]", i + 1, t.as_secs_f64()),
            Err(msg) => {
                println!("FAIL criterion {}: {msg} [{:.1}s]", i + 1, t.as_secs_f64());
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
