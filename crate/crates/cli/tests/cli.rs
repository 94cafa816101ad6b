use std::path::PathBuf;
use std::process::{Command, Output};

fn synchro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synchro")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("synchro-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn gen_cerny_four_is_the_figure_table() {
    let o = synchro(&["gen", "cerny", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["4 2", "1 0", "2 1", "3 2", "0 0"]);
}

#[test]
fn oracle_on_generated_files() {
    let text = stdout(&synchro(&["gen", "cerny", "5"]));
    let p = scratch("c5.txt", &text);
    let out = stdout(&synchro(&["oracle", p.to_str().unwrap()]));
    assert_eq!(field(&out, "rt"), Some("16"));

    let text = stdout(&synchro(&["gen", "xnk", "7", "3"]));
    let p = scratch("x73.txt", &text);
    let out = stdout(&synchro(&["oracle", p.to_str().unwrap()]));
    assert_eq!(field(&out, "rt"), Some("4"));
    let out = stdout(&synchro(&["analyze", p.to_str().unwrap()]));
    assert_eq!(field(&out, "decoder"), Some("true"));
    assert_eq!(field(&out, "letter.0.clusters"), Some("1"));
}

#[test]
fn synth_certificate_is_within_its_bound() {
    let p = scratch("c4.txt", &stdout(&synchro(&["gen", "cerny", "4"])));
    for m in ["auto", "greedy-ext", "greedy-comp", "small-rank", "quasi-one-cluster:0"] {
        let o = synchro(&["synth", "-m", m, p.to_str().unwrap()]);
        assert!(o.status.success(), "{m}: {}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        let len: u128 = field(&out, "length").unwrap().parse().unwrap();
        let bound: u128 = field(&out, "bound").unwrap().parse().unwrap();
        assert!(9 <= len && len <= bound, "{m}: {len} vs {bound}");
        assert_eq!(field(&out, "verified"), Some("true"));
    }
}

#[test]
fn prefix_code_files_are_read_as_decoders() {
    let p = scratch("code.txt", "2\n0\n10\n11\n");
    let out = stdout(&synchro(&["synth", "-m", "decoder", p.to_str().unwrap()]));
    assert_eq!(field(&out, "word"), Some("0"));
    let out = stdout(&synchro(&["gen", "from-code", p.to_str().unwrap()]));
    assert!(out.contains("# label 1 1\n"));
}

#[test]
fn single_state_synthesizes_the_empty_word() {
    let p = scratch("one.txt", "1 2\n0 0\n");
    let out = stdout(&synchro(&["synth", p.to_str().unwrap()]));
    assert_eq!(field(&out, "word"), Some("-"));
    assert_eq!(field(&out, "length"), Some("0"));
}

#[test]
fn gen_output_file_writes_labels() {
    let dir = std::env::temp_dir().join(format!("synchro-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("dec.txt");
    let o = synchro(&["gen", "random-decoder", "10", "--seed", "1", "-o", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&p).unwrap().contains("10 2\n"));
    let labels = std::fs::read_to_string(dir.join("dec.txt.labels")).unwrap();
    assert_eq!(labels.lines().count(), 10);
    assert!(labels.starts_with("0 -\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(synchro(&["--help"]).status.code(), Some(0));
    assert_eq!(synchro(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(synchro(&["synth", "-m", "fast", "x"]).status.code(), Some(1));
    assert_eq!(synchro(&["oracle", "/nonexistent/file"]).status.code(), Some(2));

    let bad = scratch("bad.txt", "2 2\n0 5\n1 1\n");
    assert_eq!(synchro(&["oracle", bad.to_str().unwrap()]).status.code(), Some(2));

    // two fixed points: not synchronizing, with the offending pair reported
    let split = scratch("split.txt", "2 1\n0\n1\n");
    let o = synchro(&["synth", split.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0"));
    let out = stdout(&synchro(&["oracle", split.to_str().unwrap()]));
    assert_eq!(field(&out, "synchronizing"), Some("false"));

    let c = scratch("c6.txt", &stdout(&synchro(&["gen", "cerny", "6"])));
    let o = Command::new(env!("CARGO_BIN_EXE_synchro"))
        .args(["oracle", c.to_str().unwrap()])
        .env("SYNCHRO_MEMORY_BUDGET", "16")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn empty_experiment_exits_cleanly() {
    let o = synchro(&[
        "experiment",
        "random-decoder-rt",
        "--n-min",
        "4",
        "--n-max",
        "6",
        "--samples",
        "0",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.ends_with("max_cert\nend\n"));
    assert_eq!(field(&out, "fitted_exponent"), Some("-"));
}

#[test]
fn pretty_output_aligns_fields() {
    let p = scratch("c3.txt", &stdout(&synchro(&["gen", "cerny", "3"])));
    let out = stdout(&synchro(&["--pretty", "oracle", p.to_str().unwrap()]));
    assert!(out.lines().any(|l| l.starts_with("rt ") && l.ends_with(" 4")));
}
