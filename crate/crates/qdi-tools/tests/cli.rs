//! End-to-end runs of the qdi binary: artifact shapes, exit codes,
//! determinism, and rerun reproduction.

use std::path::{Path, PathBuf};
use std::process::Command;

use qdi_core::{build_adder, AdderArch, Protocol};
use qdi_tools::textfmt;

fn qdi(dir: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qdi"));
    cmd.current_dir(dir).env("QDI_OUT_DIR", dir);
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let out = cmd.output().expect("spawn qdi");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn build(dir: &Path, args: &[&str]) -> PathBuf {
    let (code, stdout, stderr) = run(qdi(dir).args(["build"]).args(args));
    assert_eq!(code, 0, "build {args:?}: {stderr}");
    let line = stdout
        .lines()
        .find(|l| l.starts_with("wrote "))
        .expect("wrote line");
    PathBuf::from(line.trim_start_matches("wrote "))
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn build_census_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = run(qdi(dir.path()).args([
        "build", "--arch", "bclarc", "--width", "32", "--protocol", "rtz",
    ]));
    assert_eq!(code, 0);
    assert!(
        stdout.contains("BCLG:1 BCLGRC:7 FA:24 XOR3:8"),
        "census missing: {stdout}"
    );
    let path = dir.path().join("bclarc-32-rtz.net");
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = textfmt::parse_netlist(&text).unwrap();
    let direct = build_adder(AdderArch::Bclarc, 32, Protocol::Rtz).unwrap().netlist;
    assert!(parsed.structurally_equal(&direct));
}

#[test]
fn build_hybrid_rto_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(
        dir.path(),
        &["--arch", "hybrid", "--k", "2", "--width", "32", "--protocol", "rto"],
    );
    let parsed = textfmt::parse_netlist(&std::fs::read_to_string(path).unwrap()).unwrap();
    let direct = build_adder(
        AdderArch::Hybrid { rca_nibbles: 2 },
        32,
        Protocol::Rto,
    )
    .unwrap()
    .netlist;
    assert!(parsed.structurally_equal(&direct));
}

#[test]
fn bad_widths_and_args_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["build", "--arch", "bcla", "--width", "30"],
        &["build", "--arch", "bclarc", "--width", "4"],
        &["build", "--arch", "hybrid", "--width", "32"],
        &["build", "--arch", "hybrid:9", "--width", "32"],
        &["build", "--arch", "frob", "--width", "8"],
        &["build", "--arch", "rca", "--width", "8", "--protocol", "rtq"],
    ];
    for args in cases {
        let (code, _, stderr) = run(qdi(dir.path()).args(*args));
        assert_eq!(code, 2, "{args:?}: {stderr}");
        assert!(!stderr.is_empty(), "{args:?} should explain itself");
    }
}

#[test]
fn simulate_is_deterministic_and_rerunnable() {
    let dir = tempfile::tempdir().unwrap();
    let net = build(dir.path(), &["--arch", "rca", "--width", "8"]);
    let net = net.to_str().unwrap();
    let args = [
        "simulate", "--netlist", net, "--vectors", "random:1000", "--seed", "7", "--out", "a.csv",
    ];
    let (code, _, stderr) = run(qdi(dir.path()).args(args));
    assert_eq!(code, 0, "{stderr}");
    let mut again = args;
    again[args.len() - 1] = "b.csv";
    let (code, _, _) = run(qdi(dir.path()).args(again));
    assert_eq!(code, 0);
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b, "same config must give identical artifacts");

    let (code, _, stderr) = run(qdi(dir.path()).args([
        "rerun",
        dir.path().join("a.csv").to_str().unwrap(),
        "--out",
        dir.path().join("c.csv").to_str().unwrap(),
    ]));
    assert_eq!(code, 0, "{stderr}");
    let c = std::fs::read(dir.path().join("c.csv")).unwrap();
    assert_eq!(a, c, "rerun from embedded config must reproduce the artifact");
}

#[test]
fn simulate_exhaustive_oracle_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let net = build(dir.path(), &["--arch", "rca", "--width", "8"]);
    let (code, stdout, stderr) = run(qdi(dir.path()).args([
        "simulate",
        "--netlist",
        net.to_str().unwrap(),
        "--vectors",
        "exhaustive",
        "--out",
        "full.csv",
    ]));
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("131072 vectors"), "{stdout}");
    let rows = csv_rows(&std::fs::read_to_string(dir.path().join("full.csv")).unwrap());
    assert_eq!(rows.len(), 131_072);
}

#[test]
fn simulate_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let rto = build(dir.path(), &["--arch", "rca", "--width", "8", "--protocol", "rto"]);
    let rto = rto.to_str().unwrap();
    let cases: &[&[&str]] = &[
        &["simulate", "--netlist", rto, "--protocol", "rtz"],
        &["simulate", "--netlist", "no-such-file.net"],
        &["simulate", "--netlist", rto, "--vectors", "exhaustive", "--default-delay", "2"],
        &["simulate", "--netlist", rto, "--vectors", "random:0"],
    ];
    for args in cases {
        let (code, _, stderr) = run(qdi(dir.path()).args(*args));
        assert_eq!(code, 2, "{args:?}: {stderr}");
    }
}

#[test]
fn simulate_dump_lists_transitions() {
    let dir = tempfile::tempdir().unwrap();
    let net = build(dir.path(), &["--arch", "rca", "--width", "1"]);
    let (code, _, stderr) = run(qdi(dir.path()).args([
        "simulate",
        "--netlist",
        net.to_str().unwrap(),
        "--vectors",
        "random:3",
        "--dump",
        "t.dump",
    ]));
    assert_eq!(code, 0, "{stderr}");
    let dump = std::fs::read_to_string(dir.path().join("t.dump")).unwrap();
    let mut last = 0u64;
    let mut lines = 0;
    for line in dump.lines().filter(|l| !l.starts_with('#')) {
        let mut tok = line.split_whitespace();
        let time: u64 = tok.next().unwrap().parse().unwrap();
        let _net = tok.next().unwrap();
        let level: u8 = tok.next().unwrap().parse().unwrap();
        assert!(level <= 1);
        assert!(time >= last, "dump must be time-sorted");
        last = time;
        lines += 1;
    }
    assert!(lines > 0, "dump is empty");
}

#[test]
fn compare_orders_cycle_times() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, stderr) = run(qdi(dir.path()).args([
        "compare",
        "--archs",
        "bcla,bclarc,hybrid:1,hybrid:2,hybrid:3",
        "--width",
        "32",
        "--out",
        "cmp.csv",
    ]));
    assert_eq!(code, 0, "{stderr}");
    let text = std::fs::read_to_string(dir.path().join("cmp.csv")).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    let col = |name: &str| {
        let header: Vec<&str> = text
            .lines()
            .find(|l| l.starts_with("arch,"))
            .unwrap()
            .split(',')
            .collect();
        header.iter().position(|&h| h == name).unwrap()
    };
    let ct = col("ct");
    let act = col("analytic_ct");
    let measured: Vec<u64> = rows.iter().map(|r| r[ct].parse().unwrap()).collect();
    let analytic: Vec<u64> = rows.iter().map(|r| r[act].parse().unwrap()).collect();
    assert_eq!(analytic, vec![55, 26, 27, 30, 33]);
    // Listed order bcla, bclarc, h1, h2, h3: the lookahead with the
    // redundant carry leads and the ripple prefix erodes it nibble by
    // nibble, with plain bcla last.
    assert!(measured[1] < measured[2], "{measured:?}");
    assert!(measured[2] < measured[3], "{measured:?}");
    assert!(measured[3] < measured[4], "{measured:?}");
    assert!(measured[4] < measured[0], "{measured:?}");
    let norm = col("norm_ct");
    assert_eq!(rows[0][norm], "1.000000", "bcla has the largest ct");
}

#[test]
fn compare_single_arch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(qdi(dir.path()).args(["compare", "--archs", "bcla", "--width", "32"]));
    assert_eq!(code, 2);
}

#[test]
fn check_block_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = run(qdi(dir.path()).args([
        "check", "--block", "bclgrc", "--trials", "5", "--out", "ok.json",
    ]));
    assert_eq!(code, 0, "{stdout}{stderr}");
    let text = std::fs::read_to_string(dir.path().join("ok.json")).unwrap();
    assert!(text.contains("\"clean\": true"));

    let (code, stdout, _) = run(qdi(dir.path()).args([
        "check", "--block", "bclgrc", "--mutant", "drop-icd", "--trials", "5", "--out", "bad.json",
    ]));
    assert_eq!(code, 1, "mutant must fail: {stdout}");
    let text = std::fs::read_to_string(dir.path().join("bad.json")).unwrap();
    assert!(text.contains("\"clean\": false"));
    assert!(text.contains("G0"), "violation detail names the orphan: {text}");
}

#[test]
fn check_generated_adder_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = run(qdi(dir.path()).args([
        "check", "--arch", "bclarc", "--width", "8", "--trials", "3",
        "--vectors-per-trial", "5", "--budget", "400",
    ]));
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(stdout.contains("verdict: clean"), "{stdout}");
}

#[test]
fn check_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["check", "--block", "bclgrc", "--trials", "0"],
        &["check", "--block", "nope"],
        &["check", "--block", "bclgrc", "--mutant", "weird"],
        &["check", "--arch", "bclarc", "--width", "8", "--mutant", "drop-icd"],
        &["check", "--arch", "bclarc"],
        &["check"],
        &["check", "--block", "bclgrc", "--delay-min", "9", "--delay-max", "2"],
    ];
    for args in cases {
        let (code, _, stderr) = run(qdi(dir.path()).args(*args));
        assert_eq!(code, 2, "{args:?}: {stderr}");
    }
}

#[test]
fn build_artifacts_rerun_identically() {
    let dir = tempfile::tempdir().unwrap();
    let net = build(dir.path(), &["--arch", "bcla", "--width", "16"]);
    let (code, _, stderr) = run(qdi(dir.path()).args([
        "rerun",
        net.to_str().unwrap(),
        "--out",
        dir.path().join("again.net").to_str().unwrap(),
    ]));
    assert_eq!(code, 0, "{stderr}");
    let a = std::fs::read(&net).unwrap();
    let b = std::fs::read(dir.path().join("again.net")).unwrap();
    assert_eq!(a, b);
}
