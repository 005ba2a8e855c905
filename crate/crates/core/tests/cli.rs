use std::io::Write;
use std::process::{Command, Output, Stdio};

use fibcirc::cli;
use fibcirc::codec::{encode, Algorithm};

fn bin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fibcirc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn fibcirc");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// The binary prints exactly what the library produces.
fn same_as_library(args: &[&str], stdin: &str) -> Output {
    let out = bin(args, stdin);
    let lib = cli::run(std::iter::once("fibcirc").chain(args.iter().copied()), &mut stdin.as_bytes());
    assert_eq!(stdout(&out), lib.stdout, "stdout differs for {args:?}");
    assert_eq!(stderr(&out), lib.stderr, "stderr differs for {args:?}");
    assert_eq!(out.status.code(), Some(lib.code));
    out
}

#[test]
fn encode_matches_library_packet() {
    let out = same_as_library(&["encode", "--alg", "fib3", "SUMEYRA"], "");
    assert!(out.status.success());
    let expected = encode("SUMEYRA", Algorithm::Fib3).unwrap().to_canonical_string();
    assert_eq!(stdout(&out), format!("{expected}\n"));

    let out = same_as_library(&["encode", "--alg", "lucas2", "GOOD"], "");
    assert_eq!(stdout(&out), format!("{}\n", encode("GOOD", Algorithm::Lucas2).unwrap().to_canonical_string()));
    assert!(stdout(&out).contains(r#""d":-216"#));
}

#[test]
fn encode_errors() {
    let out = same_as_library(&["encode", "--alg", "fib3", ""], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("empty message"));
    let out = same_as_library(&["encode", "A,B"], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unsupported character"));
}

#[test]
fn decode_from_stdin_and_file() {
    let packet = encode("SUMEYRA", Algorithm::Fib3).unwrap().to_canonical_string();
    let out = same_as_library(&["decode"], &packet);
    assert_eq!(stdout(&out), "SUMEYRA\n");

    let dir = std::env::temp_dir().join(format!("fibcirc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("good.json");
    let path_str = path.to_str().unwrap();
    let out = bin(&["encode", "--alg", "lucas2", "--output", path_str, "good"], "");
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let out = bin(&["decode", path_str], "");
    assert_eq!(stdout(&out), "GOOD\n");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn tampered_packet_reports_block() {
    let packet = encode("SUMEYRA", Algorithm::Fib3).unwrap().to_canonical_string().replace("\"d\":347", "\"d\":348");
    let out = same_as_library(&["decode"], &packet);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("block 1: FAILED"));
    assert!(stderr(&out).contains("320/12"));
}

#[test]
fn malformed_packet() {
    let out = same_as_library(&["decode"], "{\"version\":1,\n\"algorithm\":\"fib9\"}");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn det_and_eig_reports() {
    let out = same_as_library(&["det", "--matrix", "G", "--p", "1", "--q", "1", "--n", "3"], "");
    assert!(stdout(&out).contains("closed form: 4\noracle (Bareiss): 4\n  absolute deviation: 0\n"));
    let out = same_as_library(&["det", "--matrix", "H", "--p", "1", "--q", "1", "--n", "2"], "");
    assert!(stdout(&out).contains("closed form: -8\noracle (Bareiss): -8\n"));
    let out = same_as_library(&["eig", "--p", "1", "--q", "1", "--a", "1", "--r", "2", "--n", "2"], "");
    assert!(stdout(&out).contains("0 0.5+0i 0.5+0i"));
    assert!(stdout(&out).contains("1 -0.5+0i -0.5+0i"));
    let out = same_as_library(&["eig", "--p", "1", "--q", "1", "--a", "1", "--r", "1.618033988749895", "--n", "3"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(bin(&[], "").status.code(), Some(1));
    assert_eq!(bin(&["det", "--matrix", "Q", "--p", "1", "--q", "1", "--n", "3"], "").status.code(), Some(1));
    let help = bin(&["help", "encode"], "");
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("--alg"));
}

#[test]
fn table_listing() {
    let out = same_as_library(&["table", "--n", "2"], "");
    assert!(stdout(&out).starts_with("A 2\nB 3\n"));
    assert!(stdout(&out).ends_with("Z 27\n0 1\n"));
}

#[test]
fn selftest_is_seeded() {
    let a = bin(&["selftest", "--seed", "7", "--max-n", "6"], "");
    let b = bin(&["selftest", "--seed", "7", "--max-n", "6"], "");
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.contains("suites passed in"))
            .map(|l| l.split(" (").next().unwrap().to_string() + l.split("): ").nth(1).unwrap_or(""))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(stdout(&a).contains("[PASS] ratio circulant eigenvalues"));
}
