use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potequiv")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn kv(text: &str, key: &str) -> String {
    let prefix = format!("@{key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no @{key} in {text}"))
        .to_string()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn cm_demo_golden_at_50() {
    let golden = include_str!("golden/cm_demo_50.kv");
    assert_eq!(stdout(&["--format", "kv", "cm-demo", "--xmax", "50"]), golden);
}

#[test]
fn cm_demo_counts_at_100() {
    let out = stdout(&["--format", "kv", "cm-demo", "--xmax", "100"]);
    assert_eq!(kv(&out, "inert"), "13");
    assert_eq!(kv(&out, "inert_m4"), "13");
    assert_eq!(kv(&out, "split"), "11");
    assert_eq!(kv(&out, "split_inequivalent"), "11");
}

#[test]
fn kv_lines_all_carry_the_prefix() {
    for args in [
        vec!["--format", "kv", "cm-demo", "--xmax", "200"],
        vec!["--format", "kv", "lattice", "--matrix", "[[0,1],[-1,-1]]"],
        vec!["--format", "kv", "bound", "--degree", "2", "--factorial"],
    ] {
        let out = stdout(&args);
        assert!(out.lines().all(|l| l.starts_with('@') && l.contains('=')), "{out}");
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    for args in [
        vec!["powermap", "--demo", "swap", "--samples", "50", "--seed", "9"],
        vec!["--format", "kv", "lattice", "--matrix", "[[0,1],[-1,0]]", "--seed", "4"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
    let a = stdout(&["powermap", "--demo", "swap", "--samples", "20", "--seed", "1"]);
    let b = stdout(&["powermap", "--demo", "swap", "--samples", "20", "--seed", "2"]);
    assert_ne!(a, b);
}

#[test]
fn powermap_demos() {
    let torus = stdout(&["--format", "kv", "powermap", "--demo", "torus", "--samples", "100"]);
    assert_eq!(kv(&torus, "collapse"), "true");
    assert_eq!(kv(&torus, "distinct_images"), "1");
    let swap = stdout(&["--format", "kv", "powermap", "--demo", "swap", "--samples", "200"]);
    assert_eq!(kv(&swap, "collapse"), "false");
    assert_eq!(kv(&swap, "witnesses"), "200");
    assert!(!run(&["powermap", "--demo", "klein"]).status.success());
}

#[test]
fn compare_reproduces_the_demo() {
    let dir = tempfile::tempdir().unwrap();
    let table = path(dir.path(), "cm.txt");
    stdout(&["table", "--kind", "cm", "--xmax", "300", "--out", &table]);
    let out = stdout(&["--format", "kv", "compare", "--table", &table]);
    let demo = stdout(&["--format", "kv", "cm-demo", "--xmax", "300"]);
    assert_eq!(kv(&out, "hits"), kv(&demo, "hits"));
    assert_eq!(kv(&out, "p7"), "equivalent,4");
    assert_eq!(kv(&out, "p5"), "inequivalent,-");

    let forced = stdout(&["--format", "kv", "compare", "--table", &table, "--force-m", "4"]);
    for line in forced.lines().filter(|l| l.starts_with("@p") && l.as_bytes()[2].is_ascii_digit()) {
        let (key, value) = line[2..].split_once('=').unwrap();
        let p: u64 = key.parse().unwrap();
        let expect = if p % 4 == 3 { "yes,yes" } else { "no,no" };
        assert_eq!(value, expect, "p = {p}");
    }
}

#[test]
fn compare_rejects_empty_and_malformed_tables() {
    let dir = tempfile::tempdir().unwrap();
    let empty = path(dir.path(), "empty.txt");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(run(&["compare", "--table", &empty]).status.code(), Some(1));
    let bad = path(dir.path(), "bad.txt");
    std::fs::write(&bad, "#degree=1\n3;1 -3;1 x\n").unwrap();
    let out = run(&["compare", "--table", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn lattice_examples() {
    let rot = stdout(&["--format", "kv", "lattice", "--matrix", "[[0,1],[-1,0]]"]);
    assert_eq!((kv(&rot, "n"), kv(&rot, "fixed_rank"), kv(&rot, "m")), ("4".into(), "0".into(), "2".into()));
    let id = stdout(&["--format", "kv", "lattice", "--matrix", "[[1,0],[0,1]]"]);
    assert_eq!((kv(&id, "n"), kv(&id, "fixed_rank")), ("1".into(), "2".into()));
    let cyc = stdout(&["--format", "kv", "lattice", "--matrix", "[[0,1,0],[0,0,1],[1,0,0]]"]);
    assert_eq!(kv(&cyc, "fixed_basis"), "[[1,1,1]]");
    let l0 = stdout(&["--format", "kv", "lattice", "--matrix", "[[0,1,0],[0,0,1],[1,0,0]]", "--L0", "[[2,-2,0]]"]);
    assert_eq!(kv(&l0, "ltheta_basis"), "[[2,0,-2],[0,2,-2]]");
    let out = run(&["lattice", "--matrix", "[[1,1],[0,1]]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap 1000"));
    assert_eq!(run(&["lattice", "--matrix", "[[0,1,0],[0,0,1],[1,0,0]]", "--L0", "[[1,0,0]]"]).status.code(), Some(1));
}

#[test]
fn twist_detection_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let (base, twisted) = (path(dir.path(), "11a.txt"), path(dir.path(), "11a_chi8.txt"));
    stdout(&["ap-table", "--curve", "11a", "--xmax", "2000", "--out", &base]);
    stdout(&["ap-table", "--curve", "11a", "--xmax", "2000", "--twist", "chi8", "--out", &twisted]);
    let out = stdout(&["--format", "kv", "twist", "--f", &twisted, "--g", &base, "--q", "8"]);
    assert_eq!(kv(&out, "outcome"), "character");
    let values: Vec<String> = ["chi1", "chi3", "chi5", "chi7"].iter().map(|k| kv(&out, k)).collect();
    assert_eq!(values, ["1", "-1", "-1", "1"]);

    let same = stdout(&["--format", "kv", "twist", "--f", &base, "--g", &base, "--q", "1"]);
    assert_eq!(kv(&same, "outcome"), "character");
    assert_eq!(kv(&same, "chi0"), "1");

    let text = std::fs::read_to_string(&twisted).unwrap();
    let corrupted = text.replacen("\n3 1\n", "\n3 -1\n", 1);
    assert_ne!(corrupted, text);
    let bad = path(dir.path(), "bad.txt");
    std::fs::write(&bad, corrupted).unwrap();
    let out = stdout(&["--format", "kv", "twist", "--f", &bad, "--g", &base, "--q", "8"]);
    assert_eq!(kv(&out, "outcome"), "none");

    let short = path(dir.path(), "short.txt");
    stdout(&["ap-table", "--curve", "11a", "--xmax", "20", "--out", &short]);
    let out = stdout(&["--format", "kv", "twist", "--f", &short, "--g", &short, "--q", "8"]);
    assert_eq!(kv(&out, "outcome"), "inconclusive");
}

#[test]
fn bounds() {
    for (d, m) in [("1", "2"), ("2", "12"), ("4", "120")] {
        assert_eq!(kv(&stdout(&["--format", "kv", "bound", "--degree", d]), "bound"), m);
    }
    let f = stdout(&["--format", "kv", "bound", "--degree", "2", "--factorial"]);
    assert!(kv(&f, "factorial").parse::<u64>().unwrap() > 12);
    assert_eq!(run(&["bound", "--degree", "0"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["twist", "--f", "a"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
