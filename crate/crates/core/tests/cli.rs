//! Command-line behaviour, in process through `run_cli` and through the
//! built binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use ac0_sat::circuit::parse_circuit;
use ac0_sat::cli::{run_cli, EXIT_OK, EXIT_UNSAT, EXIT_USAGE, EXIT_VERIFY_FAILED};
use ac0_sat::oracle::{brute_count, truth_table};
use ac0_sat::restriction::Restriction;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("ac0sat-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.0.join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn run(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("ac0sat").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_constant_true_prints_a_witness() {
    let dir = Scratch::new("solve");
    let c = dir.file("t.ac0", "p ac0 3 1\ng 1 0 AND T\n");
    let (code, out, _) = run(&["solve", s(&c)]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "SAT");
    assert!(lines[1].starts_with("witness ") && lines[1].len() == "witness ".len() + 3);
}

#[test]
fn solve_unsatisfiable_exits_one() {
    let dir = Scratch::new("unsat");
    let c = dir.file("f.ac0", "p ac0 2 2\ng 1 0 AND @0 @1\ng 2 0 OR x0\ng 2 1 OR -x0\n");
    let (code, out, _) = run(&["solve", s(&c)]);
    assert_eq!((code, out.as_str()), (EXIT_UNSAT, "UNSAT\n"));
}

#[test]
fn generated_parity_counts_sixty_four() {
    let dir = Scratch::new("count");
    let (code, text, _) = run(&["gen", "parity", "--n", "8", "--group", "4", "--d", "2"]);
    assert_eq!(code, EXIT_OK);
    let c = dir.file("parity.ac0", &text);
    assert_eq!(brute_count(&parse_circuit(&text).unwrap()).unwrap(), 64);
    assert_eq!(run(&["count", s(&c)]).1, "64\n");
    let forced = run(&["--p-switch", "0.4", "--p-depth2", "0.5", "--no-fallback", "count", s(&c)]);
    assert_eq!(forced.1, "64\n");
}

#[test]
fn partition_verifies_and_tampering_is_caught() {
    let dir = Scratch::new("verify");
    let (_, text, _) = run(&["--seed", "3", "gen", "random", "--n", "8", "--m", "12", "--d", "3"]);
    let c = dir.file("c.ac0", &text);
    let part = dir.path("c.part");
    let (code, _, _) = run(&["--p-switch", "0.4", "--no-fallback", "partition", s(&c), "--out", s(&part)]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = run(&["verify", s(&c), s(&part)]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with("OK "));

    // flip the payload of the first entry line
    let original = std::fs::read_to_string(&part).unwrap();
    let mut lines: Vec<String> = original.lines().map(str::to_string).collect();
    let last = lines[1].pop().unwrap();
    lines[1].push(if last == '1' { '0' } else { '1' });
    let tampered = dir.file("tampered.part", &(lines.join("\n") + "\n"));
    let (code, out, _) = run(&["verify", s(&c), s(&tampered)]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    assert!(out.starts_with("FAIL "), "{out}");
    let witness = out.lines().find_map(|l| l.strip_prefix("counterexample ")).expect("counterexample line");
    let x: Vec<bool> = witness.chars().map(|ch| ch == '1').collect();
    let circuit = parse_circuit(&text).unwrap();
    let region: Restriction = lines[1].split(" | ").next().unwrap().parse().unwrap();
    assert!(region.consistent_with(&x));
    assert_eq!(circuit.evaluate(&x), last == '1');
}

#[test]
fn enumerate_streams_the_models() {
    let dir = Scratch::new("enum");
    let (_, text, _) = run(&["--seed", "8", "gen", "random", "--n", "9", "--m", "10", "--d", "4"]);
    let c = dir.file("c.ac0", &text);
    let (code, out, _) = run(&["--p-switch", "0.4", "--p-depth2", "0.5", "--no-fallback", "enumerate", s(&c)]);
    assert_eq!(code, EXIT_OK);
    let table = truth_table(&parse_circuit(&text).unwrap(), 12).unwrap();
    let mut seen = vec![false; table.len()];
    for line in out.lines() {
        let (mask, rest) = line.split_once(" | ").unwrap();
        assert_eq!(rest, "- | 1");
        let rho: Restriction = mask.parse().unwrap();
        rho.for_each_point(|idx| assert!(!std::mem::replace(&mut seen[idx as usize], true)));
    }
    assert_eq!(seen, table);
}

#[test]
fn fixed_seed_gives_identical_output() {
    let dir = Scratch::new("det");
    let (_, text, _) = run(&["--seed", "12", "gen", "random", "--n", "10", "--m", "15", "--d", "3"]);
    let c = dir.file("c.ac0", &text);
    let args = ["--seed", "5", "--p-switch", "0.3", "--no-fallback", "partition", s(&c)];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first, second);
    assert!(first.2.contains("seed\t5\n"));
    let mut threaded = vec!["--jobs", "2"];
    threaded.extend_from_slice(&args);
    assert_eq!(run(&threaded), first);
}

#[test]
fn switch_stats_prints_a_tab_separated_table() {
    let (code, out, _) = run(&["switch-stats", "--samples", "2000", "--s", "0,4,8"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<Vec<&str>> = out.lines().skip(2).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][..2], ["0", "2000"]);
    assert!(rows.iter().all(|r| r.len() == 7));
    assert_eq!(rows[1][4], "6.250000e-2");
}

#[test]
fn bench_reports_agreement() {
    let (code, out, _) = run(&["bench", "--sizes", "6,8", "--depths", "2,3", "--count", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1 + 2 * 2 * 2);
    assert!(out.lines().skip(1).all(|l| l.ends_with("\ttrue")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["count", "/nonexistent/circuit.ac0"]).0, EXIT_USAGE);
    assert_eq!(run(&["--q", "0.9", "count", "/nonexistent"]).0, EXIT_USAGE);
    let dir = Scratch::new("usage");
    let bad = dir.file("bad.ac0", "p ac0 2 2\ng 1 0 AND @0\ng 2 0 AND x0\n");
    let (code, _, err) = run(&["count", s(&bad)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("non-alternating"), "{err}");
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_exit_codes() {
    let dir = Scratch::new("bin");
    let c = dir.file("f.ac0", "p ac0 1 1\ng 1 0 AND x0 -x0\n");
    let bin = env!("CARGO_BIN_EXE_ac0sat");
    let unsat = Command::new(bin).args(["solve", s(&c)]).output().unwrap();
    assert_eq!(unsat.status.code(), Some(EXIT_UNSAT));
    assert_eq!(String::from_utf8_lossy(&unsat.stdout), "UNSAT\n");
    let usage = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
}
