use std::sync::Arc;

use monocount::counting::sample::random_form;
use monocount::build_field;
use monocount_cli::{format_equation, parse_equation, run};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run_capture(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["monocount"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn without_timings(s: &str) -> String {
    s.lines().filter(|l| !l.starts_with("timing.")).collect::<Vec<_>>().join("\n")
}

#[test]
fn gauss_lines() {
    let (code, out, _) = run_capture(&["gauss", "3^2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0], "0\t-1\t0\t1");
    for line in &lines[1..] {
        assert!(line.ends_with("\t9"), "{line}");
        assert_eq!(line.split('\t').count(), 4);
    }
    let (code, _, err) = run_capture(&["gauss", "5", "--u", "0"]);
    assert_eq!(code, 1);
    assert!(err.contains("nonzero"));
    assert_eq!(run_capture(&["gauss", "6"]).0, 1);
}

#[test]
fn bench_is_deterministic_per_seed() {
    let args = ["bench", "--random", "7:2:3", "--instances", "3", "--seed", "42"];
    let (code, first, _) = run_capture(&args);
    assert_eq!(code, 0);
    let (_, second, _) = run_capture(&args);
    assert_eq!(without_timings(&first), without_timings(&second));
    assert_eq!(first.matches("agree: yes").count(), 3);
    let (_, other, _) = run_capture(&["bench", "--random", "7:2:3", "--instances", "3", "--seed", "43"]);
    assert_ne!(without_timings(&first), without_timings(&other));
}

#[test]
fn bench_single_variable_and_json() {
    let (code, out, _) = run_capture(&["bench", "--diagonal", "13:1:3", "--json"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows[0]["n_bar_formula"], 0);
    assert_eq!(rows[0]["n_bar_bruteforce"], 0);
    assert_eq!(run_capture(&["bench", "--diagonal", "13:x:3"]).0, 1);
    assert_eq!(run_capture(&["bench"]).0, 1);
}

#[test]
fn limit_and_force() {
    let dir = std::env::temp_dir().join(format!("monocount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eight.eq");
    std::fs::write(&path, "field 5\nvars 8\nterm 1 2,0,0,0,0,0,0,1\nterm 2 0,2,2,2,2,2,2,0\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, _, err) = run_capture(&["count", "--verify", "--limit", "1000", p]);
    assert_eq!(code, 2);
    assert!(err.contains("exceeds limit 1000"), "{err}");
    let (code, out, _) = run_capture(&["count", "--verify", "--force", "--limit", "1000", p]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("verify: ok"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn single_monomial_verifies_to_zero() {
    let dir = std::env::temp_dir().join(format!("monocount-mono-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (field, coeff) in [("2", "1"), ("2^3", "g^3"), ("7", "3"), ("3^2", "g^1")] {
        let path = dir.join("mono.eq");
        std::fs::write(&path, format!("field {field}\nvars 1\nterm {coeff} 5\n")).unwrap();
        let (code, out, _) = run_capture(&["count", "--verify", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.contains("\nn_bar: 0\n"), "{out}");
        assert!(out.contains("\nn_total: 1\n"), "{out}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #[test]
    fn format_then_parse_round_trips(idx in 0usize..6, s in 1usize..4, r in 1usize..4, seed: u64) {
        let (p, e) = [(2, 1), (3, 1), (2, 3), (7, 1), (3, 2), (2, 4)][idx];
        let field = Arc::new(build_field(p, e).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = random_form(field, s, r, 40, &mut rng).unwrap();
        let text = format_equation(&form);
        let parsed = parse_equation(&text).unwrap();
        prop_assert_eq!(&parsed, &form);
        prop_assert_eq!(format_equation(&parsed), text);
    }
}
