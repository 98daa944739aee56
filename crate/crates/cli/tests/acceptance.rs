//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use monocount::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIELDS: [(u64, u32); 10] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (11, 1),
    (13, 1),
    (2, 4),
];
const PER_SHAPE: usize = 3;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

struct Suite {
    forms: Vec<MonomialForm>,
    with_zero: usize,
    with_multiple: usize,
}

/// Exponents uniform in `[0, q + 1]`; every third instance gets a forced
/// `q - 1` entry and every third a forced zero, so both cases are covered.
fn build_suite() -> Suite {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut forms = Vec::new();
    for &(p, e) in &FIELDS {
        let field = Arc::new(build_field(p, e).unwrap());
        let n = field.n() as u64;
        for s in 1..=3 {
            for r in 1..=3 {
                for k in 0..PER_SHAPE {
                    let mut cols: Vec<Vec<u64>> = (0..r)
                        .map(|_| (0..s).map(|_| rng.gen_range(0..=n + 2)).collect())
                        .collect();
                    let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..s));
                    match k % 3 {
                        0 => cols[i][j] = n,
                        1 => cols[i][j] = 0,
                        _ => {}
                    }
                    for col in cols.iter_mut() {
                        if col.iter().all(|&m| m == 0) {
                            col[rng.gen_range(0..s)] = rng.gen_range(1..=n + 2);
                        }
                    }
                    let coeffs = (0..r)
                        .map(|_| field.from_index(rng.gen_range(1..field.q())).unwrap())
                        .collect();
                    let m = ExponentMatrix::from_columns(&cols).unwrap();
                    forms.push(MonomialForm::new(field.clone(), m, coeffs).unwrap());
                }
            }
        }
    }
    let entries = |f: &MonomialForm| -> Vec<u64> { f.matrix().rows().flatten().copied().collect() };
    let with_zero = forms.iter().filter(|f| entries(f).contains(&0)).count();
    let with_multiple = forms
        .iter()
        .filter(|f| {
            let n = f.field().n() as u64;
            entries(f).iter().any(|&m| m > 0 && m % n == 0)
        })
        .count();
    Suite {
        forms,
        with_zero,
        with_multiple,
    }
}

fn describe(f: &MonomialForm) -> String {
    let cols: Vec<Vec<u64>> = (0..f.r()).map(|i| f.matrix().column(i)).collect();
    format!("q={} s={} r={} cols={cols:?}", f.field().q(), f.s(), f.r())
}

fn oracle_equivalence(suite: &Suite) -> Outcome {
    let limits = Limits::default();
    let mut worst = 0.0f64;
    for f in &suite.forms {
        let report = n_bar_formula(f, &limits).map_err(|e| format!("{}: {e}", describe(f)))?;
        let brute = n_bar_bruteforce(f, &limits).unwrap();
        if report.n_bar != brute {
            return Err(format!("{}: formula {} != brute force {brute}", describe(f), report.n_bar));
        }
        let tol = 1e-6 * (f.field().n() as f64).powf(f.s() as f64 / 2.0).max(1.0);
        if report.rounding_residual >= tol {
            return Err(format!("{}: residual {:e} >= {tol:e}", describe(f), report.rounding_residual));
        }
        worst = worst.max(report.rounding_residual / tol);
    }
    Ok(format!(
        "{} instances ({} with zero exponents, {} with nonzero multiples of q-1), worst residual/tolerance {worst:.2e}",
        suite.forms.len(),
        suite.with_zero,
        suite.with_multiple
    ))
}

fn suite_fields() -> Vec<FieldCtx> {
    FIELDS.iter().map(|&(p, e)| build_field(p, e).unwrap()).collect()
}

fn gauss_modulus() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for f in suite_fields() {
        let ch = Characters::new(&f);
        let q = f.q() as f64;
        let base = AdditiveCharParam::base();
        let trivial = ch.gauss_sum(MultCharExp::trivial(), base);
        if (trivial - ComplexValue::new(-1.0, 0.0)).norm() >= 1e-9 {
            return Err(format!("q={}: g(trivial) = {trivial}", f.q()));
        }
        for t in 1..f.n() as i64 {
            let g = ch.gauss_sum(MultCharExp::new(t, f.n()), base);
            let err = (g.norm_sqr() - q).abs();
            if err >= 1e-9 * q {
                return Err(format!("q={} t={t}: |g|^2 = {}", f.q(), g.norm_sqr()));
            }
            worst = worst.max(err / q);
            checked += 1;
        }
    }
    Ok(format!("{checked} nontrivial characters, worst relative error {worst:.2e}"))
}

fn rescaling() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for f in suite_fields() {
        let ch = Characters::new(&f);
        for t in 0..f.n() as i64 {
            let chi = MultCharExp::new(t, f.n());
            let g1 = ch.gauss_sum(chi, AdditiveCharParam::base());
            for u in f.elements().skip(1) {
                let gu = ch.gauss_sum(chi, AdditiveCharParam::new(u).unwrap());
                let err = (gu - ch.mult_char_eval(chi, u).conj() * g1).norm();
                if err >= 1e-9 {
                    return Err(format!("q={} t={t} u={}: error {err:e}", f.q(), f.format_element(u)));
                }
                worst = worst.max(err);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (t, u) pairs, worst error {worst:.2e}"))
}

fn identity_chain(suite: &Suite) -> Outcome {
    let limits = Limits::default();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for f in &suite.forms {
        let field = f.field();
        let tol = 1e-6 * (field.n() as f64).powi(f.s() as i32);
        let params = [field.one(), field.generator()];
        for u in params.map(|u| AdditiveCharParam::new(u).unwrap()) {
            let direct = s_bar_direct(f, u, &limits).unwrap();
            let chars = s_bar_via_characters(f, u, &limits).unwrap();
            let image = s_bar_via_image(f, u, &limits).map_err(|e| format!("{}: {e}", describe(f)))?;
            for (name, other) in [("characters", chars), ("image", image)] {
                let err = (direct - other).norm();
                if err >= tol {
                    return Err(format!("{}: direct {direct} vs {name} {other}", describe(f)));
                }
                worst = worst.max(err / tol);
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} sums, worst error/tolerance {worst:.2e}"))
}

fn size_law(suite: &Suite) -> Outcome {
    for f in &suite.forms {
        let n = f.field().n() as u64;
        let dual = dual_group(f.matrix(), n).unwrap();
        let star = restrict_lambda_trivial(&dual, n).unwrap();
        let d = kernel_size_d(f.matrix(), n).unwrap();
        let lhs = dual.size() as u128 * (n as u128).pow(f.s() as u32);
        let rhs = d as u128 * (n as u128).pow(f.r() as u32);
        if lhs != rhs {
            return Err(format!("{}: |G~| n^s = {lhs} != d n^r = {rhs}", describe(f)));
        }
        if !dual.size().is_multiple_of(star.size()) {
            return Err(format!("{}: |G~*| = {} does not divide {}", describe(f), star.size(), dual.size()));
        }
    }
    Ok(format!("{} instances", suite.forms.len()))
}

fn psi_sum_consistency(suite: &Suite) -> Outcome {
    let limits = Limits::default();
    let mut disagree_unconjugated = 0;
    for f in &suite.forms {
        let check = sum_over_psi_check(f, &limits).unwrap();
        let counted = ComplexValue::new(check.counted as f64, 0.0);
        let tol = check.tolerance();
        for (name, v) in [("direct", check.direct), ("characters", check.characters)] {
            if (v - counted).norm() >= tol {
                return Err(format!("{}: {name} side {v} != q*N - (q-1)^s = {}", describe(f), check.counted));
            }
        }
        if !check.unconjugated_agrees() {
            disagree_unconjugated += 1;
        }
    }
    Ok(format!(
        "{} instances; with chi(a) in place of conj(chi(a)) the identity fails on {disagree_unconjugated}",
        suite.forms.len()
    ))
}

fn total_count(suite: &Suite) -> Outcome {
    let limits = Limits::default();
    let mut checked = 0;
    for f in suite.forms.iter().filter(|f| (f.field().q() as f64).powi(f.s() as i32) <= 1e6) {
        let ie = n_total_inclusion_exclusion(f, &limits).unwrap();
        let brute = n_total_bruteforce(f, &limits).unwrap();
        if ie != brute {
            return Err(format!("{}: inclusion-exclusion {ie} != brute force {brute}", describe(f)));
        }
        checked += 1;
    }
    Ok(format!("{checked} instances"))
}

fn performance() -> Outcome {
    let field = Arc::new(build_field(11, 1).unwrap());
    let form = MonomialForm::diagonal(field, 6, 2).unwrap();
    let limits = Limits::default();
    let started = Instant::now();
    let formula = n_bar_value(&form, &limits).unwrap();
    let formula_time = started.elapsed();
    let started = Instant::now();
    let brute = n_bar_bruteforce(&form, &limits).unwrap();
    let brute_time = started.elapsed();
    if formula.n_bar != brute {
        return Err(format!("formula {} != brute force {brute}", formula.n_bar));
    }
    Ok(format!(
        "N = {brute}; formula {:.3} ms, brute force {:.3} ms, speedup {:.0}x (not asserted; build profile affects it)",
        formula_time.as_secs_f64() * 1e3,
        brute_time.as_secs_f64() * 1e3,
        brute_time.as_secs_f64() / formula_time.as_secs_f64()
    ))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_monocount"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn mask_text(s: &str) -> String {
    s.lines()
        .filter(|l| !l.starts_with("timing."))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// Timings zeroed and floats rounded to nine decimals.
fn mask_json(s: &str) -> serde_json::Value {
    fn walk(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(map) => {
                if let Some(t) = map.get_mut("timings").and_then(|t| t.as_object_mut()) {
                    t.values_mut().for_each(|x| *x = 0.0.into());
                }
                map.values_mut().for_each(walk);
            }
            serde_json::Value::Number(n) if n.is_f64() => {
                let x = (n.as_f64().unwrap() * 1e9).round() / 1e9;
                *v = (if x == 0.0 { 0.0 } else { x }).into();
            }
            _ => {}
        }
    }
    let mut v: serde_json::Value = serde_json::from_str(s).expect("valid JSON");
    walk(&mut v);
    v
}

fn golden_files() -> Outcome {
    let dir = golden_dir();
    let path = |name: &str| dir.join(name).to_str().unwrap().to_owned();
    let expected = |name: &str| std::fs::read_to_string(dir.join(name)).unwrap();

    for name in ["squares_f5", "mixed_f9"] {
        let golden = format!("{name}.expected");
        let (code, out, err) = run_cli(&["count", "--verify", "--explain", &path(&format!("{name}.eq"))]);
        if code != 0 {
            return Err(format!("{golden}: exit {code}: {err}"));
        }
        if mask_text(&out) != expected(&golden) {
            return Err(format!("{golden}: output differs:\n{out}"));
        }
    }
    let (code, out, err) = run_cli(&["count", "--json", &path("quartic_f13.eq")]);
    if code != 0 || mask_json(&out) != mask_json(&expected("quartic_f13.json.expected")) {
        return Err(format!("quartic_f13 JSON: exit {code}, {err}\n{out}"));
    }
    let keys: Vec<String> = serde_json::from_str::<serde_json::Map<String, serde_json::Value>>(&out)
        .unwrap()
        .keys()
        .cloned()
        .collect();
    let want = ["n_bar", "n_total", "d", "dual_size", "dual_star_size", "char_sum_re", "char_sum_im", "residual", "timings"];
    let mut sorted_want: Vec<String> = want.iter().map(|s| s.to_string()).collect();
    sorted_want.sort();
    if keys != sorted_want {
        return Err(format!("JSON keys {keys:?}"));
    }
    let (code, out, _) = run_cli(&["gauss", "5"]);
    if code != 0 || out != expected("gauss_5.expected") {
        return Err(format!("gauss 5: exit {code}\n{out}"));
    }

    let exit_cases = [
        (vec!["count".to_owned(), path("zero_coefficient.eq")], 1),
        (vec!["count".to_owned(), path("missing.eq")], 1),
        (vec!["count".to_owned(), "--bogus".to_owned(), path("squares_f5.eq")], 1),
        (vec!["count".to_owned(), path("wide_f3.eq")], 2),
        (vec!["count".to_owned(), "--limit".to_owned(), "3".to_owned(), path("squares_f5.eq")], 2),
        (vec!["count".to_owned(), path("precision_f13.eq")], 3),
    ];
    for (args, want) in &exit_cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _, err) = run_cli(&args);
        if code != *want {
            return Err(format!("{args:?}: exit {code}, expected {want}: {err}"));
        }
        if code == 2 && !err.contains("exceeds limit") {
            return Err(format!("{args:?}: limit message missing: {err}"));
        }
    }
    Ok(format!("4 golden outputs, {} exit-code cases", exit_cases.len()))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let started = Instant::now();
    let suite = build_suite();
    let criteria: Vec<Criterion<'_>> = vec![
        ("1 oracle equivalence of the character-sum count", Box::new(|| oracle_equivalence(&suite))),
        ("2 Gauss sum modulus and trivial character", Box::new(gauss_modulus)),
        ("3 additive character rescaling", Box::new(rescaling)),
        ("4 direct, image and character-sum forms of S", Box::new(|| identity_chain(&suite))),
        ("5 dual group size law", Box::new(|| size_law(&suite))),
        ("6 sum over additive characters", Box::new(|| psi_sum_consistency(&suite))),
        ("7 total count by inclusion-exclusion", Box::new(|| total_count(&suite))),
        ("8 F_11 x1^2+...+x6^2 formula vs brute force", Box::new(performance)),
        ("9 CLI golden outputs and exit codes", Box::new(golden_files)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.1}s]", t.elapsed().as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
