use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use monocount::counting::sample::random_form;
use monocount::{
    n_bar_bruteforce, n_bar_formula, n_bar_value, n_total_bruteforce, sum_over_psi_check,
    AdditiveCharParam, Characters, Error, Limits, MonomialForm, MultCharExp,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equation::{parse_element, parse_equation, parse_field_spec, Display, ParseError};
use crate::report::{self, Sections, Verification};

pub const DEFAULT_LIMIT: u64 = 10_000_000;
pub const DEFAULT_BENCH_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 for bad input, 2 for exceeded limits, 3 for numerical or
    /// verification failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Core(Error::LimitExceeded { .. } | Error::Overflow(_)) => 2,
            CliError::Core(
                Error::ResidualTooLarge { .. } | Error::PrecisionExhausted(_) | Error::Mismatch(_),
            ) => 3,
            CliError::Core(_) => 1,
            CliError::Verification(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "monocount", version, about = "Count zeros of monomial forms over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count solutions of the equation in FILE (`-` reads stdin).
    Count(CountArgs),
    /// Time the character-sum formula against exhaustive enumeration.
    Bench(BenchArgs),
    /// Print the Gauss sums g(χ_t, ψ_u) of a field, one line per t.
    Gauss(GaussArgs),
}

#[derive(Args, Debug, Clone)]
struct LimitArgs {
    /// Largest enumeration (points or characters) attempted.
    #[arg(long, value_name = "N")]
    limit: Option<u64>,
    /// Ignore all enumeration limits.
    #[arg(long)]
    force: bool,
}

impl LimitArgs {
    fn limits(&self, default: u64) -> Limits {
        if self.force {
            Limits::unlimited()
        } else {
            Limits::new(self.limit.unwrap_or(default))
        }
    }
}

#[derive(Args, Debug)]
struct CountArgs {
    file: PathBuf,
    /// Also count by brute force and check the exponential-sum identities.
    #[arg(long)]
    verify: bool,
    /// Print d, the dual group sizes and the invariant factors.
    #[arg(long)]
    explain: bool,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Equation file.
    #[arg(conflicts_with_all = ["diagonal", "random"], required_unless_present_any = ["diagonal", "random"])]
    file: Option<PathBuf>,
    /// `FIELD:S:M`, the form x1^M + ... + xS^M.
    #[arg(long, value_name = "FIELD:S:M", conflicts_with = "random")]
    diagonal: Option<String>,
    /// `FIELD:S:R`, random forms with S variables and R monomials.
    #[arg(long, value_name = "FIELD:S:R")]
    random: Option<String>,
    /// Number of random instances.
    #[arg(long, default_value_t = 5)]
    instances: usize,
    /// Largest exponent of random instances; defaults to q + 1.
    #[arg(long)]
    max_exp: Option<u64>,
    /// Seed for the random instances
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit one JSON object per instance, as an array
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args, Debug)]
struct GaussArgs {
    /// `p` or `p^e`.
    field: String,
    /// Additive character parameter, an integer or `g^k`.
    #[arg(long, default_value = "1")]
    u: String,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Count(args) => count(&args, out, err),
        Command::Bench(args) => bench(&args, out),
        Command::Gauss(args) => gauss(&args, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    let shown = path.display().to_string();
    let io = |source| CliError::Io {
        path: shown.clone(),
        source,
    };
    if shown == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

pub fn load_form(path: &PathBuf) -> Result<MonomialForm, CliError> {
    let text = read_input(path)?;
    parse_equation(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn write_out(out: &mut dyn Write, s: &str) -> Result<(), CliError> {
    out.write_all(s.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn verify(form: &MonomialForm, n_bar: u64, n_total: u64, limits: &Limits) -> Result<Verification, CliError> {
    let brute = n_bar_bruteforce(form, limits)?;
    let total = match n_total_bruteforce(form, limits) {
        Ok(n) => Some(n),
        Err(Error::LimitExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let psi = sum_over_psi_check(form, limits)?;
    let mut failures = Vec::new();
    if brute != n_bar {
        failures.push(format!("n_bar formula {n_bar} != brute force {brute}"));
    }
    if let Some(t) = total.filter(|&t| t != n_total) {
        failures.push(format!("n_total inclusion-exclusion {n_total} != brute force {t}"));
    }
    let counted = psi.counted as f64;
    let tol = psi.tolerance();
    if (psi.direct.re - counted).abs() > tol || psi.direct.im.abs() > tol {
        failures.push(format!("sum over psi {:?} != q*N - (q-1)^s = {counted}", psi.direct));
    }
    if (psi.characters.re - counted).abs() > tol || psi.characters.im.abs() > tol {
        failures.push(format!("character side {:?} != q*N - (q-1)^s = {counted}", psi.characters));
    }
    Ok(Verification {
        n_bar_bruteforce: brute,
        n_total_bruteforce: total,
        psi,
        failures,
    })
}

fn count(args: &CountArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let form = load_form(&args.file)?;
    let limits = args.limits.limits(DEFAULT_LIMIT);
    let report = n_bar_formula(&form, &limits)?;
    let verification = if args.verify {
        Some(verify(&form, report.n_bar, report.n_total, &limits)?)
    } else {
        None
    };
    if args.json {
        write_out(out, &report::count_json(&report))?;
        if let Some(v) = &verification {
            for failure in &v.failures {
                let _ = writeln!(err, "verify.failure: {failure}");
            }
        }
    } else {
        let sections = Sections {
            explain: args.explain,
            verify: verification.as_ref(),
        };
        write_out(out, &report::count_text(&form, &report, sections))?;
    }
    match verification {
        Some(v) if !v.failures.is_empty() => Err(CliError::Verification(v.failures.join("; "))),
        _ => Ok(()),
    }
}

fn parse_triple(spec: &str, what: &str) -> Result<(Arc<monocount::FieldCtx>, usize, u64), CliError> {
    let usage = || CliError::Usage(format!("--{what} expects FIELD:A:B, got '{spec}'"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [field, a, b] = parts[..] else {
        return Err(usage());
    };
    let field = parse_field_spec(field).map_err(CliError::Usage)?;
    let a: usize = a.parse().map_err(|_| usage())?;
    let b: u64 = b.parse().map_err(|_| usage())?;
    if a == 0 || b == 0 {
        return Err(usage());
    }
    Ok((Arc::new(field), a, b))
}

#[derive(Serialize)]
struct BenchRow {
    instance: usize,
    field: String,
    equation: String,
    n_bar_formula: u64,
    n_bar_bruteforce: u64,
    dual_star_size: u64,
    formula_ms: f64,
    bruteforce_ms: f64,
    speedup: f64,
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let limits = args.limits.limits(DEFAULT_BENCH_LIMIT);
    let forms: Vec<MonomialForm> = if let Some(spec) = &args.diagonal {
        let (field, s, m) = parse_triple(spec, "diagonal")?;
        vec![MonomialForm::diagonal(field, s, m)?]
    } else if let Some(spec) = &args.random {
        let (field, s, r) = parse_triple(spec, "random")?;
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let max_exp = args.max_exp.unwrap_or(field.q() as u64 + 1);
        (0..args.instances)
            .map(|_| random_form(field.clone(), s, r as usize, max_exp, &mut rng))
            .collect::<Result<_, _>>()?
    } else {
        let path = args.file.as_ref().expect("clap requires an input");
        vec![load_form(path)?]
    };

    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (i, form) in forms.iter().enumerate() {
        let started = Instant::now();
        let formula = n_bar_value(form, &limits)?;
        let formula_time = started.elapsed();
        let started = Instant::now();
        let brute = n_bar_bruteforce(form, &limits)?;
        let brute_time = started.elapsed();
        if brute != formula.n_bar {
            mismatches.push(format!("instance {}: formula {} != brute force {brute}", i + 1, formula.n_bar));
        }
        let formula_ms = formula_time.as_secs_f64() * 1e3;
        let bruteforce_ms = brute_time.as_secs_f64() * 1e3;
        rows.push(BenchRow {
            instance: i + 1,
            field: form.field().spec(),
            equation: Display(form).to_string(),
            n_bar_formula: formula.n_bar,
            n_bar_bruteforce: brute,
            dual_star_size: formula.dual_star_size,
            formula_ms,
            bruteforce_ms,
            speedup: bruteforce_ms / formula_ms.max(1e-6),
        });
    }

    if args.json {
        let mut s = serde_json::to_string_pretty(&rows).expect("plain rows serialize");
        s.push('\n');
        write_out(out, &s)?;
    } else {
        let mut s = String::new();
        for row in &rows {
            s.push_str(&format!(
                "instance: {}\nfield: {}\nequation: {}\nn_bar_formula: {}\nn_bar_bruteforce: {}\nagree: {}\ndual_star_size: {}\ntiming.formula_ms: {:.3}\ntiming.bruteforce_ms: {:.3}\ntiming.speedup: {:.1}\n\n",
                row.instance,
                row.field,
                row.equation,
                row.n_bar_formula,
                row.n_bar_bruteforce,
                if row.n_bar_formula == row.n_bar_bruteforce { "yes" } else { "no" },
                row.dual_star_size,
                row.formula_ms,
                row.bruteforce_ms,
                row.speedup,
            ));
        }
        write_out(out, &s)?;
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(mismatches.join("; ")))
    }
}

/// Components that vanish exactly come out as ~1e-15 of rounding noise, which
/// would make twelve-digit output platform-dependent.
fn clean(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        0.0
    } else {
        x
    }
}

fn gauss(args: &GaussArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let field = parse_field_spec(&args.field).map_err(CliError::Usage)?;
    let u = parse_element(&field, &args.u).map_err(CliError::Usage)?;
    let u = AdditiveCharParam::new(u)?;
    let chars = Characters::new(&field);
    let mut s = String::new();
    for t in 0..field.n() {
        let g = chars.gauss_sum(MultCharExp::new(t as i64, field.n()), u);
        s.push_str(&format!(
            "{t}\t{}\t{}\t{}\n",
            report::general(clean(g.re), 12),
            report::general(clean(g.im), 12),
            report::general(g.norm_sqr(), 12),
        ));
    }
    write_out(out, &s)
}
