//! Text and JSON rendering. Text reports are `key: value` lines; lines whose
//! key starts with `timing.` are the only machine-dependent ones.

use std::fmt::Write as _;
use std::time::Duration;

use monocount::{CountReport, MonomialForm, PsiSumCheck};
use serde::Serialize;

use crate::equation::Display;

/// Fixed nine decimals, without a sign on zero.
pub fn fixed(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// `%.{digits}g` as in C.
pub fn general(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn millis(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

/// Extra sections of a text count report.
#[derive(Default)]
pub struct Sections<'a> {
    pub explain: bool,
    pub verify: Option<&'a Verification>,
}

pub struct Verification {
    pub n_bar_bruteforce: u64,
    /// `None` when `q^s` exceeds the limit.
    pub n_total_bruteforce: Option<u64>,
    pub psi: PsiSumCheck,
    pub failures: Vec<String>,
}

pub fn count_text(form: &MonomialForm, report: &CountReport, sections: Sections<'_>) -> String {
    let mut out = String::new();
    let w = &mut out;
    let field = form.field();
    writeln!(w, "field: {}", field.spec()).unwrap();
    writeln!(w, "equation: {}", Display(form)).unwrap();
    writeln!(w, "s: {}", form.s()).unwrap();
    writeln!(w, "r: {}", form.r()).unwrap();
    writeln!(w, "n_bar: {}", report.n_bar).unwrap();
    writeln!(w, "n_total: {}", report.n_total).unwrap();
    writeln!(w, "char_sum_re: {}", fixed(report.char_sum.re)).unwrap();
    writeln!(w, "char_sum_im: {}", fixed(report.char_sum.im)).unwrap();
    writeln!(w, "residual: {}", fixed(report.rounding_residual)).unwrap();
    writeln!(w, "tolerance: {}", fixed(report.tolerance)).unwrap();
    for warning in &report.warnings {
        writeln!(w, "warning: {warning}").unwrap();
    }
    if sections.explain {
        writeln!(w, "d: {}", report.d).unwrap();
        writeln!(w, "dual_size: {}", report.dual_size).unwrap();
        writeln!(w, "dual_star_size: {}", report.dual_star_size).unwrap();
        let factors: Vec<String> = report.invariant_factors.iter().map(u64::to_string).collect();
        writeln!(w, "invariant_factors: {}", factors.join(" ")).unwrap();
    }
    if let Some(v) = sections.verify {
        writeln!(w, "verify.n_bar_bruteforce: {}", v.n_bar_bruteforce).unwrap();
        match v.n_total_bruteforce {
            Some(n) => writeln!(w, "verify.n_total_bruteforce: {n}").unwrap(),
            None => writeln!(w, "verify.n_total_bruteforce: skipped (limit)").unwrap(),
        }
        writeln!(w, "verify.psi_sum_counted: {}", v.psi.counted).unwrap();
        writeln!(w, "verify.psi_sum_direct: {}", fixed(v.psi.direct.re)).unwrap();
        writeln!(w, "verify.psi_sum_characters: {}", fixed(v.psi.characters.re)).unwrap();
        writeln!(
            w,
            "verify.psi_sum_unconjugated: {}",
            fixed(v.psi.characters_unconjugated.re)
        )
        .unwrap();
        for failure in &v.failures {
            writeln!(w, "verify.failure: {failure}").unwrap();
        }
        let status = if v.failures.is_empty() { "ok" } else { "FAILED" };
        writeln!(w, "verify: {status}").unwrap();
    }
    writeln!(w, "timing.lattice_ms: {}", millis(report.timings.lattice)).unwrap();
    writeln!(w, "timing.character_sum_ms: {}", millis(report.timings.character_sum)).unwrap();
    writeln!(w, "timing.total_count_ms: {}", millis(report.timings.total_count)).unwrap();
    out
}

#[derive(Serialize)]
struct JsonTimings {
    lattice_ms: f64,
    character_sum_ms: f64,
    total_count_ms: f64,
}

#[derive(Serialize)]
struct JsonReport {
    n_bar: u64,
    n_total: u64,
    d: u64,
    dual_size: u64,
    dual_star_size: u64,
    char_sum_re: f64,
    char_sum_im: f64,
    residual: f64,
    timings: JsonTimings,
}

pub fn count_json(report: &CountReport) -> String {
    let ms = |d: Duration| d.as_secs_f64() * 1e3;
    let json = JsonReport {
        n_bar: report.n_bar,
        n_total: report.n_total,
        d: report.d,
        dual_size: report.dual_size,
        dual_star_size: report.dual_star_size,
        char_sum_re: report.char_sum.re,
        char_sum_im: report.char_sum.im,
        residual: report.rounding_residual,
        timings: JsonTimings {
            lattice_ms: ms(report.timings.lattice),
            character_sum_ms: ms(report.timings.character_sum),
            total_count_ms: ms(report.timings.total_count),
        },
    };
    let mut s = serde_json::to_string_pretty(&json).expect("plain struct serializes");
    s.push('\n');
    s
}
