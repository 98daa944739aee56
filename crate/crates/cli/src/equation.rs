//! Line-oriented equation files.
//!
//! ```text
//! # x1^2 + x2^2 over F_5
//! field 5
//! vars 2
//! term 1 2,0
//! term 1 0,2
//! ```
//!
//! `field` takes `p` or `p^e`, `vars` the number of variables `s`, and each
//! `term` a coefficient (`g^k` for a power of the field generator, or an
//! integer mapped into the prime field) followed by `s` comma-separated
//! exponents. `field` and `vars` must precede the first `term`. Blank lines
//! and `#` comments are ignored.

use std::fmt;
use std::sync::Arc;

use monocount::{build_field, ExponentMatrix, FieldCtx, FieldElement, MonomialForm};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// A whitespace-separated token and its 1-based column.
#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &content[s..i],
                    col: content[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

struct Ctx {
    line: usize,
}

impl Ctx {
    fn err<T>(&self, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            col,
            message: message.into(),
        })
    }
}

/// Parses `p` or `p^e` into a field context.
pub fn parse_field_spec(spec: &str) -> Result<FieldCtx, String> {
    let (p, e) = match spec.split_once('^') {
        Some((p, e)) => (p, e),
        None => (spec, "1"),
    };
    let p: u64 = p.parse().map_err(|_| format!("invalid characteristic '{p}'"))?;
    let e: u32 = e.parse().map_err(|_| format!("invalid degree '{e}'"))?;
    build_field(p, e).map_err(|err| err.to_string())
}

/// Parses `g^k`, `g`, or a signed integer. Zero is returned as is; callers
/// decide whether it is allowed.
pub fn parse_element(field: &FieldCtx, text: &str) -> Result<FieldElement, String> {
    if text == "g" {
        return Ok(field.generator());
    }
    if let Some(k) = text.strip_prefix("g^") {
        let k: u64 = k
            .parse()
            .map_err(|_| format!("invalid generator exponent in '{text}'"))?;
        return Ok(field.gen_pow(k));
    }
    let v: i64 = text
        .parse()
        .map_err(|_| format!("expected an integer or g^k, found '{text}'"))?;
    Ok(field.from_int(v))
}

pub fn parse_equation(text: &str) -> Result<MonomialForm, ParseError> {
    let mut field: Option<Arc<FieldCtx>> = None;
    let mut vars: Option<usize> = None;
    let mut columns: Vec<Vec<u64>> = Vec::new();
    let mut coeffs = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let ctx = Ctx { line: idx + 1 };
        last_line = idx + 1;
        let toks = tokens(line);
        let Some((key, args)) = toks.split_first() else {
            continue;
        };
        let arity = |n: usize| -> Result<(), ParseError> {
            if args.len() != n {
                let col = args.get(n).map_or(key.col, |t| t.col);
                return ctx.err(
                    col,
                    format!("'{}' takes {n} argument(s), found {}", key.text, args.len()),
                );
            }
            Ok(())
        };
        match key.text {
            "field" => {
                arity(1)?;
                if field.is_some() {
                    return ctx.err(key.col, "duplicate 'field'");
                }
                let f = parse_field_spec(args[0].text).or_else(|m| ctx.err(args[0].col, m))?;
                field = Some(Arc::new(f));
            }
            "vars" => {
                arity(1)?;
                if vars.is_some() {
                    return ctx.err(key.col, "duplicate 'vars'");
                }
                let s: usize = args[0]
                    .text
                    .parse()
                    .or_else(|_| ctx.err(args[0].col, format!("invalid variable count '{}'", args[0].text)))?;
                if s == 0 {
                    return ctx.err(args[0].col, "need at least one variable");
                }
                vars = Some(s);
            }
            "term" => {
                arity(2)?;
                let Some(f) = &field else {
                    return ctx.err(key.col, "'term' before 'field'");
                };
                let Some(s) = vars else {
                    return ctx.err(key.col, "'term' before 'vars'");
                };
                let (c, e) = (args[0], args[1]);
                let a = parse_element(f, c.text).or_else(|m| ctx.err(c.col, m))?;
                if a.is_zero() {
                    return ctx.err(c.col, "zero coefficient");
                }
                let mut exps = Vec::with_capacity(s);
                let mut offset = 0;
                for part in e.text.split(',') {
                    let v: u64 = part
                        .parse()
                        .or_else(|_| ctx.err(e.col + offset, format!("invalid exponent '{part}'")))?;
                    exps.push(v);
                    offset += part.chars().count() + 1;
                }
                if exps.len() != s {
                    return ctx.err(e.col, format!("expected {s} exponents, found {}", exps.len()));
                }
                if exps.iter().all(|&x| x == 0) {
                    return ctx.err(e.col, "constant term (all exponents zero)");
                }
                columns.push(exps);
                coeffs.push(a);
            }
            other => return ctx.err(key.col, format!("unknown key '{other}'")),
        }
    }

    let end = Ctx { line: last_line.max(1) };
    let Some(field) = field else {
        return end.err(1, "missing 'field'");
    };
    if vars.is_none() {
        return end.err(1, "missing 'vars'");
    }
    if columns.is_empty() {
        return end.err(1, "no terms");
    }
    let matrix = ExponentMatrix::from_columns(&columns).or_else(|e| end.err(1, e.to_string()))?;
    MonomialForm::new(field, matrix, coeffs).or_else(|e| end.err(1, e.to_string()))
}

/// Inverse of [`parse_equation`]: prime-field coefficients as residues,
/// extension-field coefficients as `g^k`.
pub fn format_equation(form: &MonomialForm) -> String {
    let field = form.field();
    let mut out = format!("field {}\nvars {}\n", field.spec(), form.s());
    for (i, &a) in form.coeffs().iter().enumerate() {
        let exps: Vec<String> = form.matrix().column(i).iter().map(u64::to_string).collect();
        out.push_str(&format!("term {} {}\n", field.format_element(a), exps.join(",")));
    }
    out
}

/// Human-readable polynomial, e.g. `2*x1^2*x2 + x3`.
pub struct Display<'a>(pub &'a MonomialForm);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = self.0;
        let field = form.field();
        for (i, &a) in form.coeffs().iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut factors = Vec::new();
            if a != field.one() {
                factors.push(field.format_element(a));
            }
            for (j, &m) in form.matrix().column(i).iter().enumerate() {
                match m {
                    0 => {}
                    1 => factors.push(format!("x{}", j + 1)),
                    _ => factors.push(format!("x{}^{m}", j + 1)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
