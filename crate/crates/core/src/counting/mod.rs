//! Exponential sums and solution counts for monomial forms
//! `𝓕(x) = Σ_i a_i·x_1^{m_{1i}}⋯x_s^{m_{si}}`.
//!
//! The count of zeros with every coordinate nonzero is
//!
//! ```text
//! N̄ = ( (q-1)^s + (q-1)^{s-r+1} · Σ_{χ ∈ G̃*} χ̄(a)·𝒢₀(χ) ) / q
//! ```
//!
//! where `G̃*` is the λ-trivial part of the group of characters orthogonal to
//! the image of the monomial map (see [`crate::character_lattice`]) and
//! `𝒢₀(χ) = Π_i g(χ_i)` uses the base additive character. The coefficient
//! factor is conjugated: `Σ_y χ(y)ψ(a·y) = χ̄(a)·g(χ)`, and the same
//! conjugation carries through the sum over additive characters.
//!
//! The total count over `K^s` adds, for every set `Z` of coordinates forced to
//! zero, the nonzero count of the form that survives (monomials touching `Z`
//! vanish), or `(q-1)^{s-|Z|}` when nothing survives.

mod direct;
pub mod sample;

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

pub use direct::{
    n_bar_bruteforce, n_total_bruteforce, s_bar_direct, s_bar_via_image, value_distribution,
};

use crate::character_lattice::{
    dual_group, kernel_size_d, restrict_lambda_trivial, DualGroupBasis,
    ExponentMatrix,
};
use crate::characters::{AdditiveCharParam, Characters, ComplexValue, GaussTable};
use crate::error::{Error, Result};
use crate::finite_field::{FieldCtx, FieldElement};

/// Upper bound on any single enumeration (points, characters or subsets).
/// `None` disables the check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_work: Option<u64>,
}

impl Limits {
    pub const DEFAULT_MAX_WORK: u64 = 10_000_000;

    pub fn new(max_work: u64) -> Self {
        Limits {
            max_work: Some(max_work),
        }
    }

    pub fn unlimited() -> Self {
        Limits { max_work: None }
    }

    pub fn check(&self, what: &str, size: u128) -> Result<()> {
        match self.max_work {
            Some(limit) if size > limit as u128 => Err(Error::LimitExceeded {
                what: what.to_string(),
                size,
                limit,
            }),
            _ => Ok(()),
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::new(Self::DEFAULT_MAX_WORK)
    }
}

/// A monomial form over a fixed field.
#[derive(Clone, Debug)]
pub struct MonomialForm {
    field: Arc<FieldCtx>,
    matrix: ExponentMatrix,
    coeffs: Vec<FieldElement>,
}

impl MonomialForm {
    pub fn new(field: Arc<FieldCtx>, matrix: ExponentMatrix, coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.len() != matrix.r() {
            return Err(Error::InvalidForm(format!(
                "{} coefficients for {} monomials",
                coeffs.len(),
                matrix.r()
            )));
        }
        for (i, &a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                return Err(Error::InvalidForm(format!("coefficient {i} is zero")));
            }
            field.from_index(a.index())?;
        }
        Ok(MonomialForm {
            field,
            matrix,
            coeffs,
        })
    }

    /// `x_1^m + ⋯ + x_s^m` with unit coefficients.
    pub fn diagonal(field: Arc<FieldCtx>, s: usize, m: u64) -> Result<Self> {
        let cols: Vec<Vec<u64>> = (0..s)
            .map(|i| (0..s).map(|j| if i == j { m } else { 0 }).collect())
            .collect();
        let matrix = ExponentMatrix::from_columns(&cols)?;
        MonomialForm::new(field, matrix, vec![FieldElement::ONE; s])
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn matrix(&self) -> &ExponentMatrix {
        &self.matrix
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn s(&self) -> usize {
        self.matrix.s()
    }

    pub fn r(&self) -> usize {
        self.matrix.r()
    }

    /// Entries `m_{ji}` divisible by `q - 1` (zeros included). The derivation
    /// is stated for forms without them; counts are still checked against
    /// enumeration when they occur.
    pub fn hypothesis_violations(&self) -> usize {
        let n = self.field.n() as u64;
        self.matrix.rows().flatten().filter(|&&m| m % n == 0).count()
    }

    /// `𝓕(x)`, with `0^0 = 1`.
    pub fn eval(&self, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.s() {
            return Err(Error::InvalidForm(format!(
                "point has {} coordinates, form has {} variables",
                x.len(),
                self.s()
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[FieldElement]) -> FieldElement {
        let f = &*self.field;
        (0..self.r()).fold(FieldElement::ZERO, |acc, i| {
            let term = x
                .iter()
                .enumerate()
                .fold(self.coeffs[i], |t, (j, &xj)| f.mul(t, f.pow(xj, self.matrix.get(j, i))));
            f.add(acc, term)
        })
    }

    /// Form left after forcing the coordinates in `zeroed` to zero: monomials
    /// with a positive exponent on a zeroed coordinate vanish, zeroed rows are
    /// dropped. `None` if no monomial survives.
    fn restrict(&self, zeroed: &[bool]) -> Option<MonomialForm> {
        let keep_rows: Vec<usize> = (0..self.s()).filter(|&j| !zeroed[j]).collect();
        let survivors: Vec<usize> = (0..self.r())
            .filter(|&i| (0..self.s()).all(|j| !zeroed[j] || self.matrix.get(j, i) == 0))
            .collect();
        if survivors.is_empty() {
            return None;
        }
        let rows = keep_rows
            .iter()
            .map(|&j| survivors.iter().map(|&i| self.matrix.get(j, i)).collect())
            .collect();
        let matrix = ExponentMatrix::new(rows).expect("surviving monomials are non-constant");
        let coeffs = survivors.iter().map(|&i| self.coeffs[i]).collect();
        Some(MonomialForm {
            field: Arc::clone(&self.field),
            matrix,
            coeffs,
        })
    }
}

impl PartialEq for MonomialForm {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p()
            && self.field.e() == other.field.e()
            && self.matrix == other.matrix
            && self.coeffs == other.coeffs
    }
}

/// `𝓕(x)` for a point of `K^s`.
pub fn eval_form(form: &MonomialForm, x: &[FieldElement]) -> Result<FieldElement> {
    form.eval(x)
}

/// `Σ_{χ ∈ basis} χ̄(a)·Π_i g(χ_i)`, accumulated per leading-generator chunk
/// and combined in chunk order.
fn twisted_gauss_sum(
    basis: &DualGroupBasis,
    table: &GaussTable,
    chars: &Characters<'_>,
    coeff_logs: &[u64],
) -> ComplexValue {
    let n = basis.n();
    let partials: Vec<Complex64> = (0..basis.leading_order())
        .into_par_iter()
        .map(|lead| {
            let mut acc = Complex64::new(0.0, 0.0);
            basis.chunk(lead).visit(|t| {
                let phase = t
                    .iter()
                    .zip(coeff_logs)
                    .map(|(&ti, &la)| ti as u64 * la % n)
                    .sum::<u64>()
                    % n;
                let conj_phase = ((n - phase) % n) as u32;
                let gauss: Complex64 = t.iter().map(|&ti| table.get_raw(ti)).product();
                acc += chars.mult_root(conj_phase) * gauss;
            });
            acc
        })
        .collect();
    partials.into_iter().sum()
}

fn coeff_logs(form: &MonomialForm) -> Vec<u64> {
    form.coeffs
        .iter()
        .map(|&a| form.field.log_nonzero(a) as u64)
        .collect()
}

/// `S̄(ψ_u) = (q-1)^{s-r} Σ_{χ ∈ G̃} χ̄(a)·𝒢_{ψ_u}(χ)`.
pub fn s_bar_via_characters(form: &MonomialForm, u: AdditiveCharParam, limits: &Limits) -> Result<ComplexValue> {
    let field = form.field();
    let n = field.n() as u64;
    let dual = dual_group(form.matrix(), n)?;
    limits.check("dual group G~", dual.size() as u128)?;
    let chars = Characters::new(field);
    let table = chars.gauss_table(u);
    let sum = twisted_gauss_sum(&dual, &table, &chars, &coeff_logs(form));
    let scale = (n as f64).powi(form.s() as i32 - form.r() as i32);
    Ok(sum * scale)
}

/// Group data and the character sum behind one evaluation of `N̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct NBarEvaluation {
    pub n_bar: u64,
    /// `Σ_{χ ∈ G̃*} χ̄(a)·𝒢₀(χ)`
    pub char_sum: ComplexValue,
    /// Unrounded `N̄`.
    pub raw: f64,
    pub rounding_residual: f64,
    pub tolerance: f64,
    pub d: u64,
    pub dual_size: u64,
    pub dual_star_size: u64,
    pub invariant_factors: Vec<u64>,
    pub lattice_time: Duration,
    pub sum_time: Duration,
}

/// Rounding tolerance for `N̄`: `1e-6 · max(1, (q-1)^{s/2})`.
pub fn n_bar_tolerance(q: u32, s: usize) -> f64 {
    1e-6 * 1f64.max(((q - 1) as f64).powf(s as f64 / 2.0))
}

/// `N̄` from the character-sum formula, rounded with a mandatory residual
/// check.
pub fn n_bar_value(form: &MonomialForm, limits: &Limits) -> Result<NBarEvaluation> {
    let field = form.field();
    let q = field.q();
    let n = field.n() as u64;
    let (s, r) = (form.s(), form.r());

    let points = (n as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if points > 1u128 << 53 {
        return Err(Error::PrecisionExhausted(format!("(q-1)^s = {n}^{s}")));
    }

    let started = Instant::now();
    let dual = dual_group(form.matrix(), n)?;
    let star = restrict_lambda_trivial(&dual, n)?;
    let d = kernel_size_d(form.matrix(), n)?;
    let lattice_time = started.elapsed();
    limits.check("character group G~*", star.size() as u128)?;

    let started = Instant::now();
    let chars = Characters::new(field);
    let table = chars.gauss_table(AdditiveCharParam::base());
    let char_sum = twisted_gauss_sum(&star, &table, &chars, &coeff_logs(form));
    let sum_time = started.elapsed();

    let scale = (n as f64).powi(s as i32 - r as i32 + 1) / q as f64;
    let raw = (points as f64) / q as f64 + scale * char_sum.re;
    let imag = (scale * char_sum.im).abs().max(char_sum.im.abs());
    let tolerance = n_bar_tolerance(q, s);
    let rounded = raw.round();
    let rounding_residual = (raw - rounded).abs();
    if rounding_residual >= tolerance {
        return Err(Error::ResidualTooLarge {
            what: "rounding of N̄",
            residual: rounding_residual,
            tolerance,
        });
    }
    if imag >= tolerance {
        return Err(Error::ResidualTooLarge {
            what: "imaginary part of the character sum",
            residual: imag,
            tolerance,
        });
    }
    if rounded < 0.0 || rounded > points as f64 {
        return Err(Error::Mismatch(format!(
            "N̄ = {rounded} outside [0, (q-1)^s = {points}]"
        )));
    }

    Ok(NBarEvaluation {
        n_bar: rounded as u64,
        char_sum,
        raw,
        rounding_residual,
        tolerance,
        d,
        dual_size: dual.size(),
        dual_star_size: star.size(),
        invariant_factors: dual.invariant_factors().to_vec(),
        lattice_time,
        sum_time,
    })
}

/// Total count over `K^s` by inclusion–exclusion on the zeroed coordinates.
pub fn n_total_inclusion_exclusion(form: &MonomialForm, limits: &Limits) -> Result<u64> {
    let s = form.s();
    let n = form.field().n() as u64;
    if s >= 64 {
        return Err(Error::LimitExceeded {
            what: "inclusion-exclusion over 2^s coordinate subsets".into(),
            size: u128::MAX,
            limit: limits.max_work.unwrap_or(u64::MAX),
        });
    }
    limits.check("inclusion-exclusion over 2^s coordinate subsets", 1u128 << s)?;
    let all = (form.field().q() as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if all > 1u128 << 53 {
        return Err(Error::PrecisionExhausted(format!("q^s = {}^{s}", form.field().q())));
    }

    let overflow = Error::Overflow("total count");
    let mut total = 0u64;
    for mask in 0u64..(1 << s) {
        let zeroed: Vec<bool> = (0..s).map(|j| mask >> j & 1 == 1).collect();
        let free = s - mask.count_ones() as usize;
        let part = match form.restrict(&zeroed) {
            None => n.checked_pow(free as u32).ok_or(overflow.clone())?,
            Some(sub) => n_bar_value(&sub, limits)?.n_bar,
        };
        total = total.checked_add(part).ok_or(overflow.clone())?;
    }
    Ok(total)
}

/// Wall-clock time spent in each phase of [`n_bar_formula`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Timings {
    pub lattice: Duration,
    pub character_sum: Duration,
    pub total_count: Duration,
}

/// Outcome of [`n_bar_formula`].
#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub n_bar: u64,
    pub n_total: u64,
    pub char_sum: ComplexValue,
    pub rounding_residual: f64,
    pub tolerance: f64,
    pub d: u64,
    pub dual_size: u64,
    pub dual_star_size: u64,
    pub invariant_factors: Vec<u64>,
    pub timings: Timings,
    pub warnings: Vec<String>,
}

/// `N̄` by the character-sum formula together with the total count `N`.
pub fn n_bar_formula(form: &MonomialForm, limits: &Limits) -> Result<CountReport> {
    let mut warnings = Vec::new();
    let violations = form.hypothesis_violations();
    if violations > 0 {
        let zeros = form.matrix().rows().flatten().filter(|&&m| m == 0).count();
        let msg = format!(
            "{violations} exponent(s) divisible by q-1 = {} ({zeros} of them zero); outside the classical hypothesis, counted anyway",
            form.field().n()
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let eval = n_bar_value(form, limits)?;
    let started = Instant::now();
    let n_total = n_total_inclusion_exclusion(form, limits)?;
    let total_time = started.elapsed();

    Ok(CountReport {
        n_bar: eval.n_bar,
        n_total,
        char_sum: eval.char_sum,
        rounding_residual: eval.rounding_residual,
        tolerance: eval.tolerance,
        d: eval.d,
        dual_size: eval.dual_size,
        dual_star_size: eval.dual_star_size,
        invariant_factors: eval.invariant_factors,
        timings: Timings {
            lattice: eval.lattice_time,
            character_sum: eval.sum_time,
            total_count: total_time,
        },
        warnings,
    })
}

/// The three sides of `Σ_{ψ ≠ 1} S̄(ψ) = q·N̄ - (q-1)^s = (q-1)^{s-r+1} Σ_{G̃*} χ̄(a)𝒢₀(χ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiSumCheck {
    /// `Σ_{u ∈ K⁰} S̄(ψ_u)`, each by enumeration.
    pub direct: ComplexValue,
    /// `q·N̄ - (q-1)^s` with `N̄` by enumeration.
    pub counted: i128,
    /// Character side with `χ̄(a)`.
    pub characters: ComplexValue,
    /// Character side with `χ(a)` in place of `χ̄(a)`; kept for comparison
    /// only, it does not enter the check.
    pub characters_unconjugated: ComplexValue,
}

impl PsiSumCheck {
    pub fn tolerance(&self) -> f64 {
        1e-6 * 1f64.max(self.counted.unsigned_abs() as f64)
    }

    pub fn unconjugated_agrees(&self) -> bool {
        (self.characters_unconjugated - self.counted as f64).norm() <= self.tolerance()
    }
}

/// Evaluates all sides of the sum over nontrivial additive characters and
/// fails if the conjugated character side or the direct side disagrees with
/// the enumerated count.
pub fn sum_over_psi_check(form: &MonomialForm, limits: &Limits) -> Result<PsiSumCheck> {
    let field = form.field();
    let q = field.q() as i128;
    let n = field.n() as u64;
    let (s, r) = (form.s(), form.r());
    let work = (n as u128).checked_pow(s as u32 + 1).unwrap_or(u128::MAX);
    limits.check("sum of S̄ over all q-1 additive characters", work)?;

    let mut direct = Complex64::new(0.0, 0.0);
    for u in field.elements().skip(1) {
        direct += s_bar_direct(form, AdditiveCharParam::new(u)?, limits)?;
    }
    let n_bar = n_bar_bruteforce(form, limits)? as i128;
    let counted = q * n_bar - (n as i128).pow(s as u32);

    let dual = dual_group(form.matrix(), n)?;
    let star = restrict_lambda_trivial(&dual, n)?;
    limits.check("character group G~*", star.size() as u128)?;
    let chars = Characters::new(field);
    let table = chars.gauss_table(AdditiveCharParam::base());
    let logs = coeff_logs(form);
    let neg_logs: Vec<u64> = logs.iter().map(|&l| (n - l) % n).collect();
    let scale = (n as f64).powi(s as i32 - r as i32 + 1);
    let characters = twisted_gauss_sum(&star, &table, &chars, &logs) * scale;
    let characters_unconjugated = twisted_gauss_sum(&star, &table, &chars, &neg_logs) * scale;

    let check = PsiSumCheck {
        direct,
        counted,
        characters,
        characters_unconjugated,
    };
    let tol = check.tolerance();
    if (check.direct - counted as f64).norm() > tol {
        return Err(Error::Mismatch(format!(
            "Σ_u S̄(ψ_u) = {} but q·N̄ - (q-1)^s = {counted}",
            check.direct
        )));
    }
    if (check.characters - counted as f64).norm() > tol {
        return Err(Error::Mismatch(format!(
            "character side {} but q·N̄ - (q-1)^s = {counted}",
            check.characters
        )));
    }
    Ok(check)
}
