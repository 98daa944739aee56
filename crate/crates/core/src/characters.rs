//! Additive characters `ψ_u`, multiplicative characters `χ_t`, Gauss sums and
//! their products over tuples of characters.
//!
//! Multiplicative characters are indexed by an exponent against the field's
//! fixed generator: `χ_t(g^k) = exp(2πi·t·k/(q-1))`, extended by `χ_t(0) = 0`
//! for every `t` (the trivial one included). Additive characters are
//! `ψ_u(x) = exp(2πi·Tr(u·x)/p)` for nonzero `u`; `ψ_1` is the base character.
//!
//! Changing the additive character rescales a Gauss sum by a conjugated
//! character value: `g_{ψ_u}(χ) = χ̄(u)·g_{ψ_1}(χ)`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::finite_field::{FieldCtx, FieldElement};

/// Character values and character sums.
pub type ComplexValue = Complex64;

/// Multiplicative character `χ_t` of `K⁰`, stored as `t mod (q - 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultCharExp(u32);

impl MultCharExp {
    /// `χ_t` for `t` reduced mod `n = q - 1`.
    pub fn new(t: i64, n: u32) -> Self {
        MultCharExp(t.rem_euclid(n as i64) as u32)
    }

    pub fn trivial() -> Self {
        MultCharExp(0)
    }

    pub fn exponent(self) -> u32 {
        self.0
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }

    /// The conjugate (inverse) character.
    pub fn conj(self, n: u32) -> Self {
        MultCharExp::new(-(self.0 as i64), n)
    }
}

/// Parameter `u ≠ 0` of the additive character `ψ_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdditiveCharParam(FieldElement);

impl AdditiveCharParam {
    pub fn new(u: FieldElement) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::ZeroAdditiveParameter);
        }
        Ok(AdditiveCharParam(u))
    }

    /// `ψ₀ = ψ_1`.
    pub fn base() -> Self {
        AdditiveCharParam(FieldElement::ONE)
    }

    pub fn scale(self) -> FieldElement {
        self.0
    }
}

/// Character `χ = (χ_{t_1}, …, χ_{t_r})` of `(K⁰)^r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharTuple(Vec<u32>);

impl CharTuple {
    pub fn new(ts: &[i64], n: u32) -> Self {
        CharTuple(ts.iter().map(|&t| MultCharExp::new(t, n).0).collect())
    }

    /// Wraps exponents that are already reduced mod `n`.
    pub(crate) fn from_reduced(ts: Vec<u32>) -> Self {
        CharTuple(ts)
    }

    pub fn trivial(r: usize) -> Self {
        CharTuple(vec![0; r])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn component(&self, i: usize) -> MultCharExp {
        MultCharExp(self.0[i])
    }

    pub fn conj(&self, n: u32) -> Self {
        CharTuple(self.0.iter().map(|&t| MultCharExp(t).conj(n).0).collect())
    }
}

/// Exponent of `λ = χ_1⋯χ_r`.
pub fn lambda_exponent(chi: &CharTuple, q: u32) -> MultCharExp {
    let n = (q - 1) as u64;
    let sum: u64 = chi.0.iter().map(|&t| t as u64).sum();
    MultCharExp((sum % n) as u32)
}

fn unit_root(k: u64, m: u64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * k as f64 / m as f64).sin_cos();
    Complex64::new(c, s)
}

/// Root-of-unity tables for one field, built once and then read-only.
#[derive(Clone, Debug)]
pub struct Characters<'a> {
    field: &'a FieldCtx,
    /// `exp(2πi·j/p)`
    additive_roots: Vec<Complex64>,
    /// `exp(2πi·k/(q-1))`
    mult_roots: Vec<Complex64>,
}

impl<'a> Characters<'a> {
    pub fn new(field: &'a FieldCtx) -> Self {
        let p = field.p() as u64;
        let n = field.n() as u64;
        Characters {
            field,
            additive_roots: (0..p).map(|j| unit_root(j, p)).collect(),
            mult_roots: (0..n).map(|k| unit_root(k, n)).collect(),
        }
    }

    pub fn field(&self) -> &'a FieldCtx {
        self.field
    }

    /// `exp(2πi·k/(q-1))` for `k < q - 1`.
    #[inline]
    pub(crate) fn mult_root(&self, k: u32) -> Complex64 {
        self.mult_roots[k as usize]
    }

    #[inline]
    pub fn additive_char_eval(&self, u: AdditiveCharParam, x: FieldElement) -> ComplexValue {
        let ux = self.field.mul(u.0, x);
        self.additive_roots[self.field.trace(ux) as usize]
    }

    #[inline]
    pub fn mult_char_eval(&self, t: MultCharExp, x: FieldElement) -> ComplexValue {
        if x.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.field.n() as u64;
        let k = self.field.log_nonzero(x) as u64;
        self.mult_roots[((t.0 as u64 * k) % n) as usize]
    }

    /// `g(χ_t) = Σ_{x ∈ K} χ_t(x)·ψ_u(x)`, summed over elements in index order.
    pub fn gauss_sum(&self, t: MultCharExp, u: AdditiveCharParam) -> ComplexValue {
        self.field
            .elements()
            .skip(1)
            .map(|x| self.mult_char_eval(t, x) * self.additive_char_eval(u, x))
            .sum()
    }

    /// `χ̄_t(u)·g_{ψ₀}(χ_t)`, the base Gauss sum moved to `ψ_u`.
    pub fn gauss_sum_rescaled(&self, t: MultCharExp, u: FieldElement) -> Result<ComplexValue> {
        if u.is_zero() {
            return Err(Error::ZeroAdditiveParameter);
        }
        let base = self.gauss_sum(t, AdditiveCharParam::base());
        Ok(self.mult_char_eval(t, u).conj() * base)
    }

    /// `𝒢(χ) = g(χ_1)⋯g(χ_r)`.
    pub fn product_gauss_sum(&self, chi: &CharTuple, u: AdditiveCharParam) -> ComplexValue {
        (0..chi.len())
            .map(|i| self.gauss_sum(chi.component(i), u))
            .product()
    }

    /// `χ(y) = χ_1(y_1)⋯χ_r(y_r)`; zero if any `y_i` is zero.
    ///
    /// Panics if `y` and `chi` differ in length.
    pub fn char_tuple_eval(&self, chi: &CharTuple, y: &[FieldElement]) -> ComplexValue {
        assert_eq!(chi.len(), y.len(), "character and point lengths differ");
        if y.iter().any(|v| v.is_zero()) {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.field.n() as u64;
        let phase = chi
            .0
            .iter()
            .zip(y)
            .map(|(&t, &v)| t as u64 * self.field.log_nonzero(v) as u64 % n)
            .sum::<u64>()
            % n;
        self.mult_roots[phase as usize]
    }

    /// All `q - 1` Gauss sums for `ψ_u` at once.
    ///
    /// `g(χ_t) = Σ_k ψ_u(g^k)·ω^{tk}` is an unnormalized inverse DFT of the
    /// sequence `ψ_u(g^k)`, so the whole table costs one FFT of length `q - 1`.
    pub fn gauss_table(&self, u: AdditiveCharParam) -> GaussTable {
        let n = self.field.n() as usize;
        let mut buf: Vec<Complex64> = (0..n as u64)
            .map(|k| self.additive_char_eval(u, self.field.gen_pow(k)))
            .collect();
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        GaussTable { values: buf }
    }
}

/// Gauss sums `g(χ_t)` for every `t` against one additive character.
#[derive(Clone, Debug)]
pub struct GaussTable {
    values: Vec<Complex64>,
}

impl GaussTable {
    #[inline]
    pub fn get(&self, t: MultCharExp) -> ComplexValue {
        self.values[t.0 as usize]
    }

    #[inline]
    pub(crate) fn get_raw(&self, t: u32) -> ComplexValue {
        self.values[t as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `𝒢(χ)` from the table.
    pub fn product(&self, chi: &CharTuple) -> ComplexValue {
        chi.0.iter().map(|&t| self.values[t as usize]).product()
    }
}
