//! Small finite fields `F_q`, `q = p^e`, with every lookup table materialized
//! at construction.
//!
//! An element is stored as its power-basis coordinates packed into one base-`p`
//! integer: coordinate `i` (the coefficient of `α^i`, where `α` is a root of the
//! modulus) is digit `i`. The packed value doubles as the element's index in
//! `[0, q)`, so zero is an ordinary element and every table is a flat `Vec`.
//!
//! Construction is deterministic:
//!
//! - the modulus is the first monic irreducible polynomial of degree `e` when
//!   the non-leading coefficients are counted up as a base-`p` integer with the
//!   constant term as the lowest digit;
//! - the generator is the element of smallest index whose order is `q - 1`.

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// An element of a [`FieldCtx`], packed as base-`p` digits of its coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Packed index in `[0, q)`.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A fully materialized finite field.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, `e + 1` coefficients, constant term first.
    modulus: Vec<u32>,
    generator: FieldElement,
    /// `antilog[k] = g^k` for `k` in `[0, q - 1)`.
    antilog: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    trace: Vec<u32>,
}

/// Builds `F_{p^e}`.
pub fn build_field(p: u64, e: u32) -> Result<FieldCtx> {
    let too_large = Error::FieldTooLarge {
        p,
        e,
        limit: MAX_FIELD_ORDER,
    };
    // Primality is only decided for candidates that could fit.
    if p > MAX_FIELD_ORDER as u64 && e >= 1 {
        return Err(too_large);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::InvalidDegree(e));
    }
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= MAX_FIELD_ORDER as u64)
        .ok_or(too_large)? as u32;
    let p = p as u32;

    let modulus = smallest_irreducible(p, e);
    let n = q - 1;
    let generator = find_generator(p, e, &modulus, q);

    let mut antilog = vec![0u32; n as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for k in 0..n {
        antilog[k as usize] = cur;
        log[cur as usize] = k;
        cur = poly_mul_mod(cur, generator, p, e, &modulus);
    }
    debug_assert_eq!(cur, 1, "generator order must be q - 1");

    let mut ctx = FieldCtx {
        p,
        e,
        q,
        modulus,
        generator: FieldElement(generator),
        antilog,
        log,
        trace: Vec::new(),
    };

    // Tr is F_p-linear, so it is determined by its values on the power basis.
    let basis_traces: Vec<u32> = (0..e)
        .map(|i| {
            let t = ctx.trace_by_frobenius(FieldElement(p.pow(i)));
            assert!(t.0 < p, "trace must land in the prime subfield");
            t.0
        })
        .collect();
    ctx.trace = (0..q)
        .map(|x| {
            let mut acc = 0u64;
            let mut rest = x;
            for &bt in &basis_traces {
                acc += (rest % p) as u64 * bt as u64;
                rest /= p;
            }
            (acc % p as u64) as u32
        })
        .collect();
    Ok(ctx)
}

impl FieldCtx {
    /// Characteristic.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Extension degree over `F_p`.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Field order.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn n(&self) -> u32 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The field specification string, `"p"` or `"p^e"`.
    pub fn spec(&self) -> String {
        if self.e == 1 {
            self.p.to_string()
        } else {
            format!("{}^{}", self.p, self.e)
        }
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.e as usize {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                self.e,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidElement(format!(
                "coordinate {c} not reduced mod {}",
                self.p
            )));
        }
        Ok(FieldElement(pack(coeffs, self.p)))
    }

    pub fn from_index(&self, index: u32) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::InvalidElement(format!(
                "index {index} out of range for q = {}",
                self.q
            )));
        }
        Ok(FieldElement(index))
    }

    /// Image of an integer under the prime-subfield embedding `Z -> F_p ⊂ F_q`.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        digits(x.0, self.p, self.e)
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// `g^k`, with `k` reduced mod `q - 1`.
    #[inline]
    pub fn gen_pow(&self, k: u64) -> FieldElement {
        FieldElement(self.antilog[(k % self.n() as u64) as usize])
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        let n = self.n();
        FieldElement(self.antilog[(if k >= n { k - n } else { k }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroNotInvertible);
        }
        let n = self.n();
        Ok(FieldElement(
            self.antilog[((n - self.log[a.0 as usize]) % n) as usize],
        ))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.n() as u64;
        let l = self.log[a.0 as usize] as u64 * (k % n);
        FieldElement(self.antilog[(l % n) as usize])
    }

    /// Multiplication by schoolbook polynomial product and reduction modulo
    /// the modulus. Independent of the log tables.
    pub fn mul_schoolbook(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(poly_mul_mod(a.0, b.0, self.p, self.e, &self.modulus))
    }

    pub fn discrete_log(&self, x: FieldElement) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(self.log[x.0 as usize])
    }

    /// Discrete log without the zero check; `x` must be nonzero.
    #[inline]
    pub(crate) fn log_nonzero(&self, x: FieldElement) -> u32 {
        debug_assert!(!x.is_zero());
        self.log[x.0 as usize]
    }

    /// Absolute trace `Tr_{F_q/F_p}(x)` as a residue in `[0, p)`.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u32 {
        self.trace[x.0 as usize]
    }

    /// `x + x^p + ... + x^{p^{e-1}}` evaluated in the field.
    pub fn trace_by_frobenius(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut conj = x;
        for _ in 0..self.e {
            acc = self.add(acc, conj);
            conj = self.pow(conj, self.p as u64);
        }
        acc
    }

    /// Renders an element the way the equation file format reads it back:
    /// a residue for prime fields, `g^k` otherwise.
    pub fn format_element(&self, x: FieldElement) -> String {
        if self.e == 1 || x.is_zero() {
            x.0.to_string()
        } else {
            format!("g^{}", self.log[x.0 as usize])
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut x: u32, p: u32, len: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `b` (both constant term first).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    for i in (db..r.len()).rev() {
        let c = r[i] % p64;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let k = i - db + j;
            r[k] = (r[k] + (p64 - c) * bj as u64) % p64;
        }
    }
    r.truncate(db);
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for k in 0..p.pow(d) {
            let mut g = digits(k, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    (0..p.pow(e))
        .map(|k| {
            let mut f = digits(k, p, e);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists")
}

fn poly_mul_mod(a: u32, b: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    let da = digits(a, p, e);
    let db = digits(b, p, e);
    let mut prod = vec![0u32; 2 * e as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let rem = if prod.len() > e as usize {
        poly_rem(&prod, modulus, p)
    } else {
        prod
    };
    pack(&rem, p)
}

fn poly_pow_mod(mut base: u32, mut k: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    let mut acc = 1;
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mul_mod(acc, base, p, e, modulus);
        }
        base = poly_mul_mod(base, base, p, e, modulus);
        k >>= 1;
    }
    acc
}

fn find_generator(p: u32, e: u32, modulus: &[u32], q: u32) -> u32 {
    let n = q - 1;
    let factors = prime_factors(n);
    (1..q)
        .find(|&c| {
            factors
                .iter()
                .all(|&l| poly_pow_mod(c, n / l, p, e, modulus) != 1)
        })
        .expect("the multiplicative group of a finite field is cyclic")
}
