//! The monomial homomorphism `(K⁰)^s → (K⁰)^r` and its character-group duals,
//! as integer linear algebra modulo `n = q - 1`.
//!
//! Writing `x_j = g^{u_j}`, monomial `i` is `y_i = g^{Σ_j m_{ji} u_j}`, so the
//! homomorphism is `u ↦ Mᵀu` on `(Z/n)^s`. Its kernel size `d` is the number
//! of solutions of `Mᵀu ≡ 0`.
//!
//! A character `χ = (χ_{t_1}, …, χ_{t_r})` is trivial on the image `G` iff for
//! every `x`, `Π_i χ_{t_i}(y_i) = exp(2πi/n · Σ_j u_j Σ_i m_{ji} t_i) = 1`,
//! i.e. iff `Σ_i m_{ji} t_i ≡ 0 (mod n)` for every row `j`. The orthogonal
//! group `G̃` is therefore the kernel of `M` acting on `(Z/n)^r`, and the
//! subgroup `G̃*` (those with `Σ_i t_i ≡ 0`) is the kernel of `M` with an
//! all-ones row appended.
//!
//! Both kernels come out of a Smith normal form `U·M·V = D`, computed over
//! `Z/n` since only residues matter: with `t = V·w`, the system decouples
//! into `d_k w_k ≡ 0 (mod n)`, so the columns of `V` scaled by
//! `n / gcd(d_k, n)` generate the kernel with orders `gcd(d_k, n)` (and `n`
//! for the free columns past the rank). The invariant factors agree with
//! those of the integer Smith form up to `gcd(·, n)`.

mod modular;
mod snf;

use modular::smith_normal_form_mod;

pub use snf::{smith_normal_form, IntMatrix, SnfDecomposition};

use crate::characters::CharTuple;
use crate::error::{Error, Result};

/// Exponents of a monomial form: `m[j][i]` is the power of `x_j` in term `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    s: usize,
    r: usize,
    m: Vec<u64>,
}

impl ExponentMatrix {
    /// Builds from `s` rows (one per variable) of `r` exponents each.
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let s = rows.len();
        let r = rows.first().map_or(0, Vec::len);
        if s == 0 || r == 0 {
            return Err(Error::InvalidMatrix(
                "need at least one variable and one monomial".into(),
            ));
        }
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidMatrix("rows differ in length".into()));
        }
        let m = rows.concat();
        let out = ExponentMatrix { s, r, m };
        if let Some(i) = (0..r).find(|&i| (0..s).all(|j| out.get(j, i) == 0)) {
            return Err(Error::InvalidMatrix(format!(
                "monomial {i} is constant (all exponents zero)"
            )));
        }
        Ok(out)
    }

    /// Builds from `r` columns (one per monomial) of `s` exponents each.
    pub fn from_columns(cols: &[Vec<u64>]) -> Result<Self> {
        let s = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != s) {
            return Err(Error::InvalidMatrix("columns differ in length".into()));
        }
        Self::new((0..s).map(|j| cols.iter().map(|c| c[j]).collect()).collect())
    }

    /// Number of variables.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of monomials.
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn get(&self, j: usize, i: usize) -> u64 {
        self.m[j * self.r + i]
    }

    pub fn row(&self, j: usize) -> &[u64] {
        &self.m[j * self.r..(j + 1) * self.r]
    }

    pub fn column(&self, i: usize) -> Vec<u64> {
        (0..self.s).map(|j| self.get(j, i)).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.m.chunks(self.r)
    }
}

/// Generators-with-orders presentation of a subgroup of `(Z/n)^r` cut out by
/// linear relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGroupBasis {
    n: u64,
    r: usize,
    gens: Vec<Vec<u32>>,
    orders: Vec<u64>,
    size: u64,
    /// Rows `ρ` with `ρ·t ≡ 0 (mod n)` for every member `t`.
    relations: Vec<Vec<u64>>,
    /// Invariant factors of the relation matrix over `Z/n`.
    invariant_factors: Vec<u64>,
}

impl DualGroupBasis {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn gens(&self) -> &[Vec<u32>] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn relations(&self) -> &[Vec<u64>] {
        &self.relations
    }

    /// `gcd(d_k, n)` for each diagonal slot of the Smith form, padded with
    /// `n` for zero diagonal entries.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn contains(&self, t: &[u32]) -> bool {
        t.len() == self.r && satisfies(&self.relations, t, self.n)
    }

    /// Number of elements visited by [`DualGroupBasis::chunk`] for each value
    /// of the leading generator's exponent; there are `leading_order()` chunks.
    pub fn leading_order(&self) -> u64 {
        self.orders.first().copied().unwrap_or(1)
    }

    /// Elements whose leading generator exponent equals `lead`, in the same
    /// relative order as the full enumeration.
    pub fn chunk(&self, lead: u64) -> DualIter<'_> {
        assert!(lead < self.leading_order(), "chunk index out of range");
        let mut digits = vec![0u64; self.gens.len()];
        let mut current = vec![0u32; self.r];
        if let Some(g0) = self.gens.first() {
            digits[0] = lead;
            for (c, &g) in current.iter_mut().zip(g0) {
                *c = ((lead as u128 * g as u128) % self.n as u128) as u32;
            }
        }
        DualIter {
            basis: self,
            digits,
            current,
            remaining: self.size / self.leading_order(),
            floor: 1,
        }
    }
}

fn satisfies(relations: &[Vec<u64>], t: &[u32], n: u64) -> bool {
    relations.iter().all(|row| {
        row.iter()
            .zip(t)
            .map(|(&m, &ti)| (m % n) as u128 * ti as u128)
            .sum::<u128>()
            % n as u128
            == 0
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn kernel_mod(relations: Vec<Vec<u64>>, r: usize, n: u64) -> Result<DualGroupBasis> {
    if n == 0 || n > u32::MAX as u64 {
        return Err(Error::InvalidMatrix(format!("modulus {n} out of range")));
    }
    let snf = smith_normal_form_mod(&relations, r, n);
    let factors: Vec<u64> = snf.pivots.iter().map(|&p| gcd(p, n)).collect();
    let rank = factors.len();

    let mut gens = Vec::new();
    let mut orders = Vec::new();
    let mut size = 1u64;
    for k in 0..r {
        let order = if k < rank {
            factors[k]
        } else {
            n
        };
        if order == 1 {
            continue;
        }
        let step = (n / order) as u128;
        let gen = snf
            .v
            .iter()
            .map(|row| ((row[k] as u128 * step) % n as u128) as u32)
            .collect();
        gens.push(gen);
        orders.push(order);
        size = size
            .checked_mul(order)
            .ok_or(Error::Overflow("dual group size"))?;
    }

    let slots = relations.len().min(r);
    let invariant_factors = (0..slots)
        .map(|k| factors.get(k).copied().unwrap_or(n))
        .collect();

    Ok(DualGroupBasis {
        n,
        r,
        gens,
        orders,
        size,
        relations,
        invariant_factors,
    })
}

/// `G̃ = {t ∈ (Z/n)^r : M·t ≡ 0 (mod n)}`.
pub fn dual_group(m: &ExponentMatrix, n: u64) -> Result<DualGroupBasis> {
    kernel_mod(m.rows().map(<[u64]>::to_vec).collect(), m.r(), n)
}

/// `G̃* = {t ∈ G̃ : Σ_i t_i ≡ 0 (mod n)}`.
pub fn restrict_lambda_trivial(basis: &DualGroupBasis, n: u64) -> Result<DualGroupBasis> {
    if basis.n != n {
        return Err(Error::InvalidMatrix(format!(
            "basis modulus {} differs from {n}",
            basis.n
        )));
    }
    let mut relations = basis.relations.clone();
    relations.push(vec![1; basis.r]);
    kernel_mod(relations, basis.r, n)
}

/// Every element of the group, each once, in mixed-radix order of the
/// generator exponents (first generator most significant).
pub fn enumerate_dual(basis: &DualGroupBasis) -> DualIter<'_> {
    DualIter {
        basis,
        digits: vec![0; basis.gens.len()],
        current: vec![0; basis.r],
        remaining: basis.size,
        floor: 0,
    }
}

/// Size of the kernel of `u ↦ Mᵀu` on `(Z/n)^s`:
/// `d = Π_k gcd(d_k, n) · n^{s - rank}`.
pub fn kernel_size_d(m: &ExponentMatrix, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidMatrix("modulus must be at least 1".into()));
    }
    let rows: Vec<Vec<u64>> = m.rows().map(<[u64]>::to_vec).collect();
    let factors: Vec<u64> = smith_normal_form_mod(&rows, m.r(), n)
        .pivots
        .iter()
        .map(|&p| gcd(p, n))
        .collect();
    let overflow = Error::Overflow("kernel size");
    let free = u32::try_from(m.s() - factors.len()).map_err(|_| overflow.clone())?;
    let mut d = n.checked_pow(free).ok_or(overflow.clone())?;
    for &f in &factors {
        d = d.checked_mul(f).ok_or(overflow.clone())?;
    }
    Ok(d)
}

/// Exhaustive kernel of `M` (optionally with the all-ones row) over all `n^r`
/// tuples. Test oracle for [`dual_group`] and [`restrict_lambda_trivial`].
pub fn kernel_bruteforce(m: &ExponentMatrix, n: u64, lambda_trivial: bool) -> Vec<CharTuple> {
    let mut relations: Vec<Vec<u64>> = m.rows().map(<[u64]>::to_vec).collect();
    if lambda_trivial {
        relations.push(vec![1; m.r()]);
    }
    let r = m.r();
    let mut out = Vec::new();
    let mut t = vec![0u32; r];
    loop {
        if satisfies(&relations, &t, n) {
            out.push(CharTuple::from_reduced(t.clone()));
        }
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if (t[i] as u64) < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Brute-force `#{u ∈ (Z/n)^s : Mᵀu ≡ 0}`. Test oracle for [`kernel_size_d`].
pub fn kernel_size_bruteforce(m: &ExponentMatrix, n: u64) -> u64 {
    let s = m.s();
    let mut u = vec![0u64; s];
    let mut count = 0;
    loop {
        let in_kernel = (0..m.r()).all(|i| (0..s).map(|j| m.get(j, i) % n * u[j]).sum::<u64>() % n == 0);
        count += in_kernel as u64;
        let mut j = s;
        loop {
            if j == 0 {
                return count;
            }
            j -= 1;
            u[j] += 1;
            if u[j] < n {
                break;
            }
            u[j] = 0;
        }
    }
}

/// Streaming enumeration over a [`DualGroupBasis`].
///
/// Stepping digit `k` always adds generator `k` once: on a wrap the digit
/// returns to zero after `order_k` additions, and `order_k · gen_k ≡ 0`.
#[derive(Clone, Debug)]
pub struct DualIter<'a> {
    basis: &'a DualGroupBasis,
    digits: Vec<u64>,
    current: Vec<u32>,
    remaining: u64,
    /// Index of the most significant digit allowed to change.
    floor: usize,
}

impl DualIter<'_> {
    /// Visits every remaining element without allocating per element.
    pub fn visit(mut self, mut f: impl FnMut(&[u32])) {
        while self.remaining > 0 {
            f(&self.current);
            self.step();
        }
    }

    fn step(&mut self) {
        self.remaining -= 1;
        if self.remaining == 0 {
            return;
        }
        let n = self.basis.n;
        for k in (self.floor..self.digits.len()).rev() {
            for (c, &g) in self.current.iter_mut().zip(&self.basis.gens[k]) {
                let v = *c as u64 + g as u64;
                *c = if v >= n { v - n } else { v } as u32;
            }
            self.digits[k] += 1;
            if self.digits[k] < self.basis.orders[k] {
                return;
            }
            self.digits[k] = 0;
        }
    }
}

impl Iterator for DualIter<'_> {
    type Item = CharTuple;

    fn next(&mut self) -> Option<CharTuple> {
        if self.remaining == 0 {
            return None;
        }
        let out = CharTuple::from_reduced(self.current.clone());
        self.step();
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}
