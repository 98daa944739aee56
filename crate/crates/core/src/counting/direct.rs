//! Exhaustive enumeration over `(K⁰)^s` and `K^s`.
//!
//! Points of `(K⁰)^s` are visited by an odometer over discrete-log
//! coordinates `x_j = g^{k_j}`. Each monomial is tracked by its log
//! `L_i = log a_i + Σ_j m_{ji} k_j (mod n)`; stepping digit `j` adds `m_{ji}`
//! to every `L_i`, wrap-around included, since `n·m_{ji} ≡ 0`. One antilog per
//! monomial and `r - 1` field additions give `𝓕(x)`.
//!
//! Work is split by the leading coordinate's log into `n` chunks. Chunk
//! results are combined in chunk order, so sums are bit-identical for any
//! thread count.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Limits, MonomialForm};
use crate::character_lattice::kernel_size_d;
use crate::characters::{AdditiveCharParam, Characters, ComplexValue};
use crate::error::{Error, Result};
use crate::finite_field::FieldElement;

struct LogOdometer<'a> {
    form: &'a MonomialForm,
    n: u64,
    /// `m[j][i] mod n`, row-major.
    m_mod: Vec<u64>,
    coeff_logs: Vec<u64>,
}

impl<'a> LogOdometer<'a> {
    fn new(form: &'a MonomialForm) -> Self {
        let field = form.field();
        let n = field.n() as u64;
        let mat = form.matrix();
        let m_mod = (0..mat.s())
            .flat_map(|j| (0..mat.r()).map(move |i| (j, i)))
            .map(|(j, i)| mat.get(j, i) % n)
            .collect();
        let coeff_logs = form
            .coeffs()
            .iter()
            .map(|&a| field.log_nonzero(a) as u64)
            .collect();
        LogOdometer {
            form,
            n,
            m_mod,
            coeff_logs,
        }
    }

    /// Calls `f(k, 𝓕(x))` for every point whose first coordinate is
    /// `g^lead`; `k` holds the log coordinates.
    fn visit_chunk(&self, lead: u64, mut f: impl FnMut(&[u64], FieldElement)) {
        let field = self.form.field();
        let (s, r, n) = (self.form.s(), self.form.r(), self.n);
        let mut k = vec![0u64; s];
        k[0] = lead;
        let mut logs: Vec<u64> = (0..r)
            .map(|i| (self.coeff_logs[i] + self.m_mod[i] * lead) % n)
            .collect();
        let points = n.pow(s as u32 - 1);
        for step in 0..points {
            let value = logs
                .iter()
                .fold(FieldElement::ZERO, |acc, &l| field.add(acc, field.gen_pow(l)));
            f(&k, value);
            if step + 1 == points {
                break;
            }
            for j in (1..s).rev() {
                let row = &self.m_mod[j * r..(j + 1) * r];
                for (l, &m) in logs.iter_mut().zip(row) {
                    *l += m;
                    if *l >= n {
                        *l -= n;
                    }
                }
                k[j] += 1;
                if k[j] < n {
                    break;
                }
                k[j] = 0;
            }
        }
    }
}

fn nonzero_points(form: &MonomialForm) -> u128 {
    (form.field().n() as u128).pow(form.s() as u32)
}

fn check_nonzero_enumeration(form: &MonomialForm, limits: &Limits) -> Result<()> {
    let points = (form.field().n() as u128)
        .checked_pow(form.s() as u32)
        .unwrap_or(u128::MAX);
    limits.check("enumeration of (q-1)^s nonzero points", points)
}

/// `S̄(ψ_u) = Σ_{x ∈ (K⁰)^s} ψ_u(𝓕(x))` by direct enumeration.
pub fn s_bar_direct(form: &MonomialForm, u: AdditiveCharParam, limits: &Limits) -> Result<ComplexValue> {
    check_nonzero_enumeration(form, limits)?;
    let chars = Characters::new(form.field());
    let odo = LogOdometer::new(form);
    let partials: Vec<Complex64> = (0..odo.n)
        .into_par_iter()
        .map(|lead| {
            let mut acc = Complex64::new(0.0, 0.0);
            odo.visit_chunk(lead, |_, v| acc += chars.additive_char_eval(u, v));
            acc
        })
        .collect();
    Ok(partials.into_iter().sum())
}

/// Number of `x ∈ (K⁰)^s` with `𝓕(x) = 0`, by direct enumeration.
pub fn n_bar_bruteforce(form: &MonomialForm, limits: &Limits) -> Result<u64> {
    check_nonzero_enumeration(form, limits)?;
    let odo = LogOdometer::new(form);
    Ok((0..odo.n)
        .into_par_iter()
        .map(|lead| {
            let mut count = 0u64;
            odo.visit_chunk(lead, |_, v| count += v.is_zero() as u64);
            count
        })
        .sum())
}

/// `#{x ∈ (K⁰)^s : 𝓕(x) = c}` for every `c`, indexed by element index.
pub fn value_distribution(form: &MonomialForm, limits: &Limits) -> Result<Vec<u64>> {
    check_nonzero_enumeration(form, limits)?;
    let q = form.field().q() as usize;
    let odo = LogOdometer::new(form);
    let partials: Vec<Vec<u64>> = (0..odo.n)
        .into_par_iter()
        .map(|lead| {
            let mut hist = vec![0u64; q];
            odo.visit_chunk(lead, |_, v| hist[v.index() as usize] += 1);
            hist
        })
        .collect();
    Ok(partials.into_iter().fold(vec![0u64; q], |mut acc, h| {
        acc.iter_mut().zip(h).for_each(|(a, b)| *a += b);
        acc
    }))
}

/// Number of `x ∈ K^s` with `𝓕(x) = 0`, zero coordinates included.
pub fn n_total_bruteforce(form: &MonomialForm, limits: &Limits) -> Result<u64> {
    let field = form.field();
    let q = field.q() as u64;
    let s = form.s();
    let points = (q as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    limits.check("enumeration of q^s points", points)?;
    let per_chunk = q.pow(s as u32 - 1);
    Ok((0..q)
        .into_par_iter()
        .map(|lead| {
            let mut x = vec![FieldElement::ZERO; s];
            let mut idx = vec![0u32; s];
            idx[0] = lead as u32;
            let mut count = 0u64;
            for _ in 0..per_chunk {
                for (xj, &i) in x.iter_mut().zip(&idx) {
                    *xj = field.from_index(i).expect("index below q");
                }
                count += form.eval_unchecked(&x).is_zero() as u64;
                for j in (1..s).rev() {
                    idx[j] += 1;
                    if (idx[j] as u64) < q {
                        break;
                    }
                    idx[j] = 0;
                }
            }
            count
        })
        .sum())
}

/// `d·Σ_{y ∈ G} ψ_u(a·y)` with the image `G` of the monomial map collected by
/// enumerating `(K⁰)^s` and deduplicating. Also checks `|G|·d = (q-1)^s`.
pub fn s_bar_via_image(form: &MonomialForm, u: AdditiveCharParam, limits: &Limits) -> Result<ComplexValue> {
    check_nonzero_enumeration(form, limits)?;
    let field = form.field();
    let n = field.n() as u64;
    let mat = form.matrix();
    let mut image: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut k = vec![0u64; form.s()];
    for _ in 0..nonzero_points(form) {
        let y: Vec<u64> = (0..form.r())
            .map(|i| (0..form.s()).map(|j| mat.get(j, i) % n * k[j]).sum::<u64>() % n)
            .collect();
        image.insert(y);
        for kj in k.iter_mut().rev() {
            *kj += 1;
            if *kj < n {
                break;
            }
            *kj = 0;
        }
    }
    let d = kernel_size_d(mat, n)?;
    if image.len() as u128 * d as u128 != nonzero_points(form) {
        return Err(Error::Mismatch(format!(
            "|G| = {} and d = {d} do not multiply to (q-1)^s",
            image.len()
        )));
    }
    let chars = Characters::new(field);
    let sum: Complex64 = image
        .iter()
        .map(|y| {
            let ay = y
                .iter()
                .zip(form.coeffs())
                .fold(FieldElement::ZERO, |acc, (&l, &a)| {
                    field.add(acc, field.mul(a, field.gen_pow(l)))
                });
            chars.additive_char_eval(u, ay)
        })
        .sum();
    Ok(sum * d as f64)
}
