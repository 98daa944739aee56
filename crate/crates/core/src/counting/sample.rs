//! Seeded generation of random monomial forms.

use std::sync::Arc;

use rand::Rng;

use super::MonomialForm;
use crate::character_lattice::ExponentMatrix;
use crate::error::Result;
use crate::finite_field::{FieldCtx, FieldElement};

/// A form with `s` variables and `r` monomials, exponents uniform in
/// `[0, max_exp]` (constant monomials redrawn) and coefficients uniform in
/// `K⁰`. The same RNG state always yields the same form.
pub fn random_form<R: Rng + ?Sized>(
    field: Arc<FieldCtx>,
    s: usize,
    r: usize,
    max_exp: u64,
    rng: &mut R,
) -> Result<MonomialForm> {
    let cols: Vec<Vec<u64>> = (0..r)
        .map(|_| loop {
            let col: Vec<u64> = (0..s).map(|_| rng.gen_range(0..=max_exp)).collect();
            if col.iter().any(|&m| m > 0) {
                break col;
            }
        })
        .collect();
    let q = field.q();
    let coeffs = (0..r)
        .map(|_| field.from_index(rng.gen_range(1..q)))
        .collect::<Result<Vec<FieldElement>>>()?;
    MonomialForm::new(field, ExponentMatrix::from_columns(&cols)?, coeffs)
}
