//! Solution counts for monomial equations `Σ_i a_i·x_1^{m_{1i}}⋯x_s^{m_{si}} = 0`
//! over small finite fields, evaluated through Gauss sums over a group of
//! multiplicative characters and checked against exhaustive enumeration.
//!
//! ```
//! use std::sync::Arc;
//! use monocount::{build_field, n_bar_formula, Limits, MonomialForm};
//!
//! let field = Arc::new(build_field(5, 1).unwrap());
//! // x1^2 + x2^2 over F_5
//! let form = MonomialForm::diagonal(field, 2, 2).unwrap();
//! let report = n_bar_formula(&form, &Limits::default()).unwrap();
//! assert_eq!(report.n_bar, 8);
//! assert_eq!(report.n_total, 9);
//! ```

pub mod character_lattice;
pub mod characters;
pub mod counting;
pub mod error;
pub mod finite_field;

pub use character_lattice::{
    dual_group, enumerate_dual, kernel_size_d, restrict_lambda_trivial, smith_normal_form,
    DualGroupBasis, ExponentMatrix, IntMatrix, SnfDecomposition,
};
pub use characters::{
    lambda_exponent, AdditiveCharParam, CharTuple, Characters, ComplexValue, GaussTable,
    MultCharExp,
};
pub use counting::{
    eval_form, n_bar_bruteforce, n_bar_formula, n_bar_value, n_total_bruteforce,
    n_total_inclusion_exclusion, s_bar_direct, s_bar_via_characters, s_bar_via_image,
    sum_over_psi_check, value_distribution, CountReport, Limits, MonomialForm, NBarEvaluation,
    PsiSumCheck, Timings,
};
pub use error::{Error, Result};
pub use finite_field::{build_field, FieldCtx, FieldElement, MAX_FIELD_ORDER};
