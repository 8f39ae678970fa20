//! Dense arbitrary-precision integer matrices, unimodular operations and
//! Smith normal form.

mod divisors;
mod elim;
mod matrix;
mod snf;
pub mod text;

pub use divisors::{
    diagonal_form_to_invariant_factors, is_prime, p_adic_valuation, DiagonalForm, ElemDivTable,
    InvariantFactors,
};
pub use matrix::IntMatrix;
pub use snf::{p_elementary_divisors, snf};
