//! Exact integer linear algebra for the Smith group of the n-cube graph.
//!
//! The crate builds the combinatorial matrices attached to the boolean
//! lattice (subset inclusion matrices, canonical bases, the cube adjacency in
//! the vertex and monomial bases) and computes the Smith group of `Q_n` three
//! ways:
//!
//! * generic Smith normal form elimination ([`bigmat::snf`]),
//! * the structured 2-local reduction on the condensed matrix
//!   ([`reduction::two_local_divisors_of_m`]),
//! * the closed form ([`reduction::smith_group`]).
//!
//! All arithmetic is exact; nothing in this crate touches floating point.

pub mod bigmat;
pub mod binom;
pub mod canonical;
pub mod cube;
mod error;
pub mod reduction;
pub mod subsets;

pub use bigmat::{
    diagonal_form_to_invariant_factors, p_elementary_divisors, snf, DiagonalForm, ElemDivTable,
    IntMatrix, InvariantFactors,
};
pub use error::{Error, Result};
