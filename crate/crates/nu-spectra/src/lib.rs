//! Closed-form bound-state spectra and normalized wavefunctions for the
//! classic exactly solvable quantum potentials, produced by a reduction of
//! each problem to hypergeometric type and cross-checked against independent
//! finite-difference and quadrature oracles.

pub mod nu_engine;
pub mod numeric_oracle;
pub mod poly_kernel;
pub mod potential_catalog;
pub mod cli;
pub mod verification;
