//! Reduction of generalized hypergeometric-type equations
//! `u'' + (tau_tilde/sigma) u' + (sigma_tilde/sigma^2) u = 0`
//! to the hypergeometric form `sigma y'' + tau y' + lambda y = 0`
//! through the substitution `u = phi y`.
//!
//! All operations are pure functions of numeric inputs; callers instantiate
//! every physical parameter (including any trial energy) before building a
//! [`NuEquation`].

mod reduce;
mod rodrigues;
mod types;

pub use reduce::{
    all_branches, branch_identity_residual, branch_is_physical, k_candidates, pi_branches,
    quantized_lambda, radical_free_part, reduce, select_bound_state_branch, square_defect,
};
pub use rodrigues::{
    poly_add, poly_derivative, poly_eval, poly_mul, poly_scale, rodrigues_polynomial,
    tau_from_weight, PolyCoeffs,
};
pub use types::{
    ExpPowerProduct, Interval, LowPoly, NuBranch, NuEquation, NuError, SignChoice, COEFF_RTOL,
};
