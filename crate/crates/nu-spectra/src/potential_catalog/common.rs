//! Helpers shared by the catalog entries.

use super::{CatalogError, QuantumNumbers};
use crate::poly_kernel::log_gamma;

pub fn require_qn(qn: &QuantumNumbers, name: &str) -> Result<i64, CatalogError> {
    qn.get(name)
        .copied()
        .ok_or_else(|| CatalogError::InvalidParams(format!("missing quantum number `{name}`")))
}

pub fn ln_gamma(x: f64) -> Result<f64, CatalogError> {
    Ok(log_gamma(x)?)
}

pub fn ln_factorial(n: u32) -> Result<f64, CatalogError> {
    Ok(log_gamma(n as f64 + 1.0)?)
}

/// `exp(ln_amp + p ln xi - rate xi)`, evaluating to 0 at `xi = 0` for
/// positive `p` without intermediate overflow.
pub fn power_exp(ln_amp: f64, p: f64, xi: f64, rate: f64) -> f64 {
    if xi <= 0.0 {
        return if p > 0.0 { 0.0 } else if p == 0.0 { ln_amp.exp() } else { f64::INFINITY };
    }
    (ln_amp + p * xi.ln() - rate * xi).exp()
}
