//! Polynomial solutions via the Rodrigues-type formula
//! `y_n = (B_n / rho) (sigma^n rho)^(n)`.
//!
//! Writing `(sigma^n rho)^(j) = rho sigma^(n-j) A_j` and using the Pearson
//! relation `(sigma rho)' = tau rho` collapses the symbolic differentiation
//! to a polynomial recurrence
//! `A_{j+1} = (tau + (n-j-1) sigma') A_j + sigma A_j'`,
//! so the whole computation stays exact in the coefficient ring.

use super::types::{ExpPowerProduct, LowPoly, NuError};

/// Dense polynomial coefficients, ascending powers.
pub type PolyCoeffs = Vec<f64>;

pub fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

pub fn poly_derivative(c: &[f64]) -> PolyCoeffs {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| i as f64 * ci)
        .collect()
}

pub fn poly_add(a: &[f64], b: &[f64]) -> PolyCoeffs {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, &v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, &v) in b.iter().enumerate() {
        out[i] += v;
    }
    out
}

pub fn poly_mul(a: &[f64], b: &[f64]) -> PolyCoeffs {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn poly_scale(a: &[f64], s: f64) -> PolyCoeffs {
    a.iter().map(|&v| v * s).collect()
}

fn poly_trim(mut a: PolyCoeffs, scale: f64) -> PolyCoeffs {
    while a.len() > 1 && a.last().unwrap().abs() <= 1e-12 * scale.max(1.0) {
        a.pop();
    }
    a
}

fn low_to_coeffs(p: &LowPoly) -> PolyCoeffs {
    poly_trim(vec![p.c0, p.c1, p.c2], p.max_abs_coeff())
}

/// Recover the linear coefficient `tau` from the weight through the Pearson
/// relation: `tau = sigma' + sigma rho'/rho`. Fails when the weight's
/// factor roots do not divide `sigma` or the result is not linear.
pub fn tau_from_weight(sigma: &LowPoly, rho: &ExpPowerProduct) -> Result<LowPoly, NuError> {
    let scale = sigma.max_abs_coeff().max(1.0);
    // sigma * (exp part)' contributes (c1 + 2 c2 x) * sigma.
    let exp_deriv = vec![rho.exp_c1, 2.0 * rho.exp_c2];
    let mut acc = poly_mul(&low_to_coeffs(sigma), &exp_deriv);
    // Each power factor contributes p * sigma/(x - r); synthetic division.
    for &(r, p) in &rho.factors {
        let quot = vec![sigma.c1 + sigma.c2 * r, sigma.c2];
        let rem = sigma.eval(r);
        if rem.abs() > 1e-9 * scale * (1.0 + r.abs()) {
            return Err(NuError::UnsupportedForm {
                reason: format!("weight factor root {r} does not divide sigma"),
            });
        }
        acc = poly_add(&acc, &poly_scale(&quot, p));
    }
    acc = poly_add(&acc, &low_to_coeffs(&sigma.derivative()));
    let acc = poly_trim(acc, scale);
    if acc.len() > 2 {
        return Err(NuError::UnsupportedForm {
            reason: "Pearson quotient has degree above one".into(),
        });
    }
    Ok(LowPoly::linear(
        acc.first().copied().unwrap_or(0.0),
        acc.get(1).copied().unwrap_or(0.0),
    ))
}

/// Coefficients of `y_n(x) = (B_n / rho) (sigma^n rho)^(n)`.
pub fn rodrigues_polynomial(
    sigma: &LowPoly,
    rho: &ExpPowerProduct,
    n: u32,
    b_n: f64,
) -> Result<PolyCoeffs, NuError> {
    let tau = tau_from_weight(sigma, rho)?;
    let sigma_c = low_to_coeffs(sigma);
    let sigma_d = low_to_coeffs(&sigma.derivative());
    let mut a = vec![1.0];
    for j in 0..n {
        let factor = poly_add(
            &low_to_coeffs(&tau),
            &poly_scale(&sigma_d, (n - j - 1) as f64),
        );
        a = poly_add(
            &poly_mul(&factor, &a),
            &poly_mul(&sigma_c, &poly_derivative(&a)),
        );
    }
    Ok(poly_scale(&a, b_n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_n2() {
        // sigma = 1, rho = e^{-x^2}, B_n = (-1)^n: y_2 = 4x^2 - 2.
        let sigma = LowPoly::constant(1.0);
        let rho = ExpPowerProduct::new(0.0, -1.0, vec![]);
        let y = rodrigues_polynomial(&sigma, &rho, 2, 1.0).unwrap();
        assert!((y[0] + 2.0).abs() < 1e-14);
        assert!(y[1].abs() < 1e-14);
        assert!((y[2] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn degree_zero_is_constant() {
        let sigma = LowPoly::linear(0.0, 1.0);
        let rho = ExpPowerProduct::new(-1.0, 0.0, vec![(0.0, 1.5)]);
        let y = rodrigues_polynomial(&sigma, &rho, 0, 7.25).unwrap();
        assert_eq!(y, vec![7.25]);
    }

    #[test]
    fn laguerre_alpha1_n1() {
        // sigma = x, rho = x e^{-x}, B_1 = 1/1!: y_1 = 2 - x.
        let sigma = LowPoly::linear(0.0, 1.0);
        let rho = ExpPowerProduct::new(-1.0, 0.0, vec![(0.0, 1.0)]);
        let y = rodrigues_polynomial(&sigma, &rho, 1, 1.0).unwrap();
        assert!((y[0] - 2.0).abs() < 1e-14);
        assert!((y[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn mismatched_weight_rejected() {
        let sigma = LowPoly::constant(1.0);
        let rho = ExpPowerProduct::new(0.0, 0.0, vec![(0.5, 2.0)]);
        match rodrigues_polynomial(&sigma, &rho, 1, 1.0) {
            Err(NuError::UnsupportedForm { .. }) => {}
            other => panic!("expected UnsupportedForm, got {other:?}"),
        }
    }
}
