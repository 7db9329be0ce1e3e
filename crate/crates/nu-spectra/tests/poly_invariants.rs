//! Structural invariants of the polynomial kernel, held against independent
//! routes: the Rodrigues construction from the reduction engine, direct
//! weighted quadrature, and exact coefficient differentiation.

use nu_spectra::nu_engine::{
    poly_derivative, poly_eval, rodrigues_polynomial, ExpPowerProduct, Interval, LowPoly,
};
use nu_spectra::numeric_oracle::quadrature;
use nu_spectra::poly_kernel::{
    norm_squared, ortho_eval, recurrence_coeffs, OrthoFamily,
};

struct FamilyData {
    family: OrthoFamily,
    sigma: LowPoly,
    rho: ExpPowerProduct,
    b_n: fn(u32) -> f64,
    lambda_n: fn(&OrthoFamily, u32) -> f64,
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn families() -> Vec<FamilyData> {
    let mut out = vec![FamilyData {
        family: OrthoFamily::Hermite,
        sigma: LowPoly::constant(1.0),
        rho: ExpPowerProduct::new(0.0, -1.0, vec![]),
        b_n: |n| if n % 2 == 0 { 1.0 } else { -1.0 },
        lambda_n: |_, n| 2.0 * n as f64,
    }];
    for alpha in [0.0, 1.0, 2.5] {
        out.push(FamilyData {
            family: OrthoFamily::Laguerre { alpha },
            sigma: LowPoly::linear(0.0, 1.0),
            rho: ExpPowerProduct::new(-1.0, 0.0, vec![(0.0, alpha)]),
            b_n: |n| 1.0 / factorial(n),
            lambda_n: |_, n| n as f64,
        });
    }
    for alpha in [0.0, 0.5, 1.5] {
        for beta in [0.0, 0.5, 1.5] {
            out.push(FamilyData {
                family: OrthoFamily::Jacobi { alpha, beta },
                sigma: LowPoly::quadratic(1.0, 0.0, -1.0),
                rho: ExpPowerProduct::new(0.0, 0.0, vec![(1.0, alpha), (-1.0, beta)]),
                b_n: |n| (if n % 2 == 0 { 1.0 } else { -1.0 }) / (2.0f64.powi(n as i32) * factorial(n)),
                lambda_n: |f, n| {
                    let OrthoFamily::Jacobi { alpha, beta } = f else { unreachable!() };
                    n as f64 * (alpha + beta + n as f64 + 1.0)
                },
            });
        }
    }
    out
}

fn sample_points(family: OrthoFamily, count: usize) -> Vec<f64> {
    let (lo, hi) = match family {
        OrthoFamily::Jacobi { .. } => (-0.95, 0.95),
        OrthoFamily::Laguerre { .. } => (0.05, 12.0),
        OrthoFamily::Hermite => (-3.0, 3.0),
    };
    (0..count)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / count as f64)
        .collect()
}

#[test]
fn rodrigues_construction_matches_recurrence() {
    // Coefficient lists from the Rodrigues formula, evaluated against the
    // forward recurrence at 20 points, for every family instance, n <= 6.
    for data in families() {
        for n in 0..=6u32 {
            let coeffs = rodrigues_polynomial(&data.sigma, &data.rho, n, (data.b_n)(n))
                .unwrap_or_else(|e| panic!("{:?} n={n}: {e}", data.family));
            for &x in &sample_points(data.family, 20) {
                let direct = ortho_eval(data.family, n, x);
                let via_rodrigues = poly_eval(&coeffs, x);
                assert!(
                    (direct - via_rodrigues).abs() <= 1e-9 * direct.abs().max(1.0),
                    "{:?} n={n} x={x}: {direct} vs {via_rodrigues}",
                    data.family
                );
            }
        }
    }
}

#[test]
fn polynomials_satisfy_their_differential_equation() {
    // sigma y'' + tau y' + lambda_n y = 0 with derivatives taken exactly on
    // the coefficient list.
    for data in families() {
        let tau = match data.family {
            OrthoFamily::Hermite => LowPoly::linear(0.0, -2.0),
            OrthoFamily::Laguerre { alpha } => LowPoly::linear(1.0 + alpha, -1.0),
            OrthoFamily::Jacobi { alpha, beta } => {
                LowPoly::linear(beta - alpha, -(alpha + beta + 2.0))
            }
        };
        for n in 0..=8u32 {
            let y = rodrigues_polynomial(&data.sigma, &data.rho, n, (data.b_n)(n)).unwrap();
            let dy = poly_derivative(&y);
            let ddy = poly_derivative(&dy);
            let lambda = (data.lambda_n)(&data.family, n);
            for &x in &sample_points(data.family, 25) {
                let t1 = data.sigma.eval(x) * poly_eval(&ddy, x);
                let t2 = tau.eval(x) * poly_eval(&dy, x);
                let t3 = lambda * poly_eval(&y, x);
                let scale = t1.abs().max(t2.abs()).max(t3.abs()).max(1e-30);
                assert!(
                    (t1 + t2 + t3).abs() <= 1e-9 * scale,
                    "{:?} n={n} x={x}: residual {}",
                    data.family,
                    (t1 + t2 + t3).abs() / scale
                );
            }
        }
    }
}

#[test]
fn recurrence_consistency_at_sample_points() {
    // x y_n = alpha_n y_{n+1} + beta_n y_n + gamma_n y_{n-1} at 50 points.
    for data in families() {
        for n in 1..=10u32 {
            let rc = recurrence_coeffs(data.family, n);
            for &x in &sample_points(data.family, 50) {
                let lhs = x * ortho_eval(data.family, n, x);
                let rhs = rc.alpha_n * ortho_eval(data.family, n + 1, x)
                    + rc.beta_n * ortho_eval(data.family, n, x)
                    + rc.gamma_n * ortho_eval(data.family, n - 1, x);
                let scale = lhs.abs().max(rhs.abs()).max(1.0);
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * scale,
                    "{:?} n={n} x={x}",
                    data.family
                );
            }
        }
    }
}

/// Weighted cross-moments by quadrature, integrated in a variable where the
/// endpoint weight is smooth (angle map for Jacobi, square-root map for the
/// fractional Laguerre parameter).
fn weighted_moment(family: OrthoFamily, n: u32, m: u32) -> f64 {
    match family {
        OrthoFamily::Hermite => quadrature(
            move |x: f64| {
                (-x * x).exp() * ortho_eval(family, n, x) * ortho_eval(family, m, x)
            },
            Interval::real_line(),
            1e-11 * norm_squared(family, n.max(m)).unwrap().max(1.0),
        )
        .unwrap(),
        OrthoFamily::Laguerre { alpha } => quadrature(
            move |y: f64| {
                let x = y * y;
                2.0 * y
                    * x.powf(alpha)
                    * (-x).exp()
                    * ortho_eval(family, n, x)
                    * ortho_eval(family, m, x)
            },
            Interval::open(0.0, f64::INFINITY),
            1e-11 * norm_squared(family, n.max(m)).unwrap().max(1.0),
        )
        .unwrap(),
        OrthoFamily::Jacobi { alpha, beta } => quadrature(
            move |theta: f64| {
                let x = theta.cos();
                (1.0 - x).powf(alpha)
                    * (1.0 + x).powf(beta)
                    * theta.sin()
                    * ortho_eval(family, n, x)
                    * ortho_eval(family, m, x)
            },
            Interval::open(0.0, std::f64::consts::PI),
            1e-11 * norm_squared(family, n.max(m)).unwrap().max(1.0),
        )
        .unwrap(),
    }
}

#[test]
fn orthogonality_and_norms_by_quadrature() {
    for family in [
        OrthoFamily::Hermite,
        OrthoFamily::Laguerre { alpha: 0.0 },
        OrthoFamily::Laguerre { alpha: 2.5 },
        OrthoFamily::Jacobi { alpha: 0.0, beta: 0.0 },
        OrthoFamily::Jacobi { alpha: 0.5, beta: 1.5 },
    ] {
        for n in 0..=8u32 {
            let d_n = norm_squared(family, n).unwrap();
            let diag = weighted_moment(family, n, n);
            assert!(
                (diag - d_n).abs() <= 1e-8 * d_n,
                "{family:?} n={n}: {diag} vs {d_n}"
            );
            for m in 0..n {
                let d_m = norm_squared(family, m).unwrap();
                let cross = weighted_moment(family, n, m);
                assert!(
                    cross.abs() <= 1e-8 * (d_n * d_m).sqrt(),
                    "{family:?} ({n},{m}): {cross}"
                );
            }
        }
    }
}
