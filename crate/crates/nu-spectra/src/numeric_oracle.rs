//! Independent numerical ground truth: a finite-difference Sturm-Liouville
//! eigensolver, adaptive Gauss-Kronrod quadrature (finite, semi-infinite and
//! spherical), and residual checkers. Nothing in this module knows about the
//! reduction machinery it is used to validate.

use crate::nu_engine::{Interval, NuEquation};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("two-resolution difference {estimate} exceeds tolerance {tolerance}")]
    NotConverged { estimate: f64, tolerance: f64 },
    #[error("quadrature tolerance not met after depth {depth} on [{lower}, {upper}]")]
    ToleranceNotMet { depth: u32, lower: f64, upper: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Dirichlet,
}

/// Uniform grid for the eigensolver.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub points: usize,
    pub boundary: Boundary,
}

impl GridSpec {
    pub fn dirichlet(lower: f64, upper: f64, points: usize) -> Self {
        Self { lower, upper, points, boundary: Boundary::Dirichlet }
    }

    pub fn spacing(&self) -> f64 {
        (self.upper - self.lower) / (self.points - 1) as f64
    }
}

/// Eigenvalues with a two-resolution convergence estimate.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub convergence_estimate: f64,
}

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below
/// `x`, by the Sturm-sequence sign count of the LDL^T pivots.
fn sturm_count(diag: &[f64], off_sq: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for &d in &diag[1..] {
        if q == 0.0 {
            q = 1e-300;
        }
        q = d - x - off_sq / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn lowest_eigenvalues(diag: &[f64], off: f64, count: usize) -> Vec<f64> {
    let off_sq = off * off;
    let radius = 2.0 * off.abs();
    let mut lo0 = f64::INFINITY;
    let mut hi0 = f64::NEG_INFINITY;
    for &d in diag {
        lo0 = lo0.min(d - radius);
        hi0 = hi0.max(d + radius);
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (mut lo, mut hi) = (lo0, hi0);
        // 100 halvings push the bracket to rounding level; fixed count keeps
        // the result bit-deterministic.
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if sturm_count(diag, off_sq, mid) >= k + 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

fn solve_at_resolution<U>(potential: &U, grid: &GridSpec, count: usize) -> Vec<f64>
where
    U: Fn(f64) -> f64 + ?Sized,
{
    let h = grid.spacing();
    let n = grid.points - 2;
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let x = grid.lower + (i + 1) as f64 * h;
        diag.push(2.0 / (h * h) + potential(x));
    }
    lowest_eigenvalues(&diag, -1.0 / (h * h), count)
}

/// Lowest `count` eigenvalues of `-psi'' + U psi = E psi` on the grid with
/// Dirichlet ends, via the 3-point Laplacian and Sturm-sequence bisection.
///
/// The problem is solved at `points` and `2 points - 1` resolutions; the
/// Richardson combination is returned and the raw two-resolution difference
/// reported as `convergence_estimate` (checked against `tolerance` if given).
pub fn fd_eigen<U>(
    potential: U,
    grid: &GridSpec,
    count: usize,
    tolerance: Option<f64>,
) -> Result<EigenResult, OracleError>
where
    U: Fn(f64) -> f64,
{
    if grid.points < 3 || !(grid.lower < grid.upper) {
        return Err(OracleError::InvalidGrid(format!(
            "need at least 3 points and lower < upper, got {} on [{}, {}]",
            grid.points, grid.lower, grid.upper
        )));
    }
    if count == 0 || count >= grid.points / 4 {
        return Err(OracleError::InvalidGrid(format!(
            "count {count} must be in 1..points/4 = {}",
            grid.points / 4
        )));
    }
    let coarse = solve_at_resolution(&potential, grid, count);
    let fine_grid = GridSpec { points: 2 * grid.points - 1, ..*grid };
    let fine = solve_at_resolution(&potential, &fine_grid, count);
    let mut eigenvalues = Vec::with_capacity(count);
    let mut estimate = 0.0f64;
    for (c, f) in coarse.iter().zip(&fine) {
        eigenvalues.push((4.0 * f - c) / 3.0);
        estimate = estimate.max((f - c).abs());
    }
    if let Some(tol) = tolerance {
        if estimate > tol {
            return Err(OracleError::NotConverged { estimate, tolerance: tol });
        }
    }
    Ok(EigenResult { eigenvalues, convergence_estimate: estimate })
}

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae),
// transcribed at full published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F>(f: &F, a: f64, b: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    for j in 0..3 {
        let idx = 2 * j + 1;
        let dx = half * XGK[idx];
        let fsum = f(center - dx) + f(center + dx);
        res_gauss += WG[j] * fsum;
        res_kronrod += WGK[idx] * fsum;
    }
    for j in 0..4 {
        let idx = 2 * j;
        let dx = half * XGK[idx];
        res_kronrod += WGK[idx] * (f(center - dx) + f(center + dx));
    }
    (res_kronrod * half, ((res_kronrod - res_gauss) * half).abs())
}

fn adaptive<F>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64, OracleError>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let (value, err) = gk15(f, a, b);
    if err <= tol {
        return Ok(value);
    }
    if depth >= 40 {
        return Err(OracleError::ToleranceNotMet { depth, lower: a, upper: b });
    }
    let mid = 0.5 * (a + b);
    Ok(adaptive(f, a, mid, 0.5 * tol, depth + 1)? + adaptive(f, mid, b, 0.5 * tol, depth + 1)?)
}

/// Adaptive quadrature of `f` over `domain` to absolute tolerance `tol`.
/// Semi-infinite domains are mapped through `x = l + t/(1-t)`; the doubly
/// infinite line splits at the origin.
pub fn quadrature<F>(f: F, domain: Interval, tol: f64) -> Result<f64, OracleError>
where
    F: Fn(f64) -> f64,
{
    quadrature_ref(&f, domain, tol)
}

pub fn quadrature_ref<F>(f: &F, domain: Interval, tol: f64) -> Result<f64, OracleError>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    assert!(tol > 0.0, "tolerance must be positive");
    match (domain.lower.is_finite(), domain.upper.is_finite()) {
        (true, true) => adaptive(f, domain.lower, domain.upper, tol, 0),
        (true, false) => {
            let l = domain.lower;
            let mapped = move |t: f64| {
                let s = 1.0 - t;
                f(l + t / s) / (s * s)
            };
            adaptive(&mapped, 0.0, 1.0, tol, 0)
        }
        (false, true) => {
            let u = domain.upper;
            let mapped = move |t: f64| {
                let s = 1.0 - t;
                f(u - t / s) / (s * s)
            };
            adaptive(&mapped, 0.0, 1.0, tol, 0)
        }
        (false, false) => {
            let positive: &dyn Fn(f64) -> f64 = &|x| f(x);
            let flipped: &dyn Fn(f64) -> f64 = &|x| f(-x);
            let upper = quadrature_ref(positive, Interval::open(0.0, f64::INFINITY), 0.5 * tol)?;
            let lower = quadrature_ref(flipped, Interval::open(0.0, f64::INFINITY), 0.5 * tol)?;
            Ok(upper + lower)
        }
    }
}

/// Gauss-Legendre nodes and weights on (-1, 1) by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_with_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integral of `f(theta, phi)` over the unit sphere (measure
/// `sin theta dtheta dphi`) by a Gauss-Legendre x trapezoid product rule,
/// refined until two successive levels agree within `tol`.
pub fn sphere_quadrature<F>(f: F, tol: f64) -> Result<f64, OracleError>
where
    F: Fn(f64, f64) -> f64,
{
    let mut previous: Option<f64> = None;
    let mut n_theta = 12;
    while n_theta <= 192 {
        let n_phi = 2 * n_theta;
        let (nodes, weights) = gauss_legendre(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut total = 0.0;
        for (ct, w) in nodes.iter().zip(&weights) {
            let theta = ct.acos();
            let mut ring = 0.0;
            for j in 0..n_phi {
                ring += f(theta, j as f64 * dphi);
            }
            total += w * ring * dphi;
        }
        if let Some(prev) = previous {
            if (total - prev).abs() <= tol {
                return Ok(total);
            }
        }
        previous = Some(total);
        n_theta *= 2;
    }
    Err(OracleError::ToleranceNotMet { depth: 0, lower: 0.0, upper: std::f64::consts::PI })
}

/// `int f^2` over `domain` (target 1 for a normalized state).
pub fn norm_integral<F>(f: F, domain: Interval, tol: f64) -> Result<f64, OracleError>
where
    F: Fn(f64) -> f64,
{
    quadrature(move |x| f(x) * f(x), domain, tol)
}

/// `int f g` over `domain` (target 0 for orthogonal states).
pub fn overlap_integral<F, G>(f: F, g: G, domain: Interval, tol: f64) -> Result<f64, OracleError>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    quadrature(move |x| f(x) * g(x), domain, tol)
}

/// Max relative residual of `sigma^2 u'' + sigma tau_tilde u' + sigma_tilde u`
/// over 50 interior samples of `window`, with 5-point centered derivatives.
pub fn ode_residual<F>(u: F, eq: &NuEquation, window: (f64, f64)) -> f64
where
    F: Fn(f64) -> f64,
{
    let (a, b) = window;
    let h = 1e-4 * (b - a);
    let mut sums = Vec::with_capacity(50);
    let mut scale = 0.0f64;
    for i in 0..50 {
        let x = a + (i as f64 + 0.5) * (b - a) / 50.0;
        let (um2, um1, u0, up1, up2) =
            (u(x - 2.0 * h), u(x - h), u(x), u(x + h), u(x + 2.0 * h));
        let d1 = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * h);
        let d2 = (-um2 + 16.0 * um1 - 30.0 * u0 + 16.0 * up1 - up2) / (12.0 * h * h);
        let s = eq.sigma.eval(x);
        let t1 = s * s * d2;
        let t2 = s * eq.tau_tilde.eval(x) * d1;
        let t3 = eq.sigma_tilde.eval(x) * u0;
        scale = scale.max(t1.abs()).max(t2.abs()).max(t3.abs());
        sums.push(t1 + t2 + t3);
    }
    if scale == 0.0 {
        return 0.0;
    }
    sums.iter().fold(0.0f64, |m, s| m.max(s.abs())) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nu_engine::LowPoly;

    #[test]
    fn oscillator_spectrum() {
        let grid = GridSpec::dirichlet(-10.0, 10.0, 2001);
        let res = fd_eigen(|x| x * x, &grid, 3, None).unwrap();
        for (n, e) in res.eigenvalues.iter().enumerate() {
            let exact = 2.0 * n as f64 + 1.0;
            assert!((e - exact).abs() < 1e-5, "n={n}: {e} vs {exact}");
        }
    }

    #[test]
    fn square_well_spectrum() {
        let grid = GridSpec::dirichlet(0.0, std::f64::consts::PI, 2001);
        let res = fd_eigen(|_| 0.0, &grid, 3, None).unwrap();
        for (n, e) in res.eigenvalues.iter().enumerate() {
            let exact = ((n + 1) * (n + 1)) as f64;
            assert!((e - exact).abs() < 1e-4, "n={n}: {e} vs {exact}");
        }
    }

    #[test]
    fn coulomb_radial_spectrum() {
        // -u'' + (-2/x) u = 2 eps0 u: lowest two are -1, -1/4.
        let grid = GridSpec::dirichlet(1e-6, 200.0, 8001);
        let res = fd_eigen(|x| -2.0 / x, &grid, 2, None).unwrap();
        assert!((res.eigenvalues[0] + 1.0).abs() < 2e-3);
        assert!((res.eigenvalues[1] + 0.25).abs() < 2e-3 * 0.25);
    }

    #[test]
    fn second_order_convergence() {
        // Halving h cuts the raw (un-extrapolated) error by about 4.
        let exact = 1.0;
        let coarse = solve_at_resolution(&|x: f64| x * x, &GridSpec::dirichlet(-10.0, 10.0, 501), 1)[0];
        let fine = solve_at_resolution(&|x: f64| x * x, &GridSpec::dirichlet(-10.0, 10.0, 1001), 1)[0];
        let ratio = (coarse - exact).abs() / (fine - exact).abs();
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn not_converged_reported() {
        let grid = GridSpec::dirichlet(-10.0, 10.0, 51);
        match fd_eigen(|x| x * x, &grid, 2, Some(1e-12)) {
            Err(OracleError::NotConverged { .. }) => {}
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn quadrature_basics() {
        let v = quadrature(|x: f64| (-x).exp(), Interval::open(0.0, f64::INFINITY), 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let g = quadrature(|x: f64| (-x * x).exp(), Interval::real_line(), 1e-12).unwrap();
        assert!((g - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let p = quadrature(|x: f64| x * x, Interval::open(0.0, 1.0), 1e-14).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_is_deterministic() {
        let run = || {
            quadrature(
                |x: f64| (x * 7.3).sin().powi(2) * (-x).exp(),
                Interval::open(0.0, f64::INFINITY),
                1e-11,
            )
            .unwrap()
        };
        assert_eq!(run().to_bits(), run().to_bits());
    }

    #[test]
    fn quadrature_matches_beta_and_laguerre_product() {
        let b = quadrature(|t: f64| t.powf(1.5) * (1.0 - t).powf(2.5), Interval::open(0.0, 1.0), 1e-12)
            .unwrap();
        let exact = crate::poly_kernel::beta_value(2.5, 3.5).unwrap();
        assert!((b - exact).abs() < 1e-10 * exact.max(1.0));
        // int e^{-x} x^{alpha+1} (L_2^1)^2 = (1 + 5) Gamma(4) / 2 = 18.
        let f = |x: f64| {
            let l = crate::poly_kernel::ortho_eval(crate::poly_kernel::OrthoFamily::Laguerre { alpha: 1.0 }, 2, x);
            (-x).exp() * x.powf(2.0) * l * l
        };
        let v = quadrature(f, Interval::open(0.0, f64::INFINITY), 1e-10).unwrap();
        assert!((v - 18.0).abs() < 1e-8 * 18.0);
    }

    #[test]
    fn sphere_quadrature_area() {
        let area = sphere_quadrature(|_, _| 1.0, 1e-12).unwrap();
        assert!((area - 4.0 * std::f64::consts::PI).abs() < 1e-10);
        // Orthogonality of cos(theta) against a constant.
        let z = sphere_quadrature(|t, _| t.cos(), 1e-12).unwrap();
        assert!(z.abs() < 1e-12);
    }

    #[test]
    fn ode_residual_oscillator_with_negative_control() {
        // u = e^{-x^2/2} H_1(x) solves u'' + (2 eps - x^2) u = 0 at eps = 1.5.
        let eq = |eps: f64| {
            NuEquation::new(
                LowPoly::constant(1.0),
                LowPoly::quadratic(2.0 * eps, 0.0, -1.0),
                LowPoly::zero(),
                Interval::real_line(),
            )
            .unwrap()
        };
        let u = |x: f64| 2.0 * x * (-0.5 * x * x).exp();
        let good = ode_residual(u, &eq(1.5), (-4.0, 4.0));
        assert!(good < 1e-6, "residual {good}");
        let bad = ode_residual(u, &eq(1.51), (-4.0, 4.0));
        assert!(bad > 1e-3, "perturbed residual {bad}");
    }
}
