//! Cylinder-function entry. The reduction constants of
//! `z^2 u'' + z u' + (z^2 - nu^2) u = 0` are imaginary, so the real-valued
//! engine correctly reports that no real branch exists; this entry carries
//! the expected complex rows as a static fixture and validates the reduced
//! form `z y'' + (2iz + 2nu + 1) y' + i(2nu + 1) y = 0` by direct complex
//! substitution, plus the Poisson-integral representation of `J_nu` against
//! its ascending series.

use num_complex::Complex64;

use super::{
    BoundState, CatalogError, CoordinateMap, Params, ParamSpec, PotentialId, PotentialModel,
    QuantumNumbers, TableRows,
};
use crate::nu_engine::{Interval, LowPoly, NuEquation};
use crate::numeric_oracle;
use crate::poly_kernel::log_gamma;

pub struct BesselEntry;

const SPECS: [ParamSpec; 1] = [ParamSpec::optional("nu", "cylinder order", 0.5, 0.0, 50.0)];

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Static complex-branch data of the cylinder equation.
#[derive(Debug, Clone)]
pub struct BesselFixture {
    pub nu: f64,
    pub equation: NuEquation,
    /// One of the conjugate pair `k = +-2 i nu`.
    pub k: Complex64,
    /// `pi(z) = nu + i z` as (constant, slope).
    pub pi: (Complex64, Complex64),
    /// `tau(z) = 1 + 2 nu + 2 i z`.
    pub tau: (Complex64, Complex64),
    /// `lambda = i (2 nu + 1)`.
    pub lambda: Complex64,
    /// Gauge factor `z^nu e^{i z}`: power of `z` and exponential rate.
    pub phi_power: f64,
    pub phi_rate: Complex64,
    /// Weight `z^{2 nu} e^{2 i z}`.
    pub rho_power: f64,
    pub rho_rate: Complex64,
}

impl BesselFixture {
    /// Coefficient-wise residual of the complex quadratic identity
    /// `pi^2 + (tau_tilde - sigma') pi + sigma_tilde - k sigma = 0`.
    pub fn identity_residual(&self) -> f64 {
        let nu = self.nu;
        // pi^2 = nu^2 - z^2 + 2 i nu z; tau_tilde - sigma' = 0;
        // sigma_tilde - k sigma = z^2 - nu^2 - 2 i nu z.
        let c0 = self.pi.0 * self.pi.0 + Complex64::new(-nu * nu, 0.0);
        let c1 = 2.0 * self.pi.0 * self.pi.1 - self.k;
        let c2 = self.pi.1 * self.pi.1 + Complex64::new(1.0, 0.0);
        c0.norm().max(c1.norm()).max(c2.norm()) / (1.0 + nu * nu)
    }

    /// `lambda - (k + pi')`.
    pub fn lambda_defect(&self) -> f64 {
        (self.lambda - (self.k + self.pi.1)).norm()
    }

    /// Residual of the original equation under `u = z^nu e^{iz} y(z)` with
    /// `y` a truncated power-series solution of the reduced equation,
    /// evaluated at `z` with analytic derivatives.
    pub fn reduced_form_residual(&self, z: f64) -> f64 {
        let nu = self.nu;
        let n_terms = 40;
        // y series: a_{n+1} = -i (2n + 2nu + 1) a_n / ((n+1)(n + 2nu + 1)).
        let mut coeffs = Vec::with_capacity(n_terms);
        let mut a = Complex64::new(1.0, 0.0);
        coeffs.push(a);
        for n in 0..n_terms - 1 {
            let nf = n as f64;
            a *= -I * (2.0 * nf + 2.0 * nu + 1.0) / ((nf + 1.0) * (nf + 2.0 * nu + 1.0));
            coeffs.push(a);
        }
        let horner = |c: &[Complex64], x: f64| -> Complex64 {
            c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * x + ci)
        };
        let d_coeffs: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        let dd_coeffs: Vec<Complex64> = d_coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        let y = horner(&coeffs, z);
        let yp = horner(&d_coeffs, z);
        let ypp = horner(&dd_coeffs, z);
        // u = z^nu e^{iz} y: with L = nu/z + i,
        // u' = z^nu e^{iz} (y' + L y),
        // u'' = z^nu e^{iz} (y'' + 2 L y' + (L^2 - nu/z^2) y).
        let l = Complex64::new(nu / z, 1.0);
        let u = y;
        let up = yp + l * y;
        let upp = ypp + 2.0 * l * yp + (l * l - Complex64::new(nu / (z * z), 0.0)) * y;
        let residual = z * z * upp + z * up + Complex64::new(z * z - nu * nu, 0.0) * u;
        residual.norm() / (z * z * upp.norm()).max(1e-300)
    }
}

/// The fixture for order `nu`.
pub fn bessel_reduction_fixture(nu: f64) -> BesselFixture {
    let equation = NuEquation::new(
        LowPoly::linear(0.0, 1.0),
        LowPoly::quadratic(-nu * nu, 0.0, 1.0),
        LowPoly::constant(1.0),
        Interval::open(0.0, f64::INFINITY),
    )
    .expect("static shape");
    BesselFixture {
        nu,
        equation,
        k: 2.0 * nu * I,
        pi: (Complex64::new(nu, 0.0), I),
        tau: (Complex64::new(1.0 + 2.0 * nu, 0.0), 2.0 * I),
        lambda: (2.0 * nu + 1.0) * I,
        phi_power: nu,
        phi_rate: I,
        rho_power: 2.0 * nu,
        rho_rate: 2.0 * I,
    }
}

/// Ascending series of `J_nu(z)`.
pub fn bessel_j_series(nu: f64, z: f64) -> Result<f64, CatalogError> {
    let mut sum = 0.0;
    let half = 0.5 * z;
    for k in 0..60u32 {
        let kf = k as f64;
        let ln_term = (nu + 2.0 * kf) * half.ln()
            - log_gamma(kf + 1.0)?
            - log_gamma(nu + kf + 1.0)?;
        let term = ln_term.exp();
        sum += if k % 2 == 0 { term } else { -term };
        if term < 1e-18 * sum.abs().max(1.0) && k > 4 {
            break;
        }
    }
    Ok(sum)
}

/// Poisson integral
/// `J_nu(z) = (z/2)^nu / (sqrt(pi) Gamma(nu + 1/2)) int_{-1}^{1}
/// (1 - t^2)^{nu - 1/2} cos(z t) dt` for `nu > -1/2`, by adaptive quadrature
/// in the angle variable `t = sin theta`, where the endpoint weight is
/// smooth.
pub fn bessel_j_poisson(nu: f64, z: f64) -> Result<f64, CatalogError> {
    let integral = numeric_oracle::quadrature(
        move |theta: f64| theta.cos().powf(2.0 * nu) * (z * theta.sin()).cos(),
        Interval::open(-0.5 * std::f64::consts::PI, 0.5 * std::f64::consts::PI),
        1e-12,
    )?;
    let prefactor =
        (nu * (0.5 * z).ln() - 0.5 * std::f64::consts::PI.ln() - log_gamma(nu + 0.5)?).exp();
    Ok(prefactor * integral)
}

impl PotentialModel for BesselEntry {
    fn id(&self) -> PotentialId {
        PotentialId::Bessel
    }

    fn title(&self) -> &'static str {
        "cylinder functions (complex-branch fixture)"
    }

    fn energy_unit(&self) -> &'static str {
        "none (no bound states)"
    }

    fn level_rule(&self) -> &'static str {
        "oscillatory solutions only; no discrete spectrum"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &SPECS
    }

    fn primary_index(&self) -> &'static str {
        "none"
    }

    fn coordinate_map(&self, _p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(CoordinateMap::identity(Interval::open(0.0, f64::INFINITY)))
    }

    fn build_equation(&self, p: &Params, _e: f64) -> Result<NuEquation, CatalogError> {
        Ok(bessel_reduction_fixture(p.get("nu")?).equation)
    }

    fn expected_rows(&self, _p: &Params, _e: f64) -> Result<TableRows, CatalogError> {
        Err(CatalogError::InvalidParams(
            "cylinder rows are complex; use the reduction fixture".into(),
        ))
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        Vec::new()
    }

    fn spectrum(&self, _p: &Params, _up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        Err(CatalogError::NoBoundStates(
            "the cylinder equation has a continuous spectrum only".into(),
        ))
    }

    fn eigenstate(&self, _p: &Params, _qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        Err(CatalogError::NoBoundStates(
            "the cylinder equation has a continuous spectrum only".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nu_engine::{k_candidates, NuError};

    #[test]
    fn real_engine_reports_no_real_k() {
        let eq = bessel_reduction_fixture(0.5).equation;
        match k_candidates(&eq) {
            Err(NuError::NoRealK { .. }) => {}
            other => panic!("expected NoRealK, got {other:?}"),
        }
    }

    #[test]
    fn fixture_rows_are_consistent() {
        for nu in [0.5, 1.0, 2.3] {
            let f = bessel_reduction_fixture(nu);
            assert!(f.identity_residual() < 1e-14, "identity at nu={nu}");
            assert!(f.lambda_defect() < 1e-15, "lambda at nu={nu}");
            assert_eq!(f.lambda, Complex64::new(0.0, 2.0 * nu + 1.0));
        }
    }

    #[test]
    fn reduced_form_residual_is_small() {
        let f = bessel_reduction_fixture(0.5);
        let r = f.reduced_form_residual(1.3);
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn poisson_integral_matches_series() {
        for (nu, z) in [(0.5, 2.0), (1.0, 1.3), (2.3, 3.7)] {
            let series = bessel_j_series(nu, z).unwrap();
            let poisson = bessel_j_poisson(nu, z).unwrap();
            assert!(
                (series - poisson).abs() < 1e-8 * series.abs().max(1.0),
                "nu={nu} z={z}: {series} vs {poisson}"
            );
        }
        // Half-integer sanity: J_{1/2}(z) = sqrt(2/(pi z)) sin z.
        let exact = (2.0 / (std::f64::consts::PI * 2.0)).sqrt() * 2.0f64.sin();
        assert!((bessel_j_series(0.5, 2.0).unwrap() - exact).abs() < 1e-12);
    }
}
