//! Angular equation on the sphere: `xi = cos theta` turns the polar part of
//! the Laplacian into a generalized hypergeometric-type equation on [-1, 1]
//! whose eigenvalue is `mu = l(l+1)`. The poles are coordinate
//! singularities, not boundaries, so the endpoints are closed: bounded
//! solutions qualify there.

use std::sync::Arc;

use num_complex::Complex64;

use super::common::{ln_gamma, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, MappedForm, Params, ParamSpec, PotentialId,
    PotentialModel, QuantProbe, QuantumNumbers, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::poly_kernel::{ortho_eval, OrthoFamily};

pub struct SphericalHarmonics;

const SPECS: [ParamSpec; 1] =
    [ParamSpec::integer("m", "magnetic quantum number", Some(0.0), -60.0, 60.0)];

fn equation(mu: f64, m_abs: f64) -> NuEquation {
    NuEquation::new(
        LowPoly::quadratic(1.0, 0.0, -1.0),
        LowPoly::quadratic(mu - m_abs * m_abs, 0.0, -mu),
        LowPoly::linear(0.0, -2.0),
        Interval::closed(-1.0, 1.0),
    )
    .expect("static shape")
}

/// Normalized polar factor: `int_{-1}^{1} F_{lm}(xi)^2 dxi = 1`.
fn polar_factor(l: u32, m_abs: u32) -> Result<impl Fn(f64) -> f64 + Copy + Send + Sync, CatalogError> {
    let lf = l as f64;
    let mf = m_abs as f64;
    let ln_norm = -mf * 2.0f64.ln() - ln_gamma(lf + 1.0)?
        + 0.5
            * ((2.0 * lf + 1.0) / 2.0).ln()
        + 0.5 * (ln_gamma(lf - mf + 1.0)? + ln_gamma(lf + mf + 1.0)?);
    let n = l - m_abs;
    let norm = ln_norm.exp();
    Ok(move |xi: f64| {
        let w = (1.0 - xi * xi).max(0.0).powf(0.5 * mf);
        norm * w * ortho_eval(OrthoFamily::Jacobi { alpha: mf, beta: mf }, n, xi)
    })
}

/// `Y_{lm}(theta, phi)` with the Condon-Shortley phase `(-1)^m` for
/// non-negative `m`.
pub fn spherical_harmonic(
    l: u32,
    m: i32,
    theta: f64,
    phi_angle: f64,
) -> Result<Complex64, CatalogError> {
    if m.unsigned_abs() > l {
        return Err(CatalogError::InvalidParams(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let phase = if m >= 0 && m % 2 != 0 { -1.0 } else { 1.0 };
    let f = polar_factor(l, m.unsigned_abs())?;
    let radial = f(theta.cos()) / (2.0 * std::f64::consts::PI).sqrt();
    Ok(phase * radial * Complex64::new(0.0, m as f64 * phi_angle).exp())
}

impl PotentialModel for SphericalHarmonics {
    fn id(&self) -> PotentialId {
        PotentialId::SphericalHarmonics
    }

    fn title(&self) -> &'static str {
        "spherical harmonics (angular eigenproblem)"
    }

    fn energy_unit(&self) -> &'static str {
        "mu = l(l+1)"
    }

    fn level_rule(&self) -> &'static str {
        "l >= |m|"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &SPECS
    }

    fn primary_index(&self) -> &'static str {
        "l"
    }

    fn coordinate_map(&self, _p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(CoordinateMap {
            forward: Arc::new(|theta: f64| theta.cos()),
            inverse: Arc::new(|xi: f64| xi.clamp(-1.0, 1.0).acos()),
            jacobian: Arc::new(|theta: f64| -theta.sin()),
            physical_domain: Interval::open(0.0, std::f64::consts::PI),
            mapped_domain: Interval::closed(-1.0, 1.0),
        })
    }

    fn build_equation(&self, p: &Params, mu: f64) -> Result<NuEquation, CatalogError> {
        let m = p.get_int("m")?.unsigned_abs() as f64;
        Ok(equation(mu, m))
    }

    fn expected_rows(&self, p: &Params, mu: f64) -> Result<TableRows, CatalogError> {
        let m = p.get_int("m")?.unsigned_abs() as f64;
        let (phi, rho) = if m == 0.0 {
            (ExpPowerProduct::one(), ExpPowerProduct::one())
        } else {
            (
                ExpPowerProduct::new(0.0, 0.0, vec![(-1.0, 0.5 * m), (1.0, 0.5 * m)]),
                ExpPowerProduct::new(0.0, 0.0, vec![(-1.0, m), (1.0, m)]),
            )
        };
        Ok(TableRows {
            k: mu - m * m,
            pi: LowPoly::linear(0.0, -m),
            tau: LowPoly::linear(0.0, -2.0 * (m + 1.0)),
            lambda: mu - m * (m + 1.0),
            phi,
            rho,
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        vec![
            (Params::new(&[("m", 2.0)]), 6.0),
            (Params::new(&[("m", 3.0)]), 12.0),
            (Params::new(&[("m", 1.0)]), 2.0),
            (Params::new(&[("m", 0.0)]), 6.0),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let m = p.get_int("m")?;
        let l0 = m.unsigned_abs() as i64;
        Ok((l0..=up_to.max(l0))
            .map(|l| {
                BoundState::levels_only(
                    super::qn(&[("l", l), ("m", m)]),
                    (l * (l + 1)) as f64,
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let m = p.get_int("m")?;
        let l = require_qn(qn, "l")?;
        if l < m.abs() {
            return Err(CatalogError::LevelNotBound(format!("l = {l} < |m| = {}", m.abs())));
        }
        let (l, m_abs) = (l as u32, m.unsigned_abs() as u32);
        let mu = (l * (l + 1)) as f64;
        let f = polar_factor(l, m_abs)?;
        let mut labels = qn.clone();
        labels.insert("m".into(), m);
        Ok(BoundState {
            quantum_numbers: labels,
            energy: mu,
            energy_unit: self.energy_unit(),
            normalization: None,
            wave_domain: Interval::open(-1.0, 1.0),
            wave: Some(Arc::new(f)),
            polynomial_degree: Some((l - m_abs) as usize),
            mapped: Some(MappedForm {
                equation: equation(mu, m_abs as f64),
                u: Arc::new(f),
                sample_window: (-0.95, 0.95),
            }),
        })
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        let m_abs = p.get_int("m")?.unsigned_abs() as i64;
        let l = index;
        if l < m_abs {
            return Ok(None);
        }
        let mu = (l * (l + 1)) as f64;
        Ok(Some(QuantProbe {
            bracket: (mu - (l as f64) - 0.5, mu + (l as f64) + 0.5),
            degree: (l - m_abs) as u32,
            expected_energy: mu,
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("m", 0.0)]),
                vec![super::qn(&[("l", 0)]), super::qn(&[("l", 1)]), super::qn(&[("l", 3)])],
            ),
            (
                Params::new(&[("m", 2.0)]),
                vec![super::qn(&[("l", 2)]), super::qn(&[("l", 4)])],
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric_oracle::sphere_quadrature;

    #[test]
    fn y00_is_constant() {
        let y = spherical_harmonic(0, 0, 1.1, 2.2).unwrap();
        assert!((y.re - 0.25 / std::f64::consts::PI.sqrt() * 2.0).abs() < 1e-14);
        assert!(y.im.abs() < 1e-15);
    }

    #[test]
    fn y11_at_equator() {
        let y = spherical_harmonic(1, 1, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let expect = -(3.0 / (8.0 * std::f64::consts::PI)).sqrt();
        assert!((y.re - expect).abs() < 1e-14, "{} vs {expect}", y.re);
    }

    #[test]
    fn y10_node_at_equator() {
        let y = spherical_harmonic(1, 0, std::f64::consts::FRAC_PI_2, 0.7).unwrap();
        assert!(y.norm() < 1e-15);
    }

    #[test]
    fn y21_unit_norm() {
        let norm = sphere_quadrature(
            |theta, phi| spherical_harmonic(2, 1, theta, phi).unwrap().norm_sqr(),
            1e-10,
        )
        .unwrap();
        assert!((norm - 1.0).abs() < 1e-8, "norm {norm}");
    }

    #[test]
    fn negative_m_has_no_extra_phase() {
        let plus = spherical_harmonic(2, 1, 0.8, 0.0).unwrap();
        let minus = spherical_harmonic(2, -1, 0.8, 0.0).unwrap();
        // Y_{l,-m} = (-1)^m conj(Y_{lm}) at phi = 0.
        assert!((plus.re + minus.re).abs() < 1e-14);
    }
}
