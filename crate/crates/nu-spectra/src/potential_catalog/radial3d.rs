//! Radial problems mapped through a squared coordinate (`xi` proportional to
//! `r^2`): the quark-confinement-style model `U = V0 (r/a - a/r)^2` and the
//! 3D spherical oscillator. Units `hbar = m = 1`; the radial function obeys
//! `int R^2 dr = 1`.

use std::sync::Arc;

use super::common::{ln_gamma, power_exp, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, FdProblem, MappedForm, Params, ParamSpec,
    PotentialId, PotentialModel, QuantProbe, QuantumNumbers, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::numeric_oracle::GridSpec;
use crate::poly_kernel::{ortho_eval, OrthoFamily};

fn laguerre_radial_state(
    quantum_numbers: QuantumNumbers,
    energy: f64,
    unit: &'static str,
    map_rate: f64,
    exponent: f64,
    alpha: f64,
    n: u32,
    ln_c: f64,
    equation: NuEquation,
) -> BoundState {
    // R(r) = C xi^exponent e^{-xi/2} L_n^alpha(xi), xi = map_rate r^2.
    let u = move |xi: f64| {
        power_exp(ln_c, exponent, xi, 0.5) * ortho_eval(OrthoFamily::Laguerre { alpha }, n, xi)
    };
    let psi = move |r: f64| u(map_rate * r * r);
    let xi_hi = 2.0 * alpha + 4.0 * n as f64 + 14.0;
    BoundState {
        quantum_numbers,
        energy,
        energy_unit: unit,
        normalization: Some(ln_c.exp()),
        wave_domain: Interval::open(0.0, f64::INFINITY),
        wave: Some(Arc::new(psi)),
        polynomial_degree: Some(n as usize),
        mapped: Some(MappedForm {
            equation,
            u: Arc::new(u),
            sample_window: (0.01, xi_hi),
        }),
    }
}

fn squared_map(rate: f64) -> CoordinateMap {
    CoordinateMap {
        forward: Arc::new(move |r| rate * r * r),
        inverse: Arc::new(move |xi: f64| (xi / rate).max(0.0).sqrt()),
        jacobian: Arc::new(move |r| 2.0 * rate * r),
        physical_domain: Interval::open(0.0, f64::INFINITY),
        mapped_domain: Interval::open(0.0, f64::INFINITY),
    }
}

/// `U(r) = V0 (r/a - a/r)^2`: a purely discrete, linear spectrum.
pub struct Confinement3d;

const CONF_SPECS: [ParamSpec; 3] = [
    ParamSpec::optional("V0", "well strength", 1.0, 1e-9, 1e9),
    ParamSpec::optional("a", "well radius", 1.0, 1e-9, 1e9),
    ParamSpec::integer("l", "orbital angular momentum", Some(0.0), 0.0, 50.0),
];

struct ConfData {
    alpha: f64,
    bpar: f64,
    v0: f64,
    l: f64,
}

fn conf_data(p: &Params) -> Result<ConfData, CatalogError> {
    let v0 = p.get("V0")?;
    let a = p.get("a")?;
    let l = p.get_int("l")? as f64;
    let alpha = (2.0 * v0).sqrt() / a;
    let bpar = (2.0 * v0 * a * a + (l + 0.5) * (l + 0.5)).sqrt();
    Ok(ConfData { alpha, bpar, v0, l })
}

fn conf_equation(d: &ConfData, e: f64) -> NuEquation {
    let c1 = 0.5 * (e + 2.0 * d.v0) / d.alpha;
    let c0 = -0.25 * (d.bpar * d.bpar - (d.l + 0.5) * (d.l + 0.5) + d.l * (d.l + 1.0));
    NuEquation::new(
        LowPoly::linear(0.0, 1.0),
        LowPoly::quadratic(c0, c1, -0.25),
        LowPoly::constant(0.5),
        Interval::open(0.0, f64::INFINITY),
    )
    .expect("static shape")
}

impl PotentialModel for Confinement3d {
    fn id(&self) -> PotentialId {
        PotentialId::Confinement3d
    }

    fn title(&self) -> &'static str {
        "3D confinement model U = V0 (r/a - a/r)^2"
    }

    fn energy_unit(&self) -> &'static str {
        "hbar^2/(m a^2) natural units"
    }

    fn level_rule(&self) -> &'static str {
        "all n >= 0 bound (no continuum)"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &CONF_SPECS
    }

    fn primary_index(&self) -> &'static str {
        "n"
    }

    fn coordinate_map(&self, p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(squared_map(conf_data(p)?.alpha))
    }

    fn build_equation(&self, p: &Params, e: f64) -> Result<NuEquation, CatalogError> {
        Ok(conf_equation(&conf_data(p)?, e))
    }

    fn expected_rows(&self, p: &Params, e: f64) -> Result<TableRows, CatalogError> {
        let d = conf_data(p)?;
        let k = 0.5 * ((e + 2.0 * d.v0) / d.alpha - d.bpar);
        Ok(TableRows {
            k,
            pi: LowPoly::linear(0.25 + 0.5 * d.bpar, -0.5),
            tau: LowPoly::linear(1.0 + d.bpar, -1.0),
            lambda: k - 0.5,
            phi: ExpPowerProduct::new(-0.5, 0.0, vec![(0.0, 0.5 * d.bpar + 0.25)]),
            rho: ExpPowerProduct::new(-1.0, 0.0, vec![(0.0, d.bpar)]),
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        vec![
            (Params::new(&[("V0", 1.0), ("a", 1.0), ("l", 0.0)]), 1.0),
            (Params::new(&[("V0", 2.0), ("a", 1.5), ("l", 1.0)]), 3.3),
            (Params::new(&[("V0", 0.5), ("a", 2.0), ("l", 2.0)]), 0.7),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let d = conf_data(p)?;
        let l = p.get_int("l")?;
        Ok((0..=up_to.max(0))
            .map(|n| {
                let e = d.alpha * (2.0 * n as f64 + d.bpar + 1.0) - 2.0 * d.v0;
                BoundState::levels_only(super::qn(&[("n", n), ("l", l)]), e, self.energy_unit())
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let d = conf_data(p)?;
        let l = p.get_int("l")?;
        let n = require_qn(qn, "n")?;
        if n < 0 {
            return Err(CatalogError::LevelNotBound(format!("n = {n} < 0")));
        }
        let n = n as u32;
        let e = d.alpha * (2.0 * n as f64 + d.bpar + 1.0) - 2.0 * d.v0;
        // C_n^2 = 2 n! sqrt(alpha) / Gamma(bpar + n + 1).
        let ln_c = 0.5
            * (2.0f64.ln() + ln_gamma(n as f64 + 1.0)? + 0.5 * d.alpha.ln()
                - ln_gamma(d.bpar + n as f64 + 1.0)?);
        Ok(laguerre_radial_state(
            super::qn(&[("n", n as i64), ("l", l)]),
            e,
            self.energy_unit(),
            d.alpha,
            0.5 * d.bpar + 0.25,
            d.bpar,
            n,
            ln_c,
            conf_equation(&d, e),
        ))
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        if index < 0 {
            return Ok(None);
        }
        let d = conf_data(p)?;
        let e = d.alpha * (2.0 * index as f64 + d.bpar + 1.0) - 2.0 * d.v0;
        Ok(Some(QuantProbe {
            bracket: (e - 1.5 * d.alpha, e + 1.5 * d.alpha),
            degree: index as u32,
            expected_energy: e,
        }))
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let d = conf_data(p)?;
        let v0 = d.v0;
        let a = p.get("a")?;
        let l = d.l;
        let xi_max = 2.0 * d.bpar + 40.0;
        let r_max = (xi_max / d.alpha).sqrt();
        Ok(Some(FdProblem {
            grid: GridSpec::dirichlet(1e-6 * r_max, r_max, 8001),
            potential: Arc::new(move |r| {
                let t = r / a - a / r;
                2.0 * v0 * t * t + l * (l + 1.0) / (r * r)
            }),
            eigenvalue_of_energy: Arc::new(|e| 2.0 * e),
            compare: 3,
            subset_match: false,
            rel_tol: 1e-3,
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("V0", 1.0), ("a", 1.0), ("l", 0.0)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 1)])],
            ),
            (
                Params::new(&[("V0", 2.0), ("a", 1.5), ("l", 1.0)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 2)])],
            ),
        ]
    }
}

/// 3D spherical oscillator `U = m omega^2 r^2 / 2`; trial energy is
/// `eps = E/(hbar omega)`.
pub struct Oscillator3d;

const OSC_SPECS: [ParamSpec; 2] = [
    ParamSpec::optional("omega", "oscillator frequency", 1.0, 1e-9, 1e9),
    ParamSpec::integer("l", "orbital angular momentum", Some(0.0), 0.0, 50.0),
];

fn osc_equation(eps: f64, l: f64) -> NuEquation {
    NuEquation::new(
        LowPoly::linear(0.0, 1.0),
        LowPoly::quadratic(-0.25 * l * (l + 1.0), 0.5 * eps, -0.25),
        LowPoly::constant(0.5),
        Interval::open(0.0, f64::INFINITY),
    )
    .expect("static shape")
}

impl PotentialModel for Oscillator3d {
    fn id(&self) -> PotentialId {
        PotentialId::Oscillator3d
    }

    fn title(&self) -> &'static str {
        "3D spherical oscillator"
    }

    fn energy_unit(&self) -> &'static str {
        "hbar*omega"
    }

    fn level_rule(&self) -> &'static str {
        "all n >= 0 bound"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &OSC_SPECS
    }

    fn primary_index(&self) -> &'static str {
        "n"
    }

    fn coordinate_map(&self, p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(squared_map(p.get("omega")?))
    }

    fn build_equation(&self, p: &Params, eps: f64) -> Result<NuEquation, CatalogError> {
        Ok(osc_equation(eps, p.get_int("l")? as f64))
    }

    fn expected_rows(&self, p: &Params, eps: f64) -> Result<TableRows, CatalogError> {
        let l = p.get_int("l")? as f64;
        Ok(TableRows {
            k: -0.5 * (l + 0.5 - eps),
            pi: LowPoly::linear(0.5 * (l + 1.0), -0.5),
            tau: LowPoly::linear(l + 1.5, -1.0),
            lambda: -0.5 * (l + 1.5 - eps),
            phi: ExpPowerProduct::new(-0.5, 0.0, vec![(0.0, 0.5 * (l + 1.0))]),
            rho: ExpPowerProduct::new(-1.0, 0.0, vec![(0.0, l + 0.5)]),
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        vec![
            (Params::new(&[("omega", 1.0), ("l", 0.0)]), 2.1),
            (Params::new(&[("omega", 1.0), ("l", 1.0)]), 3.6),
            (Params::new(&[("omega", 2.0), ("l", 3.0)]), 6.2),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let omega = p.get("omega")?;
        let l = p.get_int("l")?;
        Ok((0..=up_to.max(0))
            .map(|n| {
                let e = omega * (2.0 * n as f64 + l as f64 + 1.5);
                BoundState::levels_only(super::qn(&[("n", n), ("l", l)]), e, self.energy_unit())
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let omega = p.get("omega")?;
        let l = p.get_int("l")?;
        let n = require_qn(qn, "n")?;
        if n < 0 {
            return Err(CatalogError::LevelNotBound(format!("n = {n} < 0")));
        }
        let n = n as u32;
        let lf = l as f64;
        let eps = 2.0 * n as f64 + lf + 1.5;
        // C_n^2 = 2 n! sqrt(omega) / Gamma(l + n + 3/2).
        let ln_c = 0.5
            * (2.0f64.ln() + ln_gamma(n as f64 + 1.0)? + 0.5 * omega.ln()
                - ln_gamma(lf + n as f64 + 1.5)?);
        Ok(laguerre_radial_state(
            super::qn(&[("n", n as i64), ("l", l)]),
            omega * eps,
            self.energy_unit(),
            omega,
            0.5 * (lf + 1.0),
            lf + 0.5,
            n,
            ln_c,
            osc_equation(eps, lf),
        ))
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        if index < 0 {
            return Ok(None);
        }
        let l = p.get_int("l")? as f64;
        let eps = 2.0 * index as f64 + l + 1.5;
        Ok(Some(QuantProbe {
            bracket: (eps - 1.5, eps + 1.5),
            degree: index as u32,
            expected_energy: eps,
        }))
    }

    fn quantization_equation(&self, p: &Params, eps: f64) -> Result<NuEquation, CatalogError> {
        self.build_equation(p, eps)
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let omega = p.get("omega")?;
        let l = p.get_int("l")? as f64;
        let r_max = ((2.0 * l + 40.0) / omega).sqrt();
        Ok(Some(FdProblem {
            grid: GridSpec::dirichlet(1e-6 * r_max, r_max, 8001),
            potential: Arc::new(move |r| omega * omega * r * r + l * (l + 1.0) / (r * r)),
            eigenvalue_of_energy: Arc::new(|e| 2.0 * e),
            compare: 3,
            subset_match: false,
            rel_tol: 1e-4,
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("omega", 1.0), ("l", 0.0)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 1)])],
            ),
            (
                Params::new(&[("omega", 2.5), ("l", 2.0)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 3)])],
            ),
        ]
    }
}
