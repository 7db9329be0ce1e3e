//! One-dimensional harmonic oscillator: `U(x) = m omega^2 x^2 / 2` on the
//! whole line, mapped through `xi = x sqrt(m omega / hbar)`. The trial
//! energy is the dimensionless `eps = E / (hbar omega)`.

use std::sync::Arc;

use super::common::{ln_factorial, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, FdProblem, MappedForm, Params, ParamSpec,
    PotentialId, PotentialModel, QuantProbe, QuantumNumbers, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::numeric_oracle::GridSpec;
use crate::poly_kernel::{ortho_eval, OrthoFamily};

pub struct Harmonic1d;

const SPECS: [ParamSpec; 2] = [
    ParamSpec::optional("hw", "level spacing hbar*omega", 1.0, 1e-12, 1e12),
    ParamSpec::optional("scale", "m*omega/hbar, square of the coordinate scale", 1.0, 1e-12, 1e12),
];

impl Harmonic1d {
    fn equation(eps: f64) -> NuEquation {
        NuEquation::new(
            LowPoly::constant(1.0),
            LowPoly::quadratic(2.0 * eps, 0.0, -1.0),
            LowPoly::zero(),
            Interval::real_line(),
        )
        .expect("static shape")
    }
}

impl PotentialModel for Harmonic1d {
    fn id(&self) -> PotentialId {
        PotentialId::Harmonic1d
    }

    fn title(&self) -> &'static str {
        "1D harmonic oscillator"
    }

    fn energy_unit(&self) -> &'static str {
        "hw"
    }

    fn level_rule(&self) -> &'static str {
        "all n >= 0 bound"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &SPECS
    }

    fn primary_index(&self) -> &'static str {
        "n"
    }

    fn coordinate_map(&self, p: &Params) -> Result<CoordinateMap, CatalogError> {
        let s = p.get("scale")?.sqrt();
        Ok(CoordinateMap {
            forward: Arc::new(move |x| s * x),
            inverse: Arc::new(move |xi| xi / s),
            jacobian: Arc::new(move |_| s),
            physical_domain: Interval::real_line(),
            mapped_domain: Interval::real_line(),
        })
    }

    fn build_equation(&self, _p: &Params, eps: f64) -> Result<NuEquation, CatalogError> {
        Ok(Self::equation(eps))
    }

    fn expected_rows(&self, _p: &Params, eps: f64) -> Result<TableRows, CatalogError> {
        Ok(TableRows {
            k: 2.0 * eps,
            pi: LowPoly::linear(0.0, -1.0),
            tau: LowPoly::linear(0.0, -2.0),
            lambda: 2.0 * eps - 1.0,
            phi: ExpPowerProduct::new(0.0, -0.5, vec![]),
            rho: ExpPowerProduct::new(0.0, -1.0, vec![]),
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        [0.5, 1.3, 3.75]
            .into_iter()
            .map(|eps| (Params::new(&[("hw", 1.0), ("scale", 1.0)]), eps))
            .collect()
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let hw = p.get("hw")?;
        Ok((0..=up_to.max(0))
            .map(|n| {
                BoundState::levels_only(
                    super::qn(&[("n", n)]),
                    hw * (n as f64 + 0.5),
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let n = require_qn(qn, "n")?;
        if n < 0 {
            return Err(CatalogError::LevelNotBound(format!("n = {n} < 0")));
        }
        let n = n as u32;
        let hw = p.get("hw")?;
        let s2 = p.get("scale")?;
        let s = s2.sqrt();
        let eps = n as f64 + 0.5;
        // psi_n(x) = (s^2/pi)^{1/4} / sqrt(2^n n!) e^{-s^2 x^2/2} H_n(s x)
        let ln_norm = 0.25 * (s2 / std::f64::consts::PI).ln()
            - 0.5 * (n as f64 * 2.0f64.ln() + ln_factorial(n)?);
        let norm = ln_norm.exp();
        let psi = move |x: f64| {
            let xi = s * x;
            norm * (-0.5 * xi * xi).exp() * ortho_eval(OrthoFamily::Hermite, n, xi)
        };
        let u = move |xi: f64| psi(xi / s);
        let window = (2.0 * eps + 9.0).sqrt();
        Ok(BoundState {
            quantum_numbers: qn.clone(),
            energy: hw * eps,
            energy_unit: self.energy_unit(),
            normalization: Some(norm),
            wave_domain: Interval::real_line(),
            wave: Some(Arc::new(psi)),
            polynomial_degree: Some(n as usize),
            mapped: Some(MappedForm {
                equation: Self::equation(eps),
                u: Arc::new(u),
                sample_window: (-window, window),
            }),
        })
    }

    fn quantization_probe(
        &self,
        _p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        let eps = index as f64 + 0.5;
        Ok(Some(QuantProbe {
            bracket: (1e-6, 2.0 * eps + 2.0),
            degree: index as u32,
            expected_energy: eps,
        }))
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let hw = p.get("hw")?;
        Ok(Some(FdProblem {
            grid: GridSpec::dirichlet(-10.0, 10.0, 2001),
            potential: Arc::new(|x| x * x),
            eigenvalue_of_energy: Arc::new(move |e| 2.0 * e / hw),
            compare: 5,
            subset_match: false,
            rel_tol: 1e-5,
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("hw", 1.0), ("scale", 1.0)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 1)]), super::qn(&[("n", 4)])],
            ),
            (
                Params::new(&[("hw", 2.0), ("scale", 2.5)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 3)])],
            ),
        ]
    }
}
