//! Nonrelativistic Coulomb problem for `U(r) = -Z e^2 / r` in units of the
//! Bohr radius (`x = r/a0`) and `E0 = e^2/a0`. The working function is
//! `F = r R(r)`, so the plain square of the state integrates to one.
//! The trial energy is `eps0 = E/E0 < 0`.

use std::sync::Arc;

use super::common::{ln_gamma, power_exp, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, FdProblem, MappedForm, Params, ParamSpec,
    PotentialId, PotentialModel, QuantProbe, QuantumNumbers, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::numeric_oracle::GridSpec;
use crate::poly_kernel::{ortho_eval, OrthoFamily};

pub struct CoulombModel;

const SPECS: [ParamSpec; 2] = [
    ParamSpec::optional("Z", "nuclear charge", 1.0, 1e-6, 1e3),
    ParamSpec::integer("l", "orbital angular momentum", Some(0.0), 0.0, 50.0),
];

fn equation(z: f64, l: f64, eps0: f64) -> NuEquation {
    NuEquation::new(
        LowPoly::linear(0.0, 1.0),
        LowPoly::quadratic(-l * (l + 1.0), 2.0 * z, 2.0 * eps0),
        LowPoly::zero(),
        Interval::open(0.0, f64::INFINITY),
    )
    .expect("static shape")
}

impl PotentialModel for CoulombModel {
    fn id(&self) -> PotentialId {
        PotentialId::Coulomb
    }

    fn title(&self) -> &'static str {
        "nonrelativistic Coulomb problem"
    }

    fn energy_unit(&self) -> &'static str {
        "E0 = e^2/a0"
    }

    fn level_rule(&self) -> &'static str {
        "n >= l + 1, all bound"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &SPECS
    }

    fn primary_index(&self) -> &'static str {
        "n"
    }

    fn coordinate_map(&self, _p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(CoordinateMap::identity(Interval::open(0.0, f64::INFINITY)))
    }

    fn build_equation(&self, p: &Params, eps0: f64) -> Result<NuEquation, CatalogError> {
        if eps0 >= 0.0 {
            return Err(CatalogError::InvalidParams(format!(
                "bound states need eps0 < 0, got {eps0}"
            )));
        }
        Ok(equation(p.get("Z")?, p.get_int("l")? as f64, eps0))
    }

    fn expected_rows(&self, p: &Params, eps0: f64) -> Result<TableRows, CatalogError> {
        let z = p.get("Z")?;
        let l = p.get_int("l")? as f64;
        let s = (-2.0 * eps0).sqrt();
        Ok(TableRows {
            k: 2.0 * z - (2.0 * l + 1.0) * s,
            pi: LowPoly::linear(l + 1.0, -s),
            tau: LowPoly::linear(2.0 * (l + 1.0), -2.0 * s),
            lambda: 2.0 * (z - (l + 1.0) * s),
            phi: ExpPowerProduct::new(-s, 0.0, vec![(0.0, l + 1.0)]),
            rho: ExpPowerProduct::new(-2.0 * s, 0.0, vec![(0.0, 2.0 * l + 1.0)]),
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        vec![
            (Params::new(&[("Z", 1.0), ("l", 0.0)]), -0.5),
            (Params::new(&[("Z", 1.0), ("l", 1.0)]), -0.08),
            (Params::new(&[("Z", 2.0), ("l", 0.0)]), -1.3),
            (Params::new(&[("Z", 1.5), ("l", 2.0)]), -0.4),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let z = p.get("Z")?;
        let l = p.get_int("l")?;
        let n0 = l + 1;
        Ok((n0..=up_to.max(n0))
            .map(|n| {
                BoundState::levels_only(
                    super::qn(&[("n", n), ("n_r", n - l - 1), ("l", l)]),
                    -z * z / (2.0 * (n * n) as f64),
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let z = p.get("Z")?;
        let l = p.get_int("l")?;
        let n = require_qn(qn, "n")?;
        if n < l + 1 {
            return Err(CatalogError::LevelNotBound(format!("n = {n} < l + 1 = {}", l + 1)));
        }
        let n_r = (n - l - 1) as u32;
        let (nf, lf) = (n as f64, l as f64);
        let eps0 = -z * z / (2.0 * nf * nf);
        // F(x) = C eta^{l+1} e^{-eta/2} L_{n_r}^{2l+1}(eta), eta = 2Z x / n.
        let ln_c = 0.5
            * (z.ln() - 2.0 * nf.ln() + ln_gamma(nf - lf)? - ln_gamma(nf + lf + 1.0)?);
        let rate = 2.0 * z / nf;
        let alpha = 2.0 * lf + 1.0;
        let f = move |x: f64| {
            let eta = rate * x;
            power_exp(ln_c, lf + 1.0, eta, 0.5)
                * ortho_eval(OrthoFamily::Laguerre { alpha }, n_r, eta)
        };
        let window_hi = (4.0 * nf + 12.0) / rate;
        Ok(BoundState {
            quantum_numbers: super::qn(&[("n", n), ("n_r", n_r as i64), ("l", l)]),
            energy: eps0,
            energy_unit: self.energy_unit(),
            normalization: Some(ln_c.exp()),
            wave_domain: Interval::open(0.0, f64::INFINITY),
            wave: Some(Arc::new(f)),
            polynomial_degree: Some(n_r as usize),
            mapped: Some(MappedForm {
                equation: equation(z, lf, eps0),
                u: Arc::new(f),
                sample_window: (0.02 / rate, window_hi),
            }),
        })
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        let z = p.get("Z")?;
        let l = p.get_int("l")?;
        if index < l + 1 {
            return Ok(None);
        }
        let nf = index as f64;
        // The two k roots merge as eps0 -> 0; keep the bracket clear of the
        // cancellation by stopping at the next level's energy.
        Ok(Some(QuantProbe {
            bracket: (-2.0 * z * z, -z * z / (2.0 * (nf + 1.0) * (nf + 1.0))),
            degree: (index - l - 1) as u32,
            expected_energy: -z * z / (2.0 * nf * nf),
        }))
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let z = p.get("Z")?;
        let l = p.get_int("l")? as f64;
        Ok(Some(FdProblem {
            grid: GridSpec::dirichlet(1e-6, 200.0, 8001),
            potential: Arc::new(move |x| -2.0 * z / x + l * (l + 1.0) / (x * x)),
            eigenvalue_of_energy: Arc::new(|e| 2.0 * e),
            compare: 3,
            subset_match: false,
            rel_tol: 2e-3,
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("Z", 1.0), ("l", 0.0)]),
                vec![super::qn(&[("n", 1)]), super::qn(&[("n", 2)])],
            ),
            (
                Params::new(&[("Z", 2.0), ("l", 1.0)]),
                vec![super::qn(&[("n", 2)]), super::qn(&[("n", 4)])],
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential_catalog::{eigenstate, ode_residual_check, spectrum, PotentialId};

    #[test]
    fn bohr_levels() {
        let p = Params::new(&[("Z", 1.0)]);
        let states = spectrum(PotentialId::Coulomb, &p, 3).unwrap();
        let energies: Vec<f64> = states.iter().map(|s| s.energy).collect();
        assert_eq!(energies.len(), 3);
        for (e, want) in energies.iter().zip([-0.5, -0.125, -1.0 / 18.0]) {
            assert!((e - want).abs() < 1e-15);
        }
    }

    #[test]
    fn ground_state_normalized_and_residual_free() {
        let p = Params::new(&[("Z", 1.0), ("l", 0.0)]);
        let s = eigenstate(PotentialId::Coulomb, &p, &super::super::qn(&[("n", 1)])).unwrap();
        let norm = s.normalization_check(1e-10).unwrap();
        assert!((norm - 1.0).abs() < 1e-8, "norm {norm}");
        let res = ode_residual_check(&s).unwrap();
        assert!(res < 1e-6, "residual {res}");
        assert_eq!(s.count_nodes(), Some(0));
    }

    #[test]
    fn excited_state_nodes() {
        let p = Params::new(&[("Z", 1.0), ("l", 1.0)]);
        let s = eigenstate(PotentialId::Coulomb, &p, &super::super::qn(&[("n", 4)])).unwrap();
        assert_eq!(s.count_nodes(), Some(2));
    }

    #[test]
    fn level_below_l_rejected() {
        let p = Params::new(&[("Z", 1.0), ("l", 2.0)]);
        match eigenstate(PotentialId::Coulomb, &p, &super::super::qn(&[("n", 2)])) {
            Err(CatalogError::LevelNotBound(_)) => {}
            other => panic!("expected LevelNotBound, got {:?}", other.map(|_| ())),
        }
    }
}
