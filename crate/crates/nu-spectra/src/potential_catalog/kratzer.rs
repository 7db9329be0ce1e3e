//! Molecular potential `U(r) = -2D (a/r - a^2/(2 r^2))` with minimum `-D`
//! at `r = a`; dimensionless coordinate `x = r/a`, `gamma^2 = 2 m a^2 D /
//! hbar^2` and trial energy `E` in natural units (`hbar = m = 1`).

use std::sync::Arc;

use super::common::{ln_gamma, power_exp, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, FdProblem, MappedForm, Params, ParamSpec,
    PotentialId, PotentialModel, QuantProbe, QuantumNumbers, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::numeric_oracle::GridSpec;
use crate::poly_kernel::{ortho_eval, OrthoFamily};

pub struct KratzerModel;

const SPECS: [ParamSpec; 3] = [
    ParamSpec::required("gamma2", "dimensionless well depth 2 m a^2 D / hbar^2", 1e-9, 1e9),
    ParamSpec::integer("l", "orbital angular momentum", Some(0.0), 0.0, 50.0),
    ParamSpec::optional("a", "equilibrium radius", 1.0, 1e-9, 1e9),
];

struct Data {
    gamma2: f64,
    nu: f64,
    a: f64,
    l: f64,
}

fn data(p: &Params) -> Result<Data, CatalogError> {
    let gamma2 = p.get("gamma2")?;
    let l = p.get_int("l")? as f64;
    let a = p.get("a")?;
    let nu = 0.5 + (gamma2 + (l + 0.5) * (l + 0.5)).sqrt();
    Ok(Data { gamma2, nu, a, l })
}

fn beta_of_energy(d: &Data, e: f64) -> Result<f64, CatalogError> {
    if e >= 0.0 {
        return Err(CatalogError::InvalidParams(format!("bound states need E < 0, got {e}")));
    }
    Ok((-2.0 * d.a * d.a * e).sqrt())
}

fn equation(d: &Data, beta: f64) -> NuEquation {
    NuEquation::new(
        LowPoly::linear(0.0, 1.0),
        LowPoly::quadratic(
            -d.gamma2 - d.l * (d.l + 1.0),
            2.0 * d.gamma2,
            -beta * beta,
        ),
        LowPoly::zero(),
        Interval::open(0.0, f64::INFINITY),
    )
    .expect("static shape")
}

impl PotentialModel for KratzerModel {
    fn id(&self) -> PotentialId {
        PotentialId::Kratzer
    }

    fn title(&self) -> &'static str {
        "Kratzer molecular potential"
    }

    fn energy_unit(&self) -> &'static str {
        "hbar = m = 1 natural units"
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
        let a = p.get("a")?;
        Ok(CoordinateMap {
            forward: Arc::new(move |r| r / a),
            inverse: Arc::new(move |x| x * a),
            jacobian: Arc::new(move |_| 1.0 / a),
            physical_domain: Interval::open(0.0, f64::INFINITY),
            mapped_domain: Interval::open(0.0, f64::INFINITY),
        })
    }

    fn build_equation(&self, p: &Params, e: f64) -> Result<NuEquation, CatalogError> {
        let d = data(p)?;
        let beta = beta_of_energy(&d, e)?;
        Ok(equation(&d, beta))
    }

    fn expected_rows(&self, p: &Params, e: f64) -> Result<TableRows, CatalogError> {
        let d = data(p)?;
        let beta = beta_of_energy(&d, e)?;
        Ok(TableRows {
            k: 2.0 * d.gamma2 - beta * (2.0 * d.nu - 1.0),
            pi: LowPoly::linear(d.nu, -beta),
            tau: LowPoly::linear(2.0 * d.nu, -2.0 * beta),
            lambda: 2.0 * (d.gamma2 - d.nu * beta),
            phi: ExpPowerProduct::new(-beta, 0.0, vec![(0.0, d.nu)]),
            rho: ExpPowerProduct::new(-2.0 * beta, 0.0, vec![(0.0, 2.0 * d.nu - 1.0)]),
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        // Trial energies corresponding to beta = 0.5, 0.8, 1.7 at a = 1.
        vec![
            (Params::new(&[("gamma2", 1.0), ("l", 0.0), ("a", 1.0)]), -0.125),
            (Params::new(&[("gamma2", 2.0), ("l", 1.0), ("a", 1.0)]), -0.32),
            (Params::new(&[("gamma2", 5.0), ("l", 0.0), ("a", 1.0)]), -1.445),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let d = data(p)?;
        let l = p.get_int("l")?;
        Ok((0..=up_to.max(0))
            .map(|n| {
                let beta = d.gamma2 / (d.nu + n as f64);
                BoundState::levels_only(
                    super::qn(&[("n", n), ("l", l)]),
                    -beta * beta / (2.0 * d.a * d.a),
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let d = data(p)?;
        let l = p.get_int("l")?;
        let n = require_qn(qn, "n")?;
        if n < 0 {
            return Err(CatalogError::LevelNotBound(format!("n = {n} < 0")));
        }
        let n = n as u32;
        let nf = n as f64;
        let beta = d.gamma2 / (d.nu + nf);
        let e = -beta * beta / (2.0 * d.a * d.a);
        // C_n^2 = (2 beta)^{2 nu + 1} n! / (a (2 nu + 2n) Gamma(2 nu + n)).
        let ln_c = 0.5
            * ((2.0 * d.nu + 1.0) * (2.0 * beta).ln() + ln_gamma(nf + 1.0)?
                - d.a.ln()
                - (2.0 * d.nu + 2.0 * nf).ln()
                - ln_gamma(2.0 * d.nu + nf)?);
        let alpha = 2.0 * d.nu - 1.0;
        let nu = d.nu;
        let u = move |x: f64| {
            power_exp(ln_c, nu, x, beta) * ortho_eval(OrthoFamily::Laguerre { alpha }, n, 2.0 * beta * x)
        };
        let a_len = d.a;
        let psi = move |r: f64| u(r / a_len);
        let x_hi = (2.0 * d.nu + 4.0 * nf + 12.0) / (2.0 * beta);
        Ok(BoundState {
            quantum_numbers: super::qn(&[("n", n as i64), ("l", l)]),
            energy: e,
            energy_unit: self.energy_unit(),
            normalization: Some(ln_c.exp()),
            wave_domain: Interval::open(0.0, f64::INFINITY),
            wave: Some(Arc::new(psi)),
            polynomial_degree: Some(n as usize),
            mapped: Some(MappedForm {
                equation: equation(&d, beta),
                u: Arc::new(u),
                sample_window: (0.02 * x_hi, x_hi),
            }),
        })
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        if index < 0 {
            return Ok(None);
        }
        let d = data(p)?;
        let beta = d.gamma2 / (d.nu + index as f64);
        let beta_hi = 2.0 * d.gamma2 / d.nu;
        let beta_next = d.gamma2 / (d.nu + index as f64 + 1.0);
        Ok(Some(QuantProbe {
            bracket: (
                -beta_hi * beta_hi / (2.0 * d.a * d.a),
                -beta_next * beta_next / (2.0 * d.a * d.a),
            ),
            degree: index as u32,
            expected_energy: -beta * beta / (2.0 * d.a * d.a),
        }))
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let d = data(p)?;
        let (g2, l, a) = (d.gamma2, d.l, d.a);
        let x_max = 35.0 * (d.nu + 3.0) / d.gamma2;
        Ok(Some(FdProblem {
            // Mapped coordinate x = r/a; eigenvalue is -beta^2 = 2 a^2 E.
            grid: GridSpec::dirichlet(1e-6 * x_max, x_max, 8001),
            potential: Arc::new(move |x| {
                -2.0 * g2 / x + (g2 + l * (l + 1.0)) / (x * x)
            }),
            eigenvalue_of_energy: Arc::new(move |e| 2.0 * a * a * e),
            compare: 3,
            subset_match: false,
            rel_tol: 1e-3,
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("gamma2", 2.0), ("l", 0.0), ("a", 1.0)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 1)])],
            ),
            (
                Params::new(&[("gamma2", 5.0), ("l", 1.0), ("a", 0.8)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 2)])],
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential_catalog::{
        eigenstate, ode_residual_check, orthogonality_check, spectrum, PotentialId,
    };

    #[test]
    fn levels_follow_effective_quantum_number() {
        let p = Params::new(&[("gamma2", 2.0), ("l", 0.0), ("a", 1.0)]);
        let d = data(&p).unwrap();
        let states = spectrum(PotentialId::Kratzer, &p, 2).unwrap();
        for (n, s) in states.iter().enumerate() {
            let beta = 2.0 / (d.nu + n as f64);
            assert!((s.energy + 0.5 * beta * beta).abs() < 1e-14);
        }
    }

    #[test]
    fn states_normalized_orthogonal() {
        let p = Params::new(&[("gamma2", 2.0), ("l", 0.0), ("a", 1.0)]);
        let s0 = eigenstate(PotentialId::Kratzer, &p, &super::super::qn(&[("n", 0)])).unwrap();
        let s1 = eigenstate(PotentialId::Kratzer, &p, &super::super::qn(&[("n", 1)])).unwrap();
        assert!((s0.normalization_check(1e-10).unwrap() - 1.0).abs() < 1e-7);
        let overlap = orthogonality_check(&s0, &s1, 1e-9).unwrap();
        assert!(overlap.abs() < 1e-6, "overlap {overlap}");
        assert!(ode_residual_check(&s1).unwrap() < 1e-6);
        assert_eq!(s1.count_nodes(), Some(1));
    }
}
