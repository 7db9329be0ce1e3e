//! Generalized exponential well `U(r) = D (1 - gamma/(e^{a r} - 1))^2` with
//! `gamma = e^{a r0} - 1` and `U(inf) = D`, mapped through
//! `eta = 1/(e^{a r} - 1)`. Up to the constant shift `D` this is the
//! two-parameter screened well under `V0 = 2D gamma`, `b = (1+e^{a r0})/2`,
//! `a_screen = 1/a`.
//! Units `hbar = m = 1`; `kappa = 2D/a^2`, trial energy `E` in (0, D).

use std::sync::Arc;

use super::common::{ln_gamma, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, FdProblem, MappedForm, Params, ParamSpec,
    PotentialId, PotentialModel, QuantProbe, QuantumNumbers, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::numeric_oracle::GridSpec;
use crate::poly_kernel::hyp2f1_terminating;

pub struct GeneralizedMorse;

const SPECS: [ParamSpec; 3] = [
    ParamSpec::required("D", "dissociation plateau", 1e-12, 1e12),
    ParamSpec::optional("a", "exponential rate", 1.0, 1e-9, 1e9),
    ParamSpec::optional("r0", "equilibrium distance", 1.0, 1e-12, 1e12),
];

/// Map `(D, rate, r0)` onto the screened-well parameters `(V0, b, a)`.
pub fn generalized_morse_params(d: f64, rate: f64, r0: f64) -> (f64, f64, f64) {
    let e = (rate * r0).exp();
    (2.0 * d * (e - 1.0), 0.5 * (1.0 + e), 1.0 / rate)
}

struct Data {
    d: f64,
    rate: f64,
    kappa: f64,
    gamma: f64,
    delta: f64,
}

fn data(p: &Params) -> Result<Data, CatalogError> {
    let d = p.get("D")?;
    let rate = p.get("a")?;
    let r0 = p.get("r0")?;
    let kappa = 2.0 * d / (rate * rate);
    let gamma = (rate * r0).exp() - 1.0;
    let delta = 0.5 + (0.25 + kappa * gamma * gamma).sqrt();
    let _ = r0;
    Ok(Data { d, rate, kappa, gamma, delta })
}

fn alpha_beta(dd: &Data, e: f64) -> Result<(f64, f64), CatalogError> {
    if !(0.0 < e && e < dd.d) {
        return Err(CatalogError::InvalidParams(format!(
            "bound states need 0 < E < D = {}, got {e}",
            dd.d
        )));
    }
    let eps = 2.0 * e / (dd.rate * dd.rate);
    Ok((
        (dd.kappa - eps).sqrt(),
        (dd.kappa * (dd.gamma + 1.0) * (dd.gamma + 1.0) - eps).sqrt(),
    ))
}

fn equation(dd: &Data, e: f64) -> Result<NuEquation, CatalogError> {
    let eps = 2.0 * e / (dd.rate * dd.rate);
    let (g, k) = (dd.gamma, dd.kappa);
    Ok(NuEquation::new(
        LowPoly::quadratic(0.0, 1.0, 1.0),
        LowPoly::quadratic(eps - k, 2.0 * k * g, -k * g * g),
        LowPoly::linear(1.0, 2.0),
        Interval::open(0.0, f64::INFINITY),
    )
    .expect("static shape"))
}

fn alpha_level(dd: &Data, n: f64) -> f64 {
    let s = n + dd.delta;
    0.5 * (dd.kappa * dd.gamma * (dd.gamma + 2.0) / s - s)
}

fn level_count(dd: &Data) -> i64 {
    let bound = (dd.kappa * dd.gamma * (dd.gamma + 2.0)).sqrt() - dd.delta;
    if bound <= 0.0 {
        return 0;
    }
    let mut count = bound.ceil() as i64;
    if (bound - bound.floor()).abs() < 1e-12 {
        count = bound as i64;
    }
    count.max(0)
}

impl PotentialModel for GeneralizedMorse {
    fn id(&self) -> PotentialId {
        PotentialId::GeneralizedMorse
    }

    fn title(&self) -> &'static str {
        "generalized exponential well with finite plateau"
    }

    fn energy_unit(&self) -> &'static str {
        "hbar = m = 1 natural units"
    }

    fn level_rule(&self) -> &'static str {
        "n + delta < sqrt(kappa gamma (gamma + 2))"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &SPECS
    }

    fn primary_index(&self) -> &'static str {
        "n"
    }

    fn coordinate_map(&self, p: &Params) -> Result<CoordinateMap, CatalogError> {
        let rate = data(p)?.rate;
        Ok(CoordinateMap {
            forward: Arc::new(move |r: f64| 1.0 / ((rate * r).exp() - 1.0)),
            inverse: Arc::new(move |eta: f64| (1.0 + 1.0 / eta).ln() / rate),
            jacobian: Arc::new(move |r: f64| {
                let e = (rate * r).exp();
                -rate * e / ((e - 1.0) * (e - 1.0))
            }),
            physical_domain: Interval::open(0.0, f64::INFINITY),
            mapped_domain: Interval::open(0.0, f64::INFINITY),
        })
    }

    fn build_equation(&self, p: &Params, e: f64) -> Result<NuEquation, CatalogError> {
        let dd = data(p)?;
        alpha_beta(&dd, e)?;
        equation(&dd, e)
    }

    fn expected_rows(&self, p: &Params, e: f64) -> Result<TableRows, CatalogError> {
        let dd = data(p)?;
        let (alpha, beta) = alpha_beta(&dd, e)?;
        let (g, k) = (dd.gamma, dd.kappa);
        Ok(TableRows {
            k: 2.0 * (alpha * alpha - alpha * beta + k * g),
            pi: LowPoly::linear(alpha, alpha - beta),
            tau: LowPoly::linear(2.0 * alpha + 1.0, 2.0 * (alpha - beta + 1.0)),
            lambda: alpha - beta + 2.0 * alpha * alpha - 2.0 * alpha * beta + 2.0 * k * g,
            phi: ExpPowerProduct::new(0.0, 0.0, vec![(0.0, alpha), (-1.0, -beta)]),
            rho: ExpPowerProduct::new(0.0, 0.0, vec![(0.0, 2.0 * alpha), (-1.0, -2.0 * beta)]),
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        // kappa = 2D/a^2, eps = 2E/a^2: the first entry has kappa = 2,
        // gamma = 1, eps = 1 (E = 1/2).
        let r0_gamma1 = 2.0f64.ln();
        vec![
            (Params::new(&[("D", 1.0), ("a", 1.0), ("r0", r0_gamma1)]), 0.5),
            (Params::new(&[("D", 2.5), ("a", 1.0), ("r0", 3.0f64.ln())]), 1.5),
            (Params::new(&[("D", 4.0), ("a", 1.0), ("r0", 2.5f64.ln())]), 1.0),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let dd = data(p)?;
        let count = level_count(&dd);
        if count == 0 {
            return Err(CatalogError::NoBoundStates(format!(
                "no level satisfies n + delta < sqrt(kappa gamma (gamma+2)) = {}",
                (dd.kappa * dd.gamma * (dd.gamma + 2.0)).sqrt()
            )));
        }
        Ok((0..count.min(up_to.max(0) + 1))
            .map(|n| {
                let alpha = alpha_level(&dd, n as f64);
                BoundState::levels_only(
                    super::qn(&[("n", n)]),
                    dd.d - 0.5 * dd.rate * dd.rate * alpha * alpha,
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let dd = data(p)?;
        let n = require_qn(qn, "n")?;
        if n < 0 || n >= level_count(&dd) {
            return Err(CatalogError::LevelNotBound(format!(
                "level n = {n} exceeds the finite set of bound states"
            )));
        }
        let n_u = n as u32;
        let nf = n as f64;
        let alpha = alpha_level(&dd, nf);
        let e = dd.d - 0.5 * dd.rate * dd.rate * alpha * alpha;
        let delta = dd.delta;
        // C_n^2 = a (alpha+n+delta) G(2a+n+1) G(2a+n+2delta)
        //         / (n! (n+delta) G(2a) G(2a+1) G(n+2delta)).
        let ln_c2 = dd.rate.ln() + (alpha + nf + delta).ln()
            + ln_gamma(2.0 * alpha + nf + 1.0)?
            + ln_gamma(2.0 * alpha + nf + 2.0 * delta)?
            - ln_gamma(nf + 1.0)?
            - (nf + delta).ln()
            - ln_gamma(2.0 * alpha)?
            - ln_gamma(2.0 * alpha + 1.0)?
            - ln_gamma(nf + 2.0 * delta)?;
        let c = (0.5 * ln_c2).exp();
        let rate = dd.rate;
        let psi = move |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            let xi = (-rate * r).exp();
            c * (-alpha * rate * r).exp()
                * (1.0 - xi).powf(delta)
                * hyp2f1_terminating(
                    -(n_u as i32),
                    2.0 * alpha + 2.0 * delta + nf,
                    2.0 * alpha + 1.0,
                    xi,
                )
                .unwrap_or(f64::NAN)
        };
        let u = move |eta: f64| {
            if eta <= 0.0 {
                return 0.0;
            }
            psi((1.0 + 1.0 / eta).ln() / rate)
        };
        Ok(BoundState {
            quantum_numbers: super::qn(&[("n", n)]),
            energy: e,
            energy_unit: self.energy_unit(),
            normalization: Some(c),
            wave_domain: Interval::open(0.0, f64::INFINITY),
            wave: Some(Arc::new(psi)),
            polynomial_degree: Some(n as usize),
            mapped: Some(MappedForm {
                equation: equation(&dd, e)?,
                u: Arc::new(u),
                sample_window: (0.05, 30.0),
            }),
        })
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        let dd = data(p)?;
        if index < 0 || index >= level_count(&dd) {
            return Ok(None);
        }
        // The generic branch rules need the weight to decay at infinity over
        // the whole bracket, i.e. sqrt(kappa) gamma > 1 at the E -> 0 end.
        if dd.kappa.sqrt() * dd.gamma <= 1.2 {
            return Ok(None);
        }
        let alpha = alpha_level(&dd, index as f64);
        let e_of = |a: f64| dd.d - 0.5 * dd.rate * dd.rate * a * a;
        Ok(Some(QuantProbe {
            bracket: (1e-9 * dd.d, e_of(0.5 * alpha)),
            degree: index as u32,
            expected_energy: e_of(alpha),
        }))
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let dd = data(p)?;
        let count = level_count(&dd);
        if count == 0 {
            return Ok(None);
        }
        let compare = count.min(3) as usize;
        let alpha_min = alpha_level(&dd, compare as f64 - 1.0);
        let span = 38.0 / (dd.rate * alpha_min.min(1.0));
        let (d, rate, gamma) = (dd.d, dd.rate, dd.gamma);
        Ok(Some(FdProblem {
            grid: GridSpec::dirichlet(1e-7 * span, span, 14001),
            potential: Arc::new(move |r| {
                let t = 1.0 - gamma / ((rate * r).exp() - 1.0);
                2.0 * d * t * t
            }),
            eigenvalue_of_energy: Arc::new(|e| 2.0 * e),
            compare,
            subset_match: false,
            rel_tol: 1e-3,
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("D", 5.0), ("a", 1.0), ("r0", 3.0f64.ln())]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 1)])],
            ),
            (
                Params::new(&[("D", 12.0), ("a", 2.0), ("r0", 0.8)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 1)])],
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential_catalog::{
        eigenstate, ode_residual_check, spectrum, Params, PotentialId,
    };

    #[test]
    fn screened_well_parameter_map() {
        // a r0 = ln 3 gives b = 2 and V0 = 4D.
        let (v0, b, a) = generalized_morse_params(1.5, 1.0, 3.0f64.ln());
        assert!((b - 2.0).abs() < 1e-14);
        assert!((v0 - 6.0).abs() < 1e-13);
        assert!((a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn delta_equals_screened_kappa_plus_half() {
        for (d, rate, r0) in [
            (1.0, 1.0, 3.0f64.ln()),
            (5.0, 1.0, 3.0f64.ln()),
            (2.0, 0.7, 1.1),
            (8.0, 2.0, 0.6),
            (3.0, 1.3, 0.9),
        ] {
            let dd = data(&Params::new(&[("D", d), ("a", rate), ("r0", r0)])).unwrap();
            let (v0, b, a_s) = generalized_morse_params(d, rate, r0);
            let beta2 = 2.0 * v0 * a_s * a_s;
            let kappa_screen = (0.25 + (b - 1.0) * beta2).sqrt();
            assert!(
                (dd.delta - (kappa_screen + 0.5)).abs() < 1e-10,
                "delta {} vs kappa + 1/2 {}",
                dd.delta,
                kappa_screen + 0.5
            );
        }
    }

    #[test]
    fn spectrum_matches_screened_well_after_shift() {
        // E_gm(n) = E_screen(n) + D under the parameter map.
        let (d, rate, r0) = (5.0, 1.0, 3.0f64.ln());
        let p = Params::new(&[("D", d), ("a", rate), ("r0", r0)]);
        let gm = spectrum(PotentialId::GeneralizedMorse, &p, 1).unwrap();
        let (v0, b, a_s) = generalized_morse_params(d, rate, r0);
        let ps = Params::new(&[("V0", v0), ("a", a_s), ("b", b)]);
        let mh = spectrum(PotentialId::ModifiedHulthen, &ps, 1).unwrap();
        for (g, m) in gm.iter().zip(&mh) {
            assert!(
                (g.energy - (m.energy + d)).abs() < 1e-9 * d,
                "{} vs {} + {d}",
                g.energy,
                m.energy
            );
        }
    }

    #[test]
    fn states_normalized_even_with_nonunit_rate() {
        for (dp, rate, r0) in [(5.0, 1.0, 3.0f64.ln()), (12.0, 2.0, 0.8), (9.0, 0.5, 2.2)] {
            let p = Params::new(&[("D", dp), ("a", rate), ("r0", r0)]);
            let s = eigenstate(PotentialId::GeneralizedMorse, &p, &super::super::qn(&[("n", 0)]))
                .unwrap();
            let norm = s.normalization_check(1e-10).unwrap();
            assert!((norm - 1.0).abs() < 1e-7, "rate {rate}: norm {norm}");
            assert!(ode_residual_check(&s).unwrap() < 1e-6);
        }
    }
}
