//! Relativistic Schroedinger (spin-zero) Coulomb problem in units of
//! `mc^2` and the reduced Compton length (`x = (mc/hbar) r`), with the
//! coupling `mu = Z e^2 / (hbar c)`. The trial energy is `eps = E/mc^2`
//! inside (0, 1).
//!
//! Also hosts the nonrelativistic-limit check shared with the Dirac entry:
//! Richardson-style extrapolation of the exact level formulas in powers of
//! `mu^2` against the closed-form fine-structure coefficients.

use std::sync::Arc;

use super::common::{ln_gamma, power_exp, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, MappedForm, Params, ParamSpec, PotentialId,
    PotentialModel, QuantProbe, QuantumNumbers, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::poly_kernel::{ortho_eval, OrthoFamily};

pub struct RelativisticSchrodinger;

const SPECS: [ParamSpec; 2] = [
    ParamSpec::required("mu", "Coulomb coupling Z e^2 / (hbar c), below l + 1/2", 1e-9, 0.99),
    ParamSpec::integer("l", "orbital angular momentum", Some(0.0), 0.0, 50.0),
];

fn nu_of(mu: f64, l: f64) -> Result<f64, CatalogError> {
    let disc = (l + 0.5) * (l + 0.5) - mu * mu;
    if disc <= 0.0 {
        return Err(CatalogError::SupercriticalCharge { mu, kappa: l + 0.5 });
    }
    Ok(-0.5 + disc.sqrt())
}

fn equation(mu: f64, nu: f64, eps: f64) -> NuEquation {
    // sigma_tilde = (eps^2-1) x^2 + 2 mu eps x + mu^2 - l(l+1), with
    // mu^2 - l(l+1) = -nu(nu+1).
    NuEquation::new(
        LowPoly::linear(0.0, 1.0),
        LowPoly::quadratic(-nu * (nu + 1.0), 2.0 * mu * eps, eps * eps - 1.0),
        LowPoly::zero(),
        Interval::open(0.0, f64::INFINITY),
    )
    .expect("static shape")
}

fn level_eps(mu: f64, nu: f64, n_r: u32) -> f64 {
    let d = n_r as f64 + nu + 1.0;
    1.0 / (1.0 + (mu / d) * (mu / d)).sqrt()
}

impl PotentialModel for RelativisticSchrodinger {
    fn id(&self) -> PotentialId {
        PotentialId::RelativisticSchrodinger
    }

    fn title(&self) -> &'static str {
        "relativistic Schroedinger equation, Coulomb field"
    }

    fn energy_unit(&self) -> &'static str {
        "mc^2"
    }

    fn level_rule(&self) -> &'static str {
        "all n_r >= 0 bound while mu < l + 1/2"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &SPECS
    }

    fn primary_index(&self) -> &'static str {
        "n_r"
    }

    fn coordinate_map(&self, _p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(CoordinateMap::identity(Interval::open(0.0, f64::INFINITY)))
    }

    fn build_equation(&self, p: &Params, eps: f64) -> Result<NuEquation, CatalogError> {
        let mu = p.get("mu")?;
        let l = p.get_int("l")? as f64;
        if !(0.0 < eps && eps < 1.0) {
            return Err(CatalogError::InvalidParams(format!(
                "bound states need 0 < eps < 1, got {eps}"
            )));
        }
        Ok(equation(mu, nu_of(mu, l)?, eps))
    }

    fn expected_rows(&self, p: &Params, eps: f64) -> Result<TableRows, CatalogError> {
        let mu = p.get("mu")?;
        let nu = nu_of(mu, p.get_int("l")? as f64)?;
        let a = (1.0 - eps * eps).sqrt();
        Ok(TableRows {
            k: 2.0 * mu * eps - (2.0 * nu + 1.0) * a,
            pi: LowPoly::linear(nu + 1.0, -a),
            tau: LowPoly::linear(2.0 * (nu + 1.0), -2.0 * a),
            lambda: 2.0 * (mu * eps - (nu + 1.0) * a),
            phi: ExpPowerProduct::new(-a, 0.0, vec![(0.0, nu + 1.0)]),
            rho: ExpPowerProduct::new(-2.0 * a, 0.0, vec![(0.0, 2.0 * nu + 1.0)]),
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        vec![
            (Params::new(&[("mu", 0.3), ("l", 0.0)]), 0.8),
            (Params::new(&[("mu", 0.5), ("l", 1.0)]), 0.9),
            (Params::new(&[("mu", 0.8), ("l", 2.0)]), 0.95),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let mu = p.get("mu")?;
        let l = p.get_int("l")?;
        let nu = nu_of(mu, l as f64)?;
        Ok((0..=up_to.max(0))
            .map(|n_r| {
                BoundState::levels_only(
                    super::qn(&[("n_r", n_r), ("l", l)]),
                    level_eps(mu, nu, n_r as u32),
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let mu = p.get("mu")?;
        let l = p.get_int("l")?;
        let nu = nu_of(mu, l as f64)?;
        let n_r = require_qn(qn, "n_r")?;
        if n_r < 0 {
            return Err(CatalogError::LevelNotBound(format!("n_r = {n_r} < 0")));
        }
        let n_r = n_r as u32;
        let eps = level_eps(mu, nu, n_r);
        let a = (1.0 - eps * eps).sqrt();
        // u(x) = C x^{nu+1} e^{-a x} L_{n_r}^{2 nu + 1}(2 a x) with
        // int u^2 dx = 1:
        // C = (2a)^{nu + 3/2} sqrt(n_r! / (2 (nu + n_r + 1) Gamma(2 nu + n_r + 2))).
        let nf = n_r as f64;
        let ln_c = (nu + 1.5) * (2.0 * a).ln()
            + 0.5
                * (ln_gamma(nf + 1.0)?
                    - 2.0f64.ln()
                    - (nu + nf + 1.0).ln()
                    - ln_gamma(2.0 * nu + nf + 2.0)?);
        let alpha = 2.0 * nu + 1.0;
        let u = move |x: f64| {
            power_exp(ln_c, nu + 1.0, x, a)
                * ortho_eval(OrthoFamily::Laguerre { alpha }, n_r, 2.0 * a * x)
        };
        let window_hi = (2.0 * nu + 4.0 * nf + 12.0) / (2.0 * a);
        Ok(BoundState {
            quantum_numbers: super::qn(&[("n_r", n_r as i64), ("l", l)]),
            energy: eps,
            energy_unit: self.energy_unit(),
            normalization: Some(ln_c.exp()),
            wave_domain: Interval::open(0.0, f64::INFINITY),
            wave: Some(Arc::new(u)),
            polynomial_degree: Some(n_r as usize),
            mapped: Some(MappedForm {
                equation: equation(mu, nu, eps),
                u: Arc::new(u),
                sample_window: (0.01 * window_hi, window_hi),
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
        let mu = p.get("mu")?;
        let nu = nu_of(mu, p.get_int("l")? as f64)?;
        // k roots merge as eps -> 1; the next level bounds the bracket away
        // from the cancellation.
        Ok(Some(QuantProbe {
            bracket: (1e-9, level_eps(mu, nu, index as u32 + 1)),
            degree: index as u32,
            expected_energy: level_eps(mu, nu, index as u32),
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("mu", 0.3), ("l", 0.0)]),
                vec![super::qn(&[("n_r", 0)]), super::qn(&[("n_r", 1)])],
            ),
            (
                Params::new(&[("mu", 0.8), ("l", 1.0)]),
                vec![super::qn(&[("n_r", 0)]), super::qn(&[("n_r", 2)])],
            ),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FineStructureModel {
    SchrodingerRel,
    Dirac,
}

/// Extrapolated expansion coefficients of the exact level formula:
/// `eps(mu) = c0 + c2 mu^2 + c4 mu^4 + O(mu^6)`.
#[derive(Debug, Clone, Copy)]
pub struct FineStructureCoeffs {
    pub c0: f64,
    pub c2: f64,
    pub c4: f64,
}

/// Closed-form fine-structure coefficients: `c2 = -1/(2 n^2)` and
/// `c4 = -(1/(2 n^4)) (n/(x + 1/2) - 3/4)` with `x = l` (spin zero) or
/// `x = j` (Dirac), `n = n_r + x + 1` resp. `n_r + j + 1/2`.
pub fn fine_structure_expected(model: FineStructureModel, n_r: u32, l_or_j: f64) -> (f64, f64) {
    let n = match model {
        FineStructureModel::SchrodingerRel => n_r as f64 + l_or_j + 1.0,
        FineStructureModel::Dirac => n_r as f64 + l_or_j + 0.5,
    };
    let c2 = -1.0 / (2.0 * n * n);
    let c4 = -(1.0 / (2.0 * n.powi(4))) * (n / (l_or_j + 0.5) - 0.75);
    (c2, c4)
}

/// Exact `eps(mu)` for either relativistic level formula.
pub fn exact_level(model: FineStructureModel, n_r: u32, l_or_j: f64, mu: f64) -> f64 {
    match model {
        FineStructureModel::SchrodingerRel => {
            let nu = -0.5 + ((l_or_j + 0.5).powi(2) - mu * mu).sqrt();
            level_eps(mu, nu, n_r)
        }
        FineStructureModel::Dirac => {
            let nu = ((l_or_j + 0.5).powi(2) - mu * mu).sqrt();
            let d = n_r as f64 + nu;
            1.0 / (1.0 + (mu / d) * (mu / d)).sqrt()
        }
    }
}

/// Polynomial extrapolation to zero through the given (t, value) points.
fn neville_at_zero(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    let mut v: Vec<f64> = points.iter().map(|p| p.1).collect();
    for level in 1..n {
        for i in 0..n - level {
            let (t_i, t_j) = (points[i].0, points[i + level].0);
            v[i] = (t_i * v[i + 1] - t_j * v[i]) / (t_i - t_j);
        }
    }
    v[0]
}

/// Extrapolate the `1, mu^2, mu^4` coefficients of the exact level formula
/// from the three given samples. The rest-mass limit `eps(0) = 1` is an
/// exact evaluation of the formula and anchors the higher coefficients; the
/// two expansion claims under test are `c2` and `c4`.
pub fn fine_structure_expansion_check(
    model: FineStructureModel,
    n_r: u32,
    l_or_j: f64,
    mu_samples: &[f64],
) -> Result<FineStructureCoeffs, CatalogError> {
    if mu_samples.len() != 3 {
        return Err(CatalogError::InvalidParams(format!(
            "need exactly 3 mu samples, got {}",
            mu_samples.len()
        )));
    }
    for w in mu_samples.windows(2) {
        if w[1] >= w[0] {
            return Err(CatalogError::InvalidParams("mu samples must be decreasing".into()));
        }
    }
    if mu_samples[0] > 0.2 || mu_samples[2] <= 0.0 {
        return Err(CatalogError::InvalidParams("mu samples must lie in (0, 0.2]".into()));
    }
    let pts: Vec<(f64, f64)> = mu_samples
        .iter()
        .map(|&mu| (mu * mu, exact_level(model, n_r, l_or_j, mu)))
        .collect();
    let c0 = neville_at_zero(&pts);

    let g: Vec<(f64, f64)> = pts.iter().map(|&(t, f)| (t, (f - 1.0) / t)).collect();
    let c2 = neville_at_zero(&g);
    let h: Vec<(f64, f64)> = g.iter().map(|&(t, gv)| (t, (gv - c2) / t)).collect();
    let c4 = neville_at_zero(&h);
    // Stability guard: the two-point sub-extrapolation from the finer pair
    // has to land near the three-point answer.
    let c4_pair = neville_at_zero(&h[1..]);
    if (c4_pair - c4).abs() > 0.05 * c4.abs().max(1e-12) {
        return Err(CatalogError::InvalidParams(format!(
            "extrapolation unstable: {c4} vs pairwise {c4_pair}"
        )));
    }
    Ok(FineStructureCoeffs { c0, c2, c4 })
}
