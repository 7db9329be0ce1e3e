//! Screened Coulomb wells mapped through `xi = exp(-r/a)`: the original
//! hole `-V0 xi/(1 - xi)`, its two-parameter extension
//! `-V0 xi (1 - b xi)/(1 - xi)^2`, and the rotating version of the latter
//! with the centrifugal term expanded around the potential minimum.
//!
//! For these wells the linear coefficient of the reduced equation depends on
//! the energy through the decay exponent `alpha(E)`, so spectra come from
//! the series-termination condition; the reduction path is still exercised
//! as a verification (both routes agree identically).
//! Units `hbar = m = 1`; `beta^2 = 2 m V0 a^2 / hbar^2`.

use std::sync::Arc;

use super::common::{ln_gamma, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, FdProblem, MappedForm, Params, ParamSpec,
    PotentialId, PotentialModel, QuantProbe, QuantumNumbers, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::numeric_oracle::GridSpec;
use crate::poly_kernel::{hyp2f1_terminating, pochhammer};

fn exp_map(a: f64) -> CoordinateMap {
    CoordinateMap {
        forward: Arc::new(move |r: f64| (-r / a).exp()),
        inverse: Arc::new(move |xi: f64| -a * xi.ln()),
        jacobian: Arc::new(move |r: f64| -(-r / a).exp() / a),
        physical_domain: Interval::open(0.0, f64::INFINITY),
        mapped_domain: Interval::open(0.0, 1.0),
    }
}

// ---------------------------------------------------------------------------
// Original well
// ---------------------------------------------------------------------------

pub struct HulthenModel;

const HULTHEN_SPECS: [ParamSpec; 2] = [
    ParamSpec::required("beta2", "dimensionless hole size 2 m V0 a^2 / hbar^2", 1e-9, 1e9),
    ParamSpec::optional("V0", "well depth", 1.0, 1e-12, 1e12),
];

struct HulthenData {
    beta2: f64,
    v0: f64,
    a: f64,
}

fn hulthen_data(p: &Params) -> Result<HulthenData, CatalogError> {
    let beta2 = p.get("beta2")?;
    let v0 = p.get("V0")?;
    Ok(HulthenData { beta2, v0, a: (beta2 / (2.0 * v0)).sqrt() })
}

fn hulthen_alpha(d: &HulthenData, e: f64) -> Result<f64, CatalogError> {
    if e >= 0.0 {
        return Err(CatalogError::InvalidParams(format!("bound states need E < 0, got {e}")));
    }
    Ok((-2.0 * d.a * d.a * e).sqrt())
}

fn hulthen_equation(beta2: f64, alpha: f64) -> NuEquation {
    let a2 = alpha * alpha;
    NuEquation::new(
        LowPoly::quadratic(0.0, 1.0, -1.0),
        LowPoly::quadratic(-a2, 2.0 * a2 + beta2, -(a2 + beta2)),
        LowPoly::linear(1.0, -1.0),
        Interval::open(0.0, 1.0),
    )
    .expect("static shape")
}

fn hulthen_level_count(beta2: f64) -> i64 {
    // n^2 < beta^2, n >= 1.
    let bound = beta2.sqrt();
    let mut max = bound.ceil() as i64 - 1;
    if (bound - bound.round()).abs() < 1e-12 {
        max = bound.round() as i64 - 1;
    }
    max.max(0)
}

impl PotentialModel for HulthenModel {
    fn id(&self) -> PotentialId {
        PotentialId::Hulthen
    }

    fn title(&self) -> &'static str {
        "screened Coulomb hole (exponential screening)"
    }

    fn energy_unit(&self) -> &'static str {
        "V0 and hbar = m = 1 natural units"
    }

    fn level_rule(&self) -> &'static str {
        "n^2 < beta^2, n = 1, 2, ..."
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &HULTHEN_SPECS
    }

    fn primary_index(&self) -> &'static str {
        "n"
    }

    fn coordinate_map(&self, p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(exp_map(hulthen_data(p)?.a))
    }

    fn build_equation(&self, p: &Params, e: f64) -> Result<NuEquation, CatalogError> {
        let d = hulthen_data(p)?;
        Ok(hulthen_equation(d.beta2, hulthen_alpha(&d, e)?))
    }

    fn expected_rows(&self, p: &Params, e: f64) -> Result<TableRows, CatalogError> {
        let d = hulthen_data(p)?;
        let alpha = hulthen_alpha(&d, e)?;
        Ok(TableRows {
            k: d.beta2 - alpha,
            pi: LowPoly::linear(alpha, -(alpha + 1.0)),
            tau: LowPoly::linear(2.0 * alpha + 1.0, -(2.0 * alpha + 3.0)),
            lambda: d.beta2 - 2.0 * alpha - 1.0,
            phi: ExpPowerProduct::new(0.0, 0.0, vec![(0.0, alpha), (1.0, 1.0)]),
            rho: ExpPowerProduct::new(0.0, 0.0, vec![(0.0, 2.0 * alpha), (1.0, 1.0)]),
        })
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        // Trial energies E = -V0 alpha^2 / beta^2 with alpha = 0.5, 0.2, 1.1.
        vec![
            (Params::new(&[("beta2", 2.0), ("V0", 1.0)]), -0.125),
            (Params::new(&[("beta2", 1.5), ("V0", 1.0)]), -0.04 / 1.5),
            (Params::new(&[("beta2", 9.0), ("V0", 2.0)]), -2.0 * 1.21 / 9.0),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let d = hulthen_data(p)?;
        let count = hulthen_level_count(d.beta2);
        if count == 0 {
            return Err(CatalogError::NoBoundStates(format!(
                "minimum size of potential hole is beta^2 = 1, got beta^2 = {}",
                d.beta2
            )));
        }
        Ok((1..=count.min(up_to.max(1)))
            .map(|n| {
                let nf = n as f64;
                let alpha = (d.beta2 - nf * nf) / (2.0 * nf);
                let e = -d.v0 * alpha * alpha / d.beta2;
                BoundState::levels_only(super::qn(&[("n", n)]), e, self.energy_unit())
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let d = hulthen_data(p)?;
        let n = require_qn(qn, "n")?;
        if n < 1 || n > hulthen_level_count(d.beta2) {
            return Err(CatalogError::LevelNotBound(format!(
                "level n = {n} violates 1 <= n^2 < beta^2 = {}",
                d.beta2
            )));
        }
        let nf = n as f64;
        let n_u = n as u32;
        let alpha = (d.beta2 - nf * nf) / (2.0 * nf);
        let e = -d.v0 * alpha * alpha / d.beta2;
        // C_n = ((2 alpha)_n / n!) sqrt((alpha + n)(2 alpha + n) / (2 alpha a)).
        let c = pochhammer(2.0 * alpha, n_u) / (ln_gamma(nf + 1.0)?).exp()
            * ((alpha + nf) * (2.0 * alpha + nf) / (2.0 * alpha * d.a)).sqrt();
        let u = move |xi: f64| {
            if xi <= 0.0 || xi >= 1.0 {
                return 0.0;
            }
            c * xi.powf(alpha)
                * (1.0 - xi)
                * hyp2f1_terminating(1 - n_u as i32, 1.0 + 2.0 * alpha + nf, 2.0 * alpha + 1.0, xi)
                    .unwrap_or(f64::NAN)
        };
        let a_len = d.a;
        let psi = move |r: f64| u((-r / a_len).exp());
        Ok(BoundState {
            quantum_numbers: super::qn(&[("n", n)]),
            energy: e,
            energy_unit: self.energy_unit(),
            normalization: Some(c),
            wave_domain: Interval::open(0.0, f64::INFINITY),
            wave: Some(Arc::new(psi)),
            polynomial_degree: Some((n - 1) as usize),
            mapped: Some(MappedForm {
                equation: hulthen_equation(d.beta2, alpha),
                u: Arc::new(u),
                sample_window: (0.02, 0.98),
            }),
        })
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        let d = hulthen_data(p)?;
        if index < 1 || index > hulthen_level_count(d.beta2) {
            return Ok(None);
        }
        let nf = index as f64;
        let alpha = (d.beta2 - nf * nf) / (2.0 * nf);
        // Energy of alpha/2 bounds the bracket away from the k-merge at
        // alpha = 0 while keeping the target's sign change inside.
        let e_of = |a: f64| -d.v0 * a * a / d.beta2;
        Ok(Some(QuantProbe {
            bracket: (e_of(2.0 * d.beta2), e_of(0.5 * alpha)),
            // The series terminates with polynomial degree n - 1.
            degree: (index - 1) as u32,
            expected_energy: e_of(alpha),
        }))
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let d = hulthen_data(p)?;
        let count = hulthen_level_count(d.beta2);
        if count == 0 {
            return Ok(None);
        }
        let n_max = count.min(3) as f64;
        let alpha_min = (d.beta2 - n_max * n_max) / (2.0 * n_max);
        let span = 35.0 * d.a / alpha_min.min(1.0);
        let (v0, a) = (d.v0, d.a);
        Ok(Some(FdProblem {
            grid: GridSpec::dirichlet(1e-6 * span, span, 12001),
            potential: Arc::new(move |r| {
                let xi = (-r / a).exp();
                -2.0 * v0 * xi / (1.0 - xi)
            }),
            eigenvalue_of_energy: Arc::new(|e| 2.0 * e),
            compare: count.min(3) as usize,
            subset_match: false,
            rel_tol: 1e-3,
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("beta2", 9.0), ("V0", 1.0)]),
                vec![super::qn(&[("n", 1)]), super::qn(&[("n", 2)])],
            ),
            (
                Params::new(&[("beta2", 25.0), ("V0", 2.0)]),
                vec![super::qn(&[("n", 1)]), super::qn(&[("n", 3)])],
            ),
        ]
    }
}

// ---------------------------------------------------------------------------
// Two-parameter extension
// ---------------------------------------------------------------------------

pub struct ModifiedHulthen;

const MOD_SPECS: [ParamSpec; 3] = [
    ParamSpec::optional("V0", "well depth", 1.0, 1e-12, 1e12),
    ParamSpec::optional("a", "screening length", 1.0, 1e-12, 1e12),
    ParamSpec::required("b", "shape parameter, above 1", 1.0 + 1e-12, 1e9),
];

#[derive(Clone, Copy)]
struct ModData {
    v0: f64,
    a: f64,
    b: f64,
    beta2: f64,
    kappa: f64,
}

fn mod_data(p: &Params) -> Result<ModData, CatalogError> {
    let v0 = p.get("V0")?;
    let a = p.get("a")?;
    let b = p.get("b")?;
    let beta2 = 2.0 * v0 * a * a;
    let kappa = (0.25 + (b - 1.0) * beta2).sqrt();
    Ok(ModData { v0, a, b, beta2, kappa })
}

fn mod_equation(d: &ModData, alpha: f64) -> NuEquation {
    let a2 = alpha * alpha;
    NuEquation::new(
        LowPoly::quadratic(0.0, 1.0, -1.0),
        LowPoly::quadratic(-a2, 2.0 * a2 + d.beta2, -(a2 + d.b * d.beta2)),
        LowPoly::linear(1.0, -1.0),
        Interval::open(0.0, 1.0),
    )
    .expect("static shape")
}

fn mod_alpha_level(d: &ModData, n: f64) -> f64 {
    let s = n + d.kappa + 0.5;
    (d.b * d.beta2 - s * s) / (2.0 * s)
}

fn mod_level_count(d: &ModData) -> i64 {
    let mut count = 0i64;
    while mod_alpha_level(d, count as f64) > 0.0 {
        count += 1;
        if count > 1_000_000 {
            break;
        }
    }
    count
}

/// Normalized level function shared with the rotating version.
#[allow(clippy::too_many_arguments)]
fn mod_state(
    quantum_numbers: QuantumNumbers,
    energy: f64,
    unit: &'static str,
    d: &ModData,
    alpha: f64,
    kappa: f64,
    n: u32,
) -> Result<BoundState, CatalogError> {
    let nf = n as f64;
    // C_n^2 = Gamma(2a+n+1) Gamma(2a+2k+n+1) (2a+2k+2n+1)
    //         / (a_len 2a Gamma(2a)^2 Gamma(2k+n+1) (2k+2n+1) n!).
    let ln_c2 = ln_gamma(2.0 * alpha + nf + 1.0)?
        + ln_gamma(2.0 * alpha + 2.0 * kappa + nf + 1.0)?
        + (2.0 * alpha + 2.0 * kappa + 2.0 * nf + 1.0).ln()
        - d.a.ln()
        - (2.0 * alpha).ln()
        - 2.0 * ln_gamma(2.0 * alpha)?
        - ln_gamma(2.0 * kappa + nf + 1.0)?
        - (2.0 * kappa + 2.0 * nf + 1.0).ln()
        - ln_gamma(nf + 1.0)?;
    let c = (0.5 * ln_c2).exp();
    let u = move |xi: f64| {
        if xi <= 0.0 || xi >= 1.0 {
            return 0.0;
        }
        c * xi.powf(alpha)
            * (1.0 - xi).powf(kappa + 0.5)
            * hyp2f1_terminating(
                -(n as i32),
                2.0 * alpha + 2.0 * kappa + nf + 1.0,
                2.0 * alpha + 1.0,
                xi,
            )
            .unwrap_or(f64::NAN)
    };
    let a_len = d.a;
    let psi = move |r: f64| u((-r / a_len).exp());
    let mut eq_data = *d;
    // The mapped equation uses the same shape with this state's alpha; for
    // the rotating variant the caller passes the shifted (beta, b) data.
    eq_data.kappa = kappa;
    Ok(BoundState {
        quantum_numbers,
        energy,
        energy_unit: unit,
        normalization: Some(c),
        wave_domain: Interval::open(0.0, f64::INFINITY),
        wave: Some(Arc::new(psi)),
        polynomial_degree: Some(n as usize),
        mapped: Some(MappedForm {
            equation: mod_equation(&eq_data, alpha),
            u: Arc::new(u),
            sample_window: (0.02, 0.98),
        }),
    })
}

impl PotentialModel for ModifiedHulthen {
    fn id(&self) -> PotentialId {
        PotentialId::ModifiedHulthen
    }

    fn title(&self) -> &'static str {
        "two-parameter screened well (Morse-like minimum)"
    }

    fn energy_unit(&self) -> &'static str {
        "V0 and hbar = m = 1 natural units"
    }

    fn level_rule(&self) -> &'static str {
        "(n + kappa + 1/2)^2 < b beta^2"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &MOD_SPECS
    }

    fn primary_index(&self) -> &'static str {
        "n"
    }

    fn coordinate_map(&self, p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(exp_map(mod_data(p)?.a))
    }

    fn build_equation(&self, p: &Params, e: f64) -> Result<NuEquation, CatalogError> {
        let d = mod_data(p)?;
        if e >= 0.0 {
            return Err(CatalogError::InvalidParams(format!("bound states need E < 0, got {e}")));
        }
        let alpha = (-2.0 * d.a * d.a * e).sqrt();
        Ok(mod_equation(&d, alpha))
    }

    fn expected_rows(&self, p: &Params, e: f64) -> Result<TableRows, CatalogError> {
        let d = mod_data(p)?;
        let alpha = (-2.0 * d.a * d.a * e).sqrt();
        Ok(mod_rows(d.beta2, d.kappa, alpha))
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        vec![
            (Params::new(&[("V0", 1.0), ("a", 1.0), ("b", 2.0)]), -0.1),
            (Params::new(&[("V0", 50.0), ("a", 1.0), ("b", 2.0)]), -1.0),
            (Params::new(&[("V0", 8.0), ("a", 1.5), ("b", 3.0)]), -0.3),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let d = mod_data(p)?;
        let count = mod_level_count(&d);
        if count == 0 {
            return Err(CatalogError::NoBoundStates(format!(
                "minimum size of potential hole: b beta^2 must exceed (kappa + 1/2)^2 = {}",
                (d.kappa + 0.5) * (d.kappa + 0.5)
            )));
        }
        Ok((0..count.min(up_to.max(0) + 1))
            .map(|n| {
                let alpha = mod_alpha_level(&d, n as f64);
                BoundState::levels_only(
                    super::qn(&[("n", n)]),
                    -d.v0 * (alpha * alpha / d.beta2),
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let d = mod_data(p)?;
        let n = require_qn(qn, "n")?;
        if n < 0 || n >= mod_level_count(&d) {
            return Err(CatalogError::LevelNotBound(format!(
                "level n = {n} violates (n + kappa + 1/2)^2 < b beta^2"
            )));
        }
        let alpha = mod_alpha_level(&d, n as f64);
        let e = -d.v0 * (alpha * alpha / d.beta2);
        mod_state(
            super::qn(&[("n", n)]),
            e,
            self.energy_unit(),
            &d,
            alpha,
            d.kappa,
            n as u32,
        )
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        let d = mod_data(p)?;
        if index < 0 || index >= mod_level_count(&d) {
            return Ok(None);
        }
        let alpha = mod_alpha_level(&d, index as f64);
        let e_of = |a: f64| -d.v0 * (a * a / d.beta2);
        Ok(Some(QuantProbe {
            bracket: (e_of(2.0 * d.b * d.beta2), e_of(0.5 * alpha)),
            degree: index as u32,
            expected_energy: e_of(alpha),
        }))
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let d = mod_data(p)?;
        let count = mod_level_count(&d);
        if count == 0 {
            return Ok(None);
        }
        let compare = count.min(3) as usize;
        let alpha_min = mod_alpha_level(&d, compare as f64 - 1.0);
        let span = 35.0 * d.a / alpha_min.min(1.0);
        let (v0, a, b) = (d.v0, d.a, d.b);
        Ok(Some(FdProblem {
            grid: GridSpec::dirichlet(1e-6 * span, span, 12001),
            potential: Arc::new(move |r| {
                let xi = (-r / a).exp();
                let om = 1.0 - xi;
                -2.0 * v0 * xi * (1.0 - b * xi) / (om * om)
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
                Params::new(&[("V0", 50.0), ("a", 1.0), ("b", 2.0)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 1)])],
            ),
            (
                Params::new(&[("V0", 8.0), ("a", 1.5), ("b", 3.0)]),
                vec![super::qn(&[("n", 0)]), super::qn(&[("n", 1)])],
            ),
        ]
    }
}

fn mod_rows(beta2: f64, kappa: f64, alpha: f64) -> TableRows {
    TableRows {
        k: beta2 - 2.0 * alpha * kappa,
        pi: LowPoly::linear(alpha, -(alpha + kappa + 0.5)),
        tau: LowPoly::linear(2.0 * alpha + 1.0, -2.0 * (alpha + kappa + 1.0)),
        lambda: beta2 - (2.0 * alpha + 1.0) * (kappa + 0.5),
        phi: ExpPowerProduct::new(0.0, 0.0, vec![(0.0, alpha), (1.0, kappa + 0.5)]),
        rho: ExpPowerProduct::new(0.0, 0.0, vec![(0.0, 2.0 * alpha), (1.0, 2.0 * kappa)]),
    }
}

// ---------------------------------------------------------------------------
// Rotation correction
// ---------------------------------------------------------------------------

/// Expansion data of the centrifugal term around the potential minimum
/// `exp(r_min/a) = 2b - 1`.
#[derive(Debug, Clone, Copy)]
pub struct RotationExpansion {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub x0: f64,
}

/// Coefficients of
/// `l(l+1)/r^2 ~ l(l+1)/r_min^2 [C0 + e^{-r/a}(C1 + C2 e^{-r/a})/(1-e^{-r/a})^2]`
/// with `x0 = ln(2b - 1)` and `r_min = a x0`.
pub fn mod_hulthen_rotation_coeffs(b: f64) -> Result<RotationExpansion, CatalogError> {
    if b <= 1.0 {
        return Err(CatalogError::InvalidParams(format!("need b > 1, got {b}")));
    }
    let x0 = (2.0 * b - 1.0).ln();
    let d = (2.0 * b - 1.0) * (2.0 * b - 1.0) * x0 * x0;
    let c0 = 1.0 + 4.0 * (b - 1.0) * (3.0 * (b - 1.0) - (3.0 * b - 1.0) * x0) / d;
    let c1 = 8.0 * (b - 1.0) * (b - 1.0) * (6.0 * (1.0 - b) + (4.0 * b - 1.0) * x0) / d;
    let c2 =
        8.0 * (b - 1.0) * (b - 1.0) * (6.0 * b * (b - 1.0) + (1.0 - 2.0 * b * (b + 1.0)) * x0) / d;
    Ok(RotationExpansion { c0, c1, c2, x0 })
}

/// Shifted equation parameters for angular momentum `l`.
#[derive(Debug, Clone, Copy)]
pub struct RotatedParams {
    /// Additive shift of `alpha^2`.
    pub alpha_sq_shift: f64,
    pub beta1_sq: f64,
    pub beta2_sq: f64,
    pub b1: f64,
    pub kappa1: f64,
    pub expansion: RotationExpansion,
}

pub fn mod_hulthen_rotated_params(
    beta2: f64,
    b: f64,
    l: i64,
) -> Result<RotatedParams, CatalogError> {
    let exp = mod_hulthen_rotation_coeffs(b)?;
    let ll = (l * (l + 1)) as f64;
    let shift = ll / (exp.x0 * exp.x0);
    let beta1_sq = beta2 - shift * exp.c1;
    let beta2_sq = b * beta2 + shift * exp.c2;
    if beta1_sq <= 0.0 {
        return Err(CatalogError::InvalidParams(format!(
            "rotation correction too strong: shifted beta^2 = {beta1_sq} <= 0"
        )));
    }
    let b1 = beta2_sq / beta1_sq;
    let kap_sq = 0.25 + (b1 - 1.0) * beta1_sq;
    if kap_sq <= 0.0 {
        return Err(CatalogError::InvalidParams(format!(
            "rotation correction too strong: kappa1^2 = {kap_sq} <= 0"
        )));
    }
    Ok(RotatedParams {
        alpha_sq_shift: shift * exp.c0,
        beta1_sq,
        beta2_sq,
        b1,
        kappa1: kap_sq.sqrt(),
        expansion: exp,
    })
}

pub struct ModifiedHulthenRotation;

const ROT_SPECS: [ParamSpec; 4] = [
    ParamSpec::optional("V0", "well depth", 1.0, 1e-12, 1e12),
    ParamSpec::optional("a", "screening length", 1.0, 1e-12, 1e12),
    ParamSpec::required("b", "shape parameter, above 1", 1.0 + 1e-12, 1e9),
    ParamSpec::integer("l", "orbital angular momentum", Some(1.0), 0.0, 100.0),
];

struct RotData {
    base: ModData,
    rot: RotatedParams,
    l: i64,
}

fn rot_data(p: &Params) -> Result<RotData, CatalogError> {
    let base = mod_data(p)?;
    let l = p.get_int("l")?;
    let rot = mod_hulthen_rotated_params(base.beta2, base.b, l)?;
    Ok(RotData { base, rot, l })
}

impl RotData {
    /// Equation-facing data: the shifted well.
    fn shifted(&self) -> ModData {
        ModData {
            v0: self.base.v0,
            a: self.base.a,
            b: self.rot.b1,
            beta2: self.rot.beta1_sq,
            kappa: self.rot.kappa1,
        }
    }

    fn alpha1_of_energy(&self, e: f64) -> Result<f64, CatalogError> {
        // alpha1^2 = -2 a^2 E + l(l+1) C0 / x0^2.
        let v = -2.0 * self.base.a * self.base.a * e + self.rot.alpha_sq_shift;
        if v <= 0.0 {
            return Err(CatalogError::InvalidParams(format!(
                "trial energy {e} above the shifted threshold"
            )));
        }
        Ok(v.sqrt())
    }

    fn energy_of_alpha1(&self, alpha1: f64) -> f64 {
        (self.rot.alpha_sq_shift - alpha1 * alpha1) / (2.0 * self.base.a * self.base.a)
    }

    fn level_alpha1(&self, v: f64) -> f64 {
        let s = v + self.rot.kappa1 + 0.5;
        (self.rot.beta2_sq - s * s) / (2.0 * s)
    }

    fn level_count(&self) -> i64 {
        let mut count = 0i64;
        // Bound levels need alpha1 > 0 and a genuinely negative energy
        // (alpha^2 = alpha1^2 - shift > 0).
        loop {
            let a1 = self.level_alpha1(count as f64);
            if a1 <= 0.0 || a1 * a1 <= self.rot.alpha_sq_shift || count > 1_000_000 {
                break;
            }
            count += 1;
        }
        count
    }
}

impl PotentialModel for ModifiedHulthenRotation {
    fn id(&self) -> PotentialId {
        PotentialId::ModifiedHulthenRotation
    }

    fn title(&self) -> &'static str {
        "rotating two-parameter screened well"
    }

    fn energy_unit(&self) -> &'static str {
        "V0 and hbar = m = 1 natural units"
    }

    fn level_rule(&self) -> &'static str {
        "(v + kappa1 + 1/2)^2 < beta2^2 and E < 0"
    }

    fn param_specs(&self) -> &'static [ParamSpec] {
        &ROT_SPECS
    }

    fn primary_index(&self) -> &'static str {
        "v"
    }

    fn coordinate_map(&self, p: &Params) -> Result<CoordinateMap, CatalogError> {
        Ok(exp_map(mod_data(p)?.a))
    }

    fn build_equation(&self, p: &Params, e: f64) -> Result<NuEquation, CatalogError> {
        let d = rot_data(p)?;
        let alpha1 = d.alpha1_of_energy(e)?;
        Ok(mod_equation(&d.shifted(), alpha1))
    }

    fn expected_rows(&self, p: &Params, e: f64) -> Result<TableRows, CatalogError> {
        let d = rot_data(p)?;
        let alpha1 = d.alpha1_of_energy(e)?;
        Ok(mod_rows(d.rot.beta1_sq, d.rot.kappa1, alpha1))
    }

    fn regression_instances(&self) -> Vec<(Params, f64)> {
        vec![
            (Params::new(&[("V0", 50.0), ("a", 1.0), ("b", 2.0), ("l", 1.0)]), -1.0),
            (Params::new(&[("V0", 50.0), ("a", 1.0), ("b", 2.0), ("l", 2.0)]), -5.0),
            (Params::new(&[("V0", 120.0), ("a", 0.7), ("b", 4.51744), ("l", 3.0)]), -3.0),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let d = rot_data(p)?;
        let count = d.level_count();
        if count == 0 {
            return Err(CatalogError::NoBoundStates(
                "no level passes the shifted-well admissibility rule".into(),
            ));
        }
        Ok((0..count.min(up_to.max(0) + 1))
            .map(|v| {
                let e = d.energy_of_alpha1(d.level_alpha1(v as f64));
                BoundState::levels_only(
                    super::qn(&[("v", v), ("l", d.l)]),
                    e,
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let d = rot_data(p)?;
        let v = require_qn(qn, "v")?;
        if v < 0 || v >= d.level_count() {
            return Err(CatalogError::LevelNotBound(format!(
                "level v = {v} not bound for the rotating well"
            )));
        }
        let alpha1 = d.level_alpha1(v as f64);
        let e = d.energy_of_alpha1(alpha1);
        mod_state(
            super::qn(&[("v", v), ("l", d.l)]),
            e,
            self.energy_unit(),
            &d.shifted(),
            alpha1,
            d.rot.kappa1,
            v as u32,
        )
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        let d = rot_data(p)?;
        if index < 0 || index >= d.level_count() {
            return Ok(None);
        }
        let alpha1 = d.level_alpha1(index as f64);
        Ok(Some(QuantProbe {
            bracket: (
                d.energy_of_alpha1(2.0 * d.rot.beta2_sq),
                d.energy_of_alpha1(0.5 * alpha1),
            ),
            degree: index as u32,
            expected_energy: d.energy_of_alpha1(alpha1),
        }))
    }

    fn fd_problem(&self, p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        let d = rot_data(p)?;
        let count = d.level_count();
        if count == 0 {
            return Ok(None);
        }
        let compare = count.min(3) as usize;
        let alpha_min = {
            let a1 = d.level_alpha1(compare as f64 - 1.0);
            (a1 * a1 - d.rot.alpha_sq_shift).max(1e-3).sqrt()
        };
        let span = 35.0 * d.base.a / alpha_min.min(1.0);
        let (v0, a, b) = (d.base.v0, d.base.a, d.base.b);
        let exp = d.rot.expansion;
        let ll = (d.l * (d.l + 1)) as f64;
        let r_min = a * exp.x0;
        Ok(Some(FdProblem {
            grid: GridSpec::dirichlet(1e-6 * span, span, 12001),
            potential: Arc::new(move |r| {
                let xi = (-r / a).exp();
                let om = 1.0 - xi;
                let well = -2.0 * v0 * xi * (1.0 - b * xi) / (om * om);
                // Centrifugal term in the expanded model form.
                let rot = ll / (r_min * r_min) * (exp.c0 + xi * (exp.c1 + exp.c2 * xi) / (om * om));
                well + rot
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
                Params::new(&[("V0", 50.0), ("a", 1.0), ("b", 2.0), ("l", 1.0)]),
                vec![super::qn(&[("v", 0)]), super::qn(&[("v", 1)])],
            ),
            (
                Params::new(&[("V0", 120.0), ("a", 0.7), ("b", 4.51744), ("l", 3.0)]),
                vec![super::qn(&[("v", 0)]), super::qn(&[("v", 1)])],
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential_catalog::{eigenstate, ode_residual_check, spectrum, PotentialId};

    #[test]
    fn single_level_at_beta2_two() {
        let p = Params::new(&[("beta2", 2.0), ("V0", 1.0)]);
        let states = spectrum(PotentialId::Hulthen, &p, 10).unwrap();
        assert_eq!(states.len(), 1);
        assert!((states[0].energy + 0.125).abs() < 1e-15);
    }

    #[test]
    fn too_small_hole_has_no_levels() {
        let p = Params::new(&[("beta2", 0.5), ("V0", 1.0)]);
        match spectrum(PotentialId::Hulthen, &p, 3) {
            Err(CatalogError::NoBoundStates(msg)) => {
                assert!(msg.contains("minimum size of potential hole"));
            }
            other => panic!("expected NoBoundStates, got {:?}", other.map(|v| v.len())),
        }
        // Exactly beta^2 = 1 is still empty (strict inequality).
        let p = Params::new(&[("beta2", 1.0), ("V0", 1.0)]);
        assert!(spectrum(PotentialId::Hulthen, &p, 3).is_err());
    }

    #[test]
    fn hulthen_state_checks() {
        let p = Params::new(&[("beta2", 2.0), ("V0", 1.0)]);
        let s = eigenstate(PotentialId::Hulthen, &p, &super::super::qn(&[("n", 1)])).unwrap();
        let norm = s.normalization_check(1e-10).unwrap();
        assert!((norm - 1.0).abs() < 1e-7, "norm {norm}");
        assert!(ode_residual_check(&s).unwrap() < 1e-6);
        assert_eq!(s.count_nodes(), Some(0));
    }

    #[test]
    fn modified_well_reduces_to_original_at_b_one_limit() {
        // b -> 1+ gives kappa -> 1/2 and the original energies.
        let d = mod_data(&Params::new(&[("V0", 1.0), ("a", 1.0), ("b", 1.0 + 1e-12)])).unwrap();
        assert!((d.kappa - 0.5).abs() < 1e-9);
        let alpha0 = mod_alpha_level(&d, 0.0);
        // Original well: alpha_1 = (beta^2 - 1)/2 at n = 1.
        assert!((alpha0 - (d.beta2 - 1.0) / 2.0).abs() < 1e-6);
    }

    #[test]
    fn modified_level_count_and_states() {
        let p = Params::new(&[("V0", 50.0), ("a", 1.0), ("b", 2.0)]);
        let d = mod_data(&p).unwrap();
        assert_eq!(mod_level_count(&d), 4);
        let s = eigenstate(PotentialId::ModifiedHulthen, &p, &super::super::qn(&[("n", 1)])).unwrap();
        let norm = s.normalization_check(1e-10).unwrap();
        assert!((norm - 1.0).abs() < 1e-7, "norm {norm}");
        assert!(ode_residual_check(&s).unwrap() < 1e-6);
        assert_eq!(s.count_nodes(), Some(1));
    }

    #[test]
    fn rotation_coeffs_match_reference_values() {
        let rc = mod_hulthen_rotation_coeffs(2.0).unwrap();
        assert!((rc.x0 - 3.0f64.ln()).abs() < 1e-15);
        assert!((rc.x0 - 1.09861).abs() < 1e-5);
        // l = 0 leaves the well untouched.
        let rot = mod_hulthen_rotated_params(36.0, 3.0, 0).unwrap();
        assert_eq!(rot.alpha_sq_shift, 0.0);
        assert!((rot.beta1_sq - 36.0).abs() < 1e-12);
        assert!((rot.b1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_expansion_defect_is_cubic() {
        // The defect of the centrifugal expansion around the minimum,
        // divided by x^3, stays bounded as x -> 0.
        let b = 2.0;
        let rc = mod_hulthen_rotation_coeffs(b).unwrap();
        let f = |x: f64| {
            let t = (-(1.0 + x) * rc.x0).exp();
            1.0 / ((1.0 + x) * (1.0 + x))
                - rc.c0
                - t * (rc.c1 + rc.c2 * t) / ((1.0 - t) * (1.0 - t))
        };
        let r1 = f(1e-2) / 1e-6;
        let r2 = f(5e-3) / 1.25e-7;
        assert!(
            (r1 - r2).abs() < 0.1 * r1.abs().max(1.0),
            "cubic coefficient drifts: {r1} vs {r2}"
        );
    }

    #[test]
    fn rotating_spectrum_and_state() {
        let p = Params::new(&[("V0", 50.0), ("a", 1.0), ("b", 2.0), ("l", 1.0)]);
        let states = spectrum(PotentialId::ModifiedHulthenRotation, &p, 5).unwrap();
        assert!(!states.is_empty());
        let s = eigenstate(
            PotentialId::ModifiedHulthenRotation,
            &p,
            &super::super::qn(&[("v", 0)]),
        )
        .unwrap();
        let norm = s.normalization_check(1e-10).unwrap();
        assert!((norm - 1.0).abs() < 1e-7, "norm {norm}");
        assert!(ode_residual_check(&s).unwrap() < 1e-6);
    }
}
