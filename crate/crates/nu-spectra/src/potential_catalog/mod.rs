//! One registry entry per exactly solvable potential: each entry builds the
//! generalized hypergeometric-type equation in its mapped coordinate, knows
//! its closed-form reference rows (reduction constants, gauge factor, weight),
//! produces the closed-form spectrum and normalized wavefunctions, and
//! exposes the pieces the oracles cross-check.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::nu_engine::{
    quantized_lambda, reduce, ExpPowerProduct, Interval, LowPoly, NuBranch, NuEquation, NuError,
};
use crate::numeric_oracle::{self, GridSpec, OracleError};
use crate::poly_kernel::PolyError;
use thiserror::Error;

mod bessel;
mod common;
mod coulomb;
mod dirac;
mod generalized_morse;
mod hulthen;
mod kratzer;
mod morse;
mod oscillator;
mod poschl_teller;
mod radial3d;
mod relativistic;
mod spherical;

pub use bessel::{bessel_j_poisson, bessel_j_series, bessel_reduction_fixture, BesselFixture};
pub use dirac::{
    dirac_decouple, dirac_overlap, dirac_radial, DiracDecoupling, DiracRadialPair, ALPHA_FS,
};
pub use generalized_morse::generalized_morse_params;
pub use hulthen::{mod_hulthen_rotated_params, mod_hulthen_rotation_coeffs, RotatedParams, RotationExpansion};
pub use morse::{
    match_morse_to_modified_hulthen, matching_phi, morse_rotation_coeffs,
    morse_rotation_energy_series, MoleculeRow, EV_PER_CM, MOLECULES,
};
pub use relativistic::{
    exact_level, fine_structure_expansion_check, fine_structure_expected, FineStructureCoeffs,
    FineStructureModel,
};
pub use spherical::spherical_harmonic;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no bound states: {0}")]
    NoBoundStates(String),
    #[error("level not bound: {0}")]
    LevelNotBound(String),
    #[error("supercritical coupling mu = {mu} >= |kappa| = {kappa}")]
    SupercriticalCharge { mu: f64, kappa: f64 },
    #[error("unknown potential `{0}`")]
    UnknownPotential(String),
    #[error(transparent)]
    Engine(#[from] NuError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Identifier of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PotentialId {
    Harmonic1d,
    Bessel,
    SphericalHarmonics,
    Coulomb,
    RelativisticSchrodinger,
    DiracCoulomb,
    Confinement3d,
    Oscillator3d,
    PoschlTeller,
    ModifiedPoschlTeller,
    Kratzer,
    Hulthen,
    Morse,
    MorseRotation,
    ModifiedHulthen,
    ModifiedHulthenRotation,
    GeneralizedMorse,
}

impl PotentialId {
    pub fn name(&self) -> &'static str {
        match self {
            PotentialId::Harmonic1d => "harmonic_1d",
            PotentialId::Bessel => "bessel",
            PotentialId::SphericalHarmonics => "spherical_harmonics",
            PotentialId::Coulomb => "coulomb",
            PotentialId::RelativisticSchrodinger => "relativistic_schrodinger",
            PotentialId::DiracCoulomb => "dirac_coulomb",
            PotentialId::Confinement3d => "confinement_3d",
            PotentialId::Oscillator3d => "oscillator_3d",
            PotentialId::PoschlTeller => "poschl_teller",
            PotentialId::ModifiedPoschlTeller => "modified_poschl_teller",
            PotentialId::Kratzer => "kratzer",
            PotentialId::Hulthen => "hulthen",
            PotentialId::Morse => "morse",
            PotentialId::MorseRotation => "morse_rotation",
            PotentialId::ModifiedHulthen => "modified_hulthen",
            PotentialId::ModifiedHulthenRotation => "modified_hulthen_rotation",
            PotentialId::GeneralizedMorse => "generalized_morse",
        }
    }

    pub fn parse(name: &str) -> Result<Self, CatalogError> {
        registry()
            .iter()
            .map(|m| m.id())
            .find(|id| id.name() == name)
            .ok_or_else(|| CatalogError::UnknownPotential(name.to_string()))
    }
}

/// Declared parameter of a catalog entry.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub description: &'static str,
    /// None means required.
    pub default: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub integer: bool,
}

impl ParamSpec {
    pub const fn required(name: &'static str, description: &'static str, min: f64, max: f64) -> Self {
        Self { name, description, default: None, min, max, integer: false }
    }

    pub const fn optional(
        name: &'static str,
        description: &'static str,
        default: f64,
        min: f64,
        max: f64,
    ) -> Self {
        Self { name, description, default: Some(default), min, max, integer: false }
    }

    pub const fn integer(
        name: &'static str,
        description: &'static str,
        default: Option<f64>,
        min: f64,
        max: f64,
    ) -> Self {
        Self { name, description, default, min, max, integer: true }
    }
}

/// Named numeric parameters, kept ordered for deterministic output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(pub BTreeMap<String, f64>);

impl Params {
    pub fn new(pairs: &[(&str, f64)]) -> Self {
        Self(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }

    pub fn get(&self, name: &str) -> Result<f64, CatalogError> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| CatalogError::InvalidParams(format!("missing parameter `{name}`")))
    }

    pub fn get_int(&self, name: &str) -> Result<i64, CatalogError> {
        let v = self.get(name)?;
        if (v - v.round()).abs() > 1e-9 {
            return Err(CatalogError::InvalidParams(format!(
                "parameter `{name}` must be an integer, got {v}"
            )));
        }
        Ok(v.round() as i64)
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_string(), value);
    }
}

/// Fill defaults and enforce declared ranges.
pub fn validate_params(specs: &[ParamSpec], given: &Params) -> Result<Params, CatalogError> {
    let mut filled = given.clone();
    for key in given.0.keys() {
        if !specs.iter().any(|s| s.name == key) {
            return Err(CatalogError::InvalidParams(format!("unknown parameter `{key}`")));
        }
    }
    for spec in specs {
        let value = match filled.0.get(spec.name) {
            Some(v) => *v,
            None => match spec.default {
                Some(d) => {
                    filled.set(spec.name, d);
                    d
                }
                None => {
                    return Err(CatalogError::InvalidParams(format!(
                        "missing required parameter `{}`",
                        spec.name
                    )))
                }
            },
        };
        if !value.is_finite() || value < spec.min || value > spec.max {
            return Err(CatalogError::InvalidParams(format!(
                "parameter `{}` = {value} outside [{}, {}]",
                spec.name, spec.min, spec.max
            )));
        }
        if spec.integer && (value - value.round()).abs() > 1e-9 {
            return Err(CatalogError::InvalidParams(format!(
                "parameter `{}` must be an integer, got {value}",
                spec.name
            )));
        }
    }
    Ok(filled)
}

pub type QuantumNumbers = BTreeMap<String, i64>;

pub fn qn(pairs: &[(&str, i64)]) -> QuantumNumbers {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Invertible change of variable between the physical coordinate and the
/// mapped coordinate the equation lives in.
#[derive(Clone)]
pub struct CoordinateMap {
    pub forward: RealFn,
    pub inverse: RealFn,
    pub jacobian: RealFn,
    pub physical_domain: Interval,
    pub mapped_domain: Interval,
}

impl CoordinateMap {
    pub fn identity(domain: Interval) -> Self {
        Self {
            forward: Arc::new(|x| x),
            inverse: Arc::new(|x| x),
            jacobian: Arc::new(|_| 1.0),
            physical_domain: domain,
            mapped_domain: domain,
        }
    }

    /// Max round-trip defect of forward followed by inverse over `samples`
    /// interior points, relative to the coordinate scale.
    pub fn round_trip_defect(&self, samples: usize) -> f64 {
        let lo = if self.physical_domain.lower.is_finite() {
            self.physical_domain.lower
        } else {
            -8.0
        };
        let hi = if self.physical_domain.upper.is_finite() {
            self.physical_domain.upper
        } else {
            lo + 12.0
        };
        let mut worst = 0.0f64;
        for i in 0..samples {
            let x = lo + (i as f64 + 0.5) * (hi - lo) / samples as f64;
            let back = (self.inverse)((self.forward)(x));
            worst = worst.max((back - x).abs() / (1.0 + x.abs()));
        }
        worst
    }
}

/// The mapped-coordinate companion of a bound state, for residual checks.
#[derive(Clone)]
pub struct MappedForm {
    pub equation: NuEquation,
    pub u: RealFn,
    /// Interval over which residual sampling is meaningful.
    pub sample_window: (f64, f64),
}

/// A single bound level. `wave` is the function whose plain square
/// integrates to one over `wave_domain` (the radial measure is already
/// folded in where the problem is radial).
#[derive(Clone)]
pub struct BoundState {
    pub quantum_numbers: QuantumNumbers,
    pub energy: f64,
    pub energy_unit: &'static str,
    pub normalization: Option<f64>,
    pub wave_domain: Interval,
    pub wave: Option<RealFn>,
    pub polynomial_degree: Option<usize>,
    pub mapped: Option<MappedForm>,
}

impl BoundState {
    pub fn levels_only(quantum_numbers: QuantumNumbers, energy: f64, unit: &'static str) -> Self {
        Self {
            quantum_numbers,
            energy,
            energy_unit: unit,
            normalization: None,
            wave_domain: Interval::real_line(),
            wave: None,
            polynomial_degree: None,
            mapped: None,
        }
    }

    /// Quadrature of the squared wavefunction over its domain (target 1).
    pub fn normalization_check(&self, tol: f64) -> Result<f64, CatalogError> {
        let wave = self
            .wave
            .as_ref()
            .ok_or_else(|| CatalogError::InvalidParams("state carries no wavefunction".into()))?;
        let w = wave.clone();
        Ok(numeric_oracle::norm_integral(move |x| w(x), self.wave_domain, tol)?)
    }

    /// Interior sign changes of the mapped solution, counted on a fine grid
    /// of the sample window; equals the polynomial factor's degree for a
    /// genuine eigenstate.
    pub fn count_nodes(&self) -> Option<usize> {
        let mapped = self.mapped.as_ref()?;
        let (a, b) = mapped.sample_window;
        let n = 4000;
        let mut nodes = 0;
        let mut prev = 0.0f64;
        let u = &mapped.u;
        for i in 0..=n {
            let x = a + (b - a) * i as f64 / n as f64;
            let v = u(x);
            if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
                nodes += 1;
            }
            if v != 0.0 {
                prev = v;
            }
        }
        Some(nodes)
    }
}

/// Overlap of two states of the same problem (target 0).
pub fn orthogonality_check(a: &BoundState, b: &BoundState, tol: f64) -> Result<f64, CatalogError> {
    let (fa, fb) = match (&a.wave, &b.wave) {
        (Some(fa), Some(fb)) => (fa.clone(), fb.clone()),
        _ => {
            return Err(CatalogError::InvalidParams(
                "state carries no wavefunction".into(),
            ))
        }
    };
    Ok(numeric_oracle::overlap_integral(
        move |x| fa(x),
        move |x| fb(x),
        a.wave_domain,
        tol,
    )?)
}

/// Residual of the state's mapped equation (target 0 for a true eigenstate).
pub fn ode_residual_check(state: &BoundState) -> Result<f64, CatalogError> {
    let mapped = state
        .mapped
        .as_ref()
        .ok_or_else(|| CatalogError::InvalidParams("state carries no mapped form".into()))?;
    let u = mapped.u.clone();
    Ok(numeric_oracle::ode_residual(move |x| u(x), &mapped.equation, mapped.sample_window))
}

/// Closed-form reference rows of one catalog entry at one numeric instance.
#[derive(Debug, Clone)]
pub struct TableRows {
    pub k: f64,
    pub pi: LowPoly,
    pub tau: LowPoly,
    pub lambda: f64,
    pub phi: ExpPowerProduct,
    pub rho: ExpPowerProduct,
}

fn scaled_dev(worst: &mut f64, got: f64, want: f64, scale: f64) {
    *worst = worst.max((got - want).abs() / scale.max(1e-30));
}

/// Worst scaled deviation between a reduction branch and reference rows.
pub fn rows_deviation(branch: &NuBranch, rows: &TableRows) -> f64 {
    let mut worst = 0.0f64;
    scaled_dev(&mut worst, branch.k, rows.k, rows.k.abs().max(1.0));
    let pi_scale = rows.pi.max_abs_coeff().max(1.0);
    scaled_dev(&mut worst, branch.pi.c0, rows.pi.c0, pi_scale);
    scaled_dev(&mut worst, branch.pi.c1, rows.pi.c1, pi_scale);
    scaled_dev(&mut worst, branch.pi.c2, rows.pi.c2, pi_scale);
    let tau_scale = rows.tau.max_abs_coeff().max(1.0);
    scaled_dev(&mut worst, branch.tau.c0, rows.tau.c0, tau_scale);
    scaled_dev(&mut worst, branch.tau.c1, rows.tau.c1, tau_scale);
    scaled_dev(&mut worst, branch.tau.c2, rows.tau.c2, tau_scale);
    scaled_dev(&mut worst, branch.lambda, rows.lambda, rows.lambda.abs().max(1.0));
    for (got, want) in [(&branch.phi, &rows.phi), (&branch.rho, &rows.rho)] {
        scaled_dev(&mut worst, got.exp_c1, want.exp_c1, want.exp_c1.abs().max(1.0));
        scaled_dev(&mut worst, got.exp_c2, want.exp_c2, want.exp_c2.abs().max(1.0));
        let mut matched = vec![false; want.factors.len()];
        for &(r, p) in &got.factors {
            let mut found = false;
            for (i, &(wr, wp)) in want.factors.iter().enumerate() {
                if (r - wr).abs() <= 1e-9 * (1.0 + wr.abs()) && !matched[i] {
                    matched[i] = true;
                    scaled_dev(&mut worst, p, wp, wp.abs().max(1.0));
                    found = true;
                    break;
                }
            }
            if !found {
                worst = worst.max(p.abs().max(1.0));
            }
        }
        if matched.iter().any(|m| !m) {
            worst = worst.max(1.0);
        }
    }
    worst
}

/// Physical problem handed to the finite-difference oracle: the dimensionless
/// potential entering `-u'' + U u = W u` and the map from catalog energies to
/// the operator eigenvalue `W`.
#[derive(Clone)]
pub struct FdProblem {
    pub grid: GridSpec,
    pub potential: RealFn,
    pub eigenvalue_of_energy: RealFn,
    /// Number of closed-form levels to compare.
    pub compare: usize,
    /// When true, closed-form levels need only appear within the oracle's
    /// list (families covering one symmetry sector of the full problem).
    pub subset_match: bool,
    pub rel_tol: f64,
}

/// Bracket and polynomial degree for verifying one level through the
/// quantization rule: the reduced eigen-parameter, equated to its
/// degree-`degree` quantized value, must pin the level energy inside
/// `bracket`.
#[derive(Debug, Clone, Copy)]
pub struct QuantProbe {
    pub bracket: (f64, f64),
    pub degree: u32,
    pub expected_energy: f64,
}

pub trait PotentialModel: Send + Sync {
    fn id(&self) -> PotentialId;
    fn title(&self) -> &'static str;
    fn energy_unit(&self) -> &'static str;
    /// Human-readable admissibility rule for the level count.
    fn level_rule(&self) -> &'static str;
    fn param_specs(&self) -> &'static [ParamSpec];
    /// Name of the primary excitation index ("n", "n_r", "v").
    fn primary_index(&self) -> &'static str;

    fn coordinate_map(&self, p: &Params) -> Result<CoordinateMap, CatalogError>;
    fn build_equation(&self, p: &Params, trial_energy: f64) -> Result<NuEquation, CatalogError>;
    fn expected_rows(&self, p: &Params, trial_energy: f64) -> Result<TableRows, CatalogError>;
    /// At least three numeric (params, trial energy) instances for the
    /// reference-row regression.
    fn regression_instances(&self) -> Vec<(Params, f64)>;

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError>;
    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError>;

    /// Equation used on the quantization-verification path (defaults to the
    /// reference equation).
    fn quantization_equation(&self, p: &Params, e: f64) -> Result<NuEquation, CatalogError> {
        self.build_equation(p, e)
    }
    fn quantization_probe(
        &self,
        _p: &Params,
        _index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        Ok(None)
    }
    fn fd_problem(&self, _p: &Params) -> Result<Option<FdProblem>, CatalogError> {
        Ok(None)
    }
    /// Parameter instances and levels for the normalization/orthogonality
    /// suite.
    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        Vec::new()
    }
}

static HARMONIC_1D: oscillator::Harmonic1d = oscillator::Harmonic1d;
static BESSEL: bessel::BesselEntry = bessel::BesselEntry;
static SPHERICAL: spherical::SphericalHarmonics = spherical::SphericalHarmonics;
static COULOMB: coulomb::CoulombModel = coulomb::CoulombModel;
static REL_SCHRODINGER: relativistic::RelativisticSchrodinger =
    relativistic::RelativisticSchrodinger;
static DIRAC: dirac::DiracCoulomb = dirac::DiracCoulomb;
static CONFINEMENT: radial3d::Confinement3d = radial3d::Confinement3d;
static OSCILLATOR_3D: radial3d::Oscillator3d = radial3d::Oscillator3d;
static POSCHL_TELLER: poschl_teller::PoschlTeller = poschl_teller::PoschlTeller;
static MODIFIED_PT: poschl_teller::ModifiedPoschlTeller = poschl_teller::ModifiedPoschlTeller;
static KRATZER: kratzer::KratzerModel = kratzer::KratzerModel;
static HULTHEN: hulthen::HulthenModel = hulthen::HulthenModel;
static MORSE: morse::MorseModel = morse::MorseModel;
static MORSE_ROTATION: morse::MorseRotation = morse::MorseRotation;
static MODIFIED_HULTHEN: hulthen::ModifiedHulthen = hulthen::ModifiedHulthen;
static MODIFIED_HULTHEN_ROTATION: hulthen::ModifiedHulthenRotation =
    hulthen::ModifiedHulthenRotation;
static GENERALIZED_MORSE: generalized_morse::GeneralizedMorse =
    generalized_morse::GeneralizedMorse;

/// Every catalog entry, in presentation order.
pub fn registry() -> Vec<&'static dyn PotentialModel> {
    vec![
        &HARMONIC_1D,
        &BESSEL,
        &SPHERICAL,
        &COULOMB,
        &REL_SCHRODINGER,
        &DIRAC,
        &CONFINEMENT,
        &OSCILLATOR_3D,
        &POSCHL_TELLER,
        &MODIFIED_PT,
        &KRATZER,
        &HULTHEN,
        &MORSE,
        &MORSE_ROTATION,
        &MODIFIED_HULTHEN,
        &MODIFIED_HULTHEN_ROTATION,
        &GENERALIZED_MORSE,
    ]
}

pub fn find(id: PotentialId) -> &'static dyn PotentialModel {
    registry()
        .into_iter()
        .find(|m| m.id() == id)
        .expect("registry covers every id")
}

pub fn build_equation(id: PotentialId, p: &Params, e: f64) -> Result<NuEquation, CatalogError> {
    let m = find(id);
    let p = validate_params(m.param_specs(), p)?;
    m.build_equation(&p, e)
}

pub fn spectrum(id: PotentialId, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
    let m = find(id);
    let p = validate_params(m.param_specs(), p)?;
    m.spectrum(&p, up_to)
}

pub fn eigenstate(
    id: PotentialId,
    p: &Params,
    quantum_numbers: &QuantumNumbers,
) -> Result<BoundState, CatalogError> {
    let m = find(id);
    let p = validate_params(m.param_specs(), p)?;
    m.eigenstate(&p, quantum_numbers)
}

/// Verify one level through the reduction path: bisect the trial energy so
/// the reduced eigen-parameter matches its degree-`probe.degree` quantized
/// value, asserting a single sign crossing over the bracket, and return the
/// solved energy.
pub fn solve_level_by_quantization(
    model: &dyn PotentialModel,
    p: &Params,
    probe: &QuantProbe,
) -> Result<f64, CatalogError> {
    let mismatch = |e: f64| -> Result<f64, CatalogError> {
        let eq = model.quantization_equation(p, e)?;
        let branch = reduce(&eq)?;
        Ok(branch.lambda - quantized_lambda(&branch.tau, &eq.sigma, probe.degree))
    };
    let (mut lo, mut hi) = probe.bracket;
    let mut g_lo = mismatch(lo)?;
    let g_hi = mismatch(hi)?;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(CatalogError::InvalidParams(format!(
            "quantization mismatch does not change sign over [{lo}, {hi}]"
        )));
    }
    // Single-crossing scan: a second sign change means the bracket is
    // unusable and must be reported, not silently bisected.
    let mut prev = g_lo;
    let mut crossings = 0;
    for i in 1..=32 {
        let e = lo + (hi - lo) * i as f64 / 32.0;
        let g = mismatch(e)?;
        if g != 0.0 && prev != 0.0 && g.signum() != prev.signum() {
            crossings += 1;
        }
        if g != 0.0 {
            prev = g;
        }
    }
    if crossings != 1 {
        return Err(CatalogError::InvalidParams(format!(
            "quantization mismatch crosses zero {crossings} times over [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let g = mismatch(mid)?;
        if g == 0.0 {
            return Ok(mid);
        }
        if g.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
