//! Dirac equation in the Coulomb field. The first-order radial system for
//! `(f, g)` is decoupled by a constant similarity transform into two
//! second-order equations for `(v1, v2)` that are of generalized
//! hypergeometric type; the radial pair is rebuilt from the polynomial
//! solutions of both components.
//!
//! Units: `x = (mc/hbar) r`, energies in `mc^2`, coupling
//! `mu = Z e^2 / (hbar c)` with `nu = sqrt(kappa^2 - mu^2)`.

use std::sync::Arc;

use super::common::{ln_gamma, power_exp, require_qn};
use super::{
    BoundState, CatalogError, CoordinateMap, Params, ParamSpec, PotentialId, PotentialModel,
    QuantProbe, QuantumNumbers, RealFn, TableRows,
};
use crate::nu_engine::{ExpPowerProduct, Interval, LowPoly, NuEquation};
use crate::numeric_oracle::{self};
use crate::poly_kernel::{ortho_eval, OrthoFamily};

/// Fine-structure constant e^2/(hbar c) in Gaussian units (CODATA 2018).
pub const ALPHA_FS: f64 = 7.297_352_569_3e-3;

pub struct DiracCoulomb;

const SPECS: [ParamSpec; 2] = [
    ParamSpec::optional("Z", "nuclear charge (mu = Z e^2/hbar c)", 1.0, 1e-6, 137.0),
    ParamSpec::integer("kappa", "relativistic angular number, nonzero", Some(-1.0), -50.0, 50.0),
];

fn coupling(p: &Params) -> Result<(f64, i64, f64), CatalogError> {
    let z = p.get("Z")?;
    let kappa = p.get_int("kappa")?;
    if kappa == 0 {
        return Err(CatalogError::InvalidParams("kappa must be nonzero".into()));
    }
    let mu = z * ALPHA_FS;
    let nu = nu_of(mu, kappa)?;
    Ok((mu, kappa, nu))
}

fn nu_of(mu: f64, kappa: i64) -> Result<f64, CatalogError> {
    let k2 = (kappa * kappa) as f64;
    if mu * mu >= k2 {
        return Err(CatalogError::SupercriticalCharge { mu, kappa: kappa.abs() as f64 });
    }
    Ok((k2 - mu * mu).sqrt())
}

/// Second-order equation for the component with centrifugal index
/// `nu_eff (nu_eff + 1)`; `nu_eff = nu` gives the first component,
/// `nu_eff = -nu` the second.
fn component_equation(eps: f64, mu: f64, nu_eff: f64) -> NuEquation {
    NuEquation::new(
        LowPoly::linear(0.0, 1.0),
        LowPoly::quadratic(-nu_eff * (nu_eff + 1.0), 2.0 * eps * mu, eps * eps - 1.0),
        LowPoly::zero(),
        Interval::open(0.0, f64::INFINITY),
    )
    .expect("static shape")
}

fn level_eps(mu: f64, nu: f64, n_r: u32) -> f64 {
    let d = n_r as f64 + nu;
    1.0 / (1.0 + (mu / d) * (mu / d)).sqrt()
}

/// Result of decoupling the radial system at one energy.
pub struct DiracDecoupling {
    pub eq_v1: NuEquation,
    pub eq_v2: NuEquation,
    /// Constant similarity transform taking `(x f, x g)` to `(v1, v2)`.
    pub transform: [[f64; 2]; 2],
    pub nu: f64,
    pub f1: f64,
    pub f2: f64,
    pub g1: f64,
    pub g2: f64,
}

/// Decouple the radial system at energy `eps` (in `mc^2`), coupling `mu`
/// and angular number `kappa`.
pub fn dirac_decouple(eps: f64, mu: f64, kappa: i64) -> Result<DiracDecoupling, CatalogError> {
    let nu = nu_of(mu, kappa)?;
    if !(eps.abs() < 1.0) {
        return Err(CatalogError::InvalidParams(format!(
            "bound states need |eps| < 1, got {eps}"
        )));
    }
    let a = (1.0 - eps * eps).sqrt();
    let kf = kappa as f64;
    let denom = eps * kf - nu;
    Ok(DiracDecoupling {
        eq_v1: component_equation(eps, mu, nu),
        eq_v2: component_equation(eps, mu, -nu),
        transform: [[mu, nu - kf], [nu - kf, mu]],
        nu,
        f1: a * mu / denom,
        f2: kf - nu,
        g1: a * (kf - nu) / denom,
        g2: mu,
    })
}

/// The normalized radial pair `(f, g)` with `F(r) = f(x)`, `G(r) = g(x)` and
/// `int x^2 (f^2 + g^2) dx = 1`.
pub struct DiracRadialPair {
    /// Large component `f(x)`.
    pub f: RealFn,
    /// Small component `g(x)`.
    pub g: RealFn,
    pub f1: f64,
    pub f2: f64,
    pub g1: f64,
    pub g2: f64,
    pub b_n: f64,
    pub eps: f64,
    pub nu: f64,
    /// Scale of the Laguerre argument: `xi = xi_rate * x`.
    pub xi_rate: f64,
}

impl DiracRadialPair {
    /// `int x^2 (f^2 + g^2) dx`, target 1.
    pub fn norm_check(&self, tol: f64) -> Result<f64, CatalogError> {
        let f = self.f.clone();
        let g = self.g.clone();
        Ok(numeric_oracle::quadrature(
            move |x| {
                let (fv, gv) = (x * f(x), x * g(x));
                fv * fv + gv * gv
            },
            Interval::open(0.0, f64::INFINITY),
            tol,
        )?)
    }

    /// Reasonable radial window covering the pair's support.
    pub fn sample_window(&self) -> (f64, f64) {
        let hi = (2.0 * self.nu + 14.0) / self.xi_rate * 2.0;
        (0.01 * hi, hi)
    }
}

/// `int x^2 (f_a f_b + g_a g_b) dx` between two pairs of the same `(Z, kappa)`.
pub fn dirac_overlap(a: &DiracRadialPair, b: &DiracRadialPair, tol: f64) -> Result<f64, CatalogError> {
    let (fa, ga, fb, gb) = (a.f.clone(), a.g.clone(), b.f.clone(), b.g.clone());
    Ok(numeric_oracle::quadrature(
        move |x| x * x * (fa(x) * fb(x) + ga(x) * gb(x)),
        Interval::open(0.0, f64::INFINITY),
        tol,
    )?)
}

/// Build the normalized radial pair for radial index `n_r`, angular number
/// `kappa` and charge `z`. The `n_r = 0` level exists only for negative
/// `kappa`; the first-component polynomial term is absent there.
pub fn dirac_radial(n_r: u32, kappa: i64, z: f64) -> Result<DiracRadialPair, CatalogError> {
    if kappa == 0 {
        return Err(CatalogError::InvalidParams("kappa must be nonzero".into()));
    }
    let mu = z * ALPHA_FS;
    let nu = nu_of(mu, kappa)?;
    if n_r == 0 && kappa > 0 {
        return Err(CatalogError::LevelNotBound(
            "n_r = 0 exists only for negative kappa".into(),
        ));
    }
    let eps = level_eps(mu, nu, n_r);
    let a = (1.0 - eps * eps).sqrt();
    let kf = kappa as f64;
    let dec = dirac_decouple(eps, mu, kappa)?;
    let (f1, f2, g1, g2) = (dec.f1, dec.f2, dec.g1, dec.g2);
    let nf = n_r as f64;
    // B_n = a sqrt((kappa - nu)(eps kappa - nu) n! / (mu Gamma(2 nu + n))).
    let radicand = (kf - nu) * (eps * kf - nu);
    if radicand <= 0.0 {
        return Err(CatalogError::LevelNotBound(format!(
            "normalization radicand {radicand} <= 0 for n_r={n_r}, kappa={kappa}"
        )));
    }
    let b_n = a
        * (0.5 * (radicand.ln() + ln_gamma(nf + 1.0)? - mu.ln() - ln_gamma(2.0 * nu + nf)?)).exp();
    let prefactor = b_n / (2.0 * nu * (kf - nu));
    let xi_rate = 2.0 * a;
    let ln_pref = prefactor.abs().ln();
    let sign = prefactor.signum();
    let alpha_hi = 2.0 * nu + 1.0;
    let alpha_lo = 2.0 * nu - 1.0;
    let component = move |c1: f64, c2: f64| {
        move |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let xi = xi_rate * x;
            // x f(x) = pref xi^nu e^{-xi/2} (c1 xi L_{n-1}^{2nu+1} + c2 L_n^{2nu-1})
            let poly = if n_r == 0 {
                c2 * ortho_eval(OrthoFamily::Laguerre { alpha: alpha_lo }, 0, xi)
            } else {
                c1 * xi * ortho_eval(OrthoFamily::Laguerre { alpha: alpha_hi }, n_r - 1, xi)
                    + c2 * ortho_eval(OrthoFamily::Laguerre { alpha: alpha_lo }, n_r, xi)
            };
            sign * power_exp(ln_pref, nu, xi, 0.5) * poly / x
        }
    };
    Ok(DiracRadialPair {
        f: Arc::new(component(f1, f2)),
        g: Arc::new(component(g1, g2)),
        f1,
        f2,
        g1,
        g2,
        b_n,
        eps,
        nu,
        xi_rate,
    })
}

impl PotentialModel for DiracCoulomb {
    fn id(&self) -> PotentialId {
        PotentialId::DiracCoulomb
    }

    fn title(&self) -> &'static str {
        "Dirac equation, Coulomb field"
    }

    fn energy_unit(&self) -> &'static str {
        "mc^2"
    }

    fn level_rule(&self) -> &'static str {
        "n_r >= 0 for kappa < 0, n_r >= 1 for kappa > 0; mu < |kappa|"
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
        let (mu, _, nu) = coupling(p)?;
        if !(0.0 < eps && eps < 1.0) {
            return Err(CatalogError::InvalidParams(format!(
                "bound states need 0 < eps < 1, got {eps}"
            )));
        }
        Ok(component_equation(eps, mu, nu))
    }

    fn expected_rows(&self, p: &Params, eps: f64) -> Result<TableRows, CatalogError> {
        let (mu, _, nu) = coupling(p)?;
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
            (Params::new(&[("Z", 0.3 / ALPHA_FS), ("kappa", -1.0)]), 0.9),
            (Params::new(&[("Z", 0.5 / ALPHA_FS), ("kappa", 2.0)]), 0.8),
            (Params::new(&[("Z", 0.2 / ALPHA_FS), ("kappa", -2.0)]), 0.95),
        ]
    }

    fn spectrum(&self, p: &Params, up_to: i64) -> Result<Vec<BoundState>, CatalogError> {
        let (mu, kappa, nu) = coupling(p)?;
        let start = if kappa < 0 { 0 } else { 1 };
        Ok((start..=up_to.max(start))
            .map(|n_r| {
                BoundState::levels_only(
                    super::qn(&[("n_r", n_r), ("kappa", kappa)]),
                    level_eps(mu, nu, n_r as u32),
                    self.energy_unit(),
                )
            })
            .collect())
    }

    fn eigenstate(&self, p: &Params, qn: &QuantumNumbers) -> Result<BoundState, CatalogError> {
        let z = p.get("Z")?;
        let kappa = p.get_int("kappa")?;
        let n_r = require_qn(qn, "n_r")?;
        if n_r < 0 {
            return Err(CatalogError::LevelNotBound(format!("n_r = {n_r} < 0")));
        }
        let pair = dirac_radial(n_r as u32, kappa, z)?;
        let (f, g) = (pair.f.clone(), pair.g.clone());
        let psi = move |x: f64| {
            let (fv, gv) = (x * f(x), x * g(x));
            (fv * fv + gv * gv).sqrt()
        };
        Ok(BoundState {
            quantum_numbers: super::qn(&[("n_r", n_r), ("kappa", kappa)]),
            energy: pair.eps,
            energy_unit: self.energy_unit(),
            normalization: Some(pair.b_n),
            wave_domain: Interval::open(0.0, f64::INFINITY),
            wave: Some(Arc::new(psi)),
            polynomial_degree: None,
            mapped: None,
        })
    }

    fn quantization_equation(&self, p: &Params, eps: f64) -> Result<NuEquation, CatalogError> {
        // The second decoupled component quantizes with degree n_r for every
        // level including the lowest; the first component's polynomial is one
        // degree behind and vanishes identically at n_r = 0.
        let (mu, _, nu) = coupling(p)?;
        if !(0.0 < eps && eps < 1.0) {
            return Err(CatalogError::InvalidParams(format!(
                "bound states need 0 < eps < 1, got {eps}"
            )));
        }
        Ok(component_equation(eps, mu, -nu))
    }

    fn quantization_probe(
        &self,
        p: &Params,
        index: i64,
    ) -> Result<Option<QuantProbe>, CatalogError> {
        let (mu, kappa, nu) = coupling(p)?;
        if index < 0 || (index == 0 && kappa > 0) {
            return Ok(None);
        }
        // k roots merge as eps -> 1; stop the bracket at the next level.
        Ok(Some(QuantProbe {
            bracket: (1e-9, level_eps(mu, nu, index as u32 + 1)),
            degree: index as u32,
            expected_energy: level_eps(mu, nu, index as u32),
        }))
    }

    fn normalization_instances(&self) -> Vec<(Params, Vec<QuantumNumbers>)> {
        vec![
            (
                Params::new(&[("Z", 1.0), ("kappa", -1.0)]),
                vec![super::qn(&[("n_r", 0)]), super::qn(&[("n_r", 1)])],
            ),
            (
                Params::new(&[("Z", 50.0), ("kappa", 2.0)]),
                vec![super::qn(&[("n_r", 1)]), super::qn(&[("n_r", 2)])],
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coupling_is_pure_centrifugal() {
        let dec = dirac_decouple(0.9, 0.0, -1).unwrap();
        assert!((dec.nu - 1.0).abs() < 1e-15);
        assert!((dec.eq_v1.sigma_tilde.c0 + 2.0).abs() < 1e-15);
        assert!((dec.eq_v1.sigma_tilde.c1 - 0.0).abs() < 1e-15);
    }

    #[test]
    fn transformed_matrix_is_traceless_with_invariant_determinant() {
        // The transformed system has Tr = 0 and
        // det = eps^2 - 1 + 2 eps mu / x - nu^2 / x^2; similarity preserves
        // both, so check against the original matrix entries at sample x.
        for (eps, mu, kappa) in [(0.9, 0.3, -1i64), (0.8, 0.7, 2), (0.6, 0.2, -3)] {
            let dec = dirac_decouple(eps, mu, kappa).unwrap();
            let kf = kappa as f64;
            for x in [0.31, 1.7, 6.3] {
                let a11 = -kf / x;
                let a12 = 1.0 + eps + mu / x;
                let a21 = 1.0 - eps - mu / x;
                let a22 = kf / x;
                let det = a11 * a22 - a12 * a21;
                let expect = eps * eps - 1.0 + 2.0 * eps * mu / x - dec.nu * dec.nu / (x * x);
                assert!((a11 + a22).abs() < 1e-14);
                assert!((det - expect).abs() < 1e-12 * expect.abs().max(1.0));
            }
        }
    }

    #[test]
    fn v2_equation_is_nu_reflection_of_v1() {
        let dec = dirac_decouple(0.85, 0.4, -2).unwrap();
        let nu = dec.nu;
        // sigma_tilde constants: -nu(nu+1) vs -nu(nu-1).
        assert!((dec.eq_v1.sigma_tilde.c0 + nu * (nu + 1.0)).abs() < 1e-12);
        assert!((dec.eq_v2.sigma_tilde.c0 + nu * (nu - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn ground_state_energy_and_supercritical() {
        let mu = ALPHA_FS;
        let pair = dirac_radial(0, -1, 1.0).unwrap();
        assert!((pair.eps - (1.0 - mu * mu).sqrt()).abs() < 1e-15);
        match dirac_radial(0, -1, 140.0) {
            Err(CatalogError::SupercriticalCharge { .. }) => {}
            other => panic!("expected SupercriticalCharge, got {:?}", other.map(|_| ())),
        }
        match dirac_radial(0, 1, 1.0) {
            Err(CatalogError::LevelNotBound(_)) => {}
            other => panic!("expected LevelNotBound, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn pair_is_normalized() {
        let pair = dirac_radial(1, -1, 1.0).unwrap();
        let norm = pair.norm_check(1e-9).unwrap();
        assert!((norm - 1.0).abs() < 1e-6, "norm {norm}");
    }

    #[test]
    fn small_component_is_small_at_low_z() {
        let pair = dirac_radial(0, -1, 1.0).unwrap();
        let (mut max_f, mut max_g) = (0.0f64, 0.0f64);
        for i in 1..400 {
            let x = i as f64 * 2.0;
            max_f = max_f.max((pair.f)(x).abs());
            max_g = max_g.max((pair.g)(x).abs());
        }
        assert!(max_g / max_f < 0.02, "ratio {}", max_g / max_f);
    }

    #[test]
    fn first_order_system_residual() {
        // df/dx + (1+kappa)/x f = (1 + eps + mu/x) g and
        // dg/dx + (1-kappa)/x g = (1 - eps - mu/x) f.
        for (n_r, kappa, z) in [(0u32, -1i64, 30.0), (1, -1, 1.0), (2, 2, 50.0)] {
            let pair = dirac_radial(n_r, kappa, z).unwrap();
            let mu = z * ALPHA_FS;
            let kf = kappa as f64;
            let h = 1e-5;
            let mut worst = 0.0f64;
            let (xa, xb) = pair.sample_window();
            for i in 0..50 {
                let x = xa + (xb - xa) * (i as f64 + 0.5) / 50.0;
                let df = ((pair.f)(x + h) - (pair.f)(x - h)) / (2.0 * h);
                let dg = ((pair.g)(x + h) - (pair.g)(x - h)) / (2.0 * h);
                let fv = (pair.f)(x);
                let gv = (pair.g)(x);
                let r1 = df + (1.0 + kf) / x * fv - (1.0 + pair.eps + mu / x) * gv;
                let r2 = dg + (1.0 - kf) / x * gv - (1.0 - pair.eps - mu / x) * fv;
                let scale = fv.abs().max(gv.abs()).max(1e-300);
                worst = worst.max(r1.abs() / scale).max(r2.abs() / scale);
            }
            assert!(worst < 1e-6, "system residual {worst} for n_r={n_r} kappa={kappa} z={z}");
        }
    }
}
