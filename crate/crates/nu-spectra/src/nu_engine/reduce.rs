//! The reduction pipeline: choose the constant `k` that turns the quadratic
//! under the radical into a perfect square, enumerate the linear branches,
//! and select the unique branch that supports square-integrable polynomial
//! eigenfunctions on the equation's domain.

use super::types::{
    ExpPowerProduct, LowPoly, NuBranch, NuEquation, NuError, SignChoice, COEFF_RTOL,
};

/// `q = ((sigma' - tau_tilde)/2)^2 - sigma_tilde`.
pub fn radical_free_part(eq: &NuEquation) -> LowPoly {
    let half = eq.sigma.derivative().sub(&eq.tau_tilde).scale(0.5);
    half.mul_low(&half).sub(&eq.sigma_tilde)
}

/// Scaled magnitude of the discriminant `p'(0)^2 - 2 p'' p(0)` of
/// `p = q + k sigma`; must vanish for admissible `k`.
pub fn square_defect(eq: &NuEquation, k: f64) -> f64 {
    let q = radical_free_part(eq);
    let p = q.add(&eq.sigma.scale(k));
    let disc = p.c1 * p.c1 - 2.0 * (2.0 * p.c2) * p.c0;
    let scale = p.max_abs_coeff().powi(2).max(1.0);
    disc.abs() / scale
}

/// Values of `k` for which `p = q + k sigma` has zero discriminant.
///
/// The condition is a quadratic `a k^2 + 2 b k + c = 0` with coefficients
/// built from `sigma` and `q`; a double root is reported once.
pub fn k_candidates(eq: &NuEquation) -> Result<Vec<f64>, NuError> {
    let sigma = &eq.sigma;
    let q = radical_free_part(eq);
    let (s0, s1, s2) = (sigma.c0, sigma.c1, 2.0 * sigma.c2);
    let (q0, q1, q2) = (q.c0, q.c1, 2.0 * q.c2);

    let a = s1 * s1 - 2.0 * s2 * s0;
    let b = q1 * s1 - s2 * q0 - s0 * q2;
    let c = q1 * q1 - 2.0 * q2 * q0;

    let scale = [s0, s1, s2, q0, q1, q2]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .powi(2)
        .max(1.0);

    if a.abs() <= 1e-13 * scale {
        if b.abs() <= 1e-13 * scale {
            return Err(NuError::DegenerateK);
        }
        return Ok(vec![-c / (2.0 * b)]);
    }

    let d = b * b - a * c;
    if d < -1e-13 * scale * scale {
        return Err(NuError::NoRealK { discriminant: d });
    }
    let sq = d.max(0.0).sqrt();
    let k1 = (-b + sq) / a;
    let k2 = (-b - sq) / a;
    let kscale = k1.abs().max(k2.abs()).max(1.0);
    if (k1 - k2).abs() <= 1e-12 * kscale {
        Ok(vec![0.5 * (k1 + k2)])
    } else {
        Ok(vec![k1, k2])
    }
}

/// The linear branches `pi(x) = (sigma' - tau_tilde)/2 +- sqrt(p)` for an
/// admissible `k`.
///
/// When `p'' = 0` the radical degenerates to the constant `sqrt(p(0))`.
/// A `p` with negative leading coefficient or negative constant part has no
/// real square root and yields no branches. Returns each branch paired with
/// its sign choice.
pub fn pi_branches(eq: &NuEquation, k: f64) -> Result<Vec<(LowPoly, SignChoice)>, NuError> {
    let q = radical_free_part(eq);
    let p = q.add(&eq.sigma.scale(k));
    let base = eq.sigma.derivative().sub(&eq.tau_tilde).scale(0.5);
    let pscale = p.max_abs_coeff().max(1.0);

    // Complete the square from whichever end is better conditioned: the
    // leading coefficient (`sqrt(p'') x + ...`) or the constant term
    // (`... + sqrt(p(0))`). Near a degeneracy one of the two ends cancels
    // catastrophically while the other stays exact; the constant radical
    // handles the fully degenerate p'' = 0 case.
    let square_residual = |root: &LowPoly| root.mul_low(root).sub(&p).max_abs_coeff() / pscale;
    let mut candidates: Vec<LowPoly> = Vec::new();
    if p.c2 > 0.0 {
        let slope = p.c2.sqrt();
        candidates.push(LowPoly::linear(slope * p.c1 / (2.0 * p.c2), slope));
    }
    if p.c0 > 0.0 {
        let c = p.c0.sqrt();
        candidates.push(LowPoly::linear(c, p.c1 / (2.0 * c)));
    }
    if p.c2.abs() <= 1e-12 * pscale && p.c1.abs() <= 1e-10 * pscale {
        candidates.push(LowPoly::constant(p.c0.max(0.0).sqrt()));
    }
    let root: LowPoly = match candidates
        .into_iter()
        .map(|r| (square_residual(&r), r))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
    {
        Some((residual, root)) if residual <= COEFF_RTOL => root,
        Some((residual, _)) => {
            if p.c2 < -1e-12 * pscale || (p.c2.abs() <= 1e-12 * pscale && p.c0 < -1e-12 * pscale) {
                // Negative-definite p: no real radical, hence no real branch.
                return Ok(vec![]);
            }
            return Err(NuError::NotPerfectSquare { k, residual });
        }
        None => {
            // No positive end to anchor the square.
            if p.c2 < 0.0 || p.c0 < 0.0 {
                return Ok(vec![]);
            }
            return Err(NuError::NotPerfectSquare { k, residual: 1.0 });
        }
    };

    let plus = base.add(&root);
    let minus = base.sub(&root);
    if root.is_zero() {
        return Ok(vec![(plus, SignChoice::Plus)]);
    }
    Ok(vec![(plus, SignChoice::Plus), (minus, SignChoice::Minus)])
}

/// Integrate `num/sigma` into an exp-power-product: the closed form of
/// `exp(int num/sigma)` for linear `num` and `deg sigma <= 2`.
fn integrate_rational(num: &LowPoly, sigma: &LowPoly) -> Result<ExpPowerProduct, NuError> {
    let scale = sigma.max_abs_coeff();
    let mut out = ExpPowerProduct::one();
    if sigma.c2.abs() > 1e-13 * scale {
        let roots = sigma.real_roots();
        if roots.len() < 2 {
            return Err(NuError::UnsupportedForm {
                reason: "sigma has complex roots".into(),
            });
        }
        let (r1, r2) = (roots[0], roots[1]);
        if (r1 - r2).abs() <= 1e-9 * (1.0 + r1.abs().max(r2.abs())) {
            // Repeated root: num/sigma = num(r)/(c2 (x-r)^2) + num'/(c2 (x-r));
            // the double pole integrates outside the power-product closure
            // unless its residue vanishes.
            let r = 0.5 * (r1 + r2);
            let at_root = num.eval(r);
            if at_root.abs() > 1e-10 * (1.0 + num.max_abs_coeff()) {
                return Err(NuError::IntegrationFailure { root: r });
            }
            out.push_factor(r, num.c1 / sigma.c2);
            return Ok(out);
        }
        // num/(c2 (x-r1)(x-r2)) = A/(x-r1) + B/(x-r2)
        let a = num.eval(r1) / (sigma.c2 * (r1 - r2));
        let b = num.eval(r2) / (sigma.c2 * (r2 - r1));
        out.push_factor(r1, a);
        out.push_factor(r2, b);
        return Ok(out);
    }
    if sigma.c1.abs() > 1e-13 * scale.max(1.0) {
        // sigma = c1 (x - r): num/sigma = slope/c1 + num(r)/(c1 (x-r)).
        let r = -sigma.c0 / sigma.c1;
        out.exp_c1 = num.c1 / sigma.c1;
        out.push_factor(r, num.eval(r) / sigma.c1);
        return Ok(out);
    }
    // Constant sigma: plain polynomial integral.
    out.exp_c1 = num.c0 / sigma.c0;
    out.exp_c2 = 0.5 * num.c1 / sigma.c0;
    Ok(out)
}

/// Assemble the full branch data for one `(k, pi)` pair.
pub fn build_branch(
    eq: &NuEquation,
    k: f64,
    pi: LowPoly,
    sign_choice: SignChoice,
) -> Result<NuBranch, NuError> {
    let tau = eq.tau_tilde.add(&pi.scale(2.0));
    let lambda = k + pi.derivative().c0;
    let phi = integrate_rational(&pi, &eq.sigma)?;
    let rho = integrate_rational(&tau.sub(&eq.sigma.derivative()), &eq.sigma)?;
    let branch = NuBranch { k, pi, tau, lambda, phi, rho, sign_choice };
    check_branch_identity(eq, &branch)?;
    Ok(branch)
}

/// Coefficient-wise residual of `pi^2 + (tau_tilde - sigma') pi + sigma_tilde - k sigma`,
/// scaled by the largest input coefficient.
pub fn branch_identity_residual(eq: &NuEquation, branch: &NuBranch) -> f64 {
    let lhs = branch
        .pi
        .mul_low(&branch.pi)
        .add(&eq.tau_tilde.sub(&eq.sigma.derivative()).mul_low(&branch.pi))
        .add(&eq.sigma_tilde)
        .sub(&eq.sigma.scale(branch.k));
    let scale = eq
        .sigma_tilde
        .max_abs_coeff()
        .max(eq.sigma.max_abs_coeff() * branch.k.abs())
        .max(branch.pi.max_abs_coeff().powi(2))
        .max(1.0);
    lhs.max_abs_coeff() / scale
}

fn check_branch_identity(eq: &NuEquation, branch: &NuBranch) -> Result<(), NuError> {
    let residual = branch_identity_residual(eq, branch);
    if residual > COEFF_RTOL {
        return Err(NuError::NotPerfectSquare { k: branch.k, residual });
    }
    Ok(())
}

fn sigma_vanishes_at(eq: &NuEquation, x: f64) -> bool {
    eq.sigma.eval(x).abs() <= 1e-9 * eq.sigma.max_abs_coeff() * (1.0 + x.abs())
}

/// Bound-state admissibility of one branch on the equation's domain:
///
/// 1. `tau' < 0`;
/// 2. on a bounded domain, the zero of `tau` lies strictly inside;
/// 3. the gauge factor vanishes at every open finite endpoint where `sigma`
///    vanishes, and stays bounded at closed endpoints;
/// 4. the weight is integrable: factor exponents above -1 at finite
///    endpoints and genuine decay toward infinite ones.
pub fn branch_is_physical(eq: &NuEquation, branch: &NuBranch) -> bool {
    let tau = &branch.tau;
    if !(tau.c1 < 0.0) {
        return false;
    }
    if eq.domain.is_bounded() {
        let root = -tau.c0 / tau.c1;
        let margin = 1e-9 * eq.domain.span();
        if !(root > eq.domain.lower + margin && root < eq.domain.upper - margin) {
            return false;
        }
    }
    for (endpoint, closed) in eq.domain.finite_endpoints() {
        let phi_exp = branch.phi.exponent_at(endpoint);
        if closed || !sigma_vanishes_at(eq, endpoint) {
            if phi_exp < 0.0 {
                return false;
            }
        } else if phi_exp <= 0.0 {
            return false;
        }
        if branch.rho.exponent_at(endpoint) <= -1.0 + 1e-9 {
            return false;
        }
    }
    if eq.domain.upper.is_infinite() && !branch.rho.decays_at_infinity(1.0) {
        return false;
    }
    if eq.domain.lower.is_infinite() && !branch.rho.decays_at_infinity(-1.0) {
        return false;
    }
    true
}

/// Total gauge exponent over the open singular endpoints: the tie-break key
/// for limit-circle cases where two branches are both square-integrable.
fn regularity_key(eq: &NuEquation, branch: &NuBranch) -> f64 {
    eq.domain
        .finite_endpoints()
        .iter()
        .filter(|(e, closed)| !closed && sigma_vanishes_at(eq, *e))
        .map(|(e, _)| branch.phi.exponent_at(*e))
        .sum()
}

/// Pick the unique admissible branch from `candidates`.
///
/// At an endpoint in the limit-circle regime two branches can both carry
/// square-integrable families (their gauge exponents differ by less than
/// one); the regular solution is the one with the larger exponent, matching
/// the conventional boundary condition at the singular point. Only a
/// genuine tie is reported as ambiguous.
pub fn select_bound_state_branch(
    eq: &NuEquation,
    candidates: &[NuBranch],
) -> Result<NuBranch, NuError> {
    let mut physical: Vec<&NuBranch> = candidates
        .iter()
        .filter(|b| branch_is_physical(eq, b))
        .collect();
    match physical.len() {
        0 => Err(NuError::NoPhysicalBranch),
        1 => Ok(physical.pop().unwrap().clone()),
        n => {
            // Numerically coincident branches (duplicate k roots) collapse.
            let first = physical[0];
            let coincident = physical.iter().all(|b| {
                (b.k - first.k).abs() <= 1e-9 * (1.0 + first.k.abs())
                    && b.pi.sub(&first.pi).max_abs_coeff()
                        <= 1e-9 * (1.0 + first.pi.max_abs_coeff())
            });
            if coincident {
                return Ok(first.clone());
            }
            let keys: Vec<f64> = physical.iter().map(|b| regularity_key(eq, b)).collect();
            let best = keys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut leaders: Vec<&NuBranch> = physical
                .iter()
                .zip(&keys)
                .filter(|(_, &k)| k > best - 1e-9)
                .map(|(b, _)| *b)
                .collect();
            if leaders.len() == 1 {
                Ok(leaders.pop().unwrap().clone())
            } else {
                Err(NuError::AmbiguousBranch { count: n })
            }
        }
    }
}

/// All branches over all admissible `k`, in deterministic order.
pub fn all_branches(eq: &NuEquation) -> Result<Vec<NuBranch>, NuError> {
    let mut out = Vec::new();
    for k in k_candidates(eq)? {
        for (pi, sign) in pi_branches(eq, k)? {
            out.push(build_branch(eq, k, pi, sign)?);
        }
    }
    Ok(out)
}

/// Full reduction: `k` candidates, branch enumeration, physical selection.
pub fn reduce(eq: &NuEquation) -> Result<NuBranch, NuError> {
    let branches = all_branches(eq)?;
    select_bound_state_branch(eq, &branches)
}

/// The eigen-parameter forced by a degree-`n` polynomial solution:
/// `lambda_n = -n tau' - n(n-1) sigma''/2`.
pub fn quantized_lambda(tau: &LowPoly, sigma: &LowPoly, n: u32) -> f64 {
    let n = n as f64;
    -n * tau.c1 - 0.5 * n * (n - 1.0) * sigma.second_derivative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::types::Interval;

    fn oscillator(eps: f64) -> NuEquation {
        NuEquation::new(
            LowPoly::constant(1.0),
            LowPoly::quadratic(2.0 * eps, 0.0, -1.0),
            LowPoly::zero(),
            Interval::real_line(),
        )
        .unwrap()
    }

    fn coulomb(z: f64, l: u32, eps0: f64) -> NuEquation {
        let l = l as f64;
        NuEquation::new(
            LowPoly::linear(0.0, 1.0),
            LowPoly::quadratic(-l * (l + 1.0), 2.0 * z, 2.0 * eps0),
            LowPoly::zero(),
            Interval::open(0.0, f64::INFINITY),
        )
        .unwrap()
    }

    fn spherical(mu: f64, m: i32) -> NuEquation {
        let m2 = (m * m) as f64;
        NuEquation::new(
            LowPoly::quadratic(1.0, 0.0, -1.0),
            LowPoly::quadratic(mu - m2, 0.0, -mu),
            LowPoly::linear(0.0, -2.0),
            Interval::closed(-1.0, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn k_for_oscillator_is_two_eps() {
        let ks = k_candidates(&oscillator(0.5)).unwrap();
        assert_eq!(ks.len(), 1);
        assert!((ks[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn k_for_coulomb_ground() {
        let mut ks = k_candidates(&coulomb(1.0, 0, -0.5)).unwrap();
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ks[0] - 1.0).abs() < 1e-12);
        assert!((ks[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn k_for_spherical_harmonics() {
        let mut ks = k_candidates(&spherical(6.0, 2)).unwrap();
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ks[0] - 2.0).abs() < 1e-12, "k = mu - m^2");
        assert!((ks[1] - 6.0).abs() < 1e-12, "k = mu");
    }

    #[test]
    fn k_candidates_satisfy_square_condition() {
        for eq in [&oscillator(0.7), &coulomb(1.5, 1, -0.3), &spherical(12.0, 3)] {
            for k in k_candidates(eq).unwrap() {
                assert!(square_defect(eq, k) < 1e-10, "defect for k={k}");
            }
        }
    }

    #[test]
    fn no_real_k_reported() {
        // sigma = 1 - x^2, sigma_tilde chosen so the k-quadratic has complex roots:
        // q = -sigma_tilde, a = 4, b = -q0 - q2'', c = ...; engineered instance.
        let eq = NuEquation::new(
            LowPoly::quadratic(1.0, 0.0, -1.0),
            LowPoly::quadratic(-10.0, 40.0, 0.0),
            LowPoly::zero(),
            Interval::closed(-1.0, 1.0),
        )
        .unwrap();
        match k_candidates(&eq) {
            Err(NuError::NoRealK { .. }) => {}
            other => panic!("expected NoRealK, got {other:?}"),
        }
    }

    #[test]
    fn pi_branches_oscillator() {
        let eq = oscillator(0.5);
        let branches = pi_branches(&eq, 1.0).unwrap();
        assert_eq!(branches.len(), 2);
        let mut slopes: Vec<f64> = branches.iter().map(|b| b.0.c1).collect();
        slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((slopes[0] + 1.0).abs() < 1e-14 && (slopes[1] - 1.0).abs() < 1e-14);
        for (pi, _) in &branches {
            assert!(pi.c0.abs() < 1e-14);
        }
    }

    #[test]
    fn pi_branches_coulomb_ground() {
        let eq = coulomb(1.0, 0, -0.5);
        // k = 2Z - (2l+1) sqrt(-2 eps0) = 1
        let branches = pi_branches(&eq, 1.0).unwrap();
        let target = LowPoly::linear(1.0, -1.0); // l + 1 - x sqrt(-2 eps0)
        assert!(
            branches
                .iter()
                .any(|(pi, _)| pi.sub(&target).max_abs_coeff() < 1e-12),
            "pi = 1 - x among {branches:?}"
        );
    }

    #[test]
    fn pi_branch_constant_radical() {
        // sigma = 1, tau_tilde = 0, sigma_tilde = -1, k = 0: p = 1 constant.
        let eq = NuEquation::new(
            LowPoly::constant(1.0),
            LowPoly::constant(-1.0),
            LowPoly::zero(),
            Interval::real_line(),
        )
        .unwrap();
        let branches = pi_branches(&eq, 0.0).unwrap();
        assert_eq!(branches.len(), 2);
        for (pi, _) in &branches {
            assert_eq!(pi.c1, 0.0);
            assert!((pi.c0.abs() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_k_rejected() {
        let eq = oscillator(0.5);
        match pi_branches(&eq, 2.5) {
            Err(NuError::NotPerfectSquare { .. }) => {}
            other => panic!("expected NotPerfectSquare, got {other:?}"),
        }
    }

    #[test]
    fn reduce_oscillator_branch() {
        let eps = 0.5;
        let b = reduce(&oscillator(eps)).unwrap();
        assert!((b.k - 2.0 * eps).abs() < 1e-14);
        assert!(b.pi.sub(&LowPoly::linear(0.0, -1.0)).max_abs_coeff() < 1e-14);
        assert!(b.tau.sub(&LowPoly::linear(0.0, -2.0)).max_abs_coeff() < 1e-14);
        assert!((b.lambda - (2.0 * eps - 1.0)).abs() < 1e-14);
        // phi = exp(-x^2/2), rho = exp(-x^2)
        assert!((b.phi.exp_c2 + 0.5).abs() < 1e-14 && b.phi.factors.is_empty());
        assert!((b.rho.exp_c2 + 1.0).abs() < 1e-14 && b.rho.factors.is_empty());
    }

    #[test]
    fn reduce_coulomb_branch() {
        // Z = 1, l = 0, eps0 = -1/8 (second shell): phi = x e^{-x/2}, rho = x e^{-x}.
        let b = reduce(&coulomb(1.0, 0, -0.125)).unwrap();
        assert!((b.phi.exponent_at(0.0) - 1.0).abs() < 1e-12);
        assert!((b.phi.exp_c1 + 0.5).abs() < 1e-12);
        assert!((b.rho.exponent_at(0.0) - 1.0).abs() < 1e-12);
        assert!((b.rho.exp_c1 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_spherical_branch() {
        let b = reduce(&spherical(6.0, 2)).unwrap();
        assert!(b.pi.sub(&LowPoly::linear(0.0, -2.0)).max_abs_coeff() < 1e-12);
        assert!(b.tau.sub(&LowPoly::linear(0.0, -6.0)).max_abs_coeff() < 1e-12);
        assert!((b.lambda - 0.0).abs() < 1e-12, "mu - |m|(|m|+1) = 0");
        assert!((b.phi.exponent_at(1.0) - 1.0).abs() < 1e-12);
        assert!((b.phi.exponent_at(-1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_legendre_case_m_zero() {
        let b = reduce(&spherical(6.0, 0)).unwrap();
        assert!(b.pi.max_abs_coeff() < 1e-12);
        assert!(b.phi.factors.is_empty());
        assert!((b.lambda - 6.0).abs() < 1e-12);
    }

    #[test]
    fn selection_is_order_independent() {
        let eq = coulomb(1.0, 0, -0.5);
        let branches = all_branches(&eq).unwrap();
        let picked = select_bound_state_branch(&eq, &branches).unwrap();
        let mut rev = branches.clone();
        rev.reverse();
        let picked_rev = select_bound_state_branch(&eq, &rev).unwrap();
        assert_eq!(picked.pi, picked_rev.pi);
        for rot in 1..branches.len() {
            let mut rotated = branches.clone();
            rotated.rotate_left(rot);
            assert_eq!(
                select_bound_state_branch(&eq, &rotated).unwrap().pi,
                picked.pi
            );
        }
    }

    #[test]
    fn branch_identity_holds() {
        for eq in [&oscillator(1.3), &coulomb(2.0, 1, -0.4), &spherical(12.0, 3)] {
            for b in all_branches(eq).unwrap() {
                assert!(branch_identity_residual(eq, &b) < 1e-10);
            }
        }
    }

    #[test]
    fn quantized_lambda_values() {
        // tau' = -2, sigma'' = 0, n = 3.
        let tau = LowPoly::linear(0.0, -2.0);
        let sigma = LowPoly::constant(1.0);
        assert_eq!(quantized_lambda(&tau, &sigma, 3), 6.0);
        assert_eq!(quantized_lambda(&tau, &sigma, 0), 0.0);
        // Jacobi data alpha = beta = 0: tau' = -2, sigma'' = -2, n = 2:
        // lambda = n(n + 1) = 6.
        let tau_j = LowPoly::linear(0.0, -2.0);
        let sigma_j = LowPoly::quadratic(1.0, 0.0, -1.0);
        assert_eq!(quantized_lambda(&tau_j, &sigma_j, 2), 6.0);
    }

    #[test]
    fn repeated_sigma_root_integration_failure() {
        // sigma = x^2 with pi not vanishing at 0 cannot integrate in closure.
        let num = LowPoly::linear(1.0, 1.0);
        let sigma = LowPoly::quadratic(0.0, 0.0, 1.0);
        match integrate_rational(&num, &sigma) {
            Err(NuError::IntegrationFailure { .. }) => {}
            other => panic!("expected IntegrationFailure, got {other:?}"),
        }
        // With vanishing residue it stays in closure: x / x^2 -> (x)^1 power.
        let ok = integrate_rational(&LowPoly::linear(0.0, 1.0), &sigma).unwrap();
        assert!((ok.exponent_at(0.0) - 1.0).abs() < 1e-12);
    }
}
