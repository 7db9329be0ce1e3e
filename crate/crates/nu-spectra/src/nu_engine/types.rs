//! Core data types for the reduction of generalized hypergeometric-type
//! equations: low-degree polynomials, domain intervals, the equation triple
//! and the exp-power-product closure that houses the gauge factor and the
//! weight function.

use thiserror::Error;

/// Relative tolerance for coefficient-wise polynomial identities.
pub const COEFF_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NuError {
    #[error("no real k candidate: discriminant {discriminant} < 0")]
    NoRealK { discriminant: f64 },
    #[error("degenerate k equation: both leading coefficients vanish")]
    DegenerateK,
    #[error("p(x) is not a perfect square for k={k}: residual {residual}")]
    NotPerfectSquare { k: f64, residual: f64 },
    #[error("no candidate branch satisfies the bound-state conditions")]
    NoPhysicalBranch,
    #[error("{count} branches satisfy the bound-state conditions")]
    AmbiguousBranch { count: usize },
    #[error("partial fractions need a simple pole at repeated root {root}")]
    IntegrationFailure { root: f64 },
    #[error("weight function is not reducible to polynomial Rodrigues data: {reason}")]
    UnsupportedForm { reason: String },
    #[error("invalid equation: {0}")]
    InvalidEquation(String),
}

/// Polynomial of degree at most two, stored as `c0 + c1 x + c2 x^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowPoly {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl LowPoly {
    pub const fn constant(c0: f64) -> Self {
        Self { c0, c1: 0.0, c2: 0.0 }
    }

    pub const fn linear(c0: f64, c1: f64) -> Self {
        Self { c0, c1, c2: 0.0 }
    }

    pub const fn quadratic(c0: f64, c1: f64, c2: f64) -> Self {
        Self { c0, c1, c2 }
    }

    pub const fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c0 + x * (self.c1 + x * self.c2)
    }

    /// Degree implied by exactly-zero leading coefficients.
    pub fn nominal_degree(&self) -> usize {
        if self.c2 != 0.0 {
            2
        } else if self.c1 != 0.0 {
            1
        } else {
            0
        }
    }

    pub fn derivative(&self) -> LowPoly {
        LowPoly::linear(self.c1, 2.0 * self.c2)
    }

    pub fn second_derivative(&self) -> f64 {
        2.0 * self.c2
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0.0 && self.c1 == 0.0 && self.c2 == 0.0
    }

    pub fn add(&self, other: &LowPoly) -> LowPoly {
        LowPoly::quadratic(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)
    }

    pub fn sub(&self, other: &LowPoly) -> LowPoly {
        LowPoly::quadratic(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2)
    }

    pub fn scale(&self, s: f64) -> LowPoly {
        LowPoly::quadratic(s * self.c0, s * self.c1, s * self.c2)
    }

    /// Product of two polynomials whose result still has degree <= 2.
    /// Panics if the exact product would have a higher degree; callers only
    /// multiply linear x linear or keep one factor constant.
    pub fn mul_low(&self, other: &LowPoly) -> LowPoly {
        let d3 = self.c1 * other.c2 + self.c2 * other.c1;
        let d4 = self.c2 * other.c2;
        assert!(
            d3 == 0.0 && d4 == 0.0,
            "mul_low would exceed degree 2 (cubic {d3}, quartic {d4})"
        );
        LowPoly::quadratic(
            self.c0 * other.c0,
            self.c0 * other.c1 + self.c1 * other.c0,
            self.c0 * other.c2 + self.c1 * other.c1 + self.c2 * other.c0,
        )
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c0.abs().max(self.c1.abs()).max(self.c2.abs())
    }

    /// Real roots, ascending. Nearly-degenerate quadratics fall back to the
    /// linear root.
    pub fn real_roots(&self) -> Vec<f64> {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return vec![];
        }
        if self.c2.abs() <= 1e-14 * scale {
            if self.c1.abs() <= 1e-14 * scale {
                return vec![];
            }
            return vec![-self.c0 / self.c1];
        }
        let disc = self.c1 * self.c1 - 4.0 * self.c2 * self.c0;
        if disc < 0.0 {
            return vec![];
        }
        let sq = disc.sqrt();
        // Citardauq form on one root avoids cancellation.
        let q = -0.5 * (self.c1 + self.c1.signum() * sq);
        let mut roots = if q == 0.0 {
            vec![0.0, 0.0]
        } else {
            vec![q / self.c2, self.c0 / q]
        };
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots
    }
}

/// An interval of the real line; infinite endpoints allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    pub fn open(lower: f64, upper: f64) -> Self {
        assert!(lower < upper, "interval needs lower < upper");
        Self { lower, upper, lower_closed: false, upper_closed: false }
    }

    /// Closed at the finite endpoints that exist.
    pub fn closed(lower: f64, upper: f64) -> Self {
        assert!(lower < upper, "interval needs lower < upper");
        Self {
            lower,
            upper,
            lower_closed: lower.is_finite(),
            upper_closed: upper.is_finite(),
        }
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn with_lower_closed(mut self, closed: bool) -> Self {
        self.lower_closed = closed && self.lower.is_finite();
        self
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    pub fn contains_strictly(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    pub fn span(&self) -> f64 {
        self.upper - self.lower
    }

    /// Finite endpoints together with their closed-ness.
    pub fn finite_endpoints(&self) -> Vec<(f64, bool)> {
        let mut v = Vec::new();
        if self.lower.is_finite() {
            v.push((self.lower, self.lower_closed));
        }
        if self.upper.is_finite() {
            v.push((self.upper, self.upper_closed));
        }
        v
    }
}

/// The generalized hypergeometric-type equation
/// `u'' + (tau_tilde/sigma) u' + (sigma_tilde/sigma^2) u = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuEquation {
    pub sigma: LowPoly,
    pub sigma_tilde: LowPoly,
    pub tau_tilde: LowPoly,
    pub domain: Interval,
}

impl NuEquation {
    pub fn new(
        sigma: LowPoly,
        sigma_tilde: LowPoly,
        tau_tilde: LowPoly,
        domain: Interval,
    ) -> Result<Self, NuError> {
        if sigma.is_zero() {
            return Err(NuError::InvalidEquation("sigma is identically zero".into()));
        }
        if tau_tilde.c2 != 0.0 {
            return Err(NuError::InvalidEquation("tau_tilde must have degree <= 1".into()));
        }
        let margin = 1e-12 * (1.0 + domain.span().min(1e300).abs());
        for r in sigma.real_roots() {
            if r > domain.lower + margin && r < domain.upper - margin {
                return Err(NuError::InvalidEquation(format!(
                    "sigma vanishes at {r} strictly inside the domain"
                )));
            }
        }
        Ok(Self { sigma, sigma_tilde, tau_tilde, domain })
    }
}

/// `exp(Q(x)) * prod_i |x - r_i|^{p_i}` with `deg Q <= 2` and `Q(0) = 0`.
///
/// The absolute-value convention keeps evaluation real for non-integer
/// powers on either side of a root; weight functions and gauge factors are
/// only ever used where this matches the conventional real branch.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPowerProduct {
    /// Linear coefficient of Q.
    pub exp_c1: f64,
    /// Quadratic coefficient of Q.
    pub exp_c2: f64,
    /// Distinct (root, power) factors, sorted by root.
    pub factors: Vec<(f64, f64)>,
}

impl ExpPowerProduct {
    pub fn one() -> Self {
        Self { exp_c1: 0.0, exp_c2: 0.0, factors: Vec::new() }
    }

    pub fn new(exp_c1: f64, exp_c2: f64, factors: Vec<(f64, f64)>) -> Self {
        let mut out = Self { exp_c1, exp_c2, factors: Vec::new() };
        for (r, p) in factors {
            out.push_factor(r, p);
        }
        out
    }

    /// Merge a factor, summing powers of coincident roots. Powers at rounding
    /// level are dropped so a factor that cancels analytically does not leave
    /// a spurious trace in the exponent bookkeeping.
    pub fn push_factor(&mut self, root: f64, power: f64) {
        if power.abs() < 1e-10 {
            return;
        }
        let scale = 1.0 + root.abs();
        for f in self.factors.iter_mut() {
            if (f.0 - root).abs() <= 1e-9 * scale {
                f.1 += power;
                self.factors.retain(|g| g.1.abs() >= 1e-10);
                return;
            }
        }
        self.factors.push((root, power));
        self.factors.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    }

    pub fn eval_abs(&self, x: f64) -> f64 {
        let mut v = (self.exp_c1 * x + self.exp_c2 * x * x).exp();
        for &(r, p) in &self.factors {
            v *= (x - r).abs().powf(p);
        }
        v
    }

    pub fn ln_abs(&self, x: f64) -> f64 {
        let mut v = self.exp_c1 * x + self.exp_c2 * x * x;
        for &(r, p) in &self.factors {
            v += p * (x - r).abs().ln();
        }
        v
    }

    /// Exponent of the factor anchored at `point` (0 when none).
    pub fn exponent_at(&self, point: f64) -> f64 {
        let scale = 1.0 + point.abs();
        for &(r, p) in &self.factors {
            if (r - point).abs() <= 1e-9 * scale {
                return p;
            }
        }
        0.0
    }

    /// Sum of all factor powers: the algebraic growth order at infinity.
    pub fn power_sum(&self) -> f64 {
        self.factors.iter().map(|f| f.1).sum()
    }

    /// True when the product decays to zero toward `+inf` (`sign > 0`)
    /// or `-inf` (`sign < 0`); marginal algebraic decay (power sum in
    /// [-1, 0]) does not count as integrable decay.
    pub fn decays_at_infinity(&self, sign: f64) -> bool {
        if self.exp_c2 != 0.0 {
            return self.exp_c2 < 0.0;
        }
        if self.exp_c1 != 0.0 {
            return self.exp_c1 * sign < 0.0;
        }
        self.power_sum() < -1.0
    }
}

/// One selected reduction branch: the constant `k`, the linear `pi` and
/// `tau`, the eigen-parameter `lambda`, the gauge factor `phi` and the
/// weight `rho` solving `(sigma rho)' = tau rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuBranch {
    pub k: f64,
    pub pi: LowPoly,
    pub tau: LowPoly,
    pub lambda: f64,
    pub phi: ExpPowerProduct,
    pub rho: ExpPowerProduct,
    pub sign_choice: SignChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignChoice {
    Plus,
    Minus,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_poly_eval_and_deriv() {
        let p = LowPoly::quadratic(1.0, -2.0, 3.0);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(p.derivative(), LowPoly::linear(-2.0, 6.0));
        assert_eq!(p.second_derivative(), 6.0);
        assert_eq!(p.nominal_degree(), 2);
        assert_eq!(LowPoly::linear(0.5, 1.0).nominal_degree(), 1);
        assert_eq!(LowPoly::constant(4.0).nominal_degree(), 0);
    }

    #[test]
    fn quadratic_roots_stable() {
        let p = LowPoly::quadratic(2.0, -3.0, 1.0); // (x-1)(x-2)
        let r = p.real_roots();
        assert!((r[0] - 1.0).abs() < 1e-14 && (r[1] - 2.0).abs() < 1e-14);
        assert!(LowPoly::quadratic(1.0, 0.0, 1.0).real_roots().is_empty());
    }

    #[test]
    fn sigma_root_inside_domain_rejected() {
        let sigma = LowPoly::quadratic(0.0, 1.0, -1.0); // x(1-x)
        let err = NuEquation::new(
            sigma,
            LowPoly::zero(),
            LowPoly::zero(),
            Interval::open(-1.0, 2.0),
        )
        .unwrap_err();
        assert!(matches!(err, NuError::InvalidEquation(_)));
        // Roots on the boundary are fine.
        assert!(NuEquation::new(
            sigma,
            LowPoly::zero(),
            LowPoly::zero(),
            Interval::open(0.0, 1.0)
        )
        .is_ok());
    }

    #[test]
    fn exp_power_product_merges_duplicate_roots() {
        let mut e = ExpPowerProduct::one();
        e.push_factor(1.0, 0.5);
        e.push_factor(1.0 + 1e-12, 0.5);
        assert_eq!(e.factors.len(), 1);
        assert!((e.factors[0].1 - 1.0).abs() < 1e-15);
        assert!((e.eval_abs(3.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn decay_classification() {
        let gauss = ExpPowerProduct::new(0.0, -1.0, vec![]);
        assert!(gauss.decays_at_infinity(1.0) && gauss.decays_at_infinity(-1.0));
        let exp = ExpPowerProduct::new(-2.0, 0.0, vec![]);
        assert!(exp.decays_at_infinity(1.0) && !exp.decays_at_infinity(-1.0));
        let alg = ExpPowerProduct::new(0.0, 0.0, vec![(0.0, -1.5)]);
        assert!(alg.decays_at_infinity(1.0));
        let marginal = ExpPowerProduct::new(0.0, 0.0, vec![(0.0, -0.8)]);
        assert!(!marginal.decays_at_infinity(1.0));
    }
}
