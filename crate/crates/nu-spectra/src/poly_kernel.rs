//! Classical orthogonal polynomials (Jacobi, Laguerre, Hermite), terminating
//! hypergeometric sums, log-gamma/beta machinery, and the closed-form
//! integral of a weighted Laguerre product.
//!
//! Polynomials are evaluated by the three-term recurrence, which is stable on
//! the classical intervals; explicit coefficient lists are reserved for the
//! Rodrigues validation path in `nu_engine`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("argument {value} outside the domain {what}")]
    DomainError { what: &'static str, value: f64 },
    #[error("lower parameter c hits a nonpositive integer at term {term}")]
    PoleAtC { term: u32 },
    #[error("integrand not integrable: alpha + s = {power} <= -1")]
    DivergentIntegral { power: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// One of the three classical families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrthoFamily {
    /// Parameters `alpha, beta > -1` for orthogonality on (-1, 1); values
    /// outside that range are accepted for plain evaluation of the finite
    /// families that arise from hyperbolic potential wells.
    Jacobi { alpha: f64, beta: f64 },
    Laguerre { alpha: f64 },
    Hermite,
}

/// Coefficients of `x y_n = alpha_n y_{n+1} + beta_n y_n + gamma_n y_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceCoeffs {
    pub alpha_n: f64,
    pub beta_n: f64,
    pub gamma_n: f64,
}

pub fn recurrence_coeffs(family: OrthoFamily, n: u32) -> RecurrenceCoeffs {
    let nf = n as f64;
    match family {
        OrthoFamily::Hermite => RecurrenceCoeffs { alpha_n: 0.5, beta_n: 0.0, gamma_n: nf },
        OrthoFamily::Laguerre { alpha } => RecurrenceCoeffs {
            alpha_n: -(nf + 1.0),
            beta_n: alpha + 2.0 * nf + 1.0,
            gamma_n: -(alpha + nf),
        },
        OrthoFamily::Jacobi { alpha, beta } => {
            let s = alpha + beta;
            let alpha_n = 2.0 * (nf + 1.0) * (s + nf + 1.0) / ((s + 2.0 * nf + 1.0) * (s + 2.0 * nf + 2.0));
            let beta_n = if n == 0 && s.abs() < 1e-12 {
                (beta - alpha) / (s + 2.0)
            } else {
                (beta - alpha) * (beta + alpha) / ((s + 2.0 * nf) * (s + 2.0 * nf + 2.0))
            };
            let gamma_n =
                2.0 * (alpha + nf) * (beta + nf) / ((s + 2.0 * nf) * (s + 2.0 * nf + 1.0));
            RecurrenceCoeffs { alpha_n, beta_n, gamma_n }
        }
    }
}

/// Value of `y_n(x)` by forward three-term recurrence.
pub fn ortho_eval(family: OrthoFamily, n: u32, x: f64) -> f64 {
    let y0 = 1.0;
    if n == 0 {
        return y0;
    }
    let y1 = match family {
        OrthoFamily::Hermite => 2.0 * x,
        OrthoFamily::Laguerre { alpha } => alpha + 1.0 - x,
        OrthoFamily::Jacobi { alpha, beta } => {
            0.5 * (alpha + beta + 2.0) * x + 0.5 * (alpha - beta)
        }
    };
    let (mut prev, mut cur) = (y0, y1);
    for j in 1..n {
        let rc = recurrence_coeffs(family, j);
        let next = ((x - rc.beta_n) * cur - rc.gamma_n * prev) / rc.alpha_n;
        prev = cur;
        cur = next;
    }
    cur
}

/// Squared norm `d_n^2 = int y_n^2 rho` over the family's natural interval,
/// computed in log space.
pub fn norm_squared(family: OrthoFamily, n: u32) -> Result<f64, PolyError> {
    let nf = n as f64;
    match family {
        OrthoFamily::Hermite => {
            Ok((nf * 2.0f64.ln() + log_gamma(nf + 1.0)? + 0.5 * std::f64::consts::PI.ln()).exp())
        }
        OrthoFamily::Laguerre { alpha } => {
            if alpha <= -1.0 {
                return Err(PolyError::DomainError { what: "Laguerre alpha > -1", value: alpha });
            }
            Ok((log_gamma(alpha + nf + 1.0)? - log_gamma(nf + 1.0)?).exp())
        }
        OrthoFamily::Jacobi { alpha, beta } => {
            if alpha <= -1.0 || beta <= -1.0 {
                return Err(PolyError::DomainError {
                    what: "Jacobi alpha, beta > -1",
                    value: alpha.min(beta),
                });
            }
            let s = alpha + beta;
            let ln = (s + 1.0) * 2.0f64.ln() + log_gamma(alpha + nf + 1.0)?
                + log_gamma(beta + nf + 1.0)?
                - log_gamma(nf + 1.0)?
                - (s + 2.0 * nf + 1.0).ln()
                - log_gamma(s + nf + 1.0)?;
            Ok(ln.exp())
        }
    }
}

/// Leading coefficient `a_n` of `y_n`, in log-free closed form.
pub fn leading_coeff(family: OrthoFamily, n: u32) -> Result<f64, PolyError> {
    let nf = n as f64;
    match family {
        OrthoFamily::Hermite => Ok(2.0f64.powi(n as i32)),
        OrthoFamily::Laguerre { .. } => {
            Ok((if n % 2 == 0 { 1.0 } else { -1.0 }) * (-log_gamma(nf + 1.0)?).exp())
        }
        OrthoFamily::Jacobi { alpha, beta } => {
            // Gamma ratio written as a rising product so zero or negative
            // alpha+beta stays finite.
            let s = alpha + beta;
            let mut v = 1.0;
            for i in 0..n {
                v *= (s + nf + 1.0 + i as f64) / 2.0;
            }
            Ok(v * (-log_gamma(nf + 1.0)?).exp())
        }
    }
}

const LANCZOS_G: f64 = 607.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

/// Natural log of the gamma function for positive arguments, by the
/// fixed-coefficient Lanczos rational approximation (relative accuracy
/// around 1e-15 on the working range).
pub fn log_gamma(x: f64) -> Result<f64, PolyError> {
    if !(x > 0.0) {
        return Err(PolyError::DomainError { what: "log_gamma(x > 0)", value: x });
    }
    if x < 0.5 {
        // Reflection keeps small arguments accurate.
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI.ln() - s.ln() - log_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + sum.ln())
}

pub fn gamma(x: f64) -> Result<f64, PolyError> {
    Ok(log_gamma(x)?.exp())
}

/// Euler beta `B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b)`.
pub fn beta_value(a: f64, b: f64) -> Result<f64, PolyError> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(PolyError::DomainError { what: "beta(a, b > 0)", value: a.min(b) });
    }
    Ok((log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?).exp())
}

/// Terminating Gauss series `2F1(-n, b; c; x)`, summed with a running-ratio
/// accumulation over its `n + 1` terms.
pub fn hyp2f1_terminating(neg_n: i32, b: f64, c: f64, x: f64) -> Result<f64, PolyError> {
    if neg_n > 0 {
        return Err(PolyError::InvalidInput(format!(
            "first parameter must be a nonpositive integer, got {neg_n}"
        )));
    }
    let n = (-neg_n) as u32;
    let mut sum = 1.0;
    let mut term = 1.0;
    for j in 0..n {
        let jf = j as f64;
        let denom = c + jf;
        if denom.abs() < 1e-12 * (1.0 + c.abs()) {
            return Err(PolyError::PoleAtC { term: j });
        }
        term *= (neg_n as f64 + jf) * (b + jf) / (denom * (jf + 1.0)) * x;
        sum += term;
    }
    Ok(sum)
}

/// Terminating confluent series `1F1(-n; c; x)`.
pub fn hyp1f1_terminating(neg_n: i32, c: f64, x: f64) -> Result<f64, PolyError> {
    if neg_n > 0 {
        return Err(PolyError::InvalidInput(format!(
            "first parameter must be a nonpositive integer, got {neg_n}"
        )));
    }
    let n = (-neg_n) as u32;
    let mut sum = 1.0;
    let mut term = 1.0;
    for j in 0..n {
        let jf = j as f64;
        let denom = c + jf;
        if denom.abs() < 1e-12 * (1.0 + c.abs()) {
            return Err(PolyError::PoleAtC { term: j });
        }
        term *= (neg_n as f64 + jf) / (denom * (jf + 1.0)) * x;
        sum += term;
    }
    Ok(sum)
}

/// Rising factorial `(a)_j`.
pub fn pochhammer(a: f64, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Closed form of `J = int_0^inf e^{-x} x^{alpha+s} L_n^alpha(x) L_m^beta(x) dx`
/// for integer `s` and `n >= m`, via a terminating 3F2 at unit argument.
///
/// The gamma-ratio in `s` is carried as the falling product
/// `s (s-1) ... (s - (n-m) + 1)`, which stays finite for every integer `s`
/// and vanishes exactly when orthogonality forces `J = 0`.
pub fn laguerre_product_integral(
    n: u32,
    m: u32,
    s: i32,
    alpha: f64,
    beta: f64,
) -> Result<f64, PolyError> {
    if n < m {
        return Err(PolyError::InvalidInput(format!("need n >= m, got n={n}, m={m}")));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(PolyError::DomainError { what: "alpha, beta > -1", value: alpha.min(beta) });
    }
    let power = alpha + s as f64;
    if power <= -1.0 {
        return Err(PolyError::DivergentIntegral { power });
    }
    let d = n - m;
    let sf = s as f64;
    let mut falling = 1.0;
    for i in 0..d {
        falling *= sf - i as f64;
    }
    let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
    let prefactor = sign
        * falling
        * (log_gamma(power + 1.0)? + log_gamma(beta + m as f64 + 1.0)?
            - log_gamma(beta + 1.0)?
            - log_gamma(m as f64 + 1.0)?
            - log_gamma(d as f64 + 1.0)?)
        .exp();

    // 3F2(-m, s+1, beta - alpha - s; beta + 1, d + 1; 1), m + 1 terms.
    let mut sum = 1.0;
    let mut term = 1.0;
    for j in 0..m {
        let jf = j as f64;
        term *= (-(m as f64) + jf) * (sf + 1.0 + jf) * (beta - alpha - sf + jf)
            / ((beta + 1.0 + jf) * (d as f64 + 1.0 + jf) * (jf + 1.0));
        sum += term;
    }
    Ok(prefactor * sum)
}

/// Specialization `I_1 = (alpha + 2n + 1) Gamma(alpha + n + 1) / n!`.
pub fn laguerre_i1(n: u32, alpha: f64) -> Result<f64, PolyError> {
    let nf = n as f64;
    Ok((alpha + 2.0 * nf + 1.0) * (log_gamma(alpha + nf + 1.0)? - log_gamma(nf + 1.0)?).exp())
}

/// Specialization `I_{-1} = Gamma(delta + m + 1) / (m! delta)`.
pub fn laguerre_i_minus1(m: u32, delta: f64) -> Result<f64, PolyError> {
    let mf = m as f64;
    Ok((log_gamma(delta + mf + 1.0)? - log_gamma(mf + 1.0)?).exp() / delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_low_orders() {
        assert_eq!(ortho_eval(OrthoFamily::Hermite, 0, 0.3), 1.0);
        assert!((ortho_eval(OrthoFamily::Hermite, 2, 1.0) - 2.0).abs() < 1e-14); // 4x^2-2
        assert!((ortho_eval(OrthoFamily::Hermite, 3, 0.5) - (8.0 * 0.125 - 12.0 * 0.5)).abs() < 1e-12);
    }

    #[test]
    fn laguerre_at_zero() {
        // L_n^alpha(0) = Gamma(alpha+n+1)/(n! Gamma(alpha+1)).
        assert!((ortho_eval(OrthoFamily::Laguerre { alpha: 0.0 }, 1, 0.0) - 1.0).abs() < 1e-14);
        let v = ortho_eval(OrthoFamily::Laguerre { alpha: 2.5 }, 3, 0.0);
        let expect = (log_gamma(6.5).unwrap() - log_gamma(4.0).unwrap() - log_gamma(3.5).unwrap()).exp();
        assert!((v - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn jacobi_legendre_values() {
        // alpha = beta = 0 is Legendre: P_2(x) = (3x^2-1)/2.
        let f = OrthoFamily::Jacobi { alpha: 0.0, beta: 0.0 };
        assert!((ortho_eval(f, 2, 0.4) - 0.5 * (3.0 * 0.16 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn norm_squared_values() {
        assert!((norm_squared(OrthoFamily::Hermite, 0).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((norm_squared(OrthoFamily::Laguerre { alpha: 0.0 }, 3).unwrap() - 1.0).abs() < 1e-13);
        // Legendre n=1: 2/3.
        let d2 = norm_squared(OrthoFamily::Jacobi { alpha: 0.0, beta: 0.0 }, 1).unwrap();
        assert!((d2 - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn recurrence_gamma_matches_norm_ratio() {
        for family in [
            OrthoFamily::Hermite,
            OrthoFamily::Laguerre { alpha: 1.5 },
            OrthoFamily::Jacobi { alpha: 0.5, beta: 1.5 },
        ] {
            for n in 1..8u32 {
                let rc = recurrence_coeffs(family, n);
                let prev = recurrence_coeffs(family, n - 1);
                let ratio = norm_squared(family, n).unwrap() / norm_squared(family, n - 1).unwrap();
                let expect = prev.alpha_n * ratio;
                assert!(
                    (rc.gamma_n - expect).abs() <= 1e-12 * expect.abs().max(1.0),
                    "{family:?} n={n}: {} vs {}",
                    rc.gamma_n,
                    expect
                );
            }
        }
    }

    #[test]
    fn gamma_and_beta_basics() {
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((beta_value(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        // Gamma(x+1) = x Gamma(x) across the working range.
        for &x in &[0.5, 1.3, 7.7, 43.2, 120.0, 199.0] {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!((lhs - rhs).abs() < 1e-13 * lhs.abs().max(1.0), "x={x}");
        }
        assert!(log_gamma(-1.0).is_err());
    }

    #[test]
    fn hyp2f1_values() {
        assert_eq!(hyp2f1_terminating(0, 3.0, 2.0, 0.9).unwrap(), 1.0);
        assert!((hyp2f1_terminating(-1, 3.0, 2.0, 0.5).unwrap() - 0.25).abs() < 1e-14);
        match hyp2f1_terminating(-3, 1.0, -1.0, 0.5) {
            Err(PolyError::PoleAtC { .. }) => {}
            other => panic!("expected PoleAtC, got {other:?}"),
        }
    }

    #[test]
    fn hyp1f1_values() {
        assert_eq!(hyp1f1_terminating(0, 2.0, 1.0).unwrap(), 1.0);
        assert!((hyp1f1_terminating(-1, 2.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
    }

    /// Absolute-term sum of the terminating 2F1: the conditioning scale the
    /// alternating sum can be trusted to, in units of the result.
    fn hyp2f1_condition(n: u32, b: f64, c: f64, x: f64) -> f64 {
        let mut scale = 1.0f64;
        let mut term = 1.0f64;
        for j in 0..n {
            let jf = j as f64;
            term *= ((-(n as f64) + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * x).abs();
            scale += term;
        }
        scale
    }

    #[test]
    fn hypergeometric_links_to_recurrence() {
        // Jacobi: P_n^{(a,b)}(x) = ((a+1)_n/n!) 2F1(-n, n+a+b+1; a+1; (1-x)/2),
        // reflected through P_n^{(a,b)}(-x) = (-1)^n P_n^{(b,a)}(x) for x < 0
        // to keep the series argument at most 1/2. The comparison scale is
        // the series' own term sum: the alternating sum cancels digits the
        // recurrence route keeps.
        for n in 0..=10u32 {
            for &(a, b) in &[(0.0, 0.0), (0.5, 1.5), (1.0, 0.25)] {
                for &x in &[-0.7, 0.0, 0.3, 0.9] {
                    let direct = ortho_eval(OrthoFamily::Jacobi { alpha: a, beta: b }, n, x);
                    let (la, lb, lx, sign) = if x < 0.0 {
                        (b, a, -x, if n % 2 == 0 { 1.0 } else { -1.0 })
                    } else {
                        (a, b, x, 1.0)
                    };
                    let prefactor = pochhammer(la + 1.0, n) / gamma(n as f64 + 1.0).unwrap();
                    let link = sign * prefactor
                        * hyp2f1_terminating(-(n as i32), n as f64 + la + lb + 1.0, la + 1.0, 0.5 * (1.0 - lx))
                            .unwrap();
                    let cond = prefactor
                        * hyp2f1_condition(n, n as f64 + la + lb + 1.0, la + 1.0, 0.5 * (1.0 - lx));
                    assert!(
                        (direct - link).abs() <= 1e-12 * direct.abs().max(cond),
                        "jacobi n={n} a={a} b={b} x={x}: {direct} vs {link}"
                    );
                }
            }
        }
        // Laguerre: L_n^a(x) = ((a+1)_n/n!) 1F1(-n; a+1; x); the x = 0.7,
        // a = 1, n = 2 entry pins the two evaluation routes to each other.
        for n in 0..=10u32 {
            for &a in &[0.0, 1.0, 2.5] {
                for &x in &[0.0, 0.7, 3.1] {
                    let direct = ortho_eval(OrthoFamily::Laguerre { alpha: a }, n, x);
                    let link = pochhammer(a + 1.0, n) / gamma(n as f64 + 1.0).unwrap()
                        * hyp1f1_terminating(-(n as i32), a + 1.0, x).unwrap();
                    assert!(
                        (direct - link).abs() <= 1e-12 * direct.abs().max(1.0),
                        "laguerre n={n} a={a} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn product_integral_trivial_and_special() {
        // n=m=0, s=0, alpha=beta=0: plain int e^{-x} = 1.
        assert!((laguerre_product_integral(0, 0, 0, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        // s=1, n=m, alpha=beta reproduces I_1 exactly.
        for n in 0..=5u32 {
            for &alpha in &[0.5, 1.0, 1.5, 2.5] {
                let j = laguerre_product_integral(n, n, 1, alpha, alpha).unwrap();
                let i1 = laguerre_i1(n, alpha).unwrap();
                assert!((j - i1).abs() <= 1e-12 * i1, "n={n} alpha={alpha}");
            }
        }
        // s=-1, n=m reproduces I_{-1} exactly.
        for m in 0..=5u32 {
            for &delta in &[0.5, 1.0, 2.5, 9.0] {
                let j = laguerre_product_integral(m, m, -1, delta, delta).unwrap();
                let im1 = laguerre_i_minus1(m, delta).unwrap();
                assert!((j - im1).abs() <= 1e-12 * im1, "m={m} delta={delta}");
            }
        }
        // Orthogonality zeros: s >= 0 with n - m > s.
        assert!(laguerre_product_integral(3, 1, 1, 0.5, 0.5).unwrap().abs() < 1e-14);
        match laguerre_product_integral(2, 1, -2, 0.5, 1.0) {
            Err(PolyError::DivergentIntegral { .. }) => {}
            other => panic!("expected DivergentIntegral, got {other:?}"),
        }
        match laguerre_product_integral(1, 2, 0, 0.5, 1.0) {
            Err(PolyError::InvalidInput(_)) => {}
            other => panic!("expected InvalidInput, got {other:?}"),
        }
    }
}
