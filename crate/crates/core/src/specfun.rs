//! Scalar special functions: log-gamma, Beta, Pochhammer, generalized binomial
//! coefficients and the Gauss hypergeometric series.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Shift point for the asymptotic series; 8 Bernoulli terms reach ~1e-19 there.
const STIRLING_MIN: f64 = 15.0;

/// B_{2k} / (2k(2k−1)) for k = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln Γ(x) for x > 0.
///
/// Stirling's series after shifting the argument up to 15 with the recurrence
/// Γ(x+1) = xΓ(x); the shift factors are multiplied and logged once.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma needs a positive finite argument, got {x}"));
    }
    let mut y = x;
    let mut shift = 1.0;
    while y < STIRLING_MIN {
        shift *= y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING_COEFFS {
        series += c * pow;
        pow *= inv2;
    }
    Ok((y - 0.5) * y.ln() - y + HALF_LN_2PI + series - shift.ln())
}

/// ℬ(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return domain(format!("beta needs positive arguments, got ({a}, {b})"));
    }
    Ok((log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?).exp())
}

/// Pochhammer symbol (a)_n = Γ(a+n)/Γ(a), n of either sign.
///
/// Nonnegative n uses the literal product. Negative n goes through the Γ-ratio
/// and needs a > 0 and a+n > 0.
pub fn pochhammer(a: f64, n: i64) -> Result<f64> {
    if n >= 0 {
        return Ok((0..n).fold(1.0, |acc, i| acc * (a + i as f64)));
    }
    let end = a + n as f64;
    if !(a > 0.0 && end > 0.0) {
        return domain(format!("pochhammer({a}, {n}) hits a gamma pole: need a > 0 and a + n > 0"));
    }
    Ok((log_gamma(end)? - log_gamma(a)?).exp())
}

/// Generalized binomial coefficient u(u−1)…(u−n+1)/n!.
pub fn gen_binomial(u: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (u - i as f64) / (i as f64 + 1.0))
}

/// Largest |ξ| the direct hypergeometric series is trusted for.
pub const HYP2F1_RADIUS: f64 = 0.95;
const HYP2F1_MAX_TERMS: usize = 100_000;
const HYP2F1_TOL: f64 = 1e-14;

/// ₂F₁(a, b; c; ξ) by direct summation of the power series.
pub fn hyp2f1(a: f64, b: f64, c: f64, xi: Complex64) -> Result<Complex64> {
    if c <= 0.0 && c == c.round() {
        return domain(format!("hyp2f1: c = {c} is a nonpositive integer"));
    }
    let r = xi.norm();
    if r > HYP2F1_RADIUS {
        return domain(format!("hyp2f1: |xi| = {r} exceeds {HYP2F1_RADIUS}; use the transformed kernel form"));
    }
    // Past this index the term ratio is monotone in n, so its current value (or
    // its limit 1) bounds every later ratio.
    let settled = 2.0 * (a.abs() + b.abs() + c.abs()) + 2.0;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..HYP2F1_MAX_TERMS {
        let nf = n as f64;
        let factor = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        term *= xi * factor;
        sum += term;
        if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        }
        if nf > settled {
            let next = (a + nf + 1.0) * (b + nf + 1.0) / ((c + nf + 1.0) * (nf + 2.0));
            let ratio = r * next.abs().max(1.0);
            if ratio < 1.0 && term.norm() * ratio / (1.0 - ratio) < HYP2F1_TOL * sum.norm() {
                return Ok(sum);
            }
        }
    }
    Err(Error::Accuracy(format!("hyp2f1({a}, {b}; {c}; {xi}) did not converge in {HYP2F1_MAX_TERMS} terms")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_integers() {
        // Absolute accuracy at the two roots of ln Γ.
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        let fact20: f64 = (1..20).map(|k| k as f64).product();
        assert!((log_gamma(20.0).unwrap() / fact20.ln() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
        assert!(log_gamma(-2.5).is_err());
    }

    #[test]
    fn beta_small_cases() {
        assert!((beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((beta(2.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(beta(0.3, 7.2).unwrap(), beta(7.2, 0.3).unwrap());
        assert!(beta(0.0, 1.0).is_err());
    }

    #[test]
    fn pochhammer_cases() {
        assert_eq!(pochhammer(2.7, 0).unwrap(), 1.0);
        assert_eq!(pochhammer(1.0, 5).unwrap(), 120.0);
        assert!((pochhammer(4.0, -1).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!(pochhammer(0.5, -1).is_err());
        assert_eq!(pochhammer(-2.0, 3).unwrap(), 0.0);
    }

    #[test]
    fn binomial_cases() {
        assert_eq!(gen_binomial(7.3, 0), 1.0);
        assert_eq!(gen_binomial(3.0, 2), 3.0);
        assert_eq!(gen_binomial(0.5, 2), -0.125);
        assert_eq!(gen_binomial(2.0, 3), 0.0);
    }

    #[test]
    fn hyp2f1_elementary() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(hyp2f1(0.3, -1.2, 2.5, z).unwrap(), Complex64::new(1.0, 0.0));
        let v = hyp2f1(1.0, 1.0, 1.0, Complex64::new(0.5, 0.0)).unwrap();
        assert!((v - 2.0).norm() < 1e-13);
        // ln(1+x)/x = 2F1(1,1;2;-x)
        let v = hyp2f1(1.0, 1.0, 2.0, Complex64::new(-0.5, 0.0)).unwrap();
        assert!((v.re - 1.5f64.ln() / 0.5).abs() < 1e-14);
        assert!(hyp2f1(1.0, 1.0, 1.0, Complex64::new(0.96, 0.0)).is_err());
        assert!(hyp2f1(1.0, 1.0, -2.0, Complex64::new(0.1, 0.0)).is_err());
    }
}
