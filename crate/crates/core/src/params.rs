use serde::Serialize;

use crate::error::{domain, Result};
use crate::specfun::beta;

/// Distance below which β is treated as an integer when splitting β = β₀ + m.
const INTEGER_SNAP: f64 = 1e-12;

/// Parameters of the space: weight exponents α, β, the split β = β₀ + m with
/// β₀ ∈ (−1, 0], and the Lebesgue exponent p with its conjugate q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceParams {
    pub alpha: f64,
    pub beta: f64,
    pub beta0: f64,
    pub m: u32,
    pub p: f64,
    /// `f64::INFINITY` when p = 1.
    pub q: f64,
}

impl SpaceParams {
    /// Hilbert-space parameters (p = 2).
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_p(alpha, beta, 2.0)
    }

    pub fn with_p(alpha: f64, beta: f64, p: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return domain(format!("alpha out of range: {alpha} (need alpha > -1)"));
        }
        if !beta.is_finite() || beta <= -1.0 {
            return domain(format!("beta out of range: {beta} (need beta > -1)"));
        }
        if !p.is_finite() || p < 1.0 {
            return domain(format!("p out of range: {p} (need 1 <= p < inf)"));
        }
        let (beta, beta0, m) = split_beta(beta);
        let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
        Ok(SpaceParams { alpha, beta, beta0, m, p, q })
    }

    /// Same weights, different exponent.
    pub fn at_p(&self, p: f64) -> Result<Self> {
        Self::with_p(self.alpha, self.beta, p)
    }

    /// ℬ(α+1, β+1), the total mass of the unnormalized weight.
    pub fn mass(&self) -> f64 {
        beta(self.alpha + 1.0, self.beta + 1.0).expect("validated parameters")
    }

    /// ‖z^{k−m}‖² in the Hilbert norm: ℬ(α+1, k+β₀+1)/ℬ(α+1, β+1).
    pub fn monomial_norm_sq(&self, k: usize) -> f64 {
        let b = beta(self.alpha + 1.0, k as f64 + self.beta0 + 1.0).expect("positive arguments");
        b / self.mass()
    }

    /// Whether the geometric constructions (which need β ≤ 0) apply.
    pub fn is_geometric(&self) -> bool {
        self.m == 0
    }
}

fn split_beta(beta: f64) -> (f64, f64, u32) {
    let r = beta.round();
    if r >= 0.0 && (beta - r).abs() < INTEGER_SNAP {
        return (r, 0.0, r as u32);
    }
    let m = beta.ceil().max(0.0);
    (beta, beta - m, m as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_beta() {
        let p = SpaceParams::new(0.0, 1.5).unwrap();
        assert_eq!((p.m, p.beta0), (2, -0.5));
        let p = SpaceParams::new(0.0, 1.0).unwrap();
        assert_eq!((p.m, p.beta0), (1, 0.0));
        let p = SpaceParams::new(0.0, -0.25).unwrap();
        assert_eq!((p.m, p.beta0), (0, -0.25));
        let p = SpaceParams::new(0.0, 2.0 + 1e-14).unwrap();
        assert_eq!((p.m, p.beta0, p.beta), (2, 0.0, 2.0));
    }

    #[test]
    fn rejects_bad_weights() {
        let e = SpaceParams::new(0.0, -1.0).unwrap_err();
        assert!(e.to_string().contains("beta out of range"));
        assert!(SpaceParams::new(-1.5, 0.0).is_err());
        assert!(SpaceParams::with_p(0.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn conjugate_exponent() {
        assert_eq!(SpaceParams::with_p(0.0, 0.0, 1.0).unwrap().q, f64::INFINITY);
        assert!((SpaceParams::with_p(0.0, 0.0, 3.0).unwrap().q - 1.5).abs() < 1e-15);
    }
}
