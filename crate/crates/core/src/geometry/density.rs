use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{HSeries, KernelEval};
use crate::params::SpaceParams;

/// The metric density ρ_{α,β}, defined for β ∈ (−1, 0].
#[derive(Debug, Clone)]
pub struct MetricDensityEval {
    params: SpaceParams,
    h0: HSeries,
    h1: HSeries,
}

impl MetricDensityEval {
    pub fn new(params: &SpaceParams) -> Result<Self> {
        if !(params.beta <= 0.0) {
            return Err(Error::Domain(format!("the metric density needs -1 < beta <= 0 (got beta = {})", params.beta)));
        }
        Ok(MetricDensityEval {
            params: *params,
            h0: HSeries::new(params.alpha, params.beta)?,
            h1: HSeries::new(params.alpha, params.beta + 1.0)?,
        })
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    /// ρ² at t = |z|².
    pub fn rho_sq_t(&self, t: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::Domain(format!("metric density needs |z| < 1 (got |z|^2 = {t})")));
        }
        let (a, b) = (self.params.alpha, self.params.beta);
        let classical = (a + 2.0) / ((1.0 - t) * (1.0 - t));
        if b == 0.0 {
            return Ok(classical);
        }
        let h0 = self.h0.eval_real(t)?;
        let h1 = self.h1.eval_real(t)?;
        let bracket = (a + b + 1.0) * h0 - b * (a + b + 2.0) / (1.0 + b) * h1;
        let v = -b * (1.0 - t).powf(a) / (h0 * h0) * bracket + classical;
        if !(v >= 0.0) {
            return Err(Error::Consistency(format!("rho^2 = {v:e} < 0 at |z|^2 = {t}")));
        }
        Ok(v)
    }

    /// (ρ², dρ²/dt) at t = |z|².
    pub fn rho_sq_with_derivative(&self, t: f64) -> Result<(f64, f64)> {
        let v = self.rho_sq_t(t)?;
        let (a, b) = (self.params.alpha, self.params.beta);
        let g = 1.0 - t;
        let classical = 2.0 * (a + 2.0) / (g * g * g);
        if b == 0.0 {
            return Ok((v, classical));
        }
        let tc = Complex64::new(t, 0.0);
        let (h0, d0) = self.h0.eval_with_derivative(tc)?;
        let (h1, d1) = self.h1.eval_with_derivative(tc)?;
        let (h0, d0, h1, d1) = (h0.re, d0.re, h1.re, d1.re);
        let c = b * (a + b + 2.0) / (1.0 + b);
        let bracket = (a + b + 1.0) * h0 - c * h1;
        let dbracket = (a + b + 1.0) * d0 - c * d1;
        let w = g.powf(a);
        let dw = if a == 0.0 { 0.0 } else { -a * g.powf(a - 1.0) };
        let d = -b * (dw * bracket / (h0 * h0) - 2.0 * w * d0 * bracket / (h0 * h0 * h0) + w * dbracket / (h0 * h0));
        Ok((v, d + classical))
    }

    /// ρ as a function of r = |z|.
    pub fn rho_r(&self, r: f64) -> Result<f64> {
        if self.params.beta == 0.0 && (0.0..1.0).contains(&r) {
            // Same rounding as the lower bound, which it equals.
            return Ok(self.constants().0 / (1.0 - r * r));
        }
        self.rho_sq_t(r * r).map(f64::sqrt)
    }

    pub fn rho(&self, z: Complex64) -> Result<f64> {
        self.rho_r(z.norm())
    }

    /// Sharp constants of ρ(z)(1−|z|²): √(α+2) and √((α+2+β)/(1+β)).
    pub fn constants(&self) -> (f64, f64) {
        let (a, b) = (self.params.alpha, self.params.beta);
        ((a + 2.0).sqrt(), ((a + 2.0 + b) / (1.0 + b)).sqrt())
    }

    /// Bounds √(α+2)/(1−|z|²) ≤ ρ(z) ≤ √((α+2+β)/(1+β))/(1−|z|²).
    pub fn bounds_r(&self, r: f64) -> (f64, f64) {
        let (lo, hi) = self.constants();
        let g = 1.0 - r * r;
        (lo / g, hi / g)
    }
}

/// ρ_{α,β}(z).
pub fn density(params: &SpaceParams, z: Complex64) -> Result<f64> {
    MetricDensityEval::new(params)?.rho(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplacianCheck {
    pub rho_sq: f64,
    /// ¼Δ log 𝕂(z, z) by Richardson-extrapolated five-point differences.
    pub laplacian: f64,
    pub residual: f64,
}

/// Compares ρ² with ∂∂̄ log 𝕂(z, z) = ¼Δκ computed by finite differences.
pub fn density_vs_log_kernel_check(params: &SpaceParams, z: Complex64, h: f64) -> Result<LaplacianCheck> {
    if !(h > 1e-6 && h < 0.1) {
        return Err(Error::Domain(format!("finite-difference step {h} outside (1e-6, 0.1)")));
    }
    if z.norm() + h >= 1.0 {
        return Err(Error::Domain("finite-difference stencil leaves the disc".into()));
    }
    let md = MetricDensityEval::new(params)?;
    let ke = KernelEval::new(params)?;
    let kappa = |w: Complex64| -> Result<f64> { Ok(ke.diagonal(w)?.ln()) };
    let center = kappa(z)?;
    let lap = |h: f64| -> Result<f64> {
        let mut s = -4.0 * center;
        for d in [Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, -h)] {
            s += kappa(z + d)?;
        }
        Ok(s / (h * h))
    };
    let coarse = lap(h)?;
    let fine = lap(h / 2.0)?;
    let laplacian = (4.0 * fine - coarse) / 3.0 / 4.0;
    let rho_sq = md.rho_sq_t(z.norm_sqr())?;
    Ok(LaplacianCheck { rho_sq, laplacian, residual: (rho_sq - laplacian).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchySchwarzReport {
    /// (Σ j a_j)², a_j = (−x)^j C(α+1, j)/(j+β), all sums scaled by β.
    pub lhs: f64,
    /// (Σ j² a_j)(Σ a_j).
    pub rhs: f64,
    pub holds: bool,
}

/// The finite-sum inequality (Σ j a_j)² ≤ (Σ j² a_j)(Σ a_j) for α ∈ ℕ.
///
/// Every sum is multiplied by β so the β = 0 limit is the one of H (the
/// common factor β² leaves the inequality unchanged).
pub fn cauchy_schwarz_check(alpha: u32, beta: f64, x: f64) -> Result<CauchySchwarzReport> {
    if !(beta > -1.0 && beta <= 0.0) {
        return Err(Error::Domain(format!("cauchy_schwarz_check needs -1 < beta <= 0 (got {beta})")));
    }
    let mut s = [0.0f64; 3];
    let mut binom = 1.0;
    let mut pow = 1.0;
    for j in 0..=alpha as usize + 1 {
        let jf = j as f64;
        let a = if j == 0 { 1.0 } else { beta * pow * binom / (jf + beta) };
        s[0] += a;
        s[1] += jf * a;
        s[2] += jf * jf * a;
        binom *= (alpha as f64 + 1.0 - jf) / (jf + 1.0);
        pow *= -x;
    }
    let lhs = s[1] * s[1];
    let rhs = s[2] * s[0];
    let slack = 1e-12 * lhs.abs().max(rhs.abs());
    Ok(CauchySchwarzReport { lhs, rhs, holds: lhs <= rhs + slack })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_closed_forms() {
        for &(a, b) in &[(0.0, 0.0), (0.0, -0.5), (2.0, -0.25), (0.5, -0.75)] {
            let p = SpaceParams::new(a, b).unwrap();
            let r0 = density(&p, Complex64::new(0.0, 0.0)).unwrap();
            assert!((r0 - ((a + 2.0 + b) / (1.0 + b)).sqrt()).abs() < 1e-14);
        }
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        assert!((density(&p, Complex64::new(0.5, 0.0)).unwrap() - 2f64.sqrt() / 0.75).abs() < 1e-14);
        assert!(MetricDensityEval::new(&SpaceParams::new(0.0, 0.5).unwrap()).is_err());
    }

    #[test]
    fn derivative_matches_differences() {
        for &(a, b) in &[(0.0, -0.5), (2.0, -0.25), (0.5, -0.75)] {
            let md = MetricDensityEval::new(&SpaceParams::new(a, b).unwrap()).unwrap();
            for &t in &[0.1, 0.5, 0.8] {
                let h = 1e-5;
                let fd = (md.rho_sq_t(t + h).unwrap() - md.rho_sq_t(t - h).unwrap()) / (2.0 * h);
                let (_, d) = md.rho_sq_with_derivative(t).unwrap();
                assert!((fd - d).abs() < 1e-7 * d.abs().max(1.0), "{a} {b} {t}: {fd} {d}");
            }
        }
    }

    #[test]
    fn laplacian_matches() {
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        let c = density_vs_log_kernel_check(&p, Complex64::new(0.3, 0.0), 1e-3).unwrap();
        assert!(c.residual < 1e-4 * c.rho_sq);
        let p = SpaceParams::new(2.0, -0.5).unwrap();
        for z in [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-0.2, 0.6)] {
            let c = density_vs_log_kernel_check(&p, z, 1e-3).unwrap();
            assert!(c.residual < 1e-6 * c.rho_sq, "{z}: {c:?}");
        }
    }

    #[test]
    fn cauchy_schwarz_cases() {
        let r = cauchy_schwarz_check(3, 0.0, 0.0).unwrap();
        assert!(r.holds && r.lhs == 0.0 && r.rhs == 0.0);
        assert!(cauchy_schwarz_check(1, -0.5, 0.5).unwrap().holds);
        assert!(cauchy_schwarz_check(1, 0.0, -2.0).unwrap().holds);
        // With β < 0 the j = 0 weight is negative and the claim fails for x < 0.
        assert!(!cauchy_schwarz_check(0, -0.5, -0.1).unwrap().holds);
    }
}
