//! The orthogonal projection ℙ_{α,β}: closed form on mixed monomials, basis
//! expansion for general functions, norms of projected series, boundedness
//! predicates and the admissible pole order.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::SpaceParams;
use crate::quadrature::{integrate_fn, DiskFunction, DiskRule};
use crate::specfun::{beta, pochhammer};

/// c·conj(z)^s·z^t, in the convention where z^t stands for z^{t−m}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonomialTerm {
    pub s: u32,
    pub t: u32,
    pub coefficient: Complex64,
}

/// Coefficients a_k against the monomials z^{k−m}, k = 0..len.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSeries {
    pub coeffs: Vec<Complex64>,
}

impl CoefficientSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        CoefficientSeries { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Σ a_k z^{k−m}.
    pub fn eval(&self, params: &SpaceParams, z: Complex64) -> Complex64 {
        let m = params.m as i32;
        self.coeffs.iter().enumerate().map(|(k, a)| a * z.powi(k as i32 - m)).sum()
    }

    /// The series as an integrable function.
    pub fn to_function<'a>(&'a self, params: &'a SpaceParams) -> DiskFunction<'a> {
        let first = self.coeffs.iter().position(|a| *a != Complex64::new(0.0, 0.0)).unwrap_or(0);
        let pole = (params.m as i64 - first as i64).max(0) as u32;
        DiskFunction::new(pole, move |z| self.eval(params, z))
    }

    /// Largest coefficientwise difference.
    pub fn max_diff(&self, other: &CoefficientSeries) -> f64 {
        let n = self.len().max(other.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(zero);
                let b = other.coeffs.get(k).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// ℙ(conj(z)^s z^{t−m}) = coefficient · z^{exponent}.
///
/// For t ≥ s the coefficient is (α+β₀+t+2)_{−s}/(β₀+t+1)_{−s} and the
/// exponent t−s−m; for t < s the projection vanishes.
pub fn project_monomial(params: &SpaceParams, s: u32, t: u32) -> Result<(f64, i64)> {
    let exponent = t as i64 - s as i64 - params.m as i64;
    if t < s {
        return Ok((0.0, exponent));
    }
    let n = -(s as i64);
    let num = pochhammer(params.alpha + params.beta0 + t as f64 + 2.0, n)?;
    let den = pochhammer(params.beta0 + t as f64 + 1.0, n)?;
    Ok((num / den, exponent))
}

/// Normalization of the candidate orthonormal basis e_k = z^{k−m}/‖z^{k−m}‖,
/// optionally double-checked against a quadrature rule.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    params: SpaceParams,
    norms: Vec<f64>,
}

/// Tolerance of the build-time quadrature check of the monomial norms.
pub const BASIS_CHECK_TOL: f64 = 1e-10;

impl MonomialBasis {
    pub fn new(params: &SpaceParams, n: usize) -> Self {
        let norms = (0..n).map(|k| params.monomial_norm_sq(k).sqrt()).collect();
        MonomialBasis { params: *params, norms }
    }

    /// As [`MonomialBasis::new`], refusing if the rule does not reproduce the
    /// closed-form norms.
    pub fn checked(params: &SpaceParams, n: usize, rule: &DiskRule) -> Result<Self> {
        let basis = Self::new(params, n);
        let shift = params.m as usize;
        for k in 0..n {
            let e = k as i32 - params.m as i32;
            let q: f64 = rule.rings(shift).map(|(r, w)| w * r.powi(2 * e)).sum();
            let exact = basis.norms[k] * basis.norms[k];
            if !((q / exact - 1.0).abs() < BASIS_CHECK_TOL) {
                return Err(Error::Accuracy(format!(
                    "rule misses ||z^{e}||^2 by {:e} (relative); enlarge n_radial",
                    q / exact - 1.0
                )));
            }
        }
        Ok(basis)
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    /// ‖z^{k−m}‖.
    pub fn norm(&self, k: usize) -> f64 {
        self.norms[k]
    }

    /// e_k(z).
    pub fn eval(&self, k: usize, z: Complex64) -> Complex64 {
        z.powi(k as i32 - self.params.m as i32) / self.norms[k]
    }

    /// (e_0(z), …, e_{N−1}(z)).
    pub fn eval_all(&self, z: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.len());
        let mut pow = z.powi(-(self.params.m as i32));
        for k in 0..self.len() {
            out.push(pow / self.norms[k]);
            pow *= z;
        }
        out
    }
}

/// Coefficients of ℙf against z^{k−m}, k < n, by quadrature.
pub fn project(f: &DiskFunction, params: &SpaceParams, rule: &DiskRule, n: usize) -> Result<CoefficientSeries> {
    let basis = MonomialBasis::new(params, n);
    let m = params.m as i32;
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let e = k as i32 - m;
        let pole = f.pole_order() as f64 + (-e).max(0) as f64;
        let ip = integrate_fn(|z| f.eval(z) * z.conj().powi(e), pole, rule)?;
        let nk = basis.norm(k);
        coeffs.push(ip / (nk * nk));
    }
    Ok(CoefficientSeries::new(coeffs))
}

/// ‖ℙ(conj(z)^s Σ a_k z^{k−m})‖², from the orthogonality computation:
/// Σ_{k≥s} [ℬ(α+1, k−s+β₀+1)/ℬ(α+1, β+1)]·c(s,k)²·|a_k|²
/// with c(s,k) the coefficient of [`project_monomial`].
pub fn norm_of_projected_series(params: &SpaceParams, s: u32, series: &CoefficientSeries) -> Result<f64> {
    let mut total = 0.0;
    for (k, a) in series.coeffs.iter().enumerate().skip(s as usize) {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let (c, _) = project_monomial(params, s, k as u32)?;
        total += params.monomial_norm_sq(k - s as usize) * c * c * a.norm_sqr();
    }
    Ok(total)
}

/// One row of the comparison between the Beta-ratio factor of the norm
/// formula and its Pochhammer-ratio rewriting (β+1)_{k−s−m}/(α+β+2)_{k−s−m}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormFactorRow {
    pub s: u32,
    pub k: u32,
    pub beta_ratio: f64,
    pub pochhammer_ratio: f64,
    pub rel_diff: f64,
}

pub fn norm_factor_table(params: &SpaceParams, s_max: u32, k_max: u32) -> Result<Vec<NormFactorRow>> {
    let mut rows = Vec::new();
    for s in 0..=s_max {
        for k in s..=k_max {
            let beta_ratio = params.monomial_norm_sq((k - s) as usize);
            let n = k as i64 - s as i64 - params.m as i64;
            let pochhammer_ratio = pochhammer(params.beta + 1.0, n)? / pochhammer(params.alpha + params.beta + 2.0, n)?;
            rows.push(NormFactorRow {
                s,
                k,
                beta_ratio,
                pochhammer_ratio,
                rel_diff: (pochhammer_ratio / beta_ratio - 1.0).abs(),
            });
        }
    }
    Ok(rows)
}

/// Largest coefficient difference between ℙ_{α,β}f and z^{−m}·ℙ_{α,β₀}(w^m f).
pub fn factorization_residual(
    f: &DiskFunction,
    params: &SpaceParams,
    rule: &DiskRule,
    rule0: &DiskRule,
    n: usize,
) -> Result<f64> {
    let params0 = SpaceParams::with_p(params.alpha, params.beta0, params.p)?;
    if rule0.params() != &params0 {
        return Err(Error::Domain("second rule must be built for (alpha, beta0)".into()));
    }
    let m = params.m as i32;
    let lifted = DiskFunction::new(f.pole_order().saturating_sub(params.m), move |z| f.eval(z) * z.powi(m));
    let direct = project(f, params, rule, n)?;
    let via = project(&lifted, &params0, rule0, n)?;
    Ok(direct.max_diff(&via))
}

/// Weights of a target space for the boundedness question of ℙ_{α,β}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundednessQuery {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessVerdict {
    pub bounded: bool,
    pub m: u32,
    pub reason: String,
}

/// Whether ℙ_{α,β} is bounded on Lᵖ(|z|^{2b}(1−|z|²)^a dA):
/// p(α+1) > a+1 and, with m = ⌈β⌉,
/// m−2 < 2b ≤ 2β−m (p = 1) or pm−2 < 2b < p(2β+2)−pm−2 (p > 1).
pub fn projection_bounded(query: &BoundednessQuery) -> Result<BoundednessVerdict> {
    let params = SpaceParams::with_p(query.alpha, query.beta, query.p)?;
    if !(query.a > -1.0 && query.b > -1.0) {
        return Err(Error::Domain(format!("target weights must exceed -1 (a={}, b={})", query.a, query.b)));
    }
    let (p, m) = (query.p, params.m as f64);
    let (a, b, beta) = (query.a, query.b, params.beta);
    let verdict = |ok: bool, reason: String| BoundednessVerdict { bounded: ok, m: params.m, reason };
    if !(p * (params.alpha + 1.0) > a + 1.0) {
        return Ok(verdict(false, format!("p(alpha+1) = {} <= a+1 = {}", p * (params.alpha + 1.0), a + 1.0)));
    }
    let two_b = 2.0 * b;
    if p == 1.0 {
        if !(m - 2.0 < two_b) {
            return Ok(verdict(false, format!("2b = {two_b} <= m-2 = {}", m - 2.0)));
        }
        if !(two_b <= 2.0 * beta - m) {
            return Ok(verdict(false, format!("2b = {two_b} > 2beta-m = {}", 2.0 * beta - m)));
        }
    } else {
        let lo = p * m - 2.0;
        let hi = p * (2.0 * beta + 2.0) - p * m - 2.0;
        if !(lo < two_b) {
            return Ok(verdict(false, format!("2b = {two_b} <= pm-2 = {lo}")));
        }
        if !(two_b < hi) {
            return Ok(verdict(false, format!("2b = {two_b} >= p(2beta+2)-pm-2 = {hi}")));
        }
    }
    Ok(verdict(true, "all inequalities hold".into()))
}

/// m_{p,β}: ⌊2(β+1)/p⌋, or 2(β+1)/p − 1 when that ratio is an integer.
pub fn pole_order_bound(p: f64, beta: f64) -> Result<u32> {
    if !(p >= 1.0 && beta > -1.0) {
        return Err(Error::Domain(format!("pole_order_bound needs p >= 1, beta > -1 (got {p}, {beta})")));
    }
    let x = 2.0 * (beta + 1.0) / p;
    let r = x.round();
    if (x - r).abs() < 1e-12 {
        Ok((r - 1.0).max(0.0) as u32)
    } else {
        Ok(x.floor() as u32)
    }
}

/// ∫ |w|^{−2β} dμ_{α,β} = ℬ(α+1, 1)/ℬ(α+1, β+1), the constant left over in
/// the compactness estimate.
pub fn inverse_weight_mass(params: &SpaceParams) -> Result<f64> {
    Ok(beta(params.alpha + 1.0, 1.0)? / params.mass())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_cases() {
        let p = SpaceParams::new(0.7, 1.5).unwrap();
        for t in 0..5 {
            assert_eq!(project_monomial(&p, 0, t).unwrap(), (1.0, t as i64 - 2));
        }
        assert_eq!(project_monomial(&p, 3, 1).unwrap().0, 0.0);
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        let (c, e) = project_monomial(&p, 1, 2).unwrap();
        assert!((c - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(e, 1);
    }

    #[test]
    fn pole_order_cases() {
        assert_eq!(pole_order_bound(2.0, 0.0).unwrap(), 0);
        assert_eq!(pole_order_bound(2.0, 0.5).unwrap(), 1);
        assert_eq!(pole_order_bound(1.0, 0.0).unwrap(), 1);
        assert_eq!(pole_order_bound(3.0, 3.5).unwrap(), 2);
    }

    #[test]
    fn boundedness_cases() {
        let q = |p, alpha, beta, a, b| BoundednessQuery { p, alpha, beta, a, b };
        assert!(!projection_bounded(&q(1.0, 0.5, -0.5, 0.5, -0.5)).unwrap().bounded);
        assert!(projection_bounded(&q(1.5, 0.5, -0.5, 0.5, -0.5)).unwrap().bounded);
        assert!(projection_bounded(&q(2.0, 0.0, 1.0, 0.0, 1.0)).unwrap().bounded);
        assert!(projection_bounded(&q(1.0, 1.0, 1.5, 0.0, 0.4)).unwrap().bounded);
        let v = projection_bounded(&q(2.0, 0.0, 1.0, 0.0, -0.2)).unwrap();
        assert!(!v.bounded && v.reason.contains("pm-2"));
    }

    #[test]
    fn projected_norm_cases() {
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        let mut a = vec![Complex64::new(0.0, 0.0); 4];
        a[2] = Complex64::new(1.0, 0.0);
        let v = norm_of_projected_series(&p, 1, &CoefficientSeries::new(a)).unwrap();
        assert!((v - 4.0 / 9.0 * 0.5).abs() < 1e-15);
        let v = norm_of_projected_series(&p, 3, &CoefficientSeries::new(vec![Complex64::new(1.0, 0.0); 3])).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn norm_factor_rewriting_agrees() {
        for &(a, b) in &[(0.0, 0.0), (0.5, 0.5), (2.0, 1.5)] {
            let p = SpaceParams::new(a, b).unwrap();
            for row in norm_factor_table(&p, 4, 10).unwrap() {
                assert!(row.rel_diff < 1e-12, "{row:?}");
            }
        }
    }
}
