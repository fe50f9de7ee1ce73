//! Product rules in polar form for the measure dμ_{α,β}.
//!
//! With u = r² the measure factors as
//! `u^β (1−u)^α du / ℬ(α+1, β+1)` times `dθ / 2π`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gauss::{gauss_legendre, unit_jacobi};
use crate::error::{Error, Result};
use crate::params::SpaceParams;

/// Nodes and weights for `∫₀¹ g(u) (1−u)^a u^b du`.
#[derive(Debug, Clone)]
pub struct RadialRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialRule {
    /// Single-panel Gauss–Jacobi rule, exact for polynomials of degree 2n−1.
    pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Self> {
        let (nodes, weights) = unit_jacobi(n, a, b)?;
        Ok(RadialRule { nodes, weights })
    }

    /// Rule for integrands that vanish for u > `upper`.
    pub fn truncated(n: usize, a: f64, b: f64, upper: f64) -> Result<Self> {
        if upper >= 1.0 {
            return Self::gauss_jacobi(n, a, b);
        }
        Self::composite(n, a, b, &[upper]).map(|mut r| {
            let keep = r.nodes.iter().filter(|&&u| u < upper).count();
            r.nodes.truncate(keep);
            r.weights.truncate(keep);
            r
        })
    }

    /// Composite rule with the given interior break points.
    ///
    /// The first panel carries the u^b singularity and the last the (1−u)^a
    /// one (both through Gauss–Jacobi); interior panels are Gauss–Legendre
    /// with the weight evaluated explicitly.
    pub fn composite(n: usize, a: f64, b: f64, breaks: &[f64]) -> Result<Self> {
        let mut pts: Vec<f64> = breaks.iter().copied().filter(|&u| u > 0.0 && u < 1.0).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
        if pts.is_empty() {
            return Self::gauss_jacobi(n, a, b);
        }
        let mut nodes = Vec::new();
        let mut weights = Vec::new();

        let c = pts[0];
        let (v, w) = unit_jacobi(n, 0.0, b)?;
        let scale = c.powf(b + 1.0);
        for (v, w) in v.iter().zip(&w) {
            let u = c * v;
            nodes.push(u);
            weights.push(scale * w * (1.0 - u).powf(a));
        }

        let (x, wl) = gauss_legendre(n)?;
        for pair in pts.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let h = 0.5 * (hi - lo);
            for (x, w) in x.iter().zip(&wl) {
                let u = lo + h * (1.0 + x);
                nodes.push(u);
                weights.push(h * w * (1.0 - u).powf(a) * u.powf(b));
            }
        }

        let d = 1.0 - pts[pts.len() - 1];
        let (v, w) = unit_jacobi(n, 0.0, a)?;
        let scale = d.powf(a + 1.0);
        let mut tail: Vec<(f64, f64)> = v
            .iter()
            .zip(&w)
            .map(|(v, w)| {
                let u = 1.0 - d * v;
                (u, scale * w * u.powf(b))
            })
            .collect();
        tail.reverse();
        for (u, w) in tail {
            nodes.push(u);
            weights.push(w);
        }
        Ok(RadialRule { nodes, weights })
    }

    /// Composite rule with panels shrinking geometrically toward u = 1, the
    /// last one of width `width`.
    pub fn graded(n: usize, a: f64, b: f64, width: f64, extra: &[f64]) -> Result<Self> {
        let mut breaks: Vec<f64> = extra.to_vec();
        let mut d = width.clamp(1e-12, 0.5);
        while d < 0.5 {
            breaks.push(1.0 - d);
            d *= 2.0;
        }
        breaks.push(0.5);
        Self::composite(n, a, b, &breaks)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Angular nodes with weights summing to one (the measure dθ/2π).
#[derive(Debug, Clone)]
pub struct AngularRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AngularRule {
    /// Trapezoid rule; exact for trigonometric polynomials of degree < n.
    pub fn uniform(n: usize) -> Self {
        let nodes = (0..n).map(|l| 2.0 * PI * l as f64 / n as f64).collect();
        AngularRule { nodes, weights: vec![1.0 / n as f64; n] }
    }

    /// Composite Gauss–Legendre on [c−π, c+π], panels of width δ·2^k around c.
    pub fn graded(center: f64, width: f64, n: usize) -> Result<Self> {
        let mut edges = vec![0.0];
        let mut d = width.clamp(1e-12, PI);
        while d < PI {
            edges.push(d);
            d *= 2.0;
        }
        edges.push(PI);
        let (x, w) = gauss_legendre(n)?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for pair in edges.windows(2) {
            let h = 0.5 * (pair[1] - pair[0]);
            for sign in [-1.0, 1.0] {
                for (x, w) in x.iter().zip(&w) {
                    nodes.push(center + sign * (pair[0] + h * (1.0 + x)));
                    weights.push(h * w / (2.0 * PI));
                }
            }
        }
        Ok(AngularRule { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Tensor-product rule realizing `∫_𝔻 · dμ_{α,β}`.
///
/// One radial rule is kept per shift j = 0..=m, built for the weight
/// u^{β−j}(1−u)^α; an integrand with a pole of order P at the origin is
/// multiplied by u^j with j = min(⌈P/2⌉, m), which removes the singularity
/// before the Gauss–Jacobi rule sees it.
#[derive(Debug, Clone)]
pub struct DiskRule {
    params: SpaceParams,
    radial: Vec<RadialRule>,
    angular: AngularRule,
    norm: f64,
}

impl DiskRule {
    /// The standard rule: n_radial Gauss–Jacobi nodes × n_angular trapezoid.
    pub fn build(params: &SpaceParams, n_radial: usize, n_angular: usize) -> Result<Self> {
        if n_radial < 4 || n_angular < 8 {
            return Err(Error::Domain(format!(
                "rule too small: need n_radial >= 4 and n_angular >= 8 (got {n_radial}, {n_angular})"
            )));
        }
        Self::from_parts(params, AngularRule::uniform(n_angular), |a, b| RadialRule::gauss_jacobi(n_radial, a, b))
    }

    /// Rule for integrands supported in |z| ≤ `radius`.
    pub fn truncated(params: &SpaceParams, n_radial: usize, n_angular: usize, radius: f64) -> Result<Self> {
        let upper = radius * radius;
        Self::from_parts(params, AngularRule::uniform(n_angular), |a, b| RadialRule::truncated(n_radial, a, b, upper))
    }

    /// Rule refined toward the boundary point in the direction of `focus`,
    /// for integrands peaked like |1 − w·conj(z)|^{−s}.  Extra radial break
    /// points (in r) let discontinuous radial symbols be integrated exactly.
    pub fn peaked(params: &SpaceParams, focus: Complex64, n: usize, radius_breaks: &[f64]) -> Result<Self> {
        let r = focus.norm().min(1.0);
        let gap = (1.0 - r).max(1e-6);
        let angular = if r < 0.5 { AngularRule::uniform(8 * n) } else { AngularRule::graded(focus.arg(), gap, n)? };
        let extra: Vec<f64> = radius_breaks.iter().map(|r| r * r).collect();
        Self::from_parts(params, angular, |a, b| RadialRule::graded(n, a, b, gap, &extra))
    }

    fn from_parts(
        params: &SpaceParams,
        angular: AngularRule,
        make: impl Fn(f64, f64) -> Result<RadialRule>,
    ) -> Result<Self> {
        let radial = (0..=params.m).map(|j| make(params.alpha, params.beta - j as f64)).collect::<Result<Vec<_>>>()?;
        Ok(DiskRule { params: *params, radial, angular, norm: 1.0 / params.mass() })
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn angular(&self) -> &AngularRule {
        &self.angular
    }

    /// Radial shift used for an integrand with the given pole order (which
    /// may be fractional, e.g. for |f|^p).
    pub fn shift_for(&self, pole_order: f64) -> usize {
        ((pole_order / 2.0).ceil().max(0.0) as usize).min(self.params.m as usize)
    }

    /// Checks integrability at the origin: 2β − P > −2.
    pub fn check_integrable(&self, pole_order: f64) -> Result<()> {
        if 2.0 * self.params.beta - pole_order > -2.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "integrand with pole order {pole_order} is not integrable against |z|^(2*{})",
                self.params.beta
            )))
        }
    }

    /// Radial nodes r_i and effective weights for shift j; the weights include
    /// the factor u^j, so Σ w_i g(r_i) approximates the radial integral of g
    /// against the normalized weight.
    pub fn rings(&self, shift: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        let rule = &self.radial[shift];
        rule.nodes.iter().zip(&rule.weights).map(move |(&u, &w)| (u.sqrt(), w * u.powi(shift as i32) * self.norm))
    }

    /// All nodes z with their full weights for shift j.
    pub fn points(&self, shift: usize) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.rings(shift).flat_map(move |(r, wr)| {
            self.angular
                .nodes
                .iter()
                .zip(&self.angular.weights)
                .map(move |(&t, &wt)| (Complex64::from_polar(r, t), wr * wt))
        })
    }

    pub fn len(&self) -> usize {
        self.radial[0].len() * self.angular.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::beta;

    fn moment(rule: &RadialRule, k: i32) -> f64 {
        rule.nodes.iter().zip(&rule.weights).map(|(u, w)| w * u.powi(k)).sum()
    }

    #[test]
    fn composite_and_graded_rules_are_exact_on_moments() {
        for &(a, b) in &[(0.0, 0.0), (1.0, -0.5), (-0.5, 0.5)] {
            let rules = [
                RadialRule::composite(12, a, b, &[0.3, 0.8]).unwrap(),
                RadialRule::graded(12, a, b, 1e-3, &[0.25]).unwrap(),
            ];
            for rule in &rules {
                for k in 0..12 {
                    let exact = beta(a + 1.0, b + k as f64 + 1.0).unwrap();
                    assert!((moment(rule, k) / exact - 1.0).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn truncated_rule_integrates_a_cutoff() {
        // ∫₀^{1/4} u^{−1/2} du = 1
        let rule = RadialRule::truncated(10, 0.0, -0.5, 0.25).unwrap();
        assert!(rule.nodes.iter().all(|&u| u < 0.25));
        assert!((moment(&rule, 0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn graded_angular_rule_has_unit_mass() {
        let rule = AngularRule::graded(0.7, 1e-3, 10).unwrap();
        let s: f64 = rule.weights.iter().sum();
        assert!((s - 1.0).abs() < 1e-14);
        let c: f64 = rule.nodes.iter().zip(&rule.weights).map(|(t, w)| w * (3.0 * t).cos()).sum();
        assert!(c.abs() < 1e-14);
    }

    #[test]
    fn small_rules_are_refused() {
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        assert!(DiskRule::build(&p, 3, 64).is_err());
        assert!(DiskRule::build(&p, 16, 4).is_err());
    }
}
