//! Geodesics of the radial metric ρ(|z|)|dz| by shooting on the Clairaut
//! constant λ = r ρ(r) sin ψ, ψ the angle between the curve and the radius.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::curves::poincare_distance;
use super::density::MetricDensityEval;
use crate::error::{Error, Result};
use crate::params::SpaceParams;
use crate::quadrature::adaptive;
use crate::roots::brent;

const RTOL: f64 = 1e-12;
/// Radii below this are treated as the origin.
const ORIGIN: f64 = 1e-14;

/// Radial integrals and geodesic pieces for one metric.
#[derive(Debug, Clone)]
pub struct RadialMetric {
    md: MetricDensityEval,
}

impl RadialMetric {
    pub fn new(params: &SpaceParams) -> Result<Self> {
        Ok(RadialMetric { md: MetricDensityEval::new(params)? })
    }

    pub fn density(&self) -> &MetricDensityEval {
        &self.md
    }

    fn rho(&self, r: f64) -> f64 {
        self.md.rho_r(r).unwrap_or(f64::NAN)
    }

    fn f(&self, r: f64) -> f64 {
        r * self.rho(r)
    }

    /// F(t) = t ρ²(t) = f(√t)².
    fn big_f(&self, t: f64) -> f64 {
        t * self.md.rho_sq_t(t).unwrap_or(f64::NAN)
    }

    fn big_f_prime(&self, t: f64) -> f64 {
        match self.md.rho_sq_with_derivative(t) {
            Ok((v, d)) => v + t * d,
            Err(_) => f64::NAN,
        }
    }

    /// F(t) − F(ta) without cancellation: for close arguments the
    /// difference is ∫ F′ by 4-point Gauss–Legendre.
    fn big_f_gap(&self, ta: f64, dt: f64) -> f64 {
        let t = ta + dt;
        if dt.abs() > 1e-2 * ta.max(1e-3) {
            return self.big_f(t) - self.big_f(ta);
        }
        const X: [f64; 2] = [0.339_981_043_584_856, 0.861_136_311_594_052_6];
        const W: [f64; 2] = [0.652_145_154_862_546_1, 0.347_854_845_137_453_9];
        let mid = 0.5 * (t + ta);
        let h = 0.5 * dt;
        let mut s = 0.0;
        for k in 0..2 {
            s += W[k] * (self.big_f_prime(mid - h * X[k]) + self.big_f_prime(mid + h * X[k]));
        }
        s * h
    }

    /// ∫_a^b ρ(r) dr.
    pub fn radial(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        adaptive(|r| [self.rho(r)], lo, hi, 0.0, RTOL).map(|v| v[0])
    }

    /// Angle swept and length of the geodesic arc with constant λ between
    /// radii a < b, where a may be a turning point (f(a) = λ).
    fn piece(&self, a: f64, b: f64, lam: f64) -> Result<[f64; 2]> {
        if b <= a {
            return Ok([0.0, 0.0]);
        }
        let w = b - a;
        let fa = self.f(a);
        let ta = a * a;
        let base = ((fa - lam) * (fa + lam)).max(0.0);
        // r = a + w s² removes the inverse square root at a turning point.
        adaptive(
            |s| {
                let dr = w * s * s;
                let r = a + dr;
                let fr = self.f(r);
                let d = (self.big_f_gap(ta, dr * (2.0 * a + dr)) + base).max(0.0).sqrt();
                let jac = 2.0 * w * s;
                if d == 0.0 {
                    return [0.0, 0.0];
                }
                [lam / (r * d) * jac, self.rho(r) * fr / d * jac]
            },
            0.0,
            1.0,
            1e-15,
            RTOL,
        )
    }
}

/// The one-parameter family of geodesics leaving radius r1 and arriving at
/// radius r2.  The shooting parameter σ ∈ [0, 2] runs over λ = σ f(r_lo) on
/// the monotone branch, then λ = (2−σ) f(r_lo) on the branch that turns at
/// r_min < r_lo; the swept angle grows from 0 to π.
pub struct Shooter<'a> {
    metric: &'a RadialMetric,
    lo: f64,
    hi: f64,
    f_lo: f64,
}

impl<'a> Shooter<'a> {
    pub fn new(metric: &'a RadialMetric, r1: f64, r2: f64) -> Self {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        Shooter { metric, lo, hi, f_lo: metric.f(lo) }
    }

    /// (swept angle, length) at σ.
    pub fn eval(&self, sigma: f64) -> Result<(f64, f64)> {
        let m = self.metric;
        if sigma <= 0.0 {
            return Ok((0.0, m.radial(self.lo, self.hi)?));
        }
        if sigma <= 1.0 {
            let [t, l] = m.piece(self.lo, self.hi, sigma * self.f_lo)?;
            return Ok((t, l));
        }
        if sigma >= 2.0 {
            return Ok((PI, m.radial(0.0, self.lo)? + m.radial(0.0, self.hi)?));
        }
        let lam = (2.0 - sigma) * self.f_lo;
        let r_min = brent(|r| Ok(m.f(r) - lam), 0.0, self.lo, 1e-15)?;
        // Use the constant of the computed turning point so f(r_min) = λ holds exactly.
        let lam = m.f(r_min);
        let [t1, l1] = m.piece(r_min, self.lo, lam)?;
        let [t2, l2] = m.piece(r_min, self.hi, lam)?;
        Ok((t1 + t2, l1 + l2))
    }

    /// The parameter whose geodesic sweeps `angle` ∈ [0, π].
    pub fn solve_angle(&self, angle: f64) -> Result<f64> {
        brent(|s| Ok(self.eval(s)?.0 - angle), 0.0, 2.0, 1e-14)
    }

    /// The parameter whose geodesic has the given length.
    pub fn solve_length(&self, length: f64) -> Result<f64> {
        brent(|s| Ok(self.eval(s)?.1 - length), 0.0, 2.0, 1e-14)
    }
}

/// Geodesic distance between p and q.
pub fn geodesic_distance(metric: &RadialMetric, p: Complex64, q: Complex64) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    let (r1, r2) = (p.norm(), q.norm());
    if r1 < ORIGIN || r2 < ORIGIN {
        return metric.radial(r1, r2);
    }
    let mut dth = (q.arg() - p.arg()).abs();
    if dth > PI {
        dth = 2.0 * PI - dth;
    }
    let shooter = Shooter::new(metric, r1, r2);
    if dth < 1e-15 {
        return shooter.eval(0.0).map(|v| v.1);
    }
    if PI - dth < 1e-15 {
        return shooter.eval(2.0).map(|v| v.1);
    }
    let s = shooter.solve_angle(dth)?;
    shooter.eval(s).map(|v| v.1)
}

/// Rigorous bracket [√(α+2), √((α+2+β)/(1+β))]·atanh|ψ_p(q)| for d(p, q).
pub fn distance_bracket(md: &MetricDensityEval, p: Complex64, q: Complex64) -> Result<(f64, f64)> {
    let d = poincare_distance(p, q)?;
    let (lo, hi) = md.constants();
    Ok((lo * d, hi * d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphEstimate {
    pub coarse: f64,
    pub fine: f64,
    /// fine + (fine − coarse), assuming first-order convergence.
    pub extrapolated: f64,
    /// Length of the fine path after straightening (an upper bound on the
    /// distance up to quadrature error).
    pub relaxed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceReport {
    pub distance: f64,
    pub lower: f64,
    pub upper: f64,
    pub graph: Option<GraphEstimate>,
}

/// Relative slack of the bracket check, covering quadrature error.
pub const BRACKET_SLACK: f64 = 1e-9;

/// d_{α,β}(p, q) by geodesic shooting, checked against the bracket.
pub fn distance(p: Complex64, q: Complex64, params: &SpaceParams) -> Result<DistanceReport> {
    if !(p.norm() < 1.0 && q.norm() < 1.0) {
        return Err(Error::Domain("distance endpoints must lie inside the disc".into()));
    }
    let metric = RadialMetric::new(params)?;
    let d = geodesic_distance(&metric, p, q)?;
    let (lower, upper) = distance_bracket(metric.density(), p, q)?;
    let slack = BRACKET_SLACK * upper.max(1e-300);
    if d < lower - slack || d > upper + slack {
        return Err(Error::Consistency(format!("distance {d} outside [{lower}, {upper}]")));
    }
    Ok(DistanceReport { distance: d, lower, upper, graph: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_distance_is_exact() {
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        for &(a, b) in &[
            (c(0.0, 0.0), c(0.5, 0.0)),
            (c(0.3, 0.2), c(-0.4, 0.5)),
            (c(0.9, 0.0), c(0.0, -0.9)),
            (c(0.5, 0.0), c(-0.5, 0.0)),
        ] {
            let d = distance(a, b, &p).unwrap();
            let exact = 2f64.sqrt() * poincare_distance(a, b).unwrap();
            assert!((d.distance - exact).abs() < 1e-9 * exact.max(1.0), "{a} {b}: {} vs {exact}", d.distance);
        }
    }

    #[test]
    fn symmetric_and_inside_bracket() {
        let p = SpaceParams::new(1.0, -0.5).unwrap();
        let a = c(0.2, 0.7);
        let b = c(-0.6, -0.1);
        let d1 = distance(a, b, &p).unwrap();
        let d2 = distance(b, a, &p).unwrap();
        assert!((d1.distance - d2.distance).abs() < 1e-9);
        assert!(d1.lower < d1.distance && d1.distance < d1.upper);
        assert_eq!(distance(a, a, &p).unwrap().distance, 0.0);
    }
}
