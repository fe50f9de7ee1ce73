use num_complex::Complex64;

use super::density::MetricDensityEval;
use crate::error::{Error, Result};
use crate::params::SpaceParams;

/// ψ_z(w) = (z − w)/(1 − conj(z)·w).
pub fn mobius(z: Complex64, w: Complex64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) - z.conj() * w;
    if den.norm() < 1e-15 {
        return Err(Error::Domain("mobius: 1 - conj(z) w vanishes".into()));
    }
    Ok((z - w) / den)
}

/// Hyperbolic distance atanh|ψ_p(q)| for the density 1/(1−|z|²).
///
/// The metric ρ_{0,0} = √2/(1−|z|²) has distance √2 times this.
pub fn poincare_distance(p: Complex64, q: Complex64) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    Ok(mobius(p, q)?.norm().min(1.0).atanh())
}

/// An ordered list of points strictly inside the disc.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Complex64>,
}

impl Polyline {
    /// Repeated consecutive points are dropped.
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("polyline needs at least one point".into()));
        }
        if let Some(z) = points.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(Error::Domain(format!("polyline point {z} is not inside the disc")));
        }
        let mut pts: Vec<Complex64> = Vec::with_capacity(points.len());
        for z in points {
            if pts.last() != Some(&z) {
                pts.push(z);
            }
        }
        Ok(Polyline { points: pts })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Length for the density 1/(1−|z|²), computed like [`curve_length`].
    pub fn poincare_length(&self) -> Result<f64> {
        integrate_segments(&self.points, |z| Ok(1.0 / (1.0 - z.norm_sqr())))
    }
}

const LENGTH_RTOL: f64 = 1e-8;
const MAX_LEVEL: u32 = 22;

/// Per segment: midpoint sums with bisection until the relative change is
/// below 1e−8, then one Richardson step.
pub(crate) fn integrate_segments(points: &[Complex64], rho: impl Fn(Complex64) -> Result<f64>) -> Result<f64> {
    let mut total = 0.0;
    for seg in points.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let len = (b - a).norm();
        let sum = |n: u64| -> Result<f64> {
            let mut s = 0.0;
            for i in 0..n {
                let t = (i as f64 + 0.5) / n as f64;
                s += rho(a + (b - a) * t)?;
            }
            Ok(s * len / n as f64)
        };
        let mut n = 1u64;
        let mut prev = sum(n)?;
        let mut level = 0;
        loop {
            n *= 2;
            let next = sum(n)?;
            let settled = (next - prev).abs() <= LENGTH_RTOL * next.abs();
            if settled {
                total += (4.0 * next - prev) / 3.0;
                break;
            }
            level += 1;
            if level > MAX_LEVEL {
                return Err(Error::Convergence("curve length refinement did not settle".into()));
            }
            prev = next;
        }
    }
    Ok(total)
}

/// ℓ_{α,β}(γ) = ∫ ρ(γ)|γ′|.
pub fn curve_length(gamma: &Polyline, params: &SpaceParams) -> Result<f64> {
    let md = MetricDensityEval::new(params)?;
    integrate_segments(gamma.points(), |z| md.rho(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_properties() {
        let z = c(0.3, -0.5);
        let w = c(-0.6, 0.2);
        assert!((mobius(z, c(0.0, 0.0)).unwrap() - z).norm() < 1e-15);
        assert!((mobius(z, mobius(z, w).unwrap()).unwrap() - w).norm() < 1e-13);
        let lhs = 1.0 - mobius(z, w).unwrap().norm_sqr();
        let rhs = (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()) / (1.0 - z.conj() * w).norm_sqr();
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn radial_length() {
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        let g = Polyline::new(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let l = curve_length(&g, &p).unwrap();
        assert!((l - 2f64.sqrt() * 0.5f64.atanh()).abs() < 1e-10, "{l}");
        let g = Polyline::new(vec![c(0.2, 0.1), c(0.2, 0.1)]).unwrap();
        assert_eq!(curve_length(&g, &p).unwrap(), 0.0);
    }

    #[test]
    fn length_sandwich() {
        let p = SpaceParams::new(1.0, -0.5).unwrap();
        let md = MetricDensityEval::new(&p).unwrap();
        let (lo, hi) = md.constants();
        let g = Polyline::new(vec![c(0.1, 0.0), c(0.3, 0.6), c(-0.7, 0.1)]).unwrap();
        let l = curve_length(&g, &p).unwrap();
        let lp = g.poincare_length().unwrap();
        assert!(lo * lp <= l && l <= hi * lp);
    }
}
