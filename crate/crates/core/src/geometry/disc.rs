use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::curves::poincare_distance;
use super::geodesic::{geodesic_distance, RadialMetric, Shooter};
use crate::error::{Error, Result};
use crate::kernel::{zero_count_q, KernelEval};
use crate::params::SpaceParams;
use crate::quadrature::{gauss_legendre, RadialRule};
use crate::roots::brent;

/// Nodes used by disc integrals unless the caller asks for more.
pub const DISC_NODES: usize = 24;

/// Normalized area of the pseudo-hyperbolic disc {|ψ_z(w)| < τ}.
pub fn pseudo_hyperbolic_area(z: Complex64, tau: f64) -> f64 {
    let g = 1.0 - z.norm_sqr();
    let d = 1.0 - z.norm_sqr() * tau * tau;
    g * g * tau * tau / (d * d)
}

/// The pseudo-hyperbolic discs enclosing and enclosed by D(z, r).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscBounds {
    /// tanh(r/√(α+2)): D(z, r) ⊆ {|ψ_z| < τ₁}.
    pub tau1: f64,
    /// tanh(r√(1+β)/√(α+2+β)): {|ψ_z| < τ₂} ⊆ D(z, r).
    pub tau2: f64,
    pub lower_area: f64,
    pub upper_area: f64,
    /// (1−|z|²)^{α+2} τ₂^{α+2}/(1−|z|²τ₂²)^{α+2}, the lower μ-trend.
    pub mu_trend: f64,
}

pub fn disc_bounds(params: &SpaceParams, z: Complex64, r: f64) -> Result<DiscBounds> {
    if !(r > 0.0) || !(z.norm() < 1.0) {
        return Err(Error::Domain("disc needs r > 0 and a center inside the disc".into()));
    }
    let (a, b) = (params.alpha, params.beta);
    let tau1 = (r / (a + 2.0).sqrt()).tanh();
    let tau2 = (r * (1.0 + b).sqrt() / (a + 2.0 + b).sqrt()).tanh();
    let g = 1.0 - z.norm_sqr();
    let mu_trend = (g * tau2 / (1.0 - z.norm_sqr() * tau2 * tau2)).powf(a + 2.0);
    Ok(DiscBounds {
        tau1,
        tau2,
        lower_area: pseudo_hyperbolic_area(z, tau2),
        upper_area: pseudo_hyperbolic_area(z, tau1),
        mu_trend,
    })
}

/// w ∈ D(z, r) (closed), deciding by the bracket when it is conclusive and
/// by the geodesic distance otherwise.
pub fn disc_membership(params: &SpaceParams, z: Complex64, r: f64, w: Complex64) -> Result<bool> {
    let metric = RadialMetric::new(params)?;
    membership(&metric, z, r, w)
}

fn membership(metric: &RadialMetric, z: Complex64, r: f64, w: Complex64) -> Result<bool> {
    let dp = poincare_distance(z, w)?;
    let (lo, hi) = metric.density().constants();
    if hi * dp <= r {
        return Ok(true);
    }
    if lo * dp > r {
        return Ok(false);
    }
    Ok(geodesic_distance(metric, z, w)? <= r)
}

/// Where the disc meets the circle |w| = s: the whole circle for s below
/// `full`, an arc |arg w − arg z| ≤ Δ(s) between `inner` and `outer`.
#[derive(Debug, Clone)]
pub struct BergmanDisc {
    metric: RadialMetric,
    center: Complex64,
    radius: f64,
    full: f64,
    inner: f64,
    outer: f64,
}

impl BergmanDisc {
    pub fn new(params: &SpaceParams, center: Complex64, radius: f64) -> Result<Self> {
        let bounds = disc_bounds(params, center, radius)?;
        let metric = RadialMetric::new(params)?;
        let rz = center.norm();
        let mobius_r = |t: f64| (rz + t) / (1.0 + rz * t);
        let hi = (mobius_r(bounds.tau1) + 1e-12).min(1.0 - 1e-15);
        let outer = brent(|s| Ok(metric.radial(rz, s)? - radius), rz, hi, 1e-15)?;
        let to_origin = metric.radial(0.0, rz)?;
        let (full, inner) = if rz == 0.0 {
            (outer, outer)
        } else if to_origin < radius {
            let f = brent(|s| Ok(to_origin + metric.radial(0.0, s)? - radius), 0.0, outer, 1e-15)?;
            (f, f)
        } else {
            (0.0, brent(|s| Ok(metric.radial(s, rz)? - radius), 0.0, rz, 1e-15)?)
        };
        Ok(BergmanDisc { metric, center, radius, full, inner, outer })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Radial extent: (full-circle radius, inner, outer).
    pub fn extent(&self) -> (f64, f64, f64) {
        (self.full, self.inner, self.outer)
    }

    /// Δ(s) ∈ [0, π].
    pub fn half_width(&self, s: f64) -> Result<f64> {
        if s < self.full {
            return Ok(PI);
        }
        if s <= self.inner || s >= self.outer {
            return Ok(0.0);
        }
        let rz = self.center.norm();
        if rz == 0.0 {
            return Ok(PI);
        }
        let shooter = Shooter::new(&self.metric, rz, s);
        let sigma = shooter.solve_length(self.radius)?;
        Ok(shooter.eval(sigma)?.0)
    }

    pub fn contains(&self, w: Complex64) -> Result<bool> {
        membership(&self.metric, self.center, self.radius, w)
    }

    /// Cosine-substituted Gauss–Legendre nodes on the arc region, with
    /// weights for ds.
    fn arc_nodes(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        if self.outer <= self.inner || self.center.norm() == 0.0 {
            return Ok(Vec::new());
        }
        let (x, w) = gauss_legendre(n)?;
        let c = 0.5 * (self.outer + self.inner);
        let h = 0.5 * (self.outer - self.inner);
        Ok(x.iter()
            .zip(&w)
            .map(|(&x, &w)| {
                let th = 0.5 * PI * (x + 1.0);
                (c - h * th.cos(), 0.5 * PI * w * h * th.sin())
            })
            .collect())
    }

    /// μ_{α,β}(D(z, r)).
    pub fn measure(&self, n: usize) -> Result<f64> {
        self.integrate_radial(|_| 1.0, n)
    }

    /// ∫_D g(|w|) dμ(w).
    pub fn integrate_radial(&self, g: impl Fn(f64) -> f64, n: usize) -> Result<f64> {
        self.integrate_with(n, |s, half| Ok(g(s) * half / PI))
    }

    /// ∫_D g dμ for g smooth on the disc, the arcs done by Gauss–Legendre.
    pub fn integrate(&self, g: impl Fn(Complex64) -> f64, n: usize) -> Result<f64> {
        let (x, w) = gauss_legendre(n)?;
        let theta0 = self.center.arg();
        let circle = 4 * n;
        self.integrate_with(n, |s, half| {
            if half >= PI {
                let v: f64 =
                    (0..circle).map(|l| g(Complex64::from_polar(s, 2.0 * PI * l as f64 / circle as f64))).sum();
                return Ok(v / circle as f64);
            }
            let v: f64 = x.iter().zip(&w).map(|(&x, &w)| w * g(Complex64::from_polar(s, theta0 + half * x))).sum();
            Ok(v * half / (2.0 * PI))
        })
    }

    /// `ring(s, Δ)` returns the angular average ∫_{|φ|≤Δ} · dφ/2π at radius s.
    fn integrate_with(&self, n: usize, ring: impl Fn(f64, f64) -> Result<f64>) -> Result<f64> {
        let p = self.metric.density().params();
        let (a, b) = (p.alpha, p.beta);
        let norm = 1.0 / p.mass();
        let mut total = 0.0;
        if self.full > 0.0 {
            let u_full = self.full * self.full;
            let rule = RadialRule::truncated(n, a, b, u_full)?;
            for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                total += w * ring(u.sqrt(), PI)? * norm;
            }
        }
        for (s, ds) in self.arc_nodes(n)? {
            let half = self.half_width(s)?;
            let u = s * s;
            let dens = u.powf(b) * (1.0 - u).powf(a) * 2.0 * s * norm;
            total += ds * dens * ring(s, half)?;
        }
        Ok(total)
    }

    /// Boundary samples: the arc endpoints and both ends of the radial extent.
    pub fn boundary(&self, n: usize) -> Result<Vec<Complex64>> {
        let theta0 = self.center.arg();
        let mut pts = vec![Complex64::from_polar(self.outer, theta0)];
        if self.full > 0.0 {
            pts.push(Complex64::from_polar(self.full, theta0 + PI));
        } else {
            pts.push(Complex64::from_polar(self.inner, theta0));
        }
        for (s, _) in self.arc_nodes(n)? {
            let half = self.half_width(s)?;
            pts.push(Complex64::from_polar(s, theta0 + half));
            pts.push(Complex64::from_polar(s, theta0 - half));
        }
        Ok(pts)
    }
}

/// μ_{α,β}(D(z, r)).
pub fn disc_measure(params: &SpaceParams, z: Complex64, r: f64) -> Result<f64> {
    BergmanDisc::new(params, z, r)?.measure(DISC_NODES)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelInfimum {
    /// min over the disc of |k^z(w)|² = |𝕂(w,z)|²/𝕂(z,z).
    pub infimum: f64,
    pub at: Complex64,
    pub measure: f64,
    pub product: f64,
}

/// inf_{D(z,r)} |k^z|² times μ(D(z, r)).  As 𝕂(·, z) has no zeros, the
/// infimum of its modulus is taken on the boundary, which is sampled.
pub fn kernel_infimum_check(params: &SpaceParams, z: Complex64, r: f64) -> Result<KernelInfimum> {
    if params.beta0 != 0.0 && zero_count_q(params, 0.999)? != 0 {
        return Err(Error::Domain("Q has zeros in the disc; the kernel infimum is not meaningful".into()));
    }
    let disc = BergmanDisc::new(params, z, r)?;
    let ke = KernelEval::new(params)?;
    let kzz = ke.diagonal(z)?;
    let mut best = (f64::INFINITY, z);
    for w in disc.boundary(2 * DISC_NODES)? {
        let v = ke.kernel(w, z)?.norm_sqr() / kzz;
        if v < best.0 {
            best = (v, w);
        }
    }
    let measure = disc.measure(DISC_NODES)?;
    Ok(KernelInfimum { infimum: best.0, at: best.1, measure, product: best.0 * measure })
}
