//! Carleson-measure diagnostics: averaging functions over Bergman discs,
//! Carleson ratios, vanishing profiles, the integral I_ω with its regime fits
//! and the f_N boundedness probe.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BergmanDisc, DISC_NODES};
use crate::kernel::KernelEval;
use crate::operators::{ls_slope, BorelMeasure, SymbolFunction, PEAK_NODES};
use crate::params::SpaceParams;
use crate::projection::{projection_bounded, BoundednessQuery, BoundednessVerdict};
use crate::quadrature::{gauss_legendre, integrate_fn, DiskRule};
use crate::specfun::beta;

/// Largest |z| accepted by [`i_omega`].
pub const MAX_RADIUS: f64 = 0.995;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IOmegaQuery {
    pub sigma: f64,
    pub gamma: f64,
    pub omega: f64,
    pub params: SpaceParams,
}

impl IOmegaQuery {
    pub fn new(sigma: f64, gamma: f64, omega: f64, params: SpaceParams) -> Result<Self> {
        if !(sigma > -1.0 && gamma > -1.0) {
            return Err(Error::Domain(format!("I_omega needs sigma, gamma > -1 (got {sigma}, {gamma})")));
        }
        Ok(IOmegaQuery { sigma, gamma, omega, params })
    }
}

/// I_ω(z) = ∫ |Q(z·conj w)| (1−|w|²)^σ |w|^{2γ} / |1 − z·conj w|^{2+σ+ω} dA(w).
pub fn i_omega(query: &IOmegaQuery, z: Complex64) -> Result<f64> {
    i_omega_with(query, z, PEAK_NODES)
}

/// [`i_omega`] with `n` nodes per panel of the boundary-refined rule.
pub fn i_omega_with(query: &IOmegaQuery, z: Complex64, n: usize) -> Result<f64> {
    if !(z.norm() <= MAX_RADIUS) {
        return Err(Error::Accuracy(format!("|z| = {} exceeds {MAX_RADIUS}", z.norm())));
    }
    let weight = SpaceParams::new(query.sigma, query.gamma)?;
    let rule = DiskRule::peaked(&weight, z, n, &[])?;
    let ke = KernelEval::new(&query.params)?;
    let s = 2.0 + query.sigma + query.omega;
    let one = Complex64::new(1.0, 0.0);
    let v: f64 = integrate_fn(
        |w| {
            let xi = z * w.conj();
            match ke.q(xi) {
                Ok(q) => q.norm() / (one - xi).norm().powf(s),
                Err(_) => f64::NAN,
            }
        },
        0.0,
        &rule,
    )?;
    Ok(v * weight.mass())
}

/// 8 radii in [0.9, 0.99] with 1 − |z| geometrically spaced.
pub fn fit_window() -> Vec<f64> {
    (0..8).map(|k| 1.0 - 0.1 * 0.1f64.powf(k as f64 / 7.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// ω > 0: I ≍ (1−|z|²)^{−ω}.
    Power,
    /// ω = 0: I ≍ log 1/(1−|z|²).
    Logarithmic,
    /// ω < 0: I ≍ 1.
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeFit {
    pub regime: Regime,
    /// Least-squares slope of log I against log x, x = 1/(1−|z|²).
    pub raw_slope: f64,
    /// ω > 0: exponent e of the model I = A·x^e + C·log x + B.
    pub exponent: Option<f64>,
    /// ω > 0: C; ω = 0: mean of I/log x over the tail.
    pub log_coefficient: Option<f64>,
    /// ω = 0: max/min − 1 of I/log x over the second half of the path.
    pub ratio_variation: Option<f64>,
    /// ω < 0: max/min of I along the path.
    pub spread: Option<f64>,
    /// None when the fit is degenerate.
    pub verdict: Option<bool>,
}

pub const EXPONENT_TOL: f64 = 0.05;
pub const LOG_RATIO_TOL: f64 = 0.1;
pub const BOUNDED_SPREAD: f64 = 2.0;

/// Linear least squares of I/I against (x^e, log x, 1)/I; returns the
/// coefficients and the residual norm.
fn power_model(x: &[f64], y: &[f64], e: f64) -> Option<(DVector<f64>, f64)> {
    let n = x.len();
    let a = DMatrix::from_fn(n, 3, |i, j| {
        let basis = match j {
            0 => x[i].powf(e),
            1 => x[i].ln(),
            _ => 1.0,
        };
        basis / y[i]
    });
    let rhs = DVector::from_element(n, 1.0);
    let svd = a.clone().svd(true, true);
    let c = svd.solve(&rhs, 1e-14).ok()?;
    let res = (&a * &c - rhs).norm();
    Some((c, res))
}

/// Golden-section minimization of the model residual over the exponent.
fn fit_exponent(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let f = |e: f64| power_model(x, y, e).map(|v| v.1).unwrap_or(f64::INFINITY);
    // Coarse scan, then golden section around the best cell.
    let grid: Vec<f64> = (1..=200).map(|k| k as f64 * 0.025).collect();
    let (k, _) = grid.iter().enumerate().map(|(k, &e)| (k, f(e))).min_by(|a, b| a.1.total_cmp(&b.1))?;
    let (mut lo, mut hi) = (grid[k.saturating_sub(1)], grid[(k + 1).min(grid.len() - 1)]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (hi - g * (hi - lo), lo + g * (hi - lo));
    for _ in 0..100 {
        if f(c) < f(d) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - g * (hi - lo);
        d = lo + g * (hi - lo);
    }
    let e = 0.5 * (lo + hi);
    let (coef, _) = power_model(x, y, e)?;
    Some((e, coef[1]))
}

/// Regime verdict for values of I_ω along a path of radii.
pub fn regime_fit(radii: &[f64], values: &[f64], omega: f64) -> Result<RegimeFit> {
    if radii.len() != values.len() || radii.len() < 5 {
        return Err(Error::Domain("regime fit needs at least 5 (radius, value) pairs".into()));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) || radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(Error::Domain("radii must increase strictly inside (0, 1)".into()));
    }
    let x: Vec<f64> = radii.iter().map(|r| 1.0 / (1.0 - r * r)).collect();
    let degenerate = values.iter().any(|v| !(v.is_finite() && *v > 0.0));
    let pts: Vec<(f64, f64)> = x.iter().zip(values).map(|(x, v)| (x.ln(), v.ln())).collect();
    let raw_slope = ls_slope(&pts);
    let mut fit = RegimeFit {
        regime: Regime::Bounded,
        raw_slope,
        exponent: None,
        log_coefficient: None,
        ratio_variation: None,
        spread: None,
        verdict: None,
    };
    if degenerate {
        return Ok(fit);
    }
    if omega > 0.0 {
        fit.regime = Regime::Power;
        if let Some((e, c)) = fit_exponent(&x, values) {
            fit.exponent = Some(e);
            fit.log_coefficient = Some(c);
            fit.verdict = Some((e - omega).abs() <= EXPONENT_TOL * omega.max(1.0));
        }
    } else if omega == 0.0 {
        fit.regime = Regime::Logarithmic;
        let tail = radii.len() / 2;
        let ratios: Vec<f64> = values[tail..].iter().zip(&x[tail..]).map(|(v, x)| v / x.ln()).collect();
        let max = ratios.iter().copied().fold(f64::MIN, f64::max);
        let min = ratios.iter().copied().fold(f64::MAX, f64::min);
        let variation = max / min - 1.0;
        fit.ratio_variation = Some(variation);
        fit.log_coefficient = Some(ratios.iter().sum::<f64>() / ratios.len() as f64);
        fit.verdict = Some(variation < LOG_RATIO_TOL);
    } else {
        let max = values.iter().copied().fold(f64::MIN, f64::max);
        let min = values.iter().copied().fold(f64::MAX, f64::min);
        fit.spread = Some(max / min);
        fit.verdict = Some(max / min < BOUNDED_SPREAD);
    }
    Ok(fit)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IOmegaScan {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub fit: RegimeFit,
}

/// I_ω on the fit window along the positive axis, with its regime fit.
pub fn i_omega_scan(query: &IOmegaQuery, radii: &[f64]) -> Result<IOmegaScan> {
    let values = radii.par_iter().map(|&r| i_omega(query, Complex64::new(r, 0.0))).collect::<Result<Vec<_>>>()?;
    let fit = regime_fit(radii, &values, query.omega)?;
    Ok(IOmegaScan { radii: radii.to_vec(), values, fit })
}

/// What an averaging function is taken of.
#[derive(Debug, Clone, Copy)]
pub enum AverageSource<'a> {
    Symbol(&'a SymbolFunction),
    Measure(&'a BorelMeasure),
}

/// ν(D) for a measure; atoms on the disc boundary count as inside.
fn disc_mass(nu: &BorelMeasure, disc: &BergmanDisc, params: &SpaceParams, n: usize) -> Result<f64> {
    match nu {
        BorelMeasure::Atoms(atoms) => {
            let mut s = 0.0;
            for &(w, mass) in atoms {
                if disc.contains(w)? {
                    s += mass;
                }
            }
            Ok(s)
        }
        density => {
            let rel = density.relative_density(params).expect("density variant");
            disc.integrate(|w| rel(w).re, n)
        }
    }
}

/// φ̂_r(z) = μ(D)^{−1} ∫_D φ dμ (real part of φ), or ν(D)/μ(D).
pub fn averaging(source: AverageSource, z: Complex64, r: f64, params: &SpaceParams) -> Result<f64> {
    let disc = BergmanDisc::new(params, z, r)?;
    let mu = disc.measure(DISC_NODES)?;
    if !(mu > 0.0) {
        return Err(Error::Domain("disc has zero measure".into()));
    }
    let num = match source {
        AverageSource::Symbol(phi) if phi.radial => {
            disc.integrate_radial(|s| phi.eval(Complex64::new(s, 0.0)).re, DISC_NODES)?
        }
        AverageSource::Symbol(phi) => disc.integrate(|w| phi.eval(w).re, DISC_NODES)?,
        AverageSource::Measure(nu) => disc_mass(nu, &disc, params, DISC_NODES)?,
    };
    Ok(num / mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRow {
    pub center: Complex64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlesonSup {
    pub sup: f64,
    pub argmax: Complex64,
    pub rows: Vec<RatioRow>,
}

fn ratios(nu: &BorelMeasure, r: f64, params: &SpaceParams, centers: &[Complex64]) -> Result<Vec<RatioRow>> {
    if let Some(z) = centers.iter().find(|z| !(z.norm() <= 0.99)) {
        return Err(Error::Domain(format!("center {z} outside |z| <= 0.99")));
    }
    centers
        .par_iter()
        .map(|&z| {
            let ratio = averaging(AverageSource::Measure(nu), z, r, params)?;
            Ok(RatioRow { center: z, ratio })
        })
        .collect()
}

/// max over the centers of ν(D(z, r))/μ(D(z, r)).
pub fn carleson_ratio_sup(
    nu: &BorelMeasure,
    r: f64,
    params: &SpaceParams,
    centers: &[Complex64],
) -> Result<CarlesonSup> {
    if centers.is_empty() {
        return Err(Error::Domain("center grid is empty".into()));
    }
    let rows = ratios(nu, r, params, centers)?;
    let best = rows.iter().copied().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).expect("non-empty");
    Ok(CarlesonSup { sup: best.ratio, argmax: best.center, rows })
}

/// Polar grid of centers: `rings` radii up to `r_max` times `angles` angles.
pub fn center_grid(rings: usize, angles: usize, r_max: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(rings * angles);
    for i in 1..=rings {
        let r = r_max * i as f64 / rings as f64;
        for j in 0..angles {
            out.push(Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / angles as f64));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingProfile {
    pub rows: Vec<RatioRow>,
    /// Last ratio below a tenth of the first and non-increasing within noise.
    pub vanishing: bool,
}

/// ν(D)/μ(D) along centers on the positive axis.
pub fn vanishing_profile(nu: &BorelMeasure, r: f64, params: &SpaceParams, radii: &[f64]) -> Result<VanishingProfile> {
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("radii path must have two or more increasing entries".into()));
    }
    let centers: Vec<Complex64> = radii.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    let rows = ratios(nu, r, params, &centers)?;
    let first = rows[0].ratio;
    let last = rows[rows.len() - 1].ratio;
    let monotone = rows.windows(2).all(|w| w[1].ratio <= w[0].ratio * (1.0 + 1e-6) + 1e-12);
    Ok(VanishingProfile { rows, vanishing: monotone && last < 0.1 * first })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ladder {
    /// Cutoff level k: the integral is taken over 10^{−k} < |z| (< 1 − 10^{−k}).
    pub levels: Vec<u32>,
    pub values: Vec<f64>,
    /// Slope of log value against k·log 10 over the last three levels.
    pub growth_exponent: f64,
    /// Ratio of the last two increments; below 1 the ladder converges
    /// geometrically, at or above 1 it grows without bound.
    pub increment_ratio: f64,
    /// Limit of the ladder assuming geometric increments (when bounded).
    pub extrapolated: Option<f64>,
    pub bounded: bool,
}

/// Increments shrinking by at least this factor per level count as convergent.
pub const CONVERGENT_RATIO: f64 = 0.95;

fn ladder(levels: Vec<u32>, values: Vec<f64>) -> Ladder {
    let k = values.len();
    let pts: Vec<(f64, f64)> = (k - 3..k).map(|i| (levels[i] as f64 * 10f64.ln(), values[i].ln())).collect();
    let growth_exponent = ls_slope(&pts);
    let inc: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let last = inc[inc.len() - 1];
    let ratio = |i: usize| if inc[i - 1] == 0.0 { 0.0 } else { inc[i] / inc[i - 1] };
    let increment_ratio = ratio(inc.len() - 1);
    let settled = last.abs() < 0.01 * values[k - 1].abs();
    let geometric = increment_ratio.abs() < CONVERGENT_RATIO && ratio(inc.len() - 2).abs() < CONVERGENT_RATIO;
    let bounded = values.iter().all(|v| v.is_finite()) && (settled || geometric);
    let extrapolated = bounded.then(|| values[k - 1] + last * increment_ratio / (1.0 - increment_ratio));
    Ladder { levels, values, growth_exponent, increment_ratio, extrapolated, bounded }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FnProbe {
    pub n: u32,
    pub predicate: BoundednessVerdict,
    /// ‖B f_N‖ᵖ with the z-integral cut at 10^{−k} < |z|.
    pub b_ladder: Ladder,
    /// ‖B* f_N‖^q over 10^{−k} < |z| < 1 − 10^{−k} (p > 1 with a finite
    /// inner integral only).
    pub adjoint_ladder: Option<Ladder>,
    /// 2b − m ≤ −2: the inner integral of B* f_N diverges at the origin.
    pub adjoint_divergent: bool,
    pub bounded: bool,
    /// Ladder verdict equals the predicate.
    pub consistent: bool,
}

const LADDER_LEVELS: u32 = 6;
const PROBE_NODES: usize = 16;
const PROBE_RADIAL: usize = 24;
const PROBE_ANGULAR: usize = 64;

/// J(s) = ∫ (1−|w|²)^{σ} |Q(s·conj w)| |w|^{2γ} / |1 − s·conj w|^{2+α} dA(w).
fn inner_integral(ke: &KernelEval, sigma: f64, gamma: f64, s: f64) -> Result<f64> {
    let weight = SpaceParams::new(sigma, gamma)?;
    // (1−|w|²)^{N+·} damps the boundary peak, so a plain product rule suffices.
    let rule = DiskRule::build(&weight, PROBE_RADIAL, PROBE_ANGULAR)?;
    let expo = 2.0 + ke.params().alpha;
    let one = Complex64::new(1.0, 0.0);
    let v: f64 = integrate_fn(
        |w| {
            let xi = w.conj() * s;
            match ke.q(xi) {
                Ok(q) => q.norm() / (one - xi).norm().powf(expo),
                Err(_) => f64::NAN,
            }
        },
        0.0,
        &rule,
    )?;
    Ok(v * weight.mass())
}

/// ∫ u^c (1−u)^d g(u) du at each ladder level k = 1..: the range is
/// 10^{−2k} < u, and also u < 1 − 10^{−k} when `outer` (otherwise the upper
/// end is 1 − 1e−12).  Pieces near either end use panels in log u or log(1−u).
fn ladder_values(c: f64, d: f64, g: impl Fn(f64) -> Result<f64>, outer: bool) -> Result<Vec<f64>> {
    let (x, w) = gauss_legendre(PROBE_NODES)?;
    let f = |u: f64| -> Result<f64> { Ok(u.powf(c) * (1.0 - u).powf(d) * g(u)?) };
    let log_panel = |lo: f64, hi: f64, near_one: bool| -> Result<f64> {
        let (a, b) = (lo.ln(), hi.ln());
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in x.iter().zip(&w) {
            let t = (a + h * (1.0 + x)).exp();
            s += w * t * f(if near_one { 1.0 - t } else { t })?;
        }
        Ok(s * h)
    };
    let mut acc = 0.0;
    for (lo, hi) in [(0.01, 0.1), (0.1, 0.5)] {
        acc += log_panel(lo, hi, false)?;
    }
    acc += log_panel(0.1, 0.5, true)?;
    if !outer {
        let mut t = 0.1f64;
        while t > 1e-12 {
            acc += log_panel(t / 10.0, t, true)?;
            t /= 10.0;
        }
    }
    let mut values = Vec::with_capacity(LADDER_LEVELS as usize);
    values.push(acc);
    for k in 2..=LADDER_LEVELS as i32 {
        acc += log_panel(10f64.powi(-2 * k), 10f64.powi(2 - 2 * k), false)?;
        if outer {
            acc += log_panel(10f64.powi(-k), 10f64.powi(1 - k), true)?;
        }
        values.push(acc);
    }
    Ok(values)
}

/// Default probe exponent ⌈α + |a| + 5⌉.
pub fn default_probe_exponent(alpha: f64, a: f64) -> u32 {
    (alpha + a.abs() + 5.0).ceil() as u32
}

/// Evaluates ‖B f_N‖ᵖ and, for p > 1, ‖B* f_N‖^q with f_N = (1−|z|²)^N on
/// a ladder of cutoffs, and compares the verdict with the predicate.
///
/// For p = 1 only the B f_N ladder is run, which sees the condition
/// 2b > m − 2 but not the other two; `consistent` can then be false even
/// though no ladder diverges.
pub fn f_n_probe(params: &SpaceParams, a: f64, b: f64, n: Option<u32>, p: f64) -> Result<FnProbe> {
    let predicate = projection_bounded(&BoundednessQuery { p, alpha: params.alpha, beta: params.beta, a, b })?;
    let n = n.unwrap_or_else(|| default_probe_exponent(params.alpha, a));
    if n < 1 {
        return Err(Error::Domain("probe exponent N must be at least 1".into()));
    }
    let ke = KernelEval::new(params)?;
    let m = params.m as f64;
    let (alpha, beta_w) = (params.alpha, params.beta);
    let nn = n as f64;
    // B f_N: inner weights (1−|w|²)^{N+α} |w|^{2β−m}, outer (1−|z|²)^a |z|^{2b−pm}.
    let gamma_b = beta_w - m / 2.0;
    let scale_b = beta(a + 1.0, b + 1.0)?.powf(-(p + 1.0));
    let b_values = ladder_values(
        b - p * m / 2.0,
        a,
        |u| Ok(inner_integral(&ke, nn + alpha, gamma_b, u.sqrt())?.powf(p) * scale_b),
        false,
    )?;
    let b_ladder = ladder((1..=LADDER_LEVELS).collect(), b_values);
    let gamma_s = b - m / 2.0;
    let adjoint_divergent = p > 1.0 && gamma_s <= -1.0;
    let adjoint_ladder = if p > 1.0 {
        let q = p / (p - 1.0);
        if adjoint_divergent {
            None
        } else {
            let scale = beta(a + 1.0, b + 1.0)?.powf(-(q + 1.0));
            let c = b + q * (beta_w - m / 2.0 - b);
            let d = a + q * (alpha - a);
            let values =
                ladder_values(c, d, |u| Ok(inner_integral(&ke, nn + a, gamma_s, u.sqrt())?.powf(q) * scale), true)?;
            Some(ladder((1..=LADDER_LEVELS).collect(), values))
        }
    } else {
        None
    };
    let bounded = b_ladder.bounded && !adjoint_divergent && adjoint_ladder.as_ref().is_none_or(|l| l.bounded);
    let consistent = bounded == predicate.bounded;
    Ok(FnProbe { n, predicate, b_ladder, adjoint_ladder, adjoint_divergent, bounded, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classical() -> SpaceParams {
        SpaceParams::new(0.0, 0.0).unwrap()
    }

    #[test]
    fn i_omega_at_origin_is_a_beta_value() {
        let p = SpaceParams::new(1.0, -0.5).unwrap();
        let q0 = KernelEval::new(&p).unwrap().q(Complex64::new(0.0, 0.0)).unwrap().norm();
        for &(s, g) in &[(0.0, 0.0), (1.0, 0.5), (-0.5, 2.0)] {
            let q = IOmegaQuery::new(s, g, 0.3, p).unwrap();
            let v = i_omega(&q, Complex64::new(0.0, 0.0)).unwrap();
            let want = q0 * beta(s + 1.0, g + 1.0).unwrap();
            assert!((v - want).abs() < 1e-12 * want, "{v} vs {want}");
        }
    }

    #[test]
    fn i_omega_refuses_the_boundary() {
        let q = IOmegaQuery::new(0.0, 0.0, 1.0, classical()).unwrap();
        assert!(matches!(i_omega(&q, Complex64::new(0.996, 0.0)), Err(Error::Accuracy(_))));
        assert!(IOmegaQuery::new(-1.0, 0.0, 0.0, classical()).is_err());
    }

    #[test]
    fn negative_omega_stays_within_a_factor_two() {
        let q = IOmegaQuery::new(0.0, 0.0, -0.5, classical()).unwrap();
        let v: Vec<f64> = [0.8, 0.9, 0.95].iter().map(|&r| i_omega(&q, Complex64::new(r, 0.0)).unwrap()).collect();
        assert!(v[2] / v[0] < 2.0 && v[2] > v[0]);
    }

    #[test]
    fn unit_omega_fits_exponent_one() {
        let q = IOmegaQuery::new(0.0, 0.0, 1.0, classical()).unwrap();
        let s = i_omega_scan(&q, &fit_window()).unwrap();
        let e = s.fit.exponent.unwrap();
        assert!((e - 1.0).abs() < 0.05, "{e}");
        assert_eq!(s.fit.verdict, Some(true));
    }

    #[test]
    fn synthetic_power_law_gives_exact_slope() {
        let r = fit_window();
        let v: Vec<f64> = r.iter().map(|r| (1.0 - r * r).powf(-1.5)).collect();
        let fit = regime_fit(&r, &v, 1.5).unwrap();
        assert!((fit.raw_slope - 1.5).abs() < 1e-12);
        assert!((fit.exponent.unwrap() - 1.5).abs() < 1e-6);
        assert_eq!(fit.verdict, Some(true));
    }

    #[test]
    fn regime_fit_input_checks() {
        let r = fit_window();
        assert!(regime_fit(&r[..4], &[1.0; 4], 0.0).is_err());
        let mut bad = r.clone();
        bad.swap(0, 1);
        assert!(regime_fit(&bad, &[1.0; 8], 0.0).is_err());
        let mut v = vec![1.0; 8];
        v[3] = f64::NAN;
        assert_eq!(regime_fit(&r, &v, 0.0).unwrap().verdict, None);
    }

    #[test]
    fn log_regime_ratio() {
        let r = fit_window();
        let v: Vec<f64> = r.iter().map(|r| 2.0 * (1.0 / (1.0 - r * r)).ln()).collect();
        let fit = regime_fit(&r, &v, 0.0).unwrap();
        assert!(fit.ratio_variation.unwrap() < 1e-12);
        assert!((fit.log_coefficient.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit.verdict, Some(true));
    }

    #[test]
    fn averages_of_constants_and_mu() {
        let p = SpaceParams::new(0.5, -0.5).unwrap();
        let one = SymbolFunction::constant(1.0);
        let mu = BorelMeasure::mu(&p);
        for z in [Complex64::new(0.3, 0.2), Complex64::new(0.0, -0.7)] {
            let a = averaging(AverageSource::Symbol(&one), z, 0.8, &p).unwrap();
            assert!((a - 1.0).abs() < 1e-8);
            let m = averaging(AverageSource::Measure(&mu), z, 0.8, &p).unwrap();
            assert!((m - 1.0).abs() < 1e-6, "{m}");
        }
    }

    #[test]
    fn boundary_vanishing_symbol_averages_decrease() {
        let p = classical();
        let phi = SymbolFunction::one_minus_r2();
        let at = |r: f64| averaging(AverageSource::Symbol(&phi), Complex64::new(r, 0.0), 1.0, &p).unwrap();
        assert!(at(0.95) < at(0.5));
    }

    #[test]
    fn ratio_sup_scales_and_finds_inner_ring() {
        let p = classical();
        let nu = BorelMeasure::from_symbol(&SymbolFunction::one_minus_r2());
        let centers = center_grid(3, 4, 0.9);
        let s = carleson_ratio_sup(&nu, 1.0, &p, &centers).unwrap();
        assert!((s.argmax.norm() - 0.3).abs() < 1e-12);
        assert!(s.sup < 1.0);
        let s3 = carleson_ratio_sup(&nu.scaled(3.0), 1.0, &p, &centers).unwrap();
        assert!((s3.sup - 3.0 * s.sup).abs() < 1e-12 * s3.sup);
        assert!(carleson_ratio_sup(&nu, 1.0, &p, &[Complex64::new(0.995, 0.0)]).is_err());
    }

    #[test]
    fn atom_ratio_grows_as_the_disc_shrinks() {
        let p = classical();
        let nu = BorelMeasure::atoms(vec![(Complex64::new(0.5, 0.0), 1.0)]).unwrap();
        let c = [Complex64::new(0.5, 0.0)];
        let big = carleson_ratio_sup(&nu, 1.0, &p, &c).unwrap().sup;
        let small = carleson_ratio_sup(&nu, 0.3, &p, &c).unwrap().sup;
        assert!(small > big && big > 0.0);
    }

    #[test]
    fn vanishing_profiles() {
        let p = classical();
        let radii = [0.3, 0.6, 0.9, 0.99];
        let nu = BorelMeasure::from_symbol(&SymbolFunction::one_minus_r2());
        assert!(vanishing_profile(&nu, 1.0, &p, &radii).unwrap().vanishing);
        let flat = vanishing_profile(&BorelMeasure::mu(&p), 1.0, &p, &radii).unwrap();
        assert!(!flat.vanishing);
        assert!(flat.rows.iter().all(|r| (r.ratio - 1.0).abs() < 1e-6));
        let atom = BorelMeasure::atoms(vec![(Complex64::new(0.3, 0.0), 1.0)]).unwrap();
        let prof = vanishing_profile(&atom, 0.5, &p, &radii).unwrap();
        assert!(prof.rows[0].ratio > 0.0 && prof.rows[3].ratio == 0.0);
        assert!(prof.vanishing);
    }

    #[test]
    fn probe_ladders_follow_the_predicate() {
        let p = SpaceParams::new(0.5, 1.5).unwrap();
        let ok = f_n_probe(&p, 0.5, 1.5, None, 2.0).unwrap();
        assert_eq!(ok.n, 6);
        assert!(ok.predicate.bounded && ok.bounded && ok.consistent);
        let doubled = f_n_probe(&p, 0.5, 1.5, Some(12), 2.0).unwrap();
        assert!(doubled.bounded);
        // 2b = 1 <= pm - 2 = 2.
        let low = f_n_probe(&p, 0.5, 0.5, None, 2.0).unwrap();
        assert!(!low.predicate.bounded && !low.b_ladder.bounded && low.consistent);
        assert!((low.b_ladder.growth_exponent - 1.0).abs() < 0.05);
        // p(α+1) = 3 <= a + 1: only the adjoint ladder sees it.
        let heavy = f_n_probe(&p, 2.5, 1.5, None, 2.0).unwrap();
        assert!(heavy.b_ladder.bounded && !heavy.adjoint_ladder.unwrap().bounded && heavy.consistent);
    }
}
