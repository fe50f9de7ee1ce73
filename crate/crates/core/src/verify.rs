//! The acceptance suite: each criterion is a list of named checks, each
//! comparing one worst-case number against its tolerance.
//!
//! Parameter lattices default to the ones of the acceptance criteria; a
//! [`VerifyConfig`] with `params` set restricts the lattice-based criteria to
//! that pair (criteria that need β ≤ 0 are skipped for other pairs).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::carleson::{carleson_ratio_sup, center_grid, fit_window, i_omega_scan, IOmegaQuery};
use crate::error::{Error, Result};
use crate::geometry::{
    density_vs_log_kernel_check, distance, graph_distance, poincare_distance, pseudo_hyperbolic_area, BergmanDisc,
    MetricDensityEval, MetricGrid, DISC_NODES,
};
use crate::kernel::{h_prime_identity_residual, h_recurrence_residual, winding_count, zero_count_q, KernelEval};
use crate::operators::{
    berezin, compactness_diagnostic, toeplitz_algebra_checks, weak_convergence_probe, BerezinSource, BorelMeasure,
    PolySymbol, SymbolFunction,
};
use crate::params::SpaceParams;
use crate::projection::{
    pole_order_bound, project, project_monomial, projection_bounded, BoundednessQuery, MonomialBasis,
};
use crate::quadrature::{inner_product, DiskFunction, DiskRule};

/// Tolerances of the acceptance criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub reproducing: f64,
    pub projection: f64,
    pub projection_zero: f64,
    pub gram_off_diagonal: f64,
    pub gram_diagonal: f64,
    pub h_identities: f64,
    pub laplacian: f64,
    pub sandwich: f64,
    pub disc_area: f64,
    pub radial_distance: f64,
    pub additivity: f64,
    pub adjoint: f64,
    pub multiplicativity: f64,
    pub support_tail: f64,
    pub identity_tail: f64,
    pub berezin_scan: f64,
    pub exponent: f64,
    pub log_ratio: f64,
    pub bounded_spread: f64,
    pub carleson_identity: f64,
    pub berezin_one: f64,
    pub decay_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            reproducing: 1e-8,
            projection: 1e-8,
            projection_zero: 1e-12,
            gram_off_diagonal: 1e-12,
            gram_diagonal: 1e-12,
            h_identities: 1e-10,
            laplacian: 1e-3,
            sandwich: 1e-12,
            disc_area: 1e-4,
            radial_distance: 1e-3,
            additivity: 1e-12,
            adjoint: 1e-10,
            multiplicativity: 1e-8,
            support_tail: 1e-3,
            identity_tail: 0.99,
            berezin_scan: 0.05,
            exponent: 0.05,
            log_ratio: 0.1,
            bounded_spread: 2.0,
            carleson_identity: 1e-6,
            berezin_one: 1e-8,
            decay_factor: 2.0,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 22] = [
        "reproducing",
        "projection",
        "projection_zero",
        "gram_off_diagonal",
        "gram_diagonal",
        "h_identities",
        "laplacian",
        "sandwich",
        "disc_area",
        "radial_distance",
        "additivity",
        "adjoint",
        "multiplicativity",
        "support_tail",
        "identity_tail",
        "berezin_scan",
        "exponent",
        "log_ratio",
        "bounded_spread",
        "carleson_identity",
        "berezin_one",
        "decay_factor",
    ];

    /// Overrides one tolerance by field name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Domain(format!("tolerance {name} must be finite and >= 0")));
        }
        let slot = match name {
            "reproducing" => &mut self.reproducing,
            "projection" => &mut self.projection,
            "projection_zero" => &mut self.projection_zero,
            "gram_off_diagonal" => &mut self.gram_off_diagonal,
            "gram_diagonal" => &mut self.gram_diagonal,
            "h_identities" => &mut self.h_identities,
            "laplacian" => &mut self.laplacian,
            "sandwich" => &mut self.sandwich,
            "disc_area" => &mut self.disc_area,
            "radial_distance" => &mut self.radial_distance,
            "additivity" => &mut self.additivity,
            "adjoint" => &mut self.adjoint,
            "multiplicativity" => &mut self.multiplicativity,
            "support_tail" => &mut self.support_tail,
            "identity_tail" => &mut self.identity_tail,
            "berezin_scan" => &mut self.berezin_scan,
            "exponent" => &mut self.exponent,
            "log_ratio" => &mut self.log_ratio,
            "bounded_spread" => &mut self.bounded_spread,
            "carleson_identity" => &mut self.carleson_identity,
            "berezin_one" => &mut self.berezin_one,
            "decay_factor" => &mut self.decay_factor,
            _ => {
                return Err(Error::Domain(format!(
                    "unknown tolerance {name}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Restricts lattice-based criteria to this (α, β).
    pub params: Option<(f64, f64)>,
    pub n_radial: usize,
    pub n_angular: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { params: None, n_radial: 200, n_angular: 256, seed: 7, tolerances: Tolerances::default() }
    }
}

impl VerifyConfig {
    fn rule(&self, params: &SpaceParams) -> Result<DiskRule> {
        DiskRule::build(params, self.n_radial, self.n_angular)
    }

    fn lattice(&self, default: &[(f64, f64)]) -> Vec<SpaceParams> {
        match self.params {
            Some((a, b)) => SpaceParams::new(a, b).into_iter().collect(),
            None => default.iter().filter_map(|&(a, b)| SpaceParams::new(a, b).ok()).collect(),
        }
    }

    /// Lattice restricted to β ≤ 0.
    fn metric_lattice(&self) -> Vec<SpaceParams> {
        self.lattice(METRIC_LATTICE).into_iter().filter(|p| p.is_geometric()).collect()
    }
}

const ANALYTIC_LATTICE: &[(f64, f64)] =
    &[(0.0, 0.0), (0.0, 0.5), (0.0, 1.5), (0.5, 0.0), (0.5, 0.5), (0.5, 1.5), (2.0, 0.0), (2.0, 0.5), (2.0, 1.5)];
const METRIC_LATTICE: &[(f64, f64)] = &[(0.0, 0.0), (0.0, -0.5), (1.0, -0.25), (2.0, -0.5)];
const OPERATOR_LATTICE: &[(f64, f64)] = &[(0.0, 0.0), (0.5, 1.5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn new(label: impl Into<String>, value: f64, relation: Relation, bound: f64) -> Self {
        let passed = match relation {
            Relation::AtMost => value <= bound,
            Relation::Below => value < bound,
            Relation::AtLeast => value >= bound,
            Relation::Equals => value == bound,
        };
        Check { label: label.into(), value, relation, bound, passed }
    }

    fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(label, value, Relation::AtMost, bound)
    }

    fn failed(label: impl Into<String>, message: String) -> Self {
        Check {
            label: format!("{}: {message}", label.into()),
            value: f64::NAN,
            relation: Relation::AtMost,
            bound: 0.0,
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// No parameter pair of the configuration applies.
    pub skipped: bool,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One line: id, name, verdict and the least favourable check.
    pub fn summary(&self) -> String {
        let verdict = if self.skipped {
            "SKIP"
        } else if self.passed() {
            "PASS"
        } else {
            "FAIL"
        };
        let shown = self.checks.iter().find(|c| !c.passed).or_else(|| self.checks.first());
        let detail = shown
            .map(|c| format!("{} = {:e} (bound {:e}), {} checks", c.label, c.value, c.bound, self.checks.len()))
            .unwrap_or_else(|| "no applicable parameters".into());
        format!("[{verdict}] {:>2} {}: {detail}", self.id, self.name)
    }
}

pub const CRITERIA: [(u32, &str); 15] = [
    (1, "reproducing property"),
    (2, "monomial projection"),
    (3, "Gram orthogonality"),
    (4, "H identities"),
    (5, "metric density vs log-kernel Laplacian"),
    (6, "density sandwich"),
    (7, "classical disc area"),
    (8, "distance bracket"),
    (9, "Toeplitz algebra"),
    (10, "compactness diagnostics"),
    (11, "I_omega regimes"),
    (12, "Carleson identity case"),
    (13, "zero-freeness scan"),
    (14, "pairing decay"),
    (15, "boundedness predicate"),
];

fn label(p: &SpaceParams) -> String {
    format!("alpha={} beta={}", p.alpha, p.beta)
}

/// Collects a per-pair computation into checks, turning errors into failures.
fn per_pair(lattice: &[SpaceParams], f: impl Fn(&SpaceParams) -> Result<Vec<Check>>) -> Vec<Check> {
    lattice.iter().flat_map(|p| f(p).unwrap_or_else(|e| vec![Check::failed(label(p), e.to_string())])).collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn reproducing(cfg: &VerifyConfig) -> Vec<Check> {
    per_pair(&cfg.lattice(ANALYTIC_LATTICE), |p| {
        let rule = cfg.rule(p)?;
        let ke = KernelEval::new(p)?;
        let basis = MonomialBasis::new(p, 9);
        let mut worst = 0.0f64;
        for r in [0.1, 0.5, 0.9] {
            for t in [0.3, 2.0, 4.1] {
                let z = Complex64::from_polar(r, t);
                let g = DiskFunction::new(p.m, |w| ke.kernel(w, z).unwrap_or(c(f64::NAN, 0.0)));
                for k in 0..basis.len() {
                    let f = DiskFunction::new(p.m.saturating_sub(k as u32), |w| basis.eval(k, w));
                    let fz = basis.eval(k, z);
                    let ip = inner_product(&f, &g, &rule)?;
                    worst = worst.max((ip - fz).norm() / (1.0 + fz.norm()));
                }
            }
        }
        Ok(vec![Check::at_most(label(p), worst, cfg.tolerances.reproducing)])
    })
}

fn monomial_projection(cfg: &VerifyConfig) -> Vec<Check> {
    per_pair(&cfg.lattice(ANALYTIC_LATTICE), |p| {
        let rule = cfg.rule(p)?;
        let (mut rel, mut zero) = (0.0f64, 0.0f64);
        for s in 0..=6u32 {
            for t in 0..=6u32 {
                let f = DiskFunction::mixed_monomial(p, s, t);
                let series = project(&f, p, &rule, 16)?;
                let (coef, exponent) = project_monomial(p, s, t)?;
                if t < s {
                    zero = zero.max(series.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max));
                } else {
                    let k = (exponent + p.m as i64) as usize;
                    rel = rel.max((series.coeffs[k] - coef).norm() / coef.abs());
                    let rest = series.coeffs.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, a)| a.norm());
                    zero = zero.max(rest.fold(0.0, f64::max));
                }
            }
        }
        Ok(vec![
            Check::at_most(format!("{} relative", label(p)), rel, cfg.tolerances.projection),
            Check::at_most(format!("{} vanishing", label(p)), zero, cfg.tolerances.projection_zero),
        ])
    })
}

fn gram(cfg: &VerifyConfig) -> Vec<Check> {
    per_pair(&cfg.lattice(ANALYTIC_LATTICE), |p| {
        let rule = cfg.rule(p)?;
        let basis = MonomialBasis::new(p, 12);
        let (mut off, mut diag) = (0.0f64, 0.0f64);
        for j in 0..basis.len() {
            let f = DiskFunction::monomial(p, j as u32);
            for k in j..basis.len() {
                let g = DiskFunction::monomial(p, k as u32);
                let ip = inner_product(&f, &g, &rule)? / (basis.norm(j) * basis.norm(k));
                if j == k {
                    // Quadrature of ‖z^{k−m}‖² against ℬ(α+1, k+β₀+1)/ℬ(α+1, β+1).
                    diag = diag.max((ip.re - 1.0).abs());
                } else {
                    off = off.max(ip.norm());
                }
            }
        }
        Ok(vec![
            Check::at_most(format!("{} off-diagonal", label(p)), off, cfg.tolerances.gram_off_diagonal),
            Check::at_most(format!("{} diagonal", label(p)), diag, cfg.tolerances.gram_diagonal),
        ])
    })
}

fn h_identities(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for alpha in [0.0, 1.0, 2.0, 3.0] {
        let mut worst = (0.0f64, 0.0f64);
        let mut err = None;
        for beta in [-0.75, -0.5, -0.25] {
            for t in [0.0, 0.25, 0.5, 0.75, 0.9] {
                match (h_prime_identity_residual(alpha, beta, t), h_recurrence_residual(alpha, beta, t)) {
                    (Ok(a), Ok(b)) => worst = (worst.0.max(a), worst.1.max(b)),
                    (Err(e), _) | (_, Err(e)) => err = Some(e.to_string()),
                }
            }
        }
        if let Some(e) = err {
            out.push(Check::failed(format!("alpha={alpha}"), e));
            continue;
        }
        out.push(Check::at_most(format!("alpha={alpha} derivative"), worst.0, cfg.tolerances.h_identities));
        out.push(Check::at_most(format!("alpha={alpha} recurrence"), worst.1, cfg.tolerances.h_identities));
    }
    out
}

fn laplacian(cfg: &VerifyConfig) -> Vec<Check> {
    per_pair(&cfg.metric_lattice(), |p| {
        let mut worst = 0.0f64;
        for k in 0..20 {
            let r = 0.05 + 0.85 * k as f64 / 19.0;
            let z = Complex64::from_polar(r, 0.7 * k as f64);
            let chk = density_vs_log_kernel_check(p, z, 1e-3)?;
            worst = worst.max(chk.residual / chk.rho_sq);
        }
        Ok(vec![Check::at_most(label(p), worst, cfg.tolerances.laplacian)])
    })
}

fn sandwich(cfg: &VerifyConfig) -> Vec<Check> {
    per_pair(&cfg.metric_lattice(), |p| {
        let md = MetricDensityEval::new(p)?;
        let (mut violation, mut gap) = (0.0f64, 0.0f64);
        for k in 0..1000 {
            let r = 0.999 * k as f64 / 999.0;
            let rho = md.rho_r(r)?;
            let (lo, hi) = md.bounds_r(r);
            violation = violation.max((lo - rho) / rho).max((rho - hi) / rho);
            gap = gap.max((rho - lo).abs() / rho);
        }
        let mut out = vec![Check::at_most(format!("{} bound violation", label(p)), violation, cfg.tolerances.sandwich)];
        if p.beta == 0.0 {
            out.push(Check::at_most(format!("{} lower bound attained", label(p)), gap, cfg.tolerances.sandwich));
        }
        Ok(out)
    })
}

fn disc_area(cfg: &VerifyConfig) -> Vec<Check> {
    let p = SpaceParams::new(0.0, 0.0).expect("classical parameters");
    let mut out = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let mut worst = 0.0f64;
        let mut failure = None;
        for z in [0.0, 0.3, 0.6] {
            let z = c(z, 0.0);
            let tau = (r / 2f64.sqrt()).tanh();
            match BergmanDisc::new(&p, z, r).and_then(|d| d.measure(DISC_NODES)) {
                Ok(area) => {
                    let exact = pseudo_hyperbolic_area(z, tau);
                    worst = worst.max((area - exact).abs() / exact);
                }
                Err(e) => failure = Some(e.to_string()),
            }
        }
        out.push(match failure {
            Some(e) => Check::failed(format!("r={r}"), e),
            None => Check::at_most(format!("r={r}"), worst, cfg.tolerances.disc_area),
        });
    }
    out
}

fn distance_bracket_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sample = move || {
        let (r, t): (f64, f64) = (rng.random::<f64>().sqrt() * 0.9, rng.random::<f64>() * 2.0 * PI);
        Complex64::from_polar(r, t)
    };
    let pairs: Vec<(Complex64, Complex64)> = (0..50).map(|_| (sample(), sample())).collect();
    let tol = cfg.tolerances.radial_distance;
    per_pair(&cfg.metric_lattice(), |p| {
        let grid = MetricGrid::new(p, 200, 256, 0.95)?;
        let rows = pairs
            .par_iter()
            .map(|&(a, b)| Ok((distance(a, b, p)?, graph_distance(&grid, a, b)?)))
            .collect::<Result<Vec<_>>>()?;
        let (mut geodesic_out, mut graph_out, mut gap) = (0.0f64, 0.0f64, 0.0f64);
        for (d, g) in &rows {
            let excess = |v: f64| ((d.lower - v) / d.upper).max((v - d.upper) / d.upper);
            geodesic_out = geodesic_out.max(excess(d.distance));
            graph_out = graph_out.max(excess(g.relaxed));
            gap = gap.max((g.relaxed - d.distance).abs() / d.distance);
        }
        let mut out = vec![
            Check::at_most(
                format!("{} geodesic bracket excess", label(p)),
                geodesic_out,
                crate::geometry::BRACKET_SLACK,
            ),
            Check::at_most(format!("{} graph bracket excess", label(p)), graph_out, tol),
            Check::at_most(format!("{} graph vs geodesic", label(p)), gap, tol),
        ];
        if p.alpha == 0.0 && p.beta == 0.0 {
            let mut worst = 0.0f64;
            for r in [0.3, 0.6, 0.9] {
                let g = graph_distance(&grid, c(0.0, 0.0), c(r, 0.0))?;
                let exact = 2f64.sqrt() * poincare_distance(c(0.0, 0.0), c(r, 0.0))?;
                worst = worst.max((g.relaxed - exact).abs() / exact);
            }
            out.push(Check::at_most("radial graph vs sqrt2*atanh", worst, tol));
        }
        Ok(out)
    })
}

fn toeplitz_algebra(cfg: &VerifyConfig) -> Vec<Check> {
    per_pair(&cfg.lattice(ANALYTIC_LATTICE), |p| {
        let rule = cfg.rule(p)?;
        let z = PolySymbol::z();
        let rep = toeplitz_algebra_checks(&z, &z, p, 32, &rule)?;
        let t = &cfg.tolerances;
        Ok(vec![
            Check::at_most(format!("{} additivity", label(p)), rep.additivity, t.additivity),
            Check::at_most(format!("{} adjoint", label(p)), rep.adjoint, t.adjoint),
            Check::at_most(format!("{} multiplicativity", label(p)), rep.multiplicativity, t.multiplicativity),
        ])
    })
}

fn compactness(cfg: &VerifyConfig) -> Vec<Check> {
    per_pair(&cfg.lattice(OPERATOR_LATTICE), |p| {
        let t = &cfg.tolerances;
        let rule = cfg.rule(p)?;
        let support = DiskRule::truncated(p, cfg.n_radial, cfg.n_angular, 0.5)?;
        let ind = compactness_diagnostic(&SymbolFunction::indicator(0.5), p, &[48], &support)?;
        let one = compactness_diagnostic(&SymbolFunction::constant(1.0), p, &[48], &rule)?;
        let vanish = compactness_diagnostic(&SymbolFunction::one_minus_r2(), p, &[48], &rule)?;
        let min_tail = one.tails[0].tail.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(vec![
            Check::new(format!("{} supported tail", label(p)), ind.tails[0].max(), Relation::Below, t.support_tail),
            Check::new(format!("{} identity tail", label(p)), min_tail, Relation::AtLeast, t.identity_tail),
            Check::new(format!("{} boundary Berezin", label(p)), vanish.berezin_scan, Relation::Below, t.berezin_scan),
        ])
    })
}

fn i_omega_regimes(cfg: &VerifyConfig) -> Vec<Check> {
    let t = cfg.tolerances;
    let radii = fit_window();
    per_pair(&cfg.lattice(&[(0.0, 0.0)]), |p| {
        let mut out = Vec::new();
        for sigma in [0.0, 1.0] {
            for gamma in [0.0, 0.5] {
                for omega in [-0.5, 0.0, 0.5, 1.0] {
                    let scan = i_omega_scan(&IOmegaQuery::new(sigma, gamma, omega, *p)?, &radii)?;
                    let tag = format!("{} sigma={sigma} gamma={gamma} omega={omega}", label(p));
                    let fit = &scan.fit;
                    out.push(if omega > 0.0 {
                        let e = fit.exponent.unwrap_or(f64::NAN);
                        Check::at_most(format!("{tag} exponent error"), (e - omega).abs(), t.exponent * omega.max(1.0))
                    } else if omega == 0.0 {
                        Check::new(
                            format!("{tag} log-ratio variation"),
                            fit.ratio_variation.unwrap_or(f64::NAN),
                            Relation::Below,
                            t.log_ratio,
                        )
                    } else {
                        Check::new(
                            format!("{tag} spread"),
                            fit.spread.unwrap_or(f64::NAN),
                            Relation::Below,
                            t.bounded_spread,
                        )
                    });
                }
            }
        }
        Ok(out)
    })
}

fn carleson_identity(cfg: &VerifyConfig) -> Vec<Check> {
    let t = cfg.tolerances;
    let mut out = per_pair(&cfg.metric_lattice(), |p| {
        let sup = carleson_ratio_sup(&BorelMeasure::mu(p), 1.0, p, &center_grid(3, 6, 0.9))?;
        let dev = sup.rows.iter().map(|r| (r.ratio - 1.0).abs()).fold(0.0, f64::max);
        Ok(vec![Check::at_most(format!("{} ratio", label(p)), dev, t.carleson_identity)])
    });
    out.extend(per_pair(&cfg.lattice(ANALYTIC_LATTICE), |p| {
        let one = SymbolFunction::constant(1.0);
        let mut dev = 0.0f64;
        for z in [c(0.2, 0.1), c(0.0, -0.6), c(-0.9, 0.0)] {
            let v = berezin(BerezinSource::Symbol(&one), p, z, 32)?;
            dev = dev.max((v.value - 1.0).norm());
        }
        Ok(vec![Check::at_most(format!("{} berezin(1)", label(p)), dev, t.berezin_one)])
    }));
    out
}

fn zero_freeness(_: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let p = SpaceParams::new(0.0, -0.5).expect("valid parameters");
    out.push(match zero_count_q(&p, 0.999) {
        Ok(n) => Check::new("zero count alpha=0 beta0=-0.5", n as f64, Relation::Equals, 0.0),
        Err(e) => Check::failed("zero count", e.to_string()),
    });
    type Poly = fn(Complex64) -> Complex64;
    let polys: [(&str, Poly, u32); 4] = [
        ("(x-0.5)(x+0.3i)(x-0.95)", |x| (x - 0.5) * (x + c(0.0, 0.3)) * (x - 0.95), 2),
        ("(x-0.5)^2", |x| (x - 0.5) * (x - 0.5), 2),
        ("x^3", |x| x * x * x, 3),
        ("x-2", |x| x - 2.0, 0),
    ];
    for (name, f, expect) in polys {
        out.push(match winding_count(f, 0.9) {
            Ok(n) => Check::new(format!("winding {name}"), n as f64, Relation::Equals, expect as f64),
            Err(e) => Check::failed(name, e.to_string()),
        });
    }
    out
}

fn pairing_decay(cfg: &VerifyConfig) -> Vec<Check> {
    let path: Vec<Complex64> = fit_window().into_iter().map(|r| c(r, 0.0)).collect();
    per_pair(&cfg.metric_lattice(), |p| {
        let p2 = p.at_p(2.0)?;
        let probe = weak_convergence_probe(&p2, |_| c(1.0, 0.0), &path, 32)?;
        let max = probe.rows.iter().map(|r| r.compensated).fold(f64::MIN, f64::max);
        let min = probe.rows.iter().map(|r| r.compensated).fold(f64::MAX, f64::min);
        Ok(vec![Check::new(
            format!("{} compensated max/min", label(p)),
            max / min,
            Relation::Below,
            cfg.tolerances.decay_factor,
        )])
    })
}

fn predicate(_: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let bq = |p, alpha, beta, a, b| BoundednessQuery { p, alpha, beta, a, b };
    let cases = [
        ("alpha=a, beta=b, m=0, p=1", bq(1.0, 0.5, -0.5, 0.5, -0.5), false),
        ("alpha=a, beta=b, m=0, p=2", bq(2.0, 0.5, -0.5, 0.5, -0.5), true),
        ("alpha=a=0, beta=b=1, p=2", bq(2.0, 0.0, 1.0, 0.0, 1.0), true),
        ("p=1, alpha=1, a=0, beta=1.5, b=0.4", bq(1.0, 1.0, 1.5, 0.0, 0.4), true),
    ];
    for (name, q, expect) in cases {
        out.push(match projection_bounded(&q) {
            Ok(v) => Check::new(name, v.bounded as u8 as f64, Relation::Equals, expect as u8 as f64),
            Err(e) => Check::failed(name, e.to_string()),
        });
    }
    for (p, beta, expect) in [(2.0, 0.0, 0), (2.0, 0.5, 1), (1.0, 0.0, 1)] {
        let name = format!("pole order bound p={p} beta={beta}");
        out.push(match pole_order_bound(p, beta) {
            Ok(m) => Check::new(name, m as f64, Relation::Equals, expect as f64),
            Err(e) => Check::failed(name, e.to_string()),
        });
    }
    out
}

/// Runs criterion `id` (1 to 15).
pub fn run_criterion(id: u32, cfg: &VerifyConfig) -> Option<CriterionOutcome> {
    let &(_, name) = CRITERIA.iter().find(|c| c.0 == id)?;
    let checks = match id {
        1 => reproducing(cfg),
        2 => monomial_projection(cfg),
        3 => gram(cfg),
        4 => h_identities(cfg),
        5 => laplacian(cfg),
        6 => sandwich(cfg),
        7 => disc_area(cfg),
        8 => distance_bracket_checks(cfg),
        9 => toeplitz_algebra(cfg),
        10 => compactness(cfg),
        11 => i_omega_regimes(cfg),
        12 => carleson_identity(cfg),
        13 => zero_freeness(cfg),
        14 => pairing_decay(cfg),
        _ => predicate(cfg),
    };
    let skipped = checks.is_empty();
    Some(CriterionOutcome { id, name, checks, skipped })
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|&(id, _)| run_criterion(id, cfg)).collect()
}
