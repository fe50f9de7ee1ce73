mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mbergman::carleson::{carleson_ratio_sup, center_grid, fit_window, i_omega_scan, IOmegaQuery};
use mbergman::geometry::{distance, graph_distance, MetricDensityEval, MetricGrid};
use mbergman::kernel::KernelEval;
use mbergman::operators::{berezin, toeplitz_matrix, BerezinSource, BorelMeasure, SymbolFunction};
use mbergman::projection::{project, project_monomial};
use mbergman::verify::{run_criterion, VerifyConfig, CRITERIA};
use mbergman::{Complex64, DiskFunction, DiskRule, Error, SpaceParams};
use serde_json::json;

use output::{Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "mbergman", version, about = "Numerics for beta-modified weighted Bergman spaces")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Weight exponent on (1 - |z|^2); must exceed -1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Weight exponent on |z|^2; must exceed -1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, global = true, default_value_t = 2.0)]
    p: f64,
    #[arg(long, global = true, default_value_t = 200)]
    n_radial: usize,
    #[arg(long, global = true, default_value_t = 256)]
    n_angular: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    out: Format,
    #[arg(long, global = true)]
    output_file: Option<PathBuf>,
    /// Basis size for truncated operators.
    #[arg(long, global = true, default_value_t = 32)]
    truncation: usize,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
}

impl Common {
    fn params(&self) -> Result<SpaceParams, Error> {
        SpaceParams::with_p(self.alpha.unwrap_or(0.0), self.beta.unwrap_or(0.0), self.p)
    }

    fn rule(&self, params: &SpaceParams) -> Result<DiskRule, Error> {
        DiskRule::build(params, self.n_radial, self.n_angular)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kernel values K(w, z) for w on a polar grid.
    KernelEval {
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.3)]
        z_re: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        z_im: f64,
        #[arg(long, default_value_t = 4)]
        radii: usize,
        #[arg(long, default_value_t = 8)]
        angles: usize,
        #[arg(long, default_value_t = 0.9)]
        r_max: f64,
    },
    /// Closed-form projections of conj(z)^s z^(t-m) against quadrature.
    ProjectCheck {
        #[arg(long, default_value_t = 6)]
        max_st: u32,
    },
    /// Metric density on a radial grid with its two-sided bounds.
    MetricDensity {
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long, default_value_t = 0.95)]
        r_max: f64,
    },
    /// Distance between two points, with its bracket.
    Distance {
        #[arg(long, allow_negative_numbers = true)]
        from_re: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        from_im: f64,
        #[arg(long, allow_negative_numbers = true)]
        to_re: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        to_im: f64,
        /// Also run the graph estimate.
        #[arg(long)]
        graph: bool,
    },
    /// Berezin transform of a symbol along a ray.
    Berezin {
        #[arg(long, default_value = "one-minus-r2")]
        symbol: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 0.99)]
        r_max: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        theta: f64,
        /// Nodes per panel of the kernel-adapted rule.
        #[arg(long, default_value_t = 32)]
        nodes: usize,
        /// Transform the truncated Toeplitz operator instead of the symbol.
        #[arg(long)]
        operator: bool,
    },
    /// Truncated Toeplitz matrix and its singular values.
    Toeplitz {
        #[arg(long, default_value = "z")]
        symbol: String,
    },
    /// Carleson ratios nu(D)/mu(D) over a polar grid of centers.
    CarlesonRatio {
        /// mu, symbol:<symbol>, or atoms:<re>,<im>,<mass>[;...]
        #[arg(long, default_value = "mu")]
        measure: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 3)]
        rings: usize,
        #[arg(long, default_value_t = 8)]
        angles: usize,
        #[arg(long, default_value_t = 0.9)]
        r_max: f64,
    },
    /// I_omega along the fit window with its regime fit.
    Iomega {
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        omega: f64,
    },
    /// Acceptance suite; exit code 2 when a check fails.
    Verify {
        /// Criterion ids to run (default: all).
        #[arg(long)]
        criterion: Vec<u32>,
        /// Tolerance override, name=value.
        #[arg(long)]
        tol: Vec<String>,
    },
}

enum Failure {
    Error(Error),
    Io(std::io::Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn domain(msg: impl Into<String>) -> Failure {
    Failure::Error(Error::Domain(msg.into()))
}

fn parse_f64(s: &str) -> Result<f64, Failure> {
    s.trim().parse().map_err(|_| domain(format!("not a number: {s:?}")))
}

fn parse_symbol(text: &str) -> Result<SymbolFunction, Failure> {
    let (head, arg) = text.split_once(':').unwrap_or((text, ""));
    Ok(match head {
        "one" => SymbolFunction::constant(1.0),
        "const" => SymbolFunction::constant(parse_f64(arg)?),
        "one-minus-r2" => SymbolFunction::one_minus_r2(),
        "indicator" => SymbolFunction::indicator(parse_f64(arg)?),
        "z" => SymbolFunction::new("z", |z| z),
        "zbar" => SymbolFunction::new("conj(z)", |z: Complex64| z.conj()),
        _ => {
            return Err(domain(format!(
                "unknown symbol {text:?}; expected one, const:<c>, one-minus-r2, indicator:<r>, z or zbar"
            )))
        }
    })
}

fn parse_measure(text: &str, params: &SpaceParams) -> Result<BorelMeasure, Failure> {
    if text == "mu" {
        return Ok(BorelMeasure::mu(params));
    }
    if let Some(sym) = text.strip_prefix("symbol:") {
        return Ok(BorelMeasure::from_symbol(&parse_symbol(sym)?));
    }
    if let Some(list) = text.strip_prefix("atoms:") {
        let mut atoms = Vec::new();
        for item in list.split(';').filter(|s| !s.trim().is_empty()) {
            let v: Vec<&str> = item.split(',').collect();
            if v.len() != 3 {
                return Err(domain(format!("atom {item:?} must be re,im,mass")));
            }
            atoms.push((Complex64::new(parse_f64(v[0])?, parse_f64(v[1])?), parse_f64(v[2])?));
        }
        return Ok(BorelMeasure::atoms(atoms)?);
    }
    Err(domain(format!("unknown measure {text:?}; expected mu, symbol:<symbol> or atoms:<re>,<im>,<mass>[;...]")))
}

fn ray(points: usize, r_max: f64) -> Result<Vec<f64>, Failure> {
    if points == 0 || !(r_max > 0.0 && r_max < 1.0) {
        return Err(domain("need at least one point and 0 < r_max < 1"));
    }
    Ok((1..=points).map(|i| r_max * i as f64 / points as f64).collect())
}

fn kernel_eval(c: &Common, z: Complex64, radii: usize, angles: usize, r_max: f64) -> Result<Table, Failure> {
    let params = c.params()?;
    let ke = KernelEval::new(&params)?;
    let mut t = Table::new(&["w_re", "w_im", "z_re", "z_im", "k_re", "k_im"]);
    for r in ray(radii, r_max)? {
        for j in 0..angles.max(1) {
            let w = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / angles.max(1) as f64);
            let k = ke.kernel(w, z)?;
            t.push(vec![w.re.into(), w.im.into(), z.re.into(), z.im.into(), k.re.into(), k.im.into()]);
        }
    }
    Ok(t)
}

fn project_check(c: &Common, max_st: u32) -> Result<Table, Failure> {
    let params = c.params()?;
    let rule = c.rule(&params)?;
    let n = (max_st + params.m + 2) as usize;
    let mut t = Table::new(&["s", "t", "exponent", "closed_form", "quadrature", "abs_error"]);
    for s in 0..=max_st {
        for tt in 0..=max_st {
            let series = project(&DiskFunction::mixed_monomial(&params, s, tt), &params, &rule, n)?;
            let (coef, exponent) = project_monomial(&params, s, tt)?;
            let quad = if tt < s {
                series.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
            } else {
                series.coeffs[(exponent + params.m as i64) as usize].re
            };
            t.push(vec![s.into(), tt.into(), exponent.into(), coef.into(), quad.into(), (quad - coef).abs().into()]);
        }
    }
    Ok(t)
}

fn metric_density(c: &Common, points: usize, r_max: f64) -> Result<Table, Failure> {
    let md = MetricDensityEval::new(&c.params()?)?;
    let mut t = Table::new(&["r", "rho", "lower", "upper"]);
    let mut radii = vec![0.0];
    radii.extend(ray(points.saturating_sub(1).max(1), r_max)?);
    for r in radii {
        let (lo, hi) = md.bounds_r(r);
        t.push(vec![r.into(), md.rho_r(r)?.into(), lo.into(), hi.into()]);
    }
    Ok(t)
}

fn distance_cmd(c: &Common, a: Complex64, b: Complex64, graph: bool) -> Result<Table, Failure> {
    let params = c.params()?;
    let d = distance(a, b, &params)?;
    let g = if graph {
        // Leave a margin between the outer point and the grid edge.
        let outer = a.norm().max(b.norm());
        let grid = MetricGrid::new(&params, c.n_radial, c.n_angular, (outer + 0.5 * (1.0 - outer)).max(0.95))?;
        Some(graph_distance(&grid, a, b)?)
    } else {
        None
    };
    let mut t = Table::new(&["distance", "lower", "upper", "graph_coarse", "graph_fine", "graph_relaxed"]);
    t.push(vec![
        d.distance.into(),
        d.lower.into(),
        d.upper.into(),
        g.map(|g| g.coarse).into(),
        g.map(|g| g.fine).into(),
        g.map(|g| g.relaxed).into(),
    ]);
    Ok(t)
}

fn berezin_cmd(
    c: &Common,
    symbol: &str,
    points: usize,
    r_max: f64,
    theta: f64,
    nodes: usize,
    operator: bool,
) -> Result<Table, Failure> {
    let params = c.params()?;
    let phi = parse_symbol(symbol)?;
    let op = if operator { Some(toeplitz_matrix(&phi, &params, c.truncation, &c.rule(&params)?)?) } else { None };
    let source = match &op {
        Some(t) => BerezinSource::Operator(t),
        None => BerezinSource::Symbol(&phi),
    };
    let mut t = Table::new(&["r", "re", "im", "truncation_error"]);
    for r in ray(points, r_max)? {
        let v = berezin(source, &params, Complex64::from_polar(r, theta), nodes)?;
        t.push(vec![r.into(), v.value.re.into(), v.value.im.into(), v.truncation_error.into()]);
    }
    Ok(t)
}

fn toeplitz_cmd(c: &Common, symbol: &str) -> Result<Table, Failure> {
    let size = c.truncation;
    let params = c.params()?;
    let rule = c.rule(&params)?;
    let op = toeplitz_matrix(&parse_symbol(symbol)?, &params, size, &rule)?;
    let mut t = Table::new(&["kind", "row", "col", "re", "im"]);
    for j in 0..size {
        for k in 0..size {
            let v = op.matrix[(j, k)];
            t.push(vec!["entry".into(), j.into(), k.into(), v.re.into(), v.im.into()]);
        }
    }
    for (i, s) in op.singular_values()?.into_iter().enumerate() {
        t.push(vec!["singular".into(), i.into(), i.into(), s.into(), 0.0.into()]);
    }
    Ok(t)
}

fn carleson_cmd(
    c: &Common,
    measure: &str,
    radius: f64,
    rings: usize,
    angles: usize,
    r_max: f64,
) -> Result<Table, Failure> {
    let params = c.params()?;
    let nu = parse_measure(measure, &params)?;
    let sup = carleson_ratio_sup(&nu, radius, &params, &center_grid(rings, angles, r_max))?;
    let mut t = Table::new(&["center_re", "center_im", "ratio", "is_max"]);
    for row in &sup.rows {
        t.push(vec![row.center.re.into(), row.center.im.into(), row.ratio.into(), (row.center == sup.argmax).into()]);
    }
    Ok(t)
}

fn iomega_cmd(c: &Common, sigma: f64, gamma: f64, omega: f64) -> Result<Table, Failure> {
    let query = IOmegaQuery::new(sigma, gamma, omega, c.params()?)?;
    let scan = i_omega_scan(&query, &fit_window())?;
    let f = &scan.fit;
    let mut t = Table::new(&["r", "value", "raw_slope", "exponent", "ratio_variation", "spread", "verdict"]);
    for (r, v) in scan.radii.iter().zip(&scan.values) {
        let verdict: Cell = f.verdict.map(Cell::B).unwrap_or(Cell::S("none".into()));
        t.push(vec![
            (*r).into(),
            (*v).into(),
            f.raw_slope.into(),
            f.exponent.into(),
            f.ratio_variation.into(),
            f.spread.into(),
            verdict,
        ]);
    }
    Ok(t)
}

fn verify_cmd(c: &Common, criteria: &[u32], tols: &[String]) -> Result<(Table, bool), Failure> {
    let mut cfg =
        VerifyConfig { n_radial: c.n_radial, n_angular: c.n_angular, seed: c.seed, ..VerifyConfig::default() };
    if c.alpha.is_some() || c.beta.is_some() {
        let p = c.params()?;
        cfg.params = Some((p.alpha, p.beta));
    }
    for item in tols {
        let (name, value) =
            item.split_once('=').ok_or_else(|| domain(format!("tolerance {item:?} must be name=value")))?;
        cfg.tolerances.set(name.trim(), parse_f64(value)?)?;
    }
    let ids: Vec<u32> = if criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criteria.to_vec() };
    let mut t = Table::new(&["criterion", "name", "check", "value", "relation", "bound", "passed"]);
    let mut all = true;
    for id in ids {
        let outcome = run_criterion(id, &cfg).ok_or_else(|| domain(format!("no criterion {id}; expected 1 to 15")))?;
        eprintln!("{}", outcome.summary());
        all &= outcome.passed();
        for chk in &outcome.checks {
            let rel =
                serde_json::to_value(chk.relation).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            t.push(vec![
                id.into(),
                outcome.name.into(),
                chk.label.clone().into(),
                chk.value.into(),
                rel.into(),
                chk.bound.into(),
                chk.passed.into(),
            ]);
        }
    }
    Ok((t, all))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let c = &cli.common;
    let mut verified = true;
    let table = match &cli.command {
        Command::KernelEval { z_re, z_im, radii, angles, r_max } => {
            kernel_eval(c, Complex64::new(*z_re, *z_im), *radii, *angles, *r_max)?
        }
        Command::ProjectCheck { max_st } => project_check(c, *max_st)?,
        Command::MetricDensity { points, r_max } => metric_density(c, *points, *r_max)?,
        Command::Distance { from_re, from_im, to_re, to_im, graph } => {
            distance_cmd(c, Complex64::new(*from_re, *from_im), Complex64::new(*to_re, *to_im), *graph)?
        }
        Command::Berezin { symbol, points, r_max, theta, nodes, operator } => {
            berezin_cmd(c, symbol, *points, *r_max, *theta, *nodes, *operator)?
        }
        Command::Toeplitz { symbol } => toeplitz_cmd(c, symbol)?,
        Command::CarlesonRatio { measure, radius, rings, angles, r_max } => {
            carleson_cmd(c, measure, *radius, *rings, *angles, *r_max)?
        }
        Command::Iomega { sigma, gamma, omega } => iomega_cmd(c, *sigma, *gamma, *omega)?,
        Command::Verify { criterion, tol } => {
            let (t, ok) = verify_cmd(c, criterion, tol)?;
            verified = ok;
            t
        }
    };
    table.emit(c.out, c.output_file.as_deref())?;
    if verified {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn error_record(kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return error_record("usage", e.to_string().trim_end().to_string()),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => error_record(e.kind(), e.to_string()),
        Err(Failure::Io(e)) => error_record("io", e.to_string()),
        Err(Failure::Verification) => ExitCode::from(2),
    }
}
