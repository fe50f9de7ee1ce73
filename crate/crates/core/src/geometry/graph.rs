use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::curves::integrate_segments;
use super::density::MetricDensityEval;
use super::geodesic::GraphEstimate;
use crate::error::{Error, Result};
use crate::params::SpaceParams;

pub const DEFAULT_GRID: (usize, usize) = (400, 512);

/// (ring step, angular step) pairs of the 16-neighbour stencil.
const STENCIL: [(i32, i32); 16] = [
    (0, 1),
    (0, -1),
    (1, 0),
    (-1, 0),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 2),
    (1, -2),
    (-1, 2),
    (-1, -2),
    (2, 1),
    (2, -1),
    (-2, 1),
    (-2, -1),
];

/// Weighted polar graph: a center node plus rings i = 1..=n_r at radius
/// i·r_max/n_r with n_θ nodes each.  Edge weights are ρ(midpoint) times the
/// chord length; by rotation invariance they depend only on the ring and the
/// stencil entry.
#[derive(Debug, Clone)]
pub struct MetricGrid {
    md: MetricDensityEval,
    n_r: usize,
    n_theta: usize,
    r_max: f64,
    weights: Vec<[f64; 16]>,
    center_weight: f64,
}

#[derive(Clone, Copy, PartialEq)]
struct State(f64, usize);

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MetricGrid {
    pub fn new(params: &SpaceParams, n_r: usize, n_theta: usize, r_max: f64) -> Result<Self> {
        if n_r < 4 || n_theta < 8 || !(r_max > 0.0 && r_max < 1.0) {
            return Err(Error::Domain("grid needs n_r >= 4, n_theta >= 8 and 0 < r_max < 1".into()));
        }
        let md = MetricDensityEval::new(params)?;
        let h = r_max / n_r as f64;
        let dth = 2.0 * PI / n_theta as f64;
        let mut weights = Vec::with_capacity(n_r + 1);
        for i in 0..=n_r {
            let mut row = [f64::INFINITY; 16];
            for (k, &(di, dj)) in STENCIL.iter().enumerate() {
                let i2 = i as i64 + di as i64;
                if i == 0 || i2 < 1 || i2 > n_r as i64 {
                    continue;
                }
                let a = Complex64::from_polar(i as f64 * h, 0.0);
                let b = Complex64::from_polar(i2 as f64 * h, dj as f64 * dth);
                row[k] = md.rho(0.5 * (a + b))? * (b - a).norm();
            }
            weights.push(row);
        }
        let center_weight = md.rho_r(0.5 * h)? * h;
        Ok(MetricGrid { md, n_r, n_theta, r_max, weights, center_weight })
    }

    pub fn resolution(&self) -> (usize, usize) {
        (self.n_r, self.n_theta)
    }

    /// The grid with both resolutions doubled.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.md.params(), 2 * self.n_r, 2 * self.n_theta, self.r_max)
    }

    fn node(&self, i: usize, j: usize) -> usize {
        1 + (i - 1) * self.n_theta + j
    }

    fn polar(&self, node: usize) -> (usize, usize) {
        let k = node - 1;
        (k / self.n_theta + 1, k % self.n_theta)
    }

    fn position(&self, node: usize) -> Complex64 {
        if node == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let (i, j) = self.polar(node);
        Complex64::from_polar(i as f64 * self.r_max / self.n_r as f64, 2.0 * PI * j as f64 / self.n_theta as f64)
    }

    /// Grid nodes near p, with straight-edge weights from p.
    fn attach(&self, p: Complex64) -> Result<Vec<(usize, f64)>> {
        let h = self.r_max / self.n_r as f64;
        let dth = 2.0 * PI / self.n_theta as f64;
        let ri = (p.norm() / h).floor() as i64;
        let tj = (p.arg().rem_euclid(2.0 * PI) / dth).floor() as i64;
        let mut out = Vec::new();
        let mut push = |node: usize| -> Result<()> {
            let q = self.position(node);
            out.push((node, self.md.rho(0.5 * (p + q))? * (q - p).norm()));
            Ok(())
        };
        if ri <= 1 {
            push(0)?;
        }
        for i in (ri - 1).max(1)..=(ri + 2).min(self.n_r as i64) {
            for dj in -1..=2 {
                let j = (tj + dj).rem_euclid(self.n_theta as i64) as usize;
                push(self.node(i as usize, j))?;
            }
        }
        Ok(out)
    }

    /// Shortest-path distance from p to q.
    pub fn distance(&self, p: Complex64, q: Complex64) -> Result<f64> {
        self.shortest_path(p, q).map(|v| v.0)
    }

    /// Shortest-path distance and the path itself, from p to q.
    pub fn shortest_path(&self, p: Complex64, q: Complex64) -> Result<(f64, Vec<Complex64>)> {
        if !(p.norm() <= self.r_max && q.norm() <= self.r_max) {
            return Err(Error::Domain(format!("points must lie within the grid radius {}", self.r_max)));
        }
        if p == q {
            return Ok((0.0, vec![p]));
        }
        let total = 1 + self.n_r * self.n_theta;
        let mut dist = vec![f64::INFINITY; total];
        let mut prev = vec![usize::MAX; total];
        let mut heap = BinaryHeap::new();
        for (node, w) in self.attach(p)? {
            if w < dist[node] {
                dist[node] = w;
                heap.push(State(w, node));
            }
        }
        let targets = self.attach(q)?;
        let mut pending = targets.len();
        let mut hit = vec![false; total];
        for &(node, _) in &targets {
            hit[node] = true;
        }
        while let Some(State(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if hit[u] {
                hit[u] = false;
                pending -= 1;
                if pending == 0 {
                    break;
                }
            }
            self.relax(u, d, &mut dist, &mut prev, &mut heap);
        }
        let (end, best) = targets
            .iter()
            .map(|&(n, w)| (n, dist[n] + w))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("targets are non-empty");
        if (p - q).norm() < 3.0 * self.r_max / self.n_r as f64 {
            let direct = self.md.rho(0.5 * (p + q))? * (p - q).norm();
            if direct <= best {
                return Ok((direct, vec![p, q]));
            }
        }
        let mut path = vec![q];
        let mut node = end;
        while node != usize::MAX {
            path.push(self.position(node));
            node = prev[node];
        }
        path.push(p);
        path.reverse();
        Ok((best, path))
    }

    fn relax(&self, u: usize, d: f64, dist: &mut [f64], prev: &mut [usize], heap: &mut BinaryHeap<State>) {
        let mut visit = |v: usize, w: f64| {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                prev[v] = u;
                heap.push(State(nd, v));
            }
        };
        if u == 0 {
            for j in 0..self.n_theta {
                visit(self.node(1, j), self.center_weight);
            }
            return;
        }
        let (i, j) = self.polar(u);
        if i == 1 {
            visit(0, self.center_weight);
        }
        for (k, &(di, dj)) in STENCIL.iter().enumerate() {
            let w = self.weights[i][k];
            if w.is_finite() {
                let i2 = (i as i64 + di as i64) as usize;
                let j2 = (j as i64 + dj as i64).rem_euclid(self.n_theta as i64) as usize;
                visit(self.node(i2, j2), w);
            }
        }
    }
}

/// Graph distance on `grid` and on its refinement, plus the length of the
/// fine path after relaxation.
pub fn graph_distance(grid: &MetricGrid, p: Complex64, q: Complex64) -> Result<GraphEstimate> {
    let coarse = grid.distance(p, q)?;
    let (fine, path) = grid.refined()?.shortest_path(p, q)?;
    let relaxed = if path.len() > 2 {
        let path = relax_path(&grid.md, &path)?;
        integrate_segments(&path, |z| grid.md.rho(z))?
    } else {
        fine
    };
    Ok(GraphEstimate { coarse, fine, extrapolated: 2.0 * fine - coarse, relaxed })
}

const RELAX_LEVELS: [usize; 4] = [8, 16, 32, 64];
const RELAX_SWEEPS: usize = 200;
const RELAX_PASSES: usize = 4;

/// Resamples `path` to equal Euclidean steps.
fn resample(path: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut cum = vec![0.0];
    for w in path.windows(2) {
        cum.push(cum.last().unwrap() + (w[1] - w[0]).norm());
    }
    let total = *cum.last().unwrap();
    let mut out = Vec::with_capacity(k + 1);
    let mut seg = 0;
    for i in 0..=k {
        let s = total * i as f64 / k as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < s {
            seg += 1;
        }
        let span = cum[seg + 1] - cum[seg];
        let t = if span > 0.0 { ((s - cum[seg]) / span).clamp(0.0, 1.0) } else { 0.0 };
        out.push(path[seg] + (path[seg + 1] - path[seg]) * t);
    }
    out
}

/// Straightens a lattice path: on successively finer resamplings, each
/// interior vertex takes Newton steps normal to its chord on the
/// two-segment midpoint length, until the sweeps stop moving.  The endpoints
/// stay fixed, so the result is an admissible curve whose length bounds the
/// distance from above.
pub fn relax_path(md: &MetricDensityEval, path: &[Complex64]) -> Result<Vec<Complex64>> {
    let seg = |a: Complex64, b: Complex64| -> Result<f64> { Ok(md.rho(0.5 * (a + b))? * (b - a).norm()) };
    let mut pts = path.to_vec();
    for &k in &RELAX_LEVELS {
        for _ in 0..RELAX_PASSES {
            pts = resample(&pts, k);
            let mut moved = 0.0f64;
            for _ in 0..RELAX_SWEEPS {
                moved = 0.0;
                for i in 1..k {
                    let (a, b) = (pts[i - 1], pts[i + 1]);
                    let chord = b - a;
                    if chord.norm() == 0.0 {
                        continue;
                    }
                    // Tangential moves only redistribute vertices; move along the normal.
                    let n = Complex64::new(-chord.im, chord.re) / chord.norm();
                    let h = 1e-3 * chord.norm();
                    let local = |t: f64| -> Result<f64> {
                        let x = pts[i] + n * t;
                        Ok(seg(a, x)? + seg(x, b)?)
                    };
                    let (f0, fp, fm) = (local(0.0)?, local(h)?, local(-h)?);
                    let curv = (fp - 2.0 * f0 + fm) / (h * h);
                    if !(curv > 0.0) {
                        continue;
                    }
                    let t = (-(fp - fm) / (2.0 * h) / curv).clamp(-0.25 * chord.norm(), 0.25 * chord.norm());
                    if local(t)? < f0 {
                        pts[i] += n * t;
                        moved = moved.max(t.abs());
                    }
                }
                if moved < 1e-12 {
                    break;
                }
            }
            if moved < 1e-12 {
                break;
            }
        }
    }
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_graph_distance() {
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        let g = MetricGrid::new(&p, 100, 128, 0.99).unwrap();
        let d = g.distance(Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)).unwrap();
        assert!((d - 2f64.sqrt() * 0.5f64.atanh()).abs() < 1e-3, "{d}");
        let a = Complex64::new(0.3, 0.4);
        let b = Complex64::new(-0.5, 0.1);
        assert!((g.distance(a, b).unwrap() - g.distance(b, a).unwrap()).abs() < 1e-9);
    }
}
