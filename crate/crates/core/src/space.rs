//! Finite metric measure spaces and their doubling diagnostics.

use std::path::Path;

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack allowed in the triangle inequality at load time.
pub const TRIANGLE_TOL: f64 = 1e-12;

/// Points sorted by distance from one center, with running weight sums.
#[derive(Debug, Clone)]
struct Neighbors {
    order: Vec<usize>,
    dist: Vec<f64>,
    // cum[k] = weight of the first k points in `order`
    cum: Vec<f64>,
}

/// A finite metric measure space `(Ω, d, μ)` with atomic measure.
#[derive(Debug, Clone)]
pub struct Space {
    n: usize,
    dist: Vec<f64>,
    weight: Vec<f64>,
    total_mass: f64,
    nbrs: Vec<Neighbors>,
}

/// Geometric summary of a space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceDiagnostics {
    pub n: usize,
    pub total_mass: f64,
    pub c_mu: f64,
    pub q_dim: f64,
    pub b: f64,
    pub diameter: f64,
    pub r_min: f64,
}

/// On-disk description of a space.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceFile {
    Matrix {
        dist: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
    Coords {
        coords: Vec<Vec<f64>>,
        #[serde(default)]
        metric: Metric,
        #[serde(default)]
        edges: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Euclidean,
    Graph,
}

impl Space {
    /// Builds a space from an explicit distance matrix, checking that it is
    /// a metric (symmetry, zero diagonal, separation, triangle inequality).
    pub fn from_matrix(dist: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Space> {
        let space = Self::assemble(dist, weights)?;
        space.check_triangle()?;
        Ok(space)
    }

    /// Like [`Space::from_matrix`] but skips the O(n³) triangle check. Use
    /// only for matrices that are metric by construction.
    pub fn from_metric_matrix(dist: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Space> {
        Self::assemble(dist, weights)
    }

    fn assemble(rows: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Space> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidSpace("space has no points".into()));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpace(format!(
                "distance matrix must be {n}x{n} to match {n} weights"
            )));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidSpace(format!("weight of point {i} is {w}, must be positive")));
            }
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in &rows {
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidSpace(format!("d({i},{i}) = {} is not zero", dist[i * n + i])));
            }
            for j in (i + 1)..n {
                let (a, b) = (dist[i * n + j], dist[j * n + i]);
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::InvalidSpace(format!("d({i},{j}) = {a} must be positive and finite")));
                }
                if a != b {
                    return Err(Error::InvalidSpace(format!("asymmetric distance at ({i},{j}): {a} vs {b}")));
                }
            }
        }
        let total_mass = weights.iter().sum();
        let nbrs = (0..n)
            .map(|x| {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| dist[x * n + a].total_cmp(&dist[x * n + b]).then(a.cmp(&b)));
                let d: Vec<f64> = order.iter().map(|&y| dist[x * n + y]).collect();
                let mut cum = Vec::with_capacity(n + 1);
                cum.push(0.0);
                let mut acc = 0.0;
                for &y in &order {
                    acc += weights[y];
                    cum.push(acc);
                }
                Neighbors { order, dist: d, cum }
            })
            .collect();
        Ok(Space { n, dist, weight: weights, total_mass, nbrs })
    }

    fn check_triangle(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let dij = self.d(i, j);
                for k in 0..n {
                    if self.d(i, k) > dij + self.d(j, k) + TRIANGLE_TOL {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality violated at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses a space description (see [`SpaceFile`]).
    pub fn from_file_spec(spec: SpaceFile) -> Result<Space> {
        match spec {
            SpaceFile::Matrix { dist, weights } => Space::from_matrix(dist, weights),
            SpaceFile::Coords { coords, metric, edges, weights } => {
                if coords.len() != weights.len() {
                    return Err(Error::InvalidSpace(format!(
                        "{} coordinates but {} weights",
                        coords.len(),
                        weights.len()
                    )));
                }
                match metric {
                    Metric::Euclidean => Space::from_metric_matrix(euclidean_matrix(&coords)?, weights),
                    Metric::Graph => {
                        let mut list = Vec::with_capacity(edges.len());
                        for e in &edges {
                            let (i, j) = match e.as_slice() {
                                [i, j] | [i, j, _] => (*i as usize, *j as usize),
                                _ => {
                                    return Err(Error::InvalidSpace(format!(
                                        "edge {e:?} must be [i, j] or [i, j, length]"
                                    )))
                                }
                            };
                            if i >= coords.len() || j >= coords.len() {
                                return Err(Error::InvalidSpace(format!("edge ({i},{j}) out of range")));
                            }
                            let len = match e.as_slice() {
                                [_, _, l] => *l,
                                _ => euclid(&coords[i], &coords[j]),
                            };
                            list.push((i, j, len));
                        }
                        Space::from_metric_matrix(graph_matrix(coords.len(), &list)?, weights)
                    }
                }
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Space> {
        let spec: SpaceFile = serde_json::from_str(text)?;
        Space::from_file_spec(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Space> {
        Space::from_json(&std::fs::read_to_string(path)?)
    }

    /// The explicit matrix form of this space.
    pub fn to_file_spec(&self) -> SpaceFile {
        SpaceFile::Matrix {
            dist: (0..self.n).map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec()).collect(),
            weights: self.weight.clone(),
        }
    }

    /// Path graph on `n` points with edges of length `spacing`.
    pub fn path(n: usize, spacing: f64, weights: Vec<f64>) -> Result<Space> {
        let dist = (0..n).map(|i| (0..n).map(|j| i.abs_diff(j) as f64 * spacing).collect()).collect();
        Space::from_metric_matrix(dist, weights)
    }

    /// Path graph with unit edges and unit weights.
    pub fn unit_path(n: usize) -> Space {
        Space::path(n, 1.0, vec![1.0; n]).expect("valid path")
    }

    /// `rows × cols` lattice with the Euclidean metric of the plane.
    pub fn grid(rows: usize, cols: usize, spacing: f64, weights: Vec<f64>) -> Result<Space> {
        if cols == 0 {
            return Err(Error::InvalidSpace("grid has no columns".into()));
        }
        let n = rows * cols;
        let lattice = |a: usize, b: usize| {
            let (di, dj) = ((a / cols).abs_diff(b / cols) as f64, (a % cols).abs_diff(b % cols) as f64);
            spacing * (di * di + dj * dj).sqrt()
        };
        let dist = (0..n).map(|a| (0..n).map(|b| lattice(a, b)).collect()).collect();
        Space::from_metric_matrix(dist, weights)
    }

    /// Random geometric graph: `n` uniform points in the unit square, edges
    /// between points closer than `radius`, shortest-path metric, weights
    /// uniform in `[0.5, 1.5)`. Resamples until the graph is connected.
    pub fn random_geometric(n: usize, radius: f64, seed: u64) -> Result<Space> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = euclid(&pts[i], &pts[j]);
                    if d < radius {
                        edges.push((i, j, d));
                    }
                }
            }
            let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
            if let Ok(m) = graph_matrix(n, &edges) {
                return Space::from_metric_matrix(m, weights);
            }
        }
        Err(Error::InvalidSpace(format!("no connected geometric graph with n={n}, radius={radius}")))
    }

    /// Same metric, every weight multiplied by `lambda`.
    pub fn scale_weights(&self, lambda: f64) -> Result<Space> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("weight scale {lambda} must be positive")));
        }
        let mut s = self.clone();
        for w in &mut s.weight {
            *w *= lambda;
        }
        for nb in &mut s.nbrs {
            for c in &mut nb.cum {
                *c *= lambda;
            }
        }
        s.total_mass = s.weight.iter().sum();
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> f64 {
        self.dist[x * self.n + y]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Number of points in `B(x, r)`; they are the first entries of
    /// [`Space::by_distance`].
    #[inline]
    pub fn ball_len(&self, x: usize, r: f64) -> usize {
        self.nbrs[x].dist.partition_point(|&d| d < r)
    }

    /// Points ordered by distance from `x` (ties by index); `x` comes first.
    pub fn by_distance(&self, x: usize) -> &[usize] {
        &self.nbrs[x].order
    }

    /// The open ball `B(x, r) = {y : d(x,y) < r}` as sorted indices.
    pub fn ball(&self, x: usize, r: f64) -> Vec<usize> {
        let k = self.ball_len(x, r);
        let mut v = self.nbrs[x].order[..k].to_vec();
        v.sort_unstable();
        v
    }

    /// `μ(B(x, r))`.
    #[inline]
    pub fn ball_mass(&self, x: usize, r: f64) -> f64 {
        self.nbrs[x].cum[self.ball_len(x, r)]
    }

    pub fn diameter(&self) -> f64 {
        self.nbrs.iter().map(|nb| *nb.dist.last().unwrap()).fold(0.0, f64::max)
    }

    /// Smallest positive distance (0 for a one-point space).
    pub fn r_min(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.nbrs.iter().map(|nb| nb.dist[1]).fold(f64::INFINITY, f64::min)
    }

    /// Sorted distinct positive distances. Every ball is constant in `r` on
    /// `(d_k, d_{k+1}]`.
    pub fn distinct_distances(&self) -> Vec<f64> {
        let mut v: Vec<f64> = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                v.push(self.d(i, j));
            }
        }
        sort_dedup(&mut v);
        v
    }

    /// Sorted distinct values of `d(x,y)` and `d(x,y)/2` over all pairs.
    pub fn critical_radii(&self) -> Vec<f64> {
        let mut v = self.distinct_distances();
        let halves: Vec<f64> = v.iter().map(|d| d / 2.0).collect();
        v.extend(halves);
        sort_dedup(&mut v);
        v
    }

    /// Doubling constant `C_μ = sup μ(B(x,2r)) / μ(B(x,r))`.
    ///
    /// For a fixed center the ratio is constant on each interval
    /// `(c_i, c_{i+1}]` between consecutive values of `{d, d/2}` over the
    /// distances `d` from that center, so evaluating at those values is exact.
    pub fn doubling_constant(&self) -> f64 {
        let mut c: f64 = 1.0;
        for x in 0..self.n {
            let nb = &self.nbrs[x];
            for &d in &nb.dist[1..] {
                for r in [d, d / 2.0] {
                    c = c.max(self.ball_mass(x, 2.0 * r) / self.ball_mass(x, r));
                }
            }
        }
        c
    }

    /// `Q = log2 C_μ`.
    pub fn upper_dimension(&self) -> f64 {
        self.doubling_constant().log2()
    }

    /// `b = min_x μ(B(x, 1))`.
    pub fn noncollapsing_constant(&self) -> f64 {
        (0..self.n).map(|x| self.ball_mass(x, 1.0)).fold(f64::INFINITY, f64::min)
    }

    pub fn diagnostics(&self) -> SpaceDiagnostics {
        let c_mu = self.doubling_constant();
        SpaceDiagnostics {
            n: self.n,
            total_mass: self.total_mass,
            c_mu,
            q_dim: c_mu.log2(),
            b: self.noncollapsing_constant(),
            diameter: self.diameter(),
            r_min: self.r_min(),
        }
    }

    /// Largest `c` with `μ(B(x,r)) ≥ c r^Q` for all `x` and `0 < r ≤ 1`.
    ///
    /// `μ(B(x,r))` is constant on `(d_k, d_{k+1}]` while `r^Q` grows, so the
    /// minimum is attained at the distances themselves and at `r = 1`.
    pub fn lower_mass_constant(&self, q_dim: f64) -> f64 {
        let mut c = f64::INFINITY;
        for x in 0..self.n {
            for &d in self.nbrs[x].dist[1..].iter().filter(|&&d| d <= 1.0).chain([1.0].iter()) {
                c = c.min(self.ball_mass(x, d) / d.powf(q_dim));
            }
        }
        c
    }

    /// Checks `μ(B(x,r)) ≥ (r/4R)^Q μ(B(y,R))` for all centers `x, y` and
    /// radii `r ≤ R` from `radii` with `B(x,r) ⊆ B(y,R)`. Returns the
    /// number of checked configurations and the violations found.
    pub fn iterated_doubling_check(&self, q_dim: f64, radii: &[f64]) -> (usize, Vec<(usize, usize, f64, f64)>) {
        let mut checked = 0;
        let mut bad = Vec::new();
        for x in 0..self.n {
            for &r in radii {
                let k = self.ball_len(x, r);
                let members = &self.nbrs[x].order[..k];
                let mx = self.ball_mass(x, r);
                for y in 0..self.n {
                    // B(x,r) ⊆ B(y,R) iff R exceeds the farthest member from y
                    let reach = members.iter().map(|&z| self.d(y, z)).fold(0.0, f64::max);
                    for &big in radii {
                        if big < r || big <= reach {
                            continue;
                        }
                        checked += 1;
                        let rhs = (r / (4.0 * big)).powf(q_dim) * self.ball_mass(y, big);
                        if mx < rhs * (1.0 - 1e-12) {
                            bad.push((x, y, r, big));
                        }
                    }
                }
            }
        }
        (checked, bad)
    }
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn euclidean_matrix(coords: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let dim = coords.first().map_or(0, |c| c.len());
    if coords.iter().any(|c| c.len() != dim) {
        return Err(Error::InvalidSpace("coordinates have mixed dimensions".into()));
    }
    Ok(coords.iter().map(|a| coords.iter().map(|b| euclid(a, b)).collect()).collect())
}

fn graph_matrix(n: usize, edges: &[(usize, usize, f64)]) -> Result<Vec<Vec<f64>>> {
    let mut g = UnGraph::<(), f64>::with_capacity(n, edges.len());
    for _ in 0..n {
        g.add_node(());
    }
    for &(i, j, len) in edges {
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::InvalidSpace(format!("edge ({i},{j}) has length {len}")));
        }
        g.add_edge(NodeIndex::new(i), NodeIndex::new(j), len);
    }
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        let sp = dijkstra(&g, NodeIndex::new(i), None, |e| *e.weight());
        if sp.len() != n {
            return Err(Error::InvalidSpace(format!("graph is disconnected: point {i} reaches {} of {n}", sp.len())));
        }
        for (node, d) in sp {
            row[node.index()] = d;
        }
    }
    // shortest paths are symmetric mathematically; force it numerically
    for i in 0..n {
        for j in (i + 1)..n {
            let d = m[i][j].min(m[j][i]);
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    Ok(m)
}
