//! Weighted k-means and spectral clustering.

use std::fmt;
use std::str::FromStr;

use faer::{c64, MatRef};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::trial_seed;
use crate::graph::{order_cyclically, symmetric_difference_volume, Graph, Partition};
use crate::spectral::{build_representation, eigensystem, EigenSystem, Representation, RepresentationKind};

const MAX_ITER: usize = 300;
const REL_TOL: f64 = 1e-9;
pub const DEFAULT_RESTARTS: usize = 10;

/// How eigenvector rows are scaled before k-means (normalised kinds only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingScaling {
    /// `D^{1/2} F`, as written in the algorithm.
    PaperLiteral,
    /// `D^{-1/2} F`: exact cluster structure maps to coincident points.
    #[default]
    ClusterConstant,
}

impl EmbeddingScaling {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PaperLiteral => "paper_literal",
            Self::ClusterConstant => "cluster_constant",
        }
    }
}

impl fmt::Display for EmbeddingScaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmbeddingScaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_literal" => Ok(Self::PaperLiteral),
            "cluster_constant" => Ok(Self::ClusterConstant),
            _ => Err(Error::params(format!("unknown scaling `{s}`"))),
        }
    }
}

/// Weighted points in `R^dim`; complex coordinates are stored as interleaved
/// `(re, im)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    points: Vec<f64>,
    dim: usize,
    weights: Vec<f64>,
}

impl Embedding {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if dim == 0 || points.len() != weights.len() || points.iter().any(|p| p.len() != dim) {
            return Err(Error::params("points must share a positive dimension and match the weights"));
        }
        if let Some(u) = weights.iter().position(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::params(format!("weight of point {u} must be positive")));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::params("coordinates must be finite"));
        }
        Ok(Self { points: points.concat(), dim, weights })
    }

    /// Rows of `f` scaled by `d(u)^s`, with `s = −1/2`, `1/2` or 0.
    pub fn from_eigenvectors(f: MatRef<'_, c64>, degrees: &[f64], power: f64) -> Result<Self> {
        let points = (0..f.nrows())
            .map(|u| {
                let s = degrees[u].powf(power);
                (0..f.ncols()).flat_map(|j| [f[(u, j)].re * s, f[(u, j)].im * s]).collect()
            })
            .collect();
        Self::new(points, degrees.to_vec())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, u: usize) -> &[f64] {
        &self.points[u * self.dim..(u + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted cluster means for an assignment into `k` clusters.
    pub fn centroids(&self, assignment: &[usize], k: usize) -> Vec<Vec<f64>> {
        let mut sums = vec![vec![0.0; self.dim]; k];
        let mut mass = vec![0.0; k];
        for (u, &c) in assignment.iter().enumerate() {
            let w = self.weights[u];
            mass[c] += w;
            for (s, x) in sums[c].iter_mut().zip(self.point(u)) {
                *s += w * x;
            }
        }
        for (s, m) in sums.iter_mut().zip(&mass) {
            if *m > 0.0 {
                s.iter_mut().for_each(|x| *x /= m);
            }
        }
        sums
    }

    /// `Σ_u w(u)·‖x_u − c_{a(u)}‖²`.
    pub fn cost(&self, assignment: &[usize], centroids: &[Vec<f64>]) -> f64 {
        assignment
            .iter()
            .enumerate()
            .map(|(u, &c)| self.weights[u] * dist2(self.point(u), &centroids[c]))
            .sum()
    }

    /// Cost of an assignment with its optimal (weighted-mean) centroids.
    pub fn objective(&self, assignment: &[usize], k: usize) -> f64 {
        self.cost(assignment, &self.centroids(assignment, k))
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    pub assignment: Partition,
    pub centroids: Vec<Vec<f64>>,
    pub objective: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    /// Objective after each Lloyd iteration of the winning restart.
    pub history: Vec<f64>,
}

/// Best of `restarts` runs of weighted k-means++ seeding followed by Lloyd
/// iterations. Restart `r` is seeded with `trial_seed(seed, r)`.
pub fn weighted_kmeans(e: &Embedding, k: usize, restarts: usize, seed: u64) -> Result<KMeansResult> {
    if k == 0 || k > e.len() {
        return Err(Error::params(format!("k = {k} must be in 1..={}", e.len())));
    }
    let restarts = restarts.max(1);
    let run = |r: usize| lloyd(e, k, trial_seed(seed, r as u64));
    #[cfg(feature = "parallel")]
    let runs: Vec<Run> = {
        use rayon::prelude::*;
        (0..restarts).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Run> = (0..restarts).map(run).collect();

    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.objective < runs[best].objective {
            best = i;
        }
    }
    let win = runs.into_iter().nth(best).expect("at least one restart");
    Ok(KMeansResult {
        assignment: Partition::new(k, win.assignment)?,
        centroids: win.centroids,
        objective: win.objective,
        iterations: win.history.len(),
        restarts_used: restarts,
        history: win.history,
    })
}

struct Run {
    assignment: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    objective: f64,
    history: Vec<f64>,
}

fn seed_centres(e: &Embedding, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = e.len();
    let mut chosen = vec![false; n];
    let pick = |scores: &[f64], rng: &mut ChaCha8Rng, chosen: &[bool]| -> usize {
        let total: f64 = scores.iter().sum();
        if total > 0.0 {
            let mut t = rng.random::<f64>() * total;
            for (u, s) in scores.iter().enumerate() {
                if *s > 0.0 {
                    if t < *s {
                        return u;
                    }
                    t -= s;
                }
            }
            return scores.iter().rposition(|s| *s > 0.0).unwrap_or(0);
        }
        let free: Vec<usize> = (0..n).filter(|&u| !chosen[u]).collect();
        free[rng.random_range(0..free.len())]
    };
    let first = pick(e.weights(), rng, &chosen);
    chosen[first] = true;
    let mut centres = vec![e.point(first).to_vec()];
    let mut d2: Vec<f64> = (0..n).map(|u| dist2(e.point(u), &centres[0])).collect();
    while centres.len() < k {
        let scores: Vec<f64> = (0..n).map(|u| if chosen[u] { 0.0 } else { e.weights()[u] * d2[u] }).collect();
        let u = pick(&scores, rng, &chosen);
        chosen[u] = true;
        centres.push(e.point(u).to_vec());
        let c = centres.last().expect("just pushed");
        for (v, d) in d2.iter_mut().enumerate() {
            *d = d.min(dist2(e.point(v), c));
        }
    }
    centres
}

fn nearest(x: &[f64], centres: &[Vec<f64>], current: Option<usize>) -> usize {
    let mut best = current.unwrap_or(0);
    let mut best_d = dist2(x, &centres[best]);
    for (c, centre) in centres.iter().enumerate() {
        let d = dist2(x, centre);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

fn lloyd(e: &Embedding, k: usize, seed: u64) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centres(e, k, &mut rng);
    let mut assignment: Vec<usize> = (0..e.len()).map(|u| nearest(e.point(u), &centroids, None)).collect();
    let mut history: Vec<f64> = Vec::new();
    let mut prev = f64::INFINITY;
    for iter in 0..MAX_ITER {
        if iter > 0 {
            let mut changed = false;
            for u in 0..e.len() {
                let c = nearest(e.point(u), &centroids, Some(assignment[u]));
                changed |= c != assignment[u];
                assignment[u] = c;
            }
            if !changed {
                break;
            }
        }
        repair_empty(e, k, &mut assignment, &centroids);
        centroids = e.centroids(&assignment, k);
        let obj = e.cost(&assignment, &centroids);
        assert!(
            obj <= prev * (1.0 + 1e-12) + 1e-300,
            "k-means objective increased from {prev} to {obj}"
        );
        history.push(obj);
        if prev.is_finite() && prev - obj <= REL_TOL * prev {
            break;
        }
        prev = obj;
    }
    let objective = *history.last().expect("at least one iteration");
    Run { assignment, centroids, objective, history }
}

/// Gives each empty cluster the point farthest (by weighted squared
/// distance) from its centre among clusters with at least two points.
fn repair_empty(e: &Embedding, k: usize, assignment: &mut [usize], centroids: &[Vec<f64>]) {
    let mut sizes = vec![0usize; k];
    for &c in assignment.iter() {
        sizes[c] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (u, &c) in assignment.iter().enumerate() {
            if sizes[c] < 2 {
                continue;
            }
            let d = e.weights()[u] * dist2(e.point(u), &centroids[c]);
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((u, d));
            }
        }
        let (u, _) = best.expect("k <= n leaves a cluster with two points");
        sizes[assignment[u]] -= 1;
        assignment[u] = empty;
        sizes[empty] = 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterOptions {
    pub k: usize,
    /// Number of eigenvectors embedded.
    pub num_vectors: usize,
    pub kind: RepresentationKind,
    /// Root-of-unity order for digraph kinds.
    pub root_order: usize,
    pub scaling: EmbeddingScaling,
    pub restarts: usize,
    pub seed: u64,
}

impl ClusterOptions {
    /// `k` vectors for undirected graphs; one vector and root order `k` for
    /// digraphs.
    pub fn defaults(k: usize, directed: bool) -> Self {
        Self {
            k,
            num_vectors: if directed { 1 } else { k },
            kind: RepresentationKind::default_for(directed),
            root_order: k.max(1),
            scaling: EmbeddingScaling::default(),
            restarts: DEFAULT_RESTARTS,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralClustering {
    pub partition: Partition,
    pub kmeans: KMeansResult,
    pub eigensystem: EigenSystem,
    pub representation: Representation,
}

/// The embedding the clustering step uses for an eigenvector block.
pub fn embed(g: &Graph, f: MatRef<'_, c64>, kind: RepresentationKind, scaling: EmbeddingScaling) -> Result<Embedding> {
    let power = match (kind.is_normalized(), scaling) {
        (false, _) => 0.0,
        (true, EmbeddingScaling::ClusterConstant) => -0.5,
        (true, EmbeddingScaling::PaperLiteral) => 0.5,
    };
    g.require_positive_degrees()?;
    Embedding::from_eigenvectors(f, g.degrees(), power)
}

/// Embeds the bottom `num_vectors` eigenvectors and clusters them. For
/// digraphs the clusters are then ordered so edges run `S_i → S_{i+1}`.
pub fn spectral_cluster(g: &Graph, opts: &ClusterOptions) -> Result<SpectralClustering> {
    let n = g.n_vertices();
    if opts.k < 1 || opts.k > n {
        return Err(Error::params(format!("k = {} must be in 1..={n}", opts.k)));
    }
    if opts.num_vectors < 1 || opts.num_vectors > n {
        return Err(Error::params(format!("number of eigenvectors must be in 1..={n}")));
    }
    let representation = build_representation(g, opts.kind, opts.root_order)?;
    let want = (opts.k + 1).max(opts.num_vectors).min(n);
    let es = eigensystem(&representation, Some(want))?;
    let e = embed(g, es.block(opts.num_vectors), opts.kind, opts.scaling)?;
    let kmeans = weighted_kmeans(&e, opts.k, opts.restarts, opts.seed)?;
    let mut partition = kmeans.assignment.clone();
    if g.is_directed() && opts.k >= 2 {
        // initial order by decreasing phase of the first coordinate
        let angle = |c: &Vec<f64>| c[1].atan2(c[0]);
        let mut order: Vec<usize> = (0..opts.k).collect();
        order.sort_by(|&a, &b| angle(&kmeans.centroids[b]).total_cmp(&angle(&kmeans.centroids[a])));
        partition = order_cyclically(g, &partition.reorder(&order)?)?;
    }
    Ok(SpectralClustering { partition, kmeans, eigensystem: es, representation })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    pub sym_diff_vol: f64,
    /// `sym_diff_vol / vol(V)`.
    pub fraction: f64,
}

pub fn evaluate_recovery(g: &Graph, found: &Partition, truth: &Partition) -> Result<Recovery> {
    let sym_diff_vol = symmetric_difference_volume(g, found, truth)?;
    let vol = g.total_volume();
    let fraction = if vol > 0.0 { sym_diff_vol / vol } else { 0.0 };
    Ok(Recovery { sym_diff_vol, fraction })
}
