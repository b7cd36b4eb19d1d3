//! Seeded synthetic graphs and deterministic fixtures.
//!
//! Every random generator draws from ChaCha8 (`rand_chacha::ChaCha8Rng`)
//! seeded with a `u64`, so a `(params, seed)` pair reproduces the same graph
//! on every platform. Per-trial seeds come from [`trial_seed`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

/// Seed for trial `trial` of an experiment with `master` seed (SplitMix64
/// finaliser over both inputs).
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(master) ^ trial.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_matrix(name: &str, m: &[Vec<f64>], k: usize, symmetric: bool) -> Result<()> {
    if m.len() != k || m.iter().any(|row| row.len() != k) {
        return Err(Error::params(format!("{name} must be {k}x{k}")));
    }
    for i in 0..k {
        for j in 0..k {
            let x = m[i][j];
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::params(format!("{name}[{i}][{j}] = {x} outside [0, 1]")));
            }
            if symmetric && (x - m[j][i]).abs() > 1e-12 {
                return Err(Error::params(format!("{name} is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub k: usize,
    /// Vertices per block.
    pub n: usize,
    pub probabilities: Vec<Vec<f64>>,
}

impl SbmParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.n < 1 {
            return Err(Error::params("SBM needs k >= 1 and n >= 1"));
        }
        check_matrix("P", &self.probabilities, self.k, true)
    }

    /// Two-parameter model: `p` inside blocks, `q` between them.
    pub fn planted(k: usize, n: usize, p: f64, q: f64) -> Self {
        let probabilities =
            (0..k).map(|i| (0..k).map(|j| if i == j { p } else { q }).collect()).collect();
        Self { k, n, probabilities }
    }

    /// Four blocks in two strongly linked pairs: 0.5 inside blocks, 0.4
    /// between blocks 0–1 and 2–3, 0.1 elsewhere.
    pub fn hierarchical_pairs(n: usize) -> Self {
        let mut p = Self::planted(4, n, 0.5, 0.1);
        for (a, b) in [(0, 1), (2, 3)] {
            p.probabilities[a][b] = 0.4;
            p.probabilities[b][a] = 0.4;
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DsbmParams {
    pub k: usize,
    pub n: usize,
    pub probabilities: Vec<Vec<f64>>,
    /// `orientation[i][j]`: probability an `S_i`–`S_j` edge points `i → j`.
    pub orientation: Vec<Vec<f64>>,
}

impl DsbmParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.n < 1 {
            return Err(Error::params("DSBM needs k >= 1 and n >= 1"));
        }
        check_matrix("P", &self.probabilities, self.k, true)?;
        check_matrix("F", &self.orientation, self.k, false)?;
        for i in 0..self.k {
            for j in 0..self.k {
                let s = self.orientation[i][j] + self.orientation[j][i];
                if (s - 1.0).abs() > 1e-12 {
                    return Err(Error::params(format!("F[{i}][{j}] + F[{j}][{i}] = {s}, expected 1")));
                }
            }
        }
        Ok(())
    }

    /// Four clusters along a directed path with noise level `eps`.
    pub fn path4(n: usize, eps: f64) -> Self {
        let e = eps;
        Self {
            k: 4,
            n,
            probabilities: vec![
                vec![e, 1.0, e, e],
                vec![1.0, e, 1.0, e],
                vec![e, 1.0, e, 1.0],
                vec![e, e, 1.0, e],
            ],
            orientation: vec![
                vec![0.5, 1.0, 0.5, 0.5],
                vec![0.0, 0.5, 1.0, 0.5],
                vec![0.5, 0.0, 0.5, 1.0],
                vec![0.5, 0.5, 0.0, 0.5],
            ],
        }
    }

    /// Four clusters along a directed cycle with noise level `eps`.
    pub fn cycle4(n: usize, eps: f64) -> Self {
        let e = eps;
        Self {
            k: 4,
            n,
            probabilities: vec![
                vec![e, 1.0, e, 1.0],
                vec![1.0, e, 1.0, e],
                vec![e, 1.0, e, 1.0],
                vec![1.0, e, 1.0, e],
            ],
            orientation: vec![
                vec![0.5, 1.0, 0.5, 0.0],
                vec![0.0, 0.5, 1.0, 0.5],
                vec![0.5, 0.0, 0.5, 1.0],
                vec![1.0, 0.5, 0.0, 0.5],
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricParams {
    pub centres: Vec<[f64; 2]>,
    pub points_per_centre: usize,
    pub std_dev: f64,
    pub threshold: f64,
}

impl GeometricParams {
    /// Gaussians centred at (0,0), (0,5), (d,0), (d,5).
    pub fn four_gaussians(d: f64, points_per_centre: usize, std_dev: f64, threshold: f64) -> Self {
        Self {
            centres: vec![[0.0, 0.0], [0.0, 5.0], [d, 0.0], [d, 5.0]],
            points_per_centre,
            std_dev,
            threshold,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.centres.is_empty() || self.points_per_centre == 0 {
            return Err(Error::params("geometric graph needs centres and points"));
        }
        if !(self.std_dev > 0.0 && self.std_dev.is_finite()) {
            return Err(Error::params("std_dev must be positive"));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::params("threshold must be positive"));
        }
        Ok(())
    }
}

/// Undirected SBM; block `i` holds vertices `i*n .. (i+1)*n`.
pub fn gen_sbm(params: &SbmParams, seed: u64) -> Result<(Graph, Partition)> {
    params.validate()?;
    let mut rng = rng(seed);
    let truth = Partition::blocks(params.k, params.n);
    let total = params.k * params.n;
    let mut edges = Vec::new();
    for u in 0..total {
        for v in u + 1..total {
            let p = params.probabilities[truth.cluster_of(u)][truth.cluster_of(v)];
            if rng.random::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    Ok((Graph::new(total, false, edges)?, truth))
}

/// Directed SBM: each pair gets an edge with probability `P_ij`, oriented
/// `u → v` with probability `F_ij`.
pub fn gen_dsbm(params: &DsbmParams, seed: u64) -> Result<(Graph, Partition)> {
    params.validate()?;
    let mut rng = rng(seed);
    let truth = Partition::blocks(params.k, params.n);
    let total = params.k * params.n;
    let mut edges = Vec::new();
    for u in 0..total {
        for v in u + 1..total {
            let (i, j) = (truth.cluster_of(u), truth.cluster_of(v));
            if rng.random::<f64>() < params.probabilities[i][j] {
                if rng.random::<f64>() < params.orientation[i][j] {
                    edges.push((u, v, 1.0));
                } else {
                    edges.push((v, u, 1.0));
                }
            }
        }
    }
    Ok((Graph::new(total, true, edges)?, truth))
}

const GEOMETRIC_ATTEMPTS: usize = 10;

/// Random geometric graph over a Gaussian mixture: unit edge iff the
/// Euclidean distance is below the threshold. Samples with an isolated
/// vertex are redrawn (same RNG stream) up to ten times.
pub fn gen_geometric(params: &GeometricParams, seed: u64) -> Result<(Graph, Partition)> {
    gen_geometric_points(params, seed).map(|(g, p, _)| (g, p))
}

/// As [`gen_geometric`], also returning the sampled coordinates.
pub fn gen_geometric_points(
    params: &GeometricParams,
    seed: u64,
) -> Result<(Graph, Partition, Vec<[f64; 2]>)> {
    params.validate()?;
    let mut rng = rng(seed);
    let noise = Normal::new(0.0, params.std_dev).map_err(|e| Error::params(e.to_string()))?;
    let truth = Partition::blocks(params.centres.len(), params.points_per_centre);
    let t2 = params.threshold * params.threshold;
    for attempt in 1..=GEOMETRIC_ATTEMPTS {
        let points: Vec<[f64; 2]> = (0..truth.len())
            .map(|u| {
                let c = params.centres[truth.cluster_of(u)];
                [c[0] + noise.sample(&mut rng), c[1] + noise.sample(&mut rng)]
            })
            .collect();
        let mut edges = Vec::new();
        for u in 0..points.len() {
            for v in u + 1..points.len() {
                let (dx, dy) = (points[u][0] - points[v][0], points[u][1] - points[v][1]);
                if dx * dx + dy * dy < t2 {
                    edges.push((u, v, 1.0));
                }
            }
        }
        let g = Graph::new(points.len(), false, edges)?;
        if g.require_positive_degrees().is_ok() {
            return Ok((g, truth, points));
        }
        log::warn!("geometric graph attempt {attempt} produced an isolated vertex; resampling");
    }
    Err(Error::params(format!(
        "no geometric graph without isolated vertices after {GEOMETRIC_ATTEMPTS} attempts"
    )))
}

/// Deterministic named fixtures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Fixture {
    /// Two cliques joined by a perfect matching.
    TwoCliqueMatching { clique_size: usize, match_weight: f64, clique_weight: f64 },
    /// `k` blocks with complete bipartite edges `S_i → S_{i+1 mod k}`.
    PerfectCycle { k: usize, block: usize },
    /// As the cycle, without the `S_{k-1} → S_0` edges.
    PerfectPath { k: usize, block: usize },
}

impl Fixture {
    pub const NAMES: [&'static str; 3] = ["two_clique_matching", "perfect_cycle", "perfect_path"];

    /// Fixture with its default parameters.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "two_clique_matching" => Ok(Fixture::TwoCliqueMatching {
                clique_size: 50,
                match_weight: 20.0,
                clique_weight: 1.0,
            }),
            "perfect_cycle" => Ok(Fixture::PerfectCycle { k: 5, block: 5 }),
            "perfect_path" => Ok(Fixture::PerfectPath { k: 5, block: 5 }),
            other => Err(Error::UnknownFixture(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Fixture::TwoCliqueMatching { .. } => "two_clique_matching",
            Fixture::PerfectCycle { .. } => "perfect_cycle",
            Fixture::PerfectPath { .. } => "perfect_path",
        }
    }

    pub fn generate(&self) -> Result<(Graph, Partition)> {
        match *self {
            Fixture::TwoCliqueMatching { clique_size: s, match_weight, clique_weight } => {
                if s < 2 || !(match_weight > 0.0) || !(clique_weight > 0.0) {
                    return Err(Error::params("two_clique_matching needs size >= 2 and positive weights"));
                }
                let mut edges = Vec::new();
                for offset in [0, s] {
                    for a in 0..s {
                        for b in a + 1..s {
                            edges.push((offset + a, offset + b, clique_weight));
                        }
                    }
                }
                edges.extend((0..s).map(|a| (a, s + a, match_weight)));
                Ok((Graph::new(2 * s, false, edges)?, Partition::blocks(2, s)))
            }
            Fixture::PerfectCycle { k, block } => directed_blocks(k, block, true),
            Fixture::PerfectPath { k, block } => directed_blocks(k, block, false),
        }
    }
}

fn directed_blocks(k: usize, block: usize, wrap: bool) -> Result<(Graph, Partition)> {
    if k < 2 || block < 1 {
        return Err(Error::params("directed fixtures need k >= 2 and block >= 1"));
    }
    if wrap && k == 2 {
        // the wrap edges would be anti-parallel to the forward ones
        return Err(Error::params("perfect_cycle needs k >= 3"));
    }
    let links = if wrap { k } else { k - 1 };
    let mut edges = Vec::new();
    for i in 0..links {
        let j = (i + 1) % k;
        for a in 0..block {
            for b in 0..block {
                edges.push((i * block + a, j * block + b, 1.0));
            }
        }
    }
    Ok((Graph::new(k * block, true, edges)?, Partition::blocks(k, block)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_is_complete() {
        let (g, _) = gen_sbm(&SbmParams::planted(3, 4, 1.0, 1.0), 7).unwrap();
        assert_eq!(g.n_edges(), 12 * 11 / 2);
    }

    #[test]
    fn identity_gives_disjoint_cliques() {
        let (g, p) = gen_sbm(&SbmParams::planted(3, 4, 1.0, 0.0), 7).unwrap();
        assert_eq!(g.n_edges(), 3 * 6);
        assert!(g.edges().iter().all(|e| p.cluster_of(e.u) == p.cluster_of(e.v)));
    }

    #[test]
    fn sbm_is_deterministic() {
        let params = SbmParams::hierarchical_pairs(20);
        let a = gen_sbm(&params, 3).unwrap();
        let b = gen_sbm(&params, 3).unwrap();
        let c = gen_sbm(&params, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = SbmParams::planted(2, 3, 0.5, 0.1);
        p.probabilities[0][1] = 0.2;
        assert!(gen_sbm(&p, 0).is_err());
        let mut d = DsbmParams::path4(3, 0.1);
        d.orientation[0][1] = 0.7;
        assert!(gen_dsbm(&d, 0).is_err());
        let g = GeometricParams::four_gaussians(4.0, 10, -1.0, 4.0);
        assert!(gen_geometric(&g, 0).is_err());
        assert!(Fixture::by_name("nope").is_err());
    }

    #[test]
    fn deterministic_dsbm_is_perfect_path() {
        // F_{i,i+1} = 1 and P on the super/sub-diagonal only
        let k = 4;
        let mut probabilities = vec![vec![0.0; k]; k];
        let mut orientation = vec![vec![0.5; k]; k];
        for i in 0..k - 1 {
            probabilities[i][i + 1] = 1.0;
            probabilities[i + 1][i] = 1.0;
            orientation[i][i + 1] = 1.0;
            orientation[i + 1][i] = 0.0;
        }
        let params = DsbmParams { k, n: 3, probabilities, orientation };
        let (g, p) = gen_dsbm(&params, 1).unwrap();
        let (fg, fp) = Fixture::PerfectPath { k, block: 3 }.generate().unwrap();
        assert_eq!(p, fp);
        let mut a: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        let mut b: Vec<_> = fg.edges().iter().map(|e| (e.u, e.v)).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn two_clique_edge_count() {
        let (g, p) = Fixture::by_name("two_clique_matching").unwrap().generate().unwrap();
        assert_eq!(g.n_vertices(), 100);
        assert_eq!(g.n_edges(), 2 * 50 * 49 / 2 + 50);
        assert_eq!(p.k(), 2);
    }

    #[test]
    fn cycle_and_path_degrees() {
        let (g, _) = Fixture::by_name("perfect_cycle").unwrap().generate().unwrap();
        let mut out = [0; 25];
        let mut inn = [0; 25];
        for e in g.edges() {
            out[e.u] += 1;
            inn[e.v] += 1;
        }
        assert!(out.iter().all(|&d| d == 5) && inn.iter().all(|&d| d == 5));

        let (g, _) = Fixture::by_name("perfect_path").unwrap().generate().unwrap();
        let mut out = [0; 25];
        let mut inn = [0; 25];
        for e in g.edges() {
            out[e.u] += 1;
            inn[e.v] += 1;
        }
        assert!((0..5).all(|u| inn[u] == 0));
        assert!((20..25).all(|u| out[u] == 0));
    }

    #[test]
    fn geometric_extremes() {
        let far = GeometricParams {
            centres: vec![[0.0, 0.0], [100.0, 0.0]],
            points_per_centre: 10,
            std_dev: 0.01,
            threshold: 1.0,
        };
        let (g, p) = gen_geometric(&far, 5).unwrap();
        assert!(g.edges().iter().all(|e| p.cluster_of(e.u) == p.cluster_of(e.v)));
        assert_eq!(g.n_edges(), 2 * 45);

        let near = GeometricParams { threshold: 1e6, ..far };
        let (g, _) = gen_geometric(&near, 5).unwrap();
        assert_eq!(g.n_edges(), 20 * 19 / 2);
    }

    #[test]
    fn geometric_gives_up_on_isolated_vertices() {
        let sparse = GeometricParams {
            centres: vec![[0.0, 0.0]],
            points_per_centre: 5,
            std_dev: 100.0,
            threshold: 1e-6,
        };
        assert!(gen_geometric(&sparse, 0).is_err());
    }

    #[test]
    fn trial_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| trial_seed(42, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }
}
