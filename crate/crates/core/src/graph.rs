//! Graph data model and the combinatorial quality measures of a partition.
//!
//! Degrees follow one convention throughout: for undirected graphs `d(u)` is
//! the sum of incident weights, for directed graphs `d(u) = d_in(u) + d_out(u)`.
//! Volumes, indicator vectors and degree matrices all read [`Graph::degrees`].

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    degrees: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a validated graph.
    ///
    /// Undirected edges are stored once with `u < v`. A pair listed twice with
    /// the same weight is kept once; conflicting weights are rejected, as are
    /// anti-parallel pairs in a digraph.
    pub fn new<I>(n: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut stored: Vec<Edge> = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) has invalid weight {w}")));
            }
            let key = (u.min(v), u.max(v));
            let (su, sv) = if directed { (u, v) } else { key };
            match seen.get(&key) {
                Some(&idx) => {
                    let prev = stored[idx];
                    if directed && (prev.u, prev.v) != (su, sv) {
                        return Err(Error::InvalidGraph(format!(
                            "anti-parallel pair ({u}, {v}) and ({v}, {u})"
                        )));
                    }
                    if prev.w != w {
                        return Err(Error::InvalidGraph(format!(
                            "edge ({u}, {v}) listed twice with weights {} and {w}",
                            prev.w
                        )));
                    }
                }
                None => {
                    seen.insert(key, stored.len());
                    stored.push(Edge { u: su, v: sv, w });
                }
            }
        }
        let mut degrees = vec![0.0; n];
        for e in &stored {
            degrees[e.u] += e.w;
            degrees[e.v] += e.w;
        }
        Ok(Self { n, directed, edges: stored, degrees, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External name of a vertex, falling back to its index.
    pub fn label(&self, u: usize) -> String {
        match &self.labels {
            Some(l) => l[u].clone(),
            None => u.to_string(),
        }
    }

    pub fn degree(&self, u: usize) -> f64 {
        self.degrees[u]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn total_volume(&self) -> f64 {
        self.degrees.iter().sum()
    }

    pub fn volume(&self, set: &[usize]) -> f64 {
        set.iter().map(|&u| self.degrees[u]).sum()
    }

    /// Errors with the first vertex of zero degree, if any.
    pub fn require_positive_degrees(&self) -> Result<()> {
        match self.degrees.iter().position(|&d| d <= 0.0) {
            Some(u) => Err(Error::ZeroDegree(u)),
            None => Ok(()),
        }
    }

    /// Copy of the graph with edge `idx` pointing the other way.
    pub fn with_edge_reversed(&self, idx: usize) -> Result<Self> {
        if !self.directed {
            return Err(Error::InvalidGraph("cannot reverse an undirected edge".into()));
        }
        let mut g = self.clone();
        let e = g
            .edges
            .get_mut(idx)
            .ok_or_else(|| Error::InvalidGraph(format!("no edge with index {idx}")))?;
        std::mem::swap(&mut e.u, &mut e.v);
        Ok(g)
    }
}

/// A k-way partition with every cluster nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    k: usize,
    assignment: Vec<usize>,
}

impl Partition {
    pub fn new(k: usize, assignment: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPartition("k must be at least 1".into()));
        }
        let mut sizes = vec![0usize; k];
        for (u, &c) in assignment.iter().enumerate() {
            if c >= k {
                return Err(Error::InvalidPartition(format!(
                    "vertex {u} assigned to cluster {c}, expected < {k}"
                )));
            }
            sizes[c] += 1;
        }
        if let Some(c) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!("cluster {c} is empty")));
        }
        Ok(Self { k, assignment })
    }

    /// Partition whose `k` is one more than the largest cluster index.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        let k = assignment.iter().max().map_or(0, |&m| m + 1);
        Self::new(k, assignment)
    }

    /// `k` contiguous blocks of `block` vertices each.
    pub fn blocks(k: usize, block: usize) -> Self {
        let assignment = (0..k * block).map(|u| u / block).collect();
        Self { k, assignment }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_of(&self, u: usize) -> usize {
        self.assignment[u]
    }

    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (u, &c) in self.assignment.iter().enumerate() {
            out[c].push(u);
        }
        out
    }

    /// Renames cluster `i` to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k {
            return Err(Error::InvalidPartition("permutation length differs from k".into()));
        }
        Self::new(self.k, self.assignment.iter().map(|&c| perm[c]).collect())
    }

    /// Reorders clusters so that new cluster `i` is old cluster `order[i]`.
    pub fn reorder(&self, order: &[usize]) -> Result<Self> {
        let mut perm = vec![usize::MAX; self.k];
        for (new, &old) in order.iter().enumerate() {
            if old >= self.k || perm[old] != usize::MAX {
                return Err(Error::InvalidPartition("order is not a permutation".into()));
            }
            perm[old] = new;
        }
        self.relabel(&perm)
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.assignment.len() != g.n_vertices() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} vertices, graph has {}",
                self.assignment.len(),
                g.n_vertices()
            )));
        }
        Ok(())
    }
}

fn membership(g: &Graph, s: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.n_vertices()];
    for &u in s {
        if u >= g.n_vertices() {
            return Err(Error::InvalidParams(format!("vertex {u} out of range")));
        }
        mask[u] = true;
    }
    Ok(mask)
}

/// `W[i][j] = w(S_i, S_j)`, the total weight of edges leaving `S_i` into `S_j`.
///
/// Undirected edges count in both orientations, so row sums are volumes.
pub fn block_weights(g: &Graph, p: &Partition) -> Result<Vec<Vec<f64>>> {
    p.check_graph(g)?;
    let k = p.k();
    let mut w = vec![vec![0.0; k]; k];
    for e in g.edges() {
        let (a, b) = (p.cluster_of(e.u), p.cluster_of(e.v));
        w[a][b] += e.w;
        if !g.is_directed() {
            w[b][a] += e.w;
        }
    }
    Ok(w)
}

pub fn cluster_volumes(g: &Graph, p: &Partition) -> Result<Vec<f64>> {
    p.check_graph(g)?;
    let mut vol = vec![0.0; p.k()];
    for (u, &c) in p.assignment().iter().enumerate() {
        vol[c] += g.degree(u);
    }
    Ok(vol)
}

/// Weight of edges with exactly one endpoint in `s`, orientation ignored.
fn boundary_weight(g: &Graph, mask: &[bool]) -> f64 {
    g.edges().iter().filter(|e| mask[e.u] != mask[e.v]).map(|e| e.w).sum()
}

/// Conductance `w(S, V−S) / vol(S)`.
///
/// For digraphs the cut counts boundary edges in either direction.
pub fn conductance(g: &Graph, s: &[usize]) -> Result<f64> {
    let mask = membership(g, s)?;
    let size = mask.iter().filter(|&&m| m).count();
    if size == 0 || size == g.n_vertices() {
        return Err(Error::params("conductance needs a nonempty proper subset"));
    }
    let vol: f64 = mask.iter().zip(g.degrees()).filter(|(m, _)| **m).map(|(_, d)| d).sum();
    if vol <= 0.0 {
        return Err(Error::params("set has zero volume"));
    }
    // cut ≤ vol exactly; summation order can push the ratio past 1
    Ok((boundary_weight(g, &mask) / vol).min(1.0))
}

/// Largest cluster conductance, `max_i Φ(S_i)`.
///
/// Evaluated at the clusters found by spectral clustering this is the
/// `ρ̃(k)` surrogate for the k-way expansion constant.
pub fn kway_expansion(g: &Graph, p: &Partition) -> Result<f64> {
    let w = block_weights(g, p)?;
    let vol = cluster_volumes(g, p)?;
    let mut worst: f64 = 0.0;
    for i in 0..p.k() {
        if vol[i] <= 0.0 {
            return Err(Error::params(format!("cluster {i} has zero volume")));
        }
        let cut: f64 = (0..p.k())
            .filter(|&j| j != i)
            .map(|j| if g.is_directed() { w[i][j] + w[j][i] } else { w[i][j] })
            .sum();
        worst = worst.max((cut / vol[i]).min(1.0));
    }
    Ok(worst)
}

/// Cyclic expansion: the share of edge weight (over `vol(V)`) that does not
/// run from `S_i` to `S_{i+1 mod k}`. Intra-cluster edges are penalised.
pub fn cyclic_expansion(g: &Graph, p: &Partition) -> Result<f64> {
    if !g.is_directed() {
        return Err(Error::KindMismatch("cyclic expansion needs a directed graph".into()));
    }
    let k = p.k();
    if k < 2 {
        return Err(Error::params("cyclic expansion needs k >= 2"));
    }
    let w = block_weights(g, p)?;
    let vol = g.total_volume();
    if vol <= 0.0 {
        return Err(Error::params("graph has zero volume"));
    }
    let mut off = 0.0;
    for (i, row) in w.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if j != (i + 1) % k {
                off += x;
            }
        }
    }
    Ok(off / vol)
}

/// Path objective `Σ_{i<k} w(S_i, S_{i+1}) / (vol(S_i) + vol(S_{i+1}))`
/// evaluated at the given cluster order.
pub fn theta_k(g: &Graph, p: &Partition) -> Result<f64> {
    if !g.is_directed() {
        return Err(Error::KindMismatch("theta_k needs a directed graph".into()));
    }
    let w = block_weights(g, p)?;
    let vol = cluster_volumes(g, p)?;
    let mut total = 0.0;
    for i in 0..p.k().saturating_sub(1) {
        let denom = vol[i] + vol[i + 1];
        if denom <= 0.0 {
            return Err(Error::params(format!("clusters {i} and {} have zero volume", i + 1)));
        }
        total += w[i][i + 1] / denom;
    }
    Ok(total)
}

/// Degree-weighted symmetric difference between two k-way partitions,
/// minimised over cluster relabellings.
pub fn symmetric_difference_volume(g: &Graph, p: &Partition, q: &Partition) -> Result<f64> {
    if p.k() != q.k() {
        return Err(Error::InvalidPartition(format!("k differs: {} vs {}", p.k(), q.k())));
    }
    p.check_graph(g)?;
    q.check_graph(g)?;
    let k = p.k();
    let mut overlap = vec![vec![0.0; k]; k];
    for u in 0..g.n_vertices() {
        overlap[p.cluster_of(u)][q.cluster_of(u)] += g.degree(u);
    }
    let vol_p = cluster_volumes(g, p)?;
    let vol_q = cluster_volumes(g, q)?;
    // vol(S ∆ A) = vol(S) + vol(A) − 2 vol(S ∩ A)
    let cost: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| vol_p[i] + vol_q[j] - 2.0 * overlap[i][j]).collect())
        .collect();
    let best = if k <= 8 { min_assignment_exhaustive(&cost) } else { min_assignment(&cost) };
    Ok(best.max(0.0))
}

fn min_assignment_exhaustive(cost: &[Vec<f64>]) -> f64 {
    let k = cost.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = f64::INFINITY;
    for_each_permutation(&mut perm, 0, &mut |p| {
        let c: f64 = p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        if c < best {
            best = c;
        }
    });
    best
}

pub(crate) fn for_each_permutation(perm: &mut [usize], start: usize, f: &mut impl FnMut(&[usize])) {
    if start == perm.len() {
        f(perm);
        return;
    }
    for i in start..perm.len() {
        perm.swap(start, i);
        for_each_permutation(perm, start + 1, f);
        perm.swap(start, i);
    }
}

/// Minimum-cost perfect assignment on a square matrix (Hungarian method,
/// shortest augmenting paths with potentials).
pub fn min_assignment(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    if n == 0 {
        return 0.0;
    }
    // 1-based arrays; column 0 is the virtual source.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut matched = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[matched[j] - 1][j - 1]).sum()
}

/// All assignments of `n` vertices to `k` labelled, nonempty clusters.
///
/// There are on the order of `k^n` of them; meant for test-size graphs.
pub fn enumerate_partitions(n: usize, k: usize) -> impl Iterator<Item = Partition> {
    let total = if k == 0 { 0 } else { (k as u64).checked_pow(n as u32).unwrap_or(u64::MAX) };
    (0..total).filter_map(move |mut code| {
        let mut assignment = Vec::with_capacity(n);
        for _ in 0..n {
            assignment.push((code % k as u64) as usize);
            code /= k as u64;
        }
        Partition::new(k, assignment).ok()
    })
}

const EXHAUSTIVE_LIMIT: usize = 12;

/// Exact k-way expansion constant `ρ(k)` by enumeration.
pub fn exact_kway_expansion(g: &Graph, k: usize) -> Result<(f64, Partition)> {
    exhaustive_min(g, k, kway_expansion)
}

/// Exact cyclic k-way expansion `Ψ_k` by enumeration.
pub fn exact_cyclic_expansion(g: &Graph, k: usize) -> Result<(f64, Partition)> {
    exhaustive_min(g, k, cyclic_expansion)
}

fn exhaustive_min(
    g: &Graph,
    k: usize,
    objective: impl Fn(&Graph, &Partition) -> Result<f64>,
) -> Result<(f64, Partition)> {
    if g.n_vertices() > EXHAUSTIVE_LIMIT {
        return Err(Error::params(format!(
            "exhaustive search limited to {EXHAUSTIVE_LIMIT} vertices"
        )));
    }
    let mut best: Option<(f64, Partition)> = None;
    for p in enumerate_partitions(g.n_vertices(), k) {
        // Zero-volume clusters make the objective undefined; skip them.
        let Ok(val) = objective(g, &p) else { continue };
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, p));
        }
    }
    best.ok_or_else(|| Error::params(format!("no valid {k}-way partition")))
}

/// Orders the clusters of a digraph partition so edges follow `S_i → S_{i+1}`.
///
/// Up to eight clusters, all orders are tried: the cyclic expansion is
/// minimised first, then the rotation maximising `θ_k` is chosen. Larger
/// partitions keep their order and only the rotation is chosen.
pub fn order_cyclically(g: &Graph, p: &Partition) -> Result<Partition> {
    if !g.is_directed() {
        return Err(Error::KindMismatch("cluster ordering needs a directed graph".into()));
    }
    let k = p.k();
    if k < 2 {
        return Ok(p.clone());
    }
    let w = block_weights(g, p)?;
    let vol = cluster_volumes(g, p)?;
    let off_cycle = |order: &[usize]| -> f64 {
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                if j != (i + 1) % k {
                    s += w[order[i]][order[j]];
                }
            }
        }
        s
    };
    let theta = |order: &[usize]| -> f64 {
        (0..k - 1)
            .map(|i| {
                let d = vol[order[i]] + vol[order[i + 1]];
                if d > 0.0 { w[order[i]][order[i + 1]] / d } else { 0.0 }
            })
            .sum()
    };
    let mut best: Vec<usize> = (0..k).collect();
    if k <= 8 {
        let mut best_off = f64::INFINITY;
        let mut perm: Vec<usize> = (0..k).collect();
        // Fix cluster 0 first; rotations are handled below.
        for_each_permutation(&mut perm, 1, &mut |o| {
            let c = off_cycle(o);
            if c < best_off - 1e-12 {
                best_off = c;
                best = o.to_vec();
            }
        });
    }
    let mut best_rot = best.clone();
    let mut best_theta = theta(&best);
    for r in 1..k {
        let rot: Vec<usize> = (0..k).map(|i| best[(i + r) % k]).collect();
        let t = theta(&rot);
        if t > best_theta + 1e-12 {
            best_theta = t;
            best_rot = rot;
        }
    }
    p.reorder(&best_rot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, false, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn undirected_edges_are_normalised() {
        let g = Graph::new(3, false, [(2, 0, 1.0), (0, 2, 1.0), (1, 0, 2.0)]).unwrap();
        assert_eq!(g.n_edges(), 2);
        assert!(g.edges().iter().all(|e| e.u < e.v));
        assert_eq!(g.degrees(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(2, false, [(0, 0, 1.0)]).is_err());
        assert!(Graph::new(2, false, [(0, 1, -1.0)]).is_err());
        assert!(Graph::new(2, false, [(0, 2, 1.0)]).is_err());
        assert!(Graph::new(2, true, [(0, 1, 1.0), (1, 0, 1.0)]).is_err());
        assert!(Graph::new(2, false, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    }

    #[test]
    fn directed_degree_is_in_plus_out() {
        let g = Graph::new(3, true, [(0, 1, 2.0), (2, 1, 1.0)]).unwrap();
        assert_eq!(g.degrees(), &[2.0, 3.0, 1.0]);
    }

    #[test]
    fn single_vertex_of_triangle() {
        assert!((conductance(&triangle(), &[0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conductance_rejects_trivial_sets() {
        let g = triangle();
        assert!(conductance(&g, &[]).is_err());
        assert!(conductance(&g, &[0, 1, 2]).is_err());
    }

    #[test]
    fn disconnected_component_has_zero_conductance() {
        let g = Graph::new(4, false, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(conductance(&g, &[0, 1]).unwrap(), 0.0);
        let p = Partition::new(2, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(kway_expansion(&g, &p).unwrap(), 0.0);
    }

    #[test]
    fn empty_cluster_rejected() {
        assert!(Partition::new(3, vec![0, 0, 2]).is_err());
        assert!(Partition::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn theta_on_simple_path() {
        // 0 -> 1 -> 2, one vertex per cluster
        let g = Graph::new(3, true, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let p = Partition::new(3, vec![0, 1, 2]).unwrap();
        // vol = 1, 2, 1
        let expected = 1.0 / 3.0 + 1.0 / 3.0;
        assert!((theta_k(&g, &p).unwrap() - expected).abs() < 1e-15);
        let rev = Partition::new(3, vec![2, 1, 0]).unwrap();
        assert_eq!(theta_k(&g, &rev).unwrap(), 0.0);
        assert_eq!(cyclic_expansion(&g, &p).unwrap(), 0.0);
    }

    #[test]
    fn cyclic_expansion_counts_intra_cluster_edges() {
        let g = Graph::new(3, true, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let p = Partition::new(2, vec![0, 0, 1]).unwrap();
        // edge 0->1 is intra-cluster, 1->2 follows the cycle; vol(V) = 4
        assert!((cyclic_expansion(&g, &p).unwrap() - 0.25).abs() < 1e-15);
        assert!(cyclic_expansion(&triangle(), &p).is_err());
    }

    #[test]
    fn symmetric_difference_basic() {
        let g = triangle();
        let p = Partition::new(2, vec![0, 0, 1]).unwrap();
        let q = Partition::new(2, vec![0, 1, 1]).unwrap();
        assert_eq!(symmetric_difference_volume(&g, &p, &p).unwrap(), 0.0);
        // vertex 1 (degree 2) moved
        assert!((symmetric_difference_volume(&g, &p, &q).unwrap() - 4.0).abs() < 1e-12);
        let swapped = p.relabel(&[1, 0]).unwrap();
        assert_eq!(symmetric_difference_volume(&g, &p, &swapped).unwrap(), 0.0);
        let r = Partition::new(3, vec![0, 1, 2]).unwrap();
        assert!(symmetric_difference_volume(&g, &p, &r).is_err());
    }

    #[test]
    fn hungarian_matches_enumeration() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for k in 1..=7 {
            for _ in 0..20 {
                let cost: Vec<Vec<f64>> = (0..k).map(|_| (0..k).map(|_| next()).collect()).collect();
                let a = min_assignment(&cost);
                let b = min_assignment_exhaustive(&cost);
                assert!((a - b).abs() < 1e-12, "k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn enumerate_counts_surjections() {
        // surjections 4 -> 2: 2^4 - 2
        assert_eq!(enumerate_partitions(4, 2).count(), 14);
        // surjections 4 -> 3: 36
        assert_eq!(enumerate_partitions(4, 3).count(), 36);
    }

    #[test]
    fn ordering_recovers_cycle() {
        // 3 clusters of 2, edges S0 -> S1 -> S2 -> S0, labels scrambled
        let mut edges = vec![];
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            for x in 0..2 {
                for y in 0..2 {
                    edges.push((2 * a + x, 2 * b + y, 1.0));
                }
            }
        }
        let g = Graph::new(6, true, edges).unwrap();
        let p = Partition::new(3, vec![2, 2, 1, 1, 0, 0]).unwrap();
        assert!(cyclic_expansion(&g, &p).unwrap() > 0.0);
        let o = order_cyclically(&g, &p).unwrap();
        assert_eq!(cyclic_expansion(&g, &o).unwrap(), 0.0);
    }

    #[test]
    fn reversing_an_edge() {
        let g = Graph::new(2, true, [(0, 1, 1.0)]).unwrap();
        let r = g.with_edge_reversed(0).unwrap();
        assert_eq!((r.edges()[0].u, r.edges()[0].v), (1, 0));
        assert!(triangle().with_edge_reversed(0).is_err());
    }
}
