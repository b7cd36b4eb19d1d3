//! Cluster indicator vectors, Rayleigh quotients and exact subspace distances.

use std::f64::consts::PI;

use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cluster_volumes, Graph, Partition};
use crate::spectral::{eigen_decompose, max_deviation_from_identity, Representation};

const ORTHO_TOL: f64 = 1e-8;
const COLLAPSE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndicatorSource {
    DegreeIndicator,
    DigraphChi,
    FirstEigvecReplaced,
    Ritz,
}

/// Orthonormal columns `g_1 … g_k`, sorted by Rayleigh quotient.
#[derive(Debug, Clone)]
pub struct IndicatorSet {
    vectors: Mat<c64>,
    rayleigh: Vec<f64>,
    /// Cluster index each column came from (`None` for a replaced column).
    clusters: Vec<Option<usize>>,
    source: IndicatorSource,
}

impl IndicatorSet {
    pub fn vectors(&self) -> MatRef<'_, c64> {
        self.vectors.as_ref()
    }

    pub fn rayleigh(&self) -> &[f64] {
        &self.rayleigh
    }

    pub fn clusters(&self) -> &[Option<usize>] {
        &self.clusters
    }

    pub fn source(&self) -> IndicatorSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.rayleigh.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rayleigh.is_empty()
    }

    /// Rotates the columns within their span onto the eigenvectors of the
    /// compressed matrix `G* M G`.
    ///
    /// The first `q` Ritz vectors minimise `Σ γ_i` over every `q`-dimensional
    /// subspace of the span, so a recursive bound fed these vectors is never
    /// worse than with any other ordering of the same clusters.
    pub fn ritz(&self, m: MatRef<'_, c64>) -> Result<IndicatorSet> {
        let g = self.vectors.as_ref();
        let compressed = g.adjoint() * m * g;
        let es = eigen_decompose(compressed.as_ref(), None)?;
        let vectors = g * &es.eigenvectors;
        let k = vectors.ncols();
        let mut set = Self::sorted(vectors, m, vec![None; k], IndicatorSource::Ritz, 0);
        // M is PSD; a null Ritz vector can come out at −1e-16
        set.rayleigh.iter_mut().for_each(|g| *g = g.max(0.0));
        Ok(set)
    }

    fn sorted(
        vectors: Mat<c64>,
        m: MatRef<'_, c64>,
        clusters: Vec<Option<usize>>,
        source: IndicatorSource,
        fixed_prefix: usize,
    ) -> Self {
        let gammas: Vec<f64> = (0..vectors.ncols())
            .map(|j| rayleigh_quotient(m, vectors.col(j).as_mat()))
            .collect();
        let mut order: Vec<usize> = (0..vectors.ncols()).collect();
        order[fixed_prefix..].sort_by(|&a, &b| gammas[a].total_cmp(&gammas[b]).then(a.cmp(&b)));
        let sorted = Mat::from_fn(vectors.nrows(), order.len(), |i, j| vectors[(i, order[j])]);
        Self {
            vectors: sorted,
            rayleigh: order.iter().map(|&j| gammas[j]).collect(),
            clusters: order.iter().map(|&j| clusters[j]).collect(),
            source,
        }
    }
}

/// `x* M x / x* x` for a single column `x`.
pub fn rayleigh_quotient(m: MatRef<'_, c64>, x: MatRef<'_, c64>) -> f64 {
    let mx = m * x;
    let num: c64 = (0..x.nrows()).map(|i| x[(i, 0)].conj() * mx[(i, 0)]).sum();
    let den: f64 = (0..x.nrows()).map(|i| x[(i, 0)].norm_sqr()).sum();
    num.re / den
}

/// Normalised indicators of each cluster.
///
/// Against a normalised Laplacian, `g_i(u) = √(d(u)/vol(S_i))` on `S_i`, so
/// the Rayleigh quotient of `g_i` is the conductance of `S_i`. Against a
/// combinatorial Laplacian, `g_i = 1_{S_i}/√|S_i|`.
pub fn degree_indicators(g: &Graph, p: &Partition, r: &Representation) -> Result<IndicatorSet> {
    if r.kind().is_directed() || g.is_directed() {
        return Err(Error::KindMismatch("degree indicators need an undirected representation".into()));
    }
    check_dims(g, p, r)?;
    let n = g.n_vertices();
    let mut vectors = Mat::<c64>::zeros(n, p.k());
    if r.kind().is_normalized() {
        let vol = cluster_volumes(g, p)?;
        if let Some(c) = vol.iter().position(|&v| v <= 0.0) {
            return Err(Error::InvalidPartition(format!("cluster {c} has zero volume")));
        }
        for u in 0..n {
            let c = p.cluster_of(u);
            vectors[(u, c)] = c64::new((g.degree(u) / vol[c]).sqrt(), 0.0);
        }
    } else {
        let sizes: Vec<f64> = p.clusters().iter().map(|s| s.len() as f64).collect();
        for u in 0..n {
            let c = p.cluster_of(u);
            vectors[(u, c)] = c64::new(1.0 / sizes[c].sqrt(), 0.0);
        }
    }
    let clusters = (0..p.k()).map(Some).collect();
    Ok(IndicatorSet::sorted(vectors, r.matrix(), clusters, IndicatorSource::DegreeIndicator, 0))
}

/// The single digraph indicator `χ(u) = √(d(u)/vol(V))·e^{−2πij/k}` for
/// `u ∈ S_j` (clusters numbered from 0).
///
/// The phase decreases along the cycle so that, against the Hermitian
/// Laplacian with root order `k`, an edge `S_j → S_{j+1}` contributes nothing
/// to the Rayleigh quotient.
pub fn digraph_chi(g: &Graph, p: &Partition, r: &Representation) -> Result<IndicatorSet> {
    if !r.kind().is_directed() || !g.is_directed() {
        return Err(Error::KindMismatch("χ needs a directed representation".into()));
    }
    check_dims(g, p, r)?;
    let k = p.k();
    if k < 2 {
        return Err(Error::params("χ needs k >= 2"));
    }
    let vol = g.total_volume();
    if vol <= 0.0 {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    let v = Mat::from_fn(g.n_vertices(), 1, |u, _| {
        let t = -2.0 * PI * p.cluster_of(u) as f64 / k as f64;
        c64::new(t.cos(), t.sin()) * (g.degree(u) / vol).sqrt()
    });
    Ok(IndicatorSet::sorted(v, r.matrix(), vec![None], IndicatorSource::DigraphChi, 1))
}

fn check_dims(g: &Graph, p: &Partition, r: &Representation) -> Result<()> {
    if p.len() != g.n_vertices() || r.dim() != g.n_vertices() {
        return Err(Error::params("graph, partition and representation sizes differ"));
    }
    Ok(())
}

/// Replaces `g_1` by `f_1` and re-orthonormalises the remaining columns
/// against it, in column order or in the given `order` of columns `1..k`.
///
/// Rayleigh quotients are recomputed and columns after the first re-sorted.
pub fn replace_first(
    ind: &IndicatorSet,
    f1: MatRef<'_, c64>,
    m: MatRef<'_, c64>,
    order: Option<&[usize]>,
) -> Result<IndicatorSet> {
    let n = ind.vectors.nrows();
    let k = ind.len();
    if f1.nrows() != n || f1.ncols() != 1 {
        return Err(Error::params("f1 must be a single column of matching length"));
    }
    let rest: Vec<usize> = match order {
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            if sorted != (1..k).collect::<Vec<_>>() {
                return Err(Error::params("order must permute columns 1..k"));
            }
            o.to_vec()
        }
        None => (1..k).collect(),
    };
    let f1_norm = column_norm(f1);
    if (f1_norm - 1.0).abs() > ORTHO_TOL {
        return Err(Error::NotOrthonormal((f1_norm - 1.0).abs()));
    }
    let mut out = Mat::<c64>::zeros(n, k);
    out.col_mut(0).copy_from(f1.col(0));
    let mut clusters = vec![None];
    for (slot, &j) in rest.iter().enumerate() {
        let mut v = ind.vectors.col(j).to_owned();
        // two passes of classical Gram–Schmidt
        for _ in 0..2 {
            for prev in 0..=slot {
                let q = out.col(prev);
                let dot: c64 = (0..n).map(|i| q[i].conj() * v[i]).sum();
                for i in 0..n {
                    v[i] -= q[i] * dot;
                }
            }
        }
        let norm = (0..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if norm < COLLAPSE_TOL {
            return Err(Error::RankCollapse(j));
        }
        for i in 0..n {
            out[(i, slot + 1)] = v[i] / norm;
        }
        clusters.push(ind.clusters[j]);
    }
    Ok(IndicatorSet::sorted(out, m, clusters, IndicatorSource::FirstEigvecReplaced, 1))
}

fn column_norm(x: MatRef<'_, c64>) -> f64 {
    (0..x.nrows()).map(|i| x[(i, 0)].norm_sqr()).sum::<f64>().sqrt()
}

fn check_orthonormal(x: MatRef<'_, c64>, what: &str) -> Result<()> {
    let dev = max_deviation_from_identity((x.adjoint() * x).as_ref());
    if dev > ORTHO_TOL {
        log::debug!("{what} deviates from orthonormal by {dev:e}");
        return Err(Error::NotOrthonormal(dev));
    }
    Ok(())
}

/// `Q = F* G` for orthonormal `F` and `G`.
pub fn alignment_matrix(f: MatRef<'_, c64>, g: MatRef<'_, c64>) -> Result<Mat<c64>> {
    if f.nrows() != g.nrows() {
        return Err(Error::params("bases have different lengths"));
    }
    check_orthonormal(f, "F")?;
    check_orthonormal(g, "G")?;
    Ok(f.adjoint() * g)
}

/// `Σ_i min_{ĝ ∈ span(G)} ‖f_i − ĝ‖² = m − ‖G* F‖²_F` for an orthonormal
/// block `F` of `m` columns.
pub fn true_subspace_distance(f: MatRef<'_, c64>, g: MatRef<'_, c64>) -> Result<f64> {
    let q = alignment_matrix(f, g)?;
    let captured: f64 = (0..q.ncols())
        .flat_map(|j| (0..q.nrows()).map(move |i| (i, j)))
        .map(|(i, j)| q[(i, j)].norm_sqr())
        .sum();
    Ok((f.ncols() as f64 - captured).max(0.0))
}
