//! Hermitian matrix representations of graphs and their eigensystems.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use faer::{c64, Mat, MatRef, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationKind {
    CombinatorialLaplacian,
    NormalizedLaplacian,
    HermitianLaplacian,
    NormalizedHermitianLaplacian,
}

impl RepresentationKind {
    pub const ALL: [RepresentationKind; 4] = [
        RepresentationKind::CombinatorialLaplacian,
        RepresentationKind::NormalizedLaplacian,
        RepresentationKind::HermitianLaplacian,
        RepresentationKind::NormalizedHermitianLaplacian,
    ];

    pub fn is_directed(self) -> bool {
        matches!(self, Self::HermitianLaplacian | Self::NormalizedHermitianLaplacian)
    }

    pub fn is_normalized(self) -> bool {
        matches!(self, Self::NormalizedLaplacian | Self::NormalizedHermitianLaplacian)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::CombinatorialLaplacian => "combinatorial_laplacian",
            Self::NormalizedLaplacian => "normalized_laplacian",
            Self::HermitianLaplacian => "hermitian_laplacian",
            Self::NormalizedHermitianLaplacian => "normalized_hermitian_laplacian",
        }
    }

    /// The default representation for a graph of the given kind.
    pub fn default_for(directed: bool) -> Self {
        if directed {
            Self::NormalizedHermitianLaplacian
        } else {
            Self::NormalizedLaplacian
        }
    }
}

impl fmt::Display for RepresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepresentationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::params(format!("unknown representation `{s}`")))
    }
}

/// A dense Hermitian matrix built from a graph.
#[derive(Debug, Clone)]
pub struct Representation {
    kind: RepresentationKind,
    root_order: Option<usize>,
    matrix: Mat<c64>,
}

impl Representation {
    pub fn kind(&self) -> RepresentationKind {
        self.kind
    }

    /// Order of the root of unity encoding edge direction (digraph kinds).
    pub fn root_order(&self) -> Option<usize> {
        self.root_order
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Builds `L = D − A` or `ℒ = I − D^{-1/2} A D^{-1/2}`.
///
/// For digraphs an edge `u → v` of weight `w` sets `A[u][v] = w·e^{2πi/r}` and
/// `A[v][u]` to its conjugate, with `r = root_order`. `root_order` is ignored
/// for undirected kinds.
pub fn build_representation(
    g: &Graph,
    kind: RepresentationKind,
    root_order: usize,
) -> Result<Representation> {
    if kind.is_directed() != g.is_directed() {
        return Err(Error::KindMismatch(format!(
            "{kind} needs a {} graph",
            if kind.is_directed() { "directed" } else { "undirected" }
        )));
    }
    if kind.is_directed() && root_order < 1 {
        return Err(Error::params("root order must be at least 1"));
    }
    if kind.is_normalized() {
        g.require_positive_degrees()?;
    }
    let n = g.n_vertices();
    let deg = g.degrees();
    let omega = if kind.is_directed() {
        let t = 2.0 * PI / root_order as f64;
        c64::new(t.cos(), t.sin())
    } else {
        c64::new(1.0, 0.0)
    };
    let scale: Vec<f64> = if kind.is_normalized() {
        deg.iter().map(|d| 1.0 / d.sqrt()).collect()
    } else {
        vec![1.0; n]
    };
    let mut m = Mat::<c64>::zeros(n, n);
    for u in 0..n {
        m[(u, u)] = c64::new(if kind.is_normalized() { 1.0 } else { deg[u] }, 0.0);
    }
    for e in g.edges() {
        let a = omega * (e.w * scale[e.u] * scale[e.v]);
        m[(e.u, e.v)] -= a;
        m[(e.v, e.u)] -= a.conj();
    }
    Ok(Representation {
        kind,
        root_order: kind.is_directed().then_some(root_order),
        matrix: m,
    })
}

/// Ascending eigenvalues with matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat<c64>,
    /// The largest eigenvalue of the full spectrum.
    pub lambda_max: f64,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// The first `m` eigenvectors.
    pub fn block(&self, m: usize) -> MatRef<'_, c64> {
        self.eigenvectors.as_ref().subcols(0, m)
    }
}

const PSD_TOL: f64 = 1e-8;
const CHECK_TOL: f64 = 1e-8;

/// Lowest `num` eigenpairs of the representation (`None` for all).
pub fn eigensystem(r: &Representation, num: Option<usize>) -> Result<EigenSystem> {
    eigen_decompose(r.matrix(), num)
}

/// Lowest `num` eigenpairs of a dense Hermitian PSD matrix.
///
/// Each eigenvector is rotated so its largest-magnitude entry is real and
/// positive (ties go to the lowest index). Eigenvalues within `1e-8·λ_max`
/// below zero are clamped to 0; anything more negative is an error.
pub fn eigen_decompose(m: MatRef<'_, c64>, num: Option<usize>) -> Result<EigenSystem> {
    let n = m.nrows();
    if m.ncols() != n || n == 0 {
        return Err(Error::params("matrix must be square and nonempty"));
    }
    let num = num.unwrap_or(n);
    if num > n {
        return Err(Error::params(format!("requested {num} eigenpairs of a {n}x{n} matrix")));
    }
    check_hermitian(m)?;
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let all: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    let lambda_max = all[n - 1];
    let floor = -PSD_TOL * lambda_max.abs();
    let mut eigenvalues = Vec::with_capacity(num);
    for &l in &all[..num] {
        if l < floor {
            return Err(Error::NotPsd(l));
        }
        eigenvalues.push(l.max(0.0));
    }
    if all[0] < floor {
        return Err(Error::NotPsd(all[0]));
    }
    let mut vecs = evd.U().subcols(0, num).to_owned();
    for j in 0..num {
        gauge(&mut vecs, j);
    }
    let es = EigenSystem { eigenvalues, eigenvectors: vecs, lambda_max };
    check_eigensystem(m, &es)?;
    Ok(es)
}

fn check_hermitian(m: MatRef<'_, c64>) -> Result<()> {
    let n = m.nrows();
    let mut scale = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            scale = scale.max(m[(i, j)].norm());
        }
    }
    let tol = 1e-12 * scale.max(1.0);
    for j in 0..n {
        for i in j..n {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                return Err(Error::params(format!("matrix is not Hermitian at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

fn gauge(vecs: &mut Mat<c64>, j: usize) {
    let col = vecs.col(j);
    let peak = (0..col.nrows()).map(|i| col[i].norm()).fold(0.0f64, f64::max);
    if peak == 0.0 {
        return;
    }
    let idx = (0..col.nrows()).find(|&i| col[i].norm() >= peak * (1.0 - 1e-12)).unwrap_or(0);
    let z = col[idx];
    let phase = z.conj() / z.norm();
    for i in 0..vecs.nrows() {
        let x = vecs[(i, j)];
        vecs[(i, j)] = x * phase;
    }
}

fn check_eigensystem(m: MatRef<'_, c64>, es: &EigenSystem) -> Result<()> {
    let f = es.eigenvectors.as_ref();
    let gram = f.adjoint() * f;
    let dev = max_deviation_from_identity(gram.as_ref());
    if dev > CHECK_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let mf = m * f;
    let tol = CHECK_TOL * (1.0 + es.lambda_max.abs());
    for (j, &l) in es.eigenvalues.iter().enumerate() {
        let res: f64 = (0..f.nrows())
            .map(|i| (mf[(i, j)] - f[(i, j)] * l).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res > tol {
            return Err(Error::Eigen(format!("eigenpair {j} has residual {res:e}")));
        }
    }
    Ok(())
}

/// `max |Q_ij − δ_ij|`.
pub fn max_deviation_from_identity(q: MatRef<'_, c64>) -> f64 {
    let mut dev = 0.0f64;
    for j in 0..q.ncols() {
        for i in 0..q.nrows() {
            let id = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((q[(i, j)] - c64::new(id, 0.0)).norm());
        }
    }
    dev
}

/// `‖F Δ F* − M‖_F / ‖M‖_F` for a full eigensystem.
pub fn reconstruction_error(m: MatRef<'_, c64>, es: &EigenSystem) -> f64 {
    let f = es.eigenvectors.as_ref();
    let mut fd = f.to_owned();
    for (j, &l) in es.eigenvalues.iter().enumerate() {
        for i in 0..fd.nrows() {
            fd[(i, j)] *= l;
        }
    }
    let rec = &fd * f.adjoint();
    let diff = &rec - m;
    diff.norm_l2() / m.norm_l2().max(f64::MIN_POSITIVE)
}

/// Default fraction of `λ_{k+1} − λ_1` a gap must reach to split a group.
pub const DEFAULT_GAP_FRACTION: f64 = 0.1;

/// Splits the bottom `k` eigenvalues into groups separated by large gaps.
///
/// Returns boundaries `0 = q_0 < q_1 < … < q_m = k`. A cut between `λ_q` and
/// `λ_{q+1}` qualifies when its gap is at least `gap_fraction` of the spread
/// `λ_{k+1} − λ_1` and at least twice the mean of the other gaps among
/// `λ_1 … λ_k`, so an evenly spaced spectrum stays in one group. Qualifying
/// cuts are taken largest first until `max_groups` groups exist.
pub fn detect_gap_groups(
    eigenvalues: &[f64],
    k: usize,
    max_groups: usize,
    gap_fraction: f64,
) -> Result<Vec<usize>> {
    if k == 0 || eigenvalues.len() <= k {
        return Err(Error::params(format!(
            "need more than k = {k} eigenvalues, got {}",
            eigenvalues.len()
        )));
    }
    let spread = eigenvalues[k] - eigenvalues[0];
    if spread <= 1e-12 {
        return Err(Error::DegenerateSpectrum(format!(
            "λ_{} − λ_1 = {spread:e}",
            k + 1
        )));
    }
    // gap(q) separates λ_q from λ_{q+1} (1-based), q in 1..k
    let gap = |q: usize| eigenvalues[q] - eigenvalues[q - 1];
    let internal = eigenvalues[k - 1] - eigenvalues[0];
    let mut cuts: Vec<usize> = (1..k)
        .filter(|&q| {
            let g = gap(q);
            let others = if k > 2 { (internal - g) / (k - 2) as f64 } else { 0.0 };
            g >= gap_fraction * spread && g >= 2.0 * others
        })
        .collect();
    cuts.sort_by(|&a, &b| gap(b).total_cmp(&gap(a)).then(a.cmp(&b)));
    cuts.truncate(max_groups.max(1) - 1);
    cuts.push(0);
    cuts.push(k);
    cuts.sort_unstable();
    Ok(cuts)
}

/// Checks user-supplied group boundaries `0 = q_0 < … < q_m = k`.
pub fn validate_boundaries(bounds: &[usize], k: usize) -> Result<()> {
    let ok = bounds.len() >= 2
        && bounds[0] == 0
        && bounds[bounds.len() - 1] == k
        && bounds.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::params(format!(
            "group boundaries {bounds:?} must increase strictly from 0 to k = {k}"
        )))
    }
}
