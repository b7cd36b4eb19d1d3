//! The full certification pipeline and its serialisable report.
//!
//! [`analyze`] clusters a graph, then builds indicators from the clusters it
//! found (and, separately, from a known partition) and reports every bound
//! next to the exact distance it certifies.

use faer::MatRef;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bound_cor2, bound_cor4, bound_laenen_sun, bound_thm1, bound_thm3_total, bound_thm5,
    kmeans_misclassification_bound, BoundValue,
};
use crate::clustering::{
    embed, evaluate_recovery, spectral_cluster, ClusterOptions, EmbeddingScaling, Recovery,
};
use crate::error::{Error, Result};
use crate::graph::{cluster_volumes, cyclic_expansion, kway_expansion, theta_k, Graph, Partition};
use crate::indicators::{degree_indicators, digraph_chi, replace_first, true_subspace_distance, IndicatorSet};
use crate::spectral::{
    detect_gap_groups, validate_boundaries, EigenSystem, Representation, RepresentationKind,
    DEFAULT_GAP_FRACTION,
};

/// Version of the JSON report layout.
pub const SPEC_VERSION: &str = "1.0.0";

/// Slack allowed when comparing a bound with the distance it certifies.
pub const SOUNDNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub cluster: ClusterOptions,
    /// Explicit group boundaries for the recursive bound.
    pub groups: Option<Vec<usize>>,
    pub max_groups: usize,
    pub gap_fraction: f64,
}

impl AnalysisOptions {
    pub fn defaults(k: usize, directed: bool) -> Self {
        Self {
            cluster: ClusterOptions::defaults(k, directed),
            groups: None,
            max_groups: k.max(1),
            gap_fraction: DEFAULT_GAP_FRACTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub source: String,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub directed: bool,
    pub k: usize,
    pub k_tilde: usize,
    pub root_order: Option<usize>,
    pub representation: RepresentationKind,
    pub scaling: EmbeddingScaling,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub thm1: BoundValue,
    pub cor2: BoundValue,
    pub thm3: BoundValue,
    pub cor4: BoundValue,
    pub thm5_rayleigh: BoundValue,
    pub thm5_psi: BoundValue,
    pub laenen_sun: BoundValue,
    pub thm3_per_group: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub misclassification: Option<MisclassificationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisclassificationReport {
    pub bound: f64,
    pub applicable: bool,
    /// `U`, the exact eigenvector–indicator distance.
    pub u: f64,
    /// `𝒟`, the smallest distance between weighted cluster means.
    pub separation: f64,
    /// Measured `objective(found) / objective(partition) − 1`, floored at 0.
    pub alpha: f64,
    pub min_cluster_volume: f64,
    pub measured_sym_diff_vol: Option<f64>,
}

/// Exact distances matching each bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueDistances {
    /// Target of the recursive bound: the sum of the per-group distances.
    pub thm3: Option<f64>,
    pub per_group: Vec<f64>,
    /// Distance to the indicators with `g_1` replaced by `f_1`.
    pub cor4: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quality {
    pub psi: Option<f64>,
    pub rho_tilde: Option<f64>,
    pub theta: Option<f64>,
    pub eta: Option<f64>,
}

/// Bounds and distances for one partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub gammas: Vec<f64>,
    /// Rayleigh quotients of the Ritz basis of the indicator span, which the
    /// recursive bound uses. Empty for digraphs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ritz_gammas: Vec<f64>,
    pub groups: Vec<usize>,
    pub bounds: Bounds,
    pub true_distance: f64,
    pub true_distance_detail: TrueDistances,
    pub quality: Quality,
}

impl Certificate {
    /// Every defined bound paired with the distance it certifies. The
    /// Laenen–Sun bound certifies a different indicator and is left out.
    pub fn checked_pairs(&self) -> Vec<(&'static str, f64, f64)> {
        let b = &self.bounds;
        let t = &self.true_distance_detail;
        let mut out = Vec::new();
        let mut push = |name, bound: &BoundValue, target: Option<f64>| {
            if let (Some(v), Some(d)) = (bound.value, target) {
                out.push((name, v, d));
            }
        };
        push("thm1", &b.thm1, Some(self.true_distance));
        push("cor2", &b.cor2, Some(self.true_distance));
        push("thm3", &b.thm3, t.thm3);
        push("cor4", &b.cor4, t.cor4);
        push("thm5_rayleigh", &b.thm5_rayleigh, Some(self.true_distance));
        push("thm5_psi", &b.thm5_psi, Some(self.true_distance));
        if b.thm3.value.is_some() {
            for (i, (&bound, &d)) in b.thm3_per_group.iter().zip(&t.per_group).enumerate() {
                out.push((GROUP_NAMES.get(i).copied().unwrap_or("thm3_group"), bound, d));
            }
        }
        out
    }

    /// Descriptions of bounds falling below their target by more than `tol`.
    pub fn violations(&self, tol: f64) -> Vec<String> {
        self.checked_pairs()
            .into_iter()
            .filter(|(_, b, d)| *b < d - tol)
            .map(|(name, b, d)| format!("{name}: bound {b} < true {d}"))
            .collect()
    }
}

const GROUP_NAMES: [&str; 8] = [
    "thm3_group1",
    "thm3_group2",
    "thm3_group3",
    "thm3_group4",
    "thm3_group5",
    "thm3_group6",
    "thm3_group7",
    "thm3_group8",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringInfo {
    pub assignment: Vec<usize>,
    pub objective: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub recovery: Option<Recovery>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub spec_version: String,
    pub input: InputInfo,
    pub spectrum: Vec<f64>,
    #[serde(flatten)]
    pub found: Certificate,
    pub clustering: ClusteringInfo,
    /// The same analysis for a known partition, when one is supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<Certificate>,
}

impl BoundReport {
    pub fn violations(&self, tol: f64) -> Vec<String> {
        let mut v = self.found.violations(tol);
        if let Some(t) = &self.truth {
            v.extend(t.violations(tol).into_iter().map(|s| format!("truth {s}")));
        }
        v
    }
}

/// Clusters `g` and certifies the result (and `truth`, when given).
pub fn analyze(g: &Graph, opts: &AnalysisOptions, truth: Option<&Partition>, source: &str) -> Result<BoundReport> {
    let c = &opts.cluster;
    if g.is_directed() != c.kind.is_directed() {
        return Err(Error::KindMismatch(format!(
            "{} cannot represent a{} graph",
            c.kind,
            if g.is_directed() { " directed" } else { "n undirected" }
        )));
    }
    if g.is_directed() && c.k < 2 {
        return Err(Error::params("digraph analysis needs k >= 2"));
    }
    if g.n_vertices() <= c.k {
        return Err(Error::params(format!("k = {} needs more than k vertices", c.k)));
    }
    if let Some(t) = truth {
        if t.len() != g.n_vertices() || t.k() != c.k {
            return Err(Error::InvalidPartition(format!(
                "known partition has {} vertices and k = {}, expected {} and {}",
                t.len(),
                t.k(),
                g.n_vertices(),
                c.k
            )));
        }
    }
    if let Some(q) = &opts.groups {
        validate_boundaries(q, c.k)?;
    }
    let sc = spectral_cluster(g, c)?;
    let es = &sc.eigensystem;
    let spectrum = es.eigenvalues.clone();
    let found = certify(g, &sc.representation, es, &sc.partition, opts)?;
    let recovery = truth.map(|t| evaluate_recovery(g, &sc.partition, t)).transpose()?;
    let truth_cert = match truth {
        Some(t) => {
            let mut cert = certify(g, &sc.representation, es, t, opts)?;
            if !g.is_directed() && c.num_vectors == c.k && c.k >= 2 {
                cert.bounds.misclassification =
                    misclassification(g, es, t, c, cert.true_distance, sc.kmeans.objective, recovery)?;
            }
            Some(cert)
        }
        None => None,
    };
    Ok(BoundReport {
        spec_version: SPEC_VERSION.to_string(),
        input: InputInfo {
            source: source.to_string(),
            n_vertices: g.n_vertices(),
            n_edges: g.n_edges(),
            directed: g.is_directed(),
            k: c.k,
            k_tilde: c.num_vectors,
            root_order: sc.representation.root_order(),
            representation: c.kind,
            scaling: c.scaling,
            seed: c.seed,
        },
        spectrum,
        found,
        clustering: ClusteringInfo {
            assignment: sc.partition.assignment().to_vec(),
            objective: sc.kmeans.objective,
            iterations: sc.kmeans.iterations,
            restarts: sc.kmeans.restarts_used,
            recovery,
        },
        truth: truth_cert,
    })
}

/// Bounds and exact distances for the indicators of partition `p`.
pub fn certify(
    g: &Graph,
    r: &Representation,
    es: &EigenSystem,
    p: &Partition,
    opts: &AnalysisOptions,
) -> Result<Certificate> {
    if g.is_directed() {
        certify_directed(g, r, es, p)
    } else {
        certify_undirected(g, r, es, p, opts)
    }
}

fn undirected_only() -> BoundValue {
    BoundValue::na("undirected graphs only")
}

fn directed_only() -> BoundValue {
    BoundValue::na("directed graphs only")
}

fn certify_undirected(
    g: &Graph,
    r: &Representation,
    es: &EigenSystem,
    p: &Partition,
    opts: &AnalysisOptions,
) -> Result<Certificate> {
    let k = p.k();
    let eigs = &es.eigenvalues;
    if eigs.len() <= k {
        return Err(Error::params("eigensystem is too short for k"));
    }
    let kf = k as f64;
    let ind = degree_indicators(g, p, r)?;
    let gammas = ind.rayleigh().to_vec();
    let fk = es.block(k);
    let true_distance = true_subspace_distance(fk, ind.vectors())?;

    let thm1 = BoundValue::from_result(bound_thm1(eigs, &gammas), kf)?;
    let rho_tilde = kway_expansion(g, p).ok();
    let cor2 = match (r.kind().is_normalized(), rho_tilde) {
        (true, Some(rho)) => BoundValue::from_result(bound_cor2(rho, k, eigs[k]), kf)?,
        (false, _) => BoundValue::na("needs the normalised Laplacian"),
        (true, None) => BoundValue::na("conductance undefined"),
    };

    let ritz = ind.ritz(r.matrix())?;
    let candidates = match &opts.groups {
        Some(q) => vec![q.clone()],
        None => match detect_gap_groups(&eigs[..=k], k, opts.max_groups, opts.gap_fraction) {
            Ok(q) => cut_subsets(&q),
            Err(Error::DegenerateSpectrum(_)) => vec![vec![0, k]],
            Err(e) => return Err(e),
        },
    };
    let mut best: Option<(Vec<usize>, f64, Vec<f64>)> = None;
    let mut collapse = None;
    for groups in &candidates {
        // one group is the plain bound, and the trace is basis-independent
        let gam = if groups.len() == 2 { &gammas } else { ritz.rayleigh() };
        match bound_thm3_total(eigs, gam, groups) {
            Ok((total, per)) => {
                if best.as_ref().is_none_or(|b| total < b.1) {
                    best = Some((groups.clone(), total, per));
                }
            }
            Err(e @ Error::GapCollapse(_)) => collapse = Some(e),
            Err(e) => return Err(e),
        }
    }
    let (groups, thm3, per_group) = match (best, collapse) {
        (Some((groups, total, per)), _) => (groups, BoundValue::new(total, kf), per),
        (None, e) => (
            candidates[candidates.len() - 1].clone(),
            BoundValue::na(e.map_or("no grouping".into(), |e| e.to_string())),
            Vec::new(),
        ),
    };
    let per_group_true = per_group_distances(fk, ritz.vectors(), &groups)?;
    let thm3_true = Some(per_group_true.iter().sum());

    let (cor4, cor4_true) = if k >= 2 {
        match replace_first(&ind, es.block(1), r.matrix(), None) {
            Ok(rep) => (
                BoundValue::from_result(bound_cor4(eigs, rep.rayleigh()), kf - 1.0)?,
                Some(true_subspace_distance(fk, rep.vectors())?),
            ),
            Err(e @ Error::RankCollapse(_)) => (BoundValue::na(e.to_string()), None),
            Err(e) => return Err(e),
        }
    } else {
        (BoundValue::na("needs k >= 2"), None)
    };

    Ok(Certificate {
        gammas,
        ritz_gammas: ritz.rayleigh().to_vec(),
        groups,
        bounds: Bounds {
            thm1,
            cor2,
            thm3,
            cor4,
            thm5_rayleigh: directed_only(),
            thm5_psi: directed_only(),
            laenen_sun: directed_only(),
            thm3_per_group: per_group,
            misclassification: None,
        },
        true_distance,
        true_distance_detail: TrueDistances { thm3: thm3_true, per_group: per_group_true, cor4: cor4_true },
        quality: Quality { psi: None, rho_tilde, theta: None, eta: None },
    })
}

const MAX_SUBSET_CUTS: usize = 10;

/// Every grouping that keeps a subset of the inner cuts of `bounds`, fewest
/// cuts first. Each yields a valid recursive bound on its own target.
/// Past `MAX_SUBSET_CUTS` cuts only the two extremes are tried.
fn cut_subsets(bounds: &[usize]) -> Vec<Vec<usize>> {
    let inner = &bounds[1..bounds.len() - 1];
    let k = bounds[bounds.len() - 1];
    if inner.len() > MAX_SUBSET_CUTS {
        return vec![vec![0, k], bounds.to_vec()];
    }
    let mut masks: Vec<u32> = (0..1u32 << inner.len()).collect();
    masks.sort_by_key(|m| m.count_ones());
    masks
        .into_iter()
        .map(|mask| {
            let mut g = vec![0];
            g.extend(inner.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &q)| q));
            g.push(k);
            g
        })
        .collect()
}

/// Distance of each eigenvector group from the indicators up to its end.
fn per_group_distances(
    f: MatRef<'_, faer::c64>,
    g: MatRef<'_, faer::c64>,
    groups: &[usize],
) -> Result<Vec<f64>> {
    groups
        .windows(2)
        .map(|w| true_subspace_distance(f.subcols(w[0], w[1] - w[0]), g.subcols(0, w[1])))
        .collect()
}

fn certify_directed(g: &Graph, r: &Representation, es: &EigenSystem, p: &Partition) -> Result<Certificate> {
    let k = p.k();
    let eigs = &es.eigenvalues;
    if eigs.len() < 2 {
        return Err(Error::params("eigensystem is too short"));
    }
    let chi: IndicatorSet = digraph_chi(g, p, r)?;
    let gamma = chi.rayleigh()[0];
    let psi = cyclic_expansion(g, p)?;
    let theta = theta_k(g, p).ok();
    let true_distance = true_subspace_distance(es.block(1), chi.vectors())?;
    // The Ψ form rests on Γ ≤ 4Ψ, which needs the normalised matrix at root order k.
    let psi_form_valid = r.kind() == RepresentationKind::NormalizedHermitianLaplacian && r.root_order() == Some(k);
    let (thm5_rayleigh, thm5_psi) = match bound_thm5(gamma, psi, eigs[0], eigs[1]) {
        Ok((ray, ps)) => (
            BoundValue::new(ray, 1.0),
            if psi_form_valid {
                BoundValue::new(ps, 1.0)
            } else {
                BoundValue::na("needs the normalised Hermitian Laplacian at root order k")
            },
        ),
        Err(e @ Error::GapCollapse(_)) => (BoundValue::na(e.to_string()), BoundValue::na(e.to_string())),
        Err(e) => return Err(e),
    };
    let ls = bound_laenen_sun(g, p)?;
    Ok(Certificate {
        gammas: vec![gamma],
        ritz_gammas: Vec::new(),
        groups: Vec::new(),
        bounds: Bounds {
            thm1: undirected_only(),
            cor2: undirected_only(),
            thm3: undirected_only(),
            cor4: undirected_only(),
            thm5_rayleigh,
            thm5_psi,
            laenen_sun: ls.bound,
            thm3_per_group: Vec::new(),
            misclassification: None,
        },
        true_distance,
        true_distance_detail: TrueDistances { thm3: None, per_group: Vec::new(), cor4: None },
        quality: Quality { psi: Some(psi), rho_tilde: None, theta, eta: ls.eta },
    })
}

fn misclassification(
    g: &Graph,
    es: &EigenSystem,
    truth: &Partition,
    c: &ClusterOptions,
    u: f64,
    found_objective: f64,
    recovery: Option<Recovery>,
) -> Result<Option<MisclassificationReport>> {
    let e = embed(g, es.block(c.k), c.kind, c.scaling)?;
    let means = e.centroids(truth.assignment(), c.k);
    let mut separation = f64::INFINITY;
    for i in 0..c.k {
        for j in i + 1..c.k {
            let d: f64 = means[i].iter().zip(&means[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            separation = separation.min(d.sqrt());
        }
    }
    if !(separation > 0.0) {
        return Ok(None);
    }
    let truth_objective = e.objective(truth.assignment(), c.k);
    let alpha = if truth_objective > 0.0 {
        (found_objective / truth_objective - 1.0).max(0.0)
    } else if found_objective <= 0.0 {
        0.0
    } else {
        return Ok(None);
    };
    let min_cluster_volume = cluster_volumes(g, truth)?.into_iter().fold(f64::INFINITY, f64::min);
    let m = kmeans_misclassification_bound(u, separation, alpha, min_cluster_volume)?;
    Ok(Some(MisclassificationReport {
        bound: m.bound,
        applicable: m.applicable,
        u,
        separation,
        alpha,
        min_cluster_volume,
        measured_sym_diff_vol: recovery.map(|r| r.sym_diff_vol),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Fixture;

    #[test]
    fn two_clique_report() {
        let (g, truth) = Fixture::by_name("two_clique_matching").unwrap().generate().unwrap();
        let rep = analyze(&g, &AnalysisOptions::defaults(2, false), Some(&truth), "two_clique").unwrap();
        assert!(rep.violations(SOUNDNESS_TOL).is_empty());
        assert!(rep.found.bounds.cor4.value.unwrap().abs() < 1e-8);
        assert!(rep.found.true_distance.abs() < 1e-8);
        assert_eq!(rep.clustering.recovery.unwrap().sym_diff_vol, 0.0);
        let json = serde_json::to_value(&rep).unwrap();
        for key in ["spec_version", "input", "spectrum", "gammas", "groups", "bounds", "true_distance", "quality", "clustering"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert!(json["bounds"]["thm5_rayleigh"]["value"].is_null());
    }

    #[test]
    fn cycle_report() {
        let (g, truth) = Fixture::by_name("perfect_cycle").unwrap().generate().unwrap();
        let rep = analyze(&g, &AnalysisOptions::defaults(5, true), Some(&truth), "cycle").unwrap();
        let b = &rep.found.bounds;
        assert!(b.thm5_rayleigh.value.unwrap() < 1e-8 && b.thm5_psi.value.unwrap() < 1e-8);
        assert!(rep.found.true_distance < 1e-8);
        assert_eq!(rep.found.quality.psi, Some(0.0));
        assert!(rep.violations(SOUNDNESS_TOL).is_empty());
    }

    #[test]
    fn kind_and_truth_checks() {
        let (g, truth) = Fixture::by_name("two_clique_matching").unwrap().generate().unwrap();
        let mut opts = AnalysisOptions::defaults(2, false);
        opts.cluster.kind = RepresentationKind::HermitianLaplacian;
        assert!(matches!(analyze(&g, &opts, None, "x"), Err(Error::KindMismatch(_))));
        let opts = AnalysisOptions::defaults(3, false);
        assert!(analyze(&g, &opts, Some(&truth), "x").is_err());
    }
}
