//! Browser bindings. Each export returns a JSON document for the page in
//! `www/` to draw; failures surface as a thrown string.

use serde::Serialize;
use spectra_cert::analysis::{analyze, AnalysisOptions, Bounds, BoundReport};
use spectra_cert::clustering::embed;
use spectra_cert::generators::{gen_dsbm, gen_geometric_points, DsbmParams, Fixture, GeometricParams};
use spectra_cert::spectral::{build_representation, eigensystem};
use wasm_bindgen::prelude::*;

/// Largest graph the page may request; the dense solver is cubic.
pub const MAX_VERTICES: usize = 800;

#[derive(Serialize)]
pub struct View {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub spectrum: Vec<f64>,
    pub groups: Vec<usize>,
    pub bounds: Bounds,
    pub true_distance: f64,
    pub psi: Option<f64>,
    pub rho_tilde: Option<f64>,
    pub misclassified_fraction: Option<f64>,
    /// Planar coordinates per vertex: sample positions or a spectral embedding.
    pub points: Vec<[f64; 2]>,
    pub truth: Vec<usize>,
    pub found: Vec<usize>,
    /// Edges as vertex pairs, present only for small graphs.
    pub edges: Vec<[usize; 2]>,
}

fn view(report: &BoundReport, g: &spectra_cert::Graph, points: Vec<[f64; 2]>, truth: Vec<usize>) -> View {
    let cert = report.truth.as_ref().unwrap_or(&report.found);
    View {
        n_vertices: g.n_vertices(),
        n_edges: g.n_edges(),
        spectrum: report.spectrum.clone(),
        groups: cert.groups.clone(),
        bounds: cert.bounds.clone(),
        true_distance: cert.true_distance,
        psi: cert.quality.psi,
        rho_tilde: cert.quality.rho_tilde,
        misclassified_fraction: report.clustering.recovery.as_ref().map(|r| r.fraction),
        points,
        truth,
        found: report.clustering.assignment.clone(),
        edges: if g.n_edges() <= 4000 { g.edges().iter().map(|e| [e.u, e.v]).collect() } else { Vec::new() },
    }
}

fn check_size(n: usize) -> Result<(), String> {
    if n > MAX_VERTICES {
        return Err(format!("{n} vertices; the demo allows at most {MAX_VERTICES}"));
    }
    Ok(())
}

/// Noisy directed path or cycle of four blocks, drawn by the phase of each
/// vertex in the bottom eigenvector of the Hermitian Laplacian.
pub fn dsbm(cycle: bool, n: usize, epsilon: f64, seed: u64) -> Result<View, String> {
    check_size(4 * n)?;
    let params = if cycle { DsbmParams::cycle4(n, epsilon) } else { DsbmParams::path4(n, epsilon) };
    let (g, truth) = gen_dsbm(&params, seed).map_err(|e| e.to_string())?;
    let mut opts = AnalysisOptions::defaults(4, true);
    opts.cluster.seed = seed;
    let report = analyze(&g, &opts, Some(&truth), "dsbm").map_err(|e| e.to_string())?;
    let c = &opts.cluster;
    let r = build_representation(&g, c.kind, c.root_order).map_err(|e| e.to_string())?;
    let es = eigensystem(&r, Some(1)).map_err(|e| e.to_string())?;
    let e = embed(&g, es.block(1), c.kind, c.scaling).map_err(|e| e.to_string())?;
    let points = (0..e.len()).map(|u| [e.point(u)[0], e.point(u)[1]]).collect();
    Ok(view(&report, &g, points, truth.assignment().to_vec()))
}

/// Four Gaussian clouds at horizontal separation `d`.
pub fn geometric(d: f64, points_per_centre: usize, seed: u64) -> Result<View, String> {
    check_size(4 * points_per_centre)?;
    let params = GeometricParams::four_gaussians(d, points_per_centre, 1.0, 4.0);
    let (g, truth, points) = gen_geometric_points(&params, seed).map_err(|e| e.to_string())?;
    let mut opts = AnalysisOptions::defaults(4, false);
    opts.cluster.seed = seed;
    let report = analyze(&g, &opts, Some(&truth), "geometric").map_err(|e| e.to_string())?;
    Ok(view(&report, &g, points, truth.assignment().to_vec()))
}

/// Two cliques joined by a perfect matching, laid out on two circles.
pub fn two_clique(clique_size: usize, match_weight: f64, clique_weight: f64) -> Result<View, String> {
    check_size(2 * clique_size)?;
    let f = Fixture::TwoCliqueMatching { clique_size, match_weight, clique_weight };
    let (g, truth) = f.generate().map_err(|e| e.to_string())?;
    let report = analyze(&g, &AnalysisOptions::defaults(2, false), Some(&truth), "two_clique").map_err(|e| e.to_string())?;
    let points = (0..g.n_vertices())
        .map(|u| {
            let (side, i) = (u / clique_size, u % clique_size);
            let a = std::f64::consts::TAU * i as f64 / clique_size as f64;
            [if side == 0 { -1.3 } else { 1.3 } + a.cos(), a.sin()]
        })
        .collect();
    Ok(view(&report, &g, points, truth.assignment().to_vec()))
}

fn to_js(v: Result<View, String>) -> Result<String, JsValue> {
    v.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = dsbmDemo)]
pub fn dsbm_demo(cycle: bool, n: usize, epsilon: f64, seed: u32) -> Result<String, JsValue> {
    to_js(dsbm(cycle, n, epsilon, seed.into()))
}

#[wasm_bindgen(js_name = geometricDemo)]
pub fn geometric_demo(d: f64, points_per_centre: usize, seed: u32) -> Result<String, JsValue> {
    to_js(geometric(d, points_per_centre, seed.into()))
}

#[wasm_bindgen(js_name = twoCliqueDemo)]
pub fn two_clique_demo(clique_size: usize, match_weight: f64, clique_weight: f64) -> Result<String, JsValue> {
    to_js(two_clique(clique_size, match_weight, clique_weight))
}
