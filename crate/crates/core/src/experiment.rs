//! Seeded parameter sweeps described by a TOML configuration.
//!
//! ```toml
//! [experiment]
//! kind = "dsbm_path"        # geometric_sweep | sbm_hierarchy | sbm_threshold
//!                           # | dsbm_path | dsbm_cycle | fixture | file
//! trials = 10
//! master_seed = 7
//!
//! [sweep]
//! variable = "epsilon"
//! values = [0.01, 0.05, 0.1]   # or start / stop / step
//!
//! [generator]
//! n = 100
//!
//! [analysis]
//! k = 4
//! ```
//!
//! Trial `t` of sweep point `i` uses seed `trial_seed(master_seed, i·trials + t)`
//! for the generator and `trial_seed(that, 1)` for k-means, so results do not
//! depend on how trials are scheduled.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{analyze, AnalysisOptions, BoundReport};
use crate::bounds::BoundValue;
use crate::clustering::{ClusterOptions, EmbeddingScaling, DEFAULT_RESTARTS};
use crate::error::{Error, Result};
use crate::generators::{
    gen_dsbm, gen_geometric, gen_sbm, trial_seed, DsbmParams, Fixture, GeometricParams, SbmParams,
};
use crate::graph::{Graph, Partition};
use crate::io;
use crate::spectral::{RepresentationKind, DEFAULT_GAP_FRACTION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    GeometricSweep,
    SbmHierarchy,
    SbmThreshold,
    DsbmPath,
    DsbmCycle,
    Fixture,
    File,
}

impl ExperimentKind {
    const NAMES: [(&'static str, ExperimentKind); 7] = [
        ("geometric_sweep", Self::GeometricSweep),
        ("sbm_hierarchy", Self::SbmHierarchy),
        ("sbm_threshold", Self::SbmThreshold),
        ("dsbm_path", Self::DsbmPath),
        ("dsbm_cycle", Self::DsbmCycle),
        ("fixture", Self::Fixture),
        ("file", Self::File),
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, k)| *k)
            .ok_or_else(|| Error::config("experiment.kind", format!("unknown kind `{s}`")))
    }

    /// Variables a sweep may vary for this kind.
    pub fn sweep_variables(self) -> &'static [&'static str] {
        match self {
            Self::GeometricSweep => &["d", "std_dev", "threshold", "points_per_centre"],
            Self::SbmHierarchy => &["n", "p_in", "p_pair", "p_out"],
            Self::SbmThreshold => &["n", "alpha", "beta", "p", "q"],
            Self::DsbmPath | Self::DsbmCycle => &["epsilon", "n"],
            Self::Fixture => &["clique_size", "match_weight", "clique_weight", "block", "k"],
            Self::File => &[],
        }
    }

    fn default_k(self) -> usize {
        match self {
            Self::SbmThreshold => 2,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub generator: GeneratorSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: String,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn default_trials() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

macro_rules! optional_fields {
    ($(#[$meta:meta])* pub struct $name:ident { $($(#[$fmeta:meta])* $field:ident : $ty:ty),* $(,)? }) => {
        $(#[$meta])*
        pub struct $name {
            $(
                $(#[$fmeta])*
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }
    };
}

optional_fields! {
    /// Generator parameters; which fields apply depends on the experiment kind.
    #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct GeneratorSection {
        /// Vertices per block.
        n: usize,
        k: usize,
        p: f64,
        q: f64,
        alpha: f64,
        beta: f64,
        /// `√α − √β` when `alpha` is not given (default √2).
        threshold_gap: f64,
        p_in: f64,
        p_pair: f64,
        p_out: f64,
        probabilities: Vec<Vec<f64>>,
        points_per_centre: usize,
        std_dev: f64,
        threshold: f64,
        d: f64,
        epsilon: f64,
        fixture: String,
        clique_size: usize,
        match_weight: f64,
        clique_weight: f64,
        block: usize,
        path: String,
        labels: String,
        directed: bool,
    }
}

optional_fields! {
    #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct AnalysisSection {
        k: usize,
        k_tilde: usize,
        root_order: usize,
        representation: String,
        scaling: String,
        groups: Vec<usize>,
        restarts: usize,
        max_groups: usize,
        gap_fraction: f64,
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let field = e
                .message()
                .split('`')
                .nth(1)
                .map(str::to_string)
                .unwrap_or_else(|| "<document>".to_string());
            Error::config(field, e.message().to_string())
        })?;
        cfg.kind()?;
        cfg.sweep_values()?;
        if cfg.experiment.trials == 0 {
            return Err(Error::config("experiment.trials", "must be at least 1"));
        }
        if let Some(s) = &cfg.analysis.representation {
            s.parse::<RepresentationKind>()
                .map_err(|e| Error::config("analysis.representation", e.to_string()))?;
        }
        if let Some(s) = &cfg.analysis.scaling {
            s.parse::<EmbeddingScaling>().map_err(|e| Error::config("analysis.scaling", e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("<document>", e.to_string()))
    }

    pub fn kind(&self) -> Result<ExperimentKind> {
        ExperimentKind::parse(&self.experiment.kind)
    }

    /// The swept values, or a single `0.0` when there is no sweep.
    pub fn sweep_values(&self) -> Result<Vec<f64>> {
        let kind = self.kind()?;
        let Some(s) = &self.sweep else {
            return Ok(vec![0.0]);
        };
        if !kind.sweep_variables().contains(&s.variable.as_str()) {
            return Err(Error::config(
                "sweep.variable",
                format!("`{}` cannot be swept for {}; expected one of {:?}", s.variable, self.experiment.kind, kind.sweep_variables()),
            ));
        }
        let values = match (&s.values, s.start, s.stop, s.step) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(h)) => {
                if !(h > 0.0) || b < a {
                    return Err(Error::config("sweep.step", "need step > 0 and stop >= start"));
                }
                let n = ((b - a) / h + 1e-9).floor() as usize;
                (0..=n).map(|i| a + i as f64 * h).collect()
            }
            _ => return Err(Error::config("sweep.values", "give either `values` or `start`, `stop` and `step`")),
        };
        if values.is_empty() {
            return Err(Error::config("sweep.values", "must not be empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("sweep.values", "must be finite"));
        }
        Ok(values)
    }

    /// Generator parameters with the sweep variable set to `value`.
    pub fn generator_at(&self, value: f64) -> Result<GeneratorSection> {
        let mut g = self.generator.clone();
        let Some(s) = &self.sweep else {
            return Ok(g);
        };
        let int = || -> Result<usize> {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::config("sweep.values", format!("`{}` needs whole numbers, got {value}", s.variable)))
            }
        };
        match s.variable.as_str() {
            "n" => g.n = Some(int()?),
            "k" => g.k = Some(int()?),
            "block" => g.block = Some(int()?),
            "clique_size" => g.clique_size = Some(int()?),
            "points_per_centre" => g.points_per_centre = Some(int()?),
            "p" => g.p = Some(value),
            "q" => g.q = Some(value),
            "alpha" => g.alpha = Some(value),
            "beta" => g.beta = Some(value),
            "p_in" => g.p_in = Some(value),
            "p_pair" => g.p_pair = Some(value),
            "p_out" => g.p_out = Some(value),
            "d" => g.d = Some(value),
            "std_dev" => g.std_dev = Some(value),
            "threshold" => g.threshold = Some(value),
            "epsilon" => g.epsilon = Some(value),
            "match_weight" => g.match_weight = Some(value),
            "clique_weight" => g.clique_weight = Some(value),
            other => return Err(Error::config("sweep.variable", format!("unknown variable `{other}`"))),
        }
        Ok(g)
    }

    fn required<T: Clone>(v: &Option<T>, field: &str) -> Result<T> {
        v.clone().ok_or_else(|| Error::config(format!("generator.{field}"), "required for this experiment kind"))
    }

    /// Builds one instance and its planted partition (if any).
    pub fn instance(&self, gen: &GeneratorSection, seed: u64, base: &Path) -> Result<(Graph, Option<Partition>)> {
        let kind = self.kind()?;
        let (g, p) = match kind {
            ExperimentKind::GeometricSweep => {
                let params = GeometricParams::four_gaussians(
                    Self::required(&gen.d, "d")?,
                    gen.points_per_centre.unwrap_or(100),
                    gen.std_dev.unwrap_or(1.0),
                    gen.threshold.unwrap_or(4.0),
                );
                gen_geometric(&params, seed)?
            }
            ExperimentKind::SbmHierarchy => {
                let n = Self::required(&gen.n, "n")?;
                let params = match &gen.probabilities {
                    Some(m) => SbmParams { k: m.len(), n, probabilities: m.clone() },
                    None => {
                        let mut p = SbmParams::hierarchical_pairs(n);
                        let (pin, ppair, pout) =
                            (gen.p_in.unwrap_or(0.5), gen.p_pair.unwrap_or(0.4), gen.p_out.unwrap_or(0.1));
                        for i in 0..4 {
                            for j in 0..4 {
                                p.probabilities[i][j] = if i == j {
                                    pin
                                } else if i / 2 == j / 2 {
                                    ppair
                                } else {
                                    pout
                                };
                            }
                        }
                        p
                    }
                };
                gen_sbm(&params, seed)?
            }
            ExperimentKind::SbmThreshold => {
                let n = Self::required(&gen.n, "n")?;
                let (p, q) = match (gen.p, gen.q) {
                    (Some(p), Some(q)) => (p, q),
                    _ => {
                        let total = (2 * n) as f64;
                        let beta = Self::required(&gen.beta, "beta")?;
                        let alpha = gen.alpha.unwrap_or_else(|| {
                            let gap = gen.threshold_gap.unwrap_or(std::f64::consts::SQRT_2);
                            (beta.sqrt() + gap).powi(2)
                        });
                        let scale = total.ln() / total;
                        ((alpha * scale).min(1.0), (beta * scale).min(1.0))
                    }
                };
                gen_sbm(&SbmParams::planted(2, n, p, q), seed)?
            }
            ExperimentKind::DsbmPath | ExperimentKind::DsbmCycle => {
                let n = gen.n.unwrap_or(100);
                let eps = Self::required(&gen.epsilon, "epsilon")?;
                let params = if kind == ExperimentKind::DsbmPath {
                    DsbmParams::path4(n, eps)
                } else {
                    DsbmParams::cycle4(n, eps)
                };
                gen_dsbm(&params, seed)?
            }
            ExperimentKind::Fixture => {
                let name = Self::required(&gen.fixture, "fixture")?;
                let mut f = Fixture::by_name(&name)?;
                match &mut f {
                    Fixture::TwoCliqueMatching { clique_size, match_weight, clique_weight } => {
                        *clique_size = gen.clique_size.unwrap_or(*clique_size);
                        *match_weight = gen.match_weight.unwrap_or(*match_weight);
                        *clique_weight = gen.clique_weight.unwrap_or(*clique_weight);
                    }
                    Fixture::PerfectCycle { k, block } | Fixture::PerfectPath { k, block } => {
                        *k = gen.k.unwrap_or(*k);
                        *block = gen.block.unwrap_or(*block);
                    }
                }
                f.generate()?
            }
            ExperimentKind::File => {
                let path = base.join(Self::required(&gen.path, "path")?);
                let g = io::load_edge_list(&path, gen.directed.unwrap_or(false))?;
                let p = match &gen.labels {
                    Some(l) => Some(io::load_labels(&base.join(l), &g)?),
                    None => None,
                };
                return Ok((g, p));
            }
        };
        Ok((g, Some(p)))
    }

    /// Analysis options for a graph of the given direction.
    pub fn analysis_options(&self, directed: bool, k_default: usize) -> Result<AnalysisOptions> {
        let a = &self.analysis;
        let k = a.k.unwrap_or(k_default);
        if k == 0 {
            return Err(Error::config("analysis.k", "must be at least 1"));
        }
        let kind = match &a.representation {
            Some(s) => s.parse().map_err(|e: Error| Error::config("analysis.representation", e.to_string()))?,
            None => RepresentationKind::default_for(directed),
        };
        let scaling = match &a.scaling {
            Some(s) => s.parse().map_err(|e: Error| Error::config("analysis.scaling", e.to_string()))?,
            None => EmbeddingScaling::default(),
        };
        Ok(AnalysisOptions {
            cluster: ClusterOptions {
                k,
                num_vectors: a.k_tilde.unwrap_or(if directed { 1 } else { k }),
                kind,
                root_order: a.root_order.unwrap_or(k),
                scaling,
                restarts: a.restarts.unwrap_or(DEFAULT_RESTARTS),
                seed: 0,
            },
            groups: a.groups.clone(),
            max_groups: a.max_groups.unwrap_or(k),
            gap_fraction: a.gap_fraction.unwrap_or(DEFAULT_GAP_FRACTION),
        })
    }
}

/// One trial: a report or the numerical failure that stopped it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Report(Box<BoundReport>),
    Failed { seed: u64, error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub sweep_variable: Option<String>,
    pub sweep_value: f64,
    pub trials: Vec<TrialOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec_version: String,
    pub config: ExperimentConfig,
    pub points: Vec<SweepPoint>,
}

/// Merges each run of `factor` consecutive planted blocks into one, so a
/// hierarchy can be analysed at a coarser level.
fn merge_blocks(p: &Partition, factor: usize) -> Result<Partition> {
    Partition::new(p.k() / factor, p.assignment().iter().map(|&c| c / factor).collect())
}

/// Runs every trial of every sweep point. `base` resolves relative paths in
/// `file` experiments.
pub fn run_experiment(cfg: &ExperimentConfig, base: &Path) -> Result<ExperimentResult> {
    let kind = cfg.kind()?;
    let values = cfg.sweep_values()?;
    let trials = cfg.experiment.trials;
    let mut points = Vec::with_capacity(values.len());
    for (i, &value) in values.iter().enumerate() {
        let gen = cfg.generator_at(value)?;
        let k_default = gen.k.filter(|_| kind == ExperimentKind::Fixture).unwrap_or(match &gen.fixture {
            Some(name) if kind == ExperimentKind::Fixture => match Fixture::by_name(name)? {
                Fixture::TwoCliqueMatching { .. } => 2,
                Fixture::PerfectCycle { k, .. } | Fixture::PerfectPath { k, .. } => k,
            },
            _ => match (&gen.probabilities, kind) {
                (Some(m), ExperimentKind::SbmHierarchy) => m.len(),
                _ => kind.default_k(),
            },
        });
        let run = |t: usize| -> Result<TrialOutcome> {
            let seed = trial_seed(cfg.experiment.master_seed, (i * trials + t) as u64);
            let one = || -> Result<BoundReport> {
                let (g, truth) = cfg.instance(&gen, seed, base)?;
                let truth = match (truth, cfg.analysis.k) {
                    (Some(t), Some(k)) if k < t.k() && t.k() % k == 0 => Some(merge_blocks(&t, t.k() / k)?),
                    (t, _) => t,
                };
                let k = truth.as_ref().map_or(k_default, Partition::k);
                let mut opts = cfg.analysis_options(g.is_directed(), k)?;
                opts.cluster.seed = trial_seed(seed, 1);
                let source = format!("{}[{}={value}]#{t}", cfg.experiment.kind, cfg.sweep.as_ref().map_or("-", |s| s.variable.as_str()));
                analyze(&g, &opts, truth.as_ref(), &source)
            };
            match one() {
                Ok(r) => Ok(TrialOutcome::Report(Box::new(r))),
                Err(e) if e.is_numerical() => {
                    log::warn!("trial {t} at {value}: {e}");
                    Ok(TrialOutcome::Failed { seed, error: e.to_string() })
                }
                Err(e) => Err(e),
            }
        };
        #[cfg(feature = "parallel")]
        let outcomes: Vec<Result<TrialOutcome>> = {
            use rayon::prelude::*;
            (0..trials).into_par_iter().map(run).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let outcomes: Vec<Result<TrialOutcome>> = (0..trials).map(run).collect();
        points.push(SweepPoint {
            sweep_variable: cfg.sweep.as_ref().map(|s| s.variable.clone()),
            sweep_value: value,
            trials: outcomes.into_iter().collect::<Result<_>>()?,
        });
    }
    Ok(ExperimentResult { spec_version: crate::analysis::SPEC_VERSION.to_string(), config: cfg.clone(), points })
}

/// Metrics summarised per sweep point. Bounds refer to the planted partition
/// when one exists, otherwise to the clusters found.
pub const METRICS: [&str; 16] = [
    "thm1",
    "cor2",
    "thm3",
    "cor4",
    "thm5_rayleigh",
    "thm5_psi",
    "laenen_sun",
    "true",
    "true_thm3",
    "true_cor4",
    "recovery_fraction",
    "psi",
    "rho_tilde",
    "theta",
    "eta",
    "lambda_k1",
];

/// The value of `metric` in one report, if defined.
pub fn metric(r: &BoundReport, metric: &str) -> Option<f64> {
    let c = r.truth.as_ref().unwrap_or(&r.found);
    let b = &c.bounds;
    let v = |x: &BoundValue| x.value;
    match metric {
        "thm1" => v(&b.thm1),
        "cor2" => v(&b.cor2),
        "thm3" => v(&b.thm3),
        "cor4" => v(&b.cor4),
        "thm5_rayleigh" => v(&b.thm5_rayleigh),
        "thm5_psi" => v(&b.thm5_psi),
        "laenen_sun" => v(&b.laenen_sun),
        "true" => Some(c.true_distance),
        "true_thm3" => c.true_distance_detail.thm3,
        "true_cor4" => c.true_distance_detail.cor4,
        "recovery_fraction" => r.clustering.recovery.map(|x| x.fraction),
        "psi" => c.quality.psi,
        "rho_tilde" => c.quality.rho_tilde,
        "theta" => c.quality.theta,
        "eta" => c.quality.eta,
        "lambda_k1" => r.spectrum.get(r.input.k).copied(),
        _ => None,
    }
    .filter(|x| x.is_finite())
}

/// Mean, population standard deviation and count of the defined values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub n: usize,
}

pub fn summarize(values: &[f64]) -> Summary {
    if values.is_empty() {
        return Summary { mean: None, std: None, n: 0 };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Summary { mean: Some(mean), std: Some(var.sqrt()), n: values.len() }
}

impl SweepPoint {
    pub fn reports(&self) -> impl Iterator<Item = &BoundReport> {
        self.trials.iter().filter_map(|t| match t {
            TrialOutcome::Report(r) => Some(r.as_ref()),
            TrialOutcome::Failed { .. } => None,
        })
    }

    pub fn summary(&self, name: &str) -> Summary {
        let vals: Vec<f64> = self.reports().filter_map(|r| metric(r, name)).collect();
        summarize(&vals)
    }
}

impl ExperimentResult {
    /// One row per sweep point: `sweep_value`, `failed`, then
    /// `<metric>_mean,<metric>_std,<metric>_n` for every metric. Undefined
    /// entries are written as `null`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sweep_value,failed");
        for m in METRICS {
            let _ = write!(out, ",{m}_mean,{m}_std,{m}_n");
        }
        out.push('\n');
        let fmt = |x: Option<f64>| x.map_or_else(|| "null".to_string(), |v| format!("{v}"));
        for p in &self.points {
            let failed = p.trials.len() - p.reports().count();
            let _ = write!(out, "{},{failed}", p.sweep_value);
            for m in METRICS {
                let s = p.summary(m);
                let _ = write!(out, ",{},{},{}", fmt(s.mean), fmt(s.std), s.n);
            }
            out.push('\n');
        }
        out
    }
}

/// Where an experiment writes its outputs: `<dir>/summary.csv` and
/// `<dir>/point_<i>.json`.
pub fn output_paths(dir: &Path, points: usize) -> (PathBuf, Vec<PathBuf>) {
    (dir.join("summary.csv"), (0..points).map(|i| dir.join(format!("point_{i:03}.json"))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CFG: &str = r#"
[experiment]
kind = "dsbm_path"
trials = 2
master_seed = 3

[sweep]
variable = "epsilon"
values = [0.05, 0.2]

[generator]
n = 20

[analysis]
k = 4
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml(CFG).unwrap();
        assert_eq!(cfg.kind().unwrap(), ExperimentKind::DsbmPath);
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = CFG.replace("trials = 2", "trials = 0");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("experiment.trials"));
        let bad = CFG.replace("variable = \"epsilon\"", "variable = \"d\"");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("sweep.variable"));
        let bad = CFG.replace("k = 4", "k = 4\nbogus = 1");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("bogus"));
        let bad = CFG.replace("values = [0.05, 0.2]", "values = []");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("sweep.values"));
        let bad = CFG.replace("k = 4", "k = 4\nscaling = \"odd\"");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("analysis.scaling"));
    }

    #[test]
    fn range_expansion() {
        let cfg = ExperimentConfig::from_toml(&CFG.replace("values = [0.05, 0.2]", "start = 0.1\nstop = 0.3\nstep = 0.1"))
            .unwrap();
        let v = cfg.sweep_values().unwrap();
        assert_eq!(v.len(), 3);
        assert!((v[2] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn deterministic_run_and_csv() {
        let cfg = ExperimentConfig::from_toml(CFG).unwrap();
        let a = run_experiment(&cfg, Path::new(".")).unwrap();
        let b = run_experiment(&cfg, Path::new(".")).unwrap();
        assert_eq!(a, b);
        let csv = a.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        let header: Vec<&str> = lines[0].split(',').collect();
        assert_eq!(header.len(), 2 + 3 * METRICS.len());
        assert!(header.contains(&"thm5_rayleigh_mean"));
        assert!(!csv.contains("NaN") && !csv.contains("inf"));
    }

    #[test]
    fn single_trial_has_zero_std() {
        let cfg = ExperimentConfig::from_toml(&CFG.replace("trials = 2", "trials = 1")).unwrap();
        let r = run_experiment(&cfg, Path::new(".")).unwrap();
        for p in &r.points {
            for m in METRICS {
                let s = p.summary(m);
                if s.n > 0 {
                    assert_eq!(s.std, Some(0.0), "{m}");
                }
            }
        }
    }

    #[test]
    fn population_std() {
        let s = summarize(&[1.0, 3.0]);
        assert_eq!(s.mean, Some(2.0));
        assert_eq!(s.std, Some(1.0));
        assert_eq!(summarize(&[]).n, 0);
    }
}
