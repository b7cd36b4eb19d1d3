//! Structure-theorem bounds on the distance between bottom eigenvectors and
//! the span of cluster indicators.
//!
//! Every bound takes its spectral inputs as plain slices so it can be checked
//! against hand arithmetic. Eigenvalues are 0-based here: `eigs[0]` is `λ_1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{theta_k, Graph, Partition};
use crate::spectral::{build_representation, eigensystem, RepresentationKind};

const GAP_TOL: f64 = 1e-12;
const NEG_WARN: f64 = 1e-8;

/// A bound as reported: a finite value or an explicit not-applicable marker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: Option<f64>,
    /// True when the value exceeds the largest the bounded quantity can be.
    pub vacuous: bool,
    pub reason: Option<String>,
}

impl BoundValue {
    pub fn new(value: f64, cap: f64) -> Self {
        if value.is_finite() {
            Self { value: Some(value), vacuous: value > cap, reason: None }
        } else {
            Self::na(format!("non-finite value {value}"))
        }
    }

    pub fn na(reason: impl Into<String>) -> Self {
        Self { value: None, vacuous: false, reason: Some(reason.into()) }
    }

    /// Maps gap-collapse style failures to a marker; other errors propagate.
    pub fn from_result(r: Result<f64>, cap: f64) -> Result<Self> {
        match r {
            Ok(v) => Ok(Self::new(v, cap)),
            Err(e @ (Error::GapCollapse(_) | Error::DegenerateSpectrum(_))) => Ok(Self::na(e.to_string())),
            Err(e) => Err(e),
        }
    }
}

fn clamped(num: f64, what: &str) -> f64 {
    if num < -NEG_WARN {
        log::warn!("{what}: negative numerator {num:e} clamped to 0");
    }
    num.max(0.0)
}

fn need(eigs: &[f64], len: usize) -> Result<()> {
    if eigs.len() < len {
        return Err(Error::params(format!("need {len} eigenvalues, got {}", eigs.len())));
    }
    Ok(())
}

/// `(Σ γ_i − k λ_1) / (λ_{k+1} − λ_1)` with `k = gammas.len()`.
pub fn bound_thm1(eigs: &[f64], gammas: &[f64]) -> Result<f64> {
    let k = gammas.len();
    if k == 0 {
        return Err(Error::params("need at least one Rayleigh quotient"));
    }
    need(eigs, k + 1)?;
    let den = eigs[k] - eigs[0];
    if den <= GAP_TOL {
        return Err(Error::GapCollapse(format!("λ_{} − λ_1 = {den:e}", k + 1)));
    }
    let num = gammas.iter().sum::<f64>() - k as f64 * eigs[0];
    Ok(clamped(num, "thm1") / den)
}

/// `k ρ / λ_{k+1}`.
pub fn bound_cor2(rho: f64, k: usize, lambda_k1: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::params(format!("ρ must be nonnegative, got {rho}")));
    }
    if lambda_k1 <= GAP_TOL {
        return Err(Error::GapCollapse(format!("λ_{} = {lambda_k1:e}", k + 1)));
    }
    Ok(k as f64 * rho / lambda_k1)
}

/// One recursive step: `(Σ_{i=q+1}^k (γ_i − λ_{q+1}) + λ_{k+1} E_q) / (λ_{k+1} − λ_{q+1})`
/// with `k = gammas.len()`.
pub fn bound_thm3_step(eigs: &[f64], gammas: &[f64], q: usize, prior: f64) -> Result<f64> {
    let k = gammas.len();
    if q >= k {
        return Err(Error::params(format!("q = {q} must be below k = {k}")));
    }
    if !(prior >= 0.0) {
        return Err(Error::params(format!("prior error must be nonnegative, got {prior}")));
    }
    need(eigs, k + 1)?;
    let den = eigs[k] - eigs[q];
    if den <= GAP_TOL {
        return Err(Error::GapCollapse(format!("λ_{} − λ_{} = {den:e}", k + 1, q + 1)));
    }
    let num: f64 = gammas[q..].iter().map(|g| g - eigs[q]).sum::<f64>() + eigs[k] * prior;
    Ok(clamped(num, "recursive step") / den)
}

/// Applies the recursive step group by group.
///
/// Group `t` covers indices `q_{t-1}+1 ..= q_t`, uses `λ_{q_t+1}` in place of
/// `λ_{k+1}` and takes the sum of all earlier group bounds as its prior
/// error. Returns the total and the per-group bounds.
pub fn bound_thm3_total(eigs: &[f64], gammas: &[f64], boundaries: &[usize]) -> Result<(f64, Vec<f64>)> {
    crate::spectral::validate_boundaries(boundaries, gammas.len())?;
    let mut per_group = Vec::with_capacity(boundaries.len() - 1);
    let mut acc = 0.0;
    for (t, w) in boundaries.windows(2).enumerate() {
        let b = bound_thm3_step(eigs, &gammas[..w[1]], w[0], acc).map_err(|e| match e {
            Error::GapCollapse(msg) => Error::GapCollapse(format!("group {}: {msg}", t + 1)),
            other => other,
        })?;
        per_group.push(b);
        acc += b;
    }
    Ok((acc, per_group))
}

/// `Σ_{i=2}^k (γ_i − λ_2) / (λ_{k+1} − λ_2)` for indicators whose first
/// vector is `f_1`.
pub fn bound_cor4(eigs: &[f64], gammas: &[f64]) -> Result<f64> {
    if gammas.len() < 2 {
        return Err(Error::params("needs k >= 2"));
    }
    bound_thm3_step(eigs, gammas, 1, 0.0)
}

/// The digraph bounds `(γ − λ_1)/(λ_2 − λ_1)` and `(4Ψ − λ_1)/(λ_2 − λ_1)`.
pub fn bound_thm5(rayleigh: f64, psi: f64, lambda1: f64, lambda2: f64) -> Result<(f64, f64)> {
    let den = lambda2 - lambda1;
    if den <= GAP_TOL {
        return Err(Error::GapCollapse(format!("λ_2 − λ_1 = {den:e}")));
    }
    Ok((
        clamped(rayleigh - lambda1, "digraph Rayleigh form") / den,
        clamped(4.0 * psi - lambda1, "digraph Ψ form") / den,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaenenSun {
    pub root_order: usize,
    pub lambda2: f64,
    pub theta: f64,
    /// `λ_2 / (1 − 4θ/k)`, undefined when the denominator is not positive.
    pub eta: Option<f64>,
    pub bound: BoundValue,
}

/// The bound `(η − 1)⁻¹` with `η = λ_2/(1 − 4θ/k)`, where `λ_2` comes from
/// the normalised Hermitian Laplacian at root order `⌈2πk⌉` and `θ` is
/// evaluated at `p`. Not applicable unless `η > 1`.
pub fn bound_laenen_sun(g: &Graph, p: &Partition) -> Result<LaenenSun> {
    let k = p.k();
    if k < 2 {
        return Err(Error::params("needs k >= 2"));
    }
    let root_order = (2.0 * std::f64::consts::PI * k as f64).ceil() as usize;
    let r = build_representation(g, RepresentationKind::NormalizedHermitianLaplacian, root_order)?;
    let es = eigensystem(&r, Some(2))?;
    let lambda2 = es.eigenvalues[1];
    let theta = theta_k(g, p)?;
    let den = 1.0 - 4.0 * theta / k as f64;
    let eta = (den > 0.0).then(|| lambda2 / den);
    let bound = match eta {
        Some(e) if e > 1.0 => BoundValue::new(1.0 / (e - 1.0), 1.0),
        Some(e) => BoundValue::na(format!("η = {e:.4} ≤ 1")),
        None => BoundValue::na(format!("1 − 4θ/k = {den:.4} ≤ 0")),
    };
    Ok(LaenenSun { root_order, lambda2, theta, eta, bound })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Misclassification {
    pub bound: f64,
    /// Whether `U ≤ (1/5)·𝒟⁻¹·(2+α)⁻¹·min vol(S_i)` holds.
    pub applicable: bool,
}

/// `8(2+α)U/𝒟²`, with the precondition reported alongside.
pub fn kmeans_misclassification_bound(u: f64, d: f64, alpha: f64, min_cluster_vol: f64) -> Result<Misclassification> {
    if !(d > 0.0) {
        return Err(Error::params(format!("centre separation must be positive, got {d}")));
    }
    if !(u >= 0.0 && alpha >= 0.0 && min_cluster_vol > 0.0) {
        return Err(Error::params("U and α must be nonnegative and the minimum volume positive"));
    }
    let applicable = u <= min_cluster_vol / (5.0 * d * (2.0 + alpha));
    Ok(Misclassification { bound: 8.0 * (2.0 + alpha) * u / (d * d), applicable })
}
