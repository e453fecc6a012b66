//! Competing procedures: BH step-up on p-values, local-fdr step-up rules
//! backed by the oracle density, a Gaussian kernel density estimate, or an
//! EM-fitted normal mixture, plus the z-transforms applied before the
//! density-based methods.

use serde::Serialize;

use crate::clat::{PValueVector, RejectionResult};
use crate::dist::{DistributionSpec, TwoGroupModel};
use crate::error::{Error, Result};
use crate::special;

/// Step-up rule on p-values: R = max{i : p₍ᵢ₎ ≤ i·q/(n(1−π₁))}, rejecting
/// every p-value at or below p₍R₎. `pi1 = 0` is the classical procedure;
/// a positive pi1 gives the adaptive variant.
pub fn bh(p: &PValueVector, q: f64, pi1: f64) -> Result<RejectionResult> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "q must lie in (0,1), got {q}"
        )));
    }
    if !(0.0..1.0).contains(&pi1) {
        return Err(Error::InvalidParameter(format!(
            "pi1 must lie in [0,1), got {pi1}"
        )));
    }
    let n = p.len();
    if n == 0 {
        return Ok(RejectionResult::no_rejections(0));
    }
    let mut sorted = p.values().to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let denom = n as f64 * (1.0 - pi1);
    let mut r = 0usize;
    for (i, &pv) in sorted.iter().enumerate() {
        if pv <= q * (i + 1) as f64 / denom {
            r = i + 1;
        }
    }
    if r == 0 {
        return Ok(RejectionResult::no_rejections(n));
    }
    let threshold = sorted[r - 1];
    let reject: Vec<bool> = p.values().iter().map(|&v| v <= threshold).collect();
    let n_rejected = reject.iter().filter(|&&b| b).count();
    Ok(RejectionResult {
        reject,
        n_rejected,
        interval_p: Some((sorted[0], threshold)),
        interval_x: None,
        i_rank: 1,
        j_rank: r,
        max_diff: r,
    })
}

/// Where a local-fdr vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LfdrSource {
    Oracle,
    Kde,
    Em,
}

/// Local fdr values fdrᵢ ∈ [0,1] for each statistic.
#[derive(Debug, Clone)]
pub struct LfdrVector {
    pub values: Vec<f64>,
    pub source: LfdrSource,
}

/// Oracle local fdr (1−π₁)f₀(xᵢ)/f(xᵢ) under a known two-group model.
pub fn lfdr_oracle(stats: &[f64], model: &TwoGroupModel) -> Result<LfdrVector> {
    let mut values = Vec::with_capacity(stats.len());
    for &x in stats {
        let f = model.mixture_pdf(x);
        if f <= 0.0 {
            return Err(Error::Undefined(format!(
                "mixture density vanishes at x = {x}"
            )));
        }
        values.push(((1.0 - model.pi1) * model.null.pdf(x) / f).clamp(0.0, 1.0));
    }
    Ok(LfdrVector {
        values,
        source: LfdrSource::Oracle,
    })
}

/// Step-up rule on local fdrs: sort ascending, reject the first R where the
/// running mean stays at or below q. Ties are broken by original index, and
/// exactly R hypotheses are rejected so the running-mean bound is preserved.
/// `i_rank`/`j_rank` refer to the fdr ordering here, not a p-value interval.
pub fn lfdr_stepup(fdr: &LfdrVector, q: f64) -> Result<RejectionResult> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "q must lie in (0,1), got {q}"
        )));
    }
    let n = fdr.values.len();
    if n == 0 {
        return Ok(RejectionResult::no_rejections(0));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fdr.values[a].total_cmp(&fdr.values[b]));
    let mut running = 0.0;
    let mut r = 0usize;
    for (k, &idx) in order.iter().enumerate() {
        running += fdr.values[idx];
        if running <= q * (k + 1) as f64 {
            r = k + 1;
        }
    }
    if r == 0 {
        return Ok(RejectionResult::no_rejections(n));
    }
    let mut reject = vec![false; n];
    for &idx in order.iter().take(r) {
        reject[idx] = true;
    }
    Ok(RejectionResult {
        reject,
        n_rejected: r,
        interval_p: None,
        interval_x: None,
        i_rank: 1,
        j_rank: r,
        max_diff: r,
    })
}

/// Silverman's rule-of-thumb bandwidth 0.9·min(sd, IQR/1.34)·n^{−1/5}.
pub fn silverman_bandwidth(stats: &[f64]) -> Result<f64> {
    let n = stats.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "bandwidth needs at least 2 observations".into(),
        ));
    }
    let nf = n as f64;
    let mean = stats.iter().sum::<f64>() / nf;
    let var = stats.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    let sd = var.sqrt();
    let mut sorted = stats.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let iqr = interp_quantile(&sorted, 0.75) - interp_quantile(&sorted, 0.25);
    let spread = sd.min(iqr / 1.34);
    let h = 0.9 * spread * nf.powf(-0.2);
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Numerical(format!(
            "degenerate bandwidth {h} (sd = {sd}, iqr = {iqr})"
        )));
    }
    Ok(h)
}

/// Linear-interpolation sample quantile on pre-sorted data.
fn interp_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

/// Gaussian-kernel density estimate of `stats` at `eval_points`. Pass
/// `None` for the Silverman default bandwidth. Kernel contributions beyond
/// 8 bandwidths are dropped (below 1e-14 relative weight).
pub fn kde_density(
    stats: &[f64],
    eval_points: &[f64],
    bandwidth: Option<f64>,
) -> Result<Vec<f64>> {
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be > 0, got {h}"
            )))
        }
        None => silverman_bandwidth(stats)?,
    };
    let n = stats.len();
    let mut sorted = stats.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let norm = 1.0 / (n as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let cut = 8.0 * h;
    let out = eval_points
        .iter()
        .map(|&t| {
            let lo = sorted.partition_point(|&x| x < t - cut);
            let hi = sorted.partition_point(|&x| x <= t + cut);
            let mut acc = 0.0;
            for &x in &sorted[lo..hi] {
                let z = (t - x) / h;
                acc += (-0.5 * z * z).exp();
            }
            acc * norm
        })
        .collect();
    Ok(out)
}

/// Kernel-density local fdr: fdr̂ᵢ = (1−π₁)f₀(xᵢ)/f̂(xᵢ) clamped to [0,1],
/// then the step-up rule.
pub fn lfdr_sc(
    stats: &[f64],
    pi1: f64,
    null: &DistributionSpec,
    q: f64,
) -> Result<RejectionResult> {
    let fdr = lfdr_kde(stats, pi1, null, None)?;
    lfdr_stepup(&fdr, q)
}

/// The kernel-density local fdr vector itself.
pub fn lfdr_kde(
    stats: &[f64],
    pi1: f64,
    null: &DistributionSpec,
    bandwidth: Option<f64>,
) -> Result<LfdrVector> {
    if !(0.0..1.0).contains(&pi1) {
        return Err(Error::InvalidParameter(format!(
            "pi1 must lie in [0,1), got {pi1}"
        )));
    }
    let dens = kde_density(stats, stats, bandwidth)?;
    let values = stats
        .iter()
        .zip(&dens)
        .map(|(&x, &f)| {
            if f > 0.0 {
                ((1.0 - pi1) * null.pdf(x) / f).clamp(0.0, 1.0)
            } else {
                1.0
            }
        })
        .collect();
    Ok(LfdrVector {
        values,
        source: LfdrSource::Kde,
    })
}

/// EM fit of the null-anchored normal mixture
/// (1−π₁)φ(x) + π₁ Σ_l p_l N(μ_l, σ_l²).
#[derive(Debug, Clone, Serialize)]
pub struct EmFit {
    pub pi1_hat: f64,
    pub weights: Vec<f64>,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    pub iterations: usize,
    pub final_diff: f64,
    pub converged: bool,
    /// Observed-data log-likelihood, one entry per visited parameter vector
    /// (first = the fixed starting point, last = the returned fit).
    pub loglik_trace: Vec<f64>,
}

const EM_VARIANCE_FLOOR: f64 = 1e-6;
const EM_WEIGHT_FLOOR: f64 = 1e-8;

/// One E-step sweep: per-point null posterior (the local fdr under the
/// current parameters), component responsibilities, and the log-likelihood.
fn em_posteriors(
    stats: &[f64],
    pi1: f64,
    weights: &[f64],
    means: &[f64],
    variances: &[f64],
) -> (Vec<f64>, Vec<f64>, f64) {
    let n = stats.len();
    let l = weights.len();
    let mut fdr = vec![0.0; n];
    let mut omega = vec![0.0; n * l];
    let mut loglik = 0.0;
    let inv_sd: Vec<f64> = variances.iter().map(|&v| 1.0 / v.sqrt()).collect();
    for (i, &x) in stats.iter().enumerate() {
        let null_d = (1.0 - pi1) * special::norm_pdf(x);
        let mut alt_sum = 0.0;
        for k in 0..l {
            let z = (x - means[k]) * inv_sd[k];
            let d = weights[k] * inv_sd[k] * special::norm_pdf(z);
            omega[i * l + k] = d;
            alt_sum += d;
        }
        let denom = null_d + pi1 * alt_sum;
        fdr[i] = if denom > 0.0 { null_d / denom } else { 1.0 };
        if alt_sum > 0.0 {
            for k in 0..l {
                omega[i * l + k] /= alt_sum;
            }
        } else {
            for k in 0..l {
                omega[i * l + k] = 1.0 / l as f64;
            }
        }
        loglik += denom.max(f64::MIN_POSITIVE).ln();
    }
    (fdr, omega, loglik)
}

/// Runs the EM iteration from the fixed starting point π₁ = 1/2,
/// p_l = 1/L, μ_l = (−1)^l, σ_l² = 1 until the squared parameter change
/// drops to `delta` or `max_iter` is hit (`converged` records which).
/// A variance floor of 1e-6 and weight floor of 1e-8 guard against
/// component collapse.
pub fn em_fit(stats: &[f64], n_components: usize, delta: f64, max_iter: usize) -> Result<EmFit> {
    let n = stats.len();
    let l = n_components;
    if l == 0 {
        return Err(Error::InvalidParameter(
            "need at least one component".into(),
        ));
    }
    if n < l + 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least {} observations for {} components, got {n}",
            l + 1,
            l
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must be > 0, got {delta}"
        )));
    }

    let mut pi1 = 0.5;
    let mut weights = vec![1.0 / l as f64; l];
    let mut means: Vec<f64> = (1..=l)
        .map(|k| if k % 2 == 1 { -1.0 } else { 1.0 })
        .collect();
    let mut variances = vec![1.0; l];

    let mut trace: Vec<f64> = Vec::new();
    let mut diff = f64::INFINITY;
    let mut iterations = 0;
    while diff > delta && iterations < max_iter {
        let (fdr, omega, loglik) = em_posteriors(stats, pi1, &weights, &means, &variances);
        if let Some(&prev) = trace.last() {
            debug_assert!(
                loglik >= prev - 1e-9 * prev.abs().max(1.0),
                "log-likelihood decreased: {prev} -> {loglik}"
            );
        }
        trace.push(loglik);

        let s: f64 = fdr.iter().map(|f| 1.0 - f).sum();
        let new_pi1 = s / n as f64;
        let mut new_weights = vec![0.0; l];
        let mut new_means = means.clone();
        let mut new_vars = variances.clone();
        for k in 0..l {
            let mut wk = 0.0;
            let mut mk = 0.0;
            for i in 0..n {
                let resp = (1.0 - fdr[i]) * omega[i * l + k];
                wk += resp;
                mk += resp * stats[i];
            }
            if wk > 1e-300 && s > 0.0 {
                new_weights[k] = wk / s;
                new_means[k] = mk / wk;
                let mut vk = 0.0;
                for i in 0..n {
                    let d = stats[i] - new_means[k];
                    vk += (1.0 - fdr[i]) * omega[i * l + k] * d * d;
                }
                new_vars[k] = (vk / wk).max(EM_VARIANCE_FLOOR);
            } else {
                // dead component: keep its location, floor its weight
                new_weights[k] = EM_WEIGHT_FLOOR;
            }
        }
        for w in new_weights.iter_mut() {
            *w = w.max(EM_WEIGHT_FLOOR);
        }
        let wsum: f64 = new_weights.iter().sum();
        for w in new_weights.iter_mut() {
            *w /= wsum;
        }

        diff = (new_pi1 - pi1).powi(2);
        for k in 0..l {
            diff += (new_weights[k] - weights[k]).powi(2)
                + (new_means[k] - means[k]).powi(2)
                + (new_vars[k] - variances[k]).powi(2);
        }
        pi1 = new_pi1;
        weights = new_weights;
        means = new_means;
        variances = new_vars;
        iterations += 1;
    }
    let (_, _, final_loglik) = em_posteriors(stats, pi1, &weights, &means, &variances);
    trace.push(final_loglik);

    Ok(EmFit {
        pi1_hat: pi1,
        weights,
        means,
        variances,
        iterations,
        final_diff: diff,
        converged: diff <= delta,
        loglik_trace: trace,
    })
}

/// Local fdr under an explicit null-anchored normal mixture.
pub fn lfdr_from_normal_mixture(
    stats: &[f64],
    pi1: f64,
    weights: &[f64],
    means: &[f64],
    variances: &[f64],
) -> LfdrVector {
    let (fdr, _, _) = em_posteriors(stats, pi1, weights, means, variances);
    LfdrVector {
        values: fdr,
        source: LfdrSource::Em,
    }
}

/// EM-estimated local fdr followed by the step-up rule.
pub fn lfdr_em(stats: &[f64], n_components: usize, q: f64) -> Result<RejectionResult> {
    let fit = em_fit(stats, n_components, 0.001, 10_000)?;
    let fdr = lfdr_from_normal_mixture(
        stats,
        fit.pi1_hat,
        &fit.weights,
        &fit.means,
        &fit.variances,
    );
    lfdr_stepup(&fdr, q)
}

const Z_CLAMP: f64 = 8.2;

fn clamped_norm_quantile(u: f64, clamped: &mut usize) -> f64 {
    if u <= 0.0 {
        *clamped += 1;
        return -Z_CLAMP;
    }
    if u >= 1.0 {
        *clamped += 1;
        return Z_CLAMP;
    }
    let z = special::norm_quantile(u);
    if z.abs() > Z_CLAMP {
        *clamped += 1;
        z.clamp(-Z_CLAMP, Z_CLAMP)
    } else {
        z
    }
}

/// zᵢ = Φ⁻¹(T_{dᵢ}(tᵢ)) with per-row real degrees of freedom.
pub fn z_from_t(t: &[f64], df: &[f64]) -> Result<Vec<f64>> {
    if t.len() != df.len() {
        return Err(Error::LengthMismatch(format!(
            "t has {} entries, df has {}",
            t.len(),
            df.len()
        )));
    }
    for (i, &d) in df.iter().enumerate() {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Domain(format!(
                "degrees of freedom must be positive and finite, got {d} at row {i}"
            )));
        }
    }
    let mut clamped = 0usize;
    let out = t
        .iter()
        .zip(df)
        .map(|(&ti, &di)| {
            let u = DistributionSpec::StudentT { df: di }.cdf(ti);
            clamped_norm_quantile(u, &mut clamped)
        })
        .collect();
    if clamped > 0 {
        log::warn!("z_from_t clamped {clamped} value(s) at +/-{Z_CLAMP}");
    }
    Ok(out)
}

/// zᵢ = Φ⁻¹(1 − xᵢ) for statistics on [0,1]; exact boundary values are
/// clamped at ±8.2 rather than mapped to infinities.
pub fn z_from_unif(x: &[f64]) -> Result<Vec<f64>> {
    for (i, &v) in x.iter().enumerate() {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!(
                "statistic outside [0,1] at row {i}: {v}"
            )));
        }
    }
    let mut clamped = 0usize;
    let out = x
        .iter()
        .map(|&v| clamped_norm_quantile(1.0 - v, &mut clamped))
        .collect();
    if clamped > 0 {
        log::warn!("z_from_unif clamped {clamped} value(s) at +/-{Z_CLAMP}");
    }
    Ok(out)
}
