//! Monte Carlo harness: data generators for the four simulation designs,
//! scoring against the truth labels, deterministic replication with
//! per-replicate seeding, the average-rank experiment, and the empirical
//! convergence-rate experiment against the oracle interval.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines;
use crate::clat::{self, ClatConfig, PValueVector, Side};
use crate::dist::{DistributionSpec, TwoGroupModel};
use crate::error::{Error, Result};
use crate::oracle;

/// The four data-generating designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseKind {
    /// Gaussian null, two-sided Gaussian mixture alternative.
    I,
    /// Student-t null, location-scale t mixture alternative.
    II,
    /// Uniform null, triangular spike alternative near zero.
    III,
    /// Case I contaminated by one shared Gaussian factor per replicate.
    IV,
}

/// Generator configuration. π₁ = n^{−β} throughout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseConfig {
    pub kind: CaseKind,
    pub n: usize,
    pub beta: f64,
    /// Signal location (Cases I, II, IV).
    pub mu: f64,
    /// Signal scale (Cases I, II, IV).
    pub sigma: f64,
    /// Weight of the +μ component (Cases I, II, IV).
    pub p1: f64,
    /// Degrees of freedom (Case II).
    pub d: f64,
    /// Spike decay exponent (Case III).
    pub alpha: f64,
    /// Spike width constant (Case III).
    pub l: f64,
    /// Shared-factor scale σ₂ (Case IV).
    pub sigma2: f64,
    pub seed: u64,
}

impl CaseConfig {
    pub fn case_i(n: usize, beta: f64, p1: f64, mu: f64, sigma: f64, seed: u64) -> Self {
        CaseConfig {
            kind: CaseKind::I,
            n,
            beta,
            mu,
            sigma,
            p1,
            d: f64::NAN,
            alpha: f64::NAN,
            l: f64::NAN,
            sigma2: f64::NAN,
            seed,
        }
    }

    pub fn case_ii(n: usize, beta: f64, p1: f64, mu: f64, sigma: f64, d: f64, seed: u64) -> Self {
        CaseConfig {
            d,
            kind: CaseKind::II,
            ..CaseConfig::case_i(n, beta, p1, mu, sigma, seed)
        }
    }

    pub fn case_iii(n: usize, beta: f64, alpha: f64, l: f64, seed: u64) -> Self {
        CaseConfig {
            kind: CaseKind::III,
            n,
            beta,
            mu: f64::NAN,
            sigma: f64::NAN,
            p1: f64::NAN,
            d: f64::NAN,
            alpha,
            l,
            sigma2: f64::NAN,
            seed,
        }
    }

    pub fn case_iv(
        n: usize,
        beta: f64,
        p1: f64,
        mu: f64,
        sigma: f64,
        sigma2: f64,
        seed: u64,
    ) -> Self {
        CaseConfig {
            kind: CaseKind::IV,
            sigma2,
            ..CaseConfig::case_i(n, beta, p1, mu, sigma, seed)
        }
    }

    pub fn pi1(&self) -> f64 {
        (self.n as f64).powf(-self.beta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        if !(self.beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be > 0, got {}",
                self.beta
            )));
        }
        match self.kind {
            CaseKind::I | CaseKind::II | CaseKind::IV => {
                if !self.mu.is_finite() || !(self.sigma > 0.0) || !(0.0..=1.0).contains(&self.p1) {
                    return Err(Error::InvalidParameter(format!(
                        "case {:?} needs finite mu, sigma > 0, p1 in [0,1]",
                        self.kind
                    )));
                }
                if self.kind == CaseKind::II && !(self.d > 0.0) {
                    return Err(Error::InvalidParameter("case II needs d > 0".into()));
                }
                if self.kind == CaseKind::IV && !(self.sigma2 > 0.0) {
                    return Err(Error::InvalidParameter("case IV needs sigma2 > 0".into()));
                }
            }
            CaseKind::III => {
                DistributionSpec::spike_triangle(self.n as u64, self.alpha, self.l)?;
            }
        }
        Ok(())
    }

    /// The per-observation two-group model of the marginal statistic
    /// (for Case IV this is the marginal law of the contaminated Yᵢ).
    pub fn model(&self) -> Result<TwoGroupModel> {
        self.validate()?;
        let pi1 = self.pi1();
        match self.kind {
            CaseKind::I => TwoGroupModel::new(
                pi1,
                DistributionSpec::StandardNormal,
                two_component_normal(self.p1, self.mu, self.sigma)?,
            ),
            CaseKind::II => {
                let base = DistributionSpec::student_t(self.d)?;
                let alt = DistributionSpec::finite_mixture(
                    vec![self.p1, 1.0 - self.p1],
                    vec![
                        DistributionSpec::location_scale(base.clone(), self.mu, self.sigma)?,
                        DistributionSpec::location_scale(base.clone(), -self.mu, self.sigma)?,
                    ],
                )?;
                TwoGroupModel::new(pi1, base, alt)
            }
            CaseKind::III => TwoGroupModel::new(
                pi1,
                DistributionSpec::Uniform01,
                DistributionSpec::spike_triangle(self.n as u64, self.alpha, self.l)?,
            ),
            CaseKind::IV => {
                let shrink = (1.0 + self.sigma2 * self.sigma2).sqrt();
                let var = (self.sigma * self.sigma + self.sigma2 * self.sigma2)
                    / (1.0 + self.sigma2 * self.sigma2);
                TwoGroupModel::new(
                    pi1,
                    DistributionSpec::StandardNormal,
                    two_component_normal(self.p1, self.mu / shrink, var.sqrt())?,
                )
            }
        }
    }
}

fn two_component_normal(p1: f64, mu: f64, sigma: f64) -> Result<DistributionSpec> {
    DistributionSpec::finite_mixture(
        vec![p1, 1.0 - p1],
        vec![
            DistributionSpec::normal(mu, sigma)?,
            DistributionSpec::normal(-mu, sigma)?,
        ],
    )
}

/// Statistics paired with their truth labels; `z` carries the transformed
/// statistics (standard normal under the null) for designs whose raw null is
/// not already N(0,1).
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub stats: Vec<f64>,
    pub theta: Vec<bool>,
    pub z: Option<Vec<f64>>,
}

impl LabeledSample {
    /// The statistics the standard-normal-null methods consume.
    pub fn z_stats(&self) -> &[f64] {
        self.z.as_deref().unwrap_or(&self.stats)
    }
}

/// Draws one replicate of the configured design, seeding a fresh generator
/// from `cfg.seed`.
pub fn generate(cfg: &CaseConfig) -> Result<LabeledSample> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;
    match cfg.kind {
        CaseKind::I => {
            let model = cfg.model()?;
            let (stats, theta) = model.sample_labeled(&mut rng, n);
            Ok(LabeledSample {
                stats,
                theta,
                z: None,
            })
        }
        CaseKind::II => {
            let model = cfg.model()?;
            let (stats, theta) = model.sample_labeled(&mut rng, n);
            let df = vec![cfg.d; n];
            let z = baselines::z_from_t(&stats, &df)?;
            Ok(LabeledSample {
                stats,
                theta,
                z: Some(z),
            })
        }
        CaseKind::III => {
            let model = cfg.model()?;
            let (stats, theta) = model.sample_labeled(&mut rng, n);
            let z = baselines::z_from_unif(&stats)?;
            Ok(LabeledSample {
                stats,
                theta,
                z: Some(z),
            })
        }
        CaseKind::IV => {
            // Case I draws plus one shared factor per replicate
            let base = CaseConfig {
                kind: CaseKind::I,
                ..cfg.clone()
            };
            let model = base.model()?;
            let (raw, theta) = model.sample_labeled(&mut rng, n);
            let shared: f64 = cfg.sigma2 * DistributionSpec::StandardNormal.sample_one(&mut rng);
            let scale = (1.0 + cfg.sigma2 * cfg.sigma2).sqrt();
            let stats = raw.iter().map(|&x| (x + shared) / scale).collect();
            Ok(LabeledSample {
                stats,
                theta,
                z: None,
            })
        }
    }
}

/// Rejection counts against the truth: V false, T true, R total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Score {
    pub v: usize,
    pub t: usize,
    pub r: usize,
}

pub fn score(decision: &[bool], truth: &LabeledSample) -> Result<Score> {
    if decision.len() != truth.theta.len() {
        return Err(Error::LengthMismatch(format!(
            "decision has {} entries, truth has {}",
            decision.len(),
            truth.theta.len()
        )));
    }
    let mut v = 0;
    let mut t = 0;
    for (&d, &is_alt) in decision.iter().zip(&truth.theta) {
        if d {
            if is_alt {
                t += 1;
            } else {
                v += 1;
            }
        }
    }
    Ok(Score { v, t, r: v + t })
}

/// A procedure the harness can run on a replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MethodSpec {
    Clat { sided: Sided, pi1: Pi1Mode },
    Bh { sided: Sided },
    LfdrOracle,
    LfdrSc,
    LfdrEm { components: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sided {
    Left,
    Right,
    Two,
}

/// Which π₁ the interval search assumes: the conservative zero default, or
/// the design's true n^{−β}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pi1Mode {
    Zero,
    Known,
}

impl MethodSpec {
    pub fn clat(sided: Sided) -> Self {
        MethodSpec::Clat {
            sided,
            pi1: Pi1Mode::Zero,
        }
    }

    pub fn name(&self) -> String {
        match self {
            MethodSpec::Clat { sided, pi1 } => match pi1 {
                Pi1Mode::Zero => format!("clat-{}", sided.tag()),
                Pi1Mode::Known => format!("clat-{}-pi1", sided.tag()),
            },
            MethodSpec::Bh { sided } => format!("bh-{}", sided.tag()),
            MethodSpec::LfdrOracle => "lfdr-oracle".into(),
            MethodSpec::LfdrSc => "lfdr-sc".into(),
            MethodSpec::LfdrEm { components } => format!("lfdr-em-{components}"),
        }
    }
}

impl Sided {
    fn tag(&self) -> &'static str {
        match self {
            Sided::Left => "left",
            Sided::Right => "right",
            Sided::Two => "two",
        }
    }
}

/// Default component counts for the EM baseline in the four designs.
pub fn default_em_components(kind: CaseKind) -> usize {
    match kind {
        CaseKind::I | CaseKind::II | CaseKind::IV => 2,
        CaseKind::III => 1,
    }
}

/// Runs one method on one labeled sample. Methods that assume a standard
/// normal null consume the transformed statistics when the design provides
/// them; BH consumes the same p-values either way. The kernel-density rule
/// estimates f on the raw scale for the uniform-null design (where the
/// estimate over-smooths the spike) and on the z scale elsewhere.
pub fn run_method(
    method: &MethodSpec,
    sample: &LabeledSample,
    cfg: &CaseConfig,
    q: f64,
) -> Result<Vec<bool>> {
    let pi1 = cfg.pi1();
    let z = sample.z_stats();
    let normal = DistributionSpec::StandardNormal;
    match method {
        MethodSpec::Clat { sided, pi1: mode } => {
            let assumed = match mode {
                Pi1Mode::Zero => 0.0,
                Pi1Mode::Known => pi1,
            };
            let c = ClatConfig::new(q, normal)?.with_pi1(assumed)?;
            Ok(match sided {
                Sided::Right => clat::clat_right(z, &c)?.reject,
                Sided::Left => clat::clat_left(z, &c)?.reject,
                Sided::Two => clat::clat_two_sided(z, &c)?.reject,
            })
        }
        MethodSpec::Bh { sided } => {
            let p = match sided {
                Sided::Right => clat::pvalues_right(z, &normal),
                Sided::Left => clat::pvalues_left(z, &normal),
                Sided::Two => {
                    let values = z
                        .iter()
                        .map(|&x| (2.0 * normal.sf(x.abs())).min(1.0))
                        .collect();
                    PValueVector::new(values, Side::Right)?
                }
            };
            Ok(baselines::bh(&p, q, 0.0)?.reject)
        }
        MethodSpec::LfdrOracle => {
            // the local fdr is invariant under the monotone z-transform, so
            // evaluate it in raw statistic space where the model is known
            let model = cfg.model()?;
            let fdr = baselines::lfdr_oracle(&sample.stats, &model)?;
            Ok(baselines::lfdr_stepup(&fdr, q)?.reject)
        }
        MethodSpec::LfdrSc => match cfg.kind {
            CaseKind::III => Ok(baselines::lfdr_sc(
                &sample.stats,
                pi1,
                &DistributionSpec::Uniform01,
                q,
            )?
            .reject),
            _ => Ok(baselines::lfdr_sc(z, pi1, &normal, q)?.reject),
        },
        MethodSpec::LfdrEm { components } => Ok(baselines::lfdr_em(z, *components, q)?.reject),
    }
}

/// One replicate × method outcome.
#[derive(Debug, Clone, Serialize)]
pub struct RepRecord {
    pub replicate: usize,
    pub method: String,
    pub v: usize,
    pub t: usize,
    pub r: usize,
    pub runtime_ms: f64,
}

/// Aggregates for one method over all replicates.
#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub method: String,
    /// Mean true rejections per replicate.
    pub et: f64,
    /// Mean false rejections per replicate.
    pub ev: f64,
    /// ΣV/ΣR (ratio of means; 0 when nothing was ever rejected).
    pub mfdr: f64,
    /// Mean of V/(R ∨ 1).
    pub fdr: f64,
    /// Σ missed / Σ accepted.
    pub mfnr: f64,
    /// Σ true rejections / Σ non-nulls (the power proxy the study curves plot).
    pub true_rejection_proportion: f64,
    pub mean_runtime_ms: f64,
    pub n_errors: usize,
}

/// Full result of a replication study.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicationSummary {
    pub n_reps: usize,
    pub q: f64,
    pub methods: Vec<MethodSummary>,
    #[serde(skip)]
    pub records: Vec<RepRecord>,
}

/// Replicates the design `n_reps` times (replicate k reseeds with
/// `seed ⊕ k`), runs every method on every replicate, and aggregates the
/// marginal rates. Replicates run in parallel; per-replicate seeding makes
/// the result independent of scheduling. Per-method failures are recorded,
/// not fatal. `q = 0` is the guarded boundary: everything rejects nothing.
pub fn replicate(
    cfg: &CaseConfig,
    methods: &[MethodSpec],
    q: f64,
    n_reps: usize,
) -> Result<ReplicationSummary> {
    if n_reps == 0 {
        return Err(Error::InvalidParameter("n_reps must be >= 1".into()));
    }
    cfg.validate()?;
    if q == 0.0 {
        let methods = methods
            .iter()
            .map(|m| MethodSummary {
                method: m.name(),
                et: 0.0,
                ev: 0.0,
                mfdr: 0.0,
                fdr: 0.0,
                mfnr: 0.0,
                true_rejection_proportion: 0.0,
                mean_runtime_ms: 0.0,
                n_errors: 0,
            })
            .collect();
        return Ok(ReplicationSummary {
            n_reps,
            q,
            methods,
            records: Vec::new(),
        });
    }

    struct RepOutcome {
        scores: Vec<Option<(Score, f64)>>,
        n_alt: usize,
        n: usize,
    }

    let outcomes: Vec<RepOutcome> = (0..n_reps)
        .into_par_iter()
        .map(|k| {
            let rep_cfg = CaseConfig {
                seed: cfg.seed ^ k as u64,
                ..cfg.clone()
            };
            let sample = generate(&rep_cfg)?;
            let n_alt = sample.theta.iter().filter(|&&b| b).count();
            let mut scores = Vec::with_capacity(methods.len());
            for m in methods {
                let start = std::time::Instant::now();
                match run_method(m, &sample, &rep_cfg, q) {
                    Ok(mask) => {
                        let s = score(&mask, &sample)?;
                        scores.push(Some((s, start.elapsed().as_secs_f64() * 1e3)));
                    }
                    Err(e) => {
                        log::warn!("method {} failed on replicate {k}: {e}", m.name());
                        scores.push(None);
                    }
                }
            }
            Ok(RepOutcome {
                scores,
                n_alt,
                n: sample.stats.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    let mut summaries = Vec::with_capacity(methods.len());
    for (mi, m) in methods.iter().enumerate() {
        let mut sum_v = 0usize;
        let mut sum_t = 0usize;
        let mut sum_missed = 0usize;
        let mut sum_accepted = 0usize;
        let mut sum_alt = 0usize;
        let mut fdr_sum = 0.0;
        let mut ms_sum = 0.0;
        let mut n_ok = 0usize;
        let mut n_err = 0usize;
        for (k, out) in outcomes.iter().enumerate() {
            match &out.scores[mi] {
                Some((s, ms)) => {
                    sum_v += s.v;
                    sum_t += s.t;
                    sum_missed += out.n_alt - s.t;
                    sum_accepted += out.n - s.r;
                    sum_alt += out.n_alt;
                    fdr_sum += s.v as f64 / s.r.max(1) as f64;
                    ms_sum += ms;
                    n_ok += 1;
                    records.push(RepRecord {
                        replicate: k,
                        method: m.name(),
                        v: s.v,
                        t: s.t,
                        r: s.r,
                        runtime_ms: *ms,
                    });
                }
                None => n_err += 1,
            }
        }
        let denom = n_ok.max(1) as f64;
        let sum_r = sum_v + sum_t;
        summaries.push(MethodSummary {
            method: m.name(),
            et: sum_t as f64 / denom,
            ev: sum_v as f64 / denom,
            mfdr: if sum_r == 0 {
                0.0
            } else {
                sum_v as f64 / sum_r as f64
            },
            fdr: fdr_sum / denom,
            mfnr: if sum_accepted == 0 {
                0.0
            } else {
                sum_missed as f64 / sum_accepted as f64
            },
            true_rejection_proportion: if sum_alt == 0 {
                0.0
            } else {
                sum_t as f64 / sum_alt as f64
            },
            mean_runtime_ms: ms_sum / denom,
            n_errors: n_err,
        });
    }
    Ok(ReplicationSummary {
        n_reps,
        q,
        methods: summaries,
        records,
    })
}

/// Result of the average-rank experiment.
#[derive(Debug, Clone, Serialize)]
pub struct AverageR {
    pub mean_r: f64,
    pub n_used: usize,
    pub n_excluded: usize,
}

/// Mean over replicates of the rank of the largest alternative observation
/// when the statistics are ordered decreasingly: the model is
/// (1−π₁)N(0,1) + π₁N(μ, σ²) with π₁ = n^{−β}. Replicates with no
/// alternative draws are excluded and counted.
pub fn average_r(
    beta: f64,
    sigma: f64,
    mu: f64,
    n: usize,
    n_reps: usize,
    seed: u64,
) -> Result<AverageR> {
    if n == 0 || n_reps == 0 {
        return Err(Error::InvalidParameter("n and n_reps must be >= 1".into()));
    }
    if !(beta > 0.0) || !(sigma > 0.0) {
        return Err(Error::InvalidParameter(
            "beta and sigma must be > 0".into(),
        ));
    }
    let pi1 = (n as f64).powf(-beta);
    let ranks: Vec<Option<usize>> = (0..n_reps)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k as u64);
            let mut max_alt = f64::NEG_INFINITY;
            let mut nulls = Vec::with_capacity(n);
            for _ in 0..n {
                let is_alt = rng.random::<f64>() < pi1;
                let z: f64 = DistributionSpec::StandardNormal.sample_one(&mut rng);
                if is_alt {
                    max_alt = max_alt.max(mu + sigma * z);
                } else {
                    nulls.push(z);
                }
            }
            if max_alt == f64::NEG_INFINITY {
                None
            } else {
                // rank of the largest alternative among all statistics
                Some(1 + nulls.iter().filter(|&&x| x > max_alt).count())
            }
        })
        .collect();
    let mut sum = 0usize;
    let mut used = 0usize;
    for r in ranks.iter().flatten() {
        sum += r;
        used += 1;
    }
    if used == 0 {
        return Err(Error::Numerical(
            "every replicate lacked alternative draws".into(),
        ));
    }
    Ok(AverageR {
        mean_r: sum as f64 / used as f64,
        n_used: used,
        n_excluded: n_reps - used,
    })
}

/// Per-n summary row of the convergence experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergencePoint {
    pub n: usize,
    pub median_abs_err: f64,
    pub mfdr: f64,
}

/// Result of the convergence-rate experiment: the least-squares slope of
/// log median |g_n(a_n) − g(a₀)| against log n.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceResult {
    pub slope: f64,
    pub oracle_mass: f64,
    pub points: Vec<ConvergencePoint>,
}

/// For each n, draws `reps_per_n` replicates from the model, runs the
/// right-sided search with the model's π₁, records the rejected proportion,
/// and compares it with the oracle interval mass. Errors when the model
/// admits no oracle interval at level q.
pub fn convergence_experiment(
    model: &TwoGroupModel,
    q: f64,
    n_grid: &[usize],
    reps_per_n: usize,
    seed: u64,
) -> Result<ConvergenceResult> {
    if n_grid.is_empty() || reps_per_n == 0 {
        return Err(Error::InvalidParameter(
            "need a non-empty n grid and reps_per_n >= 1".into(),
        ));
    }
    let interval = oracle::oracle_clat_interval(model, q, oracle::DEFAULT_A_GRID, None)?
        .ok_or_else(|| {
            Error::InvalidParameter(
                "model admits no oracle rejection interval at this q".into(),
            )
        })?;
    let g0 = interval.mass;

    let mut points = Vec::with_capacity(n_grid.len());
    for (gi, &n) in n_grid.iter().enumerate() {
        let cfg = ClatConfig::new(q, model.null.clone())?.with_pi1(model.pi1)?;
        let outcomes: Vec<(f64, usize, usize)> = (0..reps_per_n)
            .into_par_iter()
            .map(|k| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ ((gi as u64) << 32) ^ k as u64);
                let (stats, theta) = model.sample_labeled(&mut rng, n);
                let res = clat::clat_right(&stats, &cfg)?;
                let g_n = res.n_rejected as f64 / n as f64;
                let mut v = 0;
                for (&rej, &alt) in res.reject.iter().zip(&theta) {
                    if rej && !alt {
                        v += 1;
                    }
                }
                Ok((g_n, v, res.n_rejected))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut errs: Vec<f64> = outcomes.iter().map(|(g, _, _)| (g - g0).abs()).collect();
        errs.sort_unstable_by(f64::total_cmp);
        let median = if errs.len() % 2 == 1 {
            errs[errs.len() / 2]
        } else {
            0.5 * (errs[errs.len() / 2 - 1] + errs[errs.len() / 2])
        };
        let sum_v: usize = outcomes.iter().map(|(_, v, _)| v).sum();
        let sum_r: usize = outcomes.iter().map(|(_, _, r)| r).sum();
        points.push(ConvergencePoint {
            n,
            median_abs_err: median.max(1e-300),
            mfdr: if sum_r == 0 {
                0.0
            } else {
                sum_v as f64 / sum_r as f64
            },
        });
    }

    // least squares on (log n, log median error)
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.median_abs_err.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    Ok(ConvergenceResult {
        slope: sxy / sxx,
        oracle_mass: g0,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_respects_beta() {
        // beta so large that pi1 is numerically zero
        let cfg = CaseConfig::case_i(5000, 10.0, 0.9, 3.0, 0.7, 1);
        let s = generate(&cfg).unwrap();
        assert!(s.theta.iter().all(|&b| !b));

        // binomial moment check at beta = 0.3
        let cfg = CaseConfig::case_i(5000, 0.3, 0.9, 3.0, 0.7, 2);
        let s = generate(&cfg).unwrap();
        let count = s.theta.iter().filter(|&&b| b).count() as f64;
        let expect = 5000f64 * cfg.pi1();
        let tol = 4.0 * (5000.0 * cfg.pi1() * (1.0 - cfg.pi1())).sqrt();
        assert!(
            (count - expect).abs() <= tol,
            "count {count}, expect {expect} +- {tol}"
        );
    }

    #[test]
    fn case_iii_stats_in_unit_interval_with_transform() {
        let cfg = CaseConfig::case_iii(5000, 0.2, 0.5, 1.2, 3);
        let s = generate(&cfg).unwrap();
        assert!(s.stats.iter().all(|&x| (0.0..=1.0).contains(&x)));
        let z = s.z.as_ref().unwrap();
        assert_eq!(z.len(), s.stats.len());
        // the transform is order-reversing
        let mut pairs: Vec<(f64, f64)> = s.stats.iter().cloned().zip(z.iter().cloned()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pairs.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-12);
        }
    }

    #[test]
    fn case_ii_tails_heavier_than_normal() {
        // all-null t(10) sample: excess kurtosis should be visibly positive
        let cfg = CaseConfig::case_ii(100_000, 10.0, 0.9, 3.0, 0.7, 10.0, 4);
        let s = generate(&cfg).unwrap();
        let n = s.stats.len() as f64;
        let mean = s.stats.iter().sum::<f64>() / n;
        let m2 = s.stats.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m4 = s.stats.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        let kurt = m4 / (m2 * m2);
        // theory: 3 + 6/(d-4) = 4 at d = 10
        assert!(kurt > 3.3 && kurt < 6.0, "kurtosis {kurt}");
    }

    #[test]
    fn case_iv_equicorrelation() {
        // correlation between two null coordinates across replicates is
        // sigma2^2/(1+sigma2^2) = 0.2 at sigma2 = 0.5
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 0..10_000u64 {
            let cfg = CaseConfig::case_iv(2, 50.0, 0.9, 3.0, 0.7, 0.5, 777 ^ k);
            let s = generate(&cfg).unwrap();
            assert!(s.theta.iter().all(|&b| !b));
            xs.push(s.stats[0]);
            ys.push(s.stats[1]);
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let mut sxy = 0.0;
        let mut sxx = 0.0;
        let mut syy = 0.0;
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        let corr = sxy / (sxx * syy).sqrt();
        assert!((corr - 0.2).abs() <= 0.03, "corr {corr}");
    }

    #[test]
    fn score_hand_cases() {
        let truth = LabeledSample {
            stats: vec![0.0; 3],
            theta: vec![true, false, true],
            z: None,
        };
        assert_eq!(
            score(&[false, false, false], &truth).unwrap(),
            Score { v: 0, t: 0, r: 0 }
        );
        assert_eq!(
            score(&[true, false, true], &truth).unwrap(),
            Score { v: 0, t: 2, r: 2 }
        );
        assert_eq!(
            score(&[true, true, false], &truth).unwrap(),
            Score { v: 1, t: 1, r: 2 }
        );
        assert!(score(&[true], &truth).is_err());
    }

    #[test]
    fn replicate_is_deterministic() {
        let cfg = CaseConfig::case_i(2000, 0.3, 0.9, 3.0, 0.7, 42);
        let methods = [
            MethodSpec::clat(Sided::Two),
            MethodSpec::Bh { sided: Sided::Two },
        ];
        let a = replicate(&cfg, &methods, 0.1, 10).unwrap();
        let b = replicate(&cfg, &methods, 0.1, 10).unwrap();
        for (x, y) in a.methods.iter().zip(&b.methods) {
            assert_eq!(x.et, y.et);
            assert_eq!(x.ev, y.ev);
            assert_eq!(x.mfdr, y.mfdr);
            assert_eq!(x.fdr, y.fdr);
            assert_eq!(x.mfnr, y.mfnr);
        }
        // mFDR aggregation identity against the raw records
        for m in &a.methods {
            let (mut sv, mut sr) = (0usize, 0usize);
            for rec in a.records.iter().filter(|r| r.method == m.method) {
                sv += rec.v;
                sr += rec.r;
            }
            let expect = if sr == 0 { 0.0 } else { sv as f64 / sr as f64 };
            assert_eq!(m.mfdr, expect);
        }
    }

    #[test]
    fn replicate_q_zero_guard() {
        let cfg = CaseConfig::case_i(100, 0.3, 0.9, 3.0, 0.7, 9);
        let methods = [MethodSpec::Bh { sided: Sided::Right }];
        let s = replicate(&cfg, &methods, 0.0, 3).unwrap();
        assert_eq!(s.methods[0].et, 0.0);
        assert_eq!(s.methods[0].mfdr, 0.0);
    }

    #[test]
    fn average_r_dominant_signal() {
        // mu = 20 puts every alternative far above every null
        let r = average_r(0.5, 1.0, 20.0, 10_000, 20, 5).unwrap();
        assert!(r.mean_r < 1.05, "mean_r {}", r.mean_r);
        assert_eq!(r.n_excluded, 0);
    }

    #[test]
    fn convergence_errors_shrink_with_n() {
        let model = TwoGroupModel::new(
            0.2,
            DistributionSpec::StandardNormal,
            DistributionSpec::normal(1.5, 0.8).unwrap(),
        )
        .unwrap();
        let res =
            convergence_experiment(&model, 0.2, &[1000, 100_000], 20, 31).unwrap();
        assert!(
            res.points[1].median_abs_err < res.points[0].median_abs_err,
            "{:?}",
            res.points
        );
        assert!(res.slope < 0.0);
        // infeasible configuration errors out
        let sparse = TwoGroupModel::new(
            0.01,
            DistributionSpec::StandardNormal,
            DistributionSpec::normal(1.5, 0.8).unwrap(),
        )
        .unwrap();
        assert!(convergence_experiment(&sparse, 0.05, &[1000], 5, 1).is_err());
    }
}
