//! Parametric distribution kit: densities, cdfs, quantiles, and samplers for
//! every law the two-group models need, plus the two-group mixture itself.

use rand::Rng;
use rand_distr::Distribution as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// A parametric univariate law. Constructors validate parameters; evaluation
/// methods assume a valid spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DistributionSpec {
    StandardNormal,
    Normal {
        mu: f64,
        sigma: f64,
    },
    /// Student t with real (possibly non-integer) degrees of freedom; the cdf
    /// goes through the regularized incomplete beta function.
    StudentT {
        df: f64,
    },
    /// Subbotin density C_γ exp(−|x−μ|^γ/γ) with C_γ = γ^{1−1/γ}/(2Γ(1/γ)).
    GeneralizedGaussian {
        gamma: f64,
        mu: f64,
    },
    Uniform01,
    /// Piecewise-linear triangle density on [0, 2·l·n^{−α}]: rises on the
    /// first half, falls on the second, zero elsewhere.
    SpikeTriangle {
        n: u64,
        alpha: f64,
        l: f64,
    },
    LocationScale {
        base: Box<DistributionSpec>,
        mu: f64,
        sigma: f64,
    },
    FiniteMixture {
        weights: Vec<f64>,
        components: Vec<DistributionSpec>,
    },
}

impl DistributionSpec {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        let spec = DistributionSpec::Normal { mu, sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn student_t(df: f64) -> Result<Self> {
        let spec = DistributionSpec::StudentT { df };
        spec.validate()?;
        Ok(spec)
    }

    pub fn generalized_gaussian(gamma: f64, mu: f64) -> Result<Self> {
        let spec = DistributionSpec::GeneralizedGaussian { gamma, mu };
        spec.validate()?;
        Ok(spec)
    }

    pub fn spike_triangle(n: u64, alpha: f64, l: f64) -> Result<Self> {
        let spec = DistributionSpec::SpikeTriangle { n, alpha, l };
        spec.validate()?;
        Ok(spec)
    }

    pub fn location_scale(base: DistributionSpec, mu: f64, sigma: f64) -> Result<Self> {
        let spec = DistributionSpec::LocationScale {
            base: Box::new(base),
            mu,
            sigma,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn finite_mixture(weights: Vec<f64>, components: Vec<DistributionSpec>) -> Result<Self> {
        let spec = DistributionSpec::FiniteMixture {
            weights,
            components,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every parameter constraint, recursively for composites.
    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionSpec::StandardNormal | DistributionSpec::Uniform01 => Ok(()),
            DistributionSpec::Normal { mu, sigma } => {
                if !mu.is_finite() || !sigma.is_finite() || *sigma <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "Normal requires finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
                    )));
                }
                Ok(())
            }
            DistributionSpec::StudentT { df } => {
                if !df.is_finite() || *df <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "StudentT requires df > 0, got {df}"
                    )));
                }
                Ok(())
            }
            DistributionSpec::GeneralizedGaussian { gamma, mu } => {
                if !gamma.is_finite() || *gamma <= 0.0 || !mu.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "GeneralizedGaussian requires gamma > 0 and finite mu, got gamma={gamma}, mu={mu}"
                    )));
                }
                Ok(())
            }
            DistributionSpec::SpikeTriangle { n, alpha, l } => {
                if *n == 0 {
                    return Err(Error::InvalidParameter(
                        "SpikeTriangle requires n >= 1".into(),
                    ));
                }
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "SpikeTriangle requires alpha in (0,1), got {alpha}"
                    )));
                }
                let cap = 0.5 * (*n as f64).powf(*alpha);
                if !(*l > 0.0) || *l > cap {
                    return Err(Error::InvalidParameter(format!(
                        "SpikeTriangle requires 0 < l <= n^alpha/2 = {cap}, got {l}"
                    )));
                }
                Ok(())
            }
            DistributionSpec::LocationScale { base, mu, sigma } => {
                if !mu.is_finite() || !sigma.is_finite() || *sigma <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "LocationScale requires finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
                    )));
                }
                base.validate()
            }
            DistributionSpec::FiniteMixture {
                weights,
                components,
            } => {
                if weights.is_empty() || weights.len() != components.len() {
                    return Err(Error::InvalidParameter(format!(
                        "FiniteMixture needs matching non-empty weights/components, got {}/{}",
                        weights.len(),
                        components.len()
                    )));
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(Error::InvalidParameter(
                        "FiniteMixture weights must be non-negative".into(),
                    ));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidParameter(format!(
                        "FiniteMixture weights must sum to 1, got {total}"
                    )));
                }
                for c in components {
                    c.validate()?;
                }
                Ok(())
            }
        }
    }

    /// Support endpoints; ±∞ for unbounded laws.
    pub fn support(&self) -> (f64, f64) {
        match self {
            DistributionSpec::StandardNormal
            | DistributionSpec::Normal { .. }
            | DistributionSpec::StudentT { .. }
            | DistributionSpec::GeneralizedGaussian { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            DistributionSpec::Uniform01 => (0.0, 1.0),
            DistributionSpec::SpikeTriangle { .. } => (0.0, 2.0 * self.spike_width()),
            DistributionSpec::LocationScale { base, mu, sigma } => {
                let (lo, hi) = base.support();
                (mu + sigma * lo, mu + sigma * hi)
            }
            DistributionSpec::FiniteMixture { components, .. } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for c in components {
                    let (a, b) = c.support();
                    lo = lo.min(a);
                    hi = hi.max(b);
                }
                (lo, hi)
            }
        }
    }

    fn spike_width(&self) -> f64 {
        match self {
            DistributionSpec::SpikeTriangle { n, alpha, l } => {
                l * (*n as f64).powf(-*alpha)
            }
            _ => unreachable!("spike_width on non-spike spec"),
        }
    }

    /// Density f(x); zero outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::StandardNormal => special::norm_pdf(x),
            DistributionSpec::Normal { mu, sigma } => {
                special::norm_pdf((x - mu) / sigma) / sigma
            }
            DistributionSpec::StudentT { df } => student_t_pdf(x, *df),
            DistributionSpec::GeneralizedGaussian { gamma, mu } => {
                let c = gg_norm_constant(*gamma);
                c * (-(x - mu).abs().powf(*gamma) / gamma).exp()
            }
            DistributionSpec::Uniform01 => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionSpec::SpikeTriangle { .. } => {
                let w = self.spike_width();
                if x < 0.0 || x > 2.0 * w {
                    0.0
                } else if x <= w {
                    x / (w * w)
                } else {
                    (2.0 * w - x) / (w * w)
                }
            }
            DistributionSpec::LocationScale { base, mu, sigma } => {
                base.pdf((x - mu) / sigma) / sigma
            }
            DistributionSpec::FiniteMixture {
                weights,
                components,
            } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.pdf(x))
                .sum(),
        }
    }

    /// Cumulative distribution function F(x).
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::StandardNormal => special::norm_cdf(x),
            DistributionSpec::Normal { mu, sigma } => special::norm_cdf((x - mu) / sigma),
            DistributionSpec::StudentT { df } => student_t_cdf(x, *df),
            DistributionSpec::GeneralizedGaussian { gamma, mu } => {
                if x == *mu {
                    return 0.5;
                }
                let t = (x - mu).abs().powf(*gamma) / gamma;
                let p = special::reg_lower_gamma(1.0 / gamma, t);
                if x > *mu {
                    0.5 + 0.5 * p
                } else {
                    0.5 - 0.5 * p
                }
            }
            DistributionSpec::Uniform01 => x.clamp(0.0, 1.0),
            DistributionSpec::SpikeTriangle { .. } => {
                let w = self.spike_width();
                if x <= 0.0 {
                    0.0
                } else if x <= w {
                    x * x / (2.0 * w * w)
                } else if x < 2.0 * w {
                    let d = 2.0 * w - x;
                    1.0 - d * d / (2.0 * w * w)
                } else {
                    1.0
                }
            }
            DistributionSpec::LocationScale { base, mu, sigma } => {
                base.cdf((x - mu) / sigma)
            }
            DistributionSpec::FiniteMixture {
                weights,
                components,
            } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.cdf(x))
                .sum(),
        }
    }

    /// Survival function 1 − F(x), evaluated in tail space where the family
    /// allows it so upper-tail p-values keep full relative accuracy.
    pub fn sf(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::StandardNormal => special::norm_sf(x),
            DistributionSpec::Normal { mu, sigma } => special::norm_sf((x - mu) / sigma),
            DistributionSpec::StudentT { df } => {
                if x == 0.0 {
                    0.5
                } else {
                    let w = df / (df + x * x);
                    let half_tail = 0.5 * special::reg_inc_beta(w, 0.5 * df, 0.5);
                    if x > 0.0 {
                        half_tail
                    } else {
                        1.0 - half_tail
                    }
                }
            }
            DistributionSpec::GeneralizedGaussian { gamma, mu } => {
                if x <= *mu {
                    1.0 - self.cdf(x)
                } else {
                    let t = (x - mu).abs().powf(*gamma) / gamma;
                    0.5 * special::reg_upper_gamma(1.0 / gamma, t)
                }
            }
            DistributionSpec::LocationScale { base, mu, sigma } => {
                base.sf((x - mu) / sigma)
            }
            DistributionSpec::FiniteMixture {
                weights,
                components,
            } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.sf(x))
                .sum(),
            _ => 1.0 - self.cdf(x),
        }
    }

    /// Inverse cdf for `0 < u < 1`. Closed form where available, otherwise a
    /// bracketed bisection/Newton hybrid driven well below 1e-10 in cdf space.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!(
                "quantile requires u in (0,1), got {u}"
            )));
        }
        Ok(match self {
            DistributionSpec::StandardNormal => special::norm_quantile(u),
            DistributionSpec::Normal { mu, sigma } => {
                mu + sigma * special::norm_quantile(u)
            }
            DistributionSpec::StudentT { df } => student_t_quantile(u, *df),
            DistributionSpec::GeneralizedGaussian { mu, .. } => {
                if u == 0.5 {
                    return Ok(*mu);
                }
                let x0 = *mu + (u - 0.5).signum();
                invert_cdf(
                    |x| self.cdf(x),
                    |x| self.pdf(x),
                    u,
                    (*mu).min(x0),
                    (*mu).max(x0),
                    self.support(),
                )
            }
            DistributionSpec::Uniform01 => u,
            DistributionSpec::SpikeTriangle { .. } => {
                let w = self.spike_width();
                if u <= 0.5 {
                    w * (2.0 * u).sqrt()
                } else {
                    2.0 * w - w * (2.0 * (1.0 - u)).sqrt()
                }
            }
            DistributionSpec::LocationScale { base, mu, sigma } => {
                mu + sigma * base.quantile(u)?
            }
            DistributionSpec::FiniteMixture { components, .. } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for c in components {
                    let q = c.quantile(u)?;
                    lo = lo.min(q);
                    hi = hi.max(q);
                }
                if lo == hi {
                    return Ok(lo);
                }
                invert_cdf(
                    |x| self.cdf(x),
                    |x| self.pdf(x),
                    u,
                    lo,
                    hi,
                    self.support(),
                )
            }
        })
    }

    /// `n` i.i.d. draws. The generator is advanced in a fixed documented
    /// order, so identical seeds give identical output.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            DistributionSpec::StandardNormal => {
                rand_distr::StandardNormal.sample(rng)
            }
            DistributionSpec::Normal { mu, sigma } => {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                mu + sigma * z
            }
            DistributionSpec::StudentT { df } => {
                rand_distr::StudentT::new(*df)
                    .expect("validated df")
                    .sample(rng)
            }
            DistributionSpec::GeneralizedGaussian { .. } => {
                let u = open_unit(rng);
                self.quantile(u).expect("u in (0,1)")
            }
            DistributionSpec::Uniform01 => rng.random(),
            DistributionSpec::SpikeTriangle { .. } => {
                let u = open_unit(rng);
                self.quantile(u).expect("u in (0,1)")
            }
            DistributionSpec::LocationScale { base, mu, sigma } => {
                mu + sigma * base.sample_one(rng)
            }
            DistributionSpec::FiniteMixture {
                weights,
                components,
            } => {
                let pick: f64 = rng.random();
                let mut acc = 0.0;
                for (w, c) in weights.iter().zip(components) {
                    acc += w;
                    if pick < acc {
                        return c.sample_one(rng);
                    }
                }
                components
                    .last()
                    .expect("validated non-empty")
                    .sample_one(rng)
            }
        }
    }
}

/// Uniform draw strictly inside (0, 1).
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

fn student_t_pdf(x: f64, df: f64) -> f64 {
    let ln = special::ln_gamma((df + 1.0) / 2.0)
        - special::ln_gamma(df / 2.0)
        - 0.5 * (df * std::f64::consts::PI).ln()
        - 0.5 * (df + 1.0) * (1.0 + x * x / df).ln();
    ln.exp()
}

fn student_t_cdf(x: f64, df: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    let w = df / (df + x * x);
    let half_tail = 0.5 * special::reg_inc_beta(w, 0.5 * df, 0.5);
    if x > 0.0 {
        1.0 - half_tail
    } else {
        half_tail
    }
}

fn student_t_quantile(u: f64, df: f64) -> f64 {
    if u == 0.5 {
        return 0.0;
    }
    if df == 1.0 {
        // Cauchy closed form
        return (std::f64::consts::PI * (u - 0.5)).tan();
    }
    let tail = 2.0 * u.min(1.0 - u);
    let w = special::inv_reg_inc_beta(tail, 0.5 * df, 0.5);
    let mut x = if w > 0.0 {
        (df * (1.0 - w) / w).sqrt()
    } else {
        f64::MAX.sqrt()
    };
    if u < 0.5 {
        x = -x;
    }
    // polish on the cdf itself
    for _ in 0..3 {
        let f = student_t_cdf(x, df) - u;
        let d = student_t_pdf(x, df);
        if d <= 0.0 || !d.is_finite() {
            break;
        }
        let step = f / d;
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

fn gg_norm_constant(gamma: f64) -> f64 {
    ((1.0 - 1.0 / gamma) * gamma.ln() - std::f64::consts::LN_2
        - special::ln_gamma(1.0 / gamma))
    .exp()
}

/// Bracketed bisection refined by Newton: returns x with cdf(x) = u.
///
/// The bracket is expanded geometrically until it encloses u (clamped to the
/// support), then up to 200 hybrid steps run; Newton is taken whenever it
/// stays inside the bracket, otherwise the step bisects.
fn invert_cdf(
    cdf: impl Fn(f64) -> f64,
    pdf: impl Fn(f64) -> f64,
    u: f64,
    lo0: f64,
    hi0: f64,
    support: (f64, f64),
) -> f64 {
    let mut lo = lo0.max(support.0);
    let mut hi = hi0.min(support.1);
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut step = (hi - lo).max(1.0);
    while cdf(lo) > u && lo > support.0 {
        lo = (lo - step).max(support.0);
        step *= 2.0;
    }
    step = (hi - lo).max(1.0);
    while cdf(hi) < u && hi < support.1 {
        hi = (hi + step).min(support.1);
        step *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = cdf(x) - u;
        if f > 0.0 {
            hi = x;
        } else if f < 0.0 {
            lo = x;
        } else {
            return x;
        }
        let d = pdf(x);
        let newton = if d > 0.0 { x - f / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo) <= 1e-15 * x.abs().max(1e-12) {
            break;
        }
    }
    x
}

/// The two-group mixture (1−π₁)f₀ + π₁f₁ with its likelihood ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoGroupModel {
    pub pi1: f64,
    pub null: DistributionSpec,
    pub alt: DistributionSpec,
}

impl TwoGroupModel {
    pub fn new(pi1: f64, null: DistributionSpec, alt: DistributionSpec) -> Result<Self> {
        if !(0.0..1.0).contains(&pi1) {
            return Err(Error::InvalidParameter(format!(
                "pi1 must lie in [0,1), got {pi1}"
            )));
        }
        null.validate()?;
        alt.validate()?;
        Ok(TwoGroupModel { pi1, null, alt })
    }

    /// Λ(x) = f₁(x)/f₀(x); +∞ where only f₀ vanishes.
    pub fn likelihood_ratio(&self, x: f64) -> Result<f64> {
        let f0 = self.null.pdf(x);
        let f1 = self.alt.pdf(x);
        if f0 > 0.0 {
            Ok(f1 / f0)
        } else if f1 > 0.0 {
            Ok(f64::INFINITY)
        } else {
            Err(Error::Undefined(format!(
                "likelihood ratio 0/0 at x = {x}"
            )))
        }
    }

    pub fn mixture_pdf(&self, x: f64) -> f64 {
        (1.0 - self.pi1) * self.null.pdf(x) + self.pi1 * self.alt.pdf(x)
    }

    pub fn mixture_cdf(&self, x: f64) -> f64 {
        (1.0 - self.pi1) * self.null.cdf(x) + self.pi1 * self.alt.cdf(x)
    }

    pub fn mixture_sf(&self, x: f64) -> f64 {
        (1.0 - self.pi1) * self.null.sf(x) + self.pi1 * self.alt.sf(x)
    }

    /// Draws n statistics with their truth indicators (true = non-null).
    pub fn sample_labeled<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> (Vec<f64>, Vec<bool>) {
        let mut stats = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        for _ in 0..n {
            let is_alt = rng.random::<f64>() < self.pi1;
            let x = if is_alt {
                self.alt.sample_one(rng)
            } else {
                self.null.sample_one(rng)
            };
            stats.push(x);
            theta.push(is_alt);
        }
        (stats, theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spike_5000() -> DistributionSpec {
        DistributionSpec::spike_triangle(5000, 0.5, 1.2).unwrap()
    }

    #[test]
    fn pdf_known_points() {
        assert!((DistributionSpec::StandardNormal.pdf(0.0) - 0.3989422804014327).abs() < 1e-15);
        let spike = spike_5000();
        let w = 1.2 * 5000f64.powf(-0.5);
        let peak = 5000f64.powf(0.5) / 1.2;
        assert!((spike.pdf(w) - peak).abs() < 1e-9 * peak);
        assert!((peak - 58.92556509887896).abs() < 1e-9);
        assert_eq!(DistributionSpec::Uniform01.pdf(0.5), 1.0);
        assert_eq!(DistributionSpec::Uniform01.pdf(1.5), 0.0);
    }

    #[test]
    fn cdf_known_points() {
        assert_eq!(DistributionSpec::StandardNormal.cdf(0.0), 0.5);
        let t1 = DistributionSpec::student_t(1.0).unwrap();
        assert!((t1.cdf(1.0) - 0.75).abs() < 1e-13);
        let spike = spike_5000();
        let w = 1.2 * 5000f64.powf(-0.5);
        assert!((spike.cdf(w) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn quantile_known_points() {
        assert_eq!(
            DistributionSpec::StandardNormal.quantile(0.5).unwrap(),
            0.0
        );
        assert!((DistributionSpec::Uniform01.quantile(0.3).unwrap() - 0.3).abs() < 1e-15);
    }

    // Oracle: quadrature of the t density over [0, x] must equal u − 1/2.
    #[test]
    fn student_t_quantile_against_quadrature() {
        let t10 = DistributionSpec::student_t(10.0).unwrap();
        let x = t10.quantile(0.975).unwrap();
        assert!((x - 2.2281388519649385).abs() < 1e-8, "got {x}");
        // Simpson over [0, x], 20k panels
        let m = 20_000;
        let h = x / m as f64;
        let mut integral = t10.pdf(0.0) + t10.pdf(x);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            integral += w * t10.pdf(i as f64 * h);
        }
        integral *= h / 3.0;
        assert!(
            (integral - 0.475).abs() < 1e-10,
            "quadrature gave {integral}"
        );
    }

    #[test]
    fn student_t_cdf_reference_values() {
        let t10 = DistributionSpec::student_t(10.0).unwrap();
        assert!((t10.cdf(2.0) - 0.9633059826146297).abs() < 1e-13);
        let t25 = DistributionSpec::student_t(2.5).unwrap();
        assert!((t25.cdf(1.3) - 0.849756605364646).abs() < 1e-13);
        let t5 = DistributionSpec::student_t(5.0).unwrap();
        assert!((t5.pdf(0.7) - 0.2867654575766979).abs() < 1e-13);
    }

    #[test]
    fn generalized_gaussian_matches_reference() {
        let gg = DistributionSpec::generalized_gaussian(1.5, 0.3).unwrap();
        assert!((gg.pdf(0.3) - 0.42267892966480777).abs() < 1e-13);
        assert!((gg.cdf(-1.0) - 0.11403095155736590).abs() < 1e-12);
        assert!((gg.cdf(0.3) - 0.5).abs() < 1e-15);
        assert!((gg.cdf(1.7) - 0.90082952753525241).abs() < 1e-12);
        // γ = 2 degenerates to the standard normal
        let gg2 = DistributionSpec::generalized_gaussian(2.0, 0.0).unwrap();
        for x in [-2.0, -0.3, 0.0, 1.1, 2.7] {
            assert!((gg2.pdf(x) - special::norm_pdf(x)).abs() < 1e-14);
            assert!((gg2.cdf(x) - special::norm_cdf(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn sampling_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(DistributionSpec::StandardNormal
            .sample(&mut rng, 0)
            .is_empty());
        let n = 1_000_000;
        let draws = DistributionSpec::StandardNormal.sample(&mut rng, n);
        let mean = draws.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "mean {mean}");
        let spike = spike_5000();
        let w = 1.2 * 5000f64.powf(-0.5);
        let draws = spike.sample(&mut rng, 100_000);
        assert!(draws.iter().all(|&x| (0.0..=2.0 * w).contains(&x)));
    }

    #[test]
    fn sample_empirical_cdf_ks_bound() {
        // DKW-style sanity: KS distance below 1.63/sqrt(n) at the 1% level.
        let specs = [
            DistributionSpec::StandardNormal,
            DistributionSpec::student_t(5.0).unwrap(),
            DistributionSpec::Uniform01,
            spike_5000(),
        ];
        let n = 100_000;
        for (i, spec) in specs.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
            let mut draws = spec.sample(&mut rng, n);
            draws.sort_unstable_by(f64::total_cmp);
            let mut ks: f64 = 0.0;
            for (k, x) in draws.iter().enumerate() {
                let f = spec.cdf(*x);
                let lo = k as f64 / n as f64;
                let hi = (k + 1) as f64 / n as f64;
                ks = ks.max((f - lo).abs()).max((f - hi).abs());
            }
            assert!(
                ks <= 1.63 / (n as f64).sqrt(),
                "KS distance {ks} too large for spec {i}"
            );
        }
    }

    #[test]
    fn likelihood_ratio_closed_forms() {
        let model = TwoGroupModel::new(
            0.1,
            DistributionSpec::StandardNormal,
            DistributionSpec::normal(2.0, 1.0).unwrap(),
        )
        .unwrap();
        // Λ(x) = exp(2x − 2)
        assert!((model.likelihood_ratio(0.0).unwrap() - (-2.0f64).exp()).abs() < 1e-14);
        assert!((model.likelihood_ratio(2.0).unwrap() - 2.0f64.exp()).abs() < 1e-13);

        let ex1 = TwoGroupModel::new(0.182, DistributionSpec::Uniform01, spike_5000()).unwrap();
        let w = 1.2 * 5000f64.powf(-0.5);
        assert!((ex1.likelihood_ratio(w).unwrap() - 58.92556509887896).abs() < 1e-9);

        let narrow = TwoGroupModel::new(
            0.1,
            DistributionSpec::StandardNormal,
            DistributionSpec::normal(1.5, 0.8).unwrap(),
        )
        .unwrap();
        assert!(narrow.likelihood_ratio(20.0).unwrap() < 1e-12);
    }

    #[test]
    fn likelihood_ratio_zero_null_density() {
        let ex1 = TwoGroupModel::new(0.182, spike_5000(), DistributionSpec::Uniform01).unwrap();
        // outside the spike support the null density is 0 but f1 > 0
        assert_eq!(ex1.likelihood_ratio(0.9).unwrap(), f64::INFINITY);
        assert!(ex1.likelihood_ratio(-5.0).is_err());
    }

    #[test]
    fn mixture_degenerate_weights() {
        let null = DistributionSpec::StandardNormal;
        let alt = DistributionSpec::normal(2.0, 0.7).unwrap();
        let m0 = TwoGroupModel::new(0.0, null.clone(), alt.clone()).unwrap();
        let m1 = TwoGroupModel::new(1.0 - 1e-16, null.clone(), alt.clone()).unwrap();
        for x in [-1.0, 0.0, 0.5, 3.0] {
            assert_eq!(m0.mixture_cdf(x), null.cdf(x));
            assert!((m1.mixture_cdf(x) - alt.cdf(x)).abs() < 1e-12);
        }
    }

    // Oracle: quadrature of mixture_pdf over (−∞, 0] vs mixture_cdf(0).
    #[test]
    fn mixture_cdf_against_quadrature() {
        let pi1 = 5000f64.powf(-0.3);
        let alt = DistributionSpec::finite_mixture(
            vec![0.9, 0.1],
            vec![
                DistributionSpec::normal(3.0, 0.7).unwrap(),
                DistributionSpec::normal(-3.0, 0.7).unwrap(),
            ],
        )
        .unwrap();
        let model = TwoGroupModel::new(pi1, DistributionSpec::StandardNormal, alt).unwrap();
        let lo = -14.0;
        let m = 40_000;
        let h = (0.0 - lo) / m as f64;
        let mut integral = model.mixture_pdf(lo) + model.mixture_pdf(0.0);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            integral += w * model.mixture_pdf(lo + i as f64 * h);
        }
        integral *= h / 3.0;
        assert!(
            (integral - model.mixture_cdf(0.0)).abs() < 1e-6,
            "quadrature {integral} vs cdf {}",
            model.mixture_cdf(0.0)
        );
    }

    #[test]
    fn location_scale_cdf_identity() {
        let base = DistributionSpec::student_t(5.0).unwrap();
        let ls = DistributionSpec::location_scale(base.clone(), 2.0, 3.0).unwrap();
        for x in [-4.0, 0.0, 2.0, 7.5] {
            assert_eq!(ls.cdf(x), base.cdf((x - 2.0) / 3.0));
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(DistributionSpec::normal(0.0, 0.0).is_err());
        assert!(DistributionSpec::normal(f64::NAN, 1.0).is_err());
        assert!(DistributionSpec::student_t(-1.0).is_err());
        assert!(DistributionSpec::spike_triangle(5000, 0.5, 100.0).is_err());
        assert!(DistributionSpec::spike_triangle(5000, 1.5, 1.2).is_err());
        assert!(DistributionSpec::finite_mixture(
            vec![0.5, 0.4],
            vec![DistributionSpec::StandardNormal, DistributionSpec::Uniform01],
        )
        .is_err());
        assert!(TwoGroupModel::new(
            1.0,
            DistributionSpec::StandardNormal,
            DistributionSpec::Uniform01
        )
        .is_err());
    }

    #[test]
    fn quantile_domain_errors() {
        for bad in [0.0, 1.0, -0.2, 1.7] {
            assert!(DistributionSpec::StandardNormal.quantile(bad).is_err());
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn normal_roundtrip(
            mu in -50.0f64..50.0,
            sigma in 0.01f64..20.0,
            u in 0.001f64..0.999,
        ) {
            let d = DistributionSpec::normal(mu, sigma).unwrap();
            let x = d.quantile(u).unwrap();
            prop_assert!((d.cdf(x) - u).abs() < 1e-9, "u={u} -> x={x} -> {}", d.cdf(x));
        }

        #[test]
        fn student_t_roundtrip(df in 0.5f64..200.0, u in 0.001f64..0.999) {
            let d = DistributionSpec::student_t(df).unwrap();
            let x = d.quantile(u).unwrap();
            prop_assert!((d.cdf(x) - u).abs() < 1e-9);
        }

        #[test]
        fn spike_roundtrip(
            n in 10u64..100_000,
            alpha in 0.05f64..0.95,
            l_frac in 0.01f64..1.0,
            u in 0.001f64..0.999,
        ) {
            let l = l_frac * 0.5 * (n as f64).powf(alpha);
            let d = DistributionSpec::spike_triangle(n, alpha, l).unwrap();
            let x = d.quantile(u).unwrap();
            prop_assert!((d.cdf(x) - u).abs() < 1e-10);
            prop_assert!(d.pdf(x) >= 0.0);
        }

        #[test]
        fn mixture_cdf_monotone_and_bounded(
            w in 0.01f64..0.99,
            mu in -5.0f64..5.0,
            sigma in 0.1f64..3.0,
            a in -10.0f64..10.0,
            gap in 0.0f64..5.0,
        ) {
            let d = DistributionSpec::finite_mixture(
                vec![w, 1.0 - w],
                vec![
                    DistributionSpec::StandardNormal,
                    DistributionSpec::normal(mu, sigma).unwrap(),
                ],
            )
            .unwrap();
            let (fa, fb) = (d.cdf(a), d.cdf(a + gap));
            prop_assert!((0.0..=1.0).contains(&fa));
            prop_assert!(fb >= fa);
        }
    }
}
