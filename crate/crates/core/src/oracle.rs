//! Population-level analytics for a known two-group model: the q′ threshold,
//! likelihood-ratio level crossings, interval mFDR, the constraint
//! functional s(a,b) with its longest-feasible-endpoint b_a, the oracle
//! interval maximizing rejected mass, and the oracle BH thresholds.
//!
//! All integrals of F and F₀ go through the distributions' cdfs directly, so
//! accuracy is limited only by cdf accuracy. Root and argmax searches use a
//! dense grid followed by bisection / golden-section refinement.

use serde::Serialize;

use crate::dist::TwoGroupModel;
use crate::error::{Error, Result};

/// Default grid resolution for scans over the search range.
pub const DEFAULT_GRID: usize = 4096;

/// Default a-grid resolution for the oracle interval argmax.
pub const DEFAULT_A_GRID: usize = 512;

/// q′ = (1−q)(1−π₁)/(qπ₁); +∞ at π₁ = 0.
pub fn q_prime(q: f64, pi1: f64) -> Result<f64> {
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
    if pi1 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 - q) * (1.0 - pi1) / (q * pi1))
}

/// Search bounds wide enough to contain everything but ~1e-12 of both the
/// null and alternative mass.
pub fn default_bounds(model: &TwoGroupModel) -> (f64, f64) {
    let lo = model
        .null
        .quantile(1e-12)
        .unwrap()
        .min(model.alt.quantile(1e-12).unwrap());
    let hi = model
        .null
        .quantile(1.0 - 1e-12)
        .unwrap()
        .max(model.alt.quantile(1.0 - 1e-12).unwrap());
    (lo, hi)
}

/// Right cap standing in for +∞: the null's 1−1e-12 quantile.
pub fn default_b_max(model: &TwoGroupModel) -> f64 {
    model.null.quantile(1.0 - 1e-12).unwrap()
}

fn lambda_or_nan(model: &TwoGroupModel, x: f64) -> f64 {
    model.likelihood_ratio(x).unwrap_or(f64::NAN)
}

/// All solutions of Λ(x) = level inside `range`, found by a grid scan for
/// sign changes refined by bisection to 1e-10. Empty when the level is never
/// attained.
pub fn lr_crossings(
    model: &TwoGroupModel,
    level: f64,
    range: (f64, f64),
    grid: usize,
) -> Result<Vec<f64>> {
    if !(range.0 < range.1) || grid < 2 {
        return Err(Error::InvalidParameter(format!(
            "need range.0 < range.1 and grid >= 2, got {range:?}, {grid}"
        )));
    }
    let n = grid;
    let step = (range.1 - range.0) / (n - 1) as f64;
    let g = |x: f64| lambda_or_nan(model, x) - level;
    let mut roots = Vec::new();
    let mut prev_x = range.0;
    let mut prev_g = g(prev_x);
    for k in 1..n {
        let x = range.0 + k as f64 * step;
        let gx = g(x);
        if prev_g == 0.0 {
            roots.push(prev_x);
        } else if prev_g.is_finite() && gx.is_finite() && prev_g * gx < 0.0 {
            let mut lo = prev_x;
            let mut hi = x;
            let mut glo = prev_g;
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    break;
                }
                if glo * gm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_g = gx;
    }
    if prev_g == 0.0 {
        roots.push(prev_x);
    }
    Ok(roots)
}

/// Grid-maximized and locally refined sup of Λ over `range`.
pub fn max_lambda(model: &TwoGroupModel, range: (f64, f64), grid: usize) -> Result<f64> {
    if !(range.0 < range.1) || grid < 3 {
        return Err(Error::InvalidParameter(format!(
            "need range.0 < range.1 and grid >= 3, got {range:?}, {grid}"
        )));
    }
    let n = grid;
    let step = (range.1 - range.0) / (n - 1) as f64;
    let mut best_k = 0usize;
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let x = range.0 + k as f64 * step;
        let v = lambda_or_nan(model, x);
        if v.is_infinite() && v > 0.0 {
            return Ok(f64::INFINITY);
        }
        if v.is_finite() && v > best {
            best = v;
            best_k = k;
        }
    }
    if !best.is_finite() {
        return Err(Error::Numerical(
            "likelihood ratio undefined on the whole grid".into(),
        ));
    }
    // golden-section refinement inside the bracketing cells
    let mut lo = range.0 + best_k.saturating_sub(1) as f64 * step;
    let mut hi = (range.0 + (best_k + 1) as f64 * step).min(range.1);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |x: f64| lambda_or_nan(model, x);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo < 1e-12 * (1.0 + lo.abs()) {
            break;
        }
    }
    Ok(best.max(f1).max(f2))
}

/// mFDR of the rejection region [a, b]:
/// (1−π₁)(F₀(b)−F₀(a)) / (F(b)−F(a)).
pub fn mfdr_of_region(model: &TwoGroupModel, a: f64, b: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "need a < b, got a={a}, b={b}"
        )));
    }
    let mass = model.mixture_cdf(b) - model.mixture_cdf(a);
    if mass <= 0.0 {
        return Err(Error::Undefined(format!(
            "region [{a}, {b}] carries no mixture mass"
        )));
    }
    let null_mass = model.null.cdf(b) - model.null.cdf(a);
    Ok((1.0 - model.pi1) * null_mass / mass)
}

/// The constraint functional s(a,b) = (1−π₁)∫ₐᵇdF₀ − q∫ₐᵇdF, whose sign
/// decides whether [a,b] keeps the mFDR at or below q.
#[derive(Debug, Clone)]
pub struct SFunction {
    pub model: TwoGroupModel,
    pub q: f64,
}

/// Endpoint returned by [`SFunction::b_of_a`]; `unbounded` records that the
/// feasible interval ran into the b_max cap rather than a genuine crossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BEndpoint {
    pub b: f64,
    pub unbounded: bool,
}

impl SFunction {
    pub fn new(model: TwoGroupModel, q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "q must lie in (0,1), got {q}"
            )));
        }
        Ok(SFunction { model, q })
    }

    pub fn s(&self, a: f64, b: f64) -> f64 {
        let m = &self.model;
        (1.0 - m.pi1) * (m.null.cdf(b) - m.null.cdf(a))
            - self.q * (m.mixture_cdf(b) - m.mixture_cdf(a))
    }

    /// Largest b ≤ b_max with s(a, b) ≤ 0: the final nonpositive grid point
    /// is refined by bisection against the following up-crossing. Returns a
    /// degenerate `b = a` when s is positive everywhere past a.
    pub fn b_of_a(&self, a: f64, b_max: f64, grid: usize) -> Result<BEndpoint> {
        if !(a <= b_max) {
            return Err(Error::InvalidParameter(format!(
                "need a <= b_max, got a={a}, b_max={b_max}"
            )));
        }
        if grid < 2 {
            return Err(Error::InvalidParameter("grid must be >= 2".into()));
        }
        let step = (b_max - a) / (grid - 1) as f64;
        let mut last_ok = 0usize;
        for k in (1..grid).rev() {
            let x = a + k as f64 * step;
            if self.s(a, x) <= 0.0 {
                last_ok = k;
                break;
            }
        }
        if last_ok == grid - 1 {
            return Ok(BEndpoint {
                b: b_max,
                unbounded: true,
            });
        }
        if last_ok == 0 {
            return Ok(BEndpoint {
                b: a,
                unbounded: false,
            });
        }
        let mut lo = a + last_ok as f64 * step; // s <= 0 here
        let mut hi = a + (last_ok + 1) as f64 * step; // s > 0 here
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.s(a, mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * (1.0 + lo.abs()) {
                break;
            }
        }
        Ok(BEndpoint {
            b: lo,
            unbounded: false,
        })
    }
}

/// Kind tag on an oracle interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntervalKind {
    Bh,
    Clat,
    LrLevelSet,
}

/// An oracle rejection interval with its mass and mFDR.
#[derive(Debug, Clone, Serialize)]
pub struct OracleInterval {
    pub a: f64,
    pub b: f64,
    /// The right endpoint hit the b_max cap (stands in for +∞).
    pub b_unbounded: bool,
    pub mass: f64,
    pub mfdr: f64,
    pub kind: IntervalKind,
}

/// Existence verdict for a nonempty rejection region at level q.
#[derive(Debug, Clone, Serialize)]
pub enum ExistsRejection {
    Empty {
        max_lambda: f64,
        q_prime: f64,
    },
    /// The likelihood-ratio level set {Λ > q′} spans (c1, c2); c2 is +∞ for
    /// a monotone ratio.
    Exists {
        c1: f64,
        c2: f64,
        max_lambda: f64,
        q_prime: f64,
    },
}

/// Compares max Λ (grid-maximized, locally refined) against q′ and returns
/// the level-set interval when a feasible rejection region exists.
pub fn exists_rejection(model: &TwoGroupModel, q: f64) -> Result<ExistsRejection> {
    let bounds = default_bounds(model);
    let qp = q_prime(q, model.pi1)?;
    let ml = max_lambda(model, bounds, DEFAULT_GRID)?;
    if !(ml > qp) {
        return Ok(ExistsRejection::Empty {
            max_lambda: ml,
            q_prime: qp,
        });
    }
    let roots = lr_crossings(model, qp, bounds, DEFAULT_GRID)?;
    let (c1, c2) = match roots.len() {
        0 => (bounds.0, f64::INFINITY),
        1 => (roots[0], f64::INFINITY),
        _ => (roots[0], roots[1]),
    };
    Ok(ExistsRejection::Exists {
        c1,
        c2,
        max_lambda: ml,
        q_prime: qp,
    })
}

/// Oracle interval maximizing rejected mass subject to mFDR ≤ q: maximizes
/// g(a) = F(b_a) − F(a) over an a-grid on [lower bound, c₁], then refines
/// the argmax by golden section to 1e-8 in a. `None` when no feasible
/// interval exists. Argmax ties resolve to the smallest a.
pub fn oracle_clat_interval(
    model: &TwoGroupModel,
    q: f64,
    a_grid: usize,
    bounds: Option<(f64, f64)>,
) -> Result<Option<OracleInterval>> {
    if a_grid < 2 {
        return Err(Error::InvalidParameter("a_grid must be >= 2".into()));
    }
    let bounds = match bounds {
        Some(b) if b.0 < b.1 => b,
        Some(b) => {
            return Err(Error::InvalidParameter(format!(
                "bounds must be increasing, got {b:?}"
            )))
        }
        None => default_bounds(model),
    };
    let exists = exists_rejection(model, q)?;
    let c1 = match exists {
        ExistsRejection::Empty { .. } => return Ok(None),
        ExistsRejection::Exists { c1, .. } => c1,
    };
    let sf = SFunction::new(model.clone(), q)?;
    let b_max = default_b_max(model).min(bounds.1).max(c1);

    let a_hi = c1;
    let a_lo = bounds.0;
    let g_of = |a: f64| -> Result<(f64, BEndpoint)> {
        let be = sf.b_of_a(a, b_max, DEFAULT_GRID)?;
        let g = model.mixture_cdf(be.b) - model.mixture_cdf(a);
        Ok((g, be))
    };

    let step = (a_hi - a_lo) / (a_grid - 1) as f64;
    let mut best_a = a_lo;
    let mut best_g = f64::NEG_INFINITY;
    for k in 0..a_grid {
        let a = a_lo + k as f64 * step;
        let (g, _) = g_of(a)?;
        if g > best_g {
            best_g = g;
            best_a = a;
        }
    }
    // golden-section refinement around the grid argmax
    let mut lo = (best_a - step).max(a_lo);
    let mut hi = (best_a + step).min(a_hi);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut g1 = g_of(x1)?.0;
    let mut g2 = g_of(x2)?.0;
    while hi - lo > 1e-8 {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + phi * (hi - lo);
            g2 = g_of(x2)?.0;
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - phi * (hi - lo);
            g1 = g_of(x1)?.0;
        }
    }
    for cand in [lo, 0.5 * (lo + hi), hi] {
        let (g, _) = g_of(cand)?;
        if g > best_g || (g == best_g && cand < best_a) {
            best_g = g;
            best_a = cand;
        }
    }

    let (mass, be) = g_of(best_a)?;
    if mass <= 0.0 || be.b <= best_a {
        return Ok(None);
    }
    let mfdr = mfdr_of_region(model, best_a, be.b)?;
    Ok(Some(OracleInterval {
        a: best_a,
        b: be.b,
        b_unbounded: be.unbounded,
        mass,
        mfdr,
        kind: IntervalKind::Clat,
    }))
}

/// Oracle BH threshold: the smallest t with
/// (1−π₁)(1−F₀(t)) ≤ q(1−F(t)) (adaptive) or with the π₁-free left side
/// (distribution-free). Returns +∞ when never satisfied; a model with
/// π₁ = 0 has no adaptive threshold and errors as degenerate.
pub fn oracle_bh_threshold(model: &TwoGroupModel, q: f64, distribution_free: bool) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "q must lie in (0,1), got {q}"
        )));
    }
    if !distribution_free && model.pi1 == 0.0 {
        return Err(Error::Degenerate(
            "adaptive BH threshold is undefined at pi1 = 0 (any t at q = 1)".into(),
        ));
    }
    let null_weight = if distribution_free {
        1.0
    } else {
        1.0 - model.pi1
    };
    let h = |t: f64| null_weight * model.null.sf(t) - q * model.mixture_sf(t);
    let bounds = default_bounds(model);
    let grid = DEFAULT_GRID;
    let step = (bounds.1 - bounds.0) / (grid - 1) as f64;
    if h(bounds.0) <= 0.0 {
        return Ok(bounds.0);
    }
    let mut first_ok = None;
    for k in 1..grid {
        let t = bounds.0 + k as f64 * step;
        if h(t) <= 0.0 {
            first_ok = Some(k);
            break;
        }
    }
    let Some(k) = first_ok else {
        return Ok(f64::INFINITY);
    };
    let mut lo = bounds.0 + (k - 1) as f64 * step; // h > 0
    let mut hi = bounds.0 + k as f64 * step; // h <= 0
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * (1.0 + hi.abs()) {
            break;
        }
    }
    Ok(hi)
}

/// Everything the oracle analysis produces for one (model, q), in one
/// serializable bundle.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub q: f64,
    pub pi1: f64,
    pub q_prime: f64,
    pub max_lambda: f64,
    pub exists: bool,
    pub crossings: Vec<f64>,
    pub t_bh_distribution_free: f64,
    pub t_bh_adaptive: Option<f64>,
    pub interval: Option<OracleInterval>,
    /// Diagnostic: q′·F₀(c₂) > q (evaluated, not enforced).
    pub side_condition: Option<bool>,
}

/// Runs the full oracle analysis for a model at level q.
pub fn oracle_report(model: &TwoGroupModel, q: f64, a_grid: usize) -> Result<OracleReport> {
    let qp = q_prime(q, model.pi1)?;
    let exists = exists_rejection(model, q)?;
    let (exists_flag, crossings, side_condition, ml) = match &exists {
        ExistsRejection::Empty { max_lambda, .. } => (false, Vec::new(), None, *max_lambda),
        ExistsRejection::Exists {
            c1,
            c2,
            max_lambda,
            ..
        } => {
            let f0_c2 = if c2.is_finite() {
                model.null.cdf(*c2)
            } else {
                1.0
            };
            let cond = qp.is_finite() && qp * f0_c2 > q;
            let mut cs = vec![*c1];
            if c2.is_finite() {
                cs.push(*c2);
            }
            (true, cs, Some(cond), *max_lambda)
        }
    };
    let t_bh_df = oracle_bh_threshold(model, q, true)?;
    let t_bh_adaptive = match oracle_bh_threshold(model, q, false) {
        Ok(t) => Some(t),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    let interval = oracle_clat_interval(model, q, a_grid, None)?;
    Ok(OracleReport {
        q,
        pi1: model.pi1,
        q_prime: qp,
        max_lambda: ml,
        exists: exists_flag,
        crossings,
        t_bh_distribution_free: t_bh_df,
        t_bh_adaptive,
        interval,
        side_condition,
    })
}
