//! Python bindings: distributions, two-group models, the interval search,
//! the baselines, and the oracle report, exposed as the `clat_py` module.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clat_core::baselines;
use clat_core::clat as clat_mod;
use clat_core::clat::{ClatConfig, PValueVector, RejectionResult, Side};
use clat_core::dist::{DistributionSpec, TwoGroupModel};
use clat_core::oracle;
use clat_core::sim;
use clat_core::Error;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Numerical(_) | Error::Undefined(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_side(s: &str) -> PyResult<Side> {
    match s {
        "right" => Ok(Side::Right),
        "left" => Ok(Side::Left),
        other => Err(PyValueError::new_err(format!(
            "side must be 'right' or 'left', got '{other}'"
        ))),
    }
}

/// A parametric univariate distribution.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Distribution {
    inner: DistributionSpec,
}

#[pymethods]
impl Distribution {
    #[staticmethod]
    fn standard_normal() -> Self {
        Distribution {
            inner: DistributionSpec::StandardNormal,
        }
    }

    #[staticmethod]
    fn normal(mu: f64, sigma: f64) -> PyResult<Self> {
        Ok(Distribution {
            inner: DistributionSpec::normal(mu, sigma).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn student_t(df: f64) -> PyResult<Self> {
        Ok(Distribution {
            inner: DistributionSpec::student_t(df).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn generalized_gaussian(gamma: f64, mu: f64) -> PyResult<Self> {
        Ok(Distribution {
            inner: DistributionSpec::generalized_gaussian(gamma, mu).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn uniform01() -> Self {
        Distribution {
            inner: DistributionSpec::Uniform01,
        }
    }

    #[staticmethod]
    fn spike_triangle(n: u64, alpha: f64, l: f64) -> PyResult<Self> {
        Ok(Distribution {
            inner: DistributionSpec::spike_triangle(n, alpha, l).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn location_scale(base: &Distribution, mu: f64, sigma: f64) -> PyResult<Self> {
        Ok(Distribution {
            inner: DistributionSpec::location_scale(base.inner.clone(), mu, sigma)
                .map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn mixture(weights: Vec<f64>, components: Vec<Distribution>) -> PyResult<Self> {
        let comps = components.into_iter().map(|c| c.inner).collect();
        Ok(Distribution {
            inner: DistributionSpec::finite_mixture(weights, comps).map_err(to_py_err)?,
        })
    }

    fn pdf(&self, x: f64) -> f64 {
        self.inner.pdf(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x)
    }

    fn sf(&self, x: f64) -> f64 {
        self.inner.sf(x)
    }

    fn quantile(&self, u: f64) -> PyResult<f64> {
        self.inner.quantile(u).map_err(to_py_err)
    }

    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }

    fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.inner.sample(&mut rng, n)
    }

    fn __repr__(&self) -> String {
        format!("Distribution({:?})", self.inner)
    }
}

/// Two-group mixture (1−π₁)f₀ + π₁f₁.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct TwoGroup {
    inner: TwoGroupModel,
}

#[pymethods]
impl TwoGroup {
    #[new]
    fn new(pi1: f64, null: &Distribution, alt: &Distribution) -> PyResult<Self> {
        Ok(TwoGroup {
            inner: TwoGroupModel::new(pi1, null.inner.clone(), alt.inner.clone())
                .map_err(to_py_err)?,
        })
    }

    #[getter]
    fn pi1(&self) -> f64 {
        self.inner.pi1
    }

    fn likelihood_ratio(&self, x: f64) -> PyResult<f64> {
        self.inner.likelihood_ratio(x).map_err(to_py_err)
    }

    fn mixture_pdf(&self, x: f64) -> f64 {
        self.inner.mixture_pdf(x)
    }

    fn mixture_cdf(&self, x: f64) -> f64 {
        self.inner.mixture_cdf(x)
    }

    /// Draw n statistics with truth labels (True = non-null).
    fn sample_labeled(&self, n: usize, seed: u64) -> (Vec<f64>, Vec<bool>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.inner.sample_labeled(&mut rng, n)
    }
}

/// Decision of an interval-rejection procedure.
#[pyclass(frozen)]
struct Rejection {
    #[pyo3(get)]
    reject: Vec<bool>,
    #[pyo3(get)]
    n_rejected: usize,
    #[pyo3(get)]
    interval_p: Option<(f64, f64)>,
    #[pyo3(get)]
    interval_x: Option<(f64, f64)>,
    #[pyo3(get)]
    i_rank: usize,
    #[pyo3(get)]
    j_rank: usize,
    #[pyo3(get)]
    max_diff: usize,
}

impl From<RejectionResult> for Rejection {
    fn from(r: RejectionResult) -> Self {
        Rejection {
            reject: r.reject,
            n_rejected: r.n_rejected,
            interval_p: r.interval_p,
            interval_x: r.interval_x,
            i_rank: r.i_rank,
            j_rank: r.j_rank,
            max_diff: r.max_diff,
        }
    }
}

#[pymethods]
impl Rejection {
    fn __repr__(&self) -> String {
        format!(
            "Rejection(n_rejected={}, i_rank={}, j_rank={}, max_diff={})",
            self.n_rejected, self.i_rank, self.j_rank, self.max_diff
        )
    }
}

/// Union of the two one-sided searches.
#[pyclass(frozen)]
struct TwoSided {
    #[pyo3(get)]
    reject: Vec<bool>,
    #[pyo3(get)]
    n_rejected: usize,
    #[pyo3(get)]
    right: Py<Rejection>,
    #[pyo3(get)]
    left: Py<Rejection>,
}

fn build_cfg(q: f64, pi1: f64, length_constant: f64, null: &Distribution) -> PyResult<ClatConfig> {
    ClatConfig::new(q, null.inner.clone())
        .and_then(|c| c.with_pi1(pi1))
        .and_then(|c| c.with_length_constant(length_constant))
        .map_err(to_py_err)
}

/// One-sided interval search on raw statistics.
#[pyfunction]
#[pyo3(signature = (stats, null, q, pi1 = 0.0, length_constant = 2.0, sided = "right"))]
fn clat(
    stats: Vec<f64>,
    null: &Distribution,
    q: f64,
    pi1: f64,
    length_constant: f64,
    sided: &str,
) -> PyResult<Rejection> {
    let cfg = build_cfg(q, pi1, length_constant, null)?;
    let r = match parse_side(sided)? {
        Side::Right => clat_mod::clat_right(&stats, &cfg),
        Side::Left => clat_mod::clat_left(&stats, &cfg),
    }
    .map_err(to_py_err)?;
    Ok(r.into())
}

/// Two-sided search: both tails at level q, union of the masks.
#[pyfunction]
#[pyo3(signature = (stats, null, q, pi1 = 0.0, length_constant = 2.0))]
fn clat_two_sided(
    py: Python<'_>,
    stats: Vec<f64>,
    null: &Distribution,
    q: f64,
    pi1: f64,
    length_constant: f64,
) -> PyResult<TwoSided> {
    let cfg = build_cfg(q, pi1, length_constant, null)?;
    let r = clat_mod::clat_two_sided(&stats, &cfg).map_err(to_py_err)?;
    Ok(TwoSided {
        reject: r.reject,
        n_rejected: r.n_rejected,
        right: Py::new(py, Rejection::from(r.right))?,
        left: Py::new(py, Rejection::from(r.left))?,
    })
}

/// Interval search on precomputed p-values.
#[pyfunction]
#[pyo3(signature = (pvalues, null, q, pi1 = 0.0, length_constant = 2.0, side = "right"))]
fn clat_search(
    pvalues: Vec<f64>,
    null: &Distribution,
    q: f64,
    pi1: f64,
    length_constant: f64,
    side: &str,
) -> PyResult<Rejection> {
    let p = PValueVector::new(pvalues, parse_side(side)?).map_err(to_py_err)?;
    let cfg = build_cfg(q, pi1, length_constant, null)?;
    Ok(clat_mod::clat_search(&p, &cfg).map_err(to_py_err)?.into())
}

/// BH step-up on precomputed p-values.
#[pyfunction]
#[pyo3(signature = (pvalues, q, pi1 = 0.0))]
fn bh(pvalues: Vec<f64>, q: f64, pi1: f64) -> PyResult<Rejection> {
    let p = PValueVector::new(pvalues, Side::Right).map_err(to_py_err)?;
    Ok(baselines::bh(&p, q, pi1).map_err(to_py_err)?.into())
}

/// Oracle local fdr values under a known model.
#[pyfunction]
fn lfdr_oracle(stats: Vec<f64>, model: &TwoGroup) -> PyResult<Vec<f64>> {
    Ok(baselines::lfdr_oracle(&stats, &model.inner)
        .map_err(to_py_err)?
        .values)
}

/// Step-up rule on local fdr values.
#[pyfunction]
fn lfdr_stepup(fdr: Vec<f64>, q: f64) -> PyResult<Rejection> {
    let v = baselines::LfdrVector {
        values: fdr,
        source: baselines::LfdrSource::Oracle,
    };
    Ok(baselines::lfdr_stepup(&v, q).map_err(to_py_err)?.into())
}

/// Gaussian KDE at the evaluation points (Silverman bandwidth by default).
#[pyfunction]
#[pyo3(signature = (stats, eval_points, bandwidth = None))]
fn kde_density(stats: Vec<f64>, eval_points: Vec<f64>, bandwidth: Option<f64>) -> PyResult<Vec<f64>> {
    baselines::kde_density(&stats, &eval_points, bandwidth).map_err(to_py_err)
}

/// Kernel-density local fdr + step-up.
#[pyfunction]
fn lfdr_sc(stats: Vec<f64>, pi1: f64, null: &Distribution, q: f64) -> PyResult<Rejection> {
    Ok(baselines::lfdr_sc(&stats, pi1, &null.inner, q)
        .map_err(to_py_err)?
        .into())
}

/// EM fit of the null-anchored normal mixture.
#[pyclass(frozen)]
struct EmFit {
    #[pyo3(get)]
    pi1_hat: f64,
    #[pyo3(get)]
    weights: Vec<f64>,
    #[pyo3(get)]
    means: Vec<f64>,
    #[pyo3(get)]
    variances: Vec<f64>,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    final_diff: f64,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    loglik_trace: Vec<f64>,
}

#[pyfunction]
#[pyo3(signature = (stats, components, delta = 0.001, max_iter = 10_000))]
fn em_fit(stats: Vec<f64>, components: usize, delta: f64, max_iter: usize) -> PyResult<EmFit> {
    let f = baselines::em_fit(&stats, components, delta, max_iter).map_err(to_py_err)?;
    Ok(EmFit {
        pi1_hat: f.pi1_hat,
        weights: f.weights,
        means: f.means,
        variances: f.variances,
        iterations: f.iterations,
        final_diff: f.final_diff,
        converged: f.converged,
        loglik_trace: f.loglik_trace,
    })
}

/// EM-estimated local fdr + step-up.
#[pyfunction]
fn lfdr_em(stats: Vec<f64>, components: usize, q: f64) -> PyResult<Rejection> {
    Ok(baselines::lfdr_em(&stats, components, q)
        .map_err(to_py_err)?
        .into())
}

/// zᵢ = Φ⁻¹(T_{dᵢ}(tᵢ)).
#[pyfunction]
fn z_from_t(t: Vec<f64>, df: Vec<f64>) -> PyResult<Vec<f64>> {
    baselines::z_from_t(&t, &df).map_err(to_py_err)
}

/// zᵢ = Φ⁻¹(1 − xᵢ).
#[pyfunction]
fn z_from_unif(x: Vec<f64>) -> PyResult<Vec<f64>> {
    baselines::z_from_unif(&x).map_err(to_py_err)
}

/// Full oracle analysis of a model at level q, as a dict.
#[pyfunction]
#[pyo3(signature = (model, q, a_grid = 512))]
fn oracle_report<'py>(
    py: Python<'py>,
    model: &TwoGroup,
    q: f64,
    a_grid: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rep = oracle::oracle_report(&model.inner, q, a_grid).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("q", rep.q)?;
    d.set_item("pi1", rep.pi1)?;
    d.set_item("q_prime", rep.q_prime)?;
    d.set_item("max_lambda", rep.max_lambda)?;
    d.set_item("exists", rep.exists)?;
    d.set_item("crossings", rep.crossings)?;
    d.set_item("t_bh_distribution_free", rep.t_bh_distribution_free)?;
    d.set_item("t_bh_adaptive", rep.t_bh_adaptive)?;
    d.set_item("side_condition", rep.side_condition)?;
    match rep.interval {
        Some(iv) => {
            let di = PyDict::new(py);
            di.set_item("a", iv.a)?;
            di.set_item("b", iv.b)?;
            di.set_item("b_unbounded", iv.b_unbounded)?;
            di.set_item("mass", iv.mass)?;
            di.set_item("mfdr", iv.mfdr)?;
            d.set_item("interval", di)?;
        }
        None => d.set_item("interval", py.None())?,
    }
    Ok(d)
}

/// Statistics, truth labels, and the optional z-transformed statistics.
type LabeledTriple = (Vec<f64>, Vec<bool>, Option<Vec<f64>>);

/// Draw one replicate of a simulation design. Returns (stats, theta, z)
/// where z is None when the raw null is already standard normal.
#[pyfunction]
#[pyo3(signature = (case, n, beta, seed, mu = 3.0, sigma = 0.7, p1 = 0.9, d = 10.0,
                    alpha = 0.5, l = 1.2, sigma2 = 0.5))]
#[allow(clippy::too_many_arguments)]
fn generate_case(
    case: &str,
    n: usize,
    beta: f64,
    seed: u64,
    mu: f64,
    sigma: f64,
    p1: f64,
    d: f64,
    alpha: f64,
    l: f64,
    sigma2: f64,
) -> PyResult<LabeledTriple> {
    let cfg = match case {
        "I" => sim::CaseConfig::case_i(n, beta, p1, mu, sigma, seed),
        "II" => sim::CaseConfig::case_ii(n, beta, p1, mu, sigma, d, seed),
        "III" => sim::CaseConfig::case_iii(n, beta, alpha, l, seed),
        "IV" => sim::CaseConfig::case_iv(n, beta, p1, mu, sigma, sigma2, seed),
        other => {
            return Err(PyValueError::new_err(format!(
                "case must be I, II, III or IV, got '{other}'"
            )))
        }
    };
    let s = sim::generate(&cfg).map_err(to_py_err)?;
    Ok((s.stats, s.theta, s.z))
}

#[pymodule]
fn clat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Distribution>()?;
    m.add_class::<TwoGroup>()?;
    m.add_class::<Rejection>()?;
    m.add_class::<TwoSided>()?;
    m.add_class::<EmFit>()?;
    m.add_function(wrap_pyfunction!(clat, m)?)?;
    m.add_function(wrap_pyfunction!(clat_two_sided, m)?)?;
    m.add_function(wrap_pyfunction!(clat_search, m)?)?;
    m.add_function(wrap_pyfunction!(bh, m)?)?;
    m.add_function(wrap_pyfunction!(lfdr_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(lfdr_stepup, m)?)?;
    m.add_function(wrap_pyfunction!(kde_density, m)?)?;
    m.add_function(wrap_pyfunction!(lfdr_sc, m)?)?;
    m.add_function(wrap_pyfunction!(em_fit, m)?)?;
    m.add_function(wrap_pyfunction!(lfdr_em, m)?)?;
    m.add_function(wrap_pyfunction!(z_from_t, m)?)?;
    m.add_function(wrap_pyfunction!(z_from_unif, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_report, m)?)?;
    m.add_function(wrap_pyfunction!(generate_case, m)?)?;
    Ok(())
}
