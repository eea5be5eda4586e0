//! Python bindings for `ddfrot`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ddfrot::{seeding::trial_rng, DmtKind};

fn py_err(e: ddfrot::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

#[pyclass(name = "ProtocolConfig", from_py_object)]
#[derive(Clone)]
pub struct PyProtocolConfig {
    inner: ddfrot::ProtocolConfig,
}

#[pymethods]
impl PyProtocolConfig {
    #[new]
    #[pyo3(signature = (n_relays, n_rotations, frame_len, rate, snr_db, block_len=1, isolated=false, ordering="random", scheme="rotations"))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        n_relays: usize,
        n_rotations: usize,
        frame_len: usize,
        rate: f64,
        snr_db: f64,
        block_len: usize,
        isolated: bool,
        ordering: &str,
        scheme: &str,
    ) -> PyResult<Self> {
        let inner = ddfrot::ProtocolConfig::new(
            n_relays,
            n_rotations,
            frame_len,
            rate,
            ddfrot::snr_db_to_linear(snr_db),
        )
        .with_block_len(block_len)
        .with_isolated(isolated)
        .with_ordering(parse(ordering)?)
        .with_scheme(parse(scheme)?);
        inner.validate().map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n_relays(&self) -> usize {
        self.inner.n_relays
    }
    #[getter]
    fn n_rotations(&self) -> usize {
        self.inner.n_rotations
    }
    #[getter]
    fn frame_len(&self) -> usize {
        self.inner.frame_len
    }
    #[getter]
    fn block_len(&self) -> usize {
        self.inner.block_len
    }
    #[getter]
    fn rate(&self) -> f64 {
        self.inner.rate
    }
    #[getter]
    fn snr_linear(&self) -> f64 {
        self.inner.snr_linear
    }
    #[getter]
    fn isolated(&self) -> bool {
        self.inner.isolated
    }
    #[getter]
    fn ordering(&self) -> String {
        self.inner.ordering.to_string()
    }
    #[getter]
    fn scheme(&self) -> String {
        self.inner.scheme.to_string()
    }

    /// Copy of this configuration at another SNR in dB.
    fn at_snr_db(&self, snr_db: f64) -> Self {
        Self {
            inner: self.inner.clone().with_snr_linear(ddfrot::snr_db_to_linear(snr_db)),
        }
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyclass(name = "OutageEstimate", frozen, get_all)]
pub struct PyOutageEstimate {
    trials: u64,
    failures: u64,
    p_hat: f64,
    ci_low: f64,
    ci_high: f64,
}

impl From<ddfrot::OutageEstimate> for PyOutageEstimate {
    fn from(e: ddfrot::OutageEstimate) -> Self {
        Self {
            trials: e.trials,
            failures: e.failures,
            p_hat: e.p_hat,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
        }
    }
}

#[pymethods]
impl PyOutageEstimate {
    fn __repr__(&self) -> String {
        format!(
            "OutageEstimate(trials={}, failures={}, p_hat={}, ci=({}, {}))",
            self.trials, self.failures, self.p_hat, self.ci_low, self.ci_high
        )
    }
}

#[pyclass(name = "ChannelRealization", from_py_object)]
#[derive(Clone)]
pub struct PyChannelRealization {
    inner: ddfrot::ChannelRealization,
}

#[pymethods]
impl PyChannelRealization {
    /// Explicit gains; `f[k][i]` is relay k to relay i. Omit `f` for isolated relays.
    #[new]
    #[pyo3(signature = (g0, h, g, f=None))]
    fn new(g0: Complex64, h: Vec<Complex64>, g: Vec<Complex64>, f: Option<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let inner = match f {
            Some(f) => ddfrot::ChannelRealization::new(g0, h, g, f),
            None => ddfrot::ChannelRealization::isolated(g0, h, g),
        }
        .map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Draw from the stream of trial `index` under `seed`.
    #[staticmethod]
    #[pyo3(signature = (n_relays, isolated, seed, index=0))]
    fn draw(n_relays: usize, isolated: bool, seed: u64, index: u64) -> Self {
        Self {
            inner: ddfrot::draw_realization(n_relays, isolated, &mut trial_rng(seed, index)),
        }
    }

    #[getter]
    fn g0(&self) -> Complex64 {
        self.inner.g0
    }
    #[getter]
    fn h(&self) -> Vec<Complex64> {
        self.inner.h.clone()
    }
    #[getter]
    fn g(&self) -> Vec<Complex64> {
        self.inner.g.clone()
    }

    fn f(&self, src: usize, dst: usize) -> PyResult<Complex64> {
        let n = self.inner.n_relays();
        if src >= n || dst >= n {
            return Err(PyValueError::new_err(format!("relay index out of range 0..{n}")));
        }
        Ok(self.inner.f(src, dst))
    }
}

#[pyclass(name = "RotationSchedule", from_py_object)]
#[derive(Clone)]
pub struct PyRotationSchedule {
    inner: ddfrot::RotationSchedule,
}

#[pymethods]
impl PyRotationSchedule {
    #[new]
    #[pyo3(signature = (n_relays, n_rotations, frame_len, ordering="lexicographic", seed=0, index=0))]
    fn new(
        n_relays: usize,
        n_rotations: usize,
        frame_len: usize,
        ordering: &str,
        seed: u64,
        index: u64,
    ) -> PyResult<Self> {
        let inner = ddfrot::build_schedule(
            n_relays,
            n_rotations,
            frame_len,
            parse(ordering)?,
            &mut trial_rng(seed, index),
        )
        .map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Rows of rotations, one list per relay.
    fn entries(&self) -> Vec<Vec<Complex64>> {
        (0..self.inner.n_relays())
            .map(|k| self.inner.row(k).to_vec())
            .collect()
    }

    fn angle_indices(&self) -> Vec<Vec<usize>> {
        (0..self.inner.n_relays())
            .map(|k| (0..self.inner.frame_len()).map(|t| self.inner.angle_index(k, t)).collect())
            .collect()
    }

    fn coverage_warning(&self) -> Option<String> {
        self.inner.coverage_warning()
    }
}

#[pyclass(name = "TrialOutcome", frozen, get_all)]
pub struct PyTrialOutcome {
    decode_slot: Vec<usize>,
    dest_info_bits: f64,
    outage: bool,
}

impl From<ddfrot::TrialOutcome> for PyTrialOutcome {
    fn from(o: ddfrot::TrialOutcome) -> Self {
        Self {
            decode_slot: o.decode_slot,
            dest_info_bits: o.dest_info_bits,
            outage: o.outage,
        }
    }
}

#[pyfunction]
fn snr_db_to_linear(snr_db: f64) -> f64 {
    ddfrot::snr_db_to_linear(snr_db)
}

#[pyfunction]
fn angle_set(n_rotations: usize) -> PyResult<Vec<f64>> {
    ddfrot::angle_set(n_rotations).map_err(py_err)
}

#[pyfunction]
fn slot_mutual_info(coeff: Complex64, rho: f64, active: usize) -> f64 {
    ddfrot::slot_mutual_info(coeff, rho, active)
}

#[pyfunction]
fn single_relay_listen_time(frame_len: usize, rate: f64, rho: f64, h1: Complex64) -> usize {
    ddfrot::single_relay_listen_time(frame_len, rate, rho, h1)
}

#[pyfunction]
fn useful_rate(bits_per_symbol: usize, block_len: usize, n_relays: usize) -> PyResult<f64> {
    ddfrot::useful_rate(bits_per_symbol, block_len, n_relays).map_err(py_err)
}

#[pyfunction]
fn run_trial(
    config: &PyProtocolConfig,
    realization: &PyChannelRealization,
    schedule: &PyRotationSchedule,
) -> PyResult<PyTrialOutcome> {
    ddfrot::run_trial(&config.inner, &realization.inner, &schedule.inner)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn baseline_miso_trial(config: &PyProtocolConfig, realization: &PyChannelRealization) -> PyResult<PyTrialOutcome> {
    ddfrot::baseline_miso_trial(&config.inner, &realization.inner)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn estimate_outage(py: Python<'_>, config: &PyProtocolConfig, trials: u64, seed: u64) -> PyResult<PyOutageEstimate> {
    let cfg = config.inner.clone();
    py.detach(|| ddfrot::estimate_outage(&cfg, trials, seed))
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn estimate_outage_crn(
    py: Python<'_>,
    configs: Vec<PyProtocolConfig>,
    trials: u64,
    seed: u64,
) -> PyResult<Vec<PyOutageEstimate>> {
    let cfgs: Vec<_> = configs.into_iter().map(|c| c.inner).collect();
    py.detach(|| ddfrot::estimate_outage_crn(&cfgs, trials, seed))
        .map(|v| v.into_iter().map(Into::into).collect())
        .map_err(py_err)
}

#[pyfunction]
fn wilson_interval(failures: u64, trials: u64) -> PyResult<(f64, f64)> {
    if trials == 0 || failures > trials {
        return Err(PyValueError::new_err("need 0 <= failures <= trials and trials >= 1"));
    }
    Ok(ddfrot::wilson_interval(failures, trials))
}

#[pyfunction]
fn diversity_slope(points: Vec<(f64, f64)>) -> PyResult<f64> {
    ddfrot::diversity_slope(&points).map_err(py_err)
}

#[pyfunction]
fn dmt_ddf_optimal(n_relays: usize, r: f64) -> PyResult<f64> {
    ddfrot::dmt_ddf_optimal(n_relays, r).map_err(py_err)
}

#[pyfunction]
fn dmt_lower_bound_single_relay(frame_len: usize, r: f64) -> PyResult<f64> {
    ddfrot::dmt_lower_bound_single_relay(frame_len, r).map_err(py_err)
}

/// `kind` is "optimal" (param = relay count) or "lower_bound" (param = frame length).
#[pyfunction]
fn dmt_curve(kind: &str, param: usize, grid: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let kind = match kind {
        "optimal" => DmtKind::Optimal(param),
        "lower_bound" => DmtKind::LowerBound(param),
        other => return Err(PyValueError::new_err(format!("unknown curve kind `{other}`"))),
    };
    ddfrot::dmt_curve(kind, &grid)
        .map(|pts| pts.into_iter().map(|p| (p.r, p.d)).collect())
        .map_err(py_err)
}

#[pymodule]
fn ddfrot_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProtocolConfig>()?;
    m.add_class::<PyOutageEstimate>()?;
    m.add_class::<PyChannelRealization>()?;
    m.add_class::<PyRotationSchedule>()?;
    m.add_class::<PyTrialOutcome>()?;
    m.add_function(wrap_pyfunction!(snr_db_to_linear, m)?)?;
    m.add_function(wrap_pyfunction!(angle_set, m)?)?;
    m.add_function(wrap_pyfunction!(slot_mutual_info, m)?)?;
    m.add_function(wrap_pyfunction!(single_relay_listen_time, m)?)?;
    m.add_function(wrap_pyfunction!(useful_rate, m)?)?;
    m.add_function(wrap_pyfunction!(run_trial, m)?)?;
    m.add_function(wrap_pyfunction!(baseline_miso_trial, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_outage, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_outage_crn, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_interval, m)?)?;
    m.add_function(wrap_pyfunction!(diversity_slope, m)?)?;
    m.add_function(wrap_pyfunction!(dmt_ddf_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(dmt_lower_bound_single_relay, m)?)?;
    m.add_function(wrap_pyfunction!(dmt_curve, m)?)?;
    Ok(())
}
