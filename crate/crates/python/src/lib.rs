//! Python bindings.
//!
//! ```python
//! import mpue_sim
//! cfg = mpue_sim.Config(overrides=["ue_model=mpue_a1", "k_b=4"]).desk_scale()
//! report = mpue_sim.run(cfg, seed=3)
//! print(report.pct_failure, report.pct_fast_ho)
//! ```

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use ::mpue_sim as sim;
use sim::engine::output::write_run;
use sim::engine::{RunOptions, SweepSpec, TraceOptions};
use sim::radio::antenna::RxPanelPattern;
use sim::scenario::{ScenarioConfig, UeModel};
use sim::SimError;

fn to_py(e: SimError) -> PyErr {
    match e {
        SimError::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Scenario configuration. Keys not given keep their defaults.
#[pyclass(name = "Config", from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: ScenarioConfig,
}

#[pymethods]
impl PyConfig {
    /// Build from a TOML document and `key=value` overrides.
    #[new]
    #[pyo3(signature = (toml="", overrides=Vec::new()))]
    fn new(toml: &str, overrides: Vec<String>) -> PyResult<Self> {
        let inner = sim::scenario::load_config_with_overrides(toml, &overrides).map_err(to_py)?;
        Ok(PyConfig { inner })
    }

    /// A copy with more `key=value` overrides applied.
    fn with_overrides(&self, overrides: Vec<String>) -> PyResult<Self> {
        let inner = sim::scenario::load_config_with_overrides(&self.inner.to_toml(), &overrides)
            .map_err(to_py)?;
        Ok(PyConfig { inner })
    }

    /// A copy reduced to 100 UEs and 30 s.
    fn desk_scale(&self) -> Self {
        PyConfig {
            inner: self.inner.clone().desk_scale(),
        }
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml()
    }

    fn hash(&self) -> String {
        self.inner.hash()
    }

    #[getter]
    fn ue_model(&self) -> String {
        self.inner.ue_model.to_string()
    }

    #[getter]
    fn k_b(&self) -> usize {
        self.inner.k_b
    }

    #[getter]
    fn o_a3_db(&self) -> f64 {
        self.inner.o_a3_db
    }

    #[getter]
    fn t_ttt_ms(&self) -> f64 {
        self.inner.t_ttt_ms
    }

    #[getter]
    fn n_ues(&self) -> usize {
        self.inner.n_ues
    }

    #[getter]
    fn sim_duration_s(&self) -> f64 {
        self.inner.sim_duration_s
    }

    #[getter]
    fn rng_seed(&self) -> u64 {
        self.inner.rng_seed
    }

    fn __repr__(&self) -> String {
        format!(
            "Config(ue_model={}, k_b={}, o_a3_db={}, t_ttt_ms={}, n_ues={}, sim_duration_s={})",
            self.inner.ue_model,
            self.inner.k_b,
            self.inner.o_a3_db,
            self.inner.t_ttt_ms,
            self.inner.n_ues,
            self.inner.sim_duration_s
        )
    }
}

/// KPIs of one run.
#[pyclass(name = "KpiReport", frozen, skip_from_py_object)]
struct PyKpiReport {
    inner: sim::kpi::KpiReport,
}

#[pymethods]
impl PyKpiReport {
    #[getter]
    fn scheme(&self) -> String {
        self.inner.scheme.to_string()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn attempts(&self) -> u64 {
        self.inner.attempts
    }

    #[getter]
    fn n_success(&self) -> u64 {
        self.inner.n_success
    }

    #[getter]
    fn n_failure(&self) -> u64 {
        self.inner.n_failure
    }

    #[getter]
    fn n_hof(&self) -> u64 {
        self.inner.n_hof
    }

    #[getter]
    fn n_rlf(&self) -> u64 {
        self.inner.n_rlf
    }

    #[getter]
    fn n_fast_ho(&self) -> u64 {
        self.inner.n_fast_ho
    }

    #[getter]
    fn pct_success(&self) -> Option<f64> {
        self.inner.pct_success
    }

    #[getter]
    fn pct_fast_ho(&self) -> Option<f64> {
        self.inner.pct_fast_ho
    }

    #[getter]
    fn pct_failure(&self) -> Option<f64> {
        self.inner.pct_failure
    }

    #[getter]
    fn outage_pct(&self) -> f64 {
        self.inner.outage_pct
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    /// All fields as a dict.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.inner.to_json())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let f = sim::kpi::fmt_pct;
        format!(
            "KpiReport(scheme={}, attempts={}, pct_failure={}, pct_fast_ho={}, outage_pct={:.4})",
            self.inner.scheme,
            self.inner.attempts,
            f(self.inner.pct_failure),
            f(self.inner.pct_fast_ho),
            self.inner.outage_pct
        )
    }
}

/// Simulate one configuration. With `out_dir`, also write the report, the
/// event log and any requested traces there.
#[pyfunction]
#[pyo3(signature = (config, seed=None, parallel=1, out_dir=None, traces=Vec::new()))]
fn run(
    py: Python<'_>,
    config: &PyConfig,
    seed: Option<u64>,
    parallel: usize,
    out_dir: Option<PathBuf>,
    traces: Vec<String>,
) -> PyResult<PyKpiReport> {
    let mut cfg = config.inner.clone();
    if let Some(s) = seed {
        cfg.rng_seed = s;
    }
    let mut t = TraceOptions::default();
    for name in &traces {
        match name.as_str() {
            "motion" => t.motion = true,
            "links" => t.links = true,
            "meas" => t.meas = true,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown trace `{other}` (motion, links, meas)"
                )))
            }
        }
    }
    let opts = RunOptions {
        parallelism: parallel.max(1),
        keep_events: out_dir.is_some(),
        traces: t,
    };
    let out = py
        .detach(|| sim::engine::run_batch(std::slice::from_ref(&cfg), cfg.rng_seed, &opts))
        .map_err(to_py)?;
    let run = out.runs.into_iter().next().expect("one run");
    if let Some(dir) = out_dir {
        write_run(&dir, &run, &out.traces, t).map_err(to_py)?;
    }
    Ok(PyKpiReport { inner: run.report })
}

/// Sweep handover offset, time-to-trigger, k_b and scheme. Returns the
/// seed-averaged rows as a list of dicts.
#[pyfunction]
#[pyo3(signature = (config, o_a3_db=None, t_ttt_ms=None, k_b=None, schemes=None, seeds=None, parallel=1))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    config: &PyConfig,
    o_a3_db: Option<Vec<f64>>,
    t_ttt_ms: Option<Vec<f64>>,
    k_b: Option<Vec<usize>>,
    schemes: Option<Vec<String>>,
    seeds: Option<Vec<u64>>,
    parallel: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let d = SweepSpec::default();
    let schemes = match schemes {
        Some(s) => s
            .iter()
            .map(|x| x.parse::<UeModel>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py)?,
        None => d.schemes,
    };
    let spec = SweepSpec {
        o_a3_db: o_a3_db.unwrap_or(d.o_a3_db),
        t_ttt_ms: t_ttt_ms.unwrap_or(d.t_ttt_ms),
        k_b: k_b.unwrap_or(d.k_b),
        schemes,
        seeds: seeds.unwrap_or_else(|| vec![config.inner.rng_seed]),
    };
    let cfg = config.inner.clone();
    let res = py
        .detach(|| sim::engine::run_sweep(&cfg, &spec, parallel.max(1)))
        .map_err(to_py)?;
    let rows =
        serde_json::to_string(&res.rows).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &rows)
}

/// Recompute the KPI report from an event log file.
#[pyfunction]
fn replay(path: PathBuf) -> PyResult<PyKpiReport> {
    let f =
        File::open(&path).map_err(|e| PyIOError::new_err(format!("{}: {e}", path.display())))?;
    let log = sim::kpi::read_event_log(BufReader::new(f)).map_err(to_py)?;
    Ok(PyKpiReport {
        inner: sim::kpi::replay_events(&log),
    })
}

/// Receive gain in dBi of one edge panel at the given angular offsets from
/// its boresight.
#[pyfunction]
fn rx_panel_gain(delta_elevation_deg: f64, delta_azimuth_deg: f64) -> f64 {
    sim::radio::antenna::rx_panel_gain(
        &RxPanelPattern::MPUE,
        delta_elevation_deg,
        delta_azimuth_deg,
    )
}

/// Cell quality from per-beam L1 RSRPs.
#[pyfunction]
fn derive_cell_quality(l1_beams: Vec<f64>, p_thr_dbm: f64, n_str: usize) -> PyResult<f64> {
    if l1_beams.is_empty() || n_str == 0 {
        return Err(PyValueError::new_err(
            "need at least one beam and n_str >= 1",
        ));
    }
    Ok(sim::measurement::derive_cell_quality(
        &l1_beams, p_thr_dbm, n_str,
    ))
}

/// IIR forgetting factor for filter coefficient `k`.
#[pyfunction]
fn forgetting_factor(k: f64) -> f64 {
    sim::measurement::forgetting_factor(k)
}

#[pymodule]
#[pyo3(name = "mpue_sim")]
fn mpue_sim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_class::<PyKpiReport>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(rx_panel_gain, m)?)?;
    m.add_function(wrap_pyfunction!(derive_cell_quality, m)?)?;
    m.add_function(wrap_pyfunction!(forgetting_factor, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
