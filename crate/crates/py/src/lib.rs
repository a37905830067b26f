//! Python bindings: configure and drive worlds, run seeded batches.
//!
//!     import siov
//!     cfg = siov.SimConfig(strategy="replace_with_closure", weeks=4, home_count=100)
//!     world = siov.World(cfg, seed=7)
//!     world.run_weeks(1)
//!     print(world.sample())

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use siov::engine::{self, SimConfig as CoreConfig, World as CoreWorld};
use siov::experiment;
use siov::metrics::{MetricsSample, RunSeries};
use siov::{ConfigError, ExperimentError, SimError, StrategyKind, VehicleId};

fn sim_err(e: SimError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn experiment_err(e: ExperimentError) -> PyErr {
    match e {
        ExperimentError::Output { .. } => PyIOError::new_err(e.to_string()),
        ExperimentError::Config(ConfigError::MissingFile(_)) => PyIOError::new_err(e.to_string()),
        ExperimentError::Config(_) | ExperimentError::Sim(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_strategy(name: &str) -> PyResult<StrategyKind> {
    name.parse().map_err(|e: siov::strategy::UnknownStrategy| PyValueError::new_err(e.to_string()))
}

/// Parameters of one simulation run.
#[pyclass(name = "SimConfig", from_py_object)]
#[derive(Clone)]
struct PySimConfig {
    inner: CoreConfig,
}

#[pymethods]
impl PySimConfig {
    #[new]
    #[pyo3(signature = (
        strategy = "as_planned",
        threshold = 5,
        weeks = 20,
        runs = 100,
        grid_size = 75,
        poi_count = 15,
        home_count = 500,
        step_sigma = 0.05,
        seed = 0,
        closure_requires_both_strong = false,
        alternative_scan = "on_suspension",
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        strategy: &str,
        threshold: u32,
        weeks: u32,
        runs: u32,
        grid_size: u32,
        poi_count: u32,
        home_count: u32,
        step_sigma: f64,
        seed: u64,
        closure_requires_both_strong: bool,
        alternative_scan: &str,
    ) -> PyResult<Self> {
        let inner = CoreConfig {
            grid_size,
            poi_count,
            home_count,
            strong_tie_threshold: threshold,
            strategy: parse_strategy(strategy)?,
            weeks,
            runs,
            step_sigma,
            seed,
            closure_requires_both_strong,
            alternative_scan: alternative_scan.parse().map_err(PyValueError::new_err)?,
        };
        inner.validate().map_err(sim_err)?;
        Ok(PySimConfig { inner })
    }

    #[getter]
    fn strategy(&self) -> &'static str {
        self.inner.strategy.name()
    }

    #[getter]
    fn threshold(&self) -> u32 {
        self.inner.strong_tie_threshold
    }

    #[getter]
    fn weeks(&self) -> u32 {
        self.inner.weeks
    }

    #[getter]
    fn runs(&self) -> u32 {
        self.inner.runs
    }

    #[getter]
    fn grid_size(&self) -> u32 {
        self.inner.grid_size
    }

    #[getter]
    fn poi_count(&self) -> u32 {
        self.inner.poi_count
    }

    #[getter]
    fn home_count(&self) -> u32 {
        self.inner.home_count
    }

    #[getter]
    fn step_sigma(&self) -> f64 {
        self.inner.step_sigma
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn closure_requires_both_strong(&self) -> bool {
        self.inner.closure_requires_both_strong
    }

    #[getter]
    fn alternative_scan(&self) -> &'static str {
        self.inner.alternative_scan.name()
    }

    #[getter]
    fn vehicle_count(&self) -> u32 {
        self.inner.vehicle_count()
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "SimConfig(strategy='{}', threshold={}, weeks={}, runs={}, grid_size={}, poi_count={}, home_count={}, step_sigma={}, seed={}, closure_requires_both_strong={}, alternative_scan='{}')",
            c.strategy.name(),
            c.strong_tie_threshold,
            c.weeks,
            c.runs,
            c.grid_size,
            c.poi_count,
            c.home_count,
            c.step_sigma,
            c.seed,
            if c.closure_requires_both_strong { "True" } else { "False" },
            c.alternative_scan.name(),
        )
    }
}

fn sample_dict<'py>(py: Python<'py>, s: &MetricsSample) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("clock", s.clock)?;
    d.set_item("quality_index", s.quality_index)?;
    d.set_item("connectivity_index", s.connectivity_index)?;
    d.set_item("sdu", s.sdu)?;
    Ok(d)
}

fn series_dict<'py>(py: Python<'py>, s: &RunSeries) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("quality_index", s.samples.iter().map(|x| x.quality_index).collect::<Vec<_>>())?;
    d.set_item(
        "connectivity_index",
        s.samples.iter().map(|x| x.connectivity_index).collect::<Vec<_>>(),
    )?;
    d.set_item("sdu", s.samples.iter().map(|x| x.sdu).collect::<Vec<_>>())?;
    d.set_item("weekly_no_visit", s.weekly_no_visit.clone())?;
    Ok(d)
}

/// A simulated world advanced one hour at a time.
#[pyclass(name = "World")]
struct PyWorld {
    inner: CoreWorld,
}

#[pymethods]
impl PyWorld {
    #[new]
    #[pyo3(signature = (config, seed = 0))]
    fn new(config: &PySimConfig, seed: u64) -> PyResult<Self> {
        let inner = CoreWorld::setup(&config.inner, seed).map_err(sim_err)?;
        Ok(PyWorld { inner })
    }

    #[getter]
    fn clock(&self) -> u64 {
        self.inner.clock()
    }

    #[getter]
    fn vehicle_count(&self) -> usize {
        self.inner.vehicles().len()
    }

    #[getter]
    fn poi_count(&self) -> usize {
        self.inner.pois().len()
    }

    /// Advance one hour; returns that hour's metrics.
    fn tick<'py>(&mut self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = self.inner.tick();
        sample_dict(py, &s)
    }

    fn run_weeks(&mut self, weeks: u32) {
        self.inner.run_weeks(weeks);
    }

    /// Metrics for the current state without advancing.
    fn sample<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        sample_dict(py, &self.inner.sample())
    }

    /// Everything recorded so far.
    fn series<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        series_dict(py, self.inner.series())
    }

    /// `(id, quality, (x, y))` for every PoI.
    fn pois(&self) -> Vec<(u32, f64, (u32, u32))> {
        self.inner.pois().iter().map(|p| (p.id.0, p.quality, p.position)).collect()
    }

    /// State, plan rows and tie records of one vehicle.
    fn vehicle<'py>(&self, py: Python<'py>, id: u32) -> PyResult<Bound<'py, PyDict>> {
        let v = self
            .inner
            .vehicle(VehicleId(id))
            .ok_or_else(|| PyValueError::new_err(format!("no vehicle {id}")))?;
        let d = PyDict::new(py);
        d.set_item("id", v.id.0)?;
        d.set_item("home_id", v.home_id.0)?;
        d.set_item("state", v.state as u8)?;
        d.set_item("current_poi", v.current_poi.map(|p| p.0))?;
        d.set_item("remaining_stay", v.remaining_stay)?;
        d.set_item("expectation", v.expectation())?;
        let rows: Vec<(u32, u32, u32, f64, bool)> = v
            .plan
            .rows
            .iter()
            .map(|r| (r.poi_id.0, r.time, r.duration, r.experience, r.suspended))
            .collect();
        d.set_item("plan", rows)?;
        let ties: Vec<(u32, u64, u32, bool)> = v
            .ties
            .iter()
            .map(|r| (r.peer_id.0, r.last_encounter, r.encounters, r.strong))
            .collect();
        d.set_item("ties", ties)?;
        Ok(d)
    }

    fn ties_symmetric(&self) -> bool {
        self.inner.ties_symmetric()
    }
}

/// Set up a world from `seed` and simulate `config.weeks` weeks.
#[pyfunction]
fn run<'py>(py: Python<'py>, config: &PySimConfig, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config.inner.clone();
    let series = py.detach(move || engine::run(&cfg, seed)).map_err(sim_err)?;
    series_dict(py, &series)
}

/// Run `config.runs` seeded runs and return per-tick means.
#[pyfunction]
#[pyo3(signature = (config, master_seed = 0, jobs = 0))]
fn run_cell<'py>(py: Python<'py>, config: &PySimConfig, master_seed: u64, jobs: usize) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config.inner.clone();
    let agg = py
        .detach(move || experiment::run_cell(&cfg, master_seed, jobs))
        .map_err(experiment_err)?;
    let d = PyDict::new(py);
    d.set_item("strategy", agg.strategy.name())?;
    d.set_item("threshold", agg.threshold)?;
    d.set_item("runs", agg.runs)?;
    d.set_item("quality_index", agg.quality_index)?;
    d.set_item("connectivity_index", agg.connectivity_index)?;
    d.set_item("sdu", agg.sdu)?;
    d.set_item("mean_weekly_no_visit", agg.mean_weekly_no_visit)?;
    d.set_item("first_run_no_visit", agg.first_run_no_visit)?;
    Ok(d)
}

/// Load a TOML experiment file, run every cell and write the CSV files.
/// Returns the list of cell names written.
#[pyfunction]
#[pyo3(signature = (path, out = None))]
fn run_experiment(py: Python<'_>, path: PathBuf, out: Option<PathBuf>) -> PyResult<Vec<String>> {
    let mut spec = experiment::load_config(&path).map_err(|e| experiment_err(e.into()))?;
    if let Some(out) = out {
        spec.output_dir = out;
    }
    let cells = py
        .detach(move || experiment::run_experiment(&spec))
        .map_err(experiment_err)?;
    Ok(cells.iter().map(|c| c.cell_name()).collect())
}

/// Seed of run `run_index` derived from `master`.
#[pyfunction]
fn run_seed(master: u64, run_index: u64) -> u64 {
    experiment::run_seed(master, run_index)
}

#[pyfunction]
fn strategies() -> Vec<&'static str> {
    StrategyKind::ALL.iter().map(|s| s.name()).collect()
}

#[pymodule]
#[pyo3(name = "siov")]
fn siov_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySimConfig>()?;
    m.add_class::<PyWorld>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_cell, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(run_seed, m)?)?;
    m.add_function(wrap_pyfunction!(strategies, m)?)?;
    Ok(())
}
