//! Batch experiments: config loading, seeded multi-run execution,
//! aggregation across runs and CSV output.
//!
//! Config files are TOML with a flat set of keys, all optional:
//!
//! ```toml
//! grid_size = 75
//! poi_count = 15
//! home_count = 500
//! threshold = [5, 2]          # or a single integer
//! strategy = "all"            # or one name, or a list of names; quotes optional
//! weeks = 20
//! runs = 100
//! step_sigma = 0.05
//! seed = 1
//! closure_requires_both_strong = false
//! alternative_scan = "on_suspension"   # or "every_hour"
//! jobs = 4
//! out = "results"
//! ```

use std::fmt::Write as _;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::engine::{self, SimConfig};
use crate::error::{ConfigError, ExperimentError};
use crate::metrics::RunSeries;
use crate::strategy::{AlternativeScan, StrategyKind};

pub const DEFAULT_OUTPUT_DIR: &str = "results";

/// Derives the seed of run `run_index` from the master seed: the
/// `run_index + 1`-th output of a SplitMix64 generator seeded with
/// `master`. Independent of execution order.
pub fn run_seed(master: u64, run_index: u64) -> u64 {
    let mut z = master.wrapping_add(run_index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A full experiment: one or more strategies crossed with one or more
/// strong-tie thresholds, each cell run `base.runs` times.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub base: SimConfig,
    pub strategies: Vec<StrategyKind>,
    pub thresholds: Vec<u32>,
    pub output_dir: PathBuf,
    pub master_seed: u64,
    /// Upper bound on concurrently executing runs; 0 means one per core.
    pub jobs: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        let base = SimConfig::default();
        ExperimentSpec {
            strategies: vec![base.strategy],
            thresholds: vec![base.strong_tie_threshold],
            output_dir: PathBuf::from(DEFAULT_OUTPUT_DIR),
            master_seed: base.seed,
            jobs: 0,
            base,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let range = |key: &str, reason: &str| {
            Err(ConfigError::OutOfRange {
                key: key.to_string(),
                reason: reason.to_string(),
            })
        };
        if self.strategies.is_empty() {
            return range("strategy", "at least one strategy is required");
        }
        if self.thresholds.is_empty() {
            return range("threshold", "at least one threshold is required");
        }
        if self.thresholds.contains(&0) {
            return range("threshold", "thresholds must be at least 1");
        }
        let b = &self.base;
        for (key, v) in [
            ("grid_size", b.grid_size),
            ("poi_count", b.poi_count),
            ("home_count", b.home_count),
            ("runs", b.runs),
        ] {
            if v == 0 {
                return range(key, "must be at least 1");
            }
        }
        if !(b.step_sigma.is_finite() && b.step_sigma > 0.0) {
            return range("step_sigma", "must be a positive number");
        }
        let cells = u64::from(b.grid_size).pow(2);
        if u64::from(b.poi_count) + u64::from(b.home_count) > cells {
            return range(
                "grid_size",
                &format!("{} cells cannot hold {} PoIs and {} homes", cells, b.poi_count, b.home_count),
            );
        }
        Ok(())
    }

    /// The (strategy, threshold) grid, strategies outermost.
    pub fn cells(&self) -> Vec<SimConfig> {
        let mut out = Vec::with_capacity(self.strategies.len() * self.thresholds.len());
        for &strategy in &self.strategies {
            for &threshold in &self.thresholds {
                out.push(SimConfig {
                    strategy,
                    strong_tie_threshold: threshold,
                    seed: self.master_seed,
                    ..self.base.clone()
                });
            }
        }
        out
    }
}

/// Command-line overrides; any `Some` replaces the file value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub grid_size: Option<u32>,
    pub poi_count: Option<u32>,
    pub home_count: Option<u32>,
    pub strategies: Option<Vec<StrategyKind>>,
    pub thresholds: Option<Vec<u32>>,
    pub weeks: Option<u32>,
    pub runs: Option<u32>,
    pub step_sigma: Option<f64>,
    pub seed: Option<u64>,
    pub closure_requires_both_strong: Option<bool>,
    pub alternative_scan: Option<AlternativeScan>,
    pub jobs: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(self, spec: &mut ExperimentSpec) {
        let b = &mut spec.base;
        if let Some(v) = self.grid_size {
            b.grid_size = v;
        }
        if let Some(v) = self.poi_count {
            b.poi_count = v;
        }
        if let Some(v) = self.home_count {
            b.home_count = v;
        }
        if let Some(v) = self.weeks {
            b.weeks = v;
        }
        if let Some(v) = self.runs {
            b.runs = v;
        }
        if let Some(v) = self.step_sigma {
            b.step_sigma = v;
        }
        if let Some(v) = self.closure_requires_both_strong {
            b.closure_requires_both_strong = v;
        }
        if let Some(v) = self.alternative_scan {
            b.alternative_scan = v;
        }
        if let Some(v) = self.seed {
            b.seed = v;
            spec.master_seed = v;
        }
        if let Some(v) = self.strategies {
            spec.strategies = v;
        }
        if let Some(v) = self.thresholds {
            spec.thresholds = v;
        }
        if let Some(v) = self.jobs {
            spec.jobs = v;
        }
        if let Some(v) = self.output_dir {
            spec.output_dir = v;
        }
    }
}

/// Parses a strategy list entry; `all` expands to every strategy.
pub fn parse_strategies(name: &str) -> Result<Vec<StrategyKind>, String> {
    if name.trim().eq_ignore_ascii_case("all") {
        return Ok(StrategyKind::ALL.to_vec());
    }
    name.parse::<StrategyKind>()
        .map(|s| vec![s])
        .map_err(|e| e.to_string())
}

/// Reads and validates an experiment config file.
pub fn load_config(path: &Path) -> Result<ExperimentSpec, ConfigError> {
    if !path.exists() {
        return Err(ConfigError::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentSpec, ConfigError> {
    let text = quote_bare_words(text);
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    let mut spec = ExperimentSpec::default();

    for (key, value) in &table {
        match key.as_str() {
            "grid_size" => spec.base.grid_size = as_u32(key, value)?,
            "poi_count" => spec.base.poi_count = as_u32(key, value)?,
            "home_count" => spec.base.home_count = as_u32(key, value)?,
            "weeks" => spec.base.weeks = as_u32(key, value)?,
            "runs" => spec.base.runs = as_u32(key, value)?,
            "threshold" | "strong_tie_threshold" => {
                spec.thresholds = match value {
                    toml::Value::Array(items) => items.iter().map(|v| as_u32(key, v)).collect::<Result<_, _>>()?,
                    v => vec![as_u32(key, v)?],
                }
            }
            "strategy" => {
                let names: Vec<&str> = match value {
                    toml::Value::String(s) => vec![s.as_str()],
                    toml::Value::Array(items) => items
                        .iter()
                        .map(|v| v.as_str().ok_or_else(|| type_error(key, "a list of strategy names")))
                        .collect::<Result<_, _>>()?,
                    _ => return Err(type_error(key, "a strategy name or list of names")),
                };
                let mut strategies = Vec::new();
                for name in names {
                    for s in parse_strategies(name).map_err(|reason| ConfigError::OutOfRange {
                        key: key.clone(),
                        reason,
                    })? {
                        if !strategies.contains(&s) {
                            strategies.push(s);
                        }
                    }
                }
                spec.strategies = strategies;
            }
            "step_sigma" => {
                spec.base.step_sigma = match value {
                    toml::Value::Float(f) => *f,
                    toml::Value::Integer(i) => *i as f64,
                    _ => return Err(type_error(key, "a number")),
                }
            }
            "seed" => {
                let seed = value
                    .as_integer()
                    .filter(|&i| i >= 0)
                    .ok_or_else(|| type_error(key, "a non-negative integer"))? as u64;
                spec.base.seed = seed;
                spec.master_seed = seed;
            }
            "closure_requires_both_strong" => {
                spec.base.closure_requires_both_strong =
                    value.as_bool().ok_or_else(|| type_error(key, "true or false"))?
            }
            "alternative_scan" => {
                let name = value.as_str().ok_or_else(|| type_error(key, "on_suspension or every_hour"))?;
                spec.base.alternative_scan = name.parse().map_err(|reason| ConfigError::OutOfRange {
                    key: key.clone(),
                    reason,
                })?;
            }
            "jobs" => spec.jobs = as_u32(key, value)? as usize,
            "out" | "output_dir" => {
                spec.output_dir = PathBuf::from(value.as_str().ok_or_else(|| type_error(key, "a path string"))?)
            }
            _ => return Err(ConfigError::UnknownKey(key.clone())),
        }
    }
    spec.validate()?;
    Ok(spec)
}

/// Quotes bare identifiers on the right of `key = value` lines so that
/// `strategy = all` reads the same as `strategy = "all"`. Booleans, numbers
/// and anything already valid TOML are left alone.
fn quote_bare_words(text: &str) -> String {
    let is_word = |v: &str| {
        v.starts_with(|c: char| c.is_ascii_alphabetic())
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            && !matches!(v, "true" | "false" | "inf" | "nan")
    };
    let mut out = String::with_capacity(text.len() + 8);
    for line in text.lines() {
        let (body, comment) = match line.find('#') {
            Some(i) => line.split_at(i),
            None => (line, ""),
        };
        match body.split_once('=') {
            Some((key, value)) if is_word(value.trim()) => {
                let _ = write!(out, "{key}= \"{}\" {comment}", value.trim());
            }
            _ => out.push_str(line),
        }
        out.push('\n');
    }
    out
}

fn type_error(key: &str, expected: &str) -> ConfigError {
    ConfigError::OutOfRange {
        key: key.to_string(),
        reason: format!("expected {expected}"),
    }
}

fn as_u32(key: &str, value: &toml::Value) -> Result<u32, ConfigError> {
    value
        .as_integer()
        .and_then(|i| u32::try_from(i).ok())
        .ok_or_else(|| type_error(key, "a non-negative integer"))
}

/// Per-tick means across the runs of one experiment cell.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateSeries {
    pub strategy: StrategyKind,
    pub threshold: u32,
    pub runs: usize,
    pub quality_index: Vec<f64>,
    pub connectivity_index: Vec<f64>,
    pub sdu: Vec<f64>,
    pub mean_weekly_no_visit: Vec<f64>,
    /// Weekly no-visit counts of run 0 alone.
    pub first_run_no_visit: Vec<usize>,
}

impl AggregateSeries {
    /// Averages `series` in the order given. All series must have equal
    /// lengths.
    pub fn from_runs(strategy: StrategyKind, threshold: u32, series: &[RunSeries]) -> Self {
        let n = series.len().max(1) as f64;
        let ticks = series.first().map_or(0, |s| s.samples.len());
        let weeks = series.first().map_or(0, |s| s.weekly_no_visit.len());
        let mut agg = AggregateSeries {
            strategy,
            threshold,
            runs: series.len(),
            quality_index: vec![0.0; ticks],
            connectivity_index: vec![0.0; ticks],
            sdu: vec![0.0; ticks],
            mean_weekly_no_visit: vec![0.0; weeks],
            first_run_no_visit: series.first().map(|s| s.weekly_no_visit.clone()).unwrap_or_default(),
        };
        for run in series {
            assert_eq!(run.samples.len(), ticks, "runs of one cell must have equal length");
            for (t, s) in run.samples.iter().enumerate() {
                agg.quality_index[t] += s.quality_index;
                agg.connectivity_index[t] += s.connectivity_index;
                agg.sdu[t] += s.sdu;
            }
            for (w, &c) in run.weekly_no_visit.iter().enumerate() {
                agg.mean_weekly_no_visit[w] += c as f64;
            }
        }
        for v in agg
            .quality_index
            .iter_mut()
            .chain(agg.connectivity_index.iter_mut())
            .chain(agg.sdu.iter_mut())
            .chain(agg.mean_weekly_no_visit.iter_mut())
        {
            *v /= n;
        }
        agg
    }

    /// `<strategy>_th<threshold>`
    pub fn cell_name(&self) -> String {
        cell_name(self.strategy, self.threshold)
    }

    pub fn series_csv(&self) -> String {
        let mut out = String::from("tick,quality_index,connectivity_index,sdu\n");
        for t in 0..self.quality_index.len() {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6},{:.6}",
                t, self.quality_index[t], self.connectivity_index[t], self.sdu[t]
            );
        }
        out
    }

    /// Weekly no-visit counts of the first run; weeks are numbered from 1.
    pub fn no_visit_csv(&self) -> String {
        let mut out = String::from("week,no_visit_count\n");
        for (w, c) in self.first_run_no_visit.iter().enumerate() {
            let _ = writeln!(out, "{},{}", w + 1, c);
        }
        out
    }
}

pub fn cell_name(strategy: StrategyKind, threshold: u32) -> String {
    format!("{}_th{}", strategy.name(), threshold)
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}

fn build_pool(jobs: usize) -> Result<rayon::ThreadPool, ExperimentError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))
}

/// Executes every run of one cell and returns the series ordered by run
/// index.
pub fn run_cell_series(config: &SimConfig, master_seed: u64, jobs: usize) -> Result<Vec<RunSeries>, ExperimentError> {
    config.validate()?;
    let name = cell_name(config.strategy, config.strong_tie_threshold);
    let pool = build_pool(jobs)?;
    let results: Vec<Result<RunSeries, ExperimentError>> = pool.install(|| {
        (0..config.runs as usize)
            .into_par_iter()
            .map(|i| {
                let seed = run_seed(master_seed, i as u64);
                match panic::catch_unwind(AssertUnwindSafe(|| engine::run(config, seed))) {
                    Ok(r) => r.map_err(ExperimentError::from),
                    Err(payload) => Err(ExperimentError::RunPanicked {
                        cell: name.clone(),
                        run_index: i,
                        seed,
                        message: panic_message(payload),
                    }),
                }
            })
            .collect()
    });
    results.into_iter().collect()
}

pub fn run_cell(config: &SimConfig, master_seed: u64, jobs: usize) -> Result<AggregateSeries, ExperimentError> {
    let series = run_cell_series(config, master_seed, jobs)?;
    Ok(AggregateSeries::from_runs(config.strategy, config.strong_tie_threshold, &series))
}

fn write_file(path: PathBuf, contents: &str) -> Result<(), ExperimentError> {
    fs::write(&path, contents).map_err(|source| ExperimentError::Output { path, source })
}

/// Runs every cell of `spec`, writing `<cell>.csv` and `<cell>_novisit.csv`
/// into the output directory.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<AggregateSeries>, ExperimentError> {
    spec.validate()?;
    fs::create_dir_all(&spec.output_dir).map_err(|source| ExperimentError::Output {
        path: spec.output_dir.clone(),
        source,
    })?;
    let mut out = Vec::new();
    for cell in spec.cells() {
        let agg = run_cell(&cell, spec.master_seed, spec.jobs)?;
        let name = agg.cell_name();
        write_file(spec.output_dir.join(format!("{name}.csv")), &agg.series_csv())?;
        write_file(spec.output_dir.join(format!("{name}_novisit.csv")), &agg.no_visit_csv())?;
        out.push(agg);
    }
    Ok(out)
}
