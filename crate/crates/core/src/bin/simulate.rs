use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use siov::experiment::{self, ExperimentSpec, Overrides};
use siov::strategy::AlternativeScan;
use siov::StrategyKind;

/// Run batches of seeded simulations and write per-tick averages as CSV.
#[derive(Parser, Debug)]
#[command(name = "simulate", version)]
struct Args {
    /// TOML config file; every key is optional and flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Strategy name, comma-separated names, or `all`.
    #[arg(long, value_parser = parse_strategy_list)]
    strategy: Option<StrategyList>,
    /// Strong-tie threshold; comma-separated for several cells.
    #[arg(long, value_delimiter = ',')]
    threshold: Option<Vec<u32>>,
    #[arg(long)]
    runs: Option<u32>,
    #[arg(long)]
    weeks: Option<u32>,
    /// Master seed; run seeds are derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum concurrent runs (0 = all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    grid_size: Option<u32>,
    #[arg(long)]
    poi_count: Option<u32>,
    #[arg(long)]
    home_count: Option<u32>,
    #[arg(long)]
    step_sigma: Option<f64>,
    #[arg(long)]
    closure_requires_both_strong: Option<bool>,
    /// When blacklisting looks for an alternative row: on_suspension or every_hour.
    #[arg(long)]
    alternative_scan: Option<AlternativeScan>,
}

#[derive(Clone, Debug)]
struct StrategyList(Vec<StrategyKind>);

fn parse_strategy_list(s: &str) -> Result<StrategyList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        for k in experiment::parse_strategies(part)? {
            if !out.contains(&k) {
                out.push(k);
            }
        }
    }
    Ok(StrategyList(out))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut spec = match &args.config {
        Some(path) => match experiment::load_config(path) {
            Ok(spec) => spec,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => ExperimentSpec::default(),
    };
    Overrides {
        grid_size: args.grid_size,
        poi_count: args.poi_count,
        home_count: args.home_count,
        strategies: args.strategy.map(|l| l.0),
        thresholds: args.threshold,
        weeks: args.weeks,
        runs: args.runs,
        step_sigma: args.step_sigma,
        seed: args.seed,
        closure_requires_both_strong: args.closure_requires_both_strong,
        alternative_scan: args.alternative_scan,
        jobs: args.jobs,
        output_dir: args.out,
    }
    .apply(&mut spec);
    if let Err(e) = spec.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }

    match experiment::run_experiment(&spec) {
        Ok(cells) => {
            for agg in &cells {
                println!(
                    "{}: {} runs x {} ticks -> {}",
                    agg.cell_name(),
                    agg.runs,
                    agg.quality_index.len(),
                    spec.output_dir.join(format!("{}.csv", agg.cell_name())).display()
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
