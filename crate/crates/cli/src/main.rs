//! `specest <experiment> [--config FILE] [--key value ...]`
//!
//! Writes one CSV per invocation and prints a one-line JSON summary.
//! Exit codes: 0 success, 2 invalid configuration, 3 runtime failure.

mod config;
mod experiments;
mod table;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use config::{Config, Experiment, Settings};
use table::Cell;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Runtime(String),
}

#[derive(Parser, Debug)]
#[command(name = "specest", version, about = "Spectrum-estimation and distinguishing-game experiments")]
struct Cli {
    #[arg(value_enum)]
    experiment: Experiment,
    #[command(flatten)]
    settings: Settings,
}

fn run(cli: Cli) -> Result<serde_json::Value, Failure> {
    let cfg = Config::resolve(cli.experiment, cli.settings)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    let started = std::time::Instant::now();
    let rows = pool.install(|| experiments::run(&cfg))?;
    table::write_atomic(&cfg.out, cfg.experiment, &rows)?;

    let col = experiments::headline(cfg.experiment);
    let idx = table::header(cfg.experiment).iter().position(|h| *h == col).expect("headline names a column");
    let values: Vec<f64> = rows
        .iter()
        .map(|r| match r[idx] {
            Cell::Int(v) => v as f64,
            Cell::Real(v) => v,
        })
        .collect();
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    Ok(json!({
        "experiment": cfg.experiment.name(),
        "out": cfg.out.display().to_string(),
        "rows": rows.len(),
        "seed": cfg.seed,
        "threads": pool.current_num_threads(),
        format!("mean_{col}"): mean,
        "seconds": started.elapsed().as_secs_f64(),
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(Failure::Config(msg)) => {
            eprintln!("invalid configuration: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("run failed: {msg}");
            ExitCode::from(3)
        }
    }
}
