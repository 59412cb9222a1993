//! Experiment runner: problem × worker-count × run sweeps, CSV output and
//! summary tables.
//!
//! ```
//! use pwoa::experiment::{run_experiment, ExperimentConfig};
//!
//! let mut cfg = ExperimentConfig::default();
//! cfg.set("problems", "f1").unwrap();
//! cfg.set("workers", "1,2").unwrap();
//! cfg.set("runs", "2").unwrap();
//! cfg.set("generations", "20").unwrap();
//! let outcome = run_experiment(&cfg).unwrap();
//! assert_eq!(outcome.records.len(), 4);
//! assert!(outcome.failures.is_empty());
//! ```

pub mod cli;
pub mod config;
pub mod output;

use crate::metrics::{aggregate, SummaryStats, TimingRecord};
use crate::parallel::run_parallel;
use crate::problem::{build_problem, Problem};
use crate::{Error, Result};

pub use config::{parse_config_file, ExperimentConfig, OUT_DIR_ENV};
pub use output::{emit_csv, print_scaling_table, print_table, read_runs_csv};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Seed of run `run_index` of `problem` under base seed `seed`.
///
/// FNV-1a over `seed` (8 bytes LE), the problem name bytes, a `0xff`
/// separator and `run_index` (8 bytes LE), passed through the splitmix64
/// finalizer. The worker count is deliberately not an input.
pub fn derive_seed(seed: u64, problem: &str, run_index: usize) -> u64 {
    let mut h = FNV_OFFSET;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    };
    feed(&seed.to_le_bytes());
    feed(problem.as_bytes());
    feed(&[0xff]);
    feed(&(run_index as u64).to_le_bytes());
    crate::rng::mix64(h)
}

/// Everything a sweep produced.
#[derive(Debug, Default)]
pub struct ExperimentOutcome {
    pub records: Vec<TimingRecord>,
    pub stats: Vec<SummaryStats>,
    /// Runs that failed, plus problems that could not be summarised.
    pub failures: Vec<Error>,
}

impl ExperimentOutcome {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run the whole sweep without progress reporting.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_experiment_with(cfg, |_| {})
}

/// Run the whole sweep, calling `progress` after every completed run.
///
/// Cells run one at a time. Failed runs are collected in
/// [`ExperimentOutcome::failures`] and the sweep carries on. Speedup is
/// measured against the smallest worker count in the sweep.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    progress: impl FnMut(&TimingRecord),
) -> Result<ExperimentOutcome> {
    let options = cfg.problem_options();
    let problems: Vec<Problem> = cfg
        .problems
        .iter()
        .map(|name| build_problem(name, &options))
        .collect::<Result<_>>()?;
    run_sweep(cfg, &problems, progress)
}

/// Sweep over already-built `problems`, ignoring `cfg.problems`.
pub fn run_sweep(
    cfg: &ExperimentConfig,
    problems: &[Problem],
    mut progress: impl FnMut(&TimingRecord),
) -> Result<ExperimentOutcome> {
    if cfg.workers_sweep.is_empty() {
        return Err(Error::param("workers", "worker sweep must not be empty"));
    }
    let mut outcome = ExperimentOutcome::default();
    for problem in problems {
        for &workers in &cfg.workers_sweep {
            for run in 0..cfg.runs {
                let seed = derive_seed(cfg.seed, problem.name(), run);
                let params = cfg.woa_params(seed);
                match run_parallel(problem, &params, workers, cfg.mode) {
                    Ok(result) => {
                        let record = TimingRecord {
                            problem: problem.name().to_string(),
                            dim: problem.dim(),
                            workers,
                            run_index: run,
                            seed,
                            best_fitness: result.best_fitness,
                            elapsed: result.elapsed,
                        };
                        progress(&record);
                        outcome.records.push(record);
                    }
                    Err(e) => outcome.failures.push(Error::Run {
                        problem: problem.name().to_string(),
                        workers,
                        run,
                        source: Box::new(e),
                    }),
                }
            }
        }
    }

    let baseline = *cfg.workers_sweep.iter().min().expect("non-empty sweep");
    for problem in problems {
        let records: Vec<TimingRecord> = outcome
            .records
            .iter()
            .filter(|r| r.problem == problem.name())
            .cloned()
            .collect();
        if records.is_empty() {
            continue;
        }
        match aggregate(&records, baseline) {
            Ok(stats) => outcome.stats.extend(stats),
            Err(e) => outcome.failures.push(e),
        }
    }
    Ok(outcome)
}
