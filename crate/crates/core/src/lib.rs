//! Parallel whale optimization.
//!
//! The crate is organised bottom-up:
//!
//! - [`rng`] counter-based random streams, so a run's draws depend only on
//!   `(seed, agent, iteration)` and never on thread scheduling.
//! - [`problem`] the problem model and the registry of the 25 built-in problems.
//! - [`benchmarks`] the twenty unconstrained test functions `f1`..`f20`.
//! - [`constrained`] the five engineering design problems and penalty handling.
//! - [`engine`] the sequential optimizer: coefficient sampling, the three
//!   update rules and the main loop.
//! - [`parallel`] fork-join execution of the same loop over a worker pool.
//! - [`metrics`] timing, speedup, efficiency and cross-run aggregation.
//! - [`experiment`] the experiment runner, CSV output and the CLI front end.
//!
//! ```
//! use pwoa::{build_problem, run_sequential, ProblemOptions, WoaParams};
//!
//! let problem = build_problem("f1", &ProblemOptions::default()).unwrap();
//! let params = WoaParams { generations: 200, seed: 7, ..WoaParams::default() };
//! let result = run_sequential(&problem, &params).unwrap();
//! assert!(result.best_fitness < 1e-10);
//! ```

pub mod benchmarks;
pub mod constrained;
pub mod engine;
mod error;
pub mod experiment;
pub mod metrics;
pub mod parallel;
pub mod problem;
pub mod rng;

pub use engine::{run_sequential, Coefficients, RunResult, Swarm, WoaParams};
pub use error::{Error, Result};
pub use parallel::{run_parallel, ExecutionMode, WorkerPlan};
pub use problem::{build_problem, make_problem, Problem, ProblemOptions, ProblemSpec};
pub use rng::RandomStream;
