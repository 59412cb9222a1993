//! Run the same seed over several worker counts. In deterministic mode the
//! best fitness is identical for every count; in throughput mode it is not.

use pwoa::parallel::detect_processors;
use pwoa::{build_problem, run_parallel, ExecutionMode, ProblemOptions, WoaParams};

fn main() -> pwoa::Result<()> {
    let problem = build_problem("f5", &ProblemOptions::default())?;
    let params = WoaParams {
        seed: 2024,
        ..WoaParams::default()
    };
    println!("{} logical processor(s) available", detect_processors());

    for mode in [ExecutionMode::Deterministic, ExecutionMode::Throughput] {
        println!("{} mode", mode.as_str());
        for np in [1, 2, 4, 8] {
            let r = run_parallel(&problem, &params, np, mode)?;
            println!(
                "  np={np:<2} best={:<24e} time={:?}",
                r.best_fitness, r.elapsed
            );
        }
    }
    Ok(())
}
