//! Speedup and efficiency of an artificially expensive objective.
//!
//! Each evaluation spins for the given number of microseconds (default 100),
//! so fitness evaluation dominates and the pool has work to share.

use std::time::{Duration, Instant};

use pwoa::metrics::{efficiency, speedup};
use pwoa::parallel::detect_processors;
use pwoa::problem::ProblemKind;
use pwoa::{run_parallel, ExecutionMode, Problem, ProblemSpec, WoaParams};

fn main() -> pwoa::Result<()> {
    let micros = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let pad = Duration::from_micros(micros);
    let spec = ProblemSpec::uniform_box(
        "padded_sphere",
        8,
        -10.0,
        10.0,
        ProblemKind::Unconstrained,
        Some(0.0),
    )?;
    let problem = Problem::from_fn(spec, move |x: &[f64]| {
        let start = Instant::now();
        while start.elapsed() < pad {
            std::hint::spin_loop();
        }
        x.iter().map(|v| v * v).sum()
    })?;
    let params = WoaParams {
        population: 64,
        generations: 20,
        seed: 1,
        ..WoaParams::default()
    };

    let cores = detect_processors();
    println!("{cores} logical processor(s), {micros} us per evaluation");
    let mut t1 = None;
    for np in [1, 2, 4, 8]
        .into_iter()
        .filter(|&n| n == 1 || n <= cores.max(2) * 2)
    {
        let tn = run_parallel(&problem, &params, np, ExecutionMode::Deterministic)?.elapsed;
        let s = speedup(*t1.get_or_insert(tn), tn)?;
        println!(
            "np={np:<2} time={tn:>12?} S={s:>5.2} E={:>5.2}",
            efficiency(s, np)?
        );
    }
    Ok(())
}
