//! A small sweep through the experiment runner, written to CSV and printed as
//! tables. The output directory defaults to `target/pwoa-example`.

use std::path::PathBuf;

use pwoa::experiment::{
    emit_csv, print_scaling_table, print_table, run_experiment, ExperimentConfig,
};

fn main() -> pwoa::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.apply_file(
        "problems = f1, f10, f16, optim1\n\
         workers = 1, 2, 4\n\
         runs = 3\n\
         generations = 100\n",
    )?;
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "target/pwoa-example".into());

    let outcome = run_experiment(&cfg)?;
    let (runs, summary) = emit_csv(&outcome.records, &outcome.stats, &out_dir)?;
    print!("{}", print_table(&outcome.stats));
    println!();
    print!("{}", print_scaling_table(&outcome.stats));
    println!("\n{} runs -> {}", outcome.records.len(), runs.display());
    println!("summary -> {}", summary.display());
    for f in &outcome.failures {
        eprintln!("failed: {f}");
    }
    Ok(())
}
