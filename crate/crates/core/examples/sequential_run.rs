//! Optimize one built-in problem on a single thread.
//!
//! cargo run --example sequential_run -- f10 42

use pwoa::{build_problem, run_sequential, ProblemOptions, WoaParams};

fn main() -> pwoa::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "f10".to_string());
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    let problem = build_problem(&name, &ProblemOptions::default())?;
    let params = WoaParams {
        seed,
        ..WoaParams::default()
    };
    let result = run_sequential(&problem, &params)?;

    println!("problem      {} (dim {})", problem.name(), problem.dim());
    println!("best         {:e}", result.best_fitness);
    if let Some(known) = problem.spec().known_min {
        println!("known min    {known}");
    }
    println!("generations  {}", result.generations_executed);
    println!("elapsed      {:?}", result.elapsed);
    let shown: Vec<String> = result
        .best_position
        .iter()
        .take(5)
        .map(|v| format!("{v:.6}"))
        .collect();
    println!(
        "position     [{}{}]",
        shown.join(", "),
        if problem.dim() > 5 { ", ..." } else { "" }
    );
    Ok(())
}
