//! Solve the five engineering design problems and report constraint status.
//! Pass `death` to discard infeasible agents instead of penalizing them.

use pwoa::constrained::{PenaltyConfig, PenaltyMode};
use pwoa::problem::ProblemId;
use pwoa::{build_problem, run_parallel, ExecutionMode, ProblemOptions, WoaParams};

fn main() -> pwoa::Result<()> {
    let death = std::env::args().any(|a| a == "death");
    let options = ProblemOptions {
        penalty: PenaltyConfig {
            mode: if death {
                PenaltyMode::Death
            } else {
                PenaltyMode::Static
            },
            ..PenaltyConfig::default()
        },
        ..ProblemOptions::default()
    };
    for id in ProblemId::all()
        .into_iter()
        .filter(|p| matches!(p, ProblemId::Constrained(_)))
    {
        let problem = build_problem(id.name(), &options)?;
        let params = WoaParams {
            seed: 5,
            ..WoaParams::default()
        };
        let r = run_parallel(&problem, &params, 2, ExecutionMode::Deterministic)?;
        let assessed = problem
            .constrained()
            .expect("constrained")
            .assess(&r.best_position)?;
        println!(
            "{:<7} objective {:>14.6}  max violation {:.2e}  feasible {}",
            id.name(),
            assessed.objective,
            assessed.max_violation(),
            assessed.is_feasible(1e-6)
        );
        let x: Vec<String> = r.best_position.iter().map(|v| format!("{v:.4}")).collect();
        println!("        x = [{}]", x.join(", "));
    }
    Ok(())
}
