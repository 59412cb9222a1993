//! Counter-based random streams: every draw is a pure function of
//! `(seed, stream, counter)`, so any worker can reproduce any agent's draws.

use pwoa::engine::{update_stream, Observer};
use pwoa::parallel::run_parallel_observed;
use pwoa::rng::UniformSource;
use pwoa::{build_problem, ExecutionMode, ProblemOptions, RandomStream, WoaParams};

fn main() -> pwoa::Result<()> {
    let s = RandomStream::new(7, 3, 0);
    let (first, next) = s.uniform();
    let (second, _) = next.uniform();
    println!("stream 3: {first:.6} {second:.6}");
    println!("replayed: {:.6}", s.at(1).uniform().0);

    let mut agent = update_stream(7, 3, 10);
    let draws: Vec<String> = (0..4)
        .map(|_| format!("{:.4}", agent.next_uniform()))
        .collect();
    println!("agent 3, iteration 10: r, r', l, p = {}", draws.join(", "));

    let problem = build_problem(
        "f9",
        &ProblemOptions {
            dim: Some(4),
            ..ProblemOptions::default()
        },
    )?;
    let params = WoaParams {
        population: 8,
        generations: 50,
        seed: 7,
        ..WoaParams::default()
    };
    let mut traces = Vec::new();
    for np in [1, 3, 8] {
        let mut history = Vec::new();
        let observer: &mut Observer<'_> =
            &mut |_, swarm| history.push(swarm.best_fitness.to_bits());
        run_parallel_observed(
            &problem,
            &params,
            np,
            ExecutionMode::Deterministic,
            observer,
        )?;
        traces.push(history);
    }
    println!(
        "best-fitness trace identical for np 1, 3, 8: {}",
        traces.windows(2).all(|w| w[0] == w[1])
    );
    Ok(())
}
