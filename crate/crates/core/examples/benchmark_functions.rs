//! Evaluate every unconstrained benchmark at its known minimizer and at a
//! random point of its box.

use pwoa::benchmarks::{eval_function, FunctionId, SCHWEFEL_MINIMIZER};
use pwoa::engine::init_position;
use pwoa::RandomStream;

fn minimizer(id: FunctionId) -> Option<Vec<f64>> {
    let n = id.default_dim();
    Some(match id {
        FunctionId::F5 | FunctionId::F13 => vec![1.0; n],
        FunctionId::F6 => vec![-0.5; n],
        FunctionId::F8 => vec![SCHWEFEL_MINIMIZER; n],
        FunctionId::F12 => vec![-1.0; n],
        FunctionId::F14 => vec![std::f64::consts::PI; 2],
        FunctionId::F16 => vec![0.08984, -0.7126],
        FunctionId::F17 => vec![1.0, 3.0],
        FunctionId::F7 => return None,
        _ => vec![0.0; n],
    })
}

fn main() {
    let mut rng = RandomStream::new(0, 0, 0);
    println!(
        "{:<4} {:<11} {:>4} {:>14} {:>14} {:>14}",
        "id", "class", "dim", "known min", "at minimizer", "random point"
    );
    for id in FunctionId::ALL {
        let spec = pwoa::benchmarks::Benchmark::new(id).spec();
        let at_min = minimizer(id)
            .map(|x| format!("{:.6}", eval_function(id, &x, &mut rng).unwrap()))
            .unwrap_or_else(|| "noisy".into());
        let random = eval_function(id, &init_position(&spec, 3, 0), &mut rng).unwrap();
        println!(
            "{:<4} {:<11} {:>4} {:>14.4} {:>14} {:>14.4e}",
            id.name(),
            format!("{:?}", id.class()).to_lowercase(),
            spec.dim,
            id.known_min(spec.dim),
            at_min,
            random
        );
    }
}
