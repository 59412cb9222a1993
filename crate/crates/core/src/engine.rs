//! Sequential whale optimization.
//!
//! One iteration reads an immutable snapshot of the swarm (positions and the
//! incumbent best), moves every agent, re-evaluates every agent and then
//! adopts a new incumbent only on strict improvement. The parallel executor
//! runs exactly the same per-agent functions, which is why the deterministic
//! mode reproduces sequential results bit for bit.
//!
//! Random draws are keyed per agent:
//!
//! | purpose                    | stream id | counter                        |
//! |----------------------------|-----------|--------------------------------|
//! | initial position           | agent     | `0..`                          |
//! | update in iteration `t`    | agent     | `(t + 1) << 32 ..`             |
//! | evaluation after phase `k` | agent     | `(k << 32) | 1 << 31 ..`       |
//!
//! Phase `0` is the initial evaluation; phase `t + 1` follows iteration `t`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use crate::parallel::reduce_best;
use crate::problem::{Problem, ProblemSpec};
use crate::rng::{RandomStream, UniformSource};
use crate::{Error, Result};

/// How `A` and `C` are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientShape {
    /// One `r` and one `r'` per agent per iteration, applied to every coordinate.
    #[default]
    PerAgent,
    /// Independent `r`, `r'` for every coordinate.
    PerDimension,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    #[default]
    Clamp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WoaParams {
    pub population: usize,
    pub generations: usize,
    /// Spiral shape constant.
    pub b: f64,
    pub runs: usize,
    pub boundary_policy: BoundaryPolicy,
    pub seed: u64,
    pub coefficient_shape: CoefficientShape,
    /// Keep the outer absolute value on the exploration update.
    pub faithful_eq8: bool,
}

impl Default for WoaParams {
    fn default() -> Self {
        Self {
            population: 30,
            generations: 500,
            b: 1.0,
            runs: 30,
            boundary_policy: BoundaryPolicy::Clamp,
            seed: 0,
            coefficient_shape: CoefficientShape::PerAgent,
            faithful_eq8: false,
        }
    }
}

impl WoaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::param("population", "must be >= 2"));
        }
        if self.generations < 1 {
            return Err(Error::param("generations", "must be >= 1"));
        }
        if self.runs < 1 {
            return Err(Error::param("runs", "must be >= 1"));
        }
        if !self.b.is_finite() {
            return Err(Error::param("b", "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub position: Vec<f64>,
    pub fitness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub agents: Vec<Agent>,
    pub best_index: usize,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
}

impl Swarm {
    /// Uniform initial positions, fitness unset, best at `+inf`.
    pub fn initialize(spec: &ProblemSpec, seed: u64, population: usize) -> Swarm {
        let agents = (0..population)
            .map(|i| Agent {
                position: init_position(spec, seed, i),
                fitness: None,
            })
            .collect();
        Swarm {
            agents,
            best_index: 0,
            best_position: spec.lower.clone(),
            best_fitness: f64::INFINITY,
        }
    }

    pub fn positions(&self) -> Vec<Vec<f64>> {
        self.agents.iter().map(|a| a.position.clone()).collect()
    }

    pub fn fitnesses(&self) -> Vec<f64> {
        self.agents
            .iter()
            .map(|a| a.fitness.unwrap_or(f64::INFINITY))
            .collect()
    }

    /// Take agent `index` as the incumbent if it strictly improves on it.
    pub fn offer_best(&mut self, index: usize, fitness: f64) -> bool {
        if fitness < self.best_fitness {
            self.best_index = index;
            self.best_fitness = fitness;
            self.best_position.clone_from(&self.agents[index].position);
            true
        } else {
            false
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_fitness: f64,
    pub best_position: Vec<f64>,
    pub elapsed: Duration,
    pub generations_executed: usize,
    pub seed: u64,
    pub workers: usize,
}

/// Control scalar `a`, decreasing linearly from 2 towards 0.
pub fn coeff_a(t: usize, total: usize) -> Result<f64> {
    if t >= total {
        return Err(Error::param(
            "t",
            format!("iteration {t} is outside 0..{total}"),
        ));
    }
    Ok(2.0 * (1.0 - t as f64 / total as f64))
}

/// Per-agent, per-iteration coefficients.
///
/// `big_a` and `c` hold one entry ([`CoefficientShape::PerAgent`]) or one per
/// coordinate; a single entry is broadcast.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub a: f64,
    pub big_a: Vec<f64>,
    pub c: Vec<f64>,
    pub l: f64,
    pub p: f64,
    pub b: f64,
}

impl Coefficients {
    /// Build from explicit uniform draws: `A = 2 a r - a`, `C = 2 r'`, `l = 2 u - 1`.
    pub fn from_draws(a: f64, b: f64, r: &[f64], r_prime: &[f64], l_draw: f64, p: f64) -> Self {
        Self {
            a,
            big_a: r.iter().map(|r| 2.0 * a * r - a).collect(),
            c: r_prime.iter().map(|r| 2.0 * r).collect(),
            l: 2.0 * l_draw - 1.0,
            p,
            b,
        }
    }

    /// `|A|` used by the branch test: the largest component magnitude.
    pub fn a_magnitude(&self) -> f64 {
        self.big_a.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Draw `r`, `r'`, `l` and `p` in that order.
pub fn draw_coefficients<R: UniformSource + ?Sized>(
    a: f64,
    b: f64,
    shape: CoefficientShape,
    dim: usize,
    rng: &mut R,
) -> Coefficients {
    let n = match shape {
        CoefficientShape::PerAgent => 1,
        CoefficientShape::PerDimension => dim,
    };
    let r: Vec<f64> = (0..n).map(|_| rng.next_uniform()).collect();
    let r_prime: Vec<f64> = (0..n).map(|_| rng.next_uniform()).collect();
    let l_draw = rng.next_uniform();
    let p = rng.next_uniform();
    Coefficients::from_draws(a, b, &r, &r_prime, l_draw, p)
}

#[inline]
fn bcast(v: &[f64], j: usize) -> f64 {
    if v.len() == 1 {
        v[0]
    } else {
        v[j]
    }
}

/// Move towards `target`: `target - A * |C * target - x|`.
fn shrink_towards(x: &[f64], target: &[f64], big_a: &[f64], c: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(target)
        .enumerate()
        .map(|(j, (&xj, &tj))| {
            let d = (bcast(c, j) * tj - xj).abs();
            tj - bcast(big_a, j) * d
        })
        .collect()
}

/// Encircling update around the incumbent best.
pub fn encircle_step(x: &[f64], x_best: &[f64], big_a: &[f64], c: &[f64]) -> Vec<f64> {
    shrink_towards(x, x_best, big_a, c)
}

/// Logarithmic spiral around the incumbent best.
pub fn spiral_step(x: &[f64], x_best: &[f64], l: f64, b: f64) -> Vec<f64> {
    // cos(2 pi l) written as sin(2 pi (1/4 - l)) so a quarter turn gives exactly 0
    let factor = (b * l).exp() * (2.0 * PI * (0.25 - l)).sin();
    x.iter()
        .zip(x_best)
        .map(|(&xj, &bj)| (bj - xj).abs() * factor + bj)
        .collect()
}

/// Exploration update around a randomly chosen agent.
pub fn explore_step(x: &[f64], x_rand: &[f64], big_a: &[f64], c: &[f64]) -> Vec<f64> {
    shrink_towards(x, x_rand, big_a, c)
}

/// Exploration update with the outer absolute value kept.
pub fn explore_step_literal(x: &[f64], x_rand: &[f64], big_a: &[f64], c: &[f64]) -> Vec<f64> {
    let mut out = shrink_towards(x, x_rand, big_a, c);
    out.iter_mut().for_each(|v| *v = v.abs());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Encircle,
    Explore,
    Spiral,
}

pub fn select_branch(p: f64, a_magnitude: f64) -> Branch {
    if p < 0.5 {
        if a_magnitude < 1.0 {
            Branch::Encircle
        } else {
            Branch::Explore
        }
    } else {
        Branch::Spiral
    }
}

/// Read-only view of the swarm at the start of an iteration.
#[derive(Debug, Clone, Copy)]
pub struct UpdateContext<'a> {
    pub spec: &'a ProblemSpec,
    pub best: &'a [f64],
    pub snapshot: &'a [Vec<f64>],
    pub faithful_eq8: bool,
}

/// Move one agent. `x_rand` is drawn from `rng` only on the exploration branch.
pub fn agent_update<R: UniformSource + ?Sized>(
    x: &[f64],
    ctx: &UpdateContext<'_>,
    coeffs: &Coefficients,
    rng: &mut R,
) -> (Vec<f64>, Branch) {
    let branch = select_branch(coeffs.p, coeffs.a_magnitude());
    let mut next = match branch {
        Branch::Encircle => encircle_step(x, ctx.best, &coeffs.big_a, &coeffs.c),
        Branch::Explore => {
            let pick = rng.next_index(ctx.snapshot.len());
            let x_rand = &ctx.snapshot[pick];
            if ctx.faithful_eq8 {
                explore_step_literal(x, x_rand, &coeffs.big_a, &coeffs.c)
            } else {
                explore_step(x, x_rand, &coeffs.big_a, &coeffs.c)
            }
        }
        Branch::Spiral => spiral_step(x, ctx.best, coeffs.l, coeffs.b),
    };
    ctx.spec.clamp(&mut next);
    (next, branch)
}

const PHASE_SHIFT: u32 = 32;
const EVAL_OFFSET: u64 = 1 << 31;

pub fn init_stream(seed: u64, agent: usize) -> RandomStream {
    RandomStream::new(seed, agent as u64, 0)
}

pub fn update_stream(seed: u64, agent: usize, iteration: usize) -> RandomStream {
    RandomStream::new(seed, agent as u64, ((iteration as u64) + 1) << PHASE_SHIFT)
}

pub fn eval_stream(seed: u64, agent: usize, phase: usize) -> RandomStream {
    RandomStream::new(
        seed,
        agent as u64,
        ((phase as u64) << PHASE_SHIFT) | EVAL_OFFSET,
    )
}

pub fn init_position(spec: &ProblemSpec, seed: u64, agent: usize) -> Vec<f64> {
    let mut rng = init_stream(seed, agent);
    let mut x: Vec<f64> = spec
        .lower
        .iter()
        .zip(&spec.upper)
        .map(|(lo, hi)| lo + rng.next_uniform() * (hi - lo))
        .collect();
    // lo + u (hi - lo) can round up to hi + ulp
    spec.clamp(&mut x);
    x
}

/// Evaluate one agent, rejecting non-finite fitness.
pub(crate) fn evaluate_agent<R: UniformSource>(
    problem: &Problem,
    agent: usize,
    phase: usize,
    position: &[f64],
    rng: &mut R,
) -> Result<f64> {
    let value = problem.evaluate(position, rng);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteFitness {
            agent,
            iteration: phase,
            value,
        })
    }
}

/// Everything an executor needs to move the swarm through one iteration.
pub(crate) struct IterationContext<'a> {
    pub params: &'a WoaParams,
    pub update: UpdateContext<'a>,
    pub a: f64,
    pub iteration: usize,
}

/// Move one agent with its own deterministic stream.
pub(crate) fn update_agent_keyed(ctx: &IterationContext<'_>, agent: usize) -> Vec<f64> {
    let mut rng = update_stream(ctx.params.seed, agent, ctx.iteration);
    update_agent_with(ctx, agent, &mut rng)
}

pub(crate) fn update_agent_with<R: UniformSource + ?Sized>(
    ctx: &IterationContext<'_>,
    agent: usize,
    rng: &mut R,
) -> Vec<f64> {
    let dim = ctx.update.spec.dim;
    let coeffs = draw_coefficients(ctx.a, ctx.params.b, ctx.params.coefficient_shape, dim, rng);
    agent_update(&ctx.update.snapshot[agent], &ctx.update, &coeffs, rng).0
}

/// Strategy for the two per-agent phases of an iteration.
pub(crate) trait Executor {
    fn workers(&self) -> usize;
    fn evaluate(
        &mut self,
        problem: &Problem,
        swarm: &mut Swarm,
        phase: usize,
        seed: u64,
    ) -> Result<()>;
    fn update(&mut self, ctx: &IterationContext<'_>, swarm: &mut Swarm) -> Result<()>;
}

struct Sequential;

impl Executor for Sequential {
    fn workers(&self) -> usize {
        1
    }

    fn evaluate(
        &mut self,
        problem: &Problem,
        swarm: &mut Swarm,
        phase: usize,
        seed: u64,
    ) -> Result<()> {
        for (i, agent) in swarm.agents.iter_mut().enumerate() {
            let mut rng = eval_stream(seed, i, phase);
            agent.fitness = Some(evaluate_agent(
                problem,
                i,
                phase,
                &agent.position,
                &mut rng,
            )?);
        }
        Ok(())
    }

    fn update(&mut self, ctx: &IterationContext<'_>, swarm: &mut Swarm) -> Result<()> {
        for (i, agent) in swarm.agents.iter_mut().enumerate() {
            agent.position = update_agent_keyed(ctx, i);
            agent.fitness = None;
        }
        Ok(())
    }
}

/// Called after initialization (`0`) and after each iteration (`t + 1`).
pub type Observer<'a> = dyn FnMut(usize, &Swarm) + 'a;

pub(crate) fn drive<E: Executor>(
    problem: &Problem,
    params: &WoaParams,
    exec: &mut E,
    observer: &mut Observer<'_>,
) -> Result<RunResult> {
    params.validate()?;
    let spec = problem.spec();
    let started = Instant::now();

    let mut swarm = Swarm::initialize(spec, params.seed, params.population);
    exec.evaluate(problem, &mut swarm, 0, params.seed)?;
    let (idx, fit) = reduce_best(&swarm);
    swarm.offer_best(idx, fit);
    observer(0, &swarm);

    for t in 0..params.generations {
        let a = coeff_a(t, params.generations)?;
        let snapshot = swarm.positions();
        let best = swarm.best_position.clone();
        let ctx = IterationContext {
            params,
            update: UpdateContext {
                spec,
                best: &best,
                snapshot: &snapshot,
                faithful_eq8: params.faithful_eq8,
            },
            a,
            iteration: t,
        };
        exec.update(&ctx, &mut swarm)?;
        exec.evaluate(problem, &mut swarm, t + 1, params.seed)?;
        let (idx, fit) = reduce_best(&swarm);
        swarm.offer_best(idx, fit);
        observer(t + 1, &swarm);
    }

    let elapsed = started.elapsed().max(Duration::from_nanos(1));
    Ok(RunResult {
        best_fitness: swarm.best_fitness,
        best_position: swarm.best_position,
        elapsed,
        generations_executed: params.generations,
        seed: params.seed,
        workers: exec.workers(),
    })
}

/// Single-threaded run seeded by `params.seed`.
pub fn run_sequential(problem: &Problem, params: &WoaParams) -> Result<RunResult> {
    drive(problem, params, &mut Sequential, &mut |_, _| {})
}

/// [`run_sequential`] with a per-iteration observer.
pub fn run_sequential_observed(
    problem: &Problem,
    params: &WoaParams,
    observer: &mut Observer<'_>,
) -> Result<RunResult> {
    drive(problem, params, &mut Sequential, observer)
}
