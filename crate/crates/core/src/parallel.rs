//! Fork-join execution over a fixed worker pool.
//!
//! Agents are split into contiguous, near-equal blocks, one per worker. Each
//! phase (update, then evaluation) forks one job per block and joins before
//! the best-of-swarm reduction runs on the calling thread. Workers read the
//! iteration-start snapshot and write only to their own block.

use std::ops::Range;

use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::engine::{
    self, drive, eval_stream, evaluate_agent, update_agent_keyed, update_agent_with, Agent,
    Executor, IterationContext, Observer, RunResult, Swarm, WoaParams,
};
use crate::problem::Problem;
use crate::rng::SharedStream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    /// Per-agent keyed streams; results do not depend on the worker count.
    #[default]
    Deterministic,
    /// One stream shared by all workers; results depend on scheduling.
    Throughput,
}

impl ExecutionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExecutionMode::Deterministic => "deterministic",
            ExecutionMode::Throughput => "throughput",
        }
    }
}

impl std::str::FromStr for ExecutionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "deterministic" => Ok(ExecutionMode::Deterministic),
            "throughput" => Ok(ExecutionMode::Throughput),
            other => Err(Error::param(
                "mode",
                format!("`{other}` is not one of deterministic, throughput"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerPlan {
    pub np: usize,
    pub blocks: Vec<Range<usize>>,
    pub mode: ExecutionMode,
}

impl WorkerPlan {
    pub fn population(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.end)
    }

    pub fn with_mode(mut self, mode: ExecutionMode) -> Self {
        self.mode = mode;
        self
    }

    /// Workers left without a block (`np > pop`).
    pub fn idle_workers(&self) -> usize {
        self.np.saturating_sub(self.blocks.len())
    }
}

/// Logical processors available to this process, at least 1.
pub fn detect_processors() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Split `0..pop` into `min(pop, np)` contiguous blocks whose sizes differ by
/// at most one, larger blocks first.
pub fn partition_agents(pop: usize, np: usize) -> WorkerPlan {
    let np = np.max(1);
    let used = np.min(pop);
    let mut blocks = Vec::with_capacity(used);
    if let Some(base) = pop.checked_div(used) {
        let extra = pop % used;
        let mut start = 0;
        for k in 0..used {
            let len = base + usize::from(k < extra);
            blocks.push(start..start + len);
            start += len;
        }
    }
    WorkerPlan {
        np,
        blocks,
        mode: ExecutionMode::Deterministic,
    }
}

/// Lowest-index minimum fitness. Unset fitness counts as `+inf`.
pub fn reduce_best(swarm: &Swarm) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, agent) in swarm.agents.iter().enumerate() {
        let f = agent.fitness.unwrap_or(f64::INFINITY);
        if f < best.1 {
            best = (i, f);
        }
    }
    if best.1 == f64::INFINITY && !swarm.agents.is_empty() {
        best.0 = 0;
    }
    best
}

pub(crate) fn build_pool(np: usize) -> Result<ThreadPool> {
    ThreadPoolBuilder::new()
        .num_threads(np.max(1))
        .thread_name(|i| format!("pwoa-worker-{i}"))
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))
}

/// Fork one job per block over disjoint slices of `agents`, then join.
///
/// Returns the error of the lowest-indexed failing agent, if any.
fn fork_join<F>(pool: &ThreadPool, plan: &WorkerPlan, agents: &mut [Agent], job: F) -> Result<()>
where
    F: Fn(usize, &mut [Agent]) -> Result<()> + Sync,
{
    if plan.population() != agents.len() {
        return Err(Error::param(
            "plan",
            format!(
                "plan covers {} agents but the swarm has {}",
                plan.population(),
                agents.len()
            ),
        ));
    }
    let mut outcomes: Vec<Result<()>> = plan.blocks.iter().map(|_| Ok(())).collect();
    let mut slices = Vec::with_capacity(plan.blocks.len());
    let mut rest = agents;
    for block in &plan.blocks {
        let (head, tail) = rest.split_at_mut(block.len());
        slices.push((block.start, head));
        rest = tail;
    }
    let job = &job;
    pool.scope(|scope| {
        for ((start, slice), outcome) in slices.into_iter().zip(outcomes.iter_mut()) {
            if slice.is_empty() {
                continue;
            }
            scope.spawn(move |_| *outcome = job(start, slice));
        }
    });
    outcomes.into_iter().collect()
}

pub(crate) struct PoolExecutor {
    pool: ThreadPool,
    plan: WorkerPlan,
    shared: Option<SharedStream>,
}

impl PoolExecutor {
    pub(crate) fn new(plan: WorkerPlan, seed: u64) -> Result<Self> {
        let shared = match plan.mode {
            ExecutionMode::Deterministic => None,
            ExecutionMode::Throughput => Some(SharedStream::new(seed)),
        };
        Ok(Self {
            pool: build_pool(plan.np)?,
            plan,
            shared,
        })
    }
}

impl Executor for PoolExecutor {
    fn workers(&self) -> usize {
        self.plan.np
    }

    fn evaluate(
        &mut self,
        problem: &Problem,
        swarm: &mut Swarm,
        phase: usize,
        seed: u64,
    ) -> Result<()> {
        let shared = self.shared.as_ref();
        fork_join(&self.pool, &self.plan, &mut swarm.agents, |start, block| {
            for (k, agent) in block.iter_mut().enumerate() {
                let i = start + k;
                let fitness = match shared {
                    None => evaluate_agent(
                        problem,
                        i,
                        phase,
                        &agent.position,
                        &mut eval_stream(seed, i, phase),
                    )?,
                    Some(s) => evaluate_agent(problem, i, phase, &agent.position, &mut s.handle())?,
                };
                agent.fitness = Some(fitness);
            }
            Ok(())
        })
    }

    fn update(&mut self, ctx: &IterationContext<'_>, swarm: &mut Swarm) -> Result<()> {
        let shared = self.shared.as_ref();
        fork_join(&self.pool, &self.plan, &mut swarm.agents, |start, block| {
            for (k, agent) in block.iter_mut().enumerate() {
                let i = start + k;
                agent.position = match shared {
                    None => update_agent_keyed(ctx, i),
                    Some(s) => update_agent_with(ctx, i, &mut s.handle()),
                };
                agent.fitness = None;
            }
            Ok(())
        })
    }
}

/// Evaluate every agent of `swarm` with `problem`, forking over `plan`.
///
/// `phase` selects the evaluation streams (0 for the initial population).
pub fn parallel_evaluate(
    swarm: &mut Swarm,
    problem: &Problem,
    plan: &WorkerPlan,
    phase: usize,
    seed: u64,
) -> Result<()> {
    PoolExecutor::new(plan.clone(), seed)?.evaluate(problem, swarm, phase, seed)
}

/// Move every agent of `swarm` for iteration `iteration` against the
/// swarm's current best and positions, forking over `plan`.
pub fn parallel_update(
    swarm: &mut Swarm,
    problem: &Problem,
    params: &WoaParams,
    plan: &WorkerPlan,
    iteration: usize,
) -> Result<()> {
    let snapshot = swarm.positions();
    let best = swarm.best_position.clone();
    let ctx = IterationContext {
        params,
        update: engine::UpdateContext {
            spec: problem.spec(),
            best: &best,
            snapshot: &snapshot,
            faithful_eq8: params.faithful_eq8,
        },
        a: engine::coeff_a(iteration, params.generations)?,
        iteration,
    };
    PoolExecutor::new(plan.clone(), params.seed)?.update(&ctx, swarm)
}

/// Full optimization run on `np` workers.
pub fn run_parallel(
    problem: &Problem,
    params: &WoaParams,
    np: usize,
    mode: ExecutionMode,
) -> Result<RunResult> {
    run_parallel_observed(problem, params, np, mode, &mut |_, _| {})
}

pub fn run_parallel_observed(
    problem: &Problem,
    params: &WoaParams,
    np: usize,
    mode: ExecutionMode,
    observer: &mut Observer<'_>,
) -> Result<RunResult> {
    if np < 1 {
        return Err(Error::param("workers", "must be >= 1"));
    }
    params.validate()?;
    let plan = partition_agents(params.population, np).with_mode(mode);
    let mut exec = PoolExecutor::new(plan, params.seed)?;
    drive(problem, params, &mut exec, observer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_sequential;
    use crate::problem::{build_problem, ProblemKind, ProblemOptions, ProblemSpec};
    use proptest::prelude::*;

    fn sizes(plan: &WorkerPlan) -> Vec<usize> {
        plan.blocks.iter().map(|b| b.len()).collect()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition_agents(30, 1).blocks, vec![0..30]);
        assert_eq!(sizes(&partition_agents(30, 4)), vec![8, 8, 7, 7]);
        let p = partition_agents(30, 32);
        assert_eq!(p.blocks.len(), 30);
        assert!(p.blocks.iter().all(|b| b.len() == 1));
        assert_eq!(p.idle_workers(), 2);
    }

    #[test]
    fn processors() {
        assert!(detect_processors() >= 1);
    }

    #[test]
    fn reduce_examples() {
        let swarm = |f: &[f64]| Swarm {
            agents: f
                .iter()
                .map(|&v| Agent {
                    position: vec![0.0],
                    fitness: Some(v),
                })
                .collect(),
            best_index: 0,
            best_position: vec![0.0],
            best_fitness: f64::INFINITY,
        };
        assert_eq!(reduce_best(&swarm(&[3.0, 1.0, 2.0])), (1, 1.0));
        assert_eq!(reduce_best(&swarm(&[1.0, 1.0, 1.0])), (0, 1.0));
        assert_eq!(reduce_best(&swarm(&[5.5])), (0, 5.5));
    }

    #[test]
    fn evaluate_matches_direct_evaluation() {
        let opts = ProblemOptions {
            dim: Some(4),
            ..Default::default()
        };
        let problem = build_problem("f1", &opts).unwrap();
        let mut swarm = Swarm::initialize(problem.spec(), 0, 4);
        for (i, a) in swarm.agents.iter_mut().enumerate() {
            a.position = vec![0.0; 4];
            a.position[i] = 2.0;
        }
        let mut other = swarm.clone();
        parallel_evaluate(&mut swarm, &problem, &partition_agents(4, 1), 0, 0).unwrap();
        parallel_evaluate(&mut other, &problem, &partition_agents(4, 8), 0, 0).unwrap();
        assert_eq!(swarm.fitnesses(), vec![4.0; 4]);
        assert_eq!(swarm, other);
    }

    #[test]
    fn evaluate_reports_the_failing_agent() {
        let spec = ProblemSpec::uniform_box("nan", 1, -1.0, 1.0, ProblemKind::Unconstrained, None)
            .unwrap();
        let problem =
            Problem::from_fn(spec, |x| if x[0] == 0.5 { f64::INFINITY } else { 0.0 }).unwrap();
        let mut swarm = Swarm::initialize(problem.spec(), 0, 6);
        swarm.agents[4].position = vec![0.5];
        let err =
            parallel_evaluate(&mut swarm, &problem, &partition_agents(6, 3), 2, 0).unwrap_err();
        assert!(
            matches!(
                err,
                Error::NonFiniteFitness {
                    agent: 4,
                    iteration: 2,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn plan_must_cover_the_swarm() {
        let problem = build_problem("f14", &ProblemOptions::default()).unwrap();
        let mut swarm = Swarm::initialize(problem.spec(), 0, 6);
        assert!(parallel_evaluate(&mut swarm, &problem, &partition_agents(5, 2), 0, 0).is_err());
    }

    #[test]
    fn deterministic_update_ignores_worker_count() {
        let problem = build_problem(
            "f10",
            &ProblemOptions {
                dim: Some(6),
                ..Default::default()
            },
        )
        .unwrap();
        let params = WoaParams {
            population: 13,
            generations: 10,
            seed: 5,
            ..Default::default()
        };
        let mut base = Swarm::initialize(problem.spec(), params.seed, params.population);
        parallel_evaluate(
            &mut base,
            &problem,
            &partition_agents(13, 1),
            0,
            params.seed,
        )
        .unwrap();
        let (i, f) = reduce_best(&base);
        base.offer_best(i, f);
        let mut reference = None;
        for np in [1, 2, 4, 8] {
            let mut s = base.clone();
            parallel_update(&mut s, &problem, &params, &partition_agents(13, np), 3).unwrap();
            assert!(s
                .agents
                .iter()
                .all(|a| problem.spec().contains(&a.position)));
            match &reference {
                None => reference = Some(s),
                Some(r) => assert_eq!(r, &s, "np = {np}"),
            }
        }
    }

    #[test]
    fn deterministic_run_equals_sequential() {
        let problem = build_problem("f14", &ProblemOptions::default()).unwrap();
        let params = WoaParams {
            population: 12,
            generations: 40,
            seed: 99,
            ..Default::default()
        };
        let seq = run_sequential(&problem, &params).unwrap();
        for np in [1, 3, 5, 16] {
            let par = run_parallel(&problem, &params, np, ExecutionMode::Deterministic).unwrap();
            assert_eq!(par.best_fitness.to_bits(), seq.best_fitness.to_bits());
            assert_eq!(par.best_position, seq.best_position);
            assert_eq!(par.workers, np);
        }
    }

    #[test]
    fn throughput_mode_stays_in_bounds() {
        let problem = build_problem(
            "f5",
            &ProblemOptions {
                dim: Some(8),
                ..Default::default()
            },
        )
        .unwrap();
        let params = WoaParams {
            population: 16,
            generations: 30,
            seed: 3,
            ..Default::default()
        };
        let mut ok = true;
        let r = run_parallel_observed(
            &problem,
            &params,
            4,
            ExecutionMode::Throughput,
            &mut |_, s| {
                ok &= s
                    .agents
                    .iter()
                    .all(|a| problem.spec().contains(&a.position));
            },
        )
        .unwrap();
        assert!(ok);
        assert!(r.best_fitness.is_finite());
        assert!(problem.spec().contains(&r.best_position));
    }

    #[test]
    fn zero_workers_rejected() {
        let problem = build_problem("f14", &ProblemOptions::default()).unwrap();
        assert!(run_parallel(
            &problem,
            &WoaParams::default(),
            0,
            ExecutionMode::Deterministic
        )
        .is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!(
            "Throughput".parse::<ExecutionMode>().unwrap(),
            ExecutionMode::Throughput
        );
        assert!("fast".parse::<ExecutionMode>().is_err());
    }

    proptest! {
        #[test]
        fn partition_invariants(pop in 1usize..=1024, np in 1usize..=1024) {
            let plan = partition_agents(pop, np);
            prop_assert_eq!(plan.np, np);
            prop_assert_eq!(plan.blocks.len(), pop.min(np));
            let mut next = 0;
            for b in &plan.blocks {
                prop_assert_eq!(b.start, next);
                prop_assert!(!b.is_empty());
                next = b.end;
            }
            prop_assert_eq!(next, pop);
            let lens = sizes(&plan);
            let (lo, hi) = (lens.iter().min().unwrap(), lens.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
        }
    }
}
