//! Problem model and the built-in problem registry.

use std::fmt;
use std::sync::Arc;

use crate::benchmarks::{Benchmark, FunctionId};
use crate::constrained::{ConstrainedId, ConstrainedProblem, PenaltyConfig};
use crate::rng::UniformSource;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Unconstrained,
    Constrained,
}

/// Dimension, box bounds and known optimum of a minimization problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub kind: ProblemKind,
    pub known_min: Option<f64>,
}

impl ProblemSpec {
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        kind: ProblemKind,
        known_min: Option<f64>,
    ) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            dim: lower.len(),
            lower,
            upper,
            kind,
            known_min,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same bounds `[lo, hi]` on every coordinate.
    pub fn uniform_box(
        name: impl Into<String>,
        dim: usize,
        lo: f64,
        hi: f64,
        kind: ProblemKind,
        known_min: Option<f64>,
    ) -> Result<Self> {
        Self::new(name, vec![lo; dim], vec![hi; dim], kind, known_min)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidProblem(format!(
                "{}: dim must be >= 1",
                self.name
            )));
        }
        if self.lower.len() != self.dim || self.upper.len() != self.dim {
            return Err(Error::InvalidProblem(format!(
                "{}: bounds length does not match dim {}",
                self.name, self.dim
            )));
        }
        if let Some(j) = (0..self.dim)
            .find(|&j| self.lower[j].partial_cmp(&self.upper[j]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidProblem(format!(
                "{}: lower[{j}] = {} is not below upper[{j}] = {}",
                self.name, self.lower[j], self.upper[j]
            )));
        }
        if matches!(self.known_min, Some(v) if !v.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "{}: known_min must be finite",
                self.name
            )));
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// Clamp every coordinate into the box.
    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// An objective to minimize.
///
/// `rng` is the evaluating agent's stream. Only stochastic objectives draw
/// from it.
pub trait Objective: Send + Sync {
    fn evaluate(&self, x: &[f64], rng: &mut dyn UniformSource) -> f64;
}

/// Adapter for plain closures.
pub struct FnObjective<F>(pub F);

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn evaluate(&self, x: &[f64], _rng: &mut dyn UniformSource) -> f64 {
        (self.0)(x)
    }
}

/// A spec paired with its objective. Cheap to clone and share across workers.
#[derive(Clone)]
pub struct Problem {
    spec: ProblemSpec,
    objective: Arc<dyn Objective>,
    constrained: Option<Arc<ConstrainedProblem>>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("spec", &self.spec)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new(spec: ProblemSpec, objective: impl Objective + 'static) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            spec,
            objective: Arc::new(objective),
            constrained: None,
        })
    }

    pub fn from_fn<F>(spec: ProblemSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(spec, FnObjective(f))
    }

    pub(crate) fn from_constrained(problem: ConstrainedProblem, penalty: PenaltyConfig) -> Self {
        let problem = Arc::new(problem);
        Self {
            spec: problem.spec(),
            objective: Arc::new(problem.penalized(penalty)),
            constrained: Some(problem),
        }
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// The constraint model behind a constrained problem, for feasibility checks.
    pub fn constrained(&self) -> Option<&ConstrainedProblem> {
        self.constrained.as_deref()
    }

    pub fn evaluate(&self, x: &[f64], rng: &mut dyn UniformSource) -> f64 {
        self.objective.evaluate(x, rng)
    }
}

/// Built-in problem identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Benchmark(FunctionId),
    Constrained(ConstrainedId),
}

impl ProblemId {
    /// Every built-in problem in registry order: `f1`..`f20`, `optim1`..`optim5`.
    pub fn all() -> Vec<ProblemId> {
        FunctionId::ALL
            .iter()
            .map(|&f| ProblemId::Benchmark(f))
            .chain(
                ConstrainedId::ALL
                    .iter()
                    .map(|&c| ProblemId::Constrained(c)),
            )
            .collect()
    }

    pub fn parse(name: &str) -> Result<ProblemId> {
        let lower = name.trim().to_ascii_lowercase();
        if let Some(f) = FunctionId::from_name(&lower) {
            return Ok(ProblemId::Benchmark(f));
        }
        if let Some(c) = ConstrainedId::from_name(&lower) {
            return Ok(ProblemId::Constrained(c));
        }
        Err(Error::UnknownProblem {
            name: name.to_string(),
            valid: valid_names(),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProblemId::Benchmark(f) => f.name(),
            ProblemId::Constrained(c) => c.name(),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Comma-separated list of every accepted problem name, aliases included.
pub fn valid_names() -> String {
    let mut names: Vec<String> = FunctionId::ALL
        .iter()
        .map(|f| f.name().to_string())
        .collect();
    names.extend(
        ConstrainedId::ALL
            .iter()
            .map(|c| format!("{} ({})", c.name(), c.alias())),
    );
    names.join(", ")
}

/// Variant switches and constraint handling applied when building a problem.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProblemOptions {
    /// Override the dimension of a scalable benchmark (`f1`..`f13`).
    pub dim: Option<usize>,
    /// `f19` exactly as printed, without the second cosine.
    pub literal_f19: bool,
    /// Classical Himmelblau coefficients instead of the as-printed ones.
    pub literature_himmelblau: bool,
    /// Round gear-train teeth counts to integers before evaluation.
    pub integer_gear: bool,
    pub penalty: PenaltyConfig,
}

/// Spec of a built-in problem with its default dimension.
pub fn make_problem(name: &str) -> Result<ProblemSpec> {
    Ok(build_problem(name, &ProblemOptions::default())?.spec)
}

pub fn build_problem(name: &str, options: &ProblemOptions) -> Result<Problem> {
    match ProblemId::parse(name)? {
        ProblemId::Benchmark(id) => {
            let mut bench = Benchmark::new(id).literal_f19(options.literal_f19);
            if let Some(dim) = options.dim {
                bench = bench.with_dim(dim)?;
            }
            Problem::new(bench.spec(), bench)
        }
        ProblemId::Constrained(id) => {
            if options.dim.is_some() {
                return Err(Error::param(
                    "dim",
                    format!("{} has a fixed dimension", id.name()),
                ));
            }
            options.penalty.validate()?;
            let problem = ConstrainedProblem::new(id)
                .integer_gear(options.integer_gear)
                .literature_himmelblau(options.literature_himmelblau);
            Ok(Problem::from_constrained(problem, options.penalty))
        }
    }
}
