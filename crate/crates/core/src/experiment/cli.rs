//! Command-line front end: `run`, `list` and `eval`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{ExperimentConfig, OUT_DIR_ENV};
use super::output::{emit_csv, format_float, print_scaling_table, print_table};
use super::run_experiment_with;
use crate::benchmarks::FunctionId;
use crate::problem::{build_problem, ProblemId, ProblemKind};
use crate::rng::RandomStream;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "pwoa",
    version,
    about = "Parallel whale optimization experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment sweep and write runs.csv / summary.csv.
    Run(Box<RunArgs>),
    /// List the built-in problems.
    List,
    /// Evaluate one problem at one point.
    Eval(Box<EvalArgs>),
}

/// Variant switches shared by `run` and `eval`.
#[derive(Debug, Args, Default)]
pub struct VariantArgs {
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    pub faithful_eq8: Option<String>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    pub faithful_f19: Option<String>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    pub literature_himmelblau: Option<String>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    pub integer_gear: Option<String>,
    #[arg(long, value_name = "X")]
    pub penalty_coefficient: Option<String>,
    #[arg(long, value_name = "X")]
    pub penalty_exponent: Option<String>,
    /// `static` or `death`.
    #[arg(long, value_name = "MODE")]
    pub penalty_mode: Option<String>,
}

impl VariantArgs {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        [
            ("faithful_eq8", &self.faithful_eq8),
            ("faithful_f19", &self.faithful_f19),
            ("literature_himmelblau", &self.literature_himmelblau),
            ("integer_gear", &self.integer_gear),
            ("penalty_coefficient", &self.penalty_coefficient),
            ("penalty_exponent", &self.penalty_exponent),
            ("penalty_mode", &self.penalty_mode),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Comma-separated problem names, or `all`.
    #[arg(long)]
    pub problems: Option<String>,
    /// Comma-separated worker counts.
    #[arg(long)]
    pub workers: Option<String>,
    #[arg(long)]
    pub runs: Option<String>,
    #[arg(long)]
    pub generations: Option<String>,
    #[arg(long)]
    pub population: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// `deterministic` or `throughput`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Spiral shape constant.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// `per_agent` or `per_dimension`.
    #[arg(long)]
    pub coefficients: Option<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Suppress per-run progress lines.
    #[arg(long, short)]
    pub quiet: bool,
    #[command(flatten)]
    pub variants: VariantArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub problem: String,
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Seed for the noise term of `f7`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub variants: VariantArgs,
}

/// Resolve the effective config: defaults, then the config file, then
/// `env_out_dir`, then flags.
pub fn resolve_config(args: &RunArgs, env_out_dir: Option<OsString>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        cfg.apply_file(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    if let Some(dir) = env_out_dir.filter(|d| !d.is_empty()) {
        cfg.out_dir = PathBuf::from(dir);
    }
    let flags = [
        ("problems", &args.problems),
        ("workers", &args.workers),
        ("runs", &args.runs),
        ("generations", &args.generations),
        ("population", &args.population),
        ("seed", &args.seed),
        ("mode", &args.mode),
        ("b", &args.b),
        ("coefficients", &args.coefficients),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    for (key, value) in args.variants.pairs() {
        cfg.set(key, value)?;
    }
    if let Some(dir) = &args.out_dir {
        cfg.out_dir = dir.clone();
    }
    Ok(cfg)
}

fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Error::param("point", format!("`{s}` is not a number")))
        })
        .collect()
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let cfg = resolve_config(args, std::env::var_os(OUT_DIR_ENV))?;
    let total = cfg.cells();
    let mut done = 0usize;
    let quiet = args.quiet;
    let outcome = run_experiment_with(&cfg, |r| {
        done += 1;
        if !quiet {
            let _ = writeln!(
                err,
                "[{done}/{total}] {} workers={} run={} best={} {:.3}ms",
                r.problem,
                r.workers,
                r.run_index,
                format_float(r.best_fitness),
                r.elapsed.as_secs_f64() * 1e3
            );
        }
    })?;
    let (runs, summary) = emit_csv(&outcome.records, &outcome.stats, &cfg.out_dir)?;
    let _ = writeln!(out, "{}", print_table(&outcome.stats));
    let _ = writeln!(out, "{}", print_scaling_table(&outcome.stats));
    let _ = writeln!(out, "wrote {} and {}", runs.display(), summary.display());
    for f in &outcome.failures {
        let _ = writeln!(err, "FAILED: {f}");
    }
    if !outcome.is_success() {
        let _ = writeln!(err, "{} of {} runs failed", outcome.failures.len(), total);
    }
    Ok(outcome.is_success())
}

fn cmd_list(out: &mut dyn Write) {
    let _ = writeln!(
        out,
        "{:<8} {:<12} {:>4}  {:<13} {:<24} known_min",
        "name", "alias", "dim", "kind", "bounds"
    );
    for id in ProblemId::all() {
        let problem =
            build_problem(id.name(), &Default::default()).expect("registry problem builds");
        let spec = problem.spec();
        let (alias, kind) = match id {
            ProblemId::Benchmark(f) => ("", format!("{:?}", f.class()).to_lowercase()),
            ProblemId::Constrained(c) => (c.alias(), "constrained".to_string()),
        };
        let uniform = spec.lower.iter().all(|&l| l == spec.lower[0])
            && spec.upper.iter().all(|&u| u == spec.upper[0]);
        let bounds = if uniform {
            format!("[{}, {}]", spec.lower[0], spec.upper[0])
        } else {
            "per-coordinate".to_string()
        };
        let known = spec.known_min.map_or_else(|| "-".to_string(), format_float);
        let _ = writeln!(
            out,
            "{:<8} {:<12} {:>4}  {:<13} {:<24} {known}",
            id.name(),
            alias,
            spec.dim,
            kind,
            bounds
        );
    }
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let point = parse_point(&args.point)?;
    let mut cfg = ExperimentConfig::default();
    for (key, value) in args.variants.pairs() {
        cfg.set(key, value)?;
    }
    let mut options = cfg.problem_options();
    if let ProblemId::Benchmark(f) = ProblemId::parse(&args.problem)? {
        if FunctionId::is_scalable(f) && point.len() != f.default_dim() {
            options.dim = Some(point.len());
        }
    }
    let problem = build_problem(&args.problem, &options)?;
    if point.len() != problem.dim() {
        return Err(Error::Dimension {
            expected: problem.dim(),
            actual: point.len(),
        });
    }
    let mut rng = RandomStream::new(args.seed, 0, 0);
    let value = problem.evaluate(&point, &mut rng);
    let _ = writeln!(out, "{}", format_float(value));
    if problem.spec().kind == ProblemKind::Constrained {
        if let Some(c) = problem.constrained() {
            let a = c.assess(&point)?;
            let _ = writeln!(out, "objective {}", format_float(a.objective));
            for (i, v) in a.violations.iter().enumerate() {
                let _ = writeln!(out, "violation{} {}", i + 1, format_float(*v));
            }
            let _ = writeln!(out, "feasible {}", a.is_feasible(0.0));
        }
    }
    Ok(())
}

/// Parse `args` and run the selected command. Returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, out, err),
        Command::List => {
            cmd_list(out);
            Ok(true)
        }
        Command::Eval(args) => cmd_eval(args, out).map(|()| true),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
