//! Experiment configuration.
//!
//! Values come from three layers, later ones winning: built-in defaults, an
//! optional `key = value` config file, then command-line flags. Both the file
//! and the flags go through [`ExperimentConfig::set`], so every key accepts
//! the same syntax in both places.

use std::path::PathBuf;

use crate::constrained::{PenaltyConfig, PenaltyMode};
use crate::engine::{CoefficientShape, WoaParams};
use crate::parallel::ExecutionMode;
use crate::problem::{ProblemId, ProblemOptions};
use crate::{Error, Result};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "PWOA_OUT_DIR";

/// Every key accepted in a config file.
pub const KEYS: &[&str] = &[
    "problems",
    "workers",
    "runs",
    "generations",
    "population",
    "seed",
    "mode",
    "b",
    "coefficients",
    "penalty_coefficient",
    "penalty_exponent",
    "penalty_mode",
    "faithful_eq8",
    "faithful_f19",
    "literature_himmelblau",
    "integer_gear",
    "out_dir",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Canonical problem names (`f1`..`f20`, `optim1`..`optim5`).
    pub problems: Vec<String>,
    pub workers_sweep: Vec<usize>,
    pub runs: usize,
    pub generations: usize,
    pub population: usize,
    pub seed: u64,
    pub mode: ExecutionMode,
    pub b: f64,
    pub coefficient_shape: CoefficientShape,
    pub penalty: PenaltyConfig,
    pub faithful_eq8: bool,
    pub faithful_f19: bool,
    pub literature_himmelblau: bool,
    pub integer_gear: bool,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let woa = WoaParams::default();
        Self {
            problems: ProblemId::all()
                .iter()
                .map(|p| p.name().to_string())
                .collect(),
            workers_sweep: vec![1, 2, 4, 8, 16, 32],
            runs: woa.runs,
            generations: woa.generations,
            population: woa.population,
            seed: 1,
            mode: ExecutionMode::Deterministic,
            b: woa.b,
            coefficient_shape: woa.coefficient_shape,
            penalty: PenaltyConfig::default(),
            faithful_eq8: false,
            faithful_f19: false,
            literature_himmelblau: false,
            integer_gear: false,
            out_dir: PathBuf::from("results"),
        }
    }
}

fn positive(key: &str, value: &str) -> Result<usize> {
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::param(key, format!("`{value}` is not a positive integer")))?;
    if n == 0 {
        return Err(Error::param(key, "must be >= 1"));
    }
    Ok(n)
}

fn positive_real(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::param(key, format!("`{value}` is not a number")))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::param(key, "must be a positive finite number"));
    }
    Ok(v)
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::param(key, format!("`{other}` is not a boolean"))),
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl ExperimentConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "problems" => {
                let mut names = Vec::new();
                for item in list(value) {
                    if item.eq_ignore_ascii_case("all") {
                        names.extend(ProblemId::all().iter().map(|p| p.name().to_string()));
                    } else {
                        names.push(ProblemId::parse(item)?.name().to_string());
                    }
                }
                if names.is_empty() {
                    return Err(Error::param(key, "at least one problem is required"));
                }
                self.problems = names;
            }
            "workers" => {
                let sweep = list(value)
                    .map(|v| positive(key, v))
                    .collect::<Result<Vec<_>>>()?;
                if sweep.is_empty() {
                    return Err(Error::param(key, "worker sweep must not be empty"));
                }
                self.workers_sweep = sweep;
            }
            "runs" => self.runs = positive(key, value)?,
            "generations" => self.generations = positive(key, value)?,
            "population" => {
                let n = positive(key, value)?;
                if n < 2 {
                    return Err(Error::param(key, "must be >= 2"));
                }
                self.population = n;
            }
            "seed" => {
                self.seed = value.trim().parse().map_err(|_| {
                    Error::param(key, format!("`{value}` is not an unsigned integer"))
                })?
            }
            "mode" => self.mode = value.parse()?,
            "b" => {
                self.b = value
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::param(key, format!("`{value}` is not a finite number")))?
            }
            "coefficients" => {
                self.coefficient_shape = match value.trim() {
                    "per_agent" => CoefficientShape::PerAgent,
                    "per_dimension" => CoefficientShape::PerDimension,
                    other => {
                        return Err(Error::param(
                            key,
                            format!("`{other}` is not one of per_agent, per_dimension"),
                        ))
                    }
                }
            }
            "penalty_coefficient" => self.penalty.coefficient = positive_real(key, value)?,
            "penalty_exponent" => self.penalty.exponent = positive_real(key, value)?,
            "penalty_mode" => {
                self.penalty.mode = match value.trim() {
                    "static" => PenaltyMode::Static,
                    "death" => PenaltyMode::Death,
                    other => {
                        return Err(Error::param(
                            key,
                            format!("`{other}` is not one of static, death"),
                        ))
                    }
                }
            }
            "faithful_eq8" => self.faithful_eq8 = boolean(key, value)?,
            "faithful_f19" => self.faithful_f19 = boolean(key, value)?,
            "literature_himmelblau" => self.literature_himmelblau = boolean(key, value)?,
            "integer_gear" => self.integer_gear = boolean(key, value)?,
            "out_dir" => {
                if value.trim().is_empty() {
                    return Err(Error::param(key, "must not be empty"));
                }
                self.out_dir = PathBuf::from(value.trim());
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown key `{other}`; valid keys: {}",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Apply every setting of a config file.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_config_file(text)? {
            self.set(&key, &value)?;
        }
        Ok(())
    }

    pub fn problem_options(&self) -> ProblemOptions {
        ProblemOptions {
            dim: None,
            literal_f19: self.faithful_f19,
            literature_himmelblau: self.literature_himmelblau,
            integer_gear: self.integer_gear,
            penalty: self.penalty,
        }
    }

    /// Engine parameters for one run with `seed`.
    pub fn woa_params(&self, seed: u64) -> WoaParams {
        WoaParams {
            population: self.population,
            generations: self.generations,
            b: self.b,
            runs: self.runs,
            seed,
            coefficient_shape: self.coefficient_shape,
            faithful_eq8: self.faithful_eq8,
            ..WoaParams::default()
        }
    }

    /// Total number of runs this config will execute.
    pub fn cells(&self) -> usize {
        self.problems.len() * self.workers_sweep.len() * self.runs
    }
}

/// Parse flat `key = value` text. `#` starts a comment; blank lines are skipped.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected `key = value`, got `{line}`",
                n + 1
            ))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!(
                "line {}: unknown key `{key}`; valid keys: {}",
                n + 1,
                KEYS.join(", ")
            )));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}
