//! The twenty unconstrained benchmark functions.
//!
//! `f1`..`f7` are unimodal, `f8`..`f20` multimodal. `f1`..`f13` are scalable
//! (default dimension 30); `f14`..`f20` are two-dimensional.

use std::f64::consts::{E, PI};

use crate::problem::{Objective, ProblemKind, ProblemSpec};
use crate::rng::UniformSource;
use crate::{Error, Result};

/// Per-coordinate minimizer of the Schwefel form used by `f8`.
pub const SCHWEFEL_MINIMIZER: f64 = 420.9687;
/// Per-coordinate minimum value of `f8`.
pub const SCHWEFEL_MIN_PER_DIM: f64 = -418.9829;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionClass {
    Unimodal,
    Multimodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
    F12,
    F13,
    F14,
    F15,
    F16,
    F17,
    F18,
    F19,
    F20,
}

impl FunctionId {
    pub const ALL: [FunctionId; 20] = [
        FunctionId::F1,
        FunctionId::F2,
        FunctionId::F3,
        FunctionId::F4,
        FunctionId::F5,
        FunctionId::F6,
        FunctionId::F7,
        FunctionId::F8,
        FunctionId::F9,
        FunctionId::F10,
        FunctionId::F11,
        FunctionId::F12,
        FunctionId::F13,
        FunctionId::F14,
        FunctionId::F15,
        FunctionId::F16,
        FunctionId::F17,
        FunctionId::F18,
        FunctionId::F19,
        FunctionId::F20,
    ];

    /// 1-based row number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; 20] = [
            "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10", "f11", "f12", "f13",
            "f14", "f15", "f16", "f17", "f18", "f19", "f20",
        ];
        NAMES[self as usize]
    }

    pub fn from_name(name: &str) -> Option<FunctionId> {
        FunctionId::ALL.iter().copied().find(|f| f.name() == name)
    }

    pub fn class(self) -> FunctionClass {
        if self <= FunctionId::F7 {
            FunctionClass::Unimodal
        } else {
            FunctionClass::Multimodal
        }
    }

    pub fn is_scalable(self) -> bool {
        self <= FunctionId::F13
    }

    pub fn default_dim(self) -> usize {
        if self.is_scalable() {
            30
        } else {
            2
        }
    }

    /// Symmetric search range `[-r, r]`.
    pub fn range(self) -> f64 {
        use FunctionId::*;
        match self {
            F1 | F3 | F4 | F6 => 100.0,
            F2 => 10.0,
            F5 => 30.0,
            F7 => 1.28,
            F8 => 500.0,
            F9 => 5.12,
            F10 => 32.0,
            F11 => 600.0,
            F12 | F13 => 50.0,
            F14 | F15 | F18 | F19 | F20 => 100.0,
            F16 => 5.0,
            F17 => 10.0,
        }
    }

    pub fn known_min(self, dim: usize) -> f64 {
        match self {
            FunctionId::F8 => SCHWEFEL_MIN_PER_DIM * dim as f64,
            FunctionId::F14 => -1.0,
            FunctionId::F16 => -1.0316,
            _ => 0.0,
        }
    }
}

/// `u(x, a, k, m)` boundary penalty shared by `f12` and `f13`.
pub fn penalty_u(xj: f64, a: f64, k: f64, m: f64) -> f64 {
    if xj > a {
        k * (xj - a).powf(m)
    } else if xj < -a {
        k * (-xj - a).powf(m)
    } else {
        0.0
    }
}

/// `y = 1 + (x + 1) / 4`, the change of variable used by `f12`.
pub fn y_transform(xj: f64) -> f64 {
    1.0 + (xj + 1.0) / 4.0
}

/// Evaluate `id` at `x`. `x` must have the function's default dimension.
pub fn eval_function(id: FunctionId, x: &[f64], rng: &mut dyn UniformSource) -> Result<f64> {
    Benchmark::new(id).evaluate_checked(x, rng)
}

/// A benchmark function bound to a dimension and variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Benchmark {
    id: FunctionId,
    dim: usize,
    literal_f19: bool,
}

impl Benchmark {
    pub fn new(id: FunctionId) -> Self {
        Self {
            id,
            dim: id.default_dim(),
            literal_f19: false,
        }
    }

    pub fn with_dim(mut self, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be >= 1"));
        }
        if !self.id.is_scalable() && dim != self.id.default_dim() {
            return Err(Error::param(
                "dim",
                format!("{} is fixed at {}", self.id.name(), self.id.default_dim()),
            ));
        }
        self.dim = dim;
        Ok(self)
    }

    /// Use `f19` as printed: `-0.3 cos(3 pi x1) (4 pi x2)`.
    pub fn literal_f19(mut self, on: bool) -> Self {
        self.literal_f19 = on;
        self
    }

    pub fn id(&self) -> FunctionId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> ProblemSpec {
        let r = self.id.range();
        ProblemSpec {
            name: self.id.name().to_string(),
            dim: self.dim,
            lower: vec![-r; self.dim],
            upper: vec![r; self.dim],
            kind: ProblemKind::Unconstrained,
            known_min: Some(self.id.known_min(self.dim)),
        }
    }

    pub fn evaluate_checked(&self, x: &[f64], rng: &mut dyn UniformSource) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(self.eval(x, rng))
    }

    fn eval(&self, z: &[f64], rng: &mut dyn UniformSource) -> f64 {
        use FunctionId::*;
        let n = z.len() as f64;
        match self.id {
            F1 => z.iter().map(|v| v * v).sum(),
            F2 => {
                let sum: f64 = z.iter().map(|v| v.abs()).sum();
                let prod: f64 = z.iter().map(|v| v.abs()).product();
                sum + prod
            }
            F3 => {
                let mut partial = 0.0;
                let mut total = 0.0;
                for v in z {
                    partial += v;
                    total += partial * partial;
                }
                total
            }
            F4 => z.iter().fold(0.0, |m, v| m.max(v.abs())),
            F5 => z
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            F6 => z.iter().map(|v| (v + 0.5).powi(2)).sum(),
            F7 => quartic(z) + rng.next_uniform(),
            F8 => z.iter().map(|v| -v * v.abs().sqrt().sin()).sum(),
            F9 => z
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            F10 => {
                let sq: f64 = z.iter().map(|v| v * v).sum();
                let cs: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
                -20.0 * (-0.2 * (sq / n).sqrt()).exp() - (cs / n).exp() + 20.0 + E
            }
            F11 => {
                let sq: f64 = z.iter().map(|v| v * v).sum();
                let prod: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (v / ((j + 1) as f64).sqrt()).cos())
                    .product();
                sq / 4000.0 - prod + 1.0
            }
            F12 => {
                let y: Vec<f64> = z.iter().map(|&v| y_transform(v)).collect();
                let last = y[y.len() - 1];
                let inner: f64 = y
                    .windows(2)
                    .map(|w| (w[0] - 1.0).powi(2) * (1.0 + 10.0 * (PI * w[1]).sin().powi(2)))
                    .sum();
                let core = 10.0 * (PI * y[0]).sin().powi(2) + inner + (last - 1.0).powi(2);
                PI / n * core
                    + z.iter()
                        .map(|&v| penalty_u(v, 10.0, 100.0, 4.0))
                        .sum::<f64>()
            }
            F13 => {
                let last = z[z.len() - 1];
                let inner: f64 = z
                    .iter()
                    .map(|v| (v - 1.0).powi(2) * (1.0 + (3.0 * PI * v + 1.0).sin().powi(2)))
                    .sum();
                let core = (3.0 * PI * z[0]).sin().powi(2)
                    + inner
                    + (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
                0.1 * core
                    + z.iter()
                        .map(|&v| penalty_u(v, 5.0, 100.0, 4.0))
                        .sum::<f64>()
            }
            F14 => {
                let (a, b) = (z[0], z[1]);
                -a.cos() * b.cos() * (-(a - PI).powi(2) - (b - PI).powi(2)).exp()
            }
            F15 => 0.26 * (z[0] * z[0] + z[1] * z[1]) - 0.48 * z[0] * z[1],
            F16 => {
                let (a, b) = (z[0], z[1]);
                4.0 * a * a - 2.1 * a.powi(4) + a.powi(6) / 3.0 + a * b - 4.0 * b * b
                    + 4.0 * b.powi(4)
            }
            F17 => (z[0] + 2.0 * z[1] - 7.0).powi(2) + (2.0 * z[0] + z[1] - 5.0).powi(2),
            F18 => {
                let r2 = z[0] * z[0] + z[1] * z[1];
                0.5 + (r2.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r2).powi(2)
            }
            F19 => {
                let (a, b) = (z[0], z[1]);
                let coupling = if self.literal_f19 {
                    (3.0 * PI * a).cos() * (4.0 * PI * b)
                } else {
                    (3.0 * PI * a).cos() * (4.0 * PI * b).cos()
                };
                a * a + 2.0 * b * b - 0.3 * coupling + 0.3
            }
            F20 => {
                let (a, b) = (z[0], z[1]);
                a * a + 2.0 * b * b - 0.3 * (3.0 * PI * a + 4.0 * PI * b).cos() + 0.3
            }
        }
    }
}

/// Deterministic part of `f7`.
pub fn quartic(z: &[f64]) -> f64 {
    z.iter()
        .enumerate()
        .map(|(j, v)| (j + 1) as f64 * v.powi(4))
        .sum()
}

impl Objective for Benchmark {
    fn evaluate(&self, x: &[f64], rng: &mut dyn UniformSource) -> f64 {
        if x.len() != self.dim {
            return f64::NAN;
        }
        self.eval(x, rng)
    }
}
