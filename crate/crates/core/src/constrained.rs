//! Constrained engineering design problems and penalty handling.
//!
//! Each problem reports its raw objective together with a list of
//! non-negative constraint violations (0 means satisfied). A
//! [`PenaltyConfig`] folds the violations into a single scalar so the
//! unconstrained engine can optimize it.

use std::fmt;

use crate::problem::{Objective, ProblemKind, ProblemSpec};
use crate::rng::UniformSource;
use crate::{Error, Result};

/// Target gear ratio of the gear-train problem.
pub const GEAR_RATIO: f64 = 6.931;
/// Squared radius of each feasible sphere of the spheres problem.
pub const SPHERE_RADIUS_SQ: f64 = 0.0625;
/// Value returned by the death penalty for any infeasible point.
pub const DEATH_PENALTY_SENTINEL: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstrainedId {
    GearTrain,
    Cantilever,
    Himmelblau,
    GPoly,
    Spheres,
}

impl ConstrainedId {
    pub const ALL: [ConstrainedId; 5] = [
        ConstrainedId::GearTrain,
        ConstrainedId::Cantilever,
        ConstrainedId::Himmelblau,
        ConstrainedId::GPoly,
        ConstrainedId::Spheres,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstrainedId::GearTrain => "optim1",
            ConstrainedId::Cantilever => "optim2",
            ConstrainedId::Himmelblau => "optim3",
            ConstrainedId::GPoly => "optim4",
            ConstrainedId::Spheres => "optim5",
        }
    }

    pub fn alias(self) -> &'static str {
        match self {
            ConstrainedId::GearTrain => "gear_train",
            ConstrainedId::Cantilever => "cantilever",
            ConstrainedId::Himmelblau => "himmelblau",
            ConstrainedId::GPoly => "g_poly",
            ConstrainedId::Spheres => "spheres",
        }
    }

    pub fn from_name(name: &str) -> Option<ConstrainedId> {
        ConstrainedId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == name || c.alias() == name)
    }

    pub fn dim(self) -> usize {
        match self {
            ConstrainedId::GearTrain => 4,
            ConstrainedId::Cantilever | ConstrainedId::Himmelblau => 5,
            ConstrainedId::GPoly => 7,
            ConstrainedId::Spheres => 3,
        }
    }

    pub fn bounds(self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        match self {
            ConstrainedId::GearTrain => (vec![12.0; n], vec![60.0; n]),
            ConstrainedId::Cantilever => (vec![0.01; n], vec![100.0; n]),
            ConstrainedId::Himmelblau => (
                vec![78.0, 33.0, 27.0, 27.0, 27.0],
                vec![102.0, 45.0, 45.0, 45.0, 45.0],
            ),
            ConstrainedId::GPoly => (vec![-10.0; n], vec![10.0; n]),
            ConstrainedId::Spheres => (vec![0.0; n], vec![10.0; n]),
        }
    }
}

impl fmt::Display for ConstrainedId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_dim(x: &[f64], expected: usize) -> Result<()> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected,
            actual: x.len(),
        })
    }
}

/// Gear-train error `((1/6.931) - x2 x3 / (x1 x4))^2`.
///
/// With `integer` set each teeth count is rounded to the nearest integer first.
pub fn eval_gear_train(x: &[f64], integer: bool) -> Result<f64> {
    check_dim(x, 4)?;
    let t: Vec<f64> = if integer {
        x.iter().map(|v| v.round()).collect()
    } else {
        x.to_vec()
    };
    let den = t[0] * t[3];
    if den == 0.0 {
        return Err(Error::Domain("gear train: x1 * x4 = 0".into()));
    }
    Ok((1.0 / GEAR_RATIO - (t[1] * t[2]) / den).powi(2))
}

/// Cantilever beam weight and its single stiffness constraint `g <= 0`.
pub fn eval_cantilever(x: &[f64]) -> Result<(f64, f64)> {
    check_dim(x, 5)?;
    if let Some(i) = x.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!(
            "cantilever: x{} = {} must be positive",
            i + 1,
            x[i]
        )));
    }
    let objective = 0.6224 * x.iter().sum::<f64>();
    const C: [f64; 5] = [61.0, 27.0, 19.0, 7.0, 1.0];
    let g = C.iter().zip(x).map(|(c, v)| c / v.powi(3)).sum::<f64>() - 1.0;
    Ok((objective, g))
}

/// Feasible ranges of the three Himmelblau constraint functions.
pub const HIMMELBLAU_RANGES: [(f64, f64); 3] = [(0.0, 92.0), (90.0, 110.0), (20.0, 25.0)];

/// Himmelblau's problem, as printed by default or with the classical
/// objective (`literature`).
pub fn eval_himmelblau(x: &[f64], literature: bool) -> Result<(f64, [f64; 3])> {
    check_dim(x, 5)?;
    let [x1, x2, x3, x4, x5] = [x[0], x[1], x[2], x[3], x[4]];
    let objective = if literature {
        5.3578547 * x3 * x3 + 0.8356891 * x1 * x5 + 37.293239 * x1 - 40792.141
    } else {
        5.3578547 * x2 * x2 + 0.835689 * x1 * x5 + 37.293239 * x1 - 40729.141
    };
    let h1 = 85.334407 + 0.0056858 * x2 * x5 + 0.0006262 * x1 * x4 - 0.0022053 * x3 * x5;
    let h2 = 80.51249 + 0.0071317 * x2 * x5 + 0.0029955 * x1 * x2 + 0.002181 * x3 * x3;
    let h3 = 9.300961 + 0.0047026 * x3 * x5 + 0.0012547 * x1 * x3 + 0.0019085 * x3 * x4;
    Ok((objective, [h1, h2, h3]))
}

/// Seven-variable polynomial problem; feasible iff every `h_i >= 0`.
pub fn eval_g_poly(z: &[f64]) -> Result<(f64, [f64; 4])> {
    check_dim(z, 7)?;
    let [z1, z2, z3, z4, z5, z6, z7] = [z[0], z[1], z[2], z[3], z[4], z[5], z[6]];
    let objective = (z1 - 10.0).powi(2)
        + 5.0 * (z2 - 12.0).powi(2)
        + z3.powi(4)
        + 3.0 * (z4 - 11.0).powi(2)
        + 10.0 * z5.powi(6)
        + 7.0 * z6 * z6
        + z7.powi(4)
        - 4.0 * z6 * z7
        - 10.0 * z6
        - 8.0 * z7;
    let h1 = 127.0 - 2.0 * z1 * z1 - 3.0 * z2.powi(4) - z3 - 4.0 * z4 * z4 - 5.0 * z5;
    let h2 = 282.0 - 7.0 * z1 - 3.0 * z2 - 10.0 * z3 * z3 - z4 + z5;
    let h3 = 196.0 - 23.0 * z1 - z2 * z2 - 6.0 * z6 * z6 + 8.0 * z7;
    let h4 = -4.0 * z1 * z1 - z2 * z2 + 3.0 * z1 * z2 - 2.0 * z3 * z3 - 5.0 * z6 + 11.0 * z7;
    Ok((objective, [h1, h2, h3, h4]))
}

/// Squared distance from `z` to the nearest sphere centre in `{1..9}^3`.
pub fn sphere_distance_sq(z: &[f64; 3]) -> f64 {
    z.iter()
        .map(|&v| {
            let c = v.round().clamp(1.0, 9.0);
            (v - c).powi(2)
        })
        .sum()
}

/// Spheres objective and feasibility (inside one of the 729 spheres).
pub fn eval_spheres(z: &[f64; 3]) -> (f64, bool) {
    let objective =
        (-100.0 - (z[0] - 5.0).powi(2) - (z[1] - 5.0).powi(2) + (z[2] - 5.0).powi(2)) / 100.0;
    (objective, sphere_distance_sq(z) <= SPHERE_RADIUS_SQ)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyMode {
    Static,
    Death,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    pub coefficient: f64,
    pub exponent: f64,
    pub mode: PenaltyMode,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            coefficient: 1e10,
            exponent: 2.0,
            mode: PenaltyMode::Static,
        }
    }
}

impl PenaltyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.coefficient > 0.0 && self.coefficient.is_finite()) {
            return Err(Error::param(
                "penalty_coefficient",
                "must be a positive finite number",
            ));
        }
        if !(self.exponent > 0.0 && self.exponent.is_finite()) {
            return Err(Error::param(
                "penalty_exponent",
                "must be a positive finite number",
            ));
        }
        Ok(())
    }
}

/// Fold non-negative violations into the objective.
pub fn penalize(objective: f64, violations: &[f64], cfg: &PenaltyConfig) -> f64 {
    match cfg.mode {
        PenaltyMode::Static => {
            let total: f64 = violations
                .iter()
                .filter(|&&v| v > 0.0)
                .map(|v| v.powf(cfg.exponent))
                .sum();
            objective + cfg.coefficient * total
        }
        PenaltyMode::Death => {
            if violations.iter().all(|&v| v <= 0.0) {
                objective
            } else {
                DEATH_PENALTY_SENTINEL
            }
        }
    }
}

/// Violation of `lo <= value <= hi`, split into its two one-sided parts.
fn range_violations(value: f64, lo: f64, hi: f64) -> [f64; 2] {
    [(lo - value).max(0.0), (value - hi).max(0.0)]
}

/// Raw objective and per-constraint violations at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub objective: f64,
    pub violations: Vec<f64>,
}

impl Assessment {
    pub fn max_violation(&self) -> f64 {
        self.violations.iter().fold(0.0, |m, &v| m.max(v))
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstrainedProblem {
    id: ConstrainedId,
    integer_gear: bool,
    literature_himmelblau: bool,
}

impl ConstrainedProblem {
    pub fn new(id: ConstrainedId) -> Self {
        Self {
            id,
            integer_gear: false,
            literature_himmelblau: false,
        }
    }

    pub fn integer_gear(mut self, on: bool) -> Self {
        self.integer_gear = on;
        self
    }

    pub fn literature_himmelblau(mut self, on: bool) -> Self {
        self.literature_himmelblau = on;
        self
    }

    pub fn id(&self) -> ConstrainedId {
        self.id
    }

    pub fn spec(&self) -> ProblemSpec {
        let (lower, upper) = self.id.bounds();
        ProblemSpec {
            name: self.id.name().to_string(),
            dim: self.id.dim(),
            lower,
            upper,
            kind: ProblemKind::Constrained,
            known_min: None,
        }
    }

    pub fn assess(&self, x: &[f64]) -> Result<Assessment> {
        let (objective, violations) = match self.id {
            ConstrainedId::GearTrain => (eval_gear_train(x, self.integer_gear)?, Vec::new()),
            ConstrainedId::Cantilever => {
                let (f, g) = eval_cantilever(x)?;
                (f, vec![g.max(0.0)])
            }
            ConstrainedId::Himmelblau => {
                let (f, h) = eval_himmelblau(x, self.literature_himmelblau)?;
                let v = h
                    .iter()
                    .zip(HIMMELBLAU_RANGES)
                    .flat_map(|(&h, (lo, hi))| range_violations(h, lo, hi))
                    .collect();
                (f, v)
            }
            ConstrainedId::GPoly => {
                let (f, h) = eval_g_poly(x)?;
                (f, h.iter().map(|&h| (-h).max(0.0)).collect())
            }
            ConstrainedId::Spheres => {
                check_dim(x, 3)?;
                let z = [x[0], x[1], x[2]];
                let (f, _) = eval_spheres(&z);
                (
                    f,
                    vec![(sphere_distance_sq(&z) - SPHERE_RADIUS_SQ).max(0.0)],
                )
            }
        };
        Ok(Assessment {
            objective,
            violations,
        })
    }

    pub fn penalized(self, penalty: PenaltyConfig) -> Penalized {
        Penalized {
            problem: self,
            penalty,
        }
    }
}

/// A constrained problem seen through a penalty function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalized {
    problem: ConstrainedProblem,
    penalty: PenaltyConfig,
}

impl Penalized {
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let a = self.problem.assess(x)?;
        Ok(penalize(a.objective, &a.violations, &self.penalty))
    }
}

impl Objective for Penalized {
    fn evaluate(&self, x: &[f64], _rng: &mut dyn UniformSource) -> f64 {
        // evaluation errors surface as a non-finite fitness, which the engine reports
        self.value(x).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gear_train_points() {
        let v = eval_gear_train(&[43.0, 16.0, 19.0, 49.0], true).unwrap();
        assert!((v - 2.7009e-12).abs() < 1e-15, "{v}");
        let v = eval_gear_train(&[12.0; 4], false).unwrap();
        assert!((v - (1.0 / 6.931 - 1.0f64).powi(2)).abs() < 1e-15);
        assert!((v - 0.73225).abs() < 1e-5);
        // x2 x3 / (x1 x4) = 1 / 6.931 exactly
        let v = eval_gear_train(&[6.931, 1.0, 1.0, 1.0], false).unwrap();
        assert!(v < 1e-30);
        assert!(eval_gear_train(&[0.0, 1.0, 1.0, 1.0], false).is_err());
    }

    #[test]
    fn gear_train_rounding() {
        let a = eval_gear_train(&[42.6, 16.4, 18.7, 49.2], true).unwrap();
        let b = eval_gear_train(&[43.0, 16.0, 19.0, 49.0], true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cantilever_points() {
        let (f, g) = eval_cantilever(&[1.0; 5]).unwrap();
        assert!((f - 3.112).abs() < 1e-12);
        assert!((g - 114.0).abs() < 1e-12);

        let s = 115f64.cbrt();
        let (_, g) = eval_cantilever(&[s; 5]).unwrap();
        assert!(g.abs() < 1e-9, "{g}");

        let (f, g) = eval_cantilever(&[100.0; 5]).unwrap();
        assert!((f - 311.2).abs() < 1e-9);
        assert!((g - (-0.999885)).abs() < 1e-9);

        assert!(eval_cantilever(&[1.0, 1.0, 0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn himmelblau_points() {
        let x = [78.0, 33.0, 27.0, 27.0, 27.0];
        let (f, h) = eval_himmelblau(&x, false).unwrap();
        let expected =
            5.3578547 * 33.0 * 33.0 + 0.835689 * 78.0 * 27.0 + 37.293239 * 78.0 - 40729.141;
        assert_eq!(f, expected);
        assert!((f - (-30225.603)).abs() < 1e-2, "{f}");
        assert!(h[2] < 20.0);

        // x4 never enters the printed objective
        let (f2, _) = eval_himmelblau(&[78.0, 33.0, 27.0, 45.0, 27.0], false).unwrap();
        assert_eq!(f, f2);

        assert!(matches!(
            eval_himmelblau(&[1.0; 4], false),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn himmelblau_range_semantics() {
        let p = ConstrainedProblem::new(ConstrainedId::Himmelblau);
        // h2 below 90
        let (_, h) = eval_himmelblau(&[78.0, 33.0, 27.0, 27.0, 27.0], false).unwrap();
        let a = p.assess(&[78.0, 33.0, 27.0, 27.0, 27.0]).unwrap();
        assert_eq!(a.violations.len(), 6);
        assert_eq!(a.violations[4], 20.0 - h[2]);
        assert!(!a.is_feasible(1e-6));
        let a = p.assess(&[78.0, 33.0, 45.0, 45.0, 27.0]).unwrap();
        assert!(a.is_feasible(0.0), "{a:?}");
    }

    #[test]
    fn g_poly_points() {
        let (f, h) = eval_g_poly(&[0.0; 7]).unwrap();
        assert_eq!(f, 1183.0);
        assert_eq!(h, [127.0, 282.0, 196.0, 0.0]);
        let p = ConstrainedProblem::new(ConstrainedId::GPoly);
        assert!(p.assess(&[0.0; 7]).unwrap().is_feasible(0.0));
        // z1 = 10 drives h1 negative
        let a = p.assess(&[10.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(a.violations[0] > 0.0);
    }

    #[test]
    fn spheres_points() {
        assert_eq!(eval_spheres(&[5.0, 5.0, 5.0]), (-1.0, true));
        let (f, feasible) = eval_spheres(&[1.0, 1.0, 1.0]);
        assert!((f - (-1.16)).abs() < 1e-12);
        assert!(feasible);
        let (_, feasible) = eval_spheres(&[5.5, 5.5, 5.5]);
        assert!(!feasible);
        assert!((sphere_distance_sq(&[5.5, 5.5, 5.5]) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn penalty_modes() {
        let cfg = PenaltyConfig::default();
        assert_eq!(penalize(10.0, &[0.0, 0.0], &cfg), 10.0);
        assert_eq!(penalize(10.0, &[2.0], &cfg), 10.0 + 4e10);
        let death = PenaltyConfig {
            mode: PenaltyMode::Death,
            ..cfg
        };
        assert_eq!(penalize(10.0, &[0.0], &death), 10.0);
        assert_eq!(penalize(10.0, &[1e-9], &death), DEATH_PENALTY_SENTINEL);
    }

    #[test]
    fn penalty_validation() {
        let bad = PenaltyConfig {
            coefficient: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(PenaltyConfig::default().validate().is_ok());
    }

    #[test]
    fn feasible_points_are_not_penalized() {
        let cfg = PenaltyConfig::default();
        let points: [(ConstrainedId, Vec<f64>); 5] = [
            (ConstrainedId::GearTrain, vec![30.0, 20.0, 20.0, 40.0]),
            (ConstrainedId::Cantilever, vec![100.0; 5]),
            (
                ConstrainedId::Himmelblau,
                vec![78.0, 33.0, 45.0, 45.0, 27.0],
            ),
            (ConstrainedId::GPoly, vec![0.0; 7]),
            (ConstrainedId::Spheres, vec![3.0, 4.0, 5.1]),
        ];
        for (id, x) in points {
            let p = ConstrainedProblem::new(id);
            let a = p.assess(&x).unwrap();
            assert!(a.is_feasible(0.0), "{id}");
            assert_eq!(p.penalized(cfg).value(&x).unwrap(), a.objective);
        }
    }
}
