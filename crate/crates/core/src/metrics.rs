//! Timing, speedup, efficiency and cross-run aggregation.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::{Error, Result};

/// One completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub problem: String,
    pub dim: usize,
    pub workers: usize,
    pub run_index: usize,
    pub seed: u64,
    pub best_fitness: f64,
    pub elapsed: Duration,
}

/// Aggregate over the runs of one `(problem, workers)` group.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub problem: String,
    pub workers: usize,
    pub runs: usize,
    pub mean_best: f64,
    pub std_best: f64,
    pub mean_time: Duration,
    pub speedup: f64,
    pub efficiency: f64,
}

impl SummaryStats {
    pub fn is_superlinear(&self) -> bool {
        self.efficiency > 1.0
    }
}

/// `T(1) / T(N)`.
pub fn speedup(t1: Duration, tn: Duration) -> Result<f64> {
    if t1.is_zero() || tn.is_zero() {
        return Err(Error::param("duration", "timings must be positive"));
    }
    Ok(t1.as_secs_f64() / tn.as_secs_f64())
}

/// `S(N) / N`.
pub fn efficiency(s: f64, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::param("workers", "must be >= 1"));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::param("speedup", "must be positive and finite"));
    }
    Ok(s / n as f64)
}

/// Time `f` with the monotonic clock. The reported duration is at least 1 ns.
pub fn time_it<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().max(Duration::from_nanos(1)))
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn mean_duration(values: &[Duration]) -> Duration {
    let total: u128 = values.iter().map(|d| d.as_nanos()).sum();
    let mean = total / values.len() as u128;
    Duration::from_nanos(mean.min(u64::MAX as u128) as u64)
}

/// Group by `(problem, workers)` and compute mean/std best, mean time,
/// speedup against the problem's `baseline_workers` group and efficiency.
///
/// Output is ordered by problem name then worker count. Within a group the
/// records are sorted before summing, so the result does not depend on the
/// input order.
pub fn aggregate(records: &[TimingRecord], baseline_workers: usize) -> Result<Vec<SummaryStats>> {
    let mut groups: BTreeMap<(&str, usize), Vec<&TimingRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.problem.as_str(), r.workers))
            .or_default()
            .push(r);
    }

    let mut partial = Vec::with_capacity(groups.len());
    let mut baselines: BTreeMap<&str, Duration> = BTreeMap::new();
    for ((problem, workers), mut group) in groups {
        group.sort_by(|a, b| {
            (a.run_index, a.seed, a.elapsed, a.best_fitness.to_bits()).cmp(&(
                b.run_index,
                b.seed,
                b.elapsed,
                b.best_fitness.to_bits(),
            ))
        });
        let fitness: Vec<f64> = group.iter().map(|r| r.best_fitness).collect();
        let times: Vec<Duration> = group.iter().map(|r| r.elapsed).collect();
        let (mean_best, std_best) = mean_std(&fitness);
        let mean_time = mean_duration(&times).max(Duration::from_nanos(1));
        if workers == baseline_workers {
            baselines.insert(problem, mean_time);
        }
        partial.push((
            problem,
            workers,
            group.len(),
            mean_best,
            std_best,
            mean_time,
        ));
    }

    partial
        .into_iter()
        .map(|(problem, workers, runs, mean_best, std_best, mean_time)| {
            let base = *baselines
                .get(problem)
                .ok_or_else(|| Error::MissingBaseline {
                    problem: problem.to_string(),
                    workers: baseline_workers,
                })?;
            let s = speedup(base, mean_time)?;
            let e = efficiency(s, workers)?;
            Ok(SummaryStats {
                problem: problem.to_string(),
                workers,
                runs,
                mean_best,
                std_best,
                mean_time,
                speedup: s,
                efficiency: e,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(problem: &str, workers: usize, run: usize, fit: f64, ms: u64) -> TimingRecord {
        TimingRecord {
            problem: problem.into(),
            dim: 2,
            workers,
            run_index: run,
            seed: run as u64,
            best_fitness: fit,
            elapsed: Duration::from_millis(ms),
        }
    }

    #[test]
    fn speedup_examples() {
        let s = |a, b| speedup(Duration::from_secs_f64(a), Duration::from_secs_f64(b)).unwrap();
        assert_eq!(s(10.0, 10.0), 1.0);
        assert_eq!(s(10.0, 2.5), 4.0);
        assert_eq!(s(2.5, 10.0), 0.25);
        assert!(speedup(Duration::ZERO, Duration::from_secs(1)).is_err());
        assert!(speedup(Duration::from_secs(1), Duration::ZERO).is_err());
    }

    #[test]
    fn efficiency_examples() {
        assert_eq!(efficiency(4.0, 4).unwrap(), 1.0);
        assert_eq!(efficiency(1.0, 1).unwrap(), 1.0);
        assert!((efficiency(2.8, 4).unwrap() - 0.7).abs() < 1e-15);
        assert!(efficiency(1.0, 0).is_err());
        assert!(efficiency(0.0, 2).is_err());
    }

    #[test]
    fn single_record() {
        let stats = aggregate(&[rec("f1", 1, 0, 3.5, 10)], 1).unwrap();
        assert_eq!(stats.len(), 1);
        let s = &stats[0];
        assert_eq!(
            (s.mean_best, s.std_best, s.speedup, s.efficiency),
            (3.5, 0.0, 1.0, 1.0)
        );
        assert_eq!(s.mean_time, Duration::from_millis(10));
    }

    #[test]
    fn speedup_between_groups() {
        let records = [
            rec("f1", 1, 0, 1.0, 10_000),
            rec("f1", 1, 1, 3.0, 10_000),
            rec("f1", 2, 0, 1.0, 5_000),
            rec("f1", 2, 1, 3.0, 5_000),
        ];
        let stats = aggregate(&records, 1).unwrap();
        assert_eq!(stats[1].workers, 2);
        assert_eq!(stats[1].speedup, 2.0);
        assert_eq!(stats[1].efficiency, 1.0);
        assert_eq!(stats[0].std_best, 1.0);
        assert_eq!(stats[0].mean_best, 2.0);
    }

    #[test]
    fn missing_baseline() {
        let err = aggregate(&[rec("f3", 4, 0, 1.0, 1)], 1).unwrap_err();
        assert!(err.to_string().contains("f3"));
    }

    #[test]
    fn superlinear_is_reported_not_clamped() {
        let stats = aggregate(&[rec("f1", 1, 0, 0.0, 100), rec("f1", 2, 0, 0.0, 10)], 1).unwrap();
        assert_eq!(stats[1].efficiency, 5.0);
        assert!(stats[1].is_superlinear());
    }

    #[test]
    fn noop_timing() {
        for _ in 0..100 {
            let ((), d) = time_it(|| {});
            assert!(d > Duration::ZERO && d < Duration::from_millis(1));
        }
    }

    proptest! {
        #[test]
        fn permutation_invariant(
            fits in proptest::collection::vec(-1e6f64..1e6, 1..24),
            ms in proptest::collection::vec(1u64..10_000, 24),
            rot in 0usize..24,
        ) {
            let mut records: Vec<TimingRecord> = fits
                .iter()
                .enumerate()
                .map(|(i, &f)| rec(if i % 2 == 0 { "a" } else { "b" }, 1 + i % 3, i, f, ms[i]))
                .collect();
            // every problem needs a baseline group
            records.push(rec("a", 1, 100, 0.5, 7));
            records.push(rec("b", 1, 100, 0.5, 7));
            let forward = aggregate(&records, 1).unwrap();
            let len = records.len();
            records.rotate_left(rot % len);
            records.reverse();
            prop_assert_eq!(forward, aggregate(&records, 1).unwrap());
        }
    }
}
