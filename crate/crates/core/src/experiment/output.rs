//! CSV files and fixed-width summary tables.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::metrics::{SummaryStats, TimingRecord};
use crate::problem::ProblemId;
use crate::{Error, Result};

pub const RUNS_HEADER: [&str; 7] = [
    "problem",
    "dim",
    "workers",
    "run_index",
    "seed",
    "best_fitness",
    "elapsed_ms",
];

pub const SUMMARY_HEADER: [&str; 7] = [
    "problem",
    "workers",
    "mean_best",
    "std_best",
    "mean_time_ms",
    "speedup",
    "efficiency",
];

pub const RUNS_FILE: &str = "runs.csv";
pub const SUMMARY_FILE: &str = "summary.csv";

/// Shortest representation that parses back to the same `f64`.
///
/// Very small and very large magnitudes switch to scientific notation.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs();
    if v.is_finite() && !(1e-4..1e15).contains(&mag) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn ms(d: Duration) -> f64 {
    d.as_nanos() as f64 / 1e6
}

fn duration_from_ms(v: f64) -> Option<Duration> {
    if !(v >= 0.0 && v.is_finite()) {
        return None;
    }
    Some(Duration::from_nanos((v * 1e6).round() as u64))
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn write_rows<const N: usize>(
    path: &Path,
    header: [&str; N],
    rows: impl Iterator<Item = [String; N]>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write `runs.csv` and `summary.csv` into `out_dir`, creating it if needed.
/// Returns the two paths.
pub fn emit_csv(
    records: &[TimingRecord],
    stats: &[SummaryStats],
    out_dir: &Path,
) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let runs = out_dir.join(RUNS_FILE);
    write_rows(
        &runs,
        RUNS_HEADER,
        records.iter().map(|r| {
            [
                r.problem.clone(),
                r.dim.to_string(),
                r.workers.to_string(),
                r.run_index.to_string(),
                r.seed.to_string(),
                format_float(r.best_fitness),
                format_float(ms(r.elapsed)),
            ]
        }),
    )?;
    let summary = out_dir.join(SUMMARY_FILE);
    write_rows(
        &summary,
        SUMMARY_HEADER,
        stats.iter().map(|s| {
            [
                s.problem.clone(),
                s.workers.to_string(),
                format_float(s.mean_best),
                format_float(s.std_best),
                format_float(ms(s.mean_time)),
                format_float(s.speedup),
                format_float(s.efficiency),
            ]
        }),
    )?;
    Ok((runs, summary))
}

fn field<T: std::str::FromStr>(
    path: &Path,
    line: u64,
    row: &csv::StringRecord,
    i: usize,
) -> Result<T> {
    row.get(i)
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| {
            Error::Config(format!(
                "{}: line {line}: bad `{}` value {:?}",
                path.display(),
                RUNS_HEADER[i],
                row.get(i).unwrap_or("")
            ))
        })
}

/// Parse a `runs.csv` written by [`emit_csv`].
pub fn read_runs_csv(path: &Path) -> Result<Vec<TimingRecord>> {
    let mut rd = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = rd.headers().map_err(csv_err(path))?.clone();
    if header.iter().ne(RUNS_HEADER.iter().copied()) {
        return Err(Error::Config(format!(
            "{}: unexpected header `{}`",
            path.display(),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.map_err(csv_err(path))?;
        let line = row.position().map_or(0, |p| p.line());
        let elapsed: f64 = field(path, line, &row, 6)?;
        out.push(TimingRecord {
            problem: row[0].to_string(),
            dim: field(path, line, &row, 1)?,
            workers: field(path, line, &row, 2)?,
            run_index: field(path, line, &row, 3)?,
            seed: field(path, line, &row, 4)?,
            best_fitness: field(path, line, &row, 5)?,
            elapsed: duration_from_ms(elapsed).ok_or_else(|| {
                Error::Config(format!(
                    "{}: line {line}: negative elapsed_ms",
                    path.display()
                ))
            })?,
        });
    }
    Ok(out)
}

/// Table cell for a fitness value.
pub fn format_cell(v: f64) -> String {
    let mag = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if !(1e-3..1e6).contains(&mag) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

fn registry_rank(name: &str) -> usize {
    ProblemId::all()
        .iter()
        .position(|p| p.name() == name)
        .unwrap_or(usize::MAX)
}

fn layout(stats: &[SummaryStats]) -> (Vec<&str>, Vec<usize>) {
    let mut problems: Vec<&str> = stats
        .iter()
        .map(|s| s.problem.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    problems.sort_by_key(|p| (registry_rank(p), p.to_string()));
    let workers: Vec<usize> = stats
        .iter()
        .map(|s| s.workers)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    (problems, workers)
}

fn render(stats: &[SummaryStats], title: &str, cell: impl Fn(&SummaryStats) -> String) -> String {
    let (problems, workers) = layout(stats);
    let rows: Vec<Vec<String>> = problems
        .iter()
        .map(|p| {
            workers
                .iter()
                .map(|w| {
                    stats
                        .iter()
                        .find(|s| s.problem == *p && s.workers == *w)
                        .map_or_else(|| "-".to_string(), &cell)
                })
                .collect()
        })
        .collect();
    let first = problems
        .iter()
        .map(|p| p.len())
        .chain([title.len()])
        .max()
        .unwrap_or(0);
    let width = rows
        .iter()
        .flatten()
        .map(String::len)
        .chain(workers.iter().map(|w| format!("NP={w}").len()))
        .max()
        .unwrap_or(0);

    let mut out = String::new();
    let _ = write!(out, "{title:<first$}");
    for w in &workers {
        let _ = write!(out, "  {:>width$}", format!("NP={w}"));
    }
    out.push('\n');
    for (p, row) in problems.iter().zip(&rows) {
        let _ = write!(out, "{p:<first$}");
        for c in row {
            let _ = write!(out, "  {c:>width$}");
        }
        out.push('\n');
    }
    out
}

/// Mean best fitness, one row per problem and one column per worker count.
pub fn print_table(stats: &[SummaryStats]) -> String {
    render(stats, "problem", |s| format_cell(s.mean_best))
}

/// Speedup and efficiency per cell as `S/E`; a trailing `*` marks
/// superlinear efficiency.
pub fn print_scaling_table(stats: &[SummaryStats]) -> String {
    render(stats, "speedup/eff", |s| {
        format!(
            "{:.2}/{:.2}{}",
            s.speedup,
            s.efficiency,
            if s.is_superlinear() { "*" } else { "" }
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::aggregate;

    fn stat(problem: &str, workers: usize, mean: f64) -> SummaryStats {
        SummaryStats {
            problem: problem.into(),
            workers,
            runs: 1,
            mean_best: mean,
            std_best: 0.0,
            mean_time: Duration::from_millis(1),
            speedup: workers as f64 * 1.2,
            efficiency: 1.2,
        }
    }

    fn record(run: usize, fit: f64, nanos: u64) -> TimingRecord {
        TimingRecord {
            problem: "f3".into(),
            dim: 30,
            workers: 1,
            run_index: run,
            seed: u64::MAX - run as u64,
            best_fitness: fit,
            elapsed: Duration::from_nanos(nanos),
        }
    }

    #[test]
    fn float_format_round_trips() {
        for v in [
            0.0,
            1.0,
            -0.5,
            1e-300,
            3.25e-7,
            12345.678,
            1e300,
            -30665.53867,
            1.0 / 3.0,
        ] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(format_float(1e-300), "1e-300");
    }

    #[test]
    fn single_record_file_has_two_lines() {
        let dir = tempfile::tempdir().unwrap();
        let recs = [record(0, 0.25, 1_234_567)];
        let stats = aggregate(&recs, 1).unwrap();
        let (runs, summary) = emit_csv(&recs, &stats, dir.path()).unwrap();
        let text = fs::read_to_string(&runs).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.ends_with('\n'));
        assert_eq!(
            text.lines().next().unwrap(),
            "problem,dim,workers,run_index,seed,best_fitness,elapsed_ms"
        );
        let text = fs::read_to_string(&summary).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "problem,workers,mean_best,std_best,mean_time_ms,speedup,efficiency"
        );
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!((row[5], row[6]), ("1", "1"));
    }

    #[test]
    fn runs_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let recs: Vec<_> = (0..20)
            .map(|i| {
                record(
                    i,
                    (i as f64 * 0.37).sin() * 1e-9,
                    1 + i as u64 * 987_654_321_013,
                )
            })
            .collect();
        let stats = aggregate(&recs, 1).unwrap();
        let (runs, _) = emit_csv(&recs, &stats, dir.path()).unwrap();
        let back = read_runs_csv(&runs).unwrap();
        assert_eq!(back, recs);
        assert_eq!(aggregate(&back, 1).unwrap(), stats);
    }

    #[test]
    fn bad_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("runs.csv");
        fs::write(&p, "a,b\n1,2\n").unwrap();
        assert!(read_runs_csv(&p).is_err());
    }

    #[test]
    fn unwritable_dir_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let err = emit_csv(&[], &[], &blocker.join("sub"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("sub"), "{err}");
    }

    #[test]
    fn table_shape() {
        let stats: Vec<_> = [1, 2, 4, 8, 16, 32]
            .iter()
            .map(|&w| stat("f1", w, 1e-7))
            .collect();
        let table = print_table(&stats);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split_whitespace().count(), 7);
        assert!(lines[1].contains("1.000e-7"));
        assert!(lines[0].contains("NP=32"));
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(print_table(&[]).lines().count(), 1);
    }

    #[test]
    fn rows_follow_registry_order() {
        let stats = [
            stat("optim1", 1, 2.0),
            stat("f10", 1, 1.0),
            stat("f2", 1, 0.5),
        ];
        let table = print_table(&stats);
        let names: Vec<&str> = table
            .lines()
            .skip(1)
            .map(|l| l.split_whitespace().next().unwrap())
            .collect();
        assert_eq!(names, vec!["f2", "f10", "optim1"]);
        assert!(print_scaling_table(&stats).contains('*'));
    }

    #[test]
    fn cell_formatting() {
        assert_eq!(format_cell(0.0), "0");
        assert_eq!(format_cell(5e-4), "5.000e-4");
        assert_eq!(format_cell(-1.0316285), "-1.0316");
        assert_eq!(format_cell(-12569.487), "-12569.4870");
    }
}
