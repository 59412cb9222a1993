use std::fs;
use std::process::{Command, Output};

use pwoa::experiment::read_runs_csv;
use pwoa::metrics::aggregate;

fn pwoa(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pwoa"));
    cmd.args(args).env_remove("PWOA_OUT_DIR");
    cmd
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn list_shows_every_problem() {
    let out = pwoa(&["list"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 26);
    for name in ["f1 ", "f20", "optim1", "gear_train", "spheres"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn eval_prints_value() {
    let out = pwoa(&["eval", "--problem", "f17", "--point", "1,3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "0");

    let out = pwoa(&[
        "eval",
        "--problem",
        "f14",
        "--point",
        "3.141592653589793,3.141592653589793",
    ])
    .output()
    .unwrap();
    assert_eq!(stdout(&out).trim(), "-1");
}

#[test]
fn eval_scalable_dimension_follows_point() {
    let out = pwoa(&["eval", "--problem", "f1", "--point", "1,2,-2"])
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "9");
}

#[test]
fn eval_constrained_reports_violations() {
    let out = pwoa(&["eval", "--problem", "cantilever", "--point", "1,1,1,1,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("objective 3.11"), "{text}");
    assert!(text.contains("violation1 114"), "{text}");
    assert!(text.contains("feasible false"));
}

#[test]
fn eval_errors() {
    let out = pwoa(&["eval", "--problem", "f14", "--point", "1,2,3"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("dimension"), "{}", stderr(&out));

    let out = pwoa(&["eval", "--problem", "nosuch", "--point", "1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("valid names"));
}

#[test]
fn run_writes_csv_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = pwoa(&[
        "run",
        "--problems",
        "f1,f17",
        "--workers",
        "1,2",
        "--runs",
        "2",
        "--generations",
        "20",
        "--quiet",
        "--out-dir",
    ])
    .arg(dir.path())
    .output()
    .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("NP=2"));

    let runs = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert_eq!(
        runs.lines().next().unwrap(),
        "problem,dim,workers,run_index,seed,best_fitness,elapsed_ms"
    );
    assert_eq!(runs.lines().count(), 1 + 8);
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(
        summary.lines().next().unwrap(),
        "problem,workers,mean_best,std_best,mean_time_ms,speedup,efficiency"
    );
    assert_eq!(summary.lines().count(), 1 + 4);
    for line in summary
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(1) == Some("1"))
    {
        assert!(line.ends_with(",1,1"), "{line}");
    }

    let records = read_runs_csv(&dir.path().join("runs.csv")).unwrap();
    let stats = aggregate(&records, 1).unwrap();
    assert_eq!(stats.len(), 4);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("env_out");
    let out = pwoa(&[
        "run",
        "--problems",
        "f2",
        "--workers",
        "1",
        "--runs",
        "1",
        "--generations",
        "5",
        "-q",
    ])
    .env("PWOA_OUT_DIR", &target)
    .output()
    .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(target.join("runs.csv").exists());
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("exp.conf");
    fs::write(
        &conf,
        format!(
            "# tiny sweep\nproblems = f3\nworkers = 1\nruns = 3\ngenerations = 5\nout_dir = {}\n",
            dir.path().join("from_file").display()
        ),
    )
    .unwrap();
    let out = pwoa(&["run", "-q", "--runs", "1", "-c"])
        .arg(&conf)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let runs = fs::read_to_string(dir.path().join("from_file/runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 2);
}

#[test]
fn bad_config_is_rejected_with_key() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "runs = 0\n").unwrap();
    let out = pwoa(&["run", "-c"]).arg(&conf).output().unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("runs"), "{}", stderr(&out));

    let out = pwoa(&["run", "--workers", ""]).output().unwrap();
    assert!(!out.status.success());
}
