use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use timebin::compiler::ScheduleFile;
use timebin::linalg::MatrixFile;
use timebin::sampling::{read_distribution, read_event_log, write_distribution, write_event_log};
use timebin::validation::{CounterTrajectory, TestKind};
use timebin::ComplexMatrix;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_timebin"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("spawn timebin")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Example schedule + config for 3 photons in 6 modes, written into `dir/ex`.
fn example(dir: &Path, events: usize) -> PathBuf {
    let o = run_in(dir, &["example", "--out", "ex", "--events", &events.to_string(), "--seed", "11"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir.join("ex/config.json")
}

fn write_schedule(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("schedule.json");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn corrupt_schedule_is_a_parse_error() {
    let tmp = TempDir::new().unwrap();
    let p = write_schedule(tmp.path(), "{\"slots\": 3, \"loops\": ");
    let o = run_in(tmp.path(), &["compile", "--schedule", p.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).starts_with("error code=4 kind=parse"), "{}", stderr(&o));

    let p = write_schedule(tmp.path(), r#"{"slots": 3, "loops": 2, "angles": [[0, 0, 0]]}"#);
    let o = run_in(tmp.path(), &["compile", "--schedule", p.to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn zero_angles_compile_to_identity() {
    let tmp = TempDir::new().unwrap();
    let p = write_schedule(tmp.path(), r#"{"slots": 1, "loops": 3, "angles": [[0], [0], [0]]}"#);
    let o = run_in(tmp.path(), &["compile", "--schedule", p.to_str().unwrap(), "--out", "o"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let u = MatrixFile::read(tmp.path().join("o/unitary.json")).unwrap();
    assert_eq!(u, ComplexMatrix::identity(2));
    let report = fs::read_to_string(tmp.path().join("o/compile_report.txt")).unwrap();
    assert!(report.contains("closure_deviation=0e0"), "{report}");
}

#[test]
fn leakage_exits_3_with_deviation() {
    let tmp = TempDir::new().unwrap();
    // Zero angles shift the V rail of slot 1 into slot 2, outside the subset.
    let p = write_schedule(
        tmp.path(),
        r#"{"slots": 3, "loops": 1, "angles": [[0, 0, 0]],
            "mode_subset": [{"slot": 1, "rail": "H"}, {"slot": 1, "rail": "V"}]}"#,
    );
    let o = run_in(tmp.path(), &["compile", "--schedule", p.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("kind=leakage"));
    assert!(stderr(&o).contains("deviation"), "{}", stderr(&o));
}

#[test]
fn example_compiles_to_six_mode_unitary() {
    let tmp = TempDir::new().unwrap();
    let cfg = example(tmp.path(), 10);
    let o = run_in(tmp.path(), &["compile", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let u = MatrixFile::read(tmp.path().join("ex/run/unitary.json")).unwrap();
    assert_eq!(u.rows(), 6);
    let dev: f64 = stdout(&o)
        .split_whitespace()
        .find_map(|w| w.strip_prefix("closure_deviation="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev <= 1e-8);
}

#[test]
fn run_is_byte_identical_for_a_fixed_seed() {
    let tmp = TempDir::new().unwrap();
    let cfg = example(tmp.path(), 300);
    let mut snapshots = Vec::new();
    for out in ["a", "b"] {
        let o = run_in(tmp.path(), &["run", "--config", cfg.to_str().unwrap(), "--out", out]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let mut files: Vec<_> = fs::read_dir(tmp.path().join(out))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        let contents: Vec<_> = files
            .iter()
            .map(|f| (f.file_name().unwrap().to_owned(), fs::read(f).unwrap()))
            .collect();
        snapshots.push(contents);
    }
    assert_eq!(snapshots[0].len(), 7);
    assert_eq!(snapshots[0], snapshots[1]);

    let o = run_in(tmp.path(), &["run", "--config", cfg.to_str().unwrap(), "--out", "c", "--seed", "12"]);
    assert_eq!(code(&o), 0);
    assert_ne!(
        fs::read(tmp.path().join("a/events.csv")).unwrap(),
        fs::read(tmp.path().join("c/events.csv")).unwrap()
    );
}

#[test]
fn written_csvs_round_trip() {
    let tmp = TempDir::new().unwrap();
    let cfg = example(tmp.path(), 120);
    let o = run_in(tmp.path(), &["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dir = tmp.path().join("ex/run");

    let text = fs::read(dir.join("distribution.csv")).unwrap();
    let d = read_distribution(text.as_slice()).unwrap();
    assert_eq!(d.len(), 56);
    let mut again = Vec::new();
    write_distribution(&d, &mut again).unwrap();
    assert_eq!(again, text);

    let text = fs::read(dir.join("events.csv")).unwrap();
    let log = read_event_log(text.as_slice()).unwrap();
    assert_eq!(log.len(), 120);
    let mut again = Vec::new();
    write_event_log(&log, &mut again).unwrap();
    assert_eq!(again, text);

    for test in [TestKind::Aa, TestKind::Bayes, TestKind::Lr] {
        let text = fs::read(dir.join(format!("trajectory_{test}.csv"))).unwrap();
        let t = CounterTrajectory::read_csv(test, text.as_slice()).unwrap();
        assert_eq!(t.len(), 120);
        let mut again = Vec::new();
        t.write_csv(&mut again).unwrap();
        assert_eq!(again, text);
    }
}

#[test]
fn zero_events_skip_validators() {
    let tmp = TempDir::new().unwrap();
    let cfg = example(tmp.path(), 0);
    let o = run_in(tmp.path(), &["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dir = tmp.path().join("ex/run");
    assert!(dir.join("distribution.csv").exists());
    assert_eq!(fs::read_to_string(dir.join("events.csv")).unwrap(), "index,config\n");
    assert!(!dir.join("trajectory_aa.csv").exists());
    let summary = fs::read_to_string(dir.join("summary.txt")).unwrap();
    assert!(summary.contains("validators skipped"), "{summary}");
    assert!(summary.contains("seed=11"));
}

#[test]
fn distinguishable_events_fail_validation() {
    let tmp = TempDir::new().unwrap();
    let cfg = example(tmp.path(), 400);
    let c = cfg.to_str().unwrap();
    let o = run_in(tmp.path(), &["run", "--config", c, "--model", "dist", "--out", "d"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL test=lr"), "{}", stdout(&o));

    // The standalone validator reaches the same verdict from the saved files.
    let o = run_in(
        tmp.path(),
        &[
            "validate", "--unitary", "d/unitary.json", "--input", "1-0-1-0-1-0", "--log", "d/events.csv", "--test",
            "lr", "--out", "v",
        ],
    );
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("FAIL test=lr final=-"), "{}", stdout(&o));
    assert!(tmp.path().join("v/trajectory_lr.csv").exists());
}

#[test]
fn stage_commands_chain() {
    let tmp = TempDir::new().unwrap();
    let cfg = example(tmp.path(), 50);
    let c = cfg.to_str().unwrap();
    let o = run_in(tmp.path(), &["dist", "--config", c, "--out", "s"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run_in(tmp.path(), &["sample", "--distribution", "s/distribution.csv", "--events", "50", "--seed", "11", "--out", "s"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run_in(tmp.path(), &["run", "--config", c, "--out", "r"]);
    assert_eq!(code(&o), 0);
    // Same distribution, same seed: the same events as the full run.
    assert_eq!(fs::read(tmp.path().join("s/events.csv")).unwrap(), fs::read(tmp.path().join("r/events.csv")).unwrap());

    let o = run_in(tmp.path(), &["validate", "--config", c, "--log", "s/events.csv", "--test", "aa", "--out", "s"]);
    assert!(stdout(&o).contains("test=aa"), "{}", stderr(&o));
    let o = run_in(tmp.path(), &["validate", "--config", c, "--log", "s/events.csv", "--test", "bayes", "--out", "s"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn track_ends_in_self_comparison() {
    let tmp = TempDir::new().unwrap();
    let cfg = example(tmp.path(), 10);
    let o = run_in(tmp.path(), &["track", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dir = tmp.path().join("ex/run");
    let table = fs::read_to_string(dir.join("tracking.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    let loops = ScheduleFile::read(tmp.path().join("ex/schedule.json")).unwrap().loops;
    assert_eq!(rows.len(), loops);
    for (k, row) in rows.iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], (k + 1).to_string());
        assert_eq!(fields[1], "ok");
        let d = read_distribution(fs::File::open(dir.join(format!("loop_{}.csv", k + 1))).unwrap()).unwrap();
        assert!((d.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    let last: f64 = rows.last().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((last - 1.0).abs() < 1e-12);

    let o = run_in(tmp.path(), &["track", "--config", cfg.to_str().unwrap(), "--max-loops", "99"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn identity_schedule_tracks_constant_distribution() {
    let tmp = TempDir::new().unwrap();
    // Two slots, all couplers closed, V rails only: the ring just rotates
    // photons between V modes, so the subset {H1, H2} is untouched.
    write_schedule(
        tmp.path(),
        r#"{"slots": 2, "loops": 3, "angles": [[0, 0], [0, 0], [0, 0]],
            "injection": [{"slot": 1, "rail": "H"}],
            "mode_subset": [{"slot": 1, "rail": "H"}, {"slot": 2, "rail": "H"}]}"#,
    );
    fs::write(tmp.path().join("config.json"), r#"{"schedule": "schedule.json", "out": "o"}"#).unwrap();
    let o = run_in(tmp.path(), &["track", "--config", "config.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = fs::read(tmp.path().join("o/loop_1.csv")).unwrap();
    for k in 2..=3 {
        assert_eq!(fs::read(tmp.path().join(format!("o/loop_{k}.csv"))).unwrap(), first);
    }
}

#[test]
fn partial_model_from_inline_overlaps() {
    let tmp = TempDir::new().unwrap();
    let cfg = example(tmp.path(), 100);
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cfg).unwrap()).unwrap();
    v["model"] = "partial".into();
    v["gram"] = serde_json::json!([0.978, 0.970, 0.978]);
    fs::write(&cfg, v.to_string()).unwrap();
    let o = run_in(tmp.path(), &["dist", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("model=partial"));

    let o = run_in(tmp.path(), &["dist", "--config", cfg.to_str().unwrap(), "--model", "partial", "--gram", "missing.json"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn bad_configs_exit_4() {
    let tmp = TempDir::new().unwrap();
    let o = run_in(tmp.path(), &["run"]);
    assert_eq!(code(&o), 4);
    let o = run_in(tmp.path(), &["run", "--config", "nope.json"]);
    assert_eq!(code(&o), 4);
    let cfg = example(tmp.path(), 10);
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cfg).unwrap()).unwrap();
    v["input"] = "1-1-1".into();
    fs::write(&cfg, v.to_string()).unwrap();
    let o = run_in(tmp.path(), &["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn perm_prints_real_and_imaginary_parts() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path().join("m.json");
    fs::write(&p, r#"{"dim": 2, "re": [1, 2, 3, 4], "im": [0, 0, 0, 0]}"#).unwrap();
    let o = run_in(tmp.path(), &["perm", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "10 0");
}

#[test]
fn rate_table_and_solver() {
    let tmp = TempDir::new().unwrap();
    let o = run_in(tmp.path(), &["rate", "--preset", "projected", "--solve-n", "20"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let row20 = out.lines().find(|l| l.starts_with("20,")).unwrap();
    let per_hour: f64 = row20[3..].parse().unwrap();
    assert!((10.0..=1000.0).contains(&per_hour), "{per_hour}");
    assert!(out.contains("required loop_transmission="));

    let o = run_in(tmp.path(), &["rate", "--source-eff", "1.5"]);
    assert_eq!(code(&o), 4);
}
