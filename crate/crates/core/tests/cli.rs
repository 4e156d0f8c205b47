use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use multirrt::dynamics::UavParams;
use multirrt::pipeline::{GoalStatus, ResultFile};

const BIN: &str = env!("CARGO_BIN_EXE_multirrt");

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("MULTIRRT_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn plan_to(dir: &Path, name: &str, file: &str, extra: &[&str]) -> (Output, PathBuf) {
    let out = dir.join(file);
    let sc = scenario(name);
    let mut args = vec!["plan", s(&sc), "-o", s(&out)];
    args.extend_from_slice(extra);
    (run(&args), out)
}

#[test]
fn plan_is_byte_identical_for_the_same_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, pa) = plan_to(dir.path(), "scenario1", "a.json", &["--seed", "42"]);
    let (b, pb) = plan_to(dir.path(), "scenario1", "b.json", &["--seed", "42"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
    assert!(pa.with_extension("timing.json").exists());

    let (_, pc) = plan_to(dir.path(), "scenario1", "c.json", &["--seed", "43"]);
    assert_ne!(std::fs::read(&pa).unwrap(), std::fs::read(&pc).unwrap());
}

#[test]
fn enclosed_goal_gives_partial_result() {
    let dir = tempfile::tempdir().unwrap();
    let (o, path) = plan_to(dir.path(), "enclosed", "enc.json", &[]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let result = ResultFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(!result.all_reached());
    assert_eq!(result.goals[1].status, GoalStatus::Unreached);
    assert!(result.goals[1].smoothed_path.is_empty());
    assert_eq!(result.goals[0].status, GoalStatus::Reached);

    // metrics only covers the reached goal and still audits cleanly
    let m = run(&["metrics", s(&path)]);
    assert_eq!(m.status.code(), Some(0), "{}", stderr(&m));
    let text = stdout(&m);
    assert!(text.contains("goal 0: length"));
    assert!(text.contains("goal 1: unreached"));
}

#[test]
fn invalid_scenario_names_the_failing_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"version": 1, "bounds": {"min": [0, 0], "max": [100, 100]},
            "start": [5, 5], "goals": [[90, 90]],
            "obstacles": [{"type": "circle", "center": [50, 50]}]}"#,
    )
    .unwrap();
    let o = run(&["plan", s(&bad), "-o", s(&dir.path().join("out.json"))]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("obstacles[0]"), "{err}");
    assert!(err.contains("radius"), "{err}");

    let o = run(&["plan", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn derive_reports_both_bounds() {
    let o = run(&["derive"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("116.0000 N"), "{text}");
    assert!(text.contains("R_min = 0.8343 m"), "{text}");
    assert!(text.contains("1.1986"), "{text}");
    assert!(text.contains("68.67 deg"), "{text}");
    assert!(text.contains("75.00 deg"), "{text}");
}

#[test]
fn derive_at_and_below_the_hover_limit() {
    let p = UavParams::default();
    let at_limit = p.level_flight_thrust_sq().sqrt() / (4.0 * p.max_motor_speed.powi(2));
    let o = run(&["derive", "--thrust-coeff", &format!("{at_limit:e}")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("zero turning authority"), "{}", stdout(&o));

    let o = run(&["derive", "--thrust-coeff", &format!("{:e}", 0.9 * at_limit)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cannot hold altitude"), "{}", stderr(&o));
}

#[test]
fn derive_reads_a_scenario_file() {
    let o = run(&["derive", "--scenario", s(&scenario("scenario2"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("75.00 deg"));
}

fn bench(dir: &Path, trials: &str, parallel: bool) -> (Output, String) {
    let sc = scenario("scenario2");
    let mut args = vec!["bench", s(&sc), "--trials", trials, "--out-dir", s(dir)];
    if parallel {
        args.push("--parallel");
    }
    let o = run(&args);
    let csv = std::fs::read_to_string(dir.join("scenario2.bench.csv")).unwrap_or_default();
    (o, csv)
}

#[test]
fn bench_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (o, csv) = bench(dir.path(), "10", false);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("trial,seed,status"));
    assert_eq!(lines.iter().filter(|l| !l.starts_with("summary_")).count(), 1 + 10);
    assert!(lines.iter().any(|l| l.starts_with("summary_median")));
    let timing = std::fs::read_to_string(dir.path().join("scenario2.bench_timing.csv")).unwrap();
    assert_eq!(timing.lines().count(), 11);
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("scenario2.bench_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["trials"], 10);
}

#[test]
fn bench_parallel_matches_serial() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (_, seq) = bench(a.path(), "6", false);
    let (_, par) = bench(b.path(), "6", true);
    assert!(!seq.is_empty());
    assert_eq!(seq, par);
}

#[test]
fn bench_single_trial_and_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = bench(dir.path(), "1", false);
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("scenario2.bench_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["f_l"]["stddev"], 0.0);

    let (o, _) = bench(dir.path(), "0", false);
    assert_eq!(o.status.code(), Some(3));
}

fn svg_for(dir: &Path, result: &Path, name: &str) -> String {
    let out = dir.join(name);
    let o = run(&["plot", s(result), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn plot_is_well_formed_and_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (_, result) = plan_to(dir.path(), "scenario3", "r.json", &["--tree"]);
    let a = svg_for(dir.path(), &result, "a.svg");
    let b = svg_for(dir.path(), &result, "b.svg");
    assert_eq!(a, b);

    let doc = roxmltree::Document::parse(&a).unwrap();
    let class_count = |c: &str| {
        doc.descendants()
            .filter(|n| n.attribute("class") == Some(c))
            .count()
    };
    let sc = multirrt::ScenarioFile::load(scenario("scenario3")).unwrap();
    assert_eq!(class_count("obstacle"), sc.obstacles.len());
    assert_eq!(class_count("inflated"), sc.obstacles.len());
    assert_eq!(class_count("tree"), 1);
    assert_eq!(class_count("smoothed"), 3);
    assert_eq!(class_count("goal"), 3);
    assert_eq!(class_count("start"), 1);
    assert_eq!(
        doc.root_element().attribute("viewBox"),
        Some("0 -1000 1000 1000")
    );
}

#[test]
fn plot_of_empty_map_has_no_obstacles() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("empty.json");
    std::fs::write(
        &sc,
        r#"{"version": 1, "bounds": {"min": [0, 0], "max": [200, 100]},
            "start": [10, 10], "goals": [[190, 90], [150, 20]], "obstacles": []}"#,
    )
    .unwrap();
    let result = dir.path().join("r.json");
    assert_eq!(run(&["plan", s(&sc), "-o", s(&result)]).status.code(), Some(0));
    let svg = svg_for(dir.path(), &result, "e.svg");
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert!(!doc
        .descendants()
        .any(|n| matches!(n.attribute("class"), Some("obstacle") | Some("inflated"))));
    assert!(doc.descendants().all(|n| n.attribute("class") != Some("tree")));
}

#[test]
fn plot_rejects_non_result_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["plot", s(&scenario("scenario1")), "-o", s(&dir.path().join("x.svg"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn metrics_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let (_, path) = plan_to(dir.path(), "scenario2", "r.json", &[]);
    let o = run(&["metrics", s(&path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("self-audit: ok"));

    let mut result = ResultFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let n = result.goals[0].smoothed_path.len();
    result.goals[0].smoothed_path[n / 2].x += 3.0;
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, result.to_json()).unwrap();
    let o = run(&["metrics", s(&tampered)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("mismatch"), "{}", stderr(&o));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["plan", s(&scenario("scenario1"))])
        .env("MULTIRRT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("scenario1.result.json").exists());
    assert!(dir.path().join("scenario1.result.timing.json").exists());
}
