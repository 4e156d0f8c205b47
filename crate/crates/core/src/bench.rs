//! Seeded benchmark harness: repeated pipeline runs with per-trial metrics
//! and box-plot summary statistics.
//!
//! Trial `i` uses seed `base_seed + i`. Trials are independent, so they run
//! on the rayon pool when the `parallel` feature is enabled and the caller
//! asks for it; otherwise they run in order on the calling thread. Either
//! way the rows come back in trial order.

use serde::{Deserialize, Serialize};

use crate::pipeline::{run_pipeline, PipelineOptions};
use crate::scenario::ScenarioFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    /// `ok`, `partial` or `error`.
    pub status: String,
    pub reached: usize,
    pub goals: usize,
    pub iterations: usize,
    pub tree_nodes: usize,
    /// Smoothed-path metrics (reported as F_L / F_S).
    pub f_l: Option<f64>,
    pub f_s: Option<f64>,
    /// Metrics on the reduced polylines.
    pub f_l_reduced: Option<f64>,
    pub f_s_reduced: Option<f64>,
    /// Planner wall time (F_T), seconds.
    pub f_t: f64,
    pub error: Option<String>,
}

impl TrialRow {
    pub fn succeeded(&self) -> bool {
        self.status == "ok"
    }
}

/// Box-plot statistics over one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub stddev: f64,
    pub median: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            0.5 * (sorted[mid - 1] + sorted[mid])
        };
        Some(Stats {
            count: values.len(),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            mean,
            stddev: var.sqrt(),
            median,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub trials: usize,
    pub succeeded: usize,
    pub base_seed: u64,
    pub f_l: Option<Stats>,
    pub f_s: Option<Stats>,
    pub f_l_reduced: Option<Stats>,
    pub f_s_reduced: Option<Stats>,
    pub f_t: Option<Stats>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<TrialRow>,
    pub summary: BenchSummary,
}

fn run_trial(scenario: &ScenarioFile, trial: usize, seed: u64) -> TrialRow {
    let goals = scenario.goals.len();
    match run_pipeline(
        scenario,
        PipelineOptions {
            seed: Some(seed),
            keep_tree: false,
        },
    ) {
        Ok(out) => {
            let r = &out.result;
            let reached = r.reached().count();
            TrialRow {
                trial,
                seed,
                status: if reached == goals { "ok" } else { "partial" }.into(),
                reached,
                goals,
                iterations: r.iterations_used,
                tree_nodes: r.tree_nodes,
                f_l: r.metrics.smoothed.map(|m| m.f_l),
                f_s: r.metrics.smoothed.map(|m| m.f_s),
                f_l_reduced: r.metrics.reduced.map(|m| m.f_l),
                f_s_reduced: r.metrics.reduced.map(|m| m.f_s),
                f_t: out.timing.plan,
                error: None,
            }
        }
        Err(e) => TrialRow {
            trial,
            seed,
            status: "error".into(),
            reached: 0,
            goals,
            iterations: 0,
            tree_nodes: 0,
            f_l: None,
            f_s: None,
            f_l_reduced: None,
            f_s_reduced: None,
            f_t: 0.0,
            error: Some(e.to_string()),
        },
    }
}

/// Applies `f` to every item, on the rayon pool when `parallel` is set and
/// the feature is compiled in. Output order matches input order.
pub fn map_maybe_parallel<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Runs `trials` seeded pipeline runs. Failed trials are recorded, not fatal.
pub fn run_bench(
    scenario: &ScenarioFile,
    trials: usize,
    base_seed: u64,
    parallel: bool,
) -> BenchReport {
    let jobs: Vec<(usize, u64)> = (0..trials)
        .map(|i| (i, base_seed.wrapping_add(i as u64)))
        .collect();
    let rows = map_maybe_parallel(&jobs, parallel, |&(i, seed)| run_trial(scenario, i, seed));
    let summary = summarize(&rows, base_seed);
    BenchReport { rows, summary }
}

/// Statistics over the trials that reached every goal.
pub fn summarize(rows: &[TrialRow], base_seed: u64) -> BenchSummary {
    let ok: Vec<&TrialRow> = rows.iter().filter(|r| r.succeeded()).collect();
    let collect = |f: fn(&TrialRow) -> Option<f64>| -> Option<Stats> {
        Stats::of(&ok.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
    };
    BenchSummary {
        trials: rows.len(),
        succeeded: ok.len(),
        base_seed,
        f_l: collect(|r| r.f_l),
        f_s: collect(|r| r.f_s),
        f_l_reduced: collect(|r| r.f_l_reduced),
        f_s_reduced: collect(|r| r.f_s_reduced),
        f_t: collect(|r| Some(r.f_t)),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const CSV_HEADER: &str =
    "trial,seed,status,reached,goals,iterations,tree_nodes,f_l,f_s,f_l_reduced,f_s_reduced";

/// Per-trial rows followed by one summary row per statistic. Only
/// seed-determined columns are written; see [`timing_csv`] for F_T.
pub fn metrics_csv(report: &BenchReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.trial,
            r.seed,
            r.status,
            r.reached,
            r.goals,
            r.iterations,
            r.tree_nodes,
            opt(r.f_l),
            opt(r.f_s),
            opt(r.f_l_reduced),
            opt(r.f_s_reduced),
        ));
    }
    let s = &report.summary;
    type Pick = fn(&Stats) -> f64;
    let stat_rows: [(&str, Pick); 5] = [
        ("min", |s| s.min),
        ("max", |s| s.max),
        ("mean", |s| s.mean),
        ("stddev", |s| s.stddev),
        ("median", |s| s.median),
    ];
    for (name, pick) in stat_rows {
        out.push_str(&format!(
            "summary_{name},,,{},{},,,{},{},{},{}\n",
            s.succeeded,
            s.trials,
            opt(s.f_l.as_ref().map(pick)),
            opt(s.f_s.as_ref().map(pick)),
            opt(s.f_l_reduced.as_ref().map(pick)),
            opt(s.f_s_reduced.as_ref().map(pick)),
        ));
    }
    out
}

/// Per-trial planner wall times.
pub fn timing_csv(report: &BenchReport) -> String {
    let mut out = String::from("trial,seed,f_t\n");
    for r in &report.rows {
        out.push_str(&format!("{},{},{}\n", r.trial, r.seed, r.f_t));
    }
    out
}
