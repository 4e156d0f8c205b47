//! End-to-end run (plan, reduce, smooth, assign) and the result file it
//! produces.
//!
//! Result files are a pure function of the scenario and seed. Wall-clock
//! measurements live in a separate [`Timing`] record so that re-running a
//! scenario reproduces the result file byte for byte.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{MissionError, PlanError, RefineError};
use crate::geometry::{polyline_length, turning_angle, Point2};
use crate::mission::{assign_altitudes, assign_velocities, path_length_metric, smooth_score_metric};
use crate::planner::{plan, PlanResult};
use crate::refine::{reduce_nodes, smooth, Path};
use crate::scenario::{ScenarioError, ScenarioFile};

pub const RESULT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Mission(#[from] MissionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoalStatus {
    Reached,
    Unreached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalRecord {
    pub index: usize,
    pub goal: Point2,
    pub status: GoalStatus,
    #[serde(default)]
    pub raw_path: Vec<Point2>,
    #[serde(default)]
    pub reduced_path: Vec<Point2>,
    #[serde(default)]
    pub smoothed_path: Vec<Point2>,
    /// m/s, present for reached goals.
    pub speed: Option<f64>,
    /// m
    pub altitude: f64,
}

/// F_L and F_S for one path representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathMetrics {
    pub f_l: f64,
    pub f_s: f64,
}

impl PathMetrics {
    pub fn of<P: AsRef<[Point2]>>(paths: &[P]) -> Result<Self, MissionError> {
        Ok(Self {
            f_l: path_length_metric(paths)?,
            f_s: smooth_score_metric(paths)?,
        })
    }
}

/// Metrics over the reached goals; `None` when nothing was reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub raw: Option<PathMetrics>,
    pub reduced: Option<PathMetrics>,
    pub smoothed: Option<PathMetrics>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub parent: Option<usize>,
    pub position: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub version: u32,
    pub seed: u64,
    pub scenario: ScenarioFile,
    pub iterations_used: usize,
    pub tree_nodes: usize,
    /// Shared arrival time (s) over the reached goals.
    pub arrival_time: Option<f64>,
    pub goals: Vec<GoalRecord>,
    pub metrics: MetricsRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<Vec<TreeEdge>>,
}

impl ResultFile {
    pub fn all_reached(&self) -> bool {
        self.goals.iter().all(|g| g.status == GoalStatus::Reached)
    }

    pub fn reached(&self) -> impl Iterator<Item = &GoalRecord> {
        self.goals.iter().filter(|g| g.status == GoalStatus::Reached)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Recomputes the metrics from the embedded paths.
    pub fn recompute_metrics(&self) -> Result<MetricsRecord, MissionError> {
        metrics_for(
            &self.reached().map(|g| g.raw_path.clone()).collect::<Vec<_>>(),
            &self.reached().map(|g| g.reduced_path.clone()).collect::<Vec<_>>(),
            &self.reached().map(|g| g.smoothed_path.clone()).collect::<Vec<_>>(),
        )
    }

    /// Recomputes metrics and speeds from the embedded paths and compares
    /// them with the stored values. Returns the list of mismatches.
    pub fn audit(&self) -> Result<Vec<String>, MissionError> {
        let mut mismatches = Vec::new();
        let recomputed = self.recompute_metrics()?;
        for (name, stored, fresh) in [
            ("raw", self.metrics.raw, recomputed.raw),
            ("reduced", self.metrics.reduced, recomputed.reduced),
            ("smoothed", self.metrics.smoothed, recomputed.smoothed),
        ] {
            if stored != fresh {
                mismatches.push(format!(
                    "metrics.{name}: stored {stored:?}, recomputed {fresh:?}"
                ));
            }
        }
        let lengths: Vec<f64> = self
            .reached()
            .map(|g| polyline_length(&g.smoothed_path))
            .collect();
        if !lengths.is_empty() {
            let (speeds, t) = assign_velocities(&lengths, self.scenario.uav.forward_speed)?;
            if self.arrival_time != Some(t) {
                mismatches.push(format!(
                    "arrival_time: stored {:?}, recomputed {t}",
                    self.arrival_time
                ));
            }
            for (g, v) in self.reached().zip(speeds) {
                if g.speed != Some(v) {
                    mismatches.push(format!(
                        "goals[{}].speed: stored {:?}, recomputed {v}",
                        g.index, g.speed
                    ));
                }
            }
        }
        Ok(mismatches)
    }
}

fn metrics_for(
    raw: &[Vec<Point2>],
    reduced: &[Vec<Point2>],
    smoothed: &[Vec<Point2>],
) -> Result<MetricsRecord, MissionError> {
    let of = |paths: &[Vec<Point2>]| -> Result<Option<PathMetrics>, MissionError> {
        if paths.is_empty() {
            Ok(None)
        } else {
            PathMetrics::of(paths).map(Some)
        }
    };
    Ok(MetricsRecord {
        raw: of(raw)?,
        reduced: of(reduced)?,
        smoothed: of(smoothed)?,
    })
}

/// Per-goal length and mean turn of a single path.
pub fn per_path_summary(path: &[Point2]) -> (f64, f64) {
    let turns: Vec<f64> = path
        .windows(3)
        .map(|w| turning_angle(w[0], w[1], w[2]).unwrap_or(0.0))
        .collect();
    let mean = if turns.is_empty() {
        0.0
    } else {
        turns.iter().sum::<f64>() / turns.len() as f64
    };
    (polyline_length(path), mean)
}

/// Stage wall times in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    /// Tree expansion time, reported as F_T.
    pub plan: f64,
    pub reduce: f64,
    pub smooth: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub result: ResultFile,
    pub plan: PlanResult,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineOptions {
    pub seed: Option<u64>,
    pub keep_tree: bool,
}

/// Runs the planner, node reduction, smoothing and speed/altitude
/// assignment for one scenario.
pub fn run_pipeline(
    scenario: &ScenarioFile,
    opts: PipelineOptions,
) -> Result<PipelineOutput, PipelineError> {
    let total = Instant::now();
    scenario.validate()?;
    let ws = scenario.workspace()?;
    let cfg = scenario.planner_config(opts.seed);
    let plan_result = plan(&ws, scenario.start, &scenario.goals, &cfg)?;

    let mut raw = Vec::new();
    let mut reduced = Vec::new();
    let mut smoothed = Vec::new();
    let mut reduce_time = 0.0;
    let mut smooth_time = 0.0;
    for outcome in &plan_result.goals {
        let Some(path) = &outcome.path else {
            raw.push(None);
            reduced.push(None);
            smoothed.push(None);
            continue;
        };
        let path = Path::new(path.clone())?;
        let clock = Instant::now();
        let short = reduce_nodes(&ws, &path, cfg.gamma_max)?;
        reduce_time += clock.elapsed().as_secs_f64();
        let clock = Instant::now();
        let smooth_path = smooth(&ws, &short, scenario.smoothing.samples_per_curve)?;
        smooth_time += clock.elapsed().as_secs_f64();
        raw.push(Some(path.into_waypoints()));
        reduced.push(Some(short.into_waypoints()));
        smoothed.push(Some(smooth_path.samples));
    }

    let reached_smoothed: Vec<Vec<Point2>> = smoothed.iter().flatten().cloned().collect();
    let lengths: Vec<f64> = reached_smoothed.iter().map(|p| polyline_length(p)).collect();
    let (speeds, arrival_time) = if lengths.is_empty() {
        (Vec::new(), None)
    } else {
        let (v, t) = assign_velocities(&lengths, scenario.uav.forward_speed)?;
        (v, Some(t))
    };
    let altitudes = assign_altitudes(
        scenario.goals.len(),
        scenario.mission.altitude_base,
        scenario.mission.altitude_step,
    );

    let mut speeds = speeds.into_iter();
    let goals = plan_result
        .goals
        .iter()
        .enumerate()
        .map(|(index, outcome)| {
            let reached = outcome.reached();
            GoalRecord {
                index,
                goal: outcome.goal,
                status: if reached {
                    GoalStatus::Reached
                } else {
                    GoalStatus::Unreached
                },
                raw_path: raw[index].clone().unwrap_or_default(),
                reduced_path: reduced[index].clone().unwrap_or_default(),
                smoothed_path: smoothed[index].clone().unwrap_or_default(),
                speed: if reached { speeds.next() } else { None },
                altitude: altitudes[index],
            }
        })
        .collect();

    let metrics = metrics_for(
        &raw.iter().flatten().cloned().collect::<Vec<_>>(),
        &reduced.iter().flatten().cloned().collect::<Vec<_>>(),
        &reached_smoothed,
    )?;

    let tree = opts.keep_tree.then(|| {
        plan_result
            .tree
            .nodes()
            .iter()
            .map(|n| TreeEdge {
                parent: n.parent,
                position: n.position,
            })
            .collect()
    });

    let result = ResultFile {
        version: RESULT_VERSION,
        seed: cfg.rng_seed,
        scenario: scenario.clone(),
        iterations_used: plan_result.iterations_used,
        tree_nodes: plan_result.tree.len(),
        arrival_time,
        goals,
        metrics,
        tree,
    };
    let timing = Timing {
        plan: plan_result.wall_time,
        reduce: reduce_time,
        smooth: smooth_time,
        total: total.elapsed().as_secs_f64(),
    };
    Ok(PipelineOutput {
        result,
        plan: plan_result,
        timing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario() -> ScenarioFile {
        ScenarioFile::parse(
            r#"{
                "version": 1,
                "bounds": {"min": [0, 0], "max": [600, 600]},
                "start": [30, 30],
                "goals": [[550, 550], [560, 60], [60, 540]],
                "obstacles": [
                    {"type": "circle", "center": [300, 300], "radius": 80},
                    {"type": "rect", "min": [380, 80], "max": [420, 260]}
                ],
                "planner": {"seed": 3}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn pipeline_is_deterministic_and_self_consistent() {
        let s = scenario();
        let a = run_pipeline(&s, PipelineOptions::default()).unwrap();
        let b = run_pipeline(&s, PipelineOptions::default()).unwrap();
        assert_eq!(a.result.to_json(), b.result.to_json());
        assert!(a.result.all_reached());
        assert!(a.result.audit().unwrap().is_empty());
        let parsed = ResultFile::from_json(&a.result.to_json()).unwrap();
        assert_eq!(parsed, a.result);
        assert!(parsed.audit().unwrap().is_empty());
    }

    #[test]
    fn seed_override_wins() {
        let s = scenario();
        let out = run_pipeline(
            &s,
            PipelineOptions {
                seed: Some(77),
                keep_tree: true,
            },
        )
        .unwrap();
        assert_eq!(out.result.seed, 77);
        assert_eq!(out.result.tree.as_ref().unwrap().len(), out.result.tree_nodes);
    }

    #[test]
    fn audit_detects_tampering() {
        let mut r = run_pipeline(&scenario(), PipelineOptions::default())
            .unwrap()
            .result;
        r.goals[0].smoothed_path[1].x += 1.0;
        assert!(!r.audit().unwrap().is_empty());
    }
}
