//! Scenario files: JSON description of a planning problem.
//!
//! ```json
//! {
//!   "version": 1,
//!   "bounds": { "min": [0, 0], "max": [1000, 1000] },
//!   "start": [50, 50],
//!   "goals": [[900, 900], [950, 100]],
//!   "obstacles": [
//!     { "type": "circle", "center": [400, 400], "radius": 60 },
//!     { "type": "rect", "min": [600, 200], "max": [700, 450] }
//!   ],
//!   "uav": { "mass": 1.5, "uav_radius": 0.5 },
//!   "planner": { "step": 50, "max_iterations": 5000, "gamma_max_deg": 75, "seed": 42 },
//!   "smoothing": { "samples_per_curve": 20 },
//!   "mission": { "altitude_base": 5, "altitude_step": 5 }
//! }
//! ```
//!
//! `uav`, `planner`, `smoothing` and `mission` are optional and fall back to
//! their defaults field by field. Angles are in degrees.

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::UavParams;
use crate::environment::{Obstacle, Workspace};
use crate::geometry::{distance, Point2, Rect, EPS_GEOM};
use crate::planner::PlannerConfig;
use crate::refine::DEFAULT_SAMPLES_PER_CURVE;

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid scenario at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid scenario field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl ScenarioError {
    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerSection {
    pub step: f64,
    pub max_iterations: usize,
    pub gamma_max_deg: f64,
    pub seed: u64,
}

impl Default for PlannerSection {
    fn default() -> Self {
        let cfg = PlannerConfig::default();
        Self {
            step: cfg.step,
            max_iterations: cfg.max_iterations,
            gamma_max_deg: 75.0,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmoothingSection {
    pub samples_per_curve: usize,
}

impl Default for SmoothingSection {
    fn default() -> Self {
        Self {
            samples_per_curve: DEFAULT_SAMPLES_PER_CURVE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MissionSection {
    pub altitude_base: f64,
    pub altitude_step: f64,
}

impl Default for MissionSection {
    fn default() -> Self {
        Self {
            altitude_base: 5.0,
            altitude_step: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub bounds: Rect,
    pub start: Point2,
    pub goals: Vec<Point2>,
    pub obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub uav: UavParams,
    #[serde(default)]
    pub planner: PlannerSection,
    #[serde(default)]
    pub smoothing: SmoothingSection,
    #[serde(default)]
    pub mission: MissionSection,
}

impl ScenarioFile {
    /// Parses and validates a scenario document.
    pub fn parse(json: &str) -> Result<Self, ScenarioError> {
        let de = &mut serde_json::Deserializer::from_str(json);
        let scenario: ScenarioFile =
            serde_path_to_error::deserialize(de).map_err(|e| ScenarioError::Parse {
                path: e.path().to_string(),
                message: e.inner().to_string(),
            })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<FsPath>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.version != SCENARIO_VERSION {
            return Err(ScenarioError::invalid(
                "version",
                format!("expected {SCENARIO_VERSION}, got {}", self.version),
            ));
        }
        self.uav.validate().map_err(|e| match e {
            crate::error::DynamicsError::InvalidParam { field, reason } => {
                ScenarioError::invalid(format!("uav.{field}"), reason)
            }
            other => ScenarioError::invalid("uav", other.to_string()),
        })?;
        let b = self.bounds;
        if !(b.min.is_finite() && b.max.is_finite() && b.min.x < b.max.x && b.min.y < b.max.y) {
            return Err(ScenarioError::invalid(
                "bounds",
                "min must be finite and strictly below max on both axes",
            ));
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            o.validate()
                .map_err(|m| ScenarioError::invalid(format!("obstacles[{i}]"), m))?;
        }
        let ws = self.workspace()?;
        if !ws.point_free(self.start) {
            return Err(ScenarioError::invalid(
                "start",
                "must lie inside the bounds and outside every inflated obstacle",
            ));
        }
        if self.goals.is_empty() {
            return Err(ScenarioError::invalid("goals", "at least one goal is required"));
        }
        for (i, &g) in self.goals.iter().enumerate() {
            let field = format!("goals[{i}]");
            if !ws.point_free(g) {
                return Err(ScenarioError::invalid(
                    field,
                    "must lie inside the bounds and outside every inflated obstacle",
                ));
            }
            if distance(g, self.start) < EPS_GEOM {
                return Err(ScenarioError::invalid(field, "coincides with the start"));
            }
            if let Some(j) = self.goals[..i]
                .iter()
                .position(|&h| distance(g, h) < EPS_GEOM)
            {
                return Err(ScenarioError::invalid(field, format!("duplicates goals[{j}]")));
            }
        }
        let p = &self.planner;
        if !(p.gamma_max_deg > 0.0 && p.gamma_max_deg <= 180.0) {
            return Err(ScenarioError::invalid(
                "planner.gamma_max_deg",
                "must be in (0, 180]",
            ));
        }
        self.planner_config(None)
            .validate()
            .map_err(|m| ScenarioError::invalid("planner", m))?;
        if self.smoothing.samples_per_curve < 2 {
            return Err(ScenarioError::invalid(
                "smoothing.samples_per_curve",
                "must be >= 2",
            ));
        }
        if !(self.mission.altitude_step.is_finite() && self.mission.altitude_step > 0.0) {
            return Err(ScenarioError::invalid("mission.altitude_step", "must be > 0"));
        }
        if !self.mission.altitude_base.is_finite() {
            return Err(ScenarioError::invalid("mission.altitude_base", "must be finite"));
        }
        Ok(())
    }

    /// Workspace with obstacles inflated by the UAV radius.
    pub fn workspace(&self) -> Result<Workspace, ScenarioError> {
        Workspace::new(self.bounds, self.obstacles.clone(), self.uav.uav_radius)
            .map_err(|e| ScenarioError::invalid("bounds", e.to_string()))
    }

    pub fn planner_config(&self, seed_override: Option<u64>) -> PlannerConfig {
        PlannerConfig {
            step: self.planner.step,
            max_iterations: self.planner.max_iterations,
            gamma_max: self.planner.gamma_max_deg.to_radians(),
            rng_seed: seed_override.unwrap_or(self.planner.seed),
        }
    }

    /// Copy keeping only the first `n` goals.
    pub fn with_goal_count(&self, n: usize) -> Self {
        let mut s = self.clone();
        s.goals.truncate(n);
        s
    }
}
