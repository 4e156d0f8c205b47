//! Multi-goal RRT path planning for cooperative UAV missions.
//!
//! One tree is grown from the shared start until every goal hangs off it as
//! a leaf. Edges are accepted only if they are collision-free against
//! obstacles inflated by the UAV radius and keep the turning angle at their
//! parent within a bound that follows from the quadrotor's thrust limits.
//! Each extracted path is shortened by shortcutting, its corners are
//! replaced with quadratic Bezier curves that stay inside the local obstacle
//! clearance, and speeds are chosen so that all UAVs arrive together.

pub mod bench;
pub mod dynamics;
pub mod environment;
pub mod error;
pub mod geometry;
pub mod mission;
pub mod pipeline;
pub mod planner;
pub mod refine;
pub mod scenario;
pub mod svg;

pub use environment::{Obstacle, Workspace};
pub use geometry::{Point2, Rect, Segment};
pub use pipeline::{run_pipeline, PipelineOptions, ResultFile};
pub use planner::{plan, PlanResult, PlannerConfig};
pub use scenario::ScenarioFile;
