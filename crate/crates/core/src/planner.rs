//! Multi-goal RRT with a turning-angle gate.
//!
//! A single tree rooted at the start is grown toward uniform samples. A new
//! node is accepted only if its edge is collision-free and the turn it
//! creates at its parent stays within the angle bound. After every insertion
//! each unreached goal is tried as a direct leaf of the new node; the first
//! successful connection fixes that goal's path.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::environment::Workspace;
use crate::error::{GeometryError, PlanError};
use crate::geometry::{distance, turning_angle, Point2, Segment, EPS_GEOM};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub position: Point2,
    pub parent: Option<NodeId>,
    /// Unit direction parent -> this node; `None` only at the root.
    pub incoming_heading: Option<Point2>,
    /// Index of the goal this node represents, if it is a goal leaf.
    pub goal: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn new(root: Point2) -> Self {
        Self {
            nodes: vec![TreeNode {
                position: root,
                parent: None,
                incoming_heading: None,
                goal: None,
            }],
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn position(&self, id: NodeId) -> Point2 {
        self.nodes[id].position
    }

    fn push(&mut self, parent: NodeId, position: Point2, goal: Option<usize>) -> NodeId {
        let from = self.nodes[parent].position;
        self.nodes.push(TreeNode {
            position,
            parent: Some(parent),
            incoming_heading: (position - from).normalized(),
            goal,
        });
        self.nodes.len() - 1
    }

    /// Positions from the root to `id`.
    pub fn path_to(&self, id: NodeId) -> Vec<Point2> {
        let mut path = Vec::new();
        let mut cur = Some(id);
        while let Some(i) = cur {
            path.push(self.nodes[i].position);
            cur = self.nodes[i].parent;
        }
        path.reverse();
        path
    }
}

/// Closest expandable node to `p` (goal leaves excluded). Ties go to the
/// earliest-inserted node.
pub fn nearest(tree: &Tree, p: Point2) -> NodeId {
    let mut best = 0;
    let mut best_d2 = f64::INFINITY;
    for (i, n) in tree.nodes.iter().enumerate() {
        if n.goal.is_some() {
            continue;
        }
        let d = n.position - p;
        let d2 = d.dot(d);
        if d2 < best_d2 {
            best_d2 = d2;
            best = i;
        }
    }
    best
}

/// Moves from `near` toward `rand` by at most `step`.
pub fn steer(near: Point2, rand: Point2, step: f64) -> Result<Point2, GeometryError> {
    let d = rand - near;
    let len = d.norm();
    if len < EPS_GEOM {
        return Err(GeometryError::DegenerateSegment);
    }
    if len <= step {
        Ok(rand)
    } else {
        Ok(near + d * (step / len))
    }
}

/// Whether extending node `at` to `next` respects the turning bound at `at`.
pub fn angle_admissible(
    tree: &Tree,
    at: NodeId,
    next: Point2,
    gamma_max: f64,
) -> Result<bool, GeometryError> {
    let node = tree.node(at);
    if distance(node.position, next) < EPS_GEOM {
        return Err(GeometryError::DegenerateSegment);
    }
    match node.parent {
        None => Ok(true),
        Some(parent) => {
            Ok(turning_angle(tree.position(parent), node.position, next)? <= gamma_max)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    /// Expansion step (m).
    pub step: f64,
    pub max_iterations: usize,
    /// Turning bound (rad).
    pub gamma_max: f64,
    pub rng_seed: u64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            step: 50.0,
            max_iterations: 5000,
            gamma_max: 75f64.to_radians(),
            rng_seed: 0,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(format!("step must be > 0, got {}", self.step));
        }
        if self.max_iterations == 0 {
            return Err("max_iterations must be > 0".into());
        }
        if !(self.gamma_max > 0.0 && self.gamma_max <= std::f64::consts::PI) {
            return Err(format!("gamma_max must be in (0, pi], got {}", self.gamma_max));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalOutcome {
    pub goal: Point2,
    /// Raw tree path from the start to the goal; `None` if unreached.
    pub path: Option<Vec<Point2>>,
}

impl GoalOutcome {
    pub fn reached(&self) -> bool {
        self.path.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub goals: Vec<GoalOutcome>,
    pub iterations_used: usize,
    /// Seconds.
    pub wall_time: f64,
    pub tree: Tree,
}

impl PlanResult {
    pub fn all_reached(&self) -> bool {
        self.goals.iter().all(GoalOutcome::reached)
    }

    pub fn reached_count(&self) -> usize {
        self.goals.iter().filter(|g| g.reached()).count()
    }

    /// Equality on everything except the wall clock.
    pub fn same_outcome(&self, other: &PlanResult) -> bool {
        self.goals == other.goals
            && self.iterations_used == other.iterations_used
            && self.tree == other.tree
    }
}

fn validate_inputs(
    ws: &Workspace,
    start: Point2,
    goals: &[Point2],
    cfg: &PlannerConfig,
) -> Result<(), PlanError> {
    let invalid = |m: String| Err(PlanError::InvalidScenario(m));
    cfg.validate().or_else(|m| invalid(format!("planner: {m}")))?;
    if goals.is_empty() {
        return invalid("at least one goal is required".into());
    }
    if !ws.point_free(start) {
        return invalid(format!("start ({}, {}) is not in free space", start.x, start.y));
    }
    for (i, &g) in goals.iter().enumerate() {
        if !ws.point_free(g) {
            return invalid(format!("goals[{i}] ({}, {}) is not in free space", g.x, g.y));
        }
        if distance(g, start) < EPS_GEOM {
            return invalid(format!("goals[{i}] coincides with the start"));
        }
        if let Some(j) = goals[..i].iter().position(|&h| distance(g, h) < EPS_GEOM) {
            return invalid(format!("goals[{i}] duplicates goals[{j}]"));
        }
    }
    Ok(())
}

/// Runs the multi-goal expansion until every goal is attached or the
/// iteration budget (one sample per iteration) is spent.
pub fn plan(
    ws: &Workspace,
    start: Point2,
    goals: &[Point2],
    cfg: &PlannerConfig,
) -> Result<PlanResult, PlanError> {
    validate_inputs(ws, start, goals, cfg)?;
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut tree = Tree::new(start);
    let mut paths: Vec<Option<Vec<Point2>>> = vec![None; goals.len()];
    let mut remaining = goals.len();

    // the root counts as the first insertion
    remaining -= connect_goals(ws, &mut tree, 0, goals, &mut paths, cfg.gamma_max)?;

    let mut iterations = 0;
    while remaining > 0 && iterations < cfg.max_iterations {
        iterations += 1;
        let sample = ws.sample_uniform(&mut rng);
        let near = nearest(&tree, sample);
        let near_pos = tree.position(near);
        if distance(near_pos, sample) < EPS_GEOM {
            continue;
        }
        let new_pos = steer(near_pos, sample, cfg.step)?;
        if !ws.segment_free(&Segment::raw(near_pos, new_pos))
            || !angle_admissible(&tree, near, new_pos, cfg.gamma_max)?
        {
            continue;
        }
        let new_id = tree.push(near, new_pos, None);
        remaining -= connect_goals(ws, &mut tree, new_id, goals, &mut paths, cfg.gamma_max)?;
    }

    Ok(PlanResult {
        goals: goals
            .iter()
            .zip(paths)
            .map(|(&goal, path)| GoalOutcome { goal, path })
            .collect(),
        iterations_used: iterations,
        wall_time: clock.elapsed().as_secs_f64(),
        tree,
    })
}

/// Tries to attach every unreached goal as a leaf of `from`. Returns how
/// many were attached.
fn connect_goals(
    ws: &Workspace,
    tree: &mut Tree,
    from: NodeId,
    goals: &[Point2],
    paths: &mut [Option<Vec<Point2>>],
    gamma_max: f64,
) -> Result<usize, GeometryError> {
    let from_pos = tree.position(from);
    let mut attached = 0;
    for (i, &goal) in goals.iter().enumerate() {
        if paths[i].is_some() || distance(from_pos, goal) < EPS_GEOM {
            continue;
        }
        if ws.segment_free(&Segment::raw(from_pos, goal))
            && angle_admissible(tree, from, goal, gamma_max)?
        {
            let id = tree.push(from, goal, Some(i));
            paths[i] = Some(tree.path_to(id));
            attached += 1;
        }
    }
    Ok(attached)
}
