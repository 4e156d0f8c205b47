//! Path post-processing: shortcut-based node reduction and safe-zone
//! quadratic Bezier corner smoothing.

use crate::environment::Workspace;
use crate::error::RefineError;
use crate::geometry::{distance, polyline_length, turning_angle, Point2, Segment, EPS_GEOM};

/// Corners turning less than this (rad) are left sharp; their curve would
/// collapse onto the straight line anyway.
pub const DEGENERATE_CORNER: f64 = 1e-6;

pub const DEFAULT_SAMPLES_PER_CURVE: usize = 20;

/// Ordered waypoints from the start to one goal.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    waypoints: Vec<Point2>,
}

impl Path {
    /// Checks length >= 2, finiteness and distinct consecutive waypoints.
    pub fn new(waypoints: Vec<Point2>) -> Result<Self, RefineError> {
        if waypoints.len() < 2 {
            return Err(RefineError::InvalidPath("need at least two waypoints".into()));
        }
        if let Some(i) = waypoints.iter().position(|p| !p.is_finite()) {
            return Err(RefineError::InvalidPath(format!("waypoint {i} is not finite")));
        }
        if let Some(i) = waypoints
            .windows(2)
            .position(|w| distance(w[0], w[1]) < EPS_GEOM)
        {
            return Err(RefineError::InvalidPath(format!(
                "waypoints {i} and {} coincide",
                i + 1
            )));
        }
        Ok(Self { waypoints })
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn into_waypoints(self) -> Vec<Point2> {
        self.waypoints
    }

    pub fn start(&self) -> Point2 {
        self.waypoints[0]
    }

    pub fn goal(&self) -> Point2 {
        self.waypoints[self.waypoints.len() - 1]
    }

    pub fn length(&self) -> f64 {
        polyline_length(&self.waypoints)
    }

    /// Every segment collision-free and every interior turn within `gamma_max`.
    pub fn check_feasible(&self, ws: &Workspace, gamma_max: f64) -> Result<(), RefineError> {
        for (i, w) in self.waypoints.windows(2).enumerate() {
            if !ws.segment_free(&Segment::raw(w[0], w[1])) {
                return Err(RefineError::InvalidPath(format!("segment {i} is in collision")));
            }
        }
        for (i, w) in self.waypoints.windows(3).enumerate() {
            let a = turning_angle(w[0], w[1], w[2])?;
            if a > gamma_max {
                return Err(RefineError::InvalidPath(format!(
                    "turn at waypoint {} is {a} rad, above {gamma_max}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// Lazily evaluated shortcut feasibility over waypoint pairs.
struct Shortcuts<'a> {
    ws: &'a Workspace,
    pts: &'a [Point2],
    free: Vec<Option<bool>>,
}

impl Shortcuts<'_> {
    fn free(&mut self, a: usize, b: usize) -> bool {
        let n = self.pts.len();
        let (ws, pts) = (self.ws, self.pts);
        *self.free[a * n + b]
            .get_or_insert_with(|| ws.segment_free(&Segment::raw(pts[a], pts[b])))
    }
}

/// Cost of a partial reduced path: length first, then waypoint count.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
struct Cost(f64, usize);

/// Shortcutting: replaces the path by its shortest order-preserving
/// subsequence (both endpoints kept) whose segments are collision-free and
/// whose turns all stay within `gamma_max`. Among equally long candidates
/// the one with the fewest waypoints wins.
///
/// The search runs over states "last segment = (i, j)", so the turn at `j`
/// is checked against its actual outgoing segment when the next waypoint is
/// chosen; a long jump that would strand the tail is simply never extended.
/// The input itself is a candidate, so the result is never longer than it.
pub fn reduce_nodes(ws: &Workspace, path: &Path, gamma_max: f64) -> Result<Path, RefineError> {
    path.check_feasible(ws, gamma_max)?;
    let pts = path.waypoints();
    let n = pts.len();
    let last = n - 1;
    let mut sc = Shortcuts {
        ws,
        pts,
        free: vec![None; n * n],
    };
    // best[i * n + j]: cheapest reduced prefix ending with segment i -> j,
    // and the waypoint preceding i on it.
    let mut best: Vec<Option<(Cost, usize)>> = vec![None; n * n];
    for j in 1..n {
        if sc.free(0, j) {
            best[j] = Some((Cost(distance(pts[0], pts[j]), 2), usize::MAX));
        }
    }
    for j in 1..last {
        for i in 0..j {
            let Some((Cost(len, count), _)) = best[i * n + j] else {
                continue;
            };
            for k in j + 1..n {
                let turn_ok = turning_angle(pts[i], pts[j], pts[k]).is_ok_and(|a| a <= gamma_max);
                if !turn_ok || !sc.free(j, k) {
                    continue;
                }
                let cand = Cost(len + distance(pts[j], pts[k]), count + 1);
                let slot = &mut best[j * n + k];
                if slot.is_none_or(|(c, _)| cand < c) {
                    *slot = Some((cand, i));
                }
            }
        }
    }
    let (mut i, _) = (0..last)
        .filter_map(|i| best[i * n + last].map(|(c, _)| (i, c)))
        .fold(None::<(usize, Cost)>, |acc, (i, c)| match acc {
            Some((_, b)) if b <= c => acc,
            _ => Some((i, c)),
        })
        .ok_or(RefineError::NoProgress)?;
    let mut order = vec![last];
    let mut j = last;
    while i != usize::MAX {
        order.push(i);
        let (_, prev) = best[i * n + j].expect("visited state");
        j = i;
        i = prev;
    }
    order.reverse();
    let reduced = Path::new(order.into_iter().map(|i| pts[i]).collect())?;
    debug_assert!(reduced.check_feasible(ws, gamma_max).is_ok());
    Ok(reduced)
}

/// Quadratic Bezier replacing the corner at `corner`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerCurve {
    /// Index of the corner in the source path.
    pub index: usize,
    /// Control point at the corner itself.
    pub corner: Point2,
    /// Start of the curve, on the incoming segment.
    pub entry: Point2,
    /// End of the curve, on the outgoing segment.
    pub exit: Point2,
    /// Clearance of the corner.
    pub safe_radius: f64,
    /// Distance from the corner to `entry` and `exit`.
    pub clip: f64,
}

impl CornerCurve {
    /// Turning angle of the polyline at the corner.
    pub fn corner_angle(&self) -> f64 {
        turning_angle(self.entry, self.corner, self.exit).unwrap_or(0.0)
    }

    /// Derivative with respect to the curve parameter.
    pub fn tangent(&self, tau: f64) -> Point2 {
        (self.corner - self.entry) * (2.0 * (1.0 - tau)) + (self.exit - self.corner) * (2.0 * tau)
    }
}

/// Builds the corner curve at `corner`: its control points sit on the two
/// incident segments at the safe-zone radius, clipped to half of each
/// segment so neighbouring curves never overlap.
pub fn build_corner(
    ws: &Workspace,
    prev: Point2,
    corner: Point2,
    next: Point2,
) -> Result<CornerCurve, RefineError> {
    let to_prev = (prev - corner).normalized().ok_or(crate::error::GeometryError::DegenerateSegment)?;
    let to_next = (next - corner).normalized().ok_or(crate::error::GeometryError::DegenerateSegment)?;
    let safe_radius = ws.clearance(corner)?;
    let clip = safe_radius
        .min(0.5 * distance(prev, corner))
        .min(0.5 * distance(corner, next));
    Ok(CornerCurve {
        index: 0,
        corner,
        entry: corner + to_prev * clip,
        exit: corner + to_next * clip,
        safe_radius,
        clip,
    })
}

/// `(1-t)^2 entry + 2(1-t)t corner + t^2 exit`.
pub fn bezier_eval(curve: &CornerCurve, tau: f64) -> Result<Point2, RefineError> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(RefineError::OutOfRange(tau));
    }
    let s = 1.0 - tau;
    Ok(curve.entry * (s * s) + curve.corner * (2.0 * s * tau) + curve.exit * (tau * tau))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedPath {
    pub source: Path,
    /// One curve per non-degenerate interior corner, in path order.
    pub curves: Vec<CornerCurve>,
    /// Discretized path from start to goal.
    pub samples: Vec<Point2>,
    pub arc_length: f64,
}

/// Replaces each interior corner with a safe-zone Bezier curve sampled at
/// `samples_per_curve` uniform parameter values; curves are joined by the
/// remaining pieces of the original segments.
pub fn smooth(
    ws: &Workspace,
    path: &Path,
    samples_per_curve: usize,
) -> Result<SmoothedPath, RefineError> {
    if samples_per_curve < 2 {
        return Err(RefineError::TooFewSamples(samples_per_curve));
    }
    let pts = path.waypoints();
    let mut curves = Vec::new();
    let mut samples = vec![pts[0]];
    let push = |q: Point2, samples: &mut Vec<Point2>| {
        if distance(*samples.last().unwrap(), q) >= EPS_GEOM {
            samples.push(q);
        }
    };
    for k in 1..pts.len() - 1 {
        if turning_angle(pts[k - 1], pts[k], pts[k + 1])? < DEGENERATE_CORNER {
            push(pts[k], &mut samples);
            continue;
        }
        let mut curve = build_corner(ws, pts[k - 1], pts[k], pts[k + 1])?;
        curve.index = k;
        let last = (samples_per_curve - 1) as f64;
        for i in 0..samples_per_curve {
            push(bezier_eval(&curve, i as f64 / last)?, &mut samples);
        }
        curves.push(curve);
    }
    push(path.goal(), &mut samples);
    let arc_length = polyline_length(&samples);
    Ok(SmoothedPath {
        source: path.clone(),
        curves,
        samples,
        arc_length,
    })
}
