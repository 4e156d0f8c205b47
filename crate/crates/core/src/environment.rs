//! Workspace model: bounds, inflated obstacles, collision queries, safe-zone
//! radii and uniform sampling.
//!
//! Every obstacle is grown by the UAV radius and the workspace bounds are
//! shrunk by the same amount, so the vehicle can be treated as a point. The
//! free space is open: touching an inflated boundary counts as a collision.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::EnvironmentError;
use crate::geometry::{segment_circle_hit, segment_rect_hit, Point2, Rect, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Obstacle {
    Circle { center: Point2, radius: f64 },
    Rect { min: Point2, max: Point2 },
}

impl Obstacle {
    pub fn validate(&self) -> Result<(), String> {
        match *self {
            Obstacle::Circle { center, radius } => {
                if !center.is_finite() {
                    return Err("circle center must be finite".into());
                }
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(format!("circle radius must be > 0, got {radius}"));
                }
            }
            Obstacle::Rect { min, max } => {
                if !(min.is_finite() && max.is_finite()) {
                    return Err("rect corners must be finite".into());
                }
                if !(min.x < max.x && min.y < max.y) {
                    return Err("rect min must be < max on both axes".into());
                }
            }
        }
        Ok(())
    }

    /// Distance from `p` to the obstacle body: negative inside a circle,
    /// zero inside a rectangle.
    pub fn distance_to_point(&self, p: Point2) -> f64 {
        match *self {
            Obstacle::Circle { center, radius } => (p - center).norm() - radius,
            Obstacle::Rect { min, max } => Rect { min, max }.distance_to_point(p),
        }
    }

    pub fn hits_segment(&self, s: &Segment, inflation: f64) -> bool {
        match *self {
            Obstacle::Circle { center, radius } => segment_circle_hit(s, center, radius + inflation),
            Obstacle::Rect { min, max } => segment_rect_hit(s, &Rect { min, max }, inflation),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Workspace {
    bounds: Rect,
    obstacles: Vec<Obstacle>,
    inflation: f64,
}

impl Workspace {
    pub fn new(
        bounds: Rect,
        obstacles: Vec<Obstacle>,
        inflation: f64,
    ) -> Result<Self, EnvironmentError> {
        let invalid = |m: String| Err(EnvironmentError::InvalidWorkspace(m));
        if !(bounds.min.is_finite() && bounds.max.is_finite())
            || !(bounds.width() > 0.0 && bounds.height() > 0.0)
        {
            return invalid("bounds must have positive width and height".into());
        }
        if !(inflation.is_finite() && inflation >= 0.0) {
            return invalid(format!("inflation must be >= 0, got {inflation}"));
        }
        if 2.0 * inflation >= bounds.width().min(bounds.height()) {
            return invalid("inflation leaves no free space inside the bounds".into());
        }
        for (i, o) in obstacles.iter().enumerate() {
            if let Err(m) = o.validate() {
                return invalid(format!("obstacle {i}: {m}"));
            }
        }
        Ok(Self {
            bounds,
            obstacles,
            inflation,
        })
    }

    pub fn bounds(&self) -> &Rect {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn inflation(&self) -> f64 {
        self.inflation
    }

    /// Distance from `p` to the nearest inflated obstacle or shrunk boundary
    /// edge. Positive in free space, non-positive otherwise.
    pub fn free_distance(&self, p: Point2) -> f64 {
        let b = &self.bounds;
        let walls = [
            p.x - b.min.x,
            b.max.x - p.x,
            p.y - b.min.y,
            b.max.y - p.y,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        self.obstacles
            .iter()
            .map(|o| o.distance_to_point(p))
            .fold(walls, f64::min)
            - self.inflation
    }

    pub fn point_free(&self, p: Point2) -> bool {
        p.is_finite() && self.free_distance(p) > 0.0
    }

    /// Safe-zone radius around `p`.
    pub fn clearance(&self, p: Point2) -> Result<f64, EnvironmentError> {
        let d = self.free_distance(p);
        if !(d > 0.0) {
            return Err(EnvironmentError::PointInCollision { x: p.x, y: p.y });
        }
        Ok(d)
    }

    /// True iff the whole segment lies in the open free space.
    pub fn segment_free(&self, s: &Segment) -> bool {
        if !(self.inside_shrunk_bounds(s.a) && self.inside_shrunk_bounds(s.b)) {
            return false;
        }
        !self
            .obstacles
            .iter()
            .any(|o| o.hits_segment(s, self.inflation))
    }

    fn inside_shrunk_bounds(&self, p: Point2) -> bool {
        let (b, r) = (&self.bounds, self.inflation);
        p.x > b.min.x + r && p.x < b.max.x - r && p.y > b.min.y + r && p.y < b.max.y - r
    }

    /// Uniform sample over the bounds rectangle. Obstacles are not filtered.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        let b = &self.bounds;
        Point2::new(
            rng.random_range(b.min.x..b.max.x),
            rng.random_range(b.min.y..b.max.y),
        )
    }
}
