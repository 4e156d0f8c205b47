//! Planar primitives: points, segments, axis-aligned rectangles, turning
//! angles and exact segment/primitive proximity predicates.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Length below which vectors and segments are treated as degenerate (meters).
pub const EPS_GEOM: f64 = 1e-9;

/// A point (or free vector) in the plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Unit vector in the same direction, or `None` for near-zero vectors.
    pub fn normalized(self) -> Option<Point2> {
        let n = self.norm();
        (n >= EPS_GEOM).then(|| self * (1.0 / n))
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        self + (other - self) * t
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Euclidean distance.
pub fn distance(a: Point2, b: Point2) -> f64 {
    (b - a).norm()
}

/// A closed line segment. Construction rejects zero-length segments;
/// the proximity predicates below also accept them through [`Segment::raw`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Result<Self, GeometryError> {
        if distance(a, b) < EPS_GEOM {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Self { a, b })
    }

    /// Builds a segment without the length check (points are allowed).
    pub const fn raw(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        distance(self.a, self.b)
    }

    /// Closest point on the segment to `p`.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        let d = self.b - self.a;
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return self.a;
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        self.a + d * t
    }

    pub fn distance_to_point(&self, p: Point2) -> f64 {
        distance(self.closest_point(p), p)
    }

    /// Minimum distance between two segments (0 if they intersect).
    pub fn distance_to_segment(&self, other: &Segment) -> f64 {
        if segments_intersect(self, other) {
            return 0.0;
        }
        self.distance_to_point(other.a)
            .min(self.distance_to_point(other.b))
            .min(other.distance_to_point(self.a))
            .min(other.distance_to_point(self.b))
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(s: &Segment, p: Point2) -> bool {
    p.x >= s.a.x.min(s.b.x)
        && p.x <= s.a.x.max(s.b.x)
        && p.y >= s.a.y.min(s.b.y)
        && p.y <= s.a.y.max(s.b.y)
}

/// Closed-set segment intersection (touching counts).
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(t, s.a))
        || (d2 == 0.0 && on_segment(t, s.b))
        || (d3 == 0.0 && on_segment(s, t.a))
        || (d4 == 0.0 && on_segment(s, t.b))
}

/// Axis-aligned rectangle `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Result<Self, GeometryError> {
        if !(min.is_finite() && max.is_finite()) || min.x > max.x || min.y > max.y {
            return Err(GeometryError::MalformedRect);
        }
        Ok(Self { min, max })
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point2 {
        self.min.lerp(self.max, 0.5)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Distance from `p` to the (filled) rectangle; 0 inside.
    pub fn distance_to_point(&self, p: Point2) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        dx.hypot(dy)
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }

    fn edges(&self) -> [Segment; 4] {
        let c = self.corners();
        [
            Segment::raw(c[0], c[1]),
            Segment::raw(c[1], c[2]),
            Segment::raw(c[2], c[3]),
            Segment::raw(c[3], c[0]),
        ]
    }

    /// Minimum distance from a segment to the filled rectangle (0 on overlap).
    pub fn distance_to_segment(&self, s: &Segment) -> f64 {
        if self.contains(s.a) || self.contains(s.b) {
            return 0.0;
        }
        self.edges()
            .iter()
            .map(|e| e.distance_to_segment(s))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Turning angle at `mid` between `mid - prev` and `next - mid`, in `[0, pi]`.
pub fn turning_angle(prev: Point2, mid: Point2, next: Point2) -> Result<f64, GeometryError> {
    let u = mid - prev;
    let v = next - mid;
    let (nu, nv) = (u.norm(), v.norm());
    if nu < EPS_GEOM || nv < EPS_GEOM {
        return Err(GeometryError::DegenerateSegment);
    }
    Ok((u.dot(v) / (nu * nv)).clamp(-1.0, 1.0).acos())
}

/// True iff the segment comes within `radius` of `center` (tangency is a hit).
pub fn segment_circle_hit(s: &Segment, center: Point2, radius: f64) -> bool {
    s.distance_to_point(center) <= radius
}

/// True iff the segment comes within `inflation` of the rectangle
/// (rounded-rectangle test; touching the inflated boundary is a hit).
pub fn segment_rect_hit(s: &Segment, rect: &Rect, inflation: f64) -> bool {
    rect.distance_to_segment(s) <= inflation
}

/// Polyline length.
pub fn polyline_length(points: &[Point2]) -> f64 {
    points.windows(2).map(|w| distance(w[0], w[1])).sum()
}
