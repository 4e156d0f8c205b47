//! Cooperative layer: simultaneous-arrival speeds, altitude separation and
//! the path-quality metrics.

use serde::{Deserialize, Serialize};

use crate::error::MissionError;
use crate::geometry::{polyline_length, turning_angle, Point2};
use crate::planner::PlanResult;

/// Speeds proportional to path length so every UAV arrives at the same
/// time. The longest path is flown at `v_max`. Returns `(speeds, T)`.
pub fn assign_velocities(lengths: &[f64], v_max: f64) -> Result<(Vec<f64>, f64), MissionError> {
    if lengths.is_empty() {
        return Err(MissionError::EmptyInput);
    }
    if !(v_max.is_finite() && v_max > 0.0) {
        return Err(MissionError::InvalidInput(format!("v_max must be > 0, got {v_max}")));
    }
    if let Some(l) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(MissionError::InvalidInput(format!("path length must be > 0, got {l}")));
    }
    let longest = lengths.iter().copied().fold(0.0, f64::max);
    let speeds = lengths.iter().map(|l| v_max * (l / longest)).collect();
    Ok((speeds, longest / v_max))
}

/// `base, base + step, ...` for `n` UAVs.
pub fn assign_altitudes(n: usize, base: f64, step: f64) -> Vec<f64> {
    (0..n).map(|i| base + i as f64 * step).collect()
}

/// Mean polyline length (F_L).
pub fn path_length_metric<P: AsRef<[Point2]>>(paths: &[P]) -> Result<f64, MissionError> {
    if paths.is_empty() {
        return Err(MissionError::EmptyInput);
    }
    let total: f64 = paths.iter().map(|p| polyline_length(p.as_ref())).sum();
    Ok(total / paths.len() as f64)
}

/// Mean interior turning angle per path, averaged over paths (F_S). Paths
/// with fewer than three points have no turns and are left out of the
/// average; if none remain the score is 0.
pub fn smooth_score_metric<P: AsRef<[Point2]>>(paths: &[P]) -> Result<f64, MissionError> {
    if paths.is_empty() {
        return Err(MissionError::EmptyInput);
    }
    let per_path: Vec<f64> = paths
        .iter()
        .map(AsRef::as_ref)
        .filter(|p| p.len() >= 3)
        .map(|p| {
            let sum: f64 = p
                .windows(3)
                .map(|w| turning_angle(w[0], w[1], w[2]).unwrap_or(0.0))
                .sum();
            sum / (p.len() - 2) as f64
        })
        .collect();
    if per_path.is_empty() {
        return Ok(0.0);
    }
    Ok(per_path.iter().sum::<f64>() / per_path.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Mean path length (m).
    pub f_l: f64,
    /// Smoothness score (rad).
    pub f_s: f64,
    /// Planning wall time (s).
    pub f_t: f64,
}

/// Metrics over `final_paths`; requires every goal of `result` reached.
pub fn compute_metrics<P: AsRef<[Point2]>>(
    result: &PlanResult,
    final_paths: &[P],
) -> Result<Metrics, MissionError> {
    let unreached = result.goals.len() - result.reached_count();
    if unreached > 0 {
        return Err(MissionError::IncompletePlan { unreached });
    }
    Ok(Metrics {
        f_l: path_length_metric(final_paths)?,
        f_s: smooth_score_metric(final_paths)?,
        f_t: result.wall_time,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UavAssignment {
    pub path: Vec<Point2>,
    pub length: f64,
    pub speed: f64,
    pub altitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionPlan {
    pub uavs: Vec<UavAssignment>,
    pub arrival_time: f64,
}

impl MissionPlan {
    /// Assigns speeds and altitudes to a set of final paths.
    pub fn new(
        paths: Vec<Vec<Point2>>,
        v_max: f64,
        altitude_base: f64,
        altitude_step: f64,
    ) -> Result<Self, MissionError> {
        if !(altitude_step > 0.0) {
            return Err(MissionError::InvalidInput("altitude step must be > 0".into()));
        }
        let lengths: Vec<f64> = paths.iter().map(|p| polyline_length(p)).collect();
        let (speeds, arrival_time) = assign_velocities(&lengths, v_max)?;
        let altitudes = assign_altitudes(paths.len(), altitude_base, altitude_step);
        let uavs = paths
            .into_iter()
            .zip(lengths)
            .zip(speeds.into_iter().zip(altitudes))
            .map(|((path, length), (speed, altitude))| UavAssignment {
                path,
                length,
                speed,
                altitude,
            })
            .collect();
        Ok(Self { uavs, arrival_time })
    }

    /// Largest relative deviation of `L_i / v_i` from the shared arrival time.
    pub fn arrival_spread(&self) -> f64 {
        self.uavs
            .iter()
            .map(|u| (u.length / u.speed - self.arrival_time).abs() / self.arrival_time)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use proptest::prelude::*;

    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn velocity_examples() {
        let (v, t) = assign_velocities(&[100., 200.], 8.).unwrap();
        assert_eq!(v, vec![4., 8.]);
        assert_eq!(t, 25.);
        let (v, t) = assign_velocities(&[150.], 8.).unwrap();
        assert_eq!(v, vec![8.]);
        assert_eq!(t, 18.75);
        let (v, _) = assign_velocities(&[42., 42., 42.], 8.).unwrap();
        assert!(v.iter().all(|&s| s == 8.));
        assert_eq!(assign_velocities(&[], 8.), Err(MissionError::EmptyInput));
        assert!(assign_velocities(&[0.], 8.).is_err());
    }

    #[test]
    fn altitude_examples() {
        assert_eq!(assign_altitudes(3, 5., 5.), vec![5., 10., 15.]);
        assert_eq!(assign_altitudes(1, 7., 5.), vec![7.]);
        let h = assign_altitudes(10, 5., 5.);
        assert_eq!(h.len(), 10);
        assert!(h.windows(2).all(|w| w[1] - w[0] == 5.));
    }

    #[test]
    fn length_metric_examples() {
        assert_eq!(path_length_metric(&[vec![p(0., 0.), p(3., 4.)]]).unwrap(), 5.);
        let two = [vec![p(0., 0.), p(10., 0.)], vec![p(0., 0.), p(0., 20.)]];
        assert_eq!(path_length_metric(&two).unwrap(), 15.);
        let col = [vec![p(0., 0.), p(4., 0.), p(10., 0.)]];
        assert_eq!(path_length_metric(&col).unwrap(), 10.);
        assert_eq!(
            path_length_metric::<Vec<Point2>>(&[]),
            Err(MissionError::EmptyInput)
        );
    }

    #[test]
    fn smooth_metric_examples() {
        let col = [vec![p(0., 0.), p(4., 0.), p(10., 0.)]];
        assert_eq!(smooth_score_metric(&col).unwrap(), 0.);
        let corner = [vec![p(0., 0.), p(4., 0.), p(4., 4.)]];
        assert!((smooth_score_metric(&corner).unwrap() - FRAC_PI_2).abs() < 1e-12);
        // per-path means pi/2 and pi/4 (one 90 degree and one straight turn)
        let mixed = [
            vec![p(0., 0.), p(4., 0.), p(4., 4.)],
            vec![p(0., 0.), p(4., 0.), p(8., 0.), p(8., 4.)],
        ];
        let expected = (FRAC_PI_2 + FRAC_PI_2 / 2.) / 2.;
        assert!((smooth_score_metric(&mixed).unwrap() - expected).abs() < 1e-12);
        // two-point paths don't count toward the denominator
        let with_line = [vec![p(0., 0.), p(4., 0.), p(4., 4.)], vec![p(0., 0.), p(1., 1.)]];
        assert!((smooth_score_metric(&with_line).unwrap() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn mission_plan_invariants() {
        let plan = MissionPlan::new(
            vec![
                vec![p(0., 0.), p(30., 40.)],
                vec![p(0., 0.), p(60., 80.), p(60., 100.)],
                vec![p(0., 0.), p(1., 0.)],
            ],
            8.,
            5.,
            5.,
        )
        .unwrap();
        assert!(plan.arrival_spread() <= 1e-9);
        assert_eq!(plan.uavs[1].speed, 8.);
        let hs: Vec<f64> = plan.uavs.iter().map(|u| u.altitude).collect();
        assert_eq!(hs, vec![5., 10., 15.]);
        assert!(plan.uavs.iter().all(|u| u.speed > 0. && u.speed <= 8.));
    }

    proptest! {
        #[test]
        fn simultaneous_arrival(lengths in proptest::collection::vec(1e-3..1e5f64, 1..20), v in 0.1..50.0f64) {
            let (speeds, t) = assign_velocities(&lengths, v).unwrap();
            for (l, s) in lengths.iter().zip(&speeds) {
                prop_assert!(((l / s) - t).abs() / t <= 1e-9);
                prop_assert!(*s > 0.0 && *s <= v);
            }
            let doubled: Vec<f64> = lengths.iter().map(|l| 2.0 * l).collect();
            let (s2, t2) = assign_velocities(&doubled, v).unwrap();
            prop_assert!((t2 - 2.0 * t).abs() <= 1e-12 * t2);
            for (a, b) in speeds.iter().zip(&s2) {
                prop_assert!((a - b).abs() <= 1e-12 * v);
            }
        }
    }
}
