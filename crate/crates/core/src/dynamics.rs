//! Quadrotor point-mass model and the closed-form turning limits derived
//! from it.
//!
//! The vehicle flies level along its body x-axis at constant speed `v_x`.
//! Holding altitude fixes `f_T cos(phi) cos(theta) = m g`, cancelling drag
//! fixes `f_T cos(phi) sin(theta) = c_f v_x`, and the lateral component
//! `f_T sin(phi)` supplies the centripetal force `m v_x^2 / R`. Eliminating
//! the attitude angles gives
//!
//! ```text
//! R = m v_x^2 / sqrt(f_T^2 - c_f^2 v_x^2 - m^2 g^2)
//! ```
//!
//! and the tightest turn, at full thrust, has curvature `1 / R_min`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;

/// Relative slack within which a squared thrust counts as exactly the
/// level-flight requirement, i.e. zero lateral (turning) force.
const HOVER_LIMIT_RTOL: f64 = 1e-12;

/// Physical parameters of the quadrotor. Defaults are the 3DR Solo values
/// used in the reference experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UavParams {
    /// kg
    pub mass: f64,
    /// m/s^2
    pub gravity: f64,
    /// m/s
    pub forward_speed: f64,
    /// N s^2
    pub thrust_coeff: f64,
    /// N s/m
    pub friction_coeff: f64,
    /// Bounds `c_t * omega^2`; units follow the thrust coefficient.
    pub max_motor_speed: f64,
    /// Obstacle inflation radius (m).
    pub uav_radius: f64,
}

impl Default for UavParams {
    fn default() -> Self {
        Self {
            mass: 1.5,
            gravity: 9.81,
            forward_speed: 8.0,
            thrust_coeff: 2.9e-5,
            friction_coeff: 1.1e-6,
            max_motor_speed: 1000.0,
            uav_radius: 0.5,
        }
    }
}

impl UavParams {
    /// Checks that every field is finite and strictly positive.
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let fields = [
            ("mass", self.mass),
            ("gravity", self.gravity),
            ("forward_speed", self.forward_speed),
            ("thrust_coeff", self.thrust_coeff),
            ("friction_coeff", self.friction_coeff),
            ("max_motor_speed", self.max_motor_speed),
            ("uav_radius", self.uav_radius),
        ];
        for (field, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(DynamicsError::InvalidParam {
                    field,
                    reason: format!("must be finite and > 0, got {value}"),
                });
            }
        }
        Ok(())
    }

    fn drag_force(&self) -> f64 {
        self.friction_coeff * self.forward_speed
    }

    fn weight(&self) -> f64 {
        self.mass * self.gravity
    }

    /// `(c_f v_x)^2 + (m g)^2`: the squared thrust needed just to fly level.
    pub fn level_flight_thrust_sq(&self) -> f64 {
        self.drag_force().powi(2) + self.weight().powi(2)
    }
}

/// Roll, pitch, yaw in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AttitudeState {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

/// Thrust of one propeller, `c_t * omega^2`.
pub fn propeller_thrust(params: &UavParams, omega: f64) -> Result<f64, DynamicsError> {
    if !(0.0..=params.max_motor_speed).contains(&omega) {
        return Err(DynamicsError::OutOfRange {
            omega,
            max: params.max_motor_speed,
        });
    }
    Ok(params.thrust_coeff * omega * omega)
}

/// Total thrust with all four motors at full speed.
pub fn max_total_thrust(params: &UavParams) -> f64 {
    4.0 * params.thrust_coeff * params.max_motor_speed.powi(2)
}

/// Body-to-inertial rotation `R_z(yaw) R_y(pitch) R_x(roll)`.
pub fn rotation_matrix(att: &AttitudeState) -> Matrix3<f64> {
    let (sf, cf) = att.roll.sin_cos();
    let (st, ct) = att.pitch.sin_cos();
    let (sp, cp) = att.yaw.sin_cos();
    #[rustfmt::skip]
    let rz = Matrix3::new(
        cp, -sp, 0.0,
        sp,  cp, 0.0,
        0.0, 0.0, 1.0,
    );
    #[rustfmt::skip]
    let ry = Matrix3::new(
         ct, 0.0, st,
        0.0, 1.0, 0.0,
        -st, 0.0, ct,
    );
    #[rustfmt::skip]
    let rx = Matrix3::new(
        1.0, 0.0, 0.0,
        0.0,  cf, -sf,
        0.0,  sf,  cf,
    );
    rz * ry * rx
}

/// Translational acceleration under thrust, linear drag and gravity.
pub fn linear_acceleration(
    params: &UavParams,
    att: &AttitudeState,
    thrust: f64,
    velocity: &Vector3<f64>,
) -> Vector3<f64> {
    let thrust_body = Vector3::new(0.0, 0.0, thrust);
    let gravity = Vector3::new(0.0, 0.0, params.weight());
    (rotation_matrix(att) * thrust_body - velocity * params.friction_coeff - gravity) / params.mass
}

/// Trim pitch that balances drag in level flight.
pub fn pitch_angle(params: &UavParams) -> f64 {
    (params.drag_force() / params.weight()).atan()
}

/// Turning radius at constant speed and altitude for total thrust `thrust`.
pub fn turning_radius(params: &UavParams, thrust: f64) -> Result<f64, DynamicsError> {
    let thrust_sq = thrust * thrust;
    let required_sq = params.level_flight_thrust_sq();
    let lateral_sq = thrust_sq - required_sq;
    if !(lateral_sq > HOVER_LIMIT_RTOL * required_sq) {
        return Err(DynamicsError::InsufficientThrust {
            thrust_sq,
            required_sq,
        });
    }
    Ok(params.mass * params.forward_speed.powi(2) / lateral_sq.sqrt())
}

/// Maximum turning curvature `1 / R_min` (1/m) at full thrust.
///
/// Returns 0 when full thrust exactly matches the level-flight requirement.
pub fn gamma_max(params: &UavParams) -> Result<f64, DynamicsError> {
    let thrust_sq = max_total_thrust(params).powi(2);
    let required_sq = params.level_flight_thrust_sq();
    let mut lateral_sq = thrust_sq - required_sq;
    if lateral_sq.abs() <= HOVER_LIMIT_RTOL * required_sq {
        lateral_sq = 0.0;
    }
    if lateral_sq < 0.0 {
        return Err(DynamicsError::InsufficientThrust {
            thrust_sq,
            required_sq,
        });
    }
    Ok(lateral_sq.sqrt() / (params.mass * params.forward_speed.powi(2)))
}

/// Reads a curvature value as an angle in radians and converts to degrees.
///
/// The planner's angle bound is configured separately; this conversion is
/// offered for reporting only.
pub fn curvature_as_degrees(curvature: f64) -> f64 {
    curvature.to_degrees()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    use proptest::prelude::*;

    use super::*;

    fn table() -> UavParams {
        UavParams::default()
    }

    #[test]
    fn thrust_examples() {
        let p = table();
        assert_eq!(propeller_thrust(&p, 0.0).unwrap(), 0.0);
        assert!((propeller_thrust(&p, 1000.0).unwrap() - 29.0).abs() < 1e-12);
        assert!((propeller_thrust(&p, 500.0).unwrap() - 7.25).abs() < 1e-12);
        assert!(matches!(
            propeller_thrust(&p, 1000.5),
            Err(DynamicsError::OutOfRange { .. })
        ));
        assert!(propeller_thrust(&p, -1.0).is_err());
    }

    #[test]
    fn max_thrust_examples() {
        let mut p = table();
        assert!((max_total_thrust(&p) - 116.0).abs() < 1e-12);
        let base = max_total_thrust(&p);
        p.max_motor_speed *= 2.0;
        assert!((max_total_thrust(&p) - 4.0 * base).abs() < 1e-9);
        let unit = UavParams {
            thrust_coeff: 1.0,
            max_motor_speed: 1.0,
            ..table()
        };
        assert_eq!(max_total_thrust(&unit), 4.0);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(
            rotation_matrix(&AttitudeState::default()),
            Matrix3::identity()
        );
        let r = rotation_matrix(&AttitudeState {
            yaw: FRAC_PI_2,
            ..Default::default()
        });
        #[rustfmt::skip]
        let expected = Matrix3::new(
            0.0, -1.0, 0.0,
            1.0,  0.0, 0.0,
            0.0,  0.0, 1.0,
        );
        assert!((r - expected).abs().max() < 1e-15);
    }

    #[test]
    fn acceleration_examples() {
        let p = table();
        let att = AttitudeState::default();
        let zero = Vector3::zeros();
        let hover = linear_acceleration(&p, &att, p.mass * p.gravity, &zero);
        assert!(hover.norm() < 1e-12);
        let fall = linear_acceleration(&p, &att, 0.0, &zero);
        assert!((fall - Vector3::new(0.0, 0.0, -9.81)).norm() < 1e-12);
        let up = linear_acceleration(&p, &att, 2.0 * p.mass * p.gravity, &zero);
        assert!((up - Vector3::new(0.0, 0.0, 9.81)).norm() < 1e-12);
    }

    #[test]
    fn drag_opposes_velocity() {
        let p = UavParams {
            friction_coeff: 0.3,
            ..table()
        };
        let a = linear_acceleration(
            &p,
            &AttitudeState::default(),
            p.mass * p.gravity,
            &Vector3::new(2.0, 0.0, 0.0),
        );
        assert!((a.x - (-0.3 * 2.0 / 1.5)).abs() < 1e-12);
    }

    #[test]
    fn pitch_examples() {
        let p = table();
        assert!((pitch_angle(&p) - 5.980292218823617e-7).abs() < 1e-15);
        let frictionless = UavParams {
            friction_coeff: 0.0,
            ..table()
        };
        assert_eq!(pitch_angle(&frictionless), 0.0);
        let balanced = UavParams {
            friction_coeff: p.mass * p.gravity / p.forward_speed,
            ..table()
        };
        assert!((pitch_angle(&balanced) - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn turning_radius_examples() {
        let p = table();
        // oracle: R = m v^2 / sqrt(f^2 - (c_f v)^2 - (m g)^2) evaluated by hand
        let r = turning_radius(&p, 116.0).unwrap();
        assert!((r - 0.8343263372360016).abs() < 1e-12);

        let mv2: f64 = 1.5 * 64.0;
        let f = (p.level_flight_thrust_sq() + mv2 * mv2).sqrt();
        assert!((turning_radius(&p, f).unwrap() - 1.0).abs() < 1e-12);

        let hover = p.level_flight_thrust_sq().sqrt();
        let near = turning_radius(&p, hover * (1.0 + 1e-9)).unwrap();
        assert!(near > 1e3);
        assert!(matches!(
            turning_radius(&p, hover),
            Err(DynamicsError::InsufficientThrust { .. })
        ));
    }

    #[test]
    fn gamma_max_examples() {
        let p = table();
        let g = gamma_max(&p).unwrap();
        assert!((g - 1.198571776258257).abs() < 1e-12);
        assert!((curvature_as_degrees(g) - 68.67310422309653).abs() < 1e-9);

        // full thrust exactly at the level-flight threshold
        let hover = p.level_flight_thrust_sq().sqrt();
        let at_limit = UavParams {
            thrust_coeff: hover / (4.0 * p.max_motor_speed.powi(2)),
            ..p
        };
        assert_eq!(gamma_max(&at_limit).unwrap(), 0.0);

        let weak = UavParams {
            thrust_coeff: 0.9 * at_limit.thrust_coeff,
            ..p
        };
        assert!(matches!(
            gamma_max(&weak),
            Err(DynamicsError::InsufficientThrust { .. })
        ));
    }

    #[test]
    fn gamma_max_monotone_in_motor_speed() {
        let mut last = 0.0;
        for i in 0..200 {
            let p = UavParams {
                max_motor_speed: 400.0 + 10.0 * i as f64,
                ..table()
            };
            let g = gamma_max(&p).unwrap();
            assert!(g > last, "not increasing at step {i}");
            last = g;
        }
    }

    #[test]
    fn validate_rejects_nonpositive() {
        let p = UavParams {
            mass: 0.0,
            ..table()
        };
        assert!(matches!(
            p.validate(),
            Err(DynamicsError::InvalidParam { field: "mass", .. })
        ));
        assert!(table().validate().is_ok());
    }

    proptest! {
        #[test]
        fn rotation_is_orthonormal(
            roll in -3.2..3.2f64, pitch in -3.2..3.2f64, yaw in -3.2..3.2f64,
        ) {
            let r = rotation_matrix(&AttitudeState { roll, pitch, yaw });
            prop_assert!((r.transpose() * r - Matrix3::identity()).abs().max() < 1e-12);
            prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn gamma_is_reciprocal_of_min_radius(
            mass in 0.5..5.0f64, speed in 1.0..20.0f64, omega in 800.0..2000.0f64,
        ) {
            let p = UavParams { mass, forward_speed: speed, max_motor_speed: omega, ..table() };
            prop_assume!(max_total_thrust(&p).powi(2) > 1.01 * p.level_flight_thrust_sq());
            let g = gamma_max(&p).unwrap();
            let r = turning_radius(&p, max_total_thrust(&p)).unwrap();
            prop_assert!((g * r - 1.0).abs() < 1e-12);
        }
    }
}
