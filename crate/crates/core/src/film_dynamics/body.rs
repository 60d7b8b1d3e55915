use serde::{Deserialize, Serialize};

/// Piecewise-constant torque over time, N·m.
///
/// Overlapping segments add. A segment is active on `[start, end)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorqueProfile {
    pub segments: Vec<TorqueSegment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorqueSegment {
    pub start: f64,
    pub end: f64,
    pub torque: f64,
}

impl TorqueProfile {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(torque: f64, start: f64, end: f64) -> Self {
        Self {
            segments: vec![TorqueSegment { start, end, torque }],
        }
    }

    /// `+peak` for the first half of `duration`, `−peak` for the second.
    ///
    /// Starting from rest this sweeps a relative angle of
    /// `peak · (duration/2)² / I_eff` and ends at rest again.
    pub fn bang_bang(peak: f64, start: f64, duration: f64) -> Self {
        let mid = start + 0.5 * duration;
        Self {
            segments: vec![
                TorqueSegment {
                    start,
                    end: mid,
                    torque: peak,
                },
                TorqueSegment {
                    start: mid,
                    end: start + duration,
                    torque: -peak,
                },
            ],
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        self.segments
            .iter()
            .filter(|s| t >= s.start && t < s.end)
            .map(|s| s.torque)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.segments.iter().all(|s| s.torque == 0.0)
    }

    pub fn negated(&self) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| TorqueSegment {
                    torque: -s.torque,
                    ..*s
                })
                .collect(),
        }
    }
}

/// Free planar rigid body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Body2D {
    pub id: String,
    pub mass: f64,
    /// Moment of inertia about the centre, kg·m².
    pub inertia: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    #[serde(default)]
    pub vx: f64,
    #[serde(default)]
    pub vy: f64,
    #[serde(default)]
    pub omega: f64,
    /// Radius of the contact disc, m.
    pub footprint_radius: f64,
    /// Couple applied from outside the system.
    #[serde(default, skip_serializing_if = "TorqueProfile::is_empty")]
    pub external_torque: TorqueProfile,
}

impl Body2D {
    pub fn new(id: impl Into<String>, mass: f64, inertia: f64, footprint_radius: f64) -> Self {
        Self {
            id: id.into(),
            mass,
            inertia,
            x: 0.0,
            y: 0.0,
            theta: 0.0,
            vx: 0.0,
            vy: 0.0,
            omega: 0.0,
            footprint_radius,
            external_torque: TorqueProfile::zero(),
        }
    }

    pub fn at(mut self, x: f64, y: f64) -> Self {
        self.x = x;
        self.y = y;
        self
    }

    pub fn moving(mut self, vx: f64, vy: f64) -> Self {
        self.vx = vx;
        self.vy = vy;
        self
    }
}

/// One rotating half of a [`JointedModule`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotorHalf {
    pub mass: f64,
    pub inertia: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default)]
    pub omega: f64,
}

/// Two stacked halves sharing one planar translation, coupled by a joint
/// motor that applies `+τ` to the upper half and `−τ` to the lower half.
///
/// Only the lower half touches the floor. In an unpressurized region it is
/// held by a rotational Coulomb torque of magnitude `pin_torque`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointedModule {
    pub id: String,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub vx: f64,
    #[serde(default)]
    pub vy: f64,
    pub upper: RotorHalf,
    pub lower: RotorHalf,
    pub footprint_radius: f64,
    #[serde(default, skip_serializing_if = "TorqueProfile::is_empty")]
    pub joint_torque: TorqueProfile,
    /// Defaults to `μ · m · g · (2/3) · footprint_radius`, the friction
    /// torque of a uniformly loaded disc.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pin_torque: Option<f64>,
}

impl JointedModule {
    pub fn mass(&self) -> f64 {
        self.upper.mass + self.lower.mass
    }

    pub fn joint_angle(&self) -> f64 {
        self.upper.theta - self.lower.theta
    }

    pub fn upper_id(&self) -> String {
        format!("{}/upper", self.id)
    }

    pub fn lower_id(&self) -> String {
        format!("{}/lower", self.id)
    }
}

/// Moment of inertia of a solid cube of side `a` about a face-normal axis.
pub fn cube_inertia(mass: f64, side: f64) -> f64 {
    mass * side * side / 6.0
}

/// Coulomb friction torque of a disc of radius `r` pressed with `normal`.
pub fn disc_friction_torque(mu: f64, normal: f64, r: f64) -> f64 {
    mu * normal * r * 2.0 / 3.0
}
