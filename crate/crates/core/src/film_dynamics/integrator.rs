//! Fixed-step semi-implicit Euler integration.
//!
//! Forces and torques are evaluated at the start of the step (time-dependent
//! profiles at the step midpoint), velocities are updated first and the new
//! velocities then advance the positions:
//!
//! ```text
//! v ← v + a·dt
//! x ← x + v·dt
//! ```
//!
//! Internal interactions (joint motors, magnet links) are applied as exactly
//! negated pairs, so they change no total momentum beyond rounding.

use serde::{Deserialize, Serialize};

use super::magnet::link_force;
use super::region::PlatformRegionMap;
use super::state::{Entity, SimState};
use super::{disc_friction_torque, SimError};
use crate::GRAVITY;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsParams {
    #[serde(default = "default_gravity")]
    pub gravity: f64,
    /// Speeds at or below this are held by static friction, m/s.
    #[serde(default = "default_v_stop")]
    pub v_stop: f64,
    /// Angular counterpart of `v_stop`, rad/s.
    #[serde(default = "default_v_stop")]
    pub omega_stop: f64,
}

fn default_gravity() -> f64 {
    GRAVITY
}

fn default_v_stop() -> f64 {
    1e-6
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self {
            gravity: GRAVITY,
            v_stop: default_v_stop(),
            omega_stop: default_v_stop(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interaction {
    Joint { module: usize },
    Magnet { link: usize },
}

/// Forces and couples one internal interaction applies to its two ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionWrench {
    pub source: Interaction,
    pub a: Entity,
    pub b: Entity,
    pub point_a: (f64, f64),
    pub point_b: (f64, f64),
    pub force_a: (f64, f64),
    pub force_b: (f64, f64),
    pub couple_a: f64,
    pub couple_b: f64,
}

impl InteractionWrench {
    pub fn net_force(&self) -> (f64, f64) {
        (
            self.force_a.0 + self.force_b.0,
            self.force_a.1 + self.force_b.1,
        )
    }

    pub fn net_torque_about(&self, o: (f64, f64)) -> f64 {
        let cross = |p: (f64, f64), f: (f64, f64)| (p.0 - o.0) * f.1 - (p.1 - o.1) * f.0;
        cross(self.point_a, self.force_a)
            + cross(self.point_b, self.force_b)
            + self.couple_a
            + self.couple_b
    }
}

/// All internal interactions active at time `t`.
///
/// Joint wrenches put `couple_a` on the upper half and `couple_b` on the
/// lower half of the same module.
pub fn internal_wrenches(state: &SimState, t: f64) -> Result<Vec<InteractionWrench>, SimError> {
    let mut out = Vec::new();
    for (i, m) in state.modules.iter().enumerate() {
        let tau = m.joint_torque.at(t);
        if tau != 0.0 {
            let e = Entity::Module(i);
            let p = (m.x, m.y);
            out.push(InteractionWrench {
                source: Interaction::Joint { module: i },
                a: e,
                b: e,
                point_a: p,
                point_b: p,
                force_a: (0.0, 0.0),
                force_b: (0.0, 0.0),
                couple_a: tau,
                couple_b: -tau,
            });
        }
    }
    for (k, l) in state.links.iter().enumerate() {
        let a = state.resolve(&l.body_a)?;
        let b = state.resolve(&l.body_b)?;
        if let Some(f) = link_force(state, k, a, b)? {
            out.push(InteractionWrench {
                source: Interaction::Magnet { link: k },
                a,
                b,
                point_a: state.position(a),
                point_b: state.position(b),
                force_a: (-f.0, -f.1),
                force_b: f,
                couple_a: 0.0,
                couple_b: 0.0,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
struct Load {
    force: (f64, f64),
    torque: f64,
    torque_lower: f64,
}

/// Velocity update under Coulomb friction of magnitude `friction` (N).
fn coulomb_linear(
    v: (f64, f64),
    force: (f64, f64),
    mass: f64,
    friction: f64,
    dt: f64,
    v_stop: f64,
) -> (f64, f64) {
    let free = (v.0 + force.0 / mass * dt, v.1 + force.1 / mass * dt);
    if !(friction > 0.0) {
        return free;
    }
    let drive = force.0.hypot(force.1);
    let speed = v.0.hypot(v.1);
    if speed > v_stop {
        let u = (v.0 / speed, v.1 / speed);
        let dv = friction / mass * dt;
        let next = (free.0 - dv * u.0, free.1 - dv * u.1);
        if drive <= friction && next.0 * u.0 + next.1 * u.1 <= 0.0 {
            (0.0, 0.0)
        } else {
            next
        }
    } else if drive <= friction {
        (0.0, 0.0)
    } else {
        let excess = (drive - friction) / drive;
        (
            v.0 + force.0 * excess / mass * dt,
            v.1 + force.1 * excess / mass * dt,
        )
    }
}

/// Scalar rotational counterpart of [`coulomb_linear`].
fn coulomb_angular(
    omega: f64,
    torque: f64,
    inertia: f64,
    friction: f64,
    dt: f64,
    omega_stop: f64,
) -> f64 {
    coulomb_linear(
        (omega, 0.0),
        (torque, 0.0),
        inertia,
        friction,
        dt,
        omega_stop,
    )
    .0
}

/// Advances `state` by one step of length `dt`.
pub fn step(
    state: &SimState,
    map: &PlatformRegionMap,
    physics: &PhysicsParams,
    dt: f64,
) -> Result<SimState, SimError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SimError::Invalid(format!("dt must be positive, got {dt}")));
    }
    let t_mid = state.time + 0.5 * dt;
    let g = physics.gravity;

    let mut body_load = vec![Load::default(); state.bodies.len()];
    let mut module_load = vec![Load::default(); state.modules.len()];
    for (load, b) in body_load.iter_mut().zip(&state.bodies) {
        load.torque += b.external_torque.at(t_mid);
    }
    for w in internal_wrenches(state, t_mid)? {
        for (e, f, c, lower) in [
            (w.a, w.force_a, w.couple_a, false),
            (w.b, w.force_b, w.couple_b, true),
        ] {
            let load = match e {
                Entity::Body(i) => &mut body_load[i],
                Entity::Module(i) => &mut module_load[i],
            };
            load.force.0 += f.0;
            load.force.1 += f.1;
            // joint pairs act on one module: `b` is its lower half
            if matches!(w.source, Interaction::Joint { .. }) && lower {
                load.torque_lower += c;
            } else {
                load.torque += c;
            }
        }
    }

    let mut next = state.clone();
    for (b, load) in next.bodies.iter_mut().zip(&body_load) {
        let attrs = map.attrs_at(b.x, b.y);
        let (v, omega) = if attrs.pressurized {
            (
                (
                    b.vx + load.force.0 / b.mass * dt,
                    b.vy + load.force.1 / b.mass * dt,
                ),
                b.omega + load.torque / b.inertia * dt,
            )
        } else {
            let normal = b.mass * g;
            (
                coulomb_linear(
                    (b.vx, b.vy),
                    load.force,
                    b.mass,
                    attrs.mu * normal,
                    dt,
                    physics.v_stop,
                ),
                coulomb_angular(
                    b.omega,
                    load.torque,
                    b.inertia,
                    disc_friction_torque(attrs.mu, normal, b.footprint_radius),
                    dt,
                    physics.omega_stop,
                ),
            )
        };
        b.vx = v.0;
        b.vy = v.1;
        b.omega = omega;
        b.x += b.vx * dt;
        b.y += b.vy * dt;
        b.theta += b.omega * dt;
    }
    for (m, load) in next.modules.iter_mut().zip(&module_load) {
        let attrs = map.attrs_at(m.x, m.y);
        let mass = m.mass();
        m.upper.omega += load.torque / m.upper.inertia * dt;
        let v = if attrs.pressurized {
            m.lower.omega += load.torque_lower / m.lower.inertia * dt;
            (
                m.vx + load.force.0 / mass * dt,
                m.vy + load.force.1 / mass * dt,
            )
        } else {
            let normal = mass * g;
            let pin = m
                .pin_torque
                .unwrap_or_else(|| disc_friction_torque(attrs.mu, normal, m.footprint_radius));
            m.lower.omega = coulomb_angular(
                m.lower.omega,
                load.torque_lower,
                m.lower.inertia,
                pin,
                dt,
                physics.omega_stop,
            );
            coulomb_linear(
                (m.vx, m.vy),
                load.force,
                mass,
                attrs.mu * normal,
                dt,
                physics.v_stop,
            )
        };
        m.vx = v.0;
        m.vy = v.1;
        m.x += m.vx * dt;
        m.y += m.vy * dt;
        m.upper.theta += m.upper.omega * dt;
        m.lower.theta += m.lower.omega * dt;
    }
    next.time = state.time + dt;
    if let Some(id) = next.first_non_finite() {
        return Err(SimError::NonFinite {
            id,
            time: next.time,
        });
    }
    Ok(next)
}
