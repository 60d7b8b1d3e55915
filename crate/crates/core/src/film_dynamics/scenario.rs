//! Declarative experiment description, its runner and the sampled result.
//!
//! Scenario files are JSON, SI units throughout:
//!
//! ```json
//! {
//!   "name": "drift",
//!   "dt": 0.001, "t_end": 1.0, "output_interval": 0.01,
//!   "platform": {
//!     "bounds": {"min": [-0.3, -0.3], "max": [0.3, 0.3]},
//!     "regions": [{"min": [-0.3, -0.3], "max": [0.3, 0.3], "pressurized": true}],
//!     "default": {"pressurized": false, "mu": 0.2}
//!   },
//!   "bodies": [{"id": "a", "mass": 0.5, "inertia": 7e-4, "x": 0.0, "y": 0.0,
//!               "theta": 0.0, "vx": 0.01, "footprint_radius": 0.046}],
//!   "modules": [], "links": [], "events": []
//! }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::integrator::{step, PhysicsParams};
use super::magnet::{apply_magnet_release, MagnetModel};
use super::region::PlatformRegionMap;
use super::state::SimState;
use super::{Body2D, JointedModule, MagnetLink, SimError};

fn default_output_interval() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    /// Free-text notes on assumed parameter values.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_output_interval")]
    pub output_interval: f64,
    #[serde(default)]
    pub physics: PhysicsParams,
    pub platform: PlatformRegionMap,
    #[serde(default)]
    pub bodies: Vec<Body2D>,
    #[serde(default)]
    pub modules: Vec<JointedModule>,
    #[serde(default)]
    pub links: Vec<MagnetLink>,
    #[serde(default)]
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Event {
    /// Switch magnet link `link` (index into `links`) from attract to repel.
    MagnetRelease { time: f64, link: usize },
}

impl Event {
    pub fn time(&self) -> f64 {
        match self {
            Event::MagnetRelease { time, .. } => *time,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("scenario parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

fn positive(field: String, v: f64) -> Result<(), ScenarioError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Scenario with only a platform and no bodies.
    pub fn empty(platform: PlatformRegionMap, dt: f64, t_end: f64) -> Self {
        Self {
            name: "empty".into(),
            assumptions: vec![],
            dt,
            t_end,
            output_interval: default_output_interval(),
            physics: PhysicsParams::default(),
            platform,
            bodies: vec![],
            modules: vec![],
            links: vec![],
            events: vec![],
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        positive("dt".into(), self.dt)?;
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(invalid("t_end", "must be non-negative and finite"));
        }
        positive("output_interval".into(), self.output_interval)?;
        if !(self.physics.gravity >= 0.0) {
            return Err(invalid("physics.gravity", "must be non-negative"));
        }
        if !(self.physics.v_stop >= 0.0) || !(self.physics.omega_stop >= 0.0) {
            return Err(invalid("physics", "stop thresholds must be non-negative"));
        }
        self.platform
            .validate()
            .map_err(|m| invalid("platform", m))?;

        let mut ids: Vec<&str> = Vec::new();
        for (i, b) in self.bodies.iter().enumerate() {
            positive(format!("bodies[{i}].mass"), b.mass)?;
            positive(format!("bodies[{i}].inertia"), b.inertia)?;
            positive(format!("bodies[{i}].footprint_radius"), b.footprint_radius)?;
            ids.push(&b.id);
        }
        for (i, m) in self.modules.iter().enumerate() {
            for (half, r) in [("upper", &m.upper), ("lower", &m.lower)] {
                positive(format!("modules[{i}].{half}.mass"), r.mass)?;
                positive(format!("modules[{i}].{half}.inertia"), r.inertia)?;
            }
            positive(format!("modules[{i}].footprint_radius"), m.footprint_radius)?;
            if let Some(p) = m.pin_torque {
                if !(p >= 0.0) {
                    return Err(invalid(
                        format!("modules[{i}].pin_torque"),
                        "must be non-negative",
                    ));
                }
            }
            ids.push(&m.id);
        }
        for (k, id) in ids.iter().enumerate() {
            if id.is_empty() {
                return Err(invalid("id", "ids must be non-empty"));
            }
            if ids[..k].contains(id) {
                return Err(invalid("id", format!("duplicate id '{id}'")));
            }
        }
        for (k, l) in self.links.iter().enumerate() {
            for (end, id) in [("body_a", &l.body_a), ("body_b", &l.body_b)] {
                if !ids.contains(&id.as_str()) {
                    return Err(invalid(
                        format!("links[{k}].{end}"),
                        format!("unknown id '{id}'"),
                    ));
                }
            }
            if l.body_a == l.body_b {
                return Err(invalid(
                    format!("links[{k}]"),
                    "a link needs two distinct ends",
                ));
            }
            match l.model {
                MagnetModel::Impulse { j } if !(j >= 0.0) || !j.is_finite() => {
                    return Err(invalid(
                        format!("links[{k}].model.impulse.j"),
                        "must be non-negative",
                    ));
                }
                MagnetModel::ShortRangeForce { f0, cutoff } if !(f0 >= 0.0) || !(cutoff > 0.0) => {
                    return Err(invalid(
                        format!("links[{k}].model.short_range_force"),
                        "f0 must be non-negative and cutoff positive",
                    ));
                }
                _ => {}
            }
        }
        for (k, e) in self.events.iter().enumerate() {
            match e {
                Event::MagnetRelease { time, link } => {
                    if !(*time >= 0.0) || !time.is_finite() {
                        return Err(invalid(format!("events[{k}].time"), "must be non-negative"));
                    }
                    if *link >= self.links.len() {
                        return Err(invalid(
                            format!("events[{k}].link"),
                            format!("no link {link}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> SimState {
        SimState {
            time: 0.0,
            bodies: self.bodies.clone(),
            modules: self.modules.clone(),
            links: self.links.clone(),
        }
    }

    /// Reflection about the y axis: `x → −x`, `vx → −vx`, angles and
    /// torques change sign.
    pub fn mirrored_x(&self) -> Self {
        let mut s = self.clone();
        s.name = format!("{} (mirrored)", self.name);
        s.platform = self.platform.mirrored_x();
        for b in &mut s.bodies {
            b.x = -b.x;
            b.vx = -b.vx;
            b.theta = -b.theta;
            b.omega = -b.omega;
            b.external_torque = b.external_torque.negated();
        }
        for m in &mut s.modules {
            m.x = -m.x;
            m.vx = -m.vx;
            for r in [&mut m.upper, &mut m.lower] {
                r.theta = -r.theta;
                r.omega = -r.omega;
            }
            m.joint_torque = m.joint_torque.negated();
        }
        s
    }
}

/// Time-sampled simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<SimState>,
    pub output_interval: f64,
    /// First step-resolution time each entity centre left the platform.
    pub edge_events: Vec<(String, f64)>,
}

impl Trajectory {
    pub fn last(&self) -> &SimState {
        self.samples
            .last()
            .expect("trajectory has the initial sample")
    }
}

/// Number of steps covering `[0, t_end]`.
pub fn step_count(t_end: f64, dt: f64) -> u64 {
    let n = t_end / dt;
    (n - n.abs() * 1e-9).ceil().max(0.0) as u64
}

/// Runs `scenario` with explicit `dt` and `t_end`.
pub fn simulate(scenario: &Scenario, dt: f64, t_end: f64) -> Result<Trajectory, SimError> {
    simulate_with(scenario, dt, t_end, |_| {})
}

/// [`simulate`] with an observer called on every integrated state.
///
/// The time of step `n` is set to `n·dt` rather than accumulated. Events
/// fire before the first step whose midpoint lies past the event time.
pub fn simulate_with(
    scenario: &Scenario,
    dt: f64,
    t_end: f64,
    mut observe: impl FnMut(&SimState),
) -> Result<Trajectory, SimError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SimError::Invalid(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(SimError::Invalid(format!(
            "t_end must be non-negative, got {t_end}"
        )));
    }
    scenario
        .validate()
        .map_err(|e| SimError::Invalid(e.to_string()))?;

    let map = &scenario.platform;
    let steps = step_count(t_end, dt);
    let every = ((scenario.output_interval / dt).round() as u64).max(1);

    let mut events: Vec<(f64, usize)> = scenario
        .events
        .iter()
        .enumerate()
        .map(|(k, e)| (e.time(), k))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut pending = events.into_iter().peekable();

    let mut state = scenario.initial_state();
    let mut off_platform: Vec<bool> = state
        .entities()
        .map(|e| {
            let (x, y) = state.position(e);
            !map.in_bounds(x, y)
        })
        .collect();
    let mut edge_events: Vec<(String, f64)> = state
        .entities()
        .zip(&off_platform)
        .filter(|(_, &off)| off)
        .map(|(e, _)| (state.entity_id(e).to_string(), 0.0))
        .collect();
    let mut samples = vec![state.clone()];

    for n in 0..steps {
        while let Some(&(t, k)) = pending.peek() {
            if t >= state.time + 0.5 * dt {
                break;
            }
            let Event::MagnetRelease { link, .. } = scenario.events[k];
            state = apply_magnet_release(&state, link).map_err(|e| e.at(state.time))?;
            pending.next();
        }
        let mut next = step(&state, map, &scenario.physics, dt).map_err(|e| e.at(state.time))?;
        next.time = (n + 1) as f64 * dt;
        for (k, e) in next.entities().enumerate() {
            let (x, y) = next.position(e);
            if !off_platform[k] && !map.in_bounds(x, y) {
                off_platform[k] = true;
                edge_events.push((next.entity_id(e).to_string(), next.time));
            }
        }
        observe(&next);
        state = next;
        if (n + 1) % every == 0 || n + 1 == steps {
            samples.push(state.clone());
        }
    }
    Ok(Trajectory {
        samples,
        output_interval: every as f64 * dt,
        edge_events,
    })
}

/// First time each entity centre leaves the platform bounds.
///
/// Crossing times are linearly interpolated between the bracketing samples
/// against the boundary that was crossed. An entity starting outside gets 0;
/// one that never leaves gets `None`. Order follows bodies then modules.
pub fn edge_arrival_times(
    traj: &Trajectory,
    map: &PlatformRegionMap,
) -> Vec<(String, Option<f64>)> {
    let Some(first) = traj.samples.first() else {
        return vec![];
    };
    first
        .entities()
        .map(|e| {
            let id = first.entity_id(e).to_string();
            let (x0, y0) = first.position(e);
            if !map.in_bounds(x0, y0) {
                return (id, Some(first.time));
            }
            let hit = traj.samples.windows(2).find_map(|w| {
                let p = w[0].position(e);
                let q = w[1].position(e);
                if map.in_bounds(q.0, q.1) {
                    return None;
                }
                let frac = crossing_fraction(p, q, map);
                Some(w[0].time + frac * (w[1].time - w[0].time))
            });
            (id, hit)
        })
        .collect()
}

/// Fraction along `p → q` at which the segment first meets the bounds.
fn crossing_fraction(p: (f64, f64), q: (f64, f64), map: &PlatformRegionMap) -> f64 {
    let b = &map.bounds;
    let mut frac: f64 = 1.0;
    for (a0, a1, lo, hi) in [
        (p.0, q.0, b.min[0], b.max[0]),
        (p.1, q.1, b.min[1], b.max[1]),
    ] {
        let d = a1 - a0;
        if a1 > hi && d > 0.0 {
            frac = frac.min((hi - a0) / d);
        }
        if a1 < lo && d < 0.0 {
            frac = frac.min((lo - a0) / d);
        }
    }
    frac.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::film_dynamics::{MagnetState, Rect};

    fn map() -> PlatformRegionMap {
        PlatformRegionMap::floating(Rect::new([-0.3, -0.3], [0.3, 0.3]))
    }

    fn drifting(vx: f64) -> Scenario {
        let mut s = Scenario::empty(map(), 1e-3, 1.0);
        s.bodies
            .push(Body2D::new("a", 0.5, 7e-4, 0.046).moving(vx, 0.0));
        s
    }

    #[test]
    fn empty_scenario_is_static() {
        let s = Scenario::empty(map(), 1e-3, 0.5);
        let t = simulate(&s, 1e-3, 0.5).unwrap();
        assert_eq!(t.samples.len(), 51);
        assert!(t.samples.iter().all(|x| x.bodies.is_empty()));
        let times: Vec<f64> = t.samples.iter().map(|s| s.time).collect();
        assert!(times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn step_counts() {
        assert_eq!(step_count(1.0, 1e-3), 1000);
        assert_eq!(step_count(20.0, 1e-3), 20_000);
        assert_eq!(step_count(0.0, 1e-3), 0);
        assert_eq!(step_count(0.0105, 1e-3), 11);
    }

    #[test]
    fn edge_arrival_interpolates() {
        let s = drifting(0.1);
        let t = simulate(&s, 1e-3, 4.0).unwrap();
        let arr = edge_arrival_times(&t, &s.platform);
        let at = arr[0].1.unwrap();
        assert!((at - 3.0).abs() < 1e-6, "{at}");
        assert_eq!(t.edge_events.len(), 1);
        assert!((t.edge_events[0].1 - 3.0).abs() <= 1e-3 + 1e-9);
    }

    #[test]
    fn edge_arrival_none_and_outside() {
        let t = simulate(&drifting(0.01), 1e-3, 1.0).unwrap();
        assert_eq!(edge_arrival_times(&t, &map())[0].1, None);
        let mut s = drifting(0.0);
        s.bodies[0].x = 0.5;
        let t = simulate(&s, 1e-3, 0.1).unwrap();
        assert_eq!(edge_arrival_times(&t, &map())[0].1, Some(0.0));
    }

    #[test]
    fn json_round_trip() {
        let mut s = drifting(0.02);
        s.bodies
            .push(Body2D::new("b", 0.5, 7e-4, 0.046).at(0.1, 0.0));
        s.links.push(MagnetLink {
            body_a: "a".into(),
            body_b: "b".into(),
            state: MagnetState::Attract,
            model: MagnetModel::Impulse { j: 0.01 },
        });
        s.events.push(Event::MagnetRelease { time: 0.5, link: 0 });
        let text = s.to_json();
        let back = Scenario::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(Scenario::from_json(&back.to_json()).unwrap(), s);
    }

    #[test]
    fn parse_errors_carry_location() {
        match Scenario::from_json("{\n  \"dt\": 0.001,\n  \"t_end\": oops\n}") {
            Err(ScenarioError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let unknown =
            r#"{"dt":0.001,"t_end":1,"platform":{"bounds":{"min":[0,0],"max":[1,1]}},"wat":1}"#;
        assert!(matches!(
            Scenario::from_json(unknown),
            Err(ScenarioError::Parse { .. })
        ));
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let mut s = drifting(0.0);
        s.bodies[0].mass = 0.0;
        match s.validate() {
            Err(ScenarioError::Invalid { field, .. }) => assert_eq!(field, "bodies[0].mass"),
            other => panic!("{other:?}"),
        }
        let mut s = drifting(0.0);
        s.events.push(Event::MagnetRelease { time: 0.1, link: 3 });
        assert!(s.validate().is_err());
        let mut s = drifting(0.0);
        s.bodies.push(Body2D::new("a", 1.0, 1.0, 0.1));
        assert!(s.validate().is_err());
    }

    #[test]
    fn release_event_fires_once_at_time() {
        let mut s = Scenario::empty(map(), 1e-3, 1.0);
        s.bodies
            .push(Body2D::new("a", 0.5, 7e-4, 0.046).at(-0.046, 0.0));
        s.bodies
            .push(Body2D::new("b", 0.5, 7e-4, 0.046).at(0.046, 0.0));
        s.links.push(MagnetLink {
            body_a: "a".into(),
            body_b: "b".into(),
            state: MagnetState::Attract,
            model: MagnetModel::Impulse { j: 0.01 },
        });
        s.events.push(Event::MagnetRelease {
            time: 0.25,
            link: 0,
        });
        s.events.push(Event::MagnetRelease { time: 0.5, link: 0 });
        let t = simulate(&s, 1e-3, 1.0).unwrap();
        let at = |time: f64| {
            t.samples
                .iter()
                .find(|x| (x.time - time).abs() < 1e-9)
                .unwrap()
                .bodies[1]
                .vx
        };
        assert_eq!(at(0.2), 0.0);
        assert_eq!(at(0.3), 0.02);
        assert_eq!(at(1.0), 0.02);
    }
}
