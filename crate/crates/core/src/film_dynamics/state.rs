use serde::{Deserialize, Serialize};

use super::{Body2D, JointedModule, MagnetLink, SimError};

/// Full simulation snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub time: f64,
    pub bodies: Vec<Body2D>,
    pub modules: Vec<JointedModule>,
    pub links: Vec<MagnetLink>,
}

/// A translating entity: a free body or a jointed module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Body(usize),
    Module(usize),
}

/// Conserved quantities of a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub px: f64,
    pub py: f64,
    /// Angular momentum about the world origin.
    pub angular_momentum: f64,
    pub kinetic_energy: f64,
}

impl SimState {
    pub fn empty() -> Self {
        Self {
            time: 0.0,
            bodies: vec![],
            modules: vec![],
            links: vec![],
        }
    }

    pub fn resolve(&self, id: &str) -> Result<Entity, SimError> {
        if let Some(i) = self.bodies.iter().position(|b| b.id == id) {
            return Ok(Entity::Body(i));
        }
        if let Some(i) = self.modules.iter().position(|m| m.id == id) {
            return Ok(Entity::Module(i));
        }
        Err(SimError::Invalid(format!("unknown body id '{id}'")))
    }

    pub fn entities(&self) -> impl Iterator<Item = Entity> {
        (0..self.bodies.len())
            .map(Entity::Body)
            .chain((0..self.modules.len()).map(Entity::Module))
    }

    pub fn entity_id(&self, e: Entity) -> &str {
        match e {
            Entity::Body(i) => &self.bodies[i].id,
            Entity::Module(i) => &self.modules[i].id,
        }
    }

    pub fn position(&self, e: Entity) -> (f64, f64) {
        match e {
            Entity::Body(i) => (self.bodies[i].x, self.bodies[i].y),
            Entity::Module(i) => (self.modules[i].x, self.modules[i].y),
        }
    }

    pub fn velocity(&self, e: Entity) -> (f64, f64) {
        match e {
            Entity::Body(i) => (self.bodies[i].vx, self.bodies[i].vy),
            Entity::Module(i) => (self.modules[i].vx, self.modules[i].vy),
        }
    }

    pub fn mass(&self, e: Entity) -> f64 {
        match e {
            Entity::Body(i) => self.bodies[i].mass,
            Entity::Module(i) => self.modules[i].mass(),
        }
    }

    pub(crate) fn apply_impulse(&mut self, e: Entity, (jx, jy): (f64, f64)) {
        let m = self.mass(e);
        match e {
            Entity::Body(i) => {
                let b = &mut self.bodies[i];
                b.vx += jx / m;
                b.vy += jy / m;
            }
            Entity::Module(i) => {
                let b = &mut self.modules[i];
                b.vx += jx / m;
                b.vy += jy / m;
            }
        }
    }

    /// Number of trajectory rows: one per free body, two per module.
    pub fn body_count(&self) -> usize {
        self.bodies.len() + 2 * self.modules.len()
    }

    /// `Σ mᵢ vᵢ`.
    pub fn total_momentum(&self) -> (f64, f64) {
        self.entities().fold((0.0, 0.0), |(px, py), e| {
            let m = self.mass(e);
            let (vx, vy) = self.velocity(e);
            (px + m * vx, py + m * vy)
        })
    }

    /// `Σ (rᵢ − origin) × mᵢ vᵢ + Σ Iᵢ ωᵢ`.
    pub fn total_angular_momentum(&self, origin: (f64, f64)) -> f64 {
        let orbital: f64 = self
            .entities()
            .map(|e| {
                let m = self.mass(e);
                let (x, y) = self.position(e);
                let (vx, vy) = self.velocity(e);
                m * ((x - origin.0) * vy - (y - origin.1) * vx)
            })
            .sum();
        let spin: f64 = self.bodies.iter().map(|b| b.inertia * b.omega).sum::<f64>()
            + self
                .modules
                .iter()
                .map(|m| m.upper.inertia * m.upper.omega + m.lower.inertia * m.lower.omega)
                .sum::<f64>();
        orbital + spin
    }

    pub fn kinetic_energy(&self) -> f64 {
        let translational: f64 = self
            .entities()
            .map(|e| {
                let (vx, vy) = self.velocity(e);
                0.5 * self.mass(e) * (vx * vx + vy * vy)
            })
            .sum();
        let rotational: f64 = self
            .bodies
            .iter()
            .map(|b| 0.5 * b.inertia * b.omega * b.omega)
            .chain(self.modules.iter().flat_map(|m| {
                [
                    0.5 * m.upper.inertia * m.upper.omega * m.upper.omega,
                    0.5 * m.lower.inertia * m.lower.omega * m.lower.omega,
                ]
            }))
            .sum();
        translational + rotational
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let (px, py) = self.total_momentum();
        Diagnostics {
            px,
            py,
            angular_momentum: self.total_angular_momentum((0.0, 0.0)),
            kinetic_energy: self.kinetic_energy(),
        }
    }

    /// Id of the first entity with a non-finite field.
    pub fn first_non_finite(&self) -> Option<String> {
        for b in &self.bodies {
            let v = [b.x, b.y, b.theta, b.vx, b.vy, b.omega];
            if v.iter().any(|x| !x.is_finite()) {
                return Some(b.id.clone());
            }
        }
        for m in &self.modules {
            let v = [
                m.x,
                m.y,
                m.vx,
                m.vy,
                m.upper.theta,
                m.upper.omega,
                m.lower.theta,
                m.lower.omega,
            ];
            if v.iter().any(|x| !x.is_finite()) {
                return Some(m.id.clone());
            }
        }
        None
    }
}
