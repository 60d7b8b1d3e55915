//! Planar rigid-body motion on the gas film.
//!
//! Bodies float without friction over pressurized regions and feel Coulomb
//! friction elsewhere. Region membership is decided by the body centre.
//! Stacked robot modules are [`JointedModule`]s whose halves share one
//! translation and rotate independently under an internal joint torque;
//! [`MagnetLink`]s push docked bodies apart. Contacts between bodies are not
//! modelled.

mod body;
mod integrator;
mod magnet;
pub mod presets;
mod region;
mod scenario;
mod state;

pub use body::{
    cube_inertia, disc_friction_torque, Body2D, JointedModule, RotorHalf, TorqueProfile,
    TorqueSegment,
};
pub use integrator::{internal_wrenches, step, Interaction, InteractionWrench, PhysicsParams};
pub use magnet::{apply_magnet_release, MagnetLink, MagnetModel, MagnetState};
pub use presets::{run_preset, CheckKind, Preset, PresetCheck, PresetOptions, PresetReport};
pub use region::{region_friction, PlatformRegionMap, Rect, Region, SurfaceAttrs, DEFAULT_MU};
pub use scenario::{
    edge_arrival_times, simulate, simulate_with, step_count, Event, Scenario, ScenarioError,
    Trajectory,
};
pub use state::{Diagnostics, Entity, SimState};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation input: {0}")]
    Invalid(String),
    #[error("non-finite state for body '{id}' at t = {time} s")]
    NonFinite { id: String, time: f64 },
    #[error("magnet link {link} has coincident centres at t = {time} s")]
    CoincidentCentres { link: usize, time: f64 },
    #[error("at t = {time} s: {source}")]
    Step {
        time: f64,
        #[source]
        source: Box<SimError>,
    },
}

impl SimError {
    /// Attaches a timestamp unless the error already carries one.
    pub fn at(self, time: f64) -> Self {
        match self {
            SimError::Invalid(_) => SimError::Step {
                time,
                source: Box::new(self),
            },
            timed => timed,
        }
    }
}
