use serde::{Deserialize, Serialize};

use super::state::{Entity, SimState};
use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MagnetState {
    Attract,
    Repel,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MagnetModel {
    /// Instantaneous impulse `J`, kg·m/s, at the attract→repel switch.
    Impulse { j: f64 },
    /// Constant repulsion `f0`, N, while the centres are closer than `cutoff`.
    ShortRangeForce { f0: f64, cutoff: f64 },
}

/// Permanent-magnet docking link between two bodies or modules.
///
/// While attracting, the docked pair is assumed held by the dock and the
/// link applies nothing. Effects on the two ends are always equal and
/// opposite along the line of centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagnetLink {
    pub body_a: String,
    pub body_b: String,
    pub state: MagnetState,
    pub model: MagnetModel,
}

/// Unit vector from `a` to `b`, or `None` for coincident centres.
pub(crate) fn line_of_centres(a: (f64, f64), b: (f64, f64)) -> Option<((f64, f64), f64)> {
    let dx = b.0 - a.0;
    let dy = b.1 - a.1;
    let dist = dx.hypot(dy);
    if dist > 0.0 && dist.is_finite() {
        Some(((dx / dist, dy / dist), dist))
    } else {
        None
    }
}

/// Switches link `link` from attract to repel.
///
/// With the impulse model `∓J·n` is applied to the two ends at once, `n`
/// pointing from `a` to `b`. With the force model only the state changes and
/// [`super::step`] applies the force. Links that are not attracting are left
/// untouched.
pub fn apply_magnet_release(state: &SimState, link: usize) -> Result<SimState, SimError> {
    let l = state
        .links
        .get(link)
        .ok_or_else(|| SimError::Invalid(format!("no magnet link with index {link}")))?;
    if l.state != MagnetState::Attract {
        return Ok(state.clone());
    }
    let a = state.resolve(&l.body_a)?;
    let b = state.resolve(&l.body_b)?;
    let mut next = state.clone();
    next.links[link].state = MagnetState::Repel;
    if let MagnetModel::Impulse { j } = l.model {
        let (n, _) = line_of_centres(state.position(a), state.position(b)).ok_or(
            SimError::CoincidentCentres {
                link,
                time: state.time,
            },
        )?;
        next.apply_impulse(a, (-j * n.0, -j * n.1));
        next.apply_impulse(b, (j * n.0, j * n.1));
    }
    Ok(next)
}

/// Force on end `b` of an active short-range link (end `a` gets the negation).
pub(crate) fn link_force(
    state: &SimState,
    link: usize,
    a: Entity,
    b: Entity,
) -> Result<Option<(f64, f64)>, SimError> {
    let l = &state.links[link];
    let MagnetModel::ShortRangeForce { f0, cutoff } = l.model else {
        return Ok(None);
    };
    if l.state != MagnetState::Repel {
        return Ok(None);
    }
    let (n, dist) = line_of_centres(state.position(a), state.position(b)).ok_or(
        SimError::CoincidentCentres {
            link,
            time: state.time,
        },
    )?;
    if dist >= cutoff {
        return Ok(None);
    }
    Ok(Some((f0 * n.0, f0 * n.1)))
}
