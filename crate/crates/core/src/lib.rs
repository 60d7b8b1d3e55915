//! Design and simulation toolkit for porous-plate air-bearing platforms.
//!
//! * [`porous_flow`]: envelope-surface gas diffusion through the plate and
//!   the contact-force comparison between full-face and point-inlet supply.
//! * [`platform_design`]: sizing glass, hole spacing, thickness, supply
//!   units and load capacity for a robot.
//! * [`film_dynamics`]: planar rigid-body simulation on the gas film with
//!   friction regions, jointed modules and magnet links.
//! * [`cli`]: the `porous-platform` command-line front end and its
//!   verification report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod film_dynamics;
pub mod platform_design;
pub mod porous_flow;

/// Standard gravity, m/s².
pub const GRAVITY: f64 = 9.81;
