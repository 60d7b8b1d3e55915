//! Sizing a porous platform for a given robot.
//!
//! Two routes are supported. The generic route always produces a 2 m square
//! plate, 30 mm thick, with holes at 10 mm pitch. The targeted route derives
//! everything from the robot: glass size from its footprint, hole spacing
//! from the glass, plate plan from the required workspace.

mod covering;
mod supply;

pub use covering::{
    count_holes_brute_force, count_holes_under_glass, max_hole_spacing, min_max_covered_holes,
    min_max_covered_holes_with, CoverageRange, MIN_COVERED_HOLES, SPACING_RESOLUTION, SWEEP_STEPS,
};
pub use supply::{check_supply_layout, supply_unit_layout, unit_count, SupplyUnit};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::porous_flow::{FlowError, PorousPlate};
use crate::GRAVITY;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("design infeasible: {constraint} ({detail})")]
    Infeasible { constraint: String, detail: String },
    #[error(transparent)]
    Flow(#[from] FlowError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    /// Side of the bounding square of one module, m.
    pub footprint_side: f64,
    pub module_mass: f64,
    pub module_count: u32,
    pub workspace_width: f64,
    pub workspace_depth: f64,
}

impl RobotSpec {
    pub fn validate(&self) -> Result<(), DesignError> {
        let positive = [
            ("footprint_side", self.footprint_side),
            ("module_mass", self.module_mass),
            ("workspace_width", self.workspace_width),
            ("workspace_depth", self.workspace_depth),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(DesignError::Invalid(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.module_count == 0 {
            return Err(DesignError::Invalid(
                "module_count must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn total_mass(&self) -> f64 {
        self.module_mass * self.module_count as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlassShape {
    Circle,
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlassPuck {
    pub shape: GlassShape,
    /// Diameter (circle) or side (square), m.
    pub size: f64,
    pub mass: f64,
    pub surface_note: String,
}

const GLASS_SURFACE_NOTE: &str = "low roughness, high flatness underside";

impl GlassPuck {
    pub fn circle(diameter: f64, mass: f64) -> Self {
        Self {
            shape: GlassShape::Circle,
            size: diameter,
            mass,
            surface_note: GLASS_SURFACE_NOTE.into(),
        }
    }

    pub fn square(side: f64, mass: f64) -> Self {
        Self {
            shape: GlassShape::Square,
            size: side,
            mass,
            surface_note: GLASS_SURFACE_NOTE.into(),
        }
    }

    /// Area in contact with the gas film, m².
    pub fn contact_area(&self) -> f64 {
        match self.shape {
            GlassShape::Circle => std::f64::consts::PI * 0.25 * self.size * self.size,
            GlassShape::Square => self.size * self.size,
        }
    }
}

/// Tunables of the sizing procedure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    /// Glass diameter as a fraction of the robot footprint (92 mm → 80 mm).
    pub glass_factor: f64,
    /// Floor on plate thickness and cap on targeted hole spacing, m.
    pub base_thickness: f64,
    /// Load the gas film carries per unit glass area, Pa.
    pub film_pressure: f64,
    pub supply_pressure: f64,
    pub hole_diameter: f64,
}

impl Default for DesignParams {
    fn default() -> Self {
        Self {
            glass_factor: 0.87,
            base_thickness: 0.030,
            film_pressure: 0.02e6,
            supply_pressure: 0.4e6,
            hole_diameter: crate::porous_flow::DEFAULT_HOLE_DIAMETER,
        }
    }
}

pub const GENERIC_SIDE: f64 = 2.0;
pub const GENERIC_THICKNESS: f64 = 0.030;
pub const GENERIC_SPACING: f64 = 0.010;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignMode {
    Generic,
    Targeted,
}

/// Circular puck with diameter `0.87 · footprint`, rounded to the nearest mm.
pub fn size_glass(robot: &RobotSpec) -> GlassPuck {
    size_glass_with(robot, DesignParams::default().glass_factor)
}

pub fn size_glass_with(robot: &RobotSpec, factor: f64) -> GlassPuck {
    let mm = (robot.footprint_side * factor * 1000.0).round();
    GlassPuck::circle(mm / 1000.0, 0.0)
}

/// Film-carried load: `film_pressure × contact area`, N.
pub fn load_capacity(glass: &GlassPuck, film_pressure: f64) -> f64 {
    film_pressure * glass.contact_area()
}

/// Metal levelling plate under the supply system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetalPlate {
    pub width: f64,
    pub depth: f64,
}

/// A sized platform. Lengths in m, pressures in Pa, forces in N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatformDesign {
    pub mode: DesignMode,
    pub plate: PorousPlate,
    pub glass: GlassPuck,
    pub metal_plate: MetalPlate,
    pub supply_pressure: f64,
    pub film_pressure: f64,
    pub estimated_capacity: f64,
    /// Weight of modules plus glass, N.
    pub required_load: f64,
    pub covered_holes: CoverageRange,
    /// Largest 1 mm spacing meeting the four-hole floor for this glass.
    pub max_feasible_spacing: Option<f64>,
    pub hole_count: usize,
    pub supply_units: Vec<SupplyUnit>,
}

pub fn design_platform(robot: &RobotSpec, mode: DesignMode) -> Result<PlatformDesign, DesignError> {
    design_platform_with(robot, mode, &DesignParams::default())
}

pub fn design_platform_with(
    robot: &RobotSpec,
    mode: DesignMode,
    params: &DesignParams,
) -> Result<PlatformDesign, DesignError> {
    robot.validate()?;
    let glass = size_glass_with(robot, params.glass_factor);
    if !(glass.size > 0.0) {
        return Err(DesignError::Infeasible {
            constraint: "glass size".into(),
            detail: format!(
                "footprint {} m rounds to a zero-size glass",
                robot.footprint_side
            ),
        });
    }
    let max_feasible_spacing = max_hole_spacing(&glass);

    let (width, depth, thickness, spacing) = match mode {
        DesignMode::Generic => (
            GENERIC_SIDE,
            GENERIC_SIDE,
            GENERIC_THICKNESS,
            GENERIC_SPACING,
        ),
        DesignMode::Targeted => {
            let max_spacing = max_feasible_spacing.ok_or_else(|| DesignError::Infeasible {
                constraint: "covered holes >= 4".into(),
                detail: format!(
                    "no 1 mm spacing keeps four holes under a {} m glass",
                    glass.size
                ),
            })?;
            // spacing never exceeds the base thickness, so the single-hole
            // ratio midway between holes stays at or above 0.8
            let spacing = max_spacing.min(params.base_thickness);
            let spacing = (spacing / SPACING_RESOLUTION + 1e-9).floor() * SPACING_RESOLUTION;
            let thickness = params.base_thickness.max(spacing);
            (
                robot.workspace_width,
                robot.workspace_depth,
                thickness,
                spacing,
            )
        }
    };
    let hole_diameter = params.hole_diameter.min(0.5 * spacing);
    let plate = PorousPlate::with_hole_diameter(thickness, width, depth, spacing, hole_diameter)?;

    let covered_holes = min_max_covered_holes(&glass, spacing);
    if covered_holes.min < MIN_COVERED_HOLES {
        return Err(DesignError::Infeasible {
            constraint: "covered holes >= 4".into(),
            detail: format!(
                "only {} holes under the glass at {} m spacing",
                covered_holes.min, spacing
            ),
        });
    }

    let estimated_capacity = load_capacity(&glass, params.film_pressure);
    let required_load = GRAVITY * (robot.total_mass() + glass.mass);
    if estimated_capacity < required_load {
        return Err(DesignError::Infeasible {
            constraint: "load capacity".into(),
            detail: format!(
                "capacity {estimated_capacity:.2} N below required {required_load:.2} N"
            ),
        });
    }

    let supply_units = supply_unit_layout(&plate)?;
    Ok(PlatformDesign {
        mode,
        metal_plate: MetalPlate { width, depth },
        hole_count: plate.hole_count(),
        plate,
        glass,
        supply_pressure: params.supply_pressure,
        film_pressure: params.film_pressure,
        estimated_capacity,
        required_load,
        covered_holes,
        max_feasible_spacing,
        supply_units,
    })
}

impl PlatformDesign {
    /// Human-readable summary with unit suffixes.
    pub fn to_table(&self) -> String {
        let mode = match self.mode {
            DesignMode::Generic => "generic",
            DesignMode::Targeted => "targeted",
        };
        let shape = match self.glass.shape {
            GlassShape::Circle => "circle, diameter",
            GlassShape::Square => "square, side",
        };
        let rows: Vec<(&str, String)> = vec![
            ("mode", mode.to_string()),
            (
                "porous plate",
                format!(
                    "{:.0} mm x {:.0} mm",
                    self.plate.plan_width * 1e3,
                    self.plate.plan_depth * 1e3
                ),
            ),
            (
                "plate thickness",
                format!("{:.0} mm", self.plate.thickness * 1e3),
            ),
            (
                "hole spacing",
                format!("{:.0} mm", self.plate.hole_spacing * 1e3),
            ),
            (
                "hole diameter",
                format!("{:.1} mm", self.plate.hole_diameter * 1e3),
            ),
            (
                "hole grid",
                format!(
                    "{} x {} ({} holes)",
                    self.plate.holes_x(),
                    self.plate.holes_y(),
                    self.hole_count
                ),
            ),
            ("porosity", format!("{:.0} %", self.plate.porosity * 100.0)),
            ("glass", format!("{shape} {:.0} mm", self.glass.size * 1e3)),
            (
                "holes under glass",
                format!("{} to {}", self.covered_holes.min, self.covered_holes.max),
            ),
            (
                "max feasible spacing",
                self.max_feasible_spacing
                    .map(|s| format!("{:.0} mm", s * 1e3))
                    .unwrap_or_else(|| "none".into()),
            ),
            ("supply units", self.supply_units.len().to_string()),
            (
                "supply pressure",
                format!("{:.2} MPa", self.supply_pressure * 1e-6),
            ),
            (
                "film pressure",
                format!("{:.3} MPa", self.film_pressure * 1e-6),
            ),
            ("load capacity", format!("{:.2} N", self.estimated_capacity)),
            ("required load", format!("{:.2} N", self.required_load)),
            (
                "metal plate",
                format!(
                    "{:.0} mm x {:.0} mm",
                    self.metal_plate.width * 1e3,
                    self.metal_plate.depth * 1e3
                ),
            ),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}
