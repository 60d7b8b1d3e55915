//! Envelope-surface model of gas diffusion through a porous plate.
//!
//! Gas enters the plate through a point-like inlet on the bottom face and
//! spreads isotropically. Every hemispherical envelope centred on the inlet
//! carries the same flow, so the speed on an envelope of radius `r` obeys an
//! inverse-square law
//!
//! ```text
//! v · r² = v0 · r0²
//! ```
//!
//! where `r0` is the envelope tangent to the top surface (`r0 = H`, the plate
//! thickness). On the top surface `r² = H² + x²`, giving the outflow profile
//!
//! ```text
//! v / v0 = H² / (H² + x²)
//! ```
//!
//! Multi-hole plates are handled by linear superposition of the normalized
//! single-hole profiles. That superposition is a model extension; the
//! single-hole law is the only relation the underlying model states.
//!
//! Porosity and particle size are carried on [`PorousPlate`] as material
//! descriptors only. No relation links them to the flow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default standard atmosphere, Pa absolute.
pub const STANDARD_ATMOSPHERE: f64 = 101_325.0;

/// Porosity of the graphite plate material.
pub const GRAPHITE_POROSITY: f64 = 0.17;

/// Graphite particle size range, μm.
pub const GRAPHITE_PARTICLE_SIZE_UM: (f64, f64) = (13.0, 15.0);

/// Inlet hole diameter used when none is given, m.
pub const DEFAULT_HOLE_DIAMETER: f64 = 0.002;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("domain error: {0}")]
    Domain(String),
}

fn domain(msg: impl Into<String>) -> FlowError {
    FlowError::Domain(msg.into())
}

/// Graphite plate geometry and its square inlet-hole grid.
///
/// Holes sit at `(i·s, j·s)` measured from the plate's lower-left corner,
/// for `i < holes_x`, `j < holes_y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PorousPlate {
    /// Plate thickness `H`, m.
    pub thickness: f64,
    pub plan_width: f64,
    pub plan_depth: f64,
    /// Square-array hole pitch, m.
    pub hole_spacing: f64,
    pub hole_diameter: f64,
    pub porosity: f64,
    pub particle_size_min_um: f64,
    pub particle_size_max_um: f64,
}

impl PorousPlate {
    /// Graphite plate with the default hole diameter.
    pub fn new(
        thickness: f64,
        plan_width: f64,
        plan_depth: f64,
        hole_spacing: f64,
    ) -> Result<Self, FlowError> {
        Self::with_hole_diameter(
            thickness,
            plan_width,
            plan_depth,
            hole_spacing,
            DEFAULT_HOLE_DIAMETER.min(hole_spacing * 0.5),
        )
    }

    pub fn with_hole_diameter(
        thickness: f64,
        plan_width: f64,
        plan_depth: f64,
        hole_spacing: f64,
        hole_diameter: f64,
    ) -> Result<Self, FlowError> {
        let plate = Self {
            thickness,
            plan_width,
            plan_depth,
            hole_spacing,
            hole_diameter,
            porosity: GRAPHITE_POROSITY,
            particle_size_min_um: GRAPHITE_PARTICLE_SIZE_UM.0,
            particle_size_max_um: GRAPHITE_PARTICLE_SIZE_UM.1,
        };
        plate.validate()?;
        Ok(plate)
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        let finite = [
            self.thickness,
            self.plan_width,
            self.plan_depth,
            self.hole_spacing,
            self.hole_diameter,
            self.porosity,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(domain("plate parameters must be finite"));
        }
        if self.thickness <= 0.0 {
            return Err(domain("thickness must be positive"));
        }
        if self.hole_spacing <= 0.0 {
            return Err(domain("hole spacing must be positive"));
        }
        if self.plan_width < 0.0 || self.plan_depth < 0.0 {
            return Err(domain("plan dimensions must be non-negative"));
        }
        if !(self.porosity > 0.0 && self.porosity < 1.0) {
            return Err(domain("porosity must lie in (0, 1)"));
        }
        if !(self.hole_diameter > 0.0 && self.hole_diameter < self.hole_spacing) {
            return Err(domain(
                "hole diameter must be positive and below the spacing",
            ));
        }
        Ok(())
    }

    /// Hole count along the width: `floor(width / s) + 1`.
    pub fn holes_x(&self) -> usize {
        grid_count(self.plan_width, self.hole_spacing)
    }

    pub fn holes_y(&self) -> usize {
        grid_count(self.plan_depth, self.hole_spacing)
    }

    pub fn hole_count(&self) -> usize {
        self.holes_x() * self.holes_y()
    }

    pub fn plan_area(&self) -> f64 {
        self.plan_width * self.plan_depth
    }

    /// Area of a single circular inlet, m².
    pub fn hole_area(&self) -> f64 {
        std::f64::consts::PI * 0.25 * self.hole_diameter * self.hole_diameter
    }

    /// Centre of hole `(i, j)`.
    pub fn hole_position(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.hole_spacing, j as f64 * self.hole_spacing)
    }

    /// All hole centres, row-major (`j` outer, `i` inner).
    pub fn holes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let nx = self.holes_x();
        let ny = self.holes_y();
        (0..ny).flat_map(move |j| (0..nx).map(move |i| self.hole_position(i, j)))
    }

    pub fn contains(&self, (x, y): (f64, f64)) -> bool {
        x >= 0.0 && y >= 0.0 && x <= self.plan_width && y <= self.plan_depth
    }
}

/// Number of grid points on `[0, extent]` at pitch `spacing`.
///
/// The quotient is nudged by a relative epsilon so that extents that are an
/// exact decimal multiple of the pitch (2.0 / 0.01) count their end point.
pub fn grid_count(extent: f64, spacing: f64) -> usize {
    let q = extent / spacing;
    (q + q.abs() * 1e-9 + 1e-12).floor() as usize + 1
}

/// Supply condition at an inlet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InletState {
    /// Gauge supply pressure, Pa.
    pub supply_pressure: f64,
    /// Absolute ambient pressure, Pa.
    pub ambient_pressure: f64,
}

impl InletState {
    pub fn new(supply_pressure: f64) -> Result<Self, FlowError> {
        if !(supply_pressure > 0.0) || !supply_pressure.is_finite() {
            return Err(domain("supply pressure must be positive"));
        }
        Ok(Self {
            supply_pressure,
            ambient_pressure: STANDARD_ATMOSPHERE,
        })
    }
}

/// One point on an envelope surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePoint {
    pub r: f64,
    pub r0: f64,
    pub x: f64,
    pub v: f64,
    pub v0: f64,
}

impl EnvelopePoint {
    /// The envelope point that meets the top surface at horizontal offset `x`.
    pub fn on_surface(x: f64, thickness: f64, v0: f64) -> Result<Self, FlowError> {
        let r = thickness.hypot(x);
        let v = envelope_velocity(r, thickness, v0)?;
        Ok(Self {
            r,
            r0: thickness,
            x,
            v,
            v0,
        })
    }
}

/// Inverse-square envelope law: `v0 · r0² / r²`.
pub fn envelope_velocity(r: f64, r0: f64, v0: f64) -> Result<f64, FlowError> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(domain(format!("r0 must be positive, got {r0}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain(format!("r must be positive, got {r}")));
    }
    if r < r0 {
        return Err(domain(format!(
            "r ({r}) must not be smaller than r0 ({r0})"
        )));
    }
    if !(v0 >= 0.0) {
        return Err(domain(format!("v0 must be non-negative, got {v0}")));
    }
    Ok(v0 * (r0 / r) * (r0 / r))
}

/// Normalized top-surface speed `H² / (H² + x²)`.
pub fn surface_velocity_ratio(x: f64, thickness: f64) -> Result<f64, FlowError> {
    if !(thickness > 0.0) || !thickness.is_finite() {
        return Err(domain(format!(
            "thickness must be positive, got {thickness}"
        )));
    }
    if !x.is_finite() {
        return Err(domain("x must be finite"));
    }
    Ok(single_hole_ratio(x * x, thickness * thickness))
}

#[inline]
fn single_hole_ratio(dist_sq: f64, h_sq: f64) -> f64 {
    h_sq / (h_sq + dist_sq)
}

/// Tabulates [`surface_velocity_ratio`] on `[0, x_max]` at pitch `step`.
pub fn flow_curve(thickness: f64, x_max: f64, step: f64) -> Result<Vec<(f64, f64)>, FlowError> {
    if !(thickness > 0.0) {
        return Err(domain("thickness must be positive"));
    }
    if !(x_max >= 0.0) || !x_max.is_finite() {
        return Err(domain("x_max must be non-negative"));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(domain("step must be positive"));
    }
    if x_max > 0.0 && step > x_max * (1.0 + 1e-12) {
        return Err(domain("step must not exceed x_max"));
    }
    let n = grid_count(x_max, step);
    (0..n)
        .map(|i| {
            let x = i as f64 * step;
            surface_velocity_ratio(x, thickness).map(|ratio| (x, ratio))
        })
        .collect()
}

/// Superposed top-surface speed at `point`: `v0 · Σ_h H² / (H² + |p − h|²)`.
pub fn superposed_surface_speed(
    point: (f64, f64),
    plate: &PorousPlate,
    v0: f64,
) -> Result<f64, FlowError> {
    if !plate.contains(point) {
        return Err(domain(format!(
            "point ({}, {}) lies outside the {} x {} plate",
            point.0, point.1, plate.plan_width, plate.plan_depth
        )));
    }
    Ok(v0 * superposed_ratio_unchecked(point, plate))
}

fn superposed_ratio_unchecked((px, py): (f64, f64), plate: &PorousPlate) -> f64 {
    let h_sq = plate.thickness * plate.thickness;
    plate
        .holes()
        .map(|(hx, hy)| {
            let dx = px - hx;
            let dy = py - hy;
            single_hole_ratio(dx * dx + dy * dy, h_sq)
        })
        .sum()
}

/// Normalized superposed speed sampled on a regular grid over the plate.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceVelocityField {
    pub pitch: f64,
    /// `(x, y, v / v0)` samples, row-major in `y`.
    pub samples: Vec<(f64, f64, f64)>,
}

impl SurfaceVelocityField {
    pub fn sample(plate: &PorousPlate, pitch: f64) -> Result<Self, FlowError> {
        if !(pitch > 0.0) || !pitch.is_finite() {
            return Err(domain("sample pitch must be positive"));
        }
        let nx = grid_count(plate.plan_width, pitch);
        let ny = grid_count(plate.plan_depth, pitch);
        let mut samples = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = (j as f64 * pitch).min(plate.plan_depth);
            for i in 0..nx {
                let x = (i as f64 * pitch).min(plate.plan_width);
                samples.push((x, y, superposed_ratio_unchecked((x, y), plate)));
            }
        }
        Ok(Self { pitch, samples })
    }

    /// Relative variation `(max − min) / max` over all samples.
    pub fn relative_variation(&self) -> f64 {
        relative_variation(self.samples.iter().map(|s| s.2))
    }
}

fn relative_variation(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi > 0.0 {
        (hi - lo) / hi
    } else {
        0.0
    }
}

/// Ripple of the superposed field around the plate centre.
///
/// A square window one pitch wide, centred on the plate, is sampled at
/// `samples_per_side` points per axis and `(max − min) / max` is returned.
/// Centring the window cancels the first-order part of the finite-plate
/// edge falloff, which grows with thickness and would otherwise swamp the
/// lattice ripple that thicker plates flatten.
pub fn interior_ripple(plate: &PorousPlate, samples_per_side: usize) -> Result<f64, FlowError> {
    if samples_per_side < 2 {
        return Err(domain("need at least two samples per side"));
    }
    if plate.holes_x() < 2 || plate.holes_y() < 2 {
        return Err(domain("interior ripple needs at least a 2x2 hole grid"));
    }
    let s = plate.hole_spacing;
    let x0 = 0.5 * (plate.plan_width - s);
    let y0 = 0.5 * (plate.plan_depth - s);
    let n = samples_per_side - 1;
    let values = (0..=n).flat_map(|b| {
        (0..=n).map(move |a| {
            let x = x0 + s * a as f64 / n as f64;
            let y = y0 + s * b as f64 / n as f64;
            superposed_ratio_unchecked((x, y), plate)
        })
    });
    Ok(relative_variation(values))
}

/// Pressure-flow invariant on an envelope: `p · v · r²`.
///
/// The hemisphere area factor `2π` is omitted; only equality across
/// envelopes of one steady flow is meaningful.
pub fn mass_flux_product(pressure: f64, velocity: f64, r: f64) -> Result<f64, FlowError> {
    if !(pressure > 0.0) || !pressure.is_finite() {
        return Err(domain("pressure must be positive"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain("radius must be positive"));
    }
    if !(velocity >= 0.0) || !velocity.is_finite() {
        return Err(domain("velocity must be non-negative"));
    }
    Ok(pressure * velocity * r * r)
}

/// Normal force of a pressure acting over an area, N.
pub fn contact_force(pressure: f64, area: f64) -> Result<f64, FlowError> {
    if !(pressure >= 0.0) || !pressure.is_finite() {
        return Err(domain("pressure must be non-negative"));
    }
    if !(area >= 0.0) || !area.is_finite() {
        return Err(domain("area must be non-negative"));
    }
    Ok(pressure * area)
}

/// Force on the plate with full-face pressurization vs point inlets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceReduction {
    pub naive_force: f64,
    pub inlet_force: f64,
    pub ratio: f64,
}

pub fn inlet_force_reduction(
    plate: &PorousPlate,
    inlet: &InletState,
) -> Result<ForceReduction, FlowError> {
    plate.validate()?;
    let p = inlet.supply_pressure;
    let naive_force = contact_force(p, plate.plan_area())?;
    let inlet_force = contact_force(p, plate.hole_count() as f64 * plate.hole_area())?;
    Ok(ForceReduction {
        naive_force,
        inlet_force,
        ratio: naive_force / inlet_force,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn envelope_examples() {
        let r0 = 0.015;
        assert_eq!(envelope_velocity(r0, r0, 1.0).unwrap(), 1.0);
        assert_eq!(envelope_velocity(2.0 * r0, r0, 1.0).unwrap(), 0.25);
        assert!(rel(envelope_velocity(0.045, 0.015, 0.9).unwrap(), 0.1) < 1e-12);
    }

    #[test]
    fn envelope_domain_errors() {
        assert!(envelope_velocity(0.0, 0.01, 1.0).is_err());
        assert!(envelope_velocity(0.01, 0.0, 1.0).is_err());
        assert!(envelope_velocity(0.01, -0.01, 1.0).is_err());
        assert!(envelope_velocity(0.005, 0.01, 1.0).is_err());
        assert!(envelope_velocity(0.02, 0.01, -1.0).is_err());
    }

    #[test]
    fn surface_ratio_examples() {
        assert_eq!(surface_velocity_ratio(0.0, 0.015).unwrap(), 1.0);
        for h in [0.001, 0.015, 0.03, 2.5] {
            assert_eq!(surface_velocity_ratio(h, h).unwrap(), 0.5);
            assert_eq!(surface_velocity_ratio(-h, h).unwrap(), 0.5);
        }
        // 225 / 1125
        let r = surface_velocity_ratio(0.030, 0.015).unwrap();
        assert!(rel(r, 0.2) < 1e-12);
        let composed = envelope_velocity(0.015f64.hypot(0.030), 0.015, 1.0).unwrap();
        assert!(rel(r, composed) < 1e-12);
        assert!(surface_velocity_ratio(0.01, 0.0).is_err());
        assert!(surface_velocity_ratio(0.01, -1.0).is_err());
    }

    #[test]
    fn flow_curve_examples() {
        let c = flow_curve(0.015, 0.03, 0.015).unwrap();
        assert_eq!(c.len(), 3);
        let expected = [(0.0, 1.0), (0.015, 0.5), (0.030, 0.2)];
        for ((x, v), (ex, ev)) in c.iter().zip(expected) {
            assert!((x - ex).abs() < 1e-15);
            assert!(rel(*v, ev) < 1e-12);
        }
        assert_eq!(flow_curve(0.015, 0.0, 0.001).unwrap(), vec![(0.0, 1.0)]);
        let long = flow_curve(0.015, 0.06, 0.001).unwrap();
        assert_eq!(long.len(), 61);
        assert!(long.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn flow_curve_rejects_bad_ranges() {
        assert!(flow_curve(0.0, 0.03, 0.01).is_err());
        assert!(flow_curve(0.015, 0.03, 0.0).is_err());
        assert!(flow_curve(0.015, 0.03, 0.05).is_err());
        assert!(flow_curve(0.015, -0.03, 0.01).is_err());
    }

    #[test]
    fn grid_count_hits_decimal_end_points() {
        assert_eq!(grid_count(2.0, 0.01), 201);
        assert_eq!(grid_count(1.0, 0.01), 101);
        assert_eq!(grid_count(0.3, 0.03), 11);
        assert_eq!(grid_count(0.06, 0.001), 61);
        assert_eq!(grid_count(0.0, 0.03), 1);
        assert_eq!(grid_count(0.029, 0.03), 1);
    }

    #[test]
    fn single_hole_superposition_reduces_to_profile() {
        let plate = PorousPlate::with_hole_diameter(0.015, 0.05, 0.05, 0.1, 0.002).unwrap();
        assert_eq!(plate.hole_count(), 1);
        for x in [0.0, 0.005, 0.015, 0.04] {
            let v = superposed_surface_speed((x, 0.0), &plate, 2.0).unwrap();
            let expected = 2.0 * surface_velocity_ratio(x, 0.015).unwrap();
            assert!(rel(v, expected) < 1e-12);
        }
    }

    #[test]
    fn four_hole_cell_centre() {
        let plate = PorousPlate::new(0.030, 0.030, 0.030, 0.030).unwrap();
        assert_eq!(plate.hole_count(), 4);
        // brute force over the explicit hole list
        let holes = [(0.0, 0.0), (0.03, 0.0), (0.0, 0.03), (0.03, 0.03)];
        let oracle: f64 = holes
            .iter()
            .map(|(hx, hy): &(f64, f64)| {
                let d2 = (0.015 - hx).powi(2) + (0.015 - hy).powi(2);
                0.0009 / (0.0009 + d2)
            })
            .sum();
        let v = superposed_surface_speed((0.015, 0.015), &plate, 1.0).unwrap();
        assert!(rel(v, oracle) < 1e-12);
        assert!((v - 8.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn on_axis_point_exceeds_v0() {
        let plate = PorousPlate::new(0.02, 0.3, 0.3, 0.03).unwrap();
        for (hx, hy) in plate.holes() {
            assert!(superposed_surface_speed((hx, hy), &plate, 1.0).unwrap() >= 1.0);
        }
    }

    #[test]
    fn outside_point_rejected() {
        let plate = PorousPlate::new(0.02, 0.3, 0.3, 0.03).unwrap();
        assert!(superposed_surface_speed((-0.01, 0.1), &plate, 1.0).is_err());
        assert!(superposed_surface_speed((0.1, 0.31), &plate, 1.0).is_err());
    }

    #[test]
    fn thicker_plate_flattens_interior_ripple() {
        let ripples: Vec<f64> = [0.015, 0.030, 0.060]
            .iter()
            .map(|&h| {
                let plate = PorousPlate::new(h, 0.3, 0.3, 0.03).unwrap();
                interior_ripple(&plate, 61).unwrap()
            })
            .collect();
        assert!(ripples.windows(2).all(|w| w[1] <= w[0]), "{ripples:?}");
    }

    #[test]
    fn flux_product_examples() {
        let p = mass_flux_product(101_325.0, 1.0, 0.015).unwrap();
        assert!(rel(p, 22.798_125) < 1e-12);
        let (v, r, big_r) = (0.7, 0.02, 0.05);
        let a = mass_flux_product(2.0e5, v, r).unwrap();
        let b = mass_flux_product(2.0e5, v * r * r / (big_r * big_r), big_r).unwrap();
        assert!(rel(a, b) < 1e-12);
        assert!(mass_flux_product(0.0, 1.0, 0.1).is_err());
        assert!(mass_flux_product(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn flux_product_constant_along_surface_profile() {
        let h = 0.015;
        let reference = mass_flux_product(STANDARD_ATMOSPHERE, 1.0, h).unwrap();
        for k in 0..50 {
            let pt = EnvelopePoint::on_surface(k as f64 * 0.002, h, 1.0).unwrap();
            let q = mass_flux_product(STANDARD_ATMOSPHERE, pt.v, pt.r).unwrap();
            assert!(rel(q, reference) < 1e-12);
        }
    }

    #[test]
    fn contact_force_examples() {
        assert_eq!(contact_force(0.4e6, 1.0).unwrap(), 4.0e5);
        assert_eq!(contact_force(0.4e6, 0.0).unwrap(), 0.0);
        assert!(contact_force(-1.0, 1.0).is_err());
        assert!(contact_force(1.0, -1.0).is_err());
    }

    #[test]
    fn force_reduction_one_square_metre() {
        let plate = PorousPlate::with_hole_diameter(0.03, 1.0, 1.0, 0.01, 0.002).unwrap();
        let inlet = InletState::new(0.4e6).unwrap();
        let red = inlet_force_reduction(&plate, &inlet).unwrap();
        // 101 x 101 holes of pi * 1e-6 m^2
        let oracle_inlet = 0.4e6 * 10_201.0 * std::f64::consts::PI * 1e-6;
        assert_eq!(red.naive_force, 4.0e5);
        assert!(rel(red.inlet_force, oracle_inlet) < 1e-12);
        assert!((red.inlet_force - 1.282e4).abs() < 5.0);
        assert!((red.ratio - 31.2).abs() < 0.05);
    }

    #[test]
    fn force_reduction_generic_preset_tracks_pitch_to_hole_ratio() {
        let plate = PorousPlate::with_hole_diameter(0.03, 2.0, 2.0, 0.01, 0.002).unwrap();
        let inlet = InletState::new(0.4e6).unwrap();
        let red = inlet_force_reduction(&plate, &inlet).unwrap();
        let oracle = 4.0 / (40_401.0 * std::f64::consts::PI * 1e-6);
        assert!(rel(red.ratio, oracle) < 1e-12);
        // cell area over hole area, approached as the edge row shrinks in weight
        let asymptote = 1e-4 / (std::f64::consts::PI * 1e-6);
        assert!(rel(red.ratio, asymptote) < 0.02);
        assert!(red.ratio > 10.0);
    }

    #[test]
    fn near_tiling_holes_approach_packing_limit() {
        // circular holes can cover at most pi/4 of each cell
        let plate = PorousPlate::with_hole_diameter(0.03, 10.0, 10.0, 0.01, 0.00999999).unwrap();
        let red = inlet_force_reduction(&plate, &InletState::new(1e5).unwrap()).unwrap();
        assert!((red.ratio - 4.0 / std::f64::consts::PI).abs() < 0.01);
        assert!(red.ratio > 1.0);
    }

    #[test]
    fn plate_invariants() {
        assert!(PorousPlate::new(0.0, 1.0, 1.0, 0.01).is_err());
        assert!(PorousPlate::new(0.03, 1.0, 1.0, 0.0).is_err());
        assert!(PorousPlate::with_hole_diameter(0.03, 1.0, 1.0, 0.01, 0.01).is_err());
        let mut p = PorousPlate::new(0.03, 1.0, 1.0, 0.01).unwrap();
        p.porosity = 1.0;
        assert!(p.validate().is_err());
        assert!(InletState::new(0.0).is_err());
    }
}
