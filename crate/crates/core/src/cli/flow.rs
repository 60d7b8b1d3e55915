use std::fmt::Write as _;
use std::path::Path;

use clap::Args;

use super::{fmt_num, require_positive, write_output, CliError, CliResult};
use crate::porous_flow::{flow_curve, interior_ripple, PorousPlate, SurfaceVelocityField};

/// Samples per side of the ripple window.
const RIPPLE_SAMPLES: usize = 61;

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FlowArgs {
    /// Plate thickness H, m.
    #[arg(long)]
    pub thickness: f64,
    /// Largest horizontal offset on the curve, m.
    #[arg(long, default_value_t = 0.06)]
    pub max_x: f64,
    #[arg(long, default_value_t = 0.001)]
    pub step: f64,
    /// Hole array for the superposed field, e.g. `30mm-grid`.
    #[arg(long)]
    pub holes: Option<String>,
    /// Side of the square plate used for the field, m.
    #[arg(long, default_value_t = 0.3)]
    pub extent: f64,
    /// Sample pitch of the field, m.
    #[arg(long, default_value_t = 0.005)]
    pub field_pitch: f64,
}

/// Parses `<N>mm-grid` into a spacing in metres.
pub fn parse_hole_grid(spec: &str) -> Result<f64, CliError> {
    let bad = || CliError::Input(format!("--holes expects <N>mm-grid, got '{spec}'"));
    let mm: f64 = spec
        .strip_suffix("mm-grid")
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    if mm > 0.0 && mm.is_finite() {
        Ok(mm * 1e-3)
    } else {
        Err(bad())
    }
}

pub fn run(args: &FlowArgs, out_dir: &Path) -> CliResult {
    require_positive("thickness", args.thickness)?;
    require_positive("step", args.step)?;
    if !(args.max_x >= 0.0) || !args.max_x.is_finite() {
        return Err(CliError::Input(format!(
            "--max-x must be non-negative, got {}",
            args.max_x
        )));
    }
    let input = |e: crate::porous_flow::FlowError| CliError::Input(e.to_string());

    let curve = flow_curve(args.thickness, args.max_x, args.step).map_err(input)?;
    let mut csv = String::from("x_m,v_ratio\n");
    for (x, r) in &curve {
        let _ = writeln!(csv, "{},{}", fmt_num(*x), fmt_num(*r));
    }
    let path = write_output(out_dir, "flow_curve.csv", &csv)?;
    println!("curve: {} rows -> {}", curve.len(), path.display());

    if let Some(spec) = &args.holes {
        let spacing = parse_hole_grid(spec)?;
        require_positive("extent", args.extent)?;
        require_positive("field-pitch", args.field_pitch)?;
        let plate =
            PorousPlate::new(args.thickness, args.extent, args.extent, spacing).map_err(input)?;
        let field = SurfaceVelocityField::sample(&plate, args.field_pitch).map_err(input)?;
        let mut csv = String::from("x_m,y_m,v_ratio\n");
        for (x, y, r) in &field.samples {
            let _ = writeln!(csv, "{},{},{}", fmt_num(*x), fmt_num(*y), fmt_num(*r));
        }
        let path = write_output(out_dir, "flow_field.csv", &csv)?;
        let ripple = interior_ripple(&plate, RIPPLE_SAMPLES).map_err(input)?;
        println!(
            "field: {} holes, {} samples -> {}",
            plate.hole_count(),
            field.samples.len(),
            path.display()
        );
        println!("interior variation: {}", fmt_num(ripple));
        println!(
            "whole-plate variation: {}",
            fmt_num(field.relative_variation())
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hole_grid_spec() {
        assert!((parse_hole_grid("30mm-grid").unwrap() - 0.03).abs() < 1e-15);
        assert!((parse_hole_grid("2.5mm-grid").unwrap() - 0.0025).abs() < 1e-15);
        for bad in ["30mm", "grid", "-3mm-grid", "0mm-grid", "xmm-grid"] {
            assert!(parse_hole_grid(bad).is_err(), "{bad}");
        }
    }
}
