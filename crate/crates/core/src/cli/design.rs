use std::path::Path;

use clap::{Args, ValueEnum};

use super::{write_output, CliError, CliResult};
use crate::platform_design::{design_platform, DesignError, DesignMode, RobotSpec};

/// Footprint used by the generic route when no robot size is given (Ubot).
pub const DEFAULT_FOOTPRINT: f64 = 0.092;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignPreset {
    Generic,
    Targeted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DesignArgs {
    /// Side of one robot module's footprint, m.
    #[arg(long)]
    pub robot_size: Option<f64>,
    /// Mass of one module, kg.
    #[arg(long, default_value_t = 0.5)]
    pub module_mass: f64,
    #[arg(long, default_value_t = 1)]
    pub module_count: u32,
    /// Workspace width, m (also the depth unless --workspace-depth is given).
    #[arg(long, default_value_t = 1.0)]
    pub workspace: f64,
    #[arg(long)]
    pub workspace_depth: Option<f64>,
    #[arg(long, value_enum, default_value_t = DesignPreset::Targeted)]
    pub preset: DesignPreset,
    /// What to print on stdout; design.json is always written.
    #[arg(long, value_enum, default_value_t = DesignFormat::Table)]
    pub format: DesignFormat,
}

pub fn run(args: &DesignArgs, out_dir: &Path) -> CliResult {
    let mode = match args.preset {
        DesignPreset::Generic => DesignMode::Generic,
        DesignPreset::Targeted => DesignMode::Targeted,
    };
    let footprint = match (args.robot_size, mode) {
        (Some(s), _) => s,
        (None, DesignMode::Generic) => DEFAULT_FOOTPRINT,
        (None, DesignMode::Targeted) => {
            return Err(CliError::Input(
                "--robot-size is required for a targeted design".into(),
            ))
        }
    };
    let robot = RobotSpec {
        footprint_side: footprint,
        module_mass: args.module_mass,
        module_count: args.module_count,
        workspace_width: args.workspace,
        workspace_depth: args.workspace_depth.unwrap_or(args.workspace),
    };
    let design = design_platform(&robot, mode).map_err(|e| match e {
        DesignError::Infeasible { .. } => CliError::Failure(e.to_string()),
        DesignError::Invalid(_) | DesignError::Flow(_) => CliError::Input(e.to_string()),
    })?;
    let json = serde_json::to_string_pretty(&design).expect("design serializes") + "\n";
    let path = write_output(out_dir, "design.json", &json)?;
    match args.format {
        DesignFormat::Table => {
            print!("{}", design.to_table());
            println!("written: {}", path.display());
        }
        DesignFormat::Json => print!("{json}"),
    }
    Ok(())
}
