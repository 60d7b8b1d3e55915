//! Command-line front end.
//!
//! Exit codes: 0 success, 1 check or design failure, 2 input error.

mod design;
mod flow;
pub mod sim;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub const OUT_DIR_ENV: &str = "POROUS_PLATFORM_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "porous-platform",
    version,
    about = "Porous-plate air-bearing platform design and simulation"
)]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Size a platform for a robot and write design.json.
    Design(design::DesignArgs),
    /// Export the single-hole surface-speed curve and optional multi-hole field.
    Flow(flow::FlowArgs),
    /// Run a preset or scenario file and write trajectory/diagnostics CSVs.
    Sim(sim::SimArgs),
    /// Run the built-in verification checks.
    Verify(verify::VerifyArgs),
}

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files.
    Input(String),
    /// Infeasible design, failed checks, or a numeric blow-up.
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Failure(m) => m,
        }
    }
}

pub type CliResult = Result<(), CliError>;

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

pub fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Design(a) => design::run(a, &cli.out_dir),
        Command::Flow(a) => flow::run(a, &cli.out_dir),
        Command::Sim(a) => sim::run(a, &cli.out_dir),
        Command::Verify(a) => verify::run(a),
    }
}

/// Shortest round-trip decimal form; never uses exponent notation.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut f = fs::File::create(&path)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn require_positive(name: &str, v: f64) -> CliResult {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1e-17), "0.00000000000000001");
        assert_eq!(fmt_num(3.0), "3");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn parses_subcommands() {
        let c = Cli::try_parse_from(["p", "flow", "--thickness", "0.015"]).unwrap();
        assert!(matches!(c.command, Command::Flow(_)));
        assert!(Cli::try_parse_from(["p"]).is_err());
        assert!(Cli::try_parse_from(["p", "design", "--robot-size", "-1"]).is_ok());
    }
}
