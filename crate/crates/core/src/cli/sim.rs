use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;

use super::{fmt_num, write_output, CliError, CliResult};
use crate::film_dynamics::{
    run_preset, simulate, Preset, PresetOptions, Scenario, SimError, SimState, Trajectory,
};

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimArgs {
    /// Built-in experiment, e.g. magnet_separation.
    #[arg(
        long,
        conflicts_with = "scenario",
        required_unless_present = "scenario"
    )]
    pub preset: Option<String>,
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
}

/// `t,body_id,x,y,theta,vx,vy,omega`; a module gives one row per half.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,body_id,x,y,theta,vx,vy,omega\n");
    for st in &traj.samples {
        let t = fmt_num(st.time);
        for b in &st.bodies {
            row(
                &mut out,
                &t,
                &b.id,
                [b.x, b.y, b.theta, b.vx, b.vy, b.omega],
            );
        }
        for m in &st.modules {
            for (id, h) in [(m.upper_id(), &m.upper), (m.lower_id(), &m.lower)] {
                row(&mut out, &t, &id, [m.x, m.y, h.theta, m.vx, m.vy, h.omega]);
            }
        }
    }
    out
}

fn row(out: &mut String, t: &str, id: &str, v: [f64; 6]) {
    let _ = write!(out, "{t},{id}");
    for x in v {
        let _ = write!(out, ",{}", fmt_num(x));
    }
    out.push('\n');
}

/// `t,px,py,L,ke`; `L` is taken about the world origin.
pub fn diagnostics_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,px,py,L,ke\n");
    for st in &traj.samples {
        let d = st.diagnostics();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(st.time),
            fmt_num(d.px),
            fmt_num(d.py),
            fmt_num(d.angular_momentum),
            fmt_num(d.kinetic_energy)
        );
    }
    out
}

/// Initial, final and worst-case drift of momentum and angular momentum.
pub fn conservation_summary(traj: &Trajectory) -> String {
    let first = traj.samples[0].diagnostics();
    let last = traj.last().diagnostics();
    let drift = |f: fn(&SimState) -> f64| {
        let f0 = f(&traj.samples[0]);
        traj.samples
            .iter()
            .map(|s| (f(s) - f0).abs())
            .fold(0.0, f64::max)
    };
    let p = |s: &SimState| {
        let (px, py) = s.total_momentum();
        px.hypot(py)
    };
    let max_p = traj.samples.iter().map(p).fold(0.0, f64::max);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "samples: {}, t_final = {} s",
        traj.samples.len(),
        fmt_num(traj.last().time)
    );
    let _ = writeln!(
        out,
        "momentum: initial ({:.3e}, {:.3e}), final ({:.3e}, {:.3e}) kg·m/s, max |P| {max_p:.3e}",
        first.px, first.py, last.px, last.py
    );
    let _ = writeln!(
        out,
        "angular momentum: initial {:.3e}, final {:.3e} kg·m²/s, max drift {:.3e}",
        first.angular_momentum,
        last.angular_momentum,
        drift(|s| s.total_angular_momentum((0.0, 0.0)))
    );
    let _ = writeln!(
        out,
        "kinetic energy: initial {:.6e} J, final {:.6e} J",
        first.kinetic_energy, last.kinetic_energy
    );
    out
}

fn sim_error(e: SimError) -> CliError {
    match e {
        SimError::Invalid(_) => CliError::Input(e.to_string()),
        SimError::Step { ref source, .. } if matches!(**source, SimError::Invalid(_)) => {
            CliError::Input(e.to_string())
        }
        _ => CliError::Failure(e.to_string()),
    }
}

pub fn run(args: &SimArgs, out_dir: &Path) -> CliResult {
    let mut failed = Vec::new();
    let traj = if let Some(name) = &args.preset {
        let preset: Preset = name
            .parse()
            .map_err(|e: SimError| CliError::Input(e.to_string()))?;
        let opts = PresetOptions {
            dt: args.dt,
            t_end: args.t_end,
        };
        let (traj, report) = run_preset(preset, &opts).map_err(sim_error)?;
        println!(
            "preset {preset}: dt = {} s, t_end = {} s",
            fmt_num(report.dt),
            fmt_num(report.t_end)
        );
        for c in &report.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            println!(
                "  {status} {:<32} expected {:.6e}  measured {:.6e}  tol {:.1e}",
                c.name, c.expected, c.measured, c.tolerance
            );
            if !c.pass {
                failed.push(c.name.clone());
            }
        }
        for n in &report.notes {
            println!("  note: {n}");
        }
        traj
    } else {
        let path = args.scenario.as_ref().expect("clap enforces one source");
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let scenario = Scenario::from_json(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let dt = args.dt.unwrap_or(scenario.dt);
        let t_end = args.t_end.unwrap_or(scenario.t_end);
        println!(
            "scenario '{}': dt = {} s, t_end = {} s",
            scenario.name,
            fmt_num(dt),
            fmt_num(t_end)
        );
        simulate(&scenario, dt, t_end).map_err(sim_error)?
    };
    let tp = write_output(out_dir, "trajectory.csv", &trajectory_csv(&traj))?;
    let dp = write_output(out_dir, "diagnostics.csv", &diagnostics_csv(&traj))?;
    print!("{}", conservation_summary(&traj));
    println!("written: {}, {}", tp.display(), dp.display());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "preset checks failed: {}",
            failed.join(", ")
        )))
    }
}
