//! Built-in verification checks behind `porous-platform verify`.
//!
//! Each check records where its expected value comes from: a reference
//! measurement, an independent oracle computed here, or a closed form.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::PathBuf;
use std::thread;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sim::{diagnostics_csv, trajectory_csv};
use super::{CliError, CliResult};
use crate::film_dynamics::{
    run_preset, simulate, CheckKind, Preset, PresetCheck, PresetOptions, Scenario, SimState,
    Trajectory,
};
use crate::platform_design::{
    check_supply_layout, count_holes_brute_force, count_holes_under_glass, design_platform,
    load_capacity, min_max_covered_holes, supply_unit_layout, unit_count, DesignMode, GlassPuck,
    RobotSpec,
};
use crate::porous_flow::{
    contact_force, envelope_velocity, flow_curve, inlet_force_reduction, interior_ripple,
    surface_velocity_ratio, EnvelopePoint, InletState, PorousPlate,
};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum,
)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Flow,
    Design,
    Dynamics,
    Conservation,
    Determinism,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Measured value from the reference experiment.
    Reference,
    /// Value computed by an independent method.
    Oracle,
    ClosedForm,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Reference => "reference",
            Source::Oracle => "oracle",
            Source::ClosedForm => "closed form",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|measured − expected| ≤ tolerance`.
    Near,
    /// `measured ≤ tolerance`.
    AtMost,
    /// `measured ≥ expected`.
    AtLeast,
    /// Reported only; a mismatch is noted but does not fail.
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyCheck {
    pub name: String,
    pub category: Category,
    pub source: Source,
    pub comparison: Comparison,
    pub expected: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl VerifyCheck {
    fn new(
        name: &str,
        category: Category,
        source: Source,
        comparison: Comparison,
        expected: f64,
        measured: f64,
        tolerance: f64,
    ) -> Self {
        let pass = match comparison {
            Comparison::Near => (measured - expected).abs() <= tolerance,
            Comparison::AtMost => measured <= tolerance,
            Comparison::AtLeast => measured >= expected,
            Comparison::Report => true,
        };
        Self {
            name: name.into(),
            category,
            source,
            comparison,
            expected,
            measured: if measured.is_finite() {
                measured
            } else {
                f64::MAX
            },
            tolerance,
            pass,
            note: String::new(),
        }
    }

    fn near(
        name: &str,
        cat: Category,
        src: Source,
        expected: f64,
        measured: f64,
        tol: f64,
    ) -> Self {
        Self::new(name, cat, src, Comparison::Near, expected, measured, tol)
    }

    fn at_most(name: &str, cat: Category, src: Source, measured: f64, bound: f64) -> Self {
        Self::new(name, cat, src, Comparison::AtMost, 0.0, measured, bound)
    }

    fn at_least(name: &str, cat: Category, src: Source, measured: f64, bound: f64) -> Self {
        Self::new(name, cat, src, Comparison::AtLeast, bound, measured, 0.0)
    }

    fn flag(name: &str, cat: Category, src: Source, ok: bool, detail: String) -> Self {
        let mut c = Self::new(
            name,
            cat,
            src,
            Comparison::Near,
            1.0,
            if ok { 1.0 } else { 0.0 },
            0.0,
        );
        c.note = detail;
        c
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
    pub passed: bool,
}

impl VerifyReport {
    fn from_checks(mut checks: Vec<VerifyCheck>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().all(|c| c.pass);
        Self { checks, passed }
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_table(&self) -> String {
        let w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(4)
            .max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<w$}  {:<11}  {:<8}  {:>14}  {:>14}  {:>10}  status",
            "check", "source", "compare", "expected", "measured", "tolerance"
        );
        for c in &self.checks {
            let cmp = match c.comparison {
                Comparison::Near => "|m-e|<=t",
                Comparison::AtMost => "m<=t",
                Comparison::AtLeast => "m>=e",
                Comparison::Report => "report",
            };
            let status = if c.pass { "PASS" } else { "FAIL" };
            let _ = write!(
                out,
                "{:<w$}  {:<11}  {:<8}  {:>14.6e}  {:>14.6e}  {:>10.1e}  {status}",
                c.name,
                c.source.to_string(),
                cmp,
                c.expected,
                c.measured,
                c.tolerance
            );
            if !c.note.is_empty() {
                let _ = write!(out, "  ({})", c.note);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} checks, {} failed: {}",
            self.checks.len(),
            self.failures().count(),
            if self.passed { "PASS" } else { "FAIL" }
        );
        out
    }
}

type Group = fn() -> Vec<VerifyCheck>;

/// Check groups and the categories they can produce.
const GROUPS: &[(&[Category], Group)] = &[
    (&[Category::Flow], flow_checks),
    (&[Category::Design], design_checks),
    (&[Category::Dynamics, Category::Conservation], || {
        preset_checks(Preset::SelfRotationFloating)
    }),
    (&[Category::Dynamics, Category::Conservation], || {
        preset_checks(Preset::SelfRotationFriction)
    }),
    (&[Category::Dynamics, Category::Conservation], || {
        preset_checks(Preset::ExternalCouple)
    }),
    (&[Category::Dynamics, Category::Conservation], || {
        preset_checks(Preset::MagnetSeparation)
    }),
    (&[Category::Dynamics, Category::Conservation], || {
        preset_checks(Preset::FilmBoundaryGlide)
    }),
    (&[Category::Determinism], determinism_checks),
    (&[Category::Oracle], oracle_checks),
];

/// Runs every check (or one category) on scoped threads.
pub fn run_verify(only: Option<Category>) -> VerifyReport {
    let wanted = |cats: &[Category]| only.is_none_or(|c| cats.contains(&c));
    let checks: Vec<VerifyCheck> = thread::scope(|scope| {
        let handles: Vec<_> = GROUPS
            .iter()
            .filter(|(cats, _)| wanted(cats))
            .map(|&(_, group)| scope.spawn(group))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification check panicked"))
            .collect()
    });
    let checks = checks
        .into_iter()
        .filter(|c| only.is_none_or(|cat| c.category == cat))
        .collect();
    VerifyReport::from_checks(checks)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only one category of checks.
    #[arg(long, value_enum)]
    pub only: Option<Category>,
    /// Also write the report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn run(args: &VerifyArgs) -> CliResult {
    let report = run_verify(args.only);
    print!("{}", report.to_table());
    if let Some(path) = &args.json {
        let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        fs::write(path, json)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    if report.passed {
        Ok(())
    } else {
        let names: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        Err(CliError::Failure(format!(
            "failed checks: {}",
            names.join(", ")
        )))
    }
}

const RANDOM_SEED: u64 = 0x5eed;

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn flow_checks() -> Vec<VerifyCheck> {
    use Category::Flow;
    let mut out = Vec::new();

    let h = 0.015;
    let half = surface_velocity_ratio(h, h).unwrap_or(f64::NAN);
    out.push(VerifyCheck::near(
        "flow.ratio_at_x_equals_h",
        Flow,
        Source::ClosedForm,
        0.5,
        half,
        1e-15,
    ));

    // two-stage inverse-square composition vs one stage, and surface profile
    // vs envelope law at r = √(H² + x²)
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let r0 = rng.gen_range(1e-3..0.1);
        let r1 = r0 * rng.gen_range(1.0..10.0);
        let r2 = r1 * rng.gen_range(1.0..10.0);
        let v0 = rng.gen_range(1e-3..10.0);
        let direct = envelope_velocity(r2, r0, v0).unwrap_or(f64::NAN);
        let staged = envelope_velocity(r2, r1, envelope_velocity(r1, r0, v0).unwrap_or(f64::NAN))
            .unwrap_or(f64::NAN);
        worst = worst.max(rel_err(direct, staged));
        let x = rng.gen_range(-0.2..0.2);
        let ratio = surface_velocity_ratio(x, r0).unwrap_or(f64::NAN);
        let p = EnvelopePoint::on_surface(x, r0, v0)
            .map(|p| p.v)
            .unwrap_or(f64::NAN);
        worst = worst.max(rel_err(v0 * ratio, p));
    }
    out.push(VerifyCheck::at_most(
        "flow.envelope_composition_rel_err",
        Flow,
        Source::Oracle,
        worst,
        1e-12,
    ));

    let curve = flow_curve(h, 0.06, 0.001).unwrap_or_default();
    let monotone = curve.windows(2).all(|w| w[1].1 < w[0].1);
    let peak = curve.first().map_or(f64::NAN, |p| p.1);
    out.push(VerifyCheck::flag(
        "flow.curve_monotone_decreasing",
        Flow,
        Source::Reference,
        monotone && curve.len() == 61,
        format!("{} points on [0, 0.06] m", curve.len()),
    ));
    out.push(VerifyCheck::near(
        "flow.curve_peak_on_axis",
        Flow,
        Source::Reference,
        1.0,
        peak,
        0.0,
    ));

    let f = contact_force(0.4e6, 1.0).unwrap_or(f64::NAN);
    out.push(VerifyCheck::near(
        "flow.naive_contact_force_n",
        Flow,
        Source::Reference,
        4.0e5,
        f,
        0.0,
    ));

    let generic = PorousPlate::new(0.030, 2.0, 2.0, 0.010).expect("generic plate");
    let inlet = InletState::new(0.4e6).expect("inlet");
    match inlet_force_reduction(&generic, &inlet) {
        Ok(r) => {
            let oracle =
                0.4e6 * 4.0 / (201.0 * 201.0 * std::f64::consts::PI * 0.001 * 0.001 * 0.4e6);
            out.push(
                VerifyCheck::at_least(
                    "flow.generic_force_reduction_ratio",
                    Flow,
                    Source::Oracle,
                    r.ratio,
                    10.0,
                )
                .with_note(format!("grid oracle {oracle:.4}")),
            );
            out.push(VerifyCheck::near(
                "flow.generic_force_reduction_vs_grid",
                Flow,
                Source::Oracle,
                oracle,
                r.ratio,
                1e-9 * oracle,
            ));
        }
        Err(e) => out.push(VerifyCheck::flag(
            "flow.generic_force_reduction_ratio",
            Flow,
            Source::Oracle,
            false,
            e.to_string(),
        )),
    }

    let ripples: Vec<f64> = [0.015, 0.030, 0.060]
        .iter()
        .map(|&h| {
            PorousPlate::new(h, 0.3, 0.3, 0.03)
                .and_then(|p| interior_ripple(&p, 61))
                .unwrap_or(f64::NAN)
        })
        .collect();
    let ok = ripples.windows(2).all(|w| w[1] <= w[0]);
    out.push(VerifyCheck::flag(
        "flow.thickness_smooths_field",
        Flow,
        Source::Oracle,
        ok,
        format!(
            "variation at H = 15/30/60 mm: {:.4}/{:.4}/{:.4}",
            ripples[0], ripples[1], ripples[2]
        ),
    ));
    out
}

fn ubot_robot() -> RobotSpec {
    RobotSpec {
        footprint_side: 0.092,
        module_mass: 0.5,
        module_count: 1,
        workspace_width: 1.0,
        workspace_depth: 1.0,
    }
}

fn design_checks() -> Vec<VerifyCheck> {
    use Category::Design;
    let mut out = Vec::new();
    let glass = GlassPuck::circle(0.080, 0.0);
    let cap = load_capacity(&glass, 0.02e6);
    out.push(
        VerifyCheck::near(
            "design.load_capacity_80mm_n",
            Design,
            Source::Reference,
            100.0,
            cap,
            5.0,
        )
        .with_note("about 100 N at 0.02 MPa"),
    );
    let range = min_max_covered_holes(&glass, 0.030);
    out.push(VerifyCheck::near(
        "design.covered_holes_min",
        Design,
        Source::Reference,
        4.0,
        range.min as f64,
        0.0,
    ));
    let mut max = VerifyCheck::new(
        "design.covered_holes_max",
        Design,
        Source::Reference,
        Comparison::Report,
        7.0,
        range.max as f64,
        0.0,
    );
    max.note = if range.max == 7 {
        "sweep matches the reference 4 to 7".into()
    } else {
        format!("sweep max {} differs from the reference 7", range.max)
    };
    out.push(max);

    match design_platform(&ubot_robot(), DesignMode::Targeted) {
        Ok(d) => {
            out.push(VerifyCheck::near(
                "design.ubot_glass_m",
                Design,
                Source::Reference,
                0.080,
                d.glass.size,
                1e-12,
            ));
            out.push(VerifyCheck::near(
                "design.ubot_thickness_m",
                Design,
                Source::Reference,
                0.030,
                d.plate.thickness,
                1e-12,
            ));
            out.push(VerifyCheck::near(
                "design.ubot_spacing_m",
                Design,
                Source::Reference,
                0.030,
                d.plate.hole_spacing,
                1e-12,
            ));
            out.push(VerifyCheck::at_least(
                "design.ubot_max_feasible_spacing_m",
                Design,
                Source::Reference,
                d.max_feasible_spacing.unwrap_or(0.0),
                0.030,
            ));
        }
        Err(e) => out.push(VerifyCheck::flag(
            "design.ubot_targeted",
            Design,
            Source::Reference,
            false,
            e.to_string(),
        )),
    }
    match design_platform(&ubot_robot(), DesignMode::Generic) {
        Ok(d) => out.push(
            VerifyCheck::near(
                "design.generic_hole_count",
                Design,
                Source::Oracle,
                40_401.0,
                d.hole_count as f64,
                0.0,
            )
            .with_note("2 m side at 10 mm pitch"),
        ),
        Err(e) => out.push(VerifyCheck::flag(
            "design.generic",
            Design,
            Source::Reference,
            false,
            e.to_string(),
        )),
    }
    out
}

fn preset_checks(preset: Preset) -> Vec<VerifyCheck> {
    let convert = |c: &PresetCheck| {
        let category = if c.name.contains("momentum") {
            Category::Conservation
        } else {
            Category::Dynamics
        };
        let source = if c.name.contains("ratio")
            || c.name.contains("momentum")
            || c.name.contains("steps")
        {
            Source::Oracle
        } else {
            Source::ClosedForm
        };
        let comparison = match c.kind {
            CheckKind::Near => Comparison::Near,
            CheckKind::AtMost => Comparison::AtMost,
            CheckKind::AtLeast => Comparison::AtLeast,
        };
        VerifyCheck {
            name: format!("{}.{}", preset.name(), c.name),
            category,
            source,
            comparison,
            expected: c.expected,
            measured: if c.measured.is_finite() {
                c.measured
            } else {
                f64::MAX
            },
            tolerance: c.tolerance,
            pass: c.pass,
            note: String::new(),
        }
    };
    match run_preset(preset, &PresetOptions::default()) {
        Ok((_, report)) => report.checks.iter().map(convert).collect(),
        Err(e) => vec![VerifyCheck::flag(
            &format!("{}.run", preset.name()),
            Category::Dynamics,
            Source::ClosedForm,
            false,
            e.to_string(),
        )],
    }
}

/// Every float of every sample, as raw bits.
pub fn state_bits(traj: &Trajectory) -> Vec<u64> {
    let mut out = Vec::new();
    for st in &traj.samples {
        out.push(st.time.to_bits());
        for b in &st.bodies {
            out.extend([b.x, b.y, b.theta, b.vx, b.vy, b.omega].map(f64::to_bits));
        }
        for m in &st.modules {
            out.extend(
                [
                    m.x,
                    m.y,
                    m.vx,
                    m.vy,
                    m.upper.theta,
                    m.upper.omega,
                    m.lower.theta,
                    m.lower.omega,
                ]
                .map(f64::to_bits),
            );
        }
    }
    out
}

/// Largest deviation between a trajectory and the mirror image of another.
pub fn mirror_deviation(a: &Trajectory, b: &Trajectory) -> f64 {
    if a.samples.len() != b.samples.len() {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    let mut cmp = |p: f64, q: f64| worst = worst.max((p - q).abs());
    for (s, t) in a.samples.iter().zip(&b.samples) {
        mirror_state(s, t, &mut cmp);
    }
    worst
}

fn mirror_state(s: &SimState, t: &SimState, cmp: &mut impl FnMut(f64, f64)) {
    cmp(s.time, t.time);
    for (p, q) in s.bodies.iter().zip(&t.bodies) {
        for (u, v) in [
            (p.x, -q.x),
            (p.y, q.y),
            (p.theta, -q.theta),
            (p.vx, -q.vx),
            (p.vy, q.vy),
            (p.omega, -q.omega),
        ] {
            cmp(u, v);
        }
    }
    for (p, q) in s.modules.iter().zip(&t.modules) {
        for (u, v) in [
            (p.x, -q.x),
            (p.y, q.y),
            (p.vx, -q.vx),
            (p.vy, q.vy),
            (p.upper.theta, -q.upper.theta),
            (p.upper.omega, -q.upper.omega),
            (p.lower.theta, -q.lower.theta),
            (p.lower.omega, -q.lower.omega),
        ] {
            cmp(u, v);
        }
    }
}

fn run_scenario(s: &Scenario) -> Option<Trajectory> {
    simulate(s, s.dt, s.t_end).ok()
}

fn determinism_checks() -> Vec<VerifyCheck> {
    use Category::Determinism;
    let mut out = Vec::new();
    let mut identical = true;
    let mut mirror_worst: f64 = 0.0;
    for p in [
        Preset::MagnetSeparation,
        Preset::SelfRotationFriction,
        Preset::FilmBoundaryGlide,
    ] {
        let s = p.scenario();
        match (
            run_scenario(&s),
            run_scenario(&s),
            run_scenario(&s.mirrored_x()),
        ) {
            (Some(a), Some(b), Some(m)) => {
                identical &= state_bits(&a) == state_bits(&b)
                    && trajectory_csv(&a) == trajectory_csv(&b)
                    && diagnostics_csv(&a) == diagnostics_csv(&b);
                mirror_worst = mirror_worst.max(mirror_deviation(&a, &m));
            }
            _ => {
                identical = false;
                mirror_worst = f64::INFINITY;
            }
        }
    }
    out.push(VerifyCheck::flag(
        "determinism.bit_identical_rerun",
        Determinism,
        Source::ClosedForm,
        identical,
        "three presets, state bits and CSV bytes".into(),
    ));
    out.push(VerifyCheck::at_most(
        "determinism.mirror_symmetry_max_dev",
        Determinism,
        Source::ClosedForm,
        mirror_worst,
        1e-12,
    ));
    out
}

fn oracle_checks() -> Vec<VerifyCheck> {
    use Category::Oracle;
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let mut mismatches = 0usize;
    for _ in 0..1000 {
        let s = rng.gen_range(0.005..0.05);
        let size = rng.gen_range(0.0..0.2);
        let g = if rng.gen_bool(0.5) {
            GlassPuck::circle(size, 0.0)
        } else {
            GlassPuck::square(size, 0.0)
        };
        let c = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        if count_holes_under_glass(c, &g, s) != count_holes_brute_force(c, &g, s) {
            mismatches += 1;
        }
    }
    let mut layout_failures = 0usize;
    for _ in 0..100 {
        let nx: usize = rng.gen_range(2..40);
        let ny: usize = rng.gen_range(2..40);
        let s = 0.01;
        let ok = PorousPlate::new(0.03, (nx - 1) as f64 * s, (ny - 1) as f64 * s, s)
            .ok()
            .and_then(|p| supply_unit_layout(&p).ok().map(|u| (p, u)))
            .is_some_and(|(p, u)| {
                u.len() == nx.div_ceil(2) * ny.div_ceil(2)
                    && unit_count(nx, ny) == u.len()
                    && check_supply_layout(&p, &u).is_ok()
            });
        if !ok {
            layout_failures += 1;
        }
    }
    vec![
        VerifyCheck::near(
            "oracle.covering_fast_vs_brute_force",
            Oracle,
            Source::Oracle,
            0.0,
            mismatches as f64,
            0.0,
        )
        .with_note("mismatches over 1000 random cases"),
        VerifyCheck::near(
            "oracle.supply_unit_counts",
            Oracle,
            Source::Oracle,
            0.0,
            layout_failures as f64,
            0.0,
        )
        .with_note("failures over 100 random grids"),
    ]
}
