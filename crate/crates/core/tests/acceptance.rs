//! Acceptance criteria, one line each.
//!
//! Runs without the libtest harness so the PASS/FAIL lines are always
//! printed; exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};

use porous_platform::film_dynamics::{simulate, simulate_with, Preset, SimState, Trajectory};
use porous_platform::platform_design::{
    count_holes_under_glass, design_platform, load_capacity, min_max_covered_holes_with,
    supply_unit_layout, DesignMode, GlassPuck, RobotSpec,
};
use porous_platform::porous_flow::{
    contact_force, envelope_velocity, flow_curve, inlet_force_reduction, surface_velocity_ratio,
    InletState, PorousPlate,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const G: f64 = 9.81;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn flow_model_exactness() -> Outcome {
    let h = 0.015;
    let half = surface_velocity_ratio(h, h).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let r0: f64 = rng.gen_range(1e-4..0.1);
        let r1 = r0 * rng.gen_range(1.0..20.0);
        let r2 = r1 * rng.gen_range(1.0..20.0);
        let v0: f64 = rng.gen_range(1e-3..50.0);
        // oracle: velocity ratio equals the squared radius ratio
        let oracle = v0 * (r0 * r0) / (r2 * r2);
        let staged = envelope_velocity(r2, r1, envelope_velocity(r1, r0, v0).unwrap()).unwrap();
        worst = worst.max(rel(staged, oracle));
        let x: f64 = rng.gen_range(-0.3..0.3);
        let profile = v0 * surface_velocity_ratio(x, r0).unwrap();
        let via_envelope = envelope_velocity((r0 * r0 + x * x).sqrt(), r0, v0).unwrap();
        worst = worst.max(rel(profile, via_envelope));
    }
    let curve = flow_curve(h, 0.06, 0.001).unwrap();
    let monotone = curve.windows(2).all(|w| w[1].1 < w[0].1);
    let peak = curve[0].1;
    outcome(
        half == 0.5 && worst <= 1e-12 && monotone && peak == 1.0,
        format!("ratio(H,H) = {half}, worst composition rel err {worst:.2e}, monotone {monotone}, axis {peak}"),
    )
}

fn naive_contact_force() -> Outcome {
    let f = contact_force(0.4e6, 1.0).unwrap();
    let plate = PorousPlate::with_hole_diameter(0.030, 2.0, 2.0, 0.010, 0.002).unwrap();
    let r = inlet_force_reduction(&plate, &InletState::new(0.4e6).unwrap()).unwrap();
    // oracle: 201 × 201 holes of 2 mm diameter on the 2 m plate
    let holes = 201.0 * 201.0;
    let oracle = 4.0 / (holes * PI * 0.001 * 0.001);
    outcome(
        f == 4.0e5 && r.ratio > 10.0 && rel(r.ratio, oracle) < 1e-12,
        format!(
            "{f} N on 1 m² at 0.4 MPa; reduction ratio {:.4} (grid oracle {oracle:.4})",
            r.ratio
        ),
    )
}

fn load_capacity_80mm() -> Outcome {
    let cap = load_capacity(&GlassPuck::circle(0.080, 0.0), 0.02e6);
    let oracle = 0.02e6 * PI * 0.040 * 0.040;
    outcome(
        (cap - 100.0).abs() <= 5.0 && rel(cap, oracle) < 1e-12 && (cap - 100.53).abs() < 0.005,
        format!("{cap:.2} N vs about 100 N"),
    )
}

/// Independent count for a circle: every lattice point in a wide box.
fn brute_circle(c: (f64, f64), d: f64, s: f64) -> usize {
    let r = d / 2.0;
    let k = (r / s).ceil() as i64 + 3;
    let (i0, j0) = ((c.0 / s).round() as i64, (c.1 / s).round() as i64);
    let mut n = 0;
    for i in i0 - k..=i0 + k {
        for j in j0 - k..=j0 + k {
            let dx = i as f64 * s - c.0;
            let dy = j as f64 * s - c.1;
            if dx * dx + dy * dy <= r * r {
                n += 1;
            }
        }
    }
    n
}

fn brute_square(c: (f64, f64), a: f64, s: f64) -> usize {
    let h = a / 2.0;
    let k = (h / s).ceil() as i64 + 3;
    let (i0, j0) = ((c.0 / s).round() as i64, (c.1 / s).round() as i64);
    let mut n = 0;
    for i in i0 - k..=i0 + k {
        for j in j0 - k..=j0 + k {
            if (i as f64 * s - c.0).abs() <= h && (j as f64 * s - c.1).abs() <= h {
                n += 1;
            }
        }
    }
    n
}

fn hole_covering() -> Outcome {
    let (d, s, n) = (0.080, 0.030, 200);
    let glass = GlassPuck::circle(d, 0.0);
    let range = min_max_covered_holes_with(&glass, s, n);
    let (mut lo, mut hi) = (usize::MAX, 0);
    for a in 0..=n {
        for b in 0..=n {
            let c = brute_circle((s * a as f64 / n as f64, s * b as f64 / n as f64), d, s);
            lo = lo.min(c);
            hi = hi.max(c);
        }
    }
    let flag = if range.max == 7 {
        "matches"
    } else {
        "DIFFERS from"
    };
    outcome(
        range.min == 4 && (lo, hi) == (range.min, range.max),
        format!(
            "sweep min {} max {} ({flag} the reference 7); brute force {lo}/{hi}",
            range.min, range.max
        ),
    )
}

fn targeted_design() -> Outcome {
    let robot = RobotSpec {
        footprint_side: 0.092,
        module_mass: 0.5,
        module_count: 1,
        workspace_width: 1.0,
        workspace_depth: 1.0,
    };
    let d = match design_platform(&robot, DesignMode::Targeted) {
        Ok(d) => d,
        Err(e) => return outcome(false, e.to_string()),
    };
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_porous-platform"))
        .args([
            "--out-dir",
            dir.path().to_str().unwrap(),
            "design",
            "--robot-size",
            "0.092",
            "--workspace",
            "1.0",
        ])
        .output()
        .unwrap()
        .status;
    let feasible = d.max_feasible_spacing.unwrap_or(0.0);
    outcome(
        (d.glass.size - 0.080).abs() < 1e-12
            && feasible >= 0.030 - 1e-12
            && (d.plate.thickness - 0.030).abs() < 1e-12
            && status.code() == Some(0),
        format!(
            "glass {} m, feasible spacing {} m, used spacing {} m, thickness {} m, cli exit {:?}",
            d.glass.size,
            feasible,
            d.plate.hole_spacing,
            d.plate.thickness,
            status.code()
        ),
    )
}

/// Slide after the film ends and the largest speed change while on it.
fn glide(dt: f64) -> (f64, f64) {
    let mut s = Preset::FilmBoundaryGlide.scenario();
    s.output_interval = dt;
    let v0 = s.bodies[0].vx;
    let traj = simulate(&s, dt, s.t_end).unwrap();
    let mut on_film_dv: f64 = 0.0;
    let mut onset = None;
    for st in &traj.samples {
        let b = &st.bodies[0];
        if b.x < 0.0 {
            on_film_dv = on_film_dv.max((b.vx - v0).abs());
        } else if onset.is_none() {
            onset = Some(b.x);
        }
    }
    let stop = traj
        .samples
        .iter()
        .find(|st| st.bodies[0].vx == 0.0)
        .map(|st| st.bodies[0].x);
    match (onset, stop) {
        (Some(a), Some(b)) => (b - a, on_film_dv),
        _ => (f64::NAN, on_film_dv),
    }
}

fn boundary_glide() -> Outcome {
    let (v0, mu) = (0.1, 0.2);
    let expected = v0 * v0 / (2.0 * mu * G);
    let (slide, dv) = glide(1e-4);
    let (fine, _) = glide(5e-5);
    let ratio = (slide - expected).abs() / (fine - expected).abs();
    outcome(
        dv <= 1e-9 && (slide - expected).abs() <= 0.01 * expected && (ratio - 2.0).abs() <= 0.02,
        format!(
            "film dv {dv:.1e}; slide {slide:.6e} m vs {expected:.6e} m ({:.3}%); error ratio dt/(dt/2) {ratio:.4}",
            100.0 * (slide - expected).abs() / expected
        ),
    )
}

fn self_rotation() -> Outcome {
    let sweep = PI / 2.0;
    let s = Preset::SelfRotationFloating.scenario();
    let mut max_l: f64 = 0.0;
    let traj = simulate_with(&s, s.dt, s.t_end, |st| {
        // L about the origin: halves spin, the module does not translate
        let m = &st.modules[0];
        let l = m.upper.inertia * m.upper.omega
            + m.lower.inertia * m.lower.omega
            + m.mass() * (m.x * m.vy - m.y * m.vx);
        max_l = max_l.max(l.abs());
    })
    .unwrap();
    let (a, b) = (&traj.samples[0].modules[0], &traj.last().modules[0]);
    let du = b.upper.theta - a.upper.theta;
    let dl = b.lower.theta - a.lower.theta;

    let f = Preset::SelfRotationFriction.scenario();
    let pinned = simulate(&f, f.dt, f.t_end).unwrap();
    let lower_change = pinned
        .samples
        .iter()
        .map(|st| (st.modules[0].lower.theta - f.modules[0].lower.theta).abs())
        .fold(0.0, f64::max);
    outcome(
        (du - sweep / 2.0).abs() <= 1e-6 && (dl + sweep / 2.0).abs() <= 1e-6 && max_l <= 1e-9 && lower_change <= 1e-9,
        format!("upper {du:+.9} rad, lower {dl:+.9} rad, max |L| {max_l:.1e}, pinned lower change {lower_change:.1e}"),
    )
}

fn external_couple() -> Outcome {
    let s = Preset::ExternalCouple.scenario();
    let seg = s.bodies[0].external_torque.segments[0];
    let dt = s.dt;
    let mut prev: Option<f64> = None;
    let (mut steps, mut worst) = (0u64, 0.0f64);
    let traj = simulate_with(&s, dt, s.t_end, |st| {
        let w = st.bodies[0].omega;
        if st.time - dt > seg.end + 0.5 * dt {
            if let Some(p) = prev {
                worst = worst.max((w - p).abs());
                steps += 1;
            }
        }
        prev = Some(w);
    })
    .unwrap();
    let expected = seg.torque * (seg.end - seg.start) / s.bodies[0].inertia;
    let w = traj.last().bodies[0].omega;
    outcome(
        worst <= 1e-12 && steps >= 100_000 && rel(w, expected) < 1e-9,
        format!("omega {w:.9} rad/s (oracle {expected:.9}), max step change {worst:.1e} over {steps} steps"),
    )
}

fn arrival(traj: &Trajectory, k: usize, edge: f64) -> Option<f64> {
    traj.samples.windows(2).find_map(|w| {
        let (a, b) = (w[0].bodies[k].x.abs(), w[1].bodies[k].x.abs());
        (a <= edge && b > edge).then(|| w[0].time + (edge - a) / (b - a) * (w[1].time - w[0].time))
    })
}

fn magnet_separation() -> Outcome {
    let s = Preset::MagnetSeparation.scenario();
    let mut max_p: f64 = 0.0;
    let momentum = |st: &SimState| {
        let px: f64 = st.bodies.iter().map(|b| b.mass * b.vx).sum();
        let py: f64 = st.bodies.iter().map(|b| b.mass * b.vy).sum();
        px.hypot(py)
    };
    let traj = simulate_with(&s, s.dt, s.t_end, |st| max_p = max_p.max(momentum(st))).unwrap();
    let after = traj.samples.iter().find(|st| st.time > 1.5).unwrap();
    let (va, vb) = (after.bodies[0].vx, after.bodies[1].vx);
    let j_over_m = 0.01 / 0.5;
    let edge = s.platform.bounds.max[0];
    let (ta, tb) = (arrival(&traj, 0, edge), arrival(&traj, 1, edge));
    let gap = match (ta, tb) {
        (Some(a), Some(b)) => (a - b).abs(),
        _ => f64::INFINITY,
    };
    outcome(
        (va + j_over_m).abs() <= 1e-12
            && (vb - j_over_m).abs() <= 1e-12
            && gap <= s.output_interval
            && max_p <= 1e-9,
        format!(
            "speeds {va:+.15} / {vb:+.15} m/s, arrivals {ta:.3?} / {tb:.3?} s, max |P| {max_p:.1e}"
        ),
    )
}

fn state_bits(traj: &Trajectory) -> Vec<u64> {
    traj.samples
        .iter()
        .flat_map(|st| {
            let mut v = vec![st.time];
            for b in &st.bodies {
                v.extend([b.x, b.y, b.theta, b.vx, b.vy, b.omega]);
            }
            for m in &st.modules {
                v.extend([
                    m.x,
                    m.y,
                    m.vx,
                    m.vy,
                    m.upper.theta,
                    m.upper.omega,
                    m.lower.theta,
                    m.lower.omega,
                ]);
            }
            v
        })
        .map(f64::to_bits)
        .collect()
}

fn mirrored_bits(traj: &Trajectory) -> Vec<f64> {
    traj.samples
        .iter()
        .flat_map(|st| {
            let mut v = vec![st.time];
            for b in &st.bodies {
                v.extend([-b.x, b.y, -b.theta, -b.vx, b.vy, -b.omega]);
            }
            for m in &st.modules {
                v.extend([
                    -m.x,
                    m.y,
                    -m.vx,
                    m.vy,
                    -m.upper.theta,
                    -m.upper.omega,
                    -m.lower.theta,
                    -m.lower.omega,
                ]);
            }
            v
        })
        .collect()
}

fn determinism_and_symmetry() -> Outcome {
    let mut identical = true;
    let mut worst: f64 = 0.0;
    for p in Preset::ALL {
        let s = p.scenario();
        let a = simulate(&s, s.dt, s.t_end).unwrap();
        let b = simulate(&s, s.dt, s.t_end).unwrap();
        identical &= state_bits(&a) == state_bits(&b);
        let m = s.mirrored_x();
        let mt = simulate(&m, m.dt, m.t_end).unwrap();
        let expected = mirrored_bits(&a);
        let got: Vec<f64> = state_bits(&mt).into_iter().map(f64::from_bits).collect();
        if expected.len() != got.len() {
            worst = f64::INFINITY;
        } else {
            worst = expected
                .iter()
                .zip(&got)
                .map(|(x, y)| (x - y).abs())
                .fold(worst, f64::max);
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for _ in 0..2 {
        let ok = Command::new(env!("CARGO_BIN_EXE_porous-platform"))
            .args([
                "--out-dir",
                dir.path().to_str().unwrap(),
                "sim",
                "--preset",
                "magnet_separation",
            ])
            .output()
            .unwrap()
            .status
            .success();
        identical &= ok;
        csvs.push((
            std::fs::read(dir.path().join("trajectory.csv")).unwrap_or_default(),
            std::fs::read(dir.path().join("diagnostics.csv")).unwrap_or_default(),
        ));
    }
    identical &= csvs[0] == csvs[1] && !csvs[0].0.is_empty();
    outcome(
        identical && worst <= 1e-12,
        format!("reruns bit-identical {identical} (all presets, cli CSV bytes); max mirror deviation {worst:.1e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let s = rng.gen_range(0.002..0.06);
        let size = rng.gen_range(0.0..0.25);
        let c = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (g, oracle) = if rng.gen_bool(0.5) {
            (GlassPuck::circle(size, 0.0), brute_circle(c, size, s))
        } else {
            (GlassPuck::square(size, 0.0), brute_square(c, size, s))
        };
        if count_holes_under_glass(c, &g, s) != oracle {
            mismatches += 1;
        }
    }
    let mut bad_grids = 0;
    for _ in 0..100 {
        let nx: usize = rng.gen_range(2..60);
        let ny: usize = rng.gen_range(2..60);
        let s = 0.01;
        let plate = PorousPlate::new(0.03, (nx - 1) as f64 * s, (ny - 1) as f64 * s, s).unwrap();
        let units = supply_unit_layout(&plate).unwrap();
        let formula = ((nx + 1) / 2) * ((ny + 1) / 2);
        let served: usize = units.iter().map(|u| u.holes_served.len()).sum();
        if units.len() != formula || served != nx * ny {
            bad_grids += 1;
        }
    }
    outcome(
        mismatches == 0 && bad_grids == 0,
        format!("{mismatches} covering mismatches in 1000 cases, {bad_grids} unit-count mismatches in 100 grids"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("flow model exactness", flow_model_exactness),
        ("naive contact force", naive_contact_force),
        ("load capacity", load_capacity_80mm),
        ("hole covering", hole_covering),
        ("targeted design", targeted_design),
        ("boundary glide", boundary_glide),
        ("self rotation", self_rotation),
        ("external couple", external_couple),
        ("magnet separation", magnet_separation),
        ("determinism and symmetry", determinism_and_symmetry),
        ("oracle equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
