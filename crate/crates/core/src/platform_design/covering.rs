//! Counting inlet holes under the glass puck.
//!
//! Holes form an infinite square lattice `{(i·s, j·s)}`. A hole counts as
//! covered when its centre lies inside or on the glass outline.

use serde::{Deserialize, Serialize};

use super::{GlassPuck, GlassShape};

/// Sweep resolution per grid-cell side used by [`min_max_covered_holes`].
pub const SWEEP_STEPS: usize = 200;

/// Candidate spacing resolution for [`max_hole_spacing`], m.
pub const SPACING_RESOLUTION: f64 = 0.001;

/// Minimum number of holes that must always sit under the glass.
pub const MIN_COVERED_HOLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageRange {
    pub min: usize,
    pub max: usize,
}

/// Holes of a pitch-`spacing` lattice covered by `glass` centred at `center`.
pub fn count_holes_under_glass(center: (f64, f64), glass: &GlassPuck, spacing: f64) -> usize {
    if !(spacing > 0.0) || !(glass.size > 0.0) {
        return 0;
    }
    let (cx, cy) = center;
    let s = spacing;
    match glass.shape {
        GlassShape::Circle => {
            let r = 0.5 * glass.size;
            let r_sq = r * r;
            let j_lo = ((cy - r) / s).floor() as i64;
            let j_hi = ((cy + r) / s).ceil() as i64;
            let mut total = 0usize;
            for j in j_lo..=j_hi {
                let dy = j as f64 * s - cy;
                let dy_sq = dy * dy;
                if dy_sq > r_sq {
                    continue;
                }
                let inside = |i: i64| {
                    let dx = i as f64 * s - cx;
                    dx * dx + dy_sq <= r_sq
                };
                let half_chord = (r_sq - dy_sq).sqrt();
                let (lo, hi) = snap_interval(
                    ((cx - half_chord) / s).ceil() as i64,
                    ((cx + half_chord) / s).floor() as i64,
                    inside,
                );
                if hi >= lo {
                    total += (hi - lo + 1) as usize;
                }
            }
            total
        }
        GlassShape::Square => {
            let half = 0.5 * glass.size;
            axis_count(cx, half, s) * axis_count(cy, half, s)
        }
    }
}

/// Lattice indices `k` with `|k·s − c| ≤ half`.
fn axis_count(c: f64, half: f64, s: f64) -> usize {
    let inside = |k: i64| (k as f64 * s - c).abs() <= half;
    let (lo, hi) = snap_interval(
        ((c - half) / s).ceil() as i64,
        ((c + half) / s).floor() as i64,
        inside,
    );
    if hi >= lo {
        (hi - lo + 1) as usize
    } else {
        0
    }
}

/// Corrects an analytic index interval against the exact membership test.
///
/// Rounding in the chord or quotient can shift either end by one lattice
/// step; the endpoints are moved until they agree with `inside`.
fn snap_interval(mut lo: i64, mut hi: i64, inside: impl Fn(i64) -> bool) -> (i64, i64) {
    while inside(lo - 1) {
        lo -= 1;
    }
    while lo <= hi && !inside(lo) {
        lo += 1;
    }
    while inside(hi + 1) {
        hi += 1;
    }
    while hi >= lo && !inside(hi) {
        hi -= 1;
    }
    (lo, hi)
}

/// Reference count by enumerating every lattice point in a padded box.
pub fn count_holes_brute_force(center: (f64, f64), glass: &GlassPuck, spacing: f64) -> usize {
    if !(spacing > 0.0) || !(glass.size > 0.0) {
        return 0;
    }
    let s = spacing;
    let half = glass.size / 2.0;
    let i0 = ((center.0 - half) / s).floor() as i64 - 2;
    let i1 = ((center.0 + half) / s).ceil() as i64 + 2;
    let j0 = ((center.1 - half) / s).floor() as i64 - 2;
    let j1 = ((center.1 + half) / s).ceil() as i64 + 2;
    let mut n = 0;
    for i in i0..=i1 {
        for j in j0..=j1 {
            let dx = i as f64 * s - center.0;
            let dy = j as f64 * s - center.1;
            let hit = match glass.shape {
                GlassShape::Circle => dx * dx + dy * dy <= half * half,
                GlassShape::Square => dx.abs() <= half && dy.abs() <= half,
            };
            if hit {
                n += 1;
            }
        }
    }
    n
}

/// Min and max covered-hole count over all centre positions in one cell.
pub fn min_max_covered_holes(glass: &GlassPuck, spacing: f64) -> CoverageRange {
    min_max_covered_holes_with(glass, spacing, SWEEP_STEPS)
}

/// Same as [`min_max_covered_holes`] with an explicit sweep resolution.
///
/// Centres are placed at `(a·s/n, b·s/n)` for `a, b ∈ 0..=n`, so the cell
/// corners (on a hole), edge midpoints and centre are always visited.
pub fn min_max_covered_holes_with(glass: &GlassPuck, spacing: f64, steps: usize) -> CoverageRange {
    let n = steps.max(1);
    let mut range = CoverageRange {
        min: usize::MAX,
        max: 0,
    };
    for b in 0..=n {
        let y = spacing * b as f64 / n as f64;
        for a in 0..=n {
            let x = spacing * a as f64 / n as f64;
            let c = count_holes_under_glass((x, y), glass, spacing);
            range.min = range.min.min(c);
            range.max = range.max.max(c);
        }
    }
    range
}

/// Largest spacing on a 1 mm grid that keeps at least four holes covered.
///
/// Returns `None` when not even a 1 mm pitch satisfies the floor.
pub fn max_hole_spacing(glass: &GlassPuck) -> Option<f64> {
    // four lattice points need a diagonal of s·√2 inside the outline
    let upper = (glass.size / SPACING_RESOLUTION).floor() as i64;
    (1..=upper)
        .rev()
        .map(|k| k as f64 * SPACING_RESOLUTION)
        .find(|&s| min_max_covered_holes(glass, s).min >= MIN_COVERED_HOLES)
}
