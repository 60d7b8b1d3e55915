//! Gas supply units: each feeds a 2×2 block of inlet holes.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::DesignError;
use crate::porous_flow::PorousPlate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupplyUnit {
    /// `(row, col)` of the 2×2 hole block.
    pub grid_position: (usize, usize),
    /// Row-major hole indices (`row · holes_x + col`).
    pub holes_served: Vec<usize>,
    /// Indices of hose-linked neighbour units.
    pub hose_links: Vec<usize>,
    pub is_source_unit: bool,
}

/// Number of units for an `nx × ny` hole grid.
pub fn unit_count(holes_x: usize, holes_y: usize) -> usize {
    holes_x.div_ceil(2) * holes_y.div_ceil(2)
}

/// Tiles the hole grid into 2×2 blocks, row-major.
///
/// Blocks on the last row or column serve fewer holes when the grid side is
/// odd. Hoses follow a serpentine path through the rows; the first unit on
/// that path (block `(0, 0)`) is the one connected to the gas source.
pub fn supply_unit_layout(plate: &PorousPlate) -> Result<Vec<SupplyUnit>, DesignError> {
    plate.validate()?;
    let nx = plate.holes_x();
    let ny = plate.holes_y();
    if nx == 0 || ny == 0 {
        return Err(DesignError::Invalid("plate has no inlet holes".into()));
    }
    let rows = ny.div_ceil(2);
    let cols = nx.div_ceil(2);
    let index = |r: usize, c: usize| r * cols + c;

    let mut units: Vec<SupplyUnit> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .map(|(r, c)| {
            let mut holes_served = Vec::with_capacity(4);
            for hy in 2 * r..(2 * r + 2).min(ny) {
                for hx in 2 * c..(2 * c + 2).min(nx) {
                    holes_served.push(hy * nx + hx);
                }
            }
            SupplyUnit {
                grid_position: (r, c),
                holes_served,
                hose_links: Vec::new(),
                is_source_unit: false,
            }
        })
        .collect();

    let path: Vec<usize> = (0..rows)
        .flat_map(|r| {
            let cs: Box<dyn Iterator<Item = usize>> = if r % 2 == 0 {
                Box::new(0..cols)
            } else {
                Box::new((0..cols).rev())
            };
            cs.map(move |c| index(r, c))
        })
        .collect();
    for w in path.windows(2) {
        units[w[0]].hose_links.push(w[1]);
        units[w[1]].hose_links.push(w[0]);
    }
    units[path[0]].is_source_unit = true;
    Ok(units)
}

/// Structural check of a layout against its plate.
///
/// Every hole is served exactly once, interior units serve four holes, one
/// unit on the grid edge is the source, hose links are symmetric and reach
/// every unit from the source, and the count matches [`unit_count`].
pub fn check_supply_layout(plate: &PorousPlate, units: &[SupplyUnit]) -> Result<(), String> {
    let (nx, ny) = (plate.holes_x(), plate.holes_y());
    if units.len() != unit_count(nx, ny) {
        return Err(format!(
            "{} units for a {nx}x{ny} grid, expected {}",
            units.len(),
            unit_count(nx, ny)
        ));
    }
    let mut seen = vec![0u32; nx * ny];
    for (k, u) in units.iter().enumerate() {
        for &h in &u.holes_served {
            match seen.get_mut(h) {
                Some(n) => *n += 1,
                None => return Err(format!("unit {k} serves missing hole {h}")),
            }
        }
        let (r, c) = u.grid_position;
        let full = 2 * r + 1 < ny && 2 * c + 1 < nx;
        if (full && u.holes_served.len() != 4)
            || u.holes_served.is_empty()
            || u.holes_served.len() > 4
        {
            return Err(format!("unit {k} serves {} holes", u.holes_served.len()));
        }
    }
    if let Some(h) = seen.iter().position(|&n| n != 1) {
        return Err(format!("hole {h} served {} times", seen[h]));
    }
    let sources: Vec<usize> = (0..units.len())
        .filter(|&k| units[k].is_source_unit)
        .collect();
    let [src] = sources[..] else {
        return Err(format!("{} source units", sources.len()));
    };
    let (r, c) = units[src].grid_position;
    let (rows, cols) = (ny.div_ceil(2), nx.div_ceil(2));
    if !(r == 0 || c == 0 || r + 1 == rows || c + 1 == cols) {
        return Err("source unit is not on the grid edge".into());
    }
    let mut visited = vec![false; units.len()];
    let mut queue = VecDeque::from([src]);
    visited[src] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &units[u].hose_links {
            if v >= units.len() || !units[v].hose_links.contains(&u) {
                return Err(format!("hose link {u} -> {v} is not symmetric"));
            }
            if !visited[v] {
                visited[v] = true;
                queue.push_back(v);
            }
        }
    }
    match visited.iter().position(|&v| !v) {
        Some(k) => Err(format!("unit {k} is not reachable from the source")),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plate_with_grid(nx: usize, ny: usize) -> PorousPlate {
        let s = 0.01;
        PorousPlate::new(0.03, (nx - 1) as f64 * s, (ny - 1) as f64 * s, s).unwrap()
    }

    #[test]
    fn two_by_two_is_one_unit() {
        let p = plate_with_grid(2, 2);
        let u = supply_unit_layout(&p).unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u[0].holes_served, vec![0, 1, 2, 3]);
        assert!(u[0].is_source_unit);
        check_supply_layout(&p, &u).unwrap();
    }

    #[test]
    fn five_by_five_has_nine_units() {
        let p = plate_with_grid(5, 5);
        let u = supply_unit_layout(&p).unwrap();
        assert_eq!(u.len(), 9);
        assert_eq!(u[8].holes_served, vec![24]);
        assert_eq!(u[2].holes_served.len(), 2);
        check_supply_layout(&p, &u).unwrap();
    }

    #[test]
    fn generic_preset_unit_count() {
        let p = PorousPlate::new(0.03, 2.0, 2.0, 0.01).unwrap();
        assert_eq!(p.hole_count(), 40_401);
        let u = supply_unit_layout(&p).unwrap();
        assert_eq!(u.len(), 10_201);
        check_supply_layout(&p, &u).unwrap();
    }

    #[test]
    fn random_grids_match_counting_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let nx = rng.gen_range(1..40);
            let ny = rng.gen_range(1..40);
            let p = plate_with_grid(nx, ny);
            assert_eq!((p.holes_x(), p.holes_y()), (nx, ny));
            let u = supply_unit_layout(&p).unwrap();
            let oracle = ((nx + 1) / 2) * ((ny + 1) / 2);
            assert_eq!(u.len(), oracle);
            assert_eq!(unit_count(nx, ny), oracle);
            check_supply_layout(&p, &u).unwrap();
        }
    }

    #[test]
    fn invalid_plate_rejected() {
        let mut p = plate_with_grid(3, 3);
        p.hole_spacing = 0.0;
        assert!(supply_unit_layout(&p).is_err());
    }
}
