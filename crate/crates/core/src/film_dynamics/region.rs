use serde::{Deserialize, Serialize};

use super::Body2D;

/// Closed axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Rect {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min[0] && x <= self.max[0] && y >= self.min[1] && y <= self.max[1]
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.max[0] > self.min[0] && self.max[1] > self.min[1])
    }

    /// Reflection about the y axis.
    pub fn mirrored_x(&self) -> Self {
        Self {
            min: [-self.max[0], self.min[1]],
            max: [-self.min[0], self.max[1]],
        }
    }
}

/// Surface attributes of one patch of the platform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceAttrs {
    pub pressurized: bool,
    /// Kinetic friction coefficient, used only when unpressurized.
    #[serde(default)]
    pub mu: f64,
}

impl SurfaceAttrs {
    pub const FLOATING: Self = Self {
        pressurized: true,
        mu: 0.0,
    };

    pub fn friction(mu: f64) -> Self {
        Self {
            pressurized: false,
            mu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub min: [f64; 2],
    pub max: [f64; 2],
    pub pressurized: bool,
    #[serde(default)]
    pub mu: f64,
}

impl Region {
    pub fn new(rect: Rect, attrs: SurfaceAttrs) -> Self {
        Self {
            min: rect.min,
            max: rect.max,
            pressurized: attrs.pressurized,
            mu: attrs.mu,
        }
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.min, self.max)
    }

    pub fn attrs(&self) -> SurfaceAttrs {
        SurfaceAttrs {
            pressurized: self.pressurized,
            mu: self.mu,
        }
    }
}

/// Pressurized and unpressurized patches of the platform.
///
/// Lookup is by body centre: the first region containing the centre wins,
/// otherwise `default` applies. Centres outside `bounds` have left the
/// platform and also get `default`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformRegionMap {
    pub bounds: Rect,
    #[serde(default)]
    pub regions: Vec<Region>,
    #[serde(default = "default_surface")]
    pub default: SurfaceAttrs,
}

/// Default surface off the pressurized patches: dry contact, μ = 0.2.
pub const DEFAULT_MU: f64 = 0.2;

fn default_surface() -> SurfaceAttrs {
    SurfaceAttrs::friction(DEFAULT_MU)
}

impl PlatformRegionMap {
    /// Whole platform pressurized.
    pub fn floating(bounds: Rect) -> Self {
        Self {
            bounds,
            regions: vec![Region::new(bounds, SurfaceAttrs::FLOATING)],
            default: default_surface(),
        }
    }

    pub fn attrs_at(&self, x: f64, y: f64) -> SurfaceAttrs {
        if !self.bounds.contains(x, y) {
            return self.default;
        }
        self.regions
            .iter()
            .find(|r| r.rect().contains(x, y))
            .map(Region::attrs)
            .unwrap_or(self.default)
    }

    pub fn in_bounds(&self, x: f64, y: f64) -> bool {
        self.bounds.contains(x, y)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.bounds.is_degenerate() {
            return Err("platform bounds are degenerate".into());
        }
        for (i, r) in self.regions.iter().enumerate() {
            if !(r.mu >= 0.0) {
                return Err(format!("regions[{i}].mu must be non-negative"));
            }
        }
        if !(self.default.mu >= 0.0) {
            return Err("default.mu must be non-negative".into());
        }
        Ok(())
    }

    pub fn mirrored_x(&self) -> Self {
        Self {
            bounds: self.bounds.mirrored_x(),
            regions: self
                .regions
                .iter()
                .map(|r| Region::new(r.rect().mirrored_x(), r.attrs()))
                .collect(),
            default: self.default,
        }
    }
}

/// `(frictionless, μ_eff)` for the region under the body centre.
pub fn region_friction(map: &PlatformRegionMap, body: &Body2D) -> (bool, f64) {
    let a = map.attrs_at(body.x, body.y);
    if a.pressurized {
        (true, 0.0)
    } else {
        (false, a.mu)
    }
}
