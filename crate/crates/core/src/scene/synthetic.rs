// SPDX-License-Identifier: Apache-2.0

//! Ray-cast synthetic scenes: a ground plane, axis-aligned boxes and
//! vertical wall segments, seen from a sensor at the origin.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::waveform::{RangeImage, Return, SensorConfig};

const TEXTURE_STREAM: u64 = 0;
const DROPOUT_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundPlane {
    /// Height of the plane relative to the sensor, meters (negative: below).
    pub z: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxObstacle {
    pub center: [f64; 3],
    pub size: [f64; 3],
    pub intensity: f64,
}

/// Vertical planar segment between two ground-plane points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallSegment {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub z_range: [f64; 2],
    pub intensity: f64,
}

/// What a direction reports when its ray hits nothing.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Background {
    #[default]
    Absent,
    MaxRange {
        intensity: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SceneSpec {
    pub seed: u64,
    pub ground: Option<GroundPlane>,
    pub boxes: Vec<BoxObstacle>,
    pub walls: Vec<WallSegment>,
    pub background: Background,
    /// Per-direction intensities are clamped into this range.
    pub intensity_range: [f64; 2],
    /// Relative per-direction intensity variation in `[0, 1)`: each hit
    /// reports `base * (1 + texture * u)` with `u ~ U(-1, 1)`.
    pub texture: f64,
    /// Fraction of hits randomly reported as absent.
    pub dropout: f64,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            ground: None,
            boxes: Vec::new(),
            walls: Vec::new(),
            background: Background::Absent,
            intensity_range: [0.0, f64::MAX],
            texture: 0.0,
            dropout: 0.0,
        }
    }
}

impl SceneSpec {
    pub fn is_empty(&self) -> bool {
        self.ground.is_none() && self.boxes.is_empty() && self.walls.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.intensity_range;
        if !(lo >= 0.0 && lo <= hi) {
            return Err(Error::invalid(format!(
                "intensity range [{lo}, {hi}] is invalid"
            )));
        }
        let within = |v: f64| v >= lo && v <= hi;
        let intensities = self
            .ground
            .iter()
            .map(|g| g.intensity)
            .chain(self.boxes.iter().map(|b| b.intensity))
            .chain(self.walls.iter().map(|w| w.intensity));
        for v in intensities {
            if !within(v) {
                return Err(Error::invalid(format!(
                    "obstacle intensity {v} outside configured range [{lo}, {hi}]"
                )));
            }
        }
        if self
            .boxes
            .iter()
            .any(|b| b.size.iter().any(|&s| !(s > 0.0)))
        {
            return Err(Error::invalid("box sizes must be positive"));
        }
        if !(0.0..1.0).contains(&self.texture) {
            return Err(Error::invalid(format!(
                "texture must be in [0, 1), got {}",
                self.texture
            )));
        }
        if !(0.0..=1.0).contains(&self.dropout) {
            return Err(Error::invalid(format!(
                "dropout must be in [0, 1], got {}",
                self.dropout
            )));
        }
        Ok(())
    }
}

fn hit_ground(u: [f64; 3], g: &GroundPlane) -> Option<f64> {
    (u[2] < 0.0 && g.z < 0.0).then(|| g.z / u[2])
}

/// Slab test; returns the entry distance for rays starting outside.
fn hit_box(u: [f64; 3], b: &BoxObstacle) -> Option<f64> {
    let mut t_near = f64::NEG_INFINITY;
    let mut t_far = f64::INFINITY;
    for ((&ua, &c), &s) in u.iter().zip(&b.center).zip(&b.size) {
        let lo = c - s / 2.0;
        let hi = c + s / 2.0;
        if ua == 0.0 {
            if !(lo <= 0.0 && 0.0 <= hi) {
                return None;
            }
            continue;
        }
        let (t0, t1) = (lo / ua, hi / ua);
        t_near = t_near.max(t0.min(t1));
        t_far = t_far.min(t0.max(t1));
    }
    (t_near <= t_far && t_near > 0.0).then_some(t_near)
}

fn hit_wall(u: [f64; 3], w: &WallSegment) -> Option<f64> {
    let (ax, ay) = (w.start[0], w.start[1]);
    let (ex, ey) = (w.end[0] - ax, w.end[1] - ay);
    // t * (ux, uy) = A + s * E
    let det = u[0] * (-ey) - u[1] * (-ex);
    if det.abs() < 1e-15 {
        return None;
    }
    let t = (ax * (-ey) - ay * (-ex)) / det;
    let s = (u[0] * ay - u[1] * ax) / det;
    if t <= 0.0 || !(0.0..=1.0).contains(&s) {
        return None;
    }
    let z = t * u[2];
    (z >= w.z_range[0] && z <= w.z_range[1]).then_some(t)
}

/// Ray-cast every (channel, azimuth) center ray.
pub fn gen_synthetic_scene(spec: &SceneSpec, sc: &SensorConfig) -> Result<RangeImage> {
    spec.validate()?;
    sc.validate()?;
    let w = sc.azimuth_bins;
    let max_range = sc.max_range();
    let [ilo, ihi] = spec.intensity_range;
    let cells: Vec<Option<Return>> = (0..sc.num_directions())
        .into_par_iter()
        .map(|cell| {
            let (i, j) = (cell / w, cell % w);
            let u = sc.direction(i, j);
            let mut best: Option<(f64, f64)> = None;
            let mut consider = |t: Option<f64>, intensity: f64| {
                if let Some(t) = t {
                    if t <= max_range && best.is_none_or(|(bt, _)| t < bt) {
                        best = Some((t, intensity));
                    }
                }
            };
            if let Some(g) = &spec.ground {
                consider(hit_ground(u, g), g.intensity);
            }
            for b in &spec.boxes {
                consider(hit_box(u, b), b.intensity);
            }
            for wall in &spec.walls {
                consider(hit_wall(u, wall), wall.intensity);
            }
            let keys = [i as u64, j as u64];
            match best {
                Some((t, base)) => {
                    let drop =
                        rng::uniform(spec.seed, &[keys[0], keys[1], DROPOUT_STREAM], 0.0, 1.0);
                    if drop < spec.dropout {
                        return None;
                    }
                    let jitter =
                        rng::uniform(spec.seed, &[keys[0], keys[1], TEXTURE_STREAM], -1.0, 1.0);
                    let intensity = (base * (1.0 + spec.texture * jitter)).clamp(ilo, ihi);
                    Some(Return {
                        distance: t,
                        intensity,
                    })
                }
                None => match spec.background {
                    Background::Absent => None,
                    Background::MaxRange { intensity } => Some(Return {
                        distance: max_range,
                        intensity,
                    }),
                },
            }
        })
        .collect();
    RangeImage::from_cells(sc.channels, sc.azimuth_bins, cells)
}
