// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::Point3D;
use crate::waveform::{RangeImage, Return, SensorConfig};

/// Which point wins when several project into the same cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeepRule {
    /// First-return semantics.
    #[default]
    Nearest,
    Strongest,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionStats {
    pub projected: usize,
    /// Outside the vertical or horizontal field of view.
    pub out_of_fov: usize,
    /// Beyond the waveform window's maximum range.
    pub out_of_range: usize,
    /// Lost to a collision with a preferred point.
    pub collisions: usize,
}

/// Spherical projection of a point cloud onto the sensor grid.
pub fn project_to_range_image(
    points: &[Point3D],
    sc: &SensorConfig,
    keep: KeepRule,
) -> Result<(RangeImage, ProjectionStats)> {
    sc.validate()?;
    let mut ri = RangeImage::empty(sc.channels, sc.azimuth_bins);
    let mut stats = ProjectionStats::default();
    let max_range = sc.max_range();
    for p in points {
        let [x, y, z] = p.xyz();
        let d = p.range();
        if d > max_range {
            stats.out_of_range += 1;
            continue;
        }
        let (Some(j), Some(i)) = (sc.azimuth_bin(y.atan2(x)), sc.channel(z.atan2(x.hypot(y))))
        else {
            stats.out_of_fov += 1;
            continue;
        };
        let cand = Return {
            distance: d,
            intensity: p.intensity as f64,
        };
        match ri.get(i, j) {
            None => {
                ri.set(i, j, Some(cand));
                stats.projected += 1;
            }
            Some(old) => {
                stats.collisions += 1;
                let better = match keep {
                    KeepRule::Nearest => cand.distance < old.distance,
                    KeepRule::Strongest => cand.intensity > old.intensity,
                };
                if better {
                    ri.set(i, j, Some(cand));
                }
            }
        }
    }
    Ok((ri, stats))
}

/// Place each present cell at its distance along the cell's center ray.
///
/// Returns flat cell indices alongside the points.
pub fn range_image_to_points(ri: &RangeImage, sc: &SensorConfig) -> (Vec<usize>, Vec<Point3D>) {
    let w = sc.azimuth_bins;
    ri.cells()
        .iter()
        .enumerate()
        .filter_map(|(cell, r)| {
            let r = r.as_ref()?;
            let [ux, uy, uz] = sc.direction(cell / w, cell % w);
            let d = r.distance;
            Some((
                cell,
                Point3D::new(
                    (ux * d) as f32,
                    (uy * d) as f32,
                    (uz * d) as f32,
                    r.intensity as f32,
                ),
            ))
        })
        .unzip()
}

/// Keep every `factor`-th channel starting at channel 0.
pub fn channel_downsample(ri: &RangeImage, factor: usize) -> Result<RangeImage> {
    let (h, w) = ri.dims();
    if factor == 0 || h % factor != 0 {
        return Err(Error::invalid(format!(
            "{h} channels are not divisible by downsample factor {factor}"
        )));
    }
    let cells = ri
        .cells()
        .chunks(w)
        .step_by(factor)
        .flatten()
        .copied()
        .collect();
    RangeImage::from_cells(h / factor, w, cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_point_maps_to_center_bin() {
        let sc = SensorConfig::default();
        let (ri, stats) =
            project_to_range_image(&[Point3D::new(10.0, 0.0, 0.0, 0.7)], &sc, KeepRule::Nearest)
                .unwrap();
        assert_eq!(stats.projected, 1);
        let i = sc.channel(0.0).unwrap();
        let r = ri.get(i, 900).unwrap();
        assert_eq!(r.distance, 10.0);
        assert!((r.intensity - 0.7).abs() < 1e-7);
    }

    #[test]
    fn collision_keeps_nearest() {
        let sc = SensorConfig::default();
        let pts = [
            Point3D::new(7.0, 0.0, 0.0, 1.0),
            Point3D::new(5.0, 0.0, 0.0, 0.2),
        ];
        let (ri, stats) = project_to_range_image(&pts, &sc, KeepRule::Nearest).unwrap();
        assert_eq!(ri.present_count(), 1);
        assert_eq!(stats.collisions, 1);
        assert_eq!(ri.get(sc.channel(0.0).unwrap(), 900).unwrap().distance, 5.0);
        let (ri, _) = project_to_range_image(&pts, &sc, KeepRule::Strongest).unwrap();
        assert_eq!(ri.get(sc.channel(0.0).unwrap(), 900).unwrap().distance, 7.0);
    }

    #[test]
    fn above_fov_dropped() {
        let sc = SensorConfig::default();
        let (ri, stats) =
            project_to_range_image(&[Point3D::new(10.0, 0.0, 5.0, 1.0)], &sc, KeepRule::Nearest)
                .unwrap();
        assert_eq!(ri.present_count(), 0);
        assert_eq!(stats.out_of_fov, 1);
    }

    #[test]
    fn points_round_trip_through_cells() {
        let sc = SensorConfig::with_dims(8, 36, 800);
        let mut ri = RangeImage::empty(8, 36);
        ri.set(
            3,
            7,
            Some(Return {
                distance: 12.5,
                intensity: 0.5,
            }),
        );
        ri.set(
            0,
            35,
            Some(Return {
                distance: 40.0,
                intensity: 2.0,
            }),
        );
        let (cells, pts) = range_image_to_points(&ri, &sc);
        assert_eq!(cells, vec![35, 3 * 36 + 7]);
        let (back, _) = project_to_range_image(&pts, &sc, KeepRule::Nearest).unwrap();
        for (a, b) in back.cells().iter().zip(ri.cells()) {
            match (a, b) {
                (Some(a), Some(b)) => assert!((a.distance - b.distance).abs() < 1e-5),
                (None, None) => {}
                _ => panic!("cell presence differs"),
            }
        }
    }

    #[test]
    fn downsample_keeps_even_rows() {
        let mut ri = RangeImage::empty(64, 2);
        for i in 0..64 {
            ri.set(
                i,
                0,
                Some(Return {
                    distance: i as f64,
                    intensity: 1.0,
                }),
            );
        }
        let half = channel_downsample(&ri, 2).unwrap();
        assert_eq!(half.dims(), (32, 2));
        for i in 0..32 {
            assert_eq!(half.get(i, 0).unwrap().distance, (2 * i) as f64);
        }
        assert_eq!(channel_downsample(&ri, 1).unwrap(), ri);
        assert!(channel_downsample(&ri, 3).is_err());
    }
}
