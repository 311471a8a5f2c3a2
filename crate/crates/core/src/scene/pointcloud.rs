// SPDX-License-Identifier: Apache-2.0

//! KITTI-style `.bin` point clouds: packed little-endian `f32`
//! quadruples `(x, y, z, intensity)`, 16 bytes per point.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3D {
    pub x: f32,
    pub y: f32,
    pub z: f32,
    pub intensity: f32,
}

impl Point3D {
    pub fn new(x: f32, y: f32, z: f32, intensity: f32) -> Self {
        Self { x, y, z, intensity }
    }

    pub fn xyz(&self) -> [f64; 3] {
        [self.x as f64, self.y as f64, self.z as f64]
    }

    pub fn range(&self) -> f64 {
        let [x, y, z] = self.xyz();
        (x * x + y * y + z * z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite() && self.intensity.is_finite()
    }
}

const RECORD: usize = 16;

pub fn parse_pointcloud(bytes: &[u8]) -> Result<Vec<Point3D>> {
    if !bytes.len().is_multiple_of(RECORD) {
        let whole = bytes.len() / RECORD * RECORD;
        return Err(Error::format(
            whole as u64,
            format!(
                "point cloud length {} is not a multiple of {RECORD} bytes; trailing record truncated",
                bytes.len()
            ),
        ));
    }
    let f = |b: &[u8]| f32::from_le_bytes([b[0], b[1], b[2], b[3]]);
    bytes
        .chunks_exact(RECORD)
        .enumerate()
        .map(|(n, r)| {
            let p = Point3D::new(f(&r[0..4]), f(&r[4..8]), f(&r[8..12]), f(&r[12..16]));
            if p.is_finite() {
                Ok(p)
            } else {
                Err(Error::format(
                    (n * RECORD) as u64,
                    "non-finite point coordinate",
                ))
            }
        })
        .collect()
}

pub fn encode_pointcloud(points: &[Point3D]) -> Vec<u8> {
    let mut out = Vec::with_capacity(points.len() * RECORD);
    for p in points {
        for v in [p.x, p.y, p.z, p.intensity] {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn load_pointcloud_bin(path: impl AsRef<Path>) -> Result<Vec<Point3D>> {
    parse_pointcloud(&fs::read(path)?)
}

pub fn write_pointcloud_bin(path: impl AsRef<Path>, points: &[Point3D]) -> Result<()> {
    fs::write(path, encode_pointcloud(points))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_known_points() {
        let mut bytes = Vec::new();
        for v in [1.0f32, 2.0, 3.0, 0.5, -4.0, 5.5, -6.25, 0.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        assert_eq!(bytes.len(), 32);
        let pts = parse_pointcloud(&bytes).unwrap();
        assert_eq!(
            pts,
            vec![
                Point3D::new(1.0, 2.0, 3.0, 0.5),
                Point3D::new(-4.0, 5.5, -6.25, 0.0)
            ]
        );
        assert_eq!(encode_pointcloud(&pts), bytes);
    }

    #[test]
    fn empty_file_is_empty_cloud() {
        assert!(parse_pointcloud(&[]).unwrap().is_empty());
    }

    #[test]
    fn seventeen_bytes_is_an_error() {
        match parse_pointcloud(&[0u8; 17]) {
            Err(Error::Format { offset, .. }) => assert_eq!(offset, 16),
            other => panic!("expected format error, got {other:?}"),
        }
    }
}
