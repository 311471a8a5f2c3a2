// SPDX-License-Identifier: Apache-2.0

//! Scene ingestion and generation: `.bin` point clouds, spherical
//! projection, channel downsampling and ray-cast synthetic scenes.

mod pointcloud;
mod projection;
mod synthetic;

pub use pointcloud::{
    encode_pointcloud, load_pointcloud_bin, parse_pointcloud, write_pointcloud_bin, Point3D,
};
pub use projection::{
    channel_downsample, project_to_range_image, range_image_to_points, KeepRule, ProjectionStats,
};
pub use synthetic::{
    gen_synthetic_scene, Background, BoxObstacle, GroundPlane, SceneSpec, WallSegment,
};
