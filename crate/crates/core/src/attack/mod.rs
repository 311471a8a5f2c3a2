// SPDX-License-Identifier: Apache-2.0

//! Jamming pulse trains, superposition with observation noise, and
//! ground-truth voxel labels.

mod config;
mod inject;
mod labels;
mod train;

pub use config::{AttackConfig, NoiseConfig};
pub use inject::{add_noise, inject, superpose};
pub use labels::{label_ground_truth, label_half_width, pulse_centers};
pub use train::{generate_attack_train, pulse_schedule, AttackPulse};
