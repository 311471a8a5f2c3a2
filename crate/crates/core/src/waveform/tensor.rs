// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::waveform::SensorConfig;

/// Dense H × W × D amplitude tensor, row-major over (channel, azimuth, bin).
///
/// Each (channel, azimuth) pair owns one contiguous row of `time_bins`
/// samples.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformTensor {
    sensor: SensorConfig,
    data: Vec<f32>,
}

impl WaveformTensor {
    pub fn zeros(sensor: &SensorConfig) -> Self {
        Self {
            data: vec![0.0; sensor.num_voxels()],
            sensor: sensor.clone(),
        }
    }

    pub fn from_vec(sensor: &SensorConfig, data: Vec<f32>) -> Result<Self> {
        if data.len() != sensor.num_voxels() {
            return Err(Error::invalid(format!(
                "expected {} samples, got {}",
                sensor.num_voxels(),
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite sample at flat index {pos}"
            )));
        }
        Ok(Self {
            sensor: sensor.clone(),
            data,
        })
    }

    pub fn sensor(&self) -> &SensorConfig {
        &self.sensor
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.sensor.channels,
            self.sensor.azimuth_bins,
            self.sensor.time_bins,
        )
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }

    pub fn row(&self, i: usize, j: usize) -> &[f32] {
        let d = self.sensor.time_bins;
        let start = (i * self.sensor.azimuth_bins + j) * d;
        &self.data[start..start + d]
    }

    /// Row of the direction with flat index `cell = i * W + j`.
    pub fn row_flat(&self, cell: usize) -> &[f32] {
        let d = self.sensor.time_bins;
        &self.data[cell * d..(cell + 1) * d]
    }

    pub fn row_flat_mut(&mut self, cell: usize) -> &mut [f32] {
        let d = self.sensor.time_bins;
        &mut self.data[cell * d..(cell + 1) * d]
    }

    pub fn rows(&self) -> std::slice::Chunks<'_, f32> {
        self.data.chunks(self.sensor.time_bins)
    }

    pub fn get(&self, i: usize, j: usize, t: usize) -> f32 {
        self.row(i, j)[t]
    }

    pub fn check_same_dims(&self, other: &WaveformTensor) -> Result<()> {
        self.sensor.check_same_dims(&other.sensor)
    }

    pub fn min(&self) -> f32 {
        self.data.iter().copied().fold(f32::INFINITY, f32::min)
    }

    pub fn max(&self) -> f32 {
        self.data.iter().copied().fold(f32::NEG_INFINITY, f32::max)
    }
}
