// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// A single detected return along one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Return {
    /// Meters.
    pub distance: f64,
    pub intensity: f64,
}

/// Organized point cloud: one optional return per (channel, azimuth bin).
#[derive(Debug, Clone, PartialEq)]
pub struct RangeImage {
    channels: usize,
    azimuth_bins: usize,
    cells: Vec<Option<Return>>,
}

impl RangeImage {
    pub fn empty(channels: usize, azimuth_bins: usize) -> Self {
        Self {
            channels,
            azimuth_bins,
            cells: vec![None; channels * azimuth_bins],
        }
    }

    pub fn from_cells(
        channels: usize,
        azimuth_bins: usize,
        cells: Vec<Option<Return>>,
    ) -> Result<Self> {
        if cells.len() != channels * azimuth_bins {
            return Err(Error::invalid(format!(
                "expected {} cells for {channels}x{azimuth_bins}, got {}",
                channels * azimuth_bins,
                cells.len()
            )));
        }
        Ok(Self {
            channels,
            azimuth_bins,
            cells,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn azimuth_bins(&self) -> usize {
        self.azimuth_bins
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.channels, self.azimuth_bins)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Return> {
        self.cells[i * self.azimuth_bins + j]
    }

    pub fn set(&mut self, i: usize, j: usize, cell: Option<Return>) {
        self.cells[i * self.azimuth_bins + j] = cell;
    }

    /// Cells in row-major (channel, azimuth) order.
    pub fn cells(&self) -> &[Option<Return>] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [Option<Return>] {
        &mut self.cells
    }

    pub fn present_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Multiply every intensity by `s`.
    pub fn scale_intensity(&mut self, s: f64) {
        for r in self.cells.iter_mut().flatten() {
            r.intensity *= s;
        }
    }

    pub fn check_same_dims(&self, other: &RangeImage) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::invalid(format!(
                "range image mismatch: {}x{} vs {}x{}",
                self.channels, self.azimuth_bins, other.channels, other.azimuth_bins
            )));
        }
        Ok(())
    }
}
