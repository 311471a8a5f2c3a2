// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial axis of a `C × H × W × D` activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Axis {
    /// Elevation (channels of the sensor).
    H,
    /// Azimuth.
    W,
    /// Waveform time.
    D,
}

impl Axis {
    /// Index of this axis in a `C × H × W × D` array.
    pub fn dim(self) -> usize {
        match self {
            Axis::H => 1,
            Axis::W => 2,
            Axis::D => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::H => "H",
            Axis::W => "W",
            Axis::D => "D",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub base_channels: usize,
    /// Kernel extent over (H, W, D); each must be odd.
    pub kernel_size: [usize; 3],
    pub encoder_stages: usize,
    /// Pooling factor over (H, W, D) after each encoder stage.
    pub downsample: Vec<[usize; 3]>,
    /// Bottleneck attention, applied in this order.
    pub attention_axes: Vec<Axis>,
    pub class_weights: [f64; 3],
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            base_channels: 32,
            kernel_size: [3, 5, 7],
            encoder_stages: 3,
            downsample: vec![[1, 2, 2]; 3],
            attention_axes: vec![Axis::W, Axis::H, Axis::D],
            class_weights: [0.1, 0.3, 0.6],
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.base_channels == 0 {
            return Err(Error::invalid("base_channels must be >= 1"));
        }
        if self.kernel_size.iter().any(|&k| k == 0 || k % 2 == 0) {
            return Err(Error::invalid(format!(
                "kernel sizes must be odd, got {:?}",
                self.kernel_size
            )));
        }
        if self.encoder_stages == 0 || self.downsample.len() != self.encoder_stages {
            return Err(Error::invalid(format!(
                "need one downsample triple per encoder stage ({} stages, {} triples)",
                self.encoder_stages,
                self.downsample.len()
            )));
        }
        if self.downsample.iter().flatten().any(|&f| f == 0) {
            return Err(Error::invalid("downsample factors must be >= 1"));
        }
        for (n, a) in self.attention_axes.iter().enumerate() {
            if self.attention_axes[..n].contains(a) {
                return Err(Error::invalid(format!(
                    "attention axis {} listed twice",
                    a.name()
                )));
            }
        }
        if self.class_weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::invalid("class weights must be positive"));
        }
        Ok(())
    }

    /// Channel width of encoder stage `s` (and of the matching decoder stage).
    pub fn stage_channels(&self, s: usize) -> usize {
        self.base_channels << s
    }

    /// Product of pooling factors over all stages, per (H, W, D).
    pub fn total_downsample(&self) -> [usize; 3] {
        let mut t = [1; 3];
        for f in &self.downsample {
            for a in 0..3 {
                t[a] *= f[a];
            }
        }
        t
    }
}
