// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// Per-voxel class of a waveform sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Label {
    Background = 0,
    Legitimate = 1,
    Attack = 2,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Background, Label::Legitimate, Label::Attack];

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(Label::Background),
            1 => Some(Label::Legitimate),
            2 => Some(Label::Attack),
            _ => None,
        }
    }
}

/// H × W × D voxel labels, same layout as [`crate::WaveformTensor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegMask {
    dims: (usize, usize, usize),
    labels: Vec<u8>,
}

impl SegMask {
    pub fn zeros(h: usize, w: usize, d: usize) -> Self {
        Self {
            dims: (h, w, d),
            labels: vec![0; h * w * d],
        }
    }

    pub fn filled(h: usize, w: usize, d: usize, label: Label) -> Self {
        Self {
            dims: (h, w, d),
            labels: vec![label as u8; h * w * d],
        }
    }

    pub fn from_vec(dims: (usize, usize, usize), labels: Vec<u8>) -> Result<Self> {
        if labels.len() != dims.0 * dims.1 * dims.2 {
            return Err(Error::invalid(format!(
                "mask of {}x{}x{} needs {} labels, got {}",
                dims.0,
                dims.1,
                dims.2,
                dims.0 * dims.1 * dims.2,
                labels.len()
            )));
        }
        if let Some(pos) = labels.iter().position(|&v| v > 2) {
            return Err(Error::invalid(format!(
                "label {} at flat index {pos} outside {{0, 1, 2}}",
                labels[pos]
            )));
        }
        Ok(Self { dims, labels })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Mutable access to raw labels. Writers must keep values in `0..=2`.
    pub fn labels_mut(&mut self) -> &mut [u8] {
        &mut self.labels
    }

    pub fn get(&self, i: usize, j: usize, t: usize) -> Label {
        let (_, w, d) = self.dims;
        Label::from_u8(self.labels[(i * w + j) * d + t]).expect("label domain")
    }

    pub fn row_flat(&self, cell: usize) -> &[u8] {
        let d = self.dims.2;
        &self.labels[cell * d..(cell + 1) * d]
    }

    pub fn count(&self, label: Label) -> usize {
        let v = label as u8;
        self.labels.iter().filter(|&&l| l == v).count()
    }

    pub fn check_dims(&self, dims: (usize, usize, usize)) -> Result<()> {
        if self.dims != dims {
            return Err(Error::invalid(format!(
                "mask is {}x{}x{}, expected {}x{}x{}",
                self.dims.0, self.dims.1, self.dims.2, dims.0, dims.1, dims.2
            )));
        }
        Ok(())
    }
}
