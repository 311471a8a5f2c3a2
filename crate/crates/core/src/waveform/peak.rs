// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::waveform::{PulseModel, RangeImage, Return, WaveformTensor};

/// Default detection threshold, amplitude units.
pub const DEFAULT_PEAK_THRESHOLD: f32 = 0.25;

/// First index of the maximum; ties resolve to the nearer bin.
#[inline]
pub fn argmax(row: &[f32]) -> (usize, f32) {
    let mut best = (0, row[0]);
    for (t, &v) in row.iter().enumerate().skip(1) {
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

/// Single-return detection: strongest bin per direction, thresholded.
pub fn peak_detect(w: &WaveformTensor, threshold: f32, pm: &PulseModel) -> Result<RangeImage> {
    if !(threshold >= 0.0) {
        return Err(Error::invalid(format!(
            "peak threshold must be >= 0, got {threshold}"
        )));
    }
    pm.validate()?;
    let sc = w.sensor();
    let cells: Vec<Option<Return>> = w
        .data()
        .par_chunks(sc.time_bins)
        .map(|row| {
            let (t, amp) = argmax(row);
            (amp >= threshold).then(|| Return {
                distance: sc.ns_to_range(t as f64 * sc.bin_ns),
                intensity: amp as f64 / pm.gamma,
            })
        })
        .collect();
    RangeImage::from_cells(sc.channels, sc.azimuth_bins, cells)
}
