// SPDX-License-Identifier: Apache-2.0

use log::warn;
use rayon::prelude::*;

use crate::error::Result;
use crate::waveform::{ScanTimingMatrix, WaveformTensor};

/// Naive simultaneous-sensing baseline: subtract each group's mean waveform
/// from its members and clamp at zero.
///
/// The mean includes the member itself, so a singleton group cancels to an
/// all-zero row.
pub fn avg_subtract(a: &WaveformTensor, tm: &ScanTimingMatrix) -> Result<WaveformTensor> {
    tm.check_matches(a.sensor())?;
    let d = a.sensor().time_bins;
    if tm.is_degenerate() {
        warn!("group size 1: average subtraction cancels every waveform");
        return Ok(WaveformTensor::zeros(a.sensor()));
    }
    let groups = tm.groups();
    let means: Vec<Vec<f32>> = (0..groups.len())
        .into_par_iter()
        .map(|g| {
            let members = groups.members(g);
            let mut acc = vec![0f64; d];
            for &m in members {
                for (s, &v) in acc.iter_mut().zip(a.row_flat(m)) {
                    *s += v as f64;
                }
            }
            let n = members.len() as f64;
            acc.into_iter().map(|s| (s / n) as f32).collect()
        })
        .collect();
    let ts = tm.timestamps();
    let mut out = a.clone();
    out.data_mut()
        .par_chunks_mut(d)
        .enumerate()
        .for_each(|(cell, row)| {
            for (v, &mu) in row.iter_mut().zip(&means[ts[cell] as usize]) {
                *v = (*v - mu).max(0.0);
            }
        });
    Ok(out)
}
