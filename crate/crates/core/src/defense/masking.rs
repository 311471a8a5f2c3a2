// SPDX-License-Identifier: Apache-2.0

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mask::{Label, SegMask};
use crate::waveform::{ScanTimingMatrix, WaveformTensor};

/// Zero every voxel the mask labels as attack.
pub fn apply_mask(a: &WaveformTensor, m: &SegMask) -> Result<WaveformTensor> {
    m.check_dims(a.dims())?;
    let mut out = a.clone();
    let attack = Label::Attack as u8;
    let d = a.sensor().time_bins;
    out.data_mut()
        .par_chunks_mut(d)
        .zip(m.labels().par_chunks(d))
        .for_each(|(row, labels)| {
            for (v, &l) in row.iter_mut().zip(labels) {
                if l == attack {
                    *v = 0.0;
                }
            }
        });
    Ok(out)
}

/// Flag bins whose amplitude stays at or above `theta_min` on every member
/// of a simultaneous-sensing group.
///
/// An external jamming pulse reaches every receiver of a group with the same
/// shape, while legitimate echoes depend on what each beam hits. The group
/// minimum is therefore large only on attack bins, unless all members see
/// returns at the same range (e.g. a flat wall); those aligned echoes are
/// flagged too. Singleton groups are left unlabeled. Label 1 is never
/// emitted.
pub fn coherence_mask(
    a: &WaveformTensor,
    tm: &ScanTimingMatrix,
    theta_min: f32,
) -> Result<SegMask> {
    tm.check_matches(a.sensor())?;
    if !(theta_min.is_finite()) {
        return Err(Error::invalid("coherence threshold must be finite"));
    }
    let (h, w, d) = a.dims();
    let mut mask = SegMask::zeros(h, w, d);
    if tm.is_degenerate() {
        warn!("group size 1: coherence detection has no simultaneous returns to compare");
        return Ok(mask);
    }
    let groups = tm.groups();
    let flags: Vec<Vec<bool>> = (0..groups.len())
        .into_par_iter()
        .map(|g| {
            let members = groups.members(g);
            if members.len() < 2 {
                return Vec::new();
            }
            let mut min = a.row_flat(members[0]).to_vec();
            for &m in &members[1..] {
                for (lo, &v) in min.iter_mut().zip(a.row_flat(m)) {
                    *lo = lo.min(v);
                }
            }
            min.into_iter().map(|v| v >= theta_min).collect()
        })
        .collect();
    let ts = tm.timestamps();
    mask.labels_mut()
        .par_chunks_mut(d)
        .enumerate()
        .for_each(|(cell, row)| {
            let f = &flags[ts[cell] as usize];
            for (l, &hit) in row.iter_mut().zip(f) {
                if hit {
                    *l = Label::Attack as u8;
                }
            }
        });
    Ok(mask)
}

fn resample_index(dst: usize, src_len: usize, dst_len: usize) -> usize {
    if dst_len >= src_len {
        dst / (dst_len / src_len)
    } else {
        let f = src_len / dst_len;
        dst * f + (f - 1) / 2
    }
}

/// Nearest-neighbor resize between commensurate grids.
///
/// Each axis must scale by an integer factor up or down.
pub fn resize_mask(m: &SegMask, target: (usize, usize, usize)) -> Result<SegMask> {
    let src = m.dims();
    let axes = [
        (src.0, target.0, "H"),
        (src.1, target.1, "W"),
        (src.2, target.2, "D"),
    ];
    for (s, t, name) in axes {
        let ok = s > 0 && t > 0 && (s % t == 0 || t % s == 0);
        if !ok {
            return Err(Error::invalid(format!(
                "cannot resize axis {name} from {s} to {t}: sizes must be integer multiples"
            )));
        }
    }
    if src == target {
        return Ok(m.clone());
    }
    let (th, tw, td) = target;
    let t_idx: Vec<usize> = (0..td).map(|t| resample_index(t, src.2, td)).collect();
    let mut out = SegMask::zeros(th, tw, td);
    out.labels_mut()
        .par_chunks_mut(td)
        .enumerate()
        .for_each(|(cell, row)| {
            let si = resample_index(cell / tw, src.0, th);
            let sj = resample_index(cell % tw, src.1, tw);
            let src_row = m.row_flat(si * src.1 + sj);
            for (o, &st) in row.iter_mut().zip(&t_idx) {
                *o = src_row[st];
            }
        });
    Ok(out)
}
