// SPDX-License-Identifier: Apache-2.0

//! Point recovery accuracy, attack success rate and mask IoU.

mod report;

pub use report::{
    build_report, RecoveryReport, ReportConfig, ReportEntry, ReportInputs, CSV_HEADER,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{Label, SegMask};
use crate::waveform::{argmax, RangeImage, SensorConfig, WaveformTensor};

/// Range tolerance for a recovered point, meters.
pub const DEFAULT_RECOVERY_THRESHOLD_M: f64 = 0.5;

/// Tally of in-sector directions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryCounts {
    /// Directions with a benign return.
    pub evaluated: usize,
    /// Evaluated directions whose recovered range is within the threshold.
    pub recovered: usize,
    /// Evaluated directions with no recovered return.
    pub dropped: usize,
    /// Evaluated directions whose recovered return is too far off.
    pub displaced: usize,
    /// Directions without a benign return that still report one.
    pub false_positives: usize,
}

impl RecoveryCounts {
    pub fn accuracy(&self) -> Result<f64> {
        if self.evaluated == 0 {
            return Err(Error::UndefinedMetric(
                "no in-sector direction has a benign return".into(),
            ));
        }
        Ok(100.0 * self.recovered as f64 / self.evaluated as f64)
    }
}

/// Compare recovered ranges against benign ranges along each in-sector direction.
pub fn recovery_counts(
    benign: &RangeImage,
    recovered: &RangeImage,
    sc: &SensorConfig,
    sector_deg: [f64; 2],
    threshold_m: f64,
) -> Result<RecoveryCounts> {
    benign.check_same_dims(recovered)?;
    if benign.dims() != (sc.channels, sc.azimuth_bins) {
        return Err(Error::invalid(format!(
            "range image dims {:?} do not match sensor ({}, {})",
            benign.dims(),
            sc.channels,
            sc.azimuth_bins
        )));
    }
    if !(threshold_m > 0.0) {
        return Err(Error::invalid(format!(
            "threshold must be > 0, got {threshold_m}"
        )));
    }
    let w = sc.azimuth_bins;
    let in_sector: Vec<bool> = (0..w).map(|j| sc.in_sector(j, sector_deg)).collect();
    let mut c = RecoveryCounts::default();
    for (cell, (b, r)) in benign.cells().iter().zip(recovered.cells()).enumerate() {
        if !in_sector[cell % w] {
            continue;
        }
        match (b, r) {
            (Some(b), Some(r)) => {
                c.evaluated += 1;
                if (r.distance - b.distance).abs() <= threshold_m {
                    c.recovered += 1;
                } else {
                    c.displaced += 1;
                }
            }
            (Some(_), None) => {
                c.evaluated += 1;
                c.dropped += 1;
            }
            (None, Some(_)) => c.false_positives += 1,
            (None, None) => {}
        }
    }
    Ok(c)
}

/// Percentage of evaluated in-sector directions recovered within `threshold_m`.
pub fn point_recovery_accuracy(
    benign: &RangeImage,
    recovered: &RangeImage,
    sc: &SensorConfig,
    sector_deg: [f64; 2],
    threshold_m: f64,
) -> Result<f64> {
    recovery_counts(benign, recovered, sc, sector_deg, threshold_m)?.accuracy()
}

/// Percentage of in-sector directions whose strongest bin is labeled attack.
pub fn attack_success_rate(
    attacked: &WaveformTensor,
    gt: &SegMask,
    sector_deg: [f64; 2],
) -> Result<f64> {
    gt.check_dims(attacked.dims())?;
    let sc = attacked.sensor();
    let (h, w, _) = attacked.dims();
    let mut total = 0usize;
    let mut hits = 0usize;
    for j in (0..w).filter(|&j| sc.in_sector(j, sector_deg)) {
        for i in 0..h {
            let cell = i * w + j;
            let (t, _) = argmax(attacked.row_flat(cell));
            total += 1;
            if gt.row_flat(cell)[t] == Label::Attack as u8 {
                hits += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::UndefinedMetric(
            "attack sector contains no directions".into(),
        ));
    }
    Ok(100.0 * hits as f64 / total as f64)
}

/// Intersection over union of the voxels labeled `class`; 1 when both are empty.
pub fn mask_iou(pred: &SegMask, gt: &SegMask, class: Label) -> Result<f64> {
    pred.check_dims(gt.dims())?;
    let c = class as u8;
    let (mut inter, mut union) = (0usize, 0usize);
    for (&p, &g) in pred.labels().iter().zip(gt.labels()) {
        let (p, g) = (p == c, g == c);
        inter += (p && g) as usize;
        union += (p || g) as usize;
    }
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}
