// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::defense::{
    apply_mask, avg_subtract, coherence_mask, outlier, resize_mask, DEFAULT_ROR_MIN_NEIGHBORS,
    DEFAULT_ROR_RADIUS, DEFAULT_SOR_K, DEFAULT_SOR_STD_RATIO,
};
use crate::error::{Error, Result};
use crate::mask::SegMask;
use crate::scene::range_image_to_points;
use crate::waveform::{peak_detect, PulseModel, RangeImage, ScanTimingMatrix, WaveformTensor};

/// Minimum group amplitude flagged by the coherence detector.
pub const DEFAULT_COHERENCE_THETA: f32 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum DefenseMethod {
    None,
    OracleMask,
    AvgSubtract,
    Coherence { theta_min: f32 },
    ExternalMask { path: PathBuf },
    Ror { radius: f64, min_neighbors: usize },
    Sor { k: usize, std_ratio: f64 },
}

impl DefenseMethod {
    pub fn coherence() -> Self {
        DefenseMethod::Coherence {
            theta_min: DEFAULT_COHERENCE_THETA,
        }
    }

    pub fn ror() -> Self {
        DefenseMethod::Ror {
            radius: DEFAULT_ROR_RADIUS,
            min_neighbors: DEFAULT_ROR_MIN_NEIGHBORS,
        }
    }

    pub fn sor() -> Self {
        DefenseMethod::Sor {
            k: DEFAULT_SOR_K,
            std_ratio: DEFAULT_SOR_STD_RATIO,
        }
    }

    /// Short name used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            DefenseMethod::None => "none",
            DefenseMethod::OracleMask => "oracle",
            DefenseMethod::AvgSubtract => "avgsub",
            DefenseMethod::Coherence { .. } => "coherence",
            DefenseMethod::ExternalMask { .. } => "mask",
            DefenseMethod::Ror { .. } => "ror",
            DefenseMethod::Sor { .. } => "sor",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DefenseMethod::Coherence { theta_min }
                if !(theta_min > 0.0 && theta_min.is_finite()) =>
            {
                Err(Error::invalid(format!(
                    "theta_min must be positive, got {theta_min}"
                )))
            }
            DefenseMethod::Ror { radius, .. } if !(radius > 0.0 && radius.is_finite()) => Err(
                Error::invalid(format!("ror radius must be positive, got {radius}")),
            ),
            DefenseMethod::Sor { k, std_ratio }
                if k == 0 || !(std_ratio > 0.0 && std_ratio.is_finite()) =>
            {
                Err(Error::invalid(format!(
                    "sor needs k >= 1 and std_ratio > 0, got k={k} std_ratio={std_ratio}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Whether the method relies on simultaneous-sensing groups.
    pub fn needs_groups(&self) -> bool {
        matches!(
            self,
            DefenseMethod::AvgSubtract | DefenseMethod::Coherence { .. }
        )
    }
}

pub struct DefenseInputs<'a> {
    pub attacked: &'a WaveformTensor,
    pub timing: &'a ScanTimingMatrix,
    /// Required by the oracle defense only.
    pub ground_truth: Option<&'a SegMask>,
    pub pulse: &'a PulseModel,
    pub peak_threshold: f32,
}

#[derive(Debug, Clone)]
pub struct DefenseOutcome {
    pub recovered: RangeImage,
    /// Mask produced or consumed by mask-based defenses.
    pub predicted_mask: Option<SegMask>,
    /// Waveform after a waveform-level defense; `None` for point-cloud filters.
    pub defended: Option<WaveformTensor>,
    /// Set when the method relies on groups and every group is a singleton.
    pub degenerate: bool,
}

/// Run a defense end to end and peak-detect the result.
pub fn run_defense(method: &DefenseMethod, inputs: &DefenseInputs<'_>) -> Result<DefenseOutcome> {
    method.validate()?;
    let a = inputs.attacked;
    inputs.timing.check_matches(a.sensor())?;
    let detect = |w: &WaveformTensor| peak_detect(w, inputs.peak_threshold, inputs.pulse);
    let degenerate = method.needs_groups() && inputs.timing.is_degenerate();
    let masked = |m: SegMask| -> Result<DefenseOutcome> {
        let defended = apply_mask(a, &m)?;
        Ok(DefenseOutcome {
            recovered: detect(&defended)?,
            predicted_mask: Some(m),
            defended: Some(defended),
            degenerate,
        })
    };
    match method {
        DefenseMethod::None => Ok(DefenseOutcome {
            recovered: detect(a)?,
            predicted_mask: None,
            defended: Some(a.clone()),
            degenerate,
        }),
        DefenseMethod::OracleMask => {
            let gt = inputs
                .ground_truth
                .ok_or_else(|| Error::invalid("oracle defense needs a ground-truth mask"))?;
            masked(gt.clone())
        }
        DefenseMethod::AvgSubtract => {
            let defended = avg_subtract(a, inputs.timing)?;
            Ok(DefenseOutcome {
                recovered: detect(&defended)?,
                predicted_mask: None,
                defended: Some(defended),
                degenerate,
            })
        }
        DefenseMethod::Coherence { theta_min } => {
            masked(coherence_mask(a, inputs.timing, *theta_min)?)
        }
        DefenseMethod::ExternalMask { path } => {
            let m = crate::io::read_mask(path)?;
            masked(resize_mask(&m, a.dims())?)
        }
        DefenseMethod::Ror {
            radius,
            min_neighbors,
        } => {
            let ri = detect(a)?;
            let (cells, points) = range_image_to_points(&ri, a.sensor());
            let keep = outlier::ror_keep(&points, *radius, *min_neighbors)?;
            Ok(DefenseOutcome {
                recovered: retain(&ri, &cells, &keep),
                predicted_mask: None,
                defended: None,
                degenerate,
            })
        }
        DefenseMethod::Sor { k, std_ratio } => {
            let ri = detect(a)?;
            let (cells, points) = range_image_to_points(&ri, a.sensor());
            let keep = outlier::sor_keep(&points, *k, *std_ratio)?;
            Ok(DefenseOutcome {
                recovered: retain(&ri, &cells, &keep),
                predicted_mask: None,
                defended: None,
                degenerate,
            })
        }
    }
}

fn retain(ri: &RangeImage, cells: &[usize], keep: &[bool]) -> RangeImage {
    let (h, w) = ri.dims();
    let mut out = RangeImage::empty(h, w);
    for (&cell, _) in cells.iter().zip(keep).filter(|(_, &k)| k) {
        out.cells_mut()[cell] = ri.cells()[cell];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_validation() {
        assert_eq!(DefenseMethod::coherence().name(), "coherence");
        assert!(DefenseMethod::Coherence { theta_min: 0.0 }
            .validate()
            .is_err());
        assert!(DefenseMethod::Ror {
            radius: -1.0,
            min_neighbors: 1
        }
        .validate()
        .is_err());
        assert!(DefenseMethod::Sor {
            k: 0,
            std_ratio: 2.0
        }
        .validate()
        .is_err());
        assert!(DefenseMethod::sor().validate().is_ok());
    }

    #[test]
    fn serde_tagging() {
        let j = serde_json::to_string(&DefenseMethod::coherence()).unwrap();
        assert_eq!(j, r#"{"method":"coherence","theta_min":1.0}"#);
        let back: DefenseMethod = serde_json::from_str(&j).unwrap();
        assert_eq!(back, DefenseMethod::coherence());
    }
}
