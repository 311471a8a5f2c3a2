// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::attack::{AttackConfig, NoiseConfig};
use crate::defense::{run_defense, DefenseInputs, DefenseMethod, DefenseOutcome};
use crate::error::Result;
use crate::mask::{Label, SegMask};
use crate::metrics::{attack_success_rate, mask_iou, recovery_counts, RecoveryCounts};
use crate::waveform::{PulseModel, RangeImage, ScanTimingMatrix, WaveformTensor};

/// Configuration echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub seed: Option<u64>,
    pub phi: Option<usize>,
    pub attack: Option<AttackConfig>,
    pub noise: Option<NoiseConfig>,
    pub pulse: PulseModel,
    pub sector_deg: [f64; 2],
    pub threshold_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub method: String,
    pub point_recovery_accuracy: Option<f64>,
    pub attack_success_rate: Option<f64>,
    pub object_iou: Option<f64>,
    pub attack_iou: Option<f64>,
    pub counts: Option<RecoveryCounts>,
    /// The method needs simultaneous-sensing groups but every group is a singleton.
    pub degenerate: bool,
    pub error: Option<String>,
}

impl ReportEntry {
    pub fn failed(method: &str, err: impl ToString) -> Self {
        Self {
            method: method.to_string(),
            point_recovery_accuracy: None,
            attack_success_rate: None,
            object_iou: None,
            attack_iou: None,
            counts: None,
            degenerate: false,
            error: Some(err.to_string()),
        }
    }

    /// Score a recovered range image, plus optional waveform and mask outputs.
    #[allow(clippy::too_many_arguments)]
    pub fn score(
        method: &str,
        benign: &RangeImage,
        recovered: &RangeImage,
        defended: Option<&WaveformTensor>,
        predicted: Option<&SegMask>,
        gt: Option<&SegMask>,
        sc: &crate::waveform::SensorConfig,
        sector_deg: [f64; 2],
        threshold_m: f64,
    ) -> Result<Self> {
        let counts = recovery_counts(benign, recovered, sc, sector_deg, threshold_m)?;
        let accuracy = counts.accuracy().ok();
        let asr = match (defended, gt) {
            (Some(w), Some(gt)) => Some(attack_success_rate(w, gt, sector_deg)?),
            _ => None,
        };
        let (object_iou, attack_iou) = match (predicted, gt) {
            (Some(p), Some(gt)) => (
                Some(mask_iou(p, gt, Label::Legitimate)?),
                Some(mask_iou(p, gt, Label::Attack)?),
            ),
            _ => (None, None),
        };
        Ok(Self {
            method: method.to_string(),
            point_recovery_accuracy: accuracy,
            attack_success_rate: asr,
            object_iou,
            attack_iou,
            counts: Some(counts),
            degenerate: false,
            error: accuracy
                .is_none()
                .then(|| "no in-sector direction has a benign return".to_string()),
        })
    }

    /// One CSV row matching [`CSV_HEADER`]; undefined values are blank.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.4}")).unwrap_or_default();
        let c = self.counts.unwrap_or_default();
        let counts = if self.counts.is_some() {
            format!(
                "{},{},{},{},{}",
                c.evaluated, c.recovered, c.dropped, c.displaced, c.false_positives
            )
        } else {
            ",,,,".to_string()
        };
        format!(
            "{},{},{},{},{},{}",
            self.method,
            opt(self.point_recovery_accuracy),
            opt(self.attack_success_rate),
            opt(self.object_iou),
            opt(self.attack_iou),
            counts
        )
    }
}

pub const CSV_HEADER: &str = "method,point_recovery_accuracy,attack_success_rate,object_iou,attack_iou,evaluated,recovered,dropped,displaced,false_positives";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub config: ReportConfig,
    pub entries: Vec<ReportEntry>,
}

impl RecoveryReport {
    /// Pretty JSON; field order follows the struct definitions.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let _ = writeln!(out, "{}", e.csv_row());
        }
        out
    }
}

/// Everything needed to run and score defenses on one attacked scan.
pub struct ReportInputs<'a> {
    pub benign: &'a RangeImage,
    pub attacked: &'a WaveformTensor,
    pub timing: &'a ScanTimingMatrix,
    pub ground_truth: &'a SegMask,
    pub pulse: &'a PulseModel,
    pub peak_threshold: f32,
    pub sector_deg: [f64; 2],
    pub threshold_m: f64,
}

fn entry_for(method: &DefenseMethod, inputs: &ReportInputs<'_>) -> Result<ReportEntry> {
    let outcome: DefenseOutcome = run_defense(
        method,
        &DefenseInputs {
            attacked: inputs.attacked,
            timing: inputs.timing,
            ground_truth: Some(inputs.ground_truth),
            pulse: inputs.pulse,
            peak_threshold: inputs.peak_threshold,
        },
    )?;
    let mut e = ReportEntry::score(
        method.name(),
        inputs.benign,
        &outcome.recovered,
        outcome.defended.as_ref(),
        outcome.predicted_mask.as_ref(),
        Some(inputs.ground_truth),
        inputs.attacked.sensor(),
        inputs.sector_deg,
        inputs.threshold_m,
    )?;
    e.degenerate = outcome.degenerate;
    Ok(e)
}

/// Run each method in order; a failing method yields an entry carrying its error.
pub fn build_report(
    config: ReportConfig,
    methods: &[DefenseMethod],
    inputs: &ReportInputs<'_>,
) -> RecoveryReport {
    let entries = methods
        .iter()
        .map(|m| entry_for(m, inputs).unwrap_or_else(|e| ReportEntry::failed(m.name(), e)))
        .collect();
    RecoveryReport { config, entries }
}
