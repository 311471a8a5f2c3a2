// SPDX-License-Identifier: Apache-2.0

//! The standard synthetic suite and the defense × φ sweep.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::attack::{
    add_noise, generate_attack_train, label_ground_truth, superpose, AttackConfig, NoiseConfig,
};
use crate::defense::{run_defense, DefenseInputs, DefenseMethod};
use crate::error::{Error, Result};
use crate::mask::SegMask;
use crate::metrics::{attack_success_rate, recovery_counts, RecoveryCounts};
use crate::rng;
use crate::scene::{gen_synthetic_scene, SceneSpec};
use crate::waveform::{
    synthesize_benign, PulseModel, RangeImage, ScanOrder, ScanTimingMatrix, SensorConfig,
    WaveformTensor,
};

/// Versioned definition of the standard suite.
pub const STANDARD_SUITE_JSON: &str = include_str!("../assets/standard_suite.json");

/// Group sizes swept by the standard bench.
pub const STANDARD_PHIS: [usize; 5] = [1, 4, 5, 10, 25];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub name: String,
    pub version: u32,
    pub sensor: SensorConfig,
    pub pulse: PulseModel,
    /// Base attack parameters; each scene derives its own seed from this one.
    pub attack: AttackConfig,
    pub noise: NoiseConfig,
    pub scan_order: ScanOrder,
    pub peak_threshold: f32,
    pub threshold_m: f64,
    pub scenes: Vec<SceneSpec>,
}

impl SuiteConfig {
    pub fn standard() -> Self {
        Self::from_json(STANDARD_SUITE_JSON).expect("bundled suite parses")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let suite: SuiteConfig = serde_json::from_str(s)?;
        suite.validate()?;
        Ok(suite)
    }

    pub fn validate(&self) -> Result<()> {
        self.sensor.validate()?;
        self.pulse.validate()?;
        self.attack.validate()?;
        self.noise.validate()?;
        for (n, s) in self.scenes.iter().enumerate() {
            s.validate()
                .map_err(|e| Error::invalid(format!("scene {n}: {e}")))?;
        }
        if !(self.threshold_m > 0.0) {
            return Err(Error::invalid("threshold_m must be > 0"));
        }
        Ok(())
    }

    /// Attack parameters for scene `idx`.
    pub fn scene_attack(&self, idx: usize) -> AttackConfig {
        AttackConfig {
            seed: rng::hash_keys(self.attack.seed, &[self.scenes[idx].seed]),
            ..self.attack.clone()
        }
    }

    /// Noise parameters for scene `idx`.
    pub fn scene_noise(&self, idx: usize) -> NoiseConfig {
        NoiseConfig {
            seed: rng::hash_keys(self.noise.seed, &[self.scenes[idx].seed]),
            ..self.noise.clone()
        }
    }

    /// Benign range image, benign waveform and its noisy copy for scene `idx`.
    pub fn scene(&self, idx: usize) -> Result<SceneData> {
        let image = gen_synthetic_scene(&self.scenes[idx], &self.sensor)?;
        let benign = synthesize_benign(&image, &self.pulse, &self.sensor)?;
        let noisy = add_noise(&benign, &self.scene_noise(idx))?;
        Ok(SceneData {
            idx,
            image,
            benign,
            noisy,
        })
    }

    /// Attack a scene with groups of `phi` simultaneously sensed directions.
    ///
    /// Bitwise equal to `inject(benign, attack, scene_noise)`.
    pub fn attack(&self, scene: &SceneData, phi: usize) -> Result<AttackedScan> {
        let timing = ScanTimingMatrix::build(&self.sensor, phi, self.scan_order)?;
        let f = generate_attack_train(
            &timing,
            &self.scene_attack(scene.idx),
            &self.pulse,
            &self.sensor,
        )?;
        let ground_truth = label_ground_truth(&scene.benign, &f, &self.pulse)?;
        let attacked = superpose(&scene.noisy, &f)?;
        Ok(AttackedScan {
            timing,
            attacked,
            ground_truth,
        })
    }
}

pub struct SceneData {
    pub idx: usize,
    pub image: RangeImage,
    pub benign: WaveformTensor,
    /// `benign` plus the scene's observation noise, before the attack is added.
    pub noisy: WaveformTensor,
}

pub struct AttackedScan {
    pub timing: ScanTimingMatrix,
    pub attacked: WaveformTensor,
    pub ground_truth: SegMask,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneScore {
    pub scene: usize,
    pub point_recovery_accuracy: Option<f64>,
    pub counts: Option<RecoveryCounts>,
    pub error: Option<String>,
}

/// One (φ, method) cell of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub phi: usize,
    pub method: String,
    /// Mean accuracy over scenes; `None` when undefined or any scene failed.
    pub mean_accuracy: Option<f64>,
    /// The method needs groups and φ = 1.
    pub undefined: bool,
    pub scenes: Vec<SceneScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub phi: usize,
    /// Suite-mean attack success rate of the undefended attacked scans.
    pub attack_success_rate: Option<f64>,
    /// Per-scene attack success rate, in scene order.
    pub scene_attack_success: Vec<Option<f64>>,
    pub cells: Vec<BenchCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub suite: String,
    pub suite_version: u32,
    pub methods: Vec<DefenseMethod>,
    pub rows: Vec<BenchRow>,
}

impl BenchResult {
    pub fn cell(&self, phi: usize, method: &str) -> Option<&BenchCell> {
        self.rows
            .iter()
            .find(|r| r.phi == phi)?
            .cells
            .iter()
            .find(|c| c.method == method)
    }

    /// One row per φ, one column per method; undefined cells are blank.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi");
        for m in &self.methods {
            out.push(',');
            out.push_str(m.name());
        }
        out.push_str(",attack_success_rate\n");
        for row in &self.rows {
            let _ = write!(out, "{}", row.phi);
            for c in &row.cells {
                out.push(',');
                if let Some(v) = c.mean_accuracy {
                    let _ = write!(out, "{v:.2}");
                }
            }
            out.push(',');
            if let Some(v) = row.attack_success_rate {
                let _ = write!(out, "{v:.2}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bench result serializes");
        s.push('\n');
        s
    }
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v?;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

/// Run every method at every φ on every scene of the suite.
///
/// Scenes run one after another; the kernels inside each scene are parallel.
/// Failures are recorded per cell and the sweep continues.
pub fn run_bench(
    suite: &SuiteConfig,
    phis: &[usize],
    methods: &[DefenseMethod],
) -> Result<BenchResult> {
    suite.validate()?;
    for m in methods {
        m.validate()?;
    }
    let mut rows: Vec<BenchRow> = phis
        .iter()
        .map(|&phi| BenchRow {
            phi,
            attack_success_rate: None,
            scene_attack_success: Vec::new(),
            cells: methods
                .iter()
                .map(|m| BenchCell {
                    phi,
                    method: m.name().to_string(),
                    mean_accuracy: None,
                    undefined: m.needs_groups() && phi == 1,
                    scenes: Vec::new(),
                })
                .collect(),
        })
        .collect();
    let mut asr: Vec<Vec<Option<f64>>> = vec![Vec::new(); phis.len()];

    for idx in 0..suite.scenes.len() {
        let scene = suite.scene(idx);
        for (r, &phi) in phis.iter().enumerate() {
            let scan = match &scene {
                Ok(sd) => suite.attack(sd, phi),
                Err(e) => Err(Error::invalid(e.to_string())),
            };
            let scan = match scan {
                Ok(s) => s,
                Err(e) => {
                    asr[r].push(None);
                    for cell in &mut rows[r].cells {
                        cell.scenes.push(SceneScore {
                            scene: idx,
                            point_recovery_accuracy: None,
                            counts: None,
                            error: Some(e.to_string()),
                        });
                    }
                    continue;
                }
            };
            let ri = &scene.as_ref().expect("checked above").image;
            asr[r].push(
                attack_success_rate(&scan.attacked, &scan.ground_truth, suite.attack.sector_deg)
                    .ok(),
            );
            for (m, cell) in methods.iter().zip(rows[r].cells.iter_mut()) {
                if cell.undefined {
                    cell.scenes.push(SceneScore {
                        scene: idx,
                        point_recovery_accuracy: None,
                        counts: None,
                        error: None,
                    });
                    continue;
                }
                let score = run_defense(
                    m,
                    &DefenseInputs {
                        attacked: &scan.attacked,
                        timing: &scan.timing,
                        ground_truth: Some(&scan.ground_truth),
                        pulse: &suite.pulse,
                        peak_threshold: suite.peak_threshold,
                    },
                )
                .and_then(|o| {
                    recovery_counts(
                        ri,
                        &o.recovered,
                        &suite.sensor,
                        suite.attack.sector_deg,
                        suite.threshold_m,
                    )
                })
                .and_then(|c| Ok((c.accuracy()?, c)));
                cell.scenes.push(match score {
                    Ok((acc, c)) => SceneScore {
                        scene: idx,
                        point_recovery_accuracy: Some(acc),
                        counts: Some(c),
                        error: None,
                    },
                    Err(e) => SceneScore {
                        scene: idx,
                        point_recovery_accuracy: None,
                        counts: None,
                        error: Some(e.to_string()),
                    },
                });
            }
            log::info!("scene {idx} phi {phi} done");
        }
    }
    for (row, a) in rows.iter_mut().zip(asr) {
        row.attack_success_rate = mean(a.iter().copied());
        row.scene_attack_success = a;
        for cell in &mut row.cells {
            if !cell.undefined {
                cell.mean_accuracy = mean(cell.scenes.iter().map(|s| s.point_recovery_accuracy));
            }
        }
    }
    Ok(BenchResult {
        suite: suite.name.clone(),
        suite_version: suite.version,
        methods: methods.to_vec(),
        rows,
    })
}
