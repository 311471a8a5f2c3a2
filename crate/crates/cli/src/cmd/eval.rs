// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use pulsar_core::attack::{AttackConfig, NoiseConfig};
use pulsar_core::io::{read_mask, read_waveform};
use pulsar_core::metrics::{
    RecoveryReport, ReportConfig, ReportEntry, DEFAULT_RECOVERY_THRESHOLD_M,
};
use pulsar_core::scene::{load_pointcloud_bin, project_to_range_image, KeepRule};
use pulsar_core::waveform::{peak_detect, DEFAULT_PEAK_THRESHOLD};
use pulsar_core::{PulseModel, RangeImage, SensorConfig};

use crate::error::{CliError, CliResult, Context, EXIT_METRIC};
use crate::manifest::{manifest_path, RunManifest};
use crate::opts::{has_extension, parse_sector, require_positive, PulseOpts};

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Benign scan: point cloud (.bin) or waveform (.pwfm)
    #[arg(long)]
    pub benign: PathBuf,
    /// Recovered point cloud (.bin)
    #[arg(long)]
    pub recovered: PathBuf,
    /// Ground-truth mask (.pmsk); fixes the sensor dimensions
    #[arg(long)]
    pub gt_mask: PathBuf,
    /// Predicted mask for object and attack IoU
    #[arg(long)]
    pub pred_mask: Option<PathBuf>,
    /// Attacked or defended waveform for the attack success rate
    #[arg(long)]
    pub attacked: Option<PathBuf>,
    /// Attack run manifest to echo [default: the --attacked sidecar, if any]
    #[arg(long)]
    pub attack_manifest: Option<PathBuf>,
    #[arg(long, default_value = "45", value_parser = parse_sector, allow_hyphen_values = true)]
    pub sector_deg: [f64; 2],
    /// Range tolerance for a recovered point, m
    #[arg(long, default_value_t = DEFAULT_RECOVERY_THRESHOLD_M)]
    pub threshold_m: f64,
    /// Entry name in the report
    #[arg(long, default_value = "recovered")]
    pub method_name: String,
    /// Bin width in ns when the benign scan is a point cloud
    #[arg(long, default_value_t = 1.0)]
    pub bin_ns: f64,
    #[arg(long, default_value_t = DEFAULT_PEAK_THRESHOLD)]
    pub peak_threshold: f32,
    #[command(flatten)]
    pub pulse: PulseOpts,
    /// Report JSON; a CSV summary is written beside it
    #[arg(long)]
    pub out: PathBuf,
    /// CSV summary path [default: --out with a .csv extension]
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct EvalConfig<'a> {
    report: &'a ReportConfig,
    method_name: &'a str,
    peak_threshold: f32,
}

fn project(path: &Path, sc: &SensorConfig) -> CliResult<RangeImage> {
    let points = load_pointcloud_bin(path).with_path(path)?;
    let (ri, stats) = project_to_range_image(&points, sc, KeepRule::Nearest)?;
    let lost = stats.out_of_fov + stats.out_of_range;
    if lost > 0 {
        log::warn!("{}: {lost} points fall outside the sensor", path.display());
    }
    Ok(ri)
}

type AttackEcho = (
    Option<u64>,
    Option<usize>,
    Option<AttackConfig>,
    Option<NoiseConfig>,
);

fn echo_attack(path: &Path) -> CliResult<AttackEcho> {
    let text = std::fs::read_to_string(path).with_path(path)?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let c = &v["config"];
    fn get<T: serde::de::DeserializeOwned>(c: &serde_json::Value, k: &str) -> Option<T> {
        serde_json::from_value(c[k].clone()).ok()
    }
    Ok((
        get(c, "seed"),
        get(c, "phi"),
        get(c, "attack"),
        get(c, "noise"),
    ))
}

pub fn run(args: EvalArgs) -> CliResult<()> {
    require_positive("threshold-m", args.threshold_m)?;
    let pm = args.pulse.resolve(&PulseModel::default())?;
    let gt = read_mask(&args.gt_mask).with_path(&args.gt_mask)?;
    let (h, w, d) = gt.dims();

    let (sc, benign) = if has_extension(&args.benign, "pwfm") {
        let f = read_waveform(&args.benign, &SensorConfig::default()).with_path(&args.benign)?;
        let sc = f.tensor.sensor().clone();
        (sc, peak_detect(&f.tensor, args.peak_threshold, &pm)?)
    } else {
        let sc = SensorConfig {
            bin_ns: args.bin_ns,
            ..SensorConfig::with_dims(h, w, d)
        };
        sc.validate()?;
        let ri = project(&args.benign, &sc)?;
        (sc, ri)
    };
    if (sc.channels, sc.azimuth_bins, sc.time_bins) != (h, w, d) {
        return Err(CliError::io(format!(
            "benign scan is {}x{}x{} but the ground-truth mask is {h}x{w}x{d}",
            sc.channels, sc.azimuth_bins, sc.time_bins
        )));
    }
    let recovered = project(&args.recovered, &sc)?;
    let pred = match &args.pred_mask {
        Some(p) => Some(read_mask(p).with_path(p)?),
        None => None,
    };
    let attacked = match &args.attacked {
        Some(p) => Some(read_waveform(p, &sc).with_path(p)?.tensor),
        None => None,
    };
    let manifest = args.attack_manifest.clone().or_else(|| {
        args.attacked
            .as_deref()
            .map(manifest_path)
            .filter(|p| p.exists())
    });
    let (seed, phi, attack, noise) = match &manifest {
        Some(p) => echo_attack(p)?,
        None => (None, None, None, None),
    };

    let entry = ReportEntry::score(
        &args.method_name,
        &benign,
        &recovered,
        attacked.as_ref(),
        pred.as_ref(),
        Some(&gt),
        &sc,
        args.sector_deg,
        args.threshold_m,
    )
    .map_err(|e| CliError::from(e).into_input_error())?;
    let undefined = entry.point_recovery_accuracy.is_none();
    let report = RecoveryReport {
        config: ReportConfig {
            seed,
            phi,
            attack,
            noise,
            pulse: pm,
            sector_deg: args.sector_deg,
            threshold_m: args.threshold_m,
        },
        entries: vec![entry],
    };
    let csv_path = args
        .csv
        .clone()
        .unwrap_or_else(|| args.out.with_extension("csv"));
    std::fs::write(&args.out, report.to_json()).with_path(&args.out)?;
    std::fs::write(&csv_path, report.to_csv()).with_path(&csv_path)?;

    let e = &report.entries[0];
    if let (Some(acc), Some(c)) = (e.point_recovery_accuracy, e.counts) {
        eprintln!(
            "eval: {} recovery {acc:.2}% ({} of {} directions, {} dropped, {} displaced, {} false positives)",
            e.method, c.recovered, c.evaluated, c.dropped, c.displaced, c.false_positives
        );
    }
    if let Some(v) = e.attack_success_rate {
        eprintln!("eval: attack success rate {v:.2}%");
    }
    if let (Some(o), Some(a)) = (e.object_iou, e.attack_iou) {
        eprintln!("eval: object IoU {o:.4}, attack IoU {a:.4}");
    }

    let mut m = RunManifest::new(
        "eval",
        EvalConfig {
            report: &report.config,
            method_name: &args.method_name,
            peak_threshold: args.peak_threshold,
        },
    );
    m.inputs.extend([
        args.benign.clone(),
        args.recovered.clone(),
        args.gt_mask.clone(),
    ]);
    m.inputs.extend(args.pred_mask.clone());
    m.inputs.extend(args.attacked.clone());
    m.outputs.extend([args.out.clone(), csv_path]);
    m.write_beside(&args.out)?;

    if undefined {
        return Err(CliError {
            code: EXIT_METRIC,
            message:
                "point recovery accuracy is undefined: no in-sector direction has a benign return"
                    .into(),
        });
    }
    Ok(())
}
