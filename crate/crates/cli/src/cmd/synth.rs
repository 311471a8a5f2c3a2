// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use pulsar_core::io::write_waveform;
use pulsar_core::scene::{
    channel_downsample, gen_synthetic_scene, load_pointcloud_bin, project_to_range_image, KeepRule,
    ProjectionStats, SceneSpec,
};
use pulsar_core::suite::SuiteConfig;
use pulsar_core::waveform::synthesize_benign;
use pulsar_core::{PulseModel, ScanOrder, ScanTimingMatrix, SensorConfig};

use crate::cmd::bench::load_suite;
use crate::error::{CliError, CliResult, Context};
use crate::manifest::RunManifest;
use crate::opts::{has_extension, PulseOpts, SensorOpts};

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Keep {
    Nearest,
    Strongest,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Scene spec (.json) or KITTI-style point cloud (.bin)
    #[arg(long, required_unless_present = "suite_scene")]
    pub scene: Option<PathBuf>,
    /// Use scene N of a suite instead of --scene
    #[arg(long, conflicts_with = "scene")]
    pub suite_scene: Option<usize>,
    /// Suite for --suite-scene: "standard" or a suite JSON path
    #[arg(long, default_value = "standard")]
    pub suite: String,
    /// Output waveform file (.pwfm)
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub sensor: SensorOpts,
    #[command(flatten)]
    pub pulse: PulseOpts,
    /// Project point clouds at H·factor channels, then keep every factor-th
    #[arg(long, default_value_t = 1)]
    pub downsample: usize,
    /// Which point wins a projection collision
    #[arg(long, value_enum, default_value_t = Keep::Nearest)]
    pub keep: Keep,
}

#[derive(Serialize)]
struct SynthConfig {
    source: String,
    sensor: SensorConfig,
    pulse: PulseModel,
    downsample: usize,
    keep: Keep,
    projection: Option<ProjectionStats>,
    present_cells: usize,
}

pub fn run(args: SynthArgs) -> CliResult<()> {
    if args.downsample == 0 {
        return Err(CliError::usage("--downsample must be >= 1"));
    }
    let (source, base_sensor, base_pulse, spec) = match (&args.scene, args.suite_scene) {
        (_, Some(n)) => {
            let suite: SuiteConfig = load_suite(&args.suite)?;
            let spec = suite.scenes.get(n).cloned().ok_or_else(|| {
                CliError::usage(format!(
                    "--suite-scene {n}: suite has {} scenes",
                    suite.scenes.len()
                ))
            })?;
            (
                format!("suite {} scene {n}", suite.name),
                suite.sensor,
                suite.pulse,
                Some(spec),
            )
        }
        (Some(p), None) if has_extension(p, "json") => {
            let text = std::fs::read_to_string(p).with_path(p)?;
            let spec: SceneSpec = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
            (
                p.display().to_string(),
                SensorConfig::default(),
                PulseModel::default(),
                Some(spec),
            )
        }
        (Some(p), None) => (
            p.display().to_string(),
            SensorConfig::default(),
            PulseModel::default(),
            None,
        ),
        (None, None) => unreachable!("clap requires one source"),
    };
    let sc = args.sensor.resolve(&base_sensor)?;
    let pm = args.pulse.resolve(&base_pulse)?;

    let (image, stats) = match (spec, &args.scene) {
        (Some(spec), _) => (gen_synthetic_scene(&spec, &sc)?, None),
        (None, Some(path)) => {
            let points = load_pointcloud_bin(path).with_path(path)?;
            let fine = SensorConfig {
                channels: sc.channels * args.downsample,
                ..sc.clone()
            };
            let keep = match args.keep {
                Keep::Nearest => KeepRule::Nearest,
                Keep::Strongest => KeepRule::Strongest,
            };
            let (ri, stats) = project_to_range_image(&points, &fine, keep)?;
            (channel_downsample(&ri, args.downsample)?, Some(stats))
        }
        (None, None) => unreachable!(),
    };
    let benign = synthesize_benign(&image, &pm, &sc)?;
    let timing = ScanTimingMatrix::build(&sc, 1, ScanOrder::RowMajor)?;
    write_waveform(&args.out, &benign, &timing).with_path(&args.out)?;

    let present = image.present_count();
    eprintln!(
        "synth: {present} of {} directions present, {}x{}x{} tensor -> {}",
        sc.channels * sc.azimuth_bins,
        sc.channels,
        sc.azimuth_bins,
        sc.time_bins,
        args.out.display()
    );
    if let Some(s) = &stats {
        eprintln!(
            "synth: projected {}, out of fov {}, out of range {}, collisions {}",
            s.projected, s.out_of_fov, s.out_of_range, s.collisions
        );
    }
    let mut m = RunManifest::new(
        "synth",
        SynthConfig {
            source,
            sensor: sc,
            pulse: pm,
            downsample: args.downsample,
            keep: args.keep,
            projection: stats,
            present_cells: present,
        },
    );
    m.inputs.extend(args.scene.clone());
    m.outputs.push(args.out.clone());
    m.write_beside(&args.out)?;
    Ok(())
}
