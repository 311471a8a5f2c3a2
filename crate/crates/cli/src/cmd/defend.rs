// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use pulsar_core::defense::{run_defense, DefenseInputs, DefenseMethod};
use pulsar_core::io::{read_mask, read_waveform, write_mask, write_waveform};
use pulsar_core::scene::{range_image_to_points, write_pointcloud_bin};
use pulsar_core::waveform::DEFAULT_PEAK_THRESHOLD;
use pulsar_core::{Label, PulseModel, SensorConfig};

use crate::error::{CliError, CliResult, Context};
use crate::manifest::RunManifest;
use crate::opts::PulseOpts;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    None,
    Oracle,
    Avgsub,
    Coherence,
    Ror,
    Sor,
    Mask,
}

#[derive(Args, Debug)]
pub struct DefendArgs {
    /// Attacked waveform file (.pwfm)
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Recovered point cloud (.bin)
    #[arg(long)]
    pub out_points: PathBuf,
    /// Ground-truth mask, required by the oracle method
    #[arg(long)]
    pub gt_mask: Option<PathBuf>,
    /// Predicted mask, required by the mask method
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Coherence threshold
    #[arg(long, default_value_t = pulsar_core::defense::DEFAULT_COHERENCE_THETA)]
    pub theta_min: f32,
    /// ROR search radius, m
    #[arg(long, default_value_t = pulsar_core::defense::DEFAULT_ROR_RADIUS)]
    pub radius: f64,
    #[arg(long, default_value_t = pulsar_core::defense::DEFAULT_ROR_MIN_NEIGHBORS)]
    pub min_neighbors: usize,
    /// SOR neighbor count
    #[arg(long, default_value_t = pulsar_core::defense::DEFAULT_SOR_K)]
    pub k: usize,
    #[arg(long, default_value_t = pulsar_core::defense::DEFAULT_SOR_STD_RATIO)]
    pub std_ratio: f64,
    #[arg(long, default_value_t = DEFAULT_PEAK_THRESHOLD)]
    pub peak_threshold: f32,
    /// Also write the mask the defense applied (.pmsk)
    #[arg(long)]
    pub out_mask: Option<PathBuf>,
    /// Also write the defended waveform (.pwfm)
    #[arg(long)]
    pub out_waveform: Option<PathBuf>,
    #[command(flatten)]
    pub pulse: PulseOpts,
}

#[derive(Serialize)]
struct DefendConfig {
    method: DefenseMethod,
    peak_threshold: f32,
    pulse: PulseModel,
    phi: usize,
    degenerate: bool,
    recovered_points: usize,
    masked_voxels: Option<usize>,
}

pub fn run(args: DefendArgs) -> CliResult<()> {
    let pm = args.pulse.resolve(&PulseModel::default())?;
    let method = match args.method {
        Method::None => DefenseMethod::None,
        Method::Oracle => DefenseMethod::OracleMask,
        Method::Avgsub => DefenseMethod::AvgSubtract,
        Method::Coherence => DefenseMethod::Coherence {
            theta_min: args.theta_min,
        },
        Method::Ror => DefenseMethod::Ror {
            radius: args.radius,
            min_neighbors: args.min_neighbors,
        },
        Method::Sor => DefenseMethod::Sor {
            k: args.k,
            std_ratio: args.std_ratio,
        },
        Method::Mask => DefenseMethod::ExternalMask {
            path: args
                .mask
                .clone()
                .ok_or_else(|| CliError::usage("--method mask needs --mask"))?,
        },
    };
    method.validate()?;
    if matches!(method, DefenseMethod::OracleMask) && args.gt_mask.is_none() {
        return Err(CliError::usage("--method oracle needs --gt-mask"));
    }
    let file = read_waveform(&args.input, &SensorConfig::default()).with_path(&args.input)?;
    let gt = match &args.gt_mask {
        Some(p) => Some(read_mask(p).with_path(p)?),
        None => None,
    };
    let outcome = run_defense(
        &method,
        &DefenseInputs {
            attacked: &file.tensor,
            timing: &file.timing,
            ground_truth: gt.as_ref(),
            pulse: &pm,
            peak_threshold: args.peak_threshold,
        },
    )?;
    let sc = file.tensor.sensor();
    let (_, points) = range_image_to_points(&outcome.recovered, sc);
    write_pointcloud_bin(&args.out_points, &points).with_path(&args.out_points)?;

    let masked = outcome
        .predicted_mask
        .as_ref()
        .map(|m| m.count(Label::Attack));
    eprintln!(
        "defend: {} recovered {} points of {} directions",
        method.name(),
        points.len(),
        sc.channels * sc.azimuth_bins
    );
    if let Some(n) = masked {
        eprintln!("defend: mask flags {n} attack bins");
    }
    if outcome.degenerate {
        eprintln!(
            "defend: warning: group size 1 makes {} degenerate",
            method.name()
        );
    }

    let mut m = RunManifest::new(
        "defend",
        DefendConfig {
            method: method.clone(),
            peak_threshold: args.peak_threshold,
            pulse: pm,
            phi: file.timing.group_size(),
            degenerate: outcome.degenerate,
            recovered_points: points.len(),
            masked_voxels: masked,
        },
    );
    m.inputs.push(args.input.clone());
    m.inputs.extend(args.gt_mask.clone());
    m.inputs.extend(args.mask.clone());
    m.outputs.push(args.out_points.clone());
    if let (Some(p), Some(mask)) = (&args.out_mask, &outcome.predicted_mask) {
        write_mask(p, mask).with_path(p)?;
        m.outputs.push(p.clone());
    }
    if let (Some(p), Some(w)) = (&args.out_waveform, &outcome.defended) {
        write_waveform(p, w, &file.timing).with_path(p)?;
        m.outputs.push(p.clone());
    }
    m.write_beside(&args.out_points)?;
    Ok(())
}
