// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use pulsar_core::attack::{
    generate_attack_train, inject, label_ground_truth, AttackConfig, NoiseConfig,
};
use pulsar_core::io::{read_waveform, write_mask, write_waveform};
use pulsar_core::metrics::attack_success_rate;
use pulsar_core::{Label, PulseModel, ScanOrder, ScanTimingMatrix, SensorConfig};

use crate::error::{CliResult, Context};
use crate::manifest::RunManifest;
use crate::opts::{parse_sector, require_positive, PulseOpts};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Order {
    RowMajor,
    ColumnMajor,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    /// Benign waveform file (.pwfm)
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Attacked waveform file (.pwfm)
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth mask file (.pmsk)
    #[arg(long)]
    pub gt_mask: PathBuf,
    /// Directions sensed simultaneously (timestamp group size)
    #[arg(long, default_value_t = 4)]
    pub phi: usize,
    /// Scan order used to form timestamp groups
    #[arg(long, value_enum, default_value_t = Order::RowMajor)]
    pub order: Order,
    /// Attack pulse repetition frequency, MHz
    #[arg(long, default_value_t = 10.0)]
    pub freq_mhz: f64,
    #[arg(long, default_value_t = 3.0)]
    pub amp_min: f64,
    #[arg(long, default_value_t = 8.0)]
    pub amp_max: f64,
    /// Per-pulse timing jitter bound, ns
    #[arg(long, default_value_t = 20.0)]
    pub jitter_ns: f64,
    /// Attacked azimuth sector: HALF or LO,HI in degrees
    #[arg(long, default_value = "45", value_parser = parse_sector, allow_hyphen_values = true)]
    pub sector_deg: [f64; 2],
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Observation noise standard deviation
    #[arg(long, default_value_t = 0.05)]
    pub noise_std: f64,
    /// Noise seed [default: --seed]
    #[arg(long)]
    pub noise_seed: Option<u64>,
    #[command(flatten)]
    pub pulse: PulseOpts,
}

#[derive(Serialize)]
pub struct AttackRunConfig {
    pub seed: u64,
    pub phi: usize,
    pub scan_order: ScanOrder,
    pub attack: AttackConfig,
    pub noise: NoiseConfig,
    pub pulse: PulseModel,
    pub pulses_per_window: usize,
    pub attack_success_rate: Option<f64>,
}

pub fn run(args: AttackArgs) -> CliResult<()> {
    require_positive("freq-mhz", args.freq_mhz)?;
    let pm = args.pulse.resolve(&PulseModel::default())?;
    let file = read_waveform(&args.input, &SensorConfig::default()).with_path(&args.input)?;
    let benign = file.tensor;
    let sc = benign.sensor().clone();
    let order = match args.order {
        Order::RowMajor => ScanOrder::RowMajor,
        Order::ColumnMajor => ScanOrder::ColumnMajor,
    };
    let timing = ScanTimingMatrix::build(&sc, args.phi, order)?;
    let ac = AttackConfig {
        pulse_interval_ns: AttackConfig::interval_for_mhz(args.freq_mhz),
        amplitude_range: [args.amp_min, args.amp_max],
        jitter_ns: args.jitter_ns,
        sector_deg: args.sector_deg,
        seed: args.seed,
    };
    let nc = NoiseConfig {
        std: args.noise_std,
        seed: args.noise_seed.unwrap_or(args.seed),
    };
    ac.validate()?;
    nc.validate()?;

    let f = generate_attack_train(&timing, &ac, &pm, &sc)?;
    let gt = label_ground_truth(&benign, &f, &pm)?;
    let attacked = inject(&benign, &f, &nc)?;
    write_waveform(&args.out, &attacked, &timing).with_path(&args.out)?;
    write_mask(&args.gt_mask, &gt).with_path(&args.gt_mask)?;

    let k = ac.pulse_count(sc.window_ns());
    let asr = attack_success_rate(&attacked, &gt, ac.sector_deg).ok();
    eprintln!(
        "attack: phi {}, {} groups, {k} pulses per window at {} ns spacing",
        args.phi,
        timing.num_groups(),
        ac.pulse_interval_ns
    );
    eprintln!(
        "attack: ground truth has {} attack and {} legitimate voxels",
        gt.count(Label::Attack),
        gt.count(Label::Legitimate)
    );
    match asr {
        Some(v) => eprintln!("attack: attack success rate {v:.2}% over the sector"),
        None => eprintln!("attack: attack success rate undefined (empty sector)"),
    }

    let mut m = RunManifest::new(
        "attack",
        AttackRunConfig {
            seed: args.seed,
            phi: args.phi,
            scan_order: order,
            attack: ac,
            noise: nc,
            pulse: pm,
            pulses_per_window: k,
            attack_success_rate: asr,
        },
    );
    m.inputs.push(args.input.clone());
    m.outputs.extend([args.out.clone(), args.gt_mask.clone()]);
    m.write_beside(&args.out)?;
    Ok(())
}
