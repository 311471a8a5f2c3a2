// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use clap::Args;
use pulsar_core::{PulseModel, SensorConfig};

use crate::error::{CliError, CliResult};

#[derive(Args, Debug, Clone, Default)]
pub struct SensorOpts {
    /// Vertical channels H [default: 32]
    #[arg(long)]
    pub channels: Option<usize>,
    /// Azimuth bins W [default: 1800]
    #[arg(long)]
    pub azimuth: Option<usize>,
    /// Waveform bins D [default: 800]
    #[arg(long)]
    pub bins: Option<usize>,
    /// Bin width in nanoseconds [default: 1]
    #[arg(long)]
    pub bin_ns: Option<f64>,
}

impl SensorOpts {
    pub fn resolve(&self, base: &SensorConfig) -> CliResult<SensorConfig> {
        let sc = SensorConfig {
            channels: self.channels.unwrap_or(base.channels),
            azimuth_bins: self.azimuth.unwrap_or(base.azimuth_bins),
            time_bins: self.bins.unwrap_or(base.time_bins),
            bin_ns: self.bin_ns.unwrap_or(base.bin_ns),
            ..base.clone()
        };
        sc.validate()?;
        Ok(sc)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct PulseOpts {
    /// Pulse width sigma in nanoseconds [default: 2]
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Amplitude scale gamma [default: 1]
    #[arg(long)]
    pub gamma: Option<f64>,
}

impl PulseOpts {
    pub fn resolve(&self, base: &PulseModel) -> CliResult<PulseModel> {
        let pm = PulseModel {
            sigma_ns: self.sigma.unwrap_or(base.sigma_ns),
            gamma: self.gamma.unwrap_or(base.gamma),
        };
        pm.validate()?;
        Ok(pm)
    }
}

/// `HALF` for a symmetric sector or `LO,HI`.
pub fn parse_sector(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match nums[..] {
        [h] if h > 0.0 => Ok([-h, h]),
        [lo, hi] if lo <= hi => Ok([lo, hi]),
        _ => Err(format!("expected HALF or LO,HI with LO <= HI, got {s:?}")),
    }
}

pub fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

pub fn require_positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}
