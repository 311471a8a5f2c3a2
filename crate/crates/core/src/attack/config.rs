// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jamming pulse train parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    /// Spacing between nominal pulse times, nanoseconds.
    pub pulse_interval_ns: f64,
    /// Per-pulse amplitude is drawn uniformly from this range.
    pub amplitude_range: [f64; 2],
    /// Per-pulse timing jitter is drawn from `U(-jitter_ns, +jitter_ns)`.
    pub jitter_ns: f64,
    /// Azimuth sector receiving the attack, degrees about +x.
    pub sector_deg: [f64; 2],
    pub seed: u64,
}

impl Default for AttackConfig {
    /// 10 MHz pulses, amplitudes in [3, 8], ±20 ns jitter, ±45° sector.
    fn default() -> Self {
        Self {
            pulse_interval_ns: 100.0,
            amplitude_range: [3.0, 8.0],
            jitter_ns: 20.0,
            sector_deg: [-45.0, 45.0],
            seed: 0,
        }
    }
}

impl AttackConfig {
    /// Interval for a pulse repetition frequency given in MHz.
    pub fn interval_for_mhz(freq_mhz: f64) -> f64 {
        1000.0 / freq_mhz
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pulse_interval_ns > 0.0 && self.pulse_interval_ns.is_finite()) {
            return Err(Error::invalid(format!(
                "attack pulse interval must be > 0, got {}",
                self.pulse_interval_ns
            )));
        }
        let [lo, hi] = self.amplitude_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::invalid(format!(
                "attack amplitude range must satisfy min <= max, got [{lo}, {hi}]"
            )));
        }
        if !(self.jitter_ns >= 0.0 && self.jitter_ns.is_finite()) {
            return Err(Error::invalid(format!(
                "jitter must be >= 0, got {}",
                self.jitter_ns
            )));
        }
        if !(self.sector_deg[0] <= self.sector_deg[1]) {
            return Err(Error::invalid("sector must satisfy lo <= hi"));
        }
        Ok(())
    }

    /// Number of pulses that fit in a window of `window_ns`.
    pub fn pulse_count(&self, window_ns: f64) -> usize {
        (window_ns / self.pulse_interval_ns).floor() as usize
    }
}

/// Additive observation noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub std: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { std: 0.05, seed: 0 }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.std >= 0.0 && self.std.is_finite()) {
            return Err(Error::invalid(format!(
                "noise std must be >= 0, got {}",
                self.std
            )));
        }
        Ok(())
    }
}
