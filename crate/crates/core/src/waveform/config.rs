// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry and sampling of the simulated sensor.
///
/// Angles are in degrees. Channel 0 is the top-most beam; azimuth bin 0
/// starts at `horizontal_fov[0]`. Azimuth is measured counter-clockwise
/// from the +x axis, i.e. `atan2(y, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig {
    pub channels: usize,
    pub azimuth_bins: usize,
    pub time_bins: usize,
    /// Width of one waveform bin, nanoseconds.
    pub bin_ns: f64,
    pub vertical_fov: [f64; 2],
    pub horizontal_fov: [f64; 2],
    /// Speed of light, meters per second.
    pub light_speed: f64,
}

impl Default for SensorConfig {
    /// 32 × 1800 × 800 with 1 ns bins: an HDL-32E-like head covering 120 m.
    fn default() -> Self {
        Self {
            channels: 32,
            azimuth_bins: 1800,
            time_bins: 800,
            bin_ns: 1.0,
            vertical_fov: [-30.67, 10.67],
            horizontal_fov: [-180.0, 180.0],
            light_speed: 3.0e8,
        }
    }
}

impl SensorConfig {
    pub fn with_dims(channels: usize, azimuth_bins: usize, time_bins: usize) -> Self {
        Self {
            channels,
            azimuth_bins,
            time_bins,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.channels == 0 || self.azimuth_bins == 0 || self.time_bins == 0 {
            return Err(Error::invalid(format!(
                "sensor dimensions must be positive, got {}x{}x{}",
                self.channels, self.azimuth_bins, self.time_bins
            )));
        }
        if !(self.bin_ns > 0.0 && self.bin_ns.is_finite()) {
            return Err(Error::invalid(format!(
                "bin_ns must be > 0, got {}",
                self.bin_ns
            )));
        }
        if !(self.light_speed > 0.0 && self.light_speed.is_finite()) {
            return Err(Error::invalid("light_speed must be > 0"));
        }
        let [vlo, vhi] = self.vertical_fov;
        if !(vlo < vhi) || vlo < -90.0 || vhi > 90.0 {
            return Err(Error::invalid(format!(
                "vertical_fov must satisfy -90 <= lo < hi <= 90, got [{vlo}, {vhi}]"
            )));
        }
        let [hlo, hhi] = self.horizontal_fov;
        if !(hlo < hhi) || hhi - hlo > 360.0 {
            return Err(Error::invalid(format!(
                "horizontal_fov must satisfy lo < hi and span <= 360, got [{hlo}, {hhi}]"
            )));
        }
        Ok(())
    }

    pub fn num_directions(&self) -> usize {
        self.channels * self.azimuth_bins
    }

    pub fn num_voxels(&self) -> usize {
        self.num_directions() * self.time_bins
    }

    /// Duration of the full waveform, nanoseconds.
    pub fn window_ns(&self) -> f64 {
        self.time_bins as f64 * self.bin_ns
    }

    /// Range corresponding to the end of the waveform window, meters.
    pub fn max_range(&self) -> f64 {
        self.ns_to_range(self.window_ns())
    }

    /// Round-trip time for a target at `meters`, nanoseconds.
    pub fn range_to_ns(&self, meters: f64) -> f64 {
        2.0 * meters / self.light_speed * 1e9
    }

    pub fn ns_to_range(&self, ns: f64) -> f64 {
        self.light_speed * ns * 1e-9 / 2.0
    }

    /// Range spanned by a single waveform bin.
    pub fn meters_per_bin(&self) -> f64 {
        self.ns_to_range(self.bin_ns)
    }

    pub fn is_full_circle(&self) -> bool {
        self.horizontal_fov[1] - self.horizontal_fov[0] >= 360.0
    }

    fn azimuth_step(&self) -> f64 {
        (self.horizontal_fov[1] - self.horizontal_fov[0]) / self.azimuth_bins as f64
    }

    fn elevation_step(&self) -> f64 {
        (self.vertical_fov[1] - self.vertical_fov[0]) / self.channels as f64
    }

    /// Azimuth at the center of bin `j`, degrees.
    pub fn azimuth_deg(&self, j: usize) -> f64 {
        self.horizontal_fov[0] + (j as f64 + 0.5) * self.azimuth_step()
    }

    /// Elevation at the center of channel `i`, degrees.
    pub fn elevation_deg(&self, i: usize) -> f64 {
        self.vertical_fov[1] - (i as f64 + 0.5) * self.elevation_step()
    }

    /// Azimuth bin containing `azimuth_rad` (half-open bins).
    pub fn azimuth_bin(&self, azimuth_rad: f64) -> Option<usize> {
        let lo = self.horizontal_fov[0].to_radians();
        let hi = self.horizontal_fov[1].to_radians();
        let w = self.azimuth_bins;
        let mut a = azimuth_rad;
        if self.is_full_circle() {
            let tau = std::f64::consts::TAU;
            a = lo + (a - lo).rem_euclid(tau);
        }
        let pos = (a - lo) / (hi - lo) * w as f64;
        if !(pos >= 0.0) {
            return None;
        }
        let j = pos.floor() as usize;
        match j {
            j if j < w => Some(j),
            j if j == w && self.is_full_circle() => Some(0),
            _ => None,
        }
    }

    /// Channel containing `elevation_rad`; points exactly on the lower
    /// edge fall into the last channel.
    pub fn channel(&self, elevation_rad: f64) -> Option<usize> {
        let elev = elevation_rad.to_degrees();
        let [lo, hi] = self.vertical_fov;
        if !(elev >= lo && elev <= hi) {
            return None;
        }
        let i = ((hi - elev) / (hi - lo) * self.channels as f64).floor() as usize;
        Some(i.min(self.channels - 1))
    }

    /// Unit vector along the center ray of direction `(i, j)`.
    pub fn direction(&self, i: usize, j: usize) -> [f64; 3] {
        let el = self.elevation_deg(i).to_radians();
        let az = self.azimuth_deg(j).to_radians();
        [el.cos() * az.cos(), el.cos() * az.sin(), el.sin()]
    }

    /// Whether the center of azimuth bin `j` lies within `[lo, hi]` degrees.
    pub fn in_sector(&self, j: usize, sector_deg: [f64; 2]) -> bool {
        let mut az = self.azimuth_deg(j);
        // normalize into (-180, 180]
        if az > 180.0 {
            az -= 360.0;
        } else if az <= -180.0 {
            az += 360.0;
        }
        az >= sector_deg[0] && az <= sector_deg[1]
    }

    pub fn check_same_dims(&self, other: &SensorConfig) -> Result<()> {
        let a = (self.channels, self.azimuth_bins, self.time_bins);
        let b = (other.channels, other.azimuth_bins, other.time_bins);
        if a != b {
            return Err(Error::invalid(format!(
                "dimension mismatch: {}x{}x{} vs {}x{}x{}",
                a.0, a.1, a.2, b.0, b.1, b.2
            )));
        }
        Ok(())
    }
}

/// Gaussian pulse shape and the amplitude scale applied to intensities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseModel {
    /// Pulse standard deviation, nanoseconds.
    pub sigma_ns: f64,
    /// Amplitude per unit intensity.
    pub gamma: f64,
}

impl Default for PulseModel {
    fn default() -> Self {
        Self {
            sigma_ns: 2.0,
            gamma: 1.0,
        }
    }
}

impl PulseModel {
    /// Scaling calibrated for KITTI intensities in `[0, 1]`.
    pub fn kitti() -> Self {
        Self {
            gamma: 12.0,
            ..Self::default()
        }
    }

    /// Scaling calibrated for nuScenes 8-bit intensities.
    pub fn nuscenes() -> Self {
        Self {
            gamma: 0.156,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_ns > 0.0 && self.sigma_ns.is_finite()) {
            return Err(Error::invalid(format!(
                "sigma must be > 0, got {}",
                self.sigma_ns
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid(format!(
                "gamma must be > 0, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}
