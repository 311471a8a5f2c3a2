// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::waveform::{PulseModel, RangeImage, SensorConfig, WaveformTensor};

/// Pulses are evaluated within this many standard deviations of their
/// center. Beyond it the unit Gaussian is below 1.3e-14.
pub const PULSE_SUPPORT_SIGMAS: f64 = 8.0;

/// Unit-peak Gaussian pulse `exp(-t² / 2σ²)`.
pub fn gaussian_pulse(t_ns: f64, sigma_ns: f64) -> Result<f64> {
    if !t_ns.is_finite() {
        return Err(Error::invalid(format!(
            "pulse time must be finite, got {t_ns}"
        )));
    }
    if !(sigma_ns > 0.0 && sigma_ns.is_finite()) {
        return Err(Error::invalid(format!("sigma must be > 0, got {sigma_ns}")));
    }
    Ok(pulse(t_ns, sigma_ns))
}

#[inline]
pub(crate) fn pulse(t_ns: f64, sigma_ns: f64) -> f64 {
    (-(t_ns * t_ns) / (2.0 * sigma_ns * sigma_ns)).exp()
}

/// Range of bins `[first, last)` where a pulse centered at `center_ns`
/// is evaluated, clipped to the window.
#[inline]
pub(crate) fn support(center_ns: f64, sigma_ns: f64, bin_ns: f64, bins: usize) -> (usize, usize) {
    let half = PULSE_SUPPORT_SIGMAS * sigma_ns;
    let first = ((center_ns - half) / bin_ns).ceil().max(0.0);
    let last = ((center_ns + half) / bin_ns).floor() + 1.0;
    let last = last.clamp(0.0, bins as f64);
    let first = first.min(last);
    (first as usize, last as usize)
}

/// Add `amplitude · p(t·Δt − center)` into a row sampled at bin starts.
pub(crate) fn accumulate_pulse(
    row: &mut [f64],
    center_ns: f64,
    amplitude: f64,
    sigma_ns: f64,
    bin_ns: f64,
) {
    let (a, b) = support(center_ns, sigma_ns, bin_ns, row.len());
    for (t, v) in row.iter_mut().enumerate().take(b).skip(a) {
        *v += amplitude * pulse(t as f64 * bin_ns - center_ns, sigma_ns);
    }
}

/// Render a benign waveform tensor from a range image.
///
/// A present cell at distance `d` with intensity `i` becomes a Gaussian
/// of height `γ·i` centered at the round-trip time `2d/c0`.
pub fn synthesize_benign(
    ri: &RangeImage,
    pm: &PulseModel,
    sc: &SensorConfig,
) -> Result<WaveformTensor> {
    sc.validate()?;
    pm.validate()?;
    if ri.dims() != (sc.channels, sc.azimuth_bins) {
        return Err(Error::invalid(format!(
            "range image is {}x{}, sensor is {}x{}",
            ri.channels(),
            ri.azimuth_bins(),
            sc.channels,
            sc.azimuth_bins
        )));
    }
    let max_range = sc.max_range();
    for (cell, r) in ri.cells().iter().enumerate() {
        if let Some(r) = r {
            let (i, j) = (cell / sc.azimuth_bins, cell % sc.azimuth_bins);
            if !(r.distance >= 0.0 && r.distance <= max_range) {
                return Err(Error::invalid(format!(
                    "cell ({i}, {j}) distance {} m outside [0, {max_range}] m",
                    r.distance
                )));
            }
            if !(r.intensity >= 0.0 && r.intensity.is_finite()) {
                return Err(Error::invalid(format!(
                    "cell ({i}, {j}) intensity {} is negative or non-finite",
                    r.intensity
                )));
            }
        }
    }

    let mut out = WaveformTensor::zeros(sc);
    let d = sc.time_bins;
    out.data_mut()
        .par_chunks_mut(d)
        .zip(ri.cells().par_iter())
        .for_each(|(row, cell)| {
            if let Some(r) = cell {
                let center = sc.range_to_ns(r.distance);
                let amp = pm.gamma * r.intensity;
                let (a, b) = support(center, pm.sigma_ns, sc.bin_ns, d);
                for (t, v) in row.iter_mut().enumerate().take(b).skip(a) {
                    *v = (amp * pulse(t as f64 * sc.bin_ns - center, pm.sigma_ns)) as f32;
                }
            }
        });
    Ok(out)
}
