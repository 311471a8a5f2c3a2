// SPDX-License-Identifier: Apache-2.0

//! Benign full-waveform physics: sensor geometry, Gaussian pulses,
//! waveform synthesis, scan timing and peak detection.

mod config;
mod peak;
mod pulse;
mod range_image;
mod tensor;
mod timing;

pub use config::{PulseModel, SensorConfig};
pub use peak::{argmax, peak_detect, DEFAULT_PEAK_THRESHOLD};
pub(crate) use pulse::accumulate_pulse;
#[cfg(test)]
pub(crate) use pulse::pulse;
pub use pulse::{gaussian_pulse, synthesize_benign, PULSE_SUPPORT_SIGMAS};
pub use range_image::{RangeImage, Return};
pub use tensor::WaveformTensor;
pub use timing::{ScanOrder, ScanTimingMatrix, TimingGroups};
