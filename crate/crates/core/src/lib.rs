// SPDX-License-Identifier: Apache-2.0

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attack;
pub mod defense;
pub mod error;
pub mod io;
pub mod mask;
pub mod metrics;
pub mod neural;
pub mod rng;
pub mod scene;
pub mod suite;
pub mod waveform;

pub use error::{Error, Result};
pub use mask::{Label, SegMask};
pub use waveform::{
    PulseModel, RangeImage, Return, ScanOrder, ScanTimingMatrix, SensorConfig, WaveformTensor,
};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/intro.md")]
mod book_intro {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/waveforms.md")]
mod book_waveforms {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/timing.md")]
mod book_timing {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/attack.md")]
mod book_attack {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/defenses.md")]
mod book_defenses {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/kernels.md")]
mod book_kernels {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/formats.md")]
mod book_formats {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/metrics.md")]
mod book_metrics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
