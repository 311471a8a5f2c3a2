// SPDX-License-Identifier: Apache-2.0

//! On-disk formats. All integers and floats are little-endian.
//!
//! | file | magic  | contents |
//! |------|--------|----------|
//! | waveform | `PWFM` | version, H, W, D, φ (u32), Δt ns (f32), H·W u32 timestamps, H·W·D f32 samples |
//! | mask     | `PMSK` | version, H, W, D (u32), H·W·D u8 labels |
//! | weights  | `PWTS` | version, tensor count, per tensor: name length, UTF-8 name, rank, dims (u32); then all f32 payloads in manifest order |

mod bytes;
mod mask_file;
mod waveform_file;
mod weights_file;

pub use mask_file::{decode_mask, encode_mask, read_mask, write_mask, MASK_MAGIC};
pub use waveform_file::{
    decode_waveform, encode_waveform, read_waveform, write_waveform, WaveformFile, WAVEFORM_MAGIC,
};
pub use weights_file::{
    decode_weights, encode_weights, read_weights, write_weights, WEIGHTS_MAGIC,
};

/// Current version written by every encoder.
pub const FORMAT_VERSION: u32 = 1;
