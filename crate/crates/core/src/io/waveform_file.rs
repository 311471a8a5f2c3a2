// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::bytes::{dim_u32, f32s, put_f32s, put_u32, u32s, Reader};
use crate::io::FORMAT_VERSION;
use crate::waveform::{ScanTimingMatrix, SensorConfig, WaveformTensor};

pub const WAVEFORM_MAGIC: &[u8; 4] = b"PWFM";

/// A waveform tensor together with the scan timing it was recorded under.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformFile {
    pub tensor: WaveformTensor,
    pub timing: ScanTimingMatrix,
}

pub fn encode_waveform(tensor: &WaveformTensor, timing: &ScanTimingMatrix) -> Result<Vec<u8>> {
    timing.check_matches(tensor.sensor())?;
    let (h, w, d) = tensor.dims();
    let mut out = Vec::with_capacity(32 + h * w * 4 + h * w * d * 4);
    out.extend_from_slice(WAVEFORM_MAGIC);
    put_u32(&mut out, FORMAT_VERSION);
    put_u32(&mut out, dim_u32(h, "H")?);
    put_u32(&mut out, dim_u32(w, "W")?);
    put_u32(&mut out, dim_u32(d, "D")?);
    put_u32(&mut out, dim_u32(timing.group_size(), "group size")?);
    out.extend_from_slice(&(tensor.sensor().bin_ns as f32).to_le_bytes());
    for &t in timing.timestamps() {
        put_u32(&mut out, t);
    }
    put_f32s(&mut out, tensor.data());
    Ok(out)
}

/// Decode a PWFM buffer. Sensor fields not stored in the file (fields of
/// view, light speed) are taken from `template`.
pub fn decode_waveform(bytes: &[u8], template: &SensorConfig) -> Result<WaveformFile> {
    let mut r = Reader::new(bytes);
    r.magic(WAVEFORM_MAGIC)?;
    r.version(FORMAT_VERSION)?;
    let header_at = r.offset();
    let h = r.u32("H")? as usize;
    let w = r.u32("W")? as usize;
    let d = r.u32("D")? as usize;
    let phi = r.u32("group size")? as usize;
    let bin_ns = r.f32("bin width")?;
    if h == 0 || w == 0 || d == 0 || !(bin_ns > 0.0 && bin_ns.is_finite()) {
        return Err(Error::format(
            header_at,
            "header has zero dimension or invalid bin width",
        ));
    }
    let ts_at = r.offset();
    let ts = u32s(r.array((h * w) as u64, 4, "timing matrix")?);
    let payload_at = r.offset();
    let data = f32s(r.array((h * w) as u64 * d as u64, 4, "waveform payload")?);
    r.finish()?;
    let sensor = SensorConfig {
        channels: h,
        azimuth_bins: w,
        time_bins: d,
        bin_ns: bin_ns as f64,
        ..template.clone()
    };
    let timing = ScanTimingMatrix::from_raw(h, w, phi, ts)
        .map_err(|e| Error::format(ts_at, e.to_string()))?;
    let tensor = WaveformTensor::from_vec(&sensor, data)
        .map_err(|e| Error::format(payload_at, e.to_string()))?;
    Ok(WaveformFile { tensor, timing })
}

pub fn write_waveform(
    path: impl AsRef<Path>,
    tensor: &WaveformTensor,
    timing: &ScanTimingMatrix,
) -> Result<()> {
    fs::write(path, encode_waveform(tensor, timing)?)?;
    Ok(())
}

pub fn read_waveform(path: impl AsRef<Path>, template: &SensorConfig) -> Result<WaveformFile> {
    decode_waveform(&fs::read(path)?, template)
}
