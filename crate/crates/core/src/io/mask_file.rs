// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::bytes::{dim_u32, put_u32, Reader};
use crate::io::FORMAT_VERSION;
use crate::mask::SegMask;

pub const MASK_MAGIC: &[u8; 4] = b"PMSK";

pub fn encode_mask(m: &SegMask) -> Result<Vec<u8>> {
    let (h, w, d) = m.dims();
    let mut out = Vec::with_capacity(20 + m.labels().len());
    out.extend_from_slice(MASK_MAGIC);
    put_u32(&mut out, FORMAT_VERSION);
    put_u32(&mut out, dim_u32(h, "H")?);
    put_u32(&mut out, dim_u32(w, "W")?);
    put_u32(&mut out, dim_u32(d, "D")?);
    out.extend_from_slice(m.labels());
    Ok(out)
}

pub fn decode_mask(bytes: &[u8]) -> Result<SegMask> {
    let mut r = Reader::new(bytes);
    r.magic(MASK_MAGIC)?;
    r.version(FORMAT_VERSION)?;
    let h = r.u32("H")? as usize;
    let w = r.u32("W")? as usize;
    let d = r.u32("D")? as usize;
    let at = r.offset();
    let labels = r
        .array((h * w) as u64 * d as u64, 1, "mask payload")?
        .to_vec();
    r.finish()?;
    if let Some(pos) = labels.iter().position(|&l| l > 2) {
        return Err(Error::format(
            at + pos as u64,
            format!("label {} outside {{0, 1, 2}}", labels[pos]),
        ));
    }
    SegMask::from_vec((h, w, d), labels).map_err(|e| Error::format(at, e.to_string()))
}

pub fn write_mask(path: impl AsRef<Path>, m: &SegMask) -> Result<()> {
    fs::write(path, encode_mask(m)?)?;
    Ok(())
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<SegMask> {
    decode_mask(&fs::read(path)?)
}
