// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::bytes::{dim_u32, f32s, put_f32s, put_u32, Reader};
use crate::io::FORMAT_VERSION;
use crate::neural::{NamedTensor, WeightBundle};

pub const WEIGHTS_MAGIC: &[u8; 4] = b"PWTS";

pub fn encode_weights(wb: &WeightBundle) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    out.extend_from_slice(WEIGHTS_MAGIC);
    put_u32(&mut out, FORMAT_VERSION);
    put_u32(&mut out, dim_u32(wb.tensors().len(), "tensor count")?);
    for t in wb.tensors() {
        put_u32(&mut out, dim_u32(t.name.len(), "name length")?);
        out.extend_from_slice(t.name.as_bytes());
        put_u32(&mut out, dim_u32(t.shape.len(), "rank")?);
        for &s in &t.shape {
            put_u32(&mut out, dim_u32(s, "dimension")?);
        }
    }
    for t in wb.tensors() {
        put_f32s(&mut out, &t.data);
    }
    Ok(out)
}

pub fn decode_weights(bytes: &[u8]) -> Result<WeightBundle> {
    let mut r = Reader::new(bytes);
    r.magic(WEIGHTS_MAGIC)?;
    r.version(FORMAT_VERSION)?;
    let count = r.u32("tensor count")? as usize;
    let mut manifest = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let at = r.offset();
        let len = r.u32("name length")? as usize;
        let name = std::str::from_utf8(r.take(len, "tensor name")?)
            .map_err(|_| Error::format(at, "tensor name is not UTF-8"))?
            .to_owned();
        let rank = r.u32("rank")? as usize;
        let mut shape = Vec::with_capacity(rank.min(16));
        for _ in 0..rank {
            shape.push(r.u32("dimension")? as usize);
        }
        manifest.push((name, shape));
    }
    let payload_at = r.offset();
    let expected: u64 = manifest
        .iter()
        .map(|(_, s)| s.iter().map(|&d| d as u64).product::<u64>())
        .sum();
    let remaining = (bytes.len() as u64 - payload_at) / 4;
    if !(bytes.len() as u64 - payload_at).is_multiple_of(4) || remaining != expected {
        return Err(Error::format(
            payload_at,
            format!(
                "manifest describes {expected} floats but payload holds {} bytes",
                bytes.len() as u64 - payload_at
            ),
        ));
    }
    let mut tensors = Vec::with_capacity(manifest.len());
    for (name, shape) in manifest {
        let n: u64 = shape.iter().map(|&d| d as u64).product();
        let data = f32s(r.array(n, 4, "tensor payload")?);
        tensors.push(NamedTensor { name, shape, data });
    }
    r.finish()?;
    WeightBundle::new(tensors).map_err(|e| Error::format(payload_at, e.to_string()))
}

pub fn write_weights(path: impl AsRef<Path>, wb: &WeightBundle) -> Result<()> {
    fs::write(path, encode_weights(wb)?)?;
    Ok(())
}

pub fn read_weights(path: impl AsRef<Path>) -> Result<WeightBundle> {
    decode_weights(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundle() -> WeightBundle {
        WeightBundle::new(vec![
            NamedTensor {
                name: "a.dw".into(),
                shape: vec![2, 3],
                data: (0..6).map(|v| v as f32).collect(),
            },
            NamedTensor {
                name: "b".into(),
                shape: vec![4],
                data: vec![-1.0, 0.5, 2.0, 1e-9],
            },
        ])
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let wb = bundle();
        let bytes = encode_weights(&wb).unwrap();
        assert_eq!(decode_weights(&bytes).unwrap(), wb);
    }

    #[test]
    fn shape_payload_mismatch() {
        let mut bytes = encode_weights(&bundle()).unwrap();
        bytes.truncate(bytes.len() - 4);
        let err = decode_weights(&bytes).unwrap_err();
        assert!(err.to_string().contains("manifest"), "{err}");
        let mut bytes = encode_weights(&bundle()).unwrap();
        bytes.extend_from_slice(&[0; 4]);
        assert!(decode_weights(&bytes).is_err());
    }
}
