// SPDX-License-Identifier: Apache-2.0

use ndarray::{concatenate, Array4, Axis as NdAxis};

use crate::error::{Error, Result};
use crate::mask::SegMask;
use crate::neural::{axial_attention, dwsep_conv3d, ModelConfig, WeightBundle};

/// Class scores shaped `3 × H × W × D`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitsTensor {
    data: Array4<f64>,
}

impl LogitsTensor {
    pub fn new(data: Array4<f64>) -> Result<Self> {
        if data.dim().0 != 3 {
            return Err(Error::invalid(format!(
                "logits need 3 classes, got {}",
                data.dim().0
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("logits contain non-finite values"));
        }
        Ok(Self { data })
    }

    /// Spatial dims `(H, W, D)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        let (_, h, w, d) = self.data.dim();
        (h, w, d)
    }

    pub fn data(&self) -> &Array4<f64> {
        &self.data
    }

    pub fn into_inner(self) -> Array4<f64> {
        self.data
    }

    pub(crate) fn voxel(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            self.data[[0, i, j, k]],
            self.data[[1, i, j, k]],
            self.data[[2, i, j, k]],
        ]
    }
}

fn silu(x: &Array4<f32>) -> Array4<f32> {
    x.mapv(|v| v / (1.0 + (-v).exp()))
}

fn avg_pool(x: &Array4<f32>, f: [usize; 3]) -> Array4<f32> {
    let (c, h, w, d) = x.dim();
    let (oh, ow, od) = (h / f[0], w / f[1], d / f[2]);
    let norm = 1.0 / (f[0] * f[1] * f[2]) as f32;
    let mut out = Array4::<f32>::zeros((c, oh, ow, od));
    for ((ch, i, j, k), v) in x.indexed_iter() {
        let (a, b, e) = (i / f[0], j / f[1], k / f[2]);
        if a < oh && b < ow && e < od {
            out[[ch, a, b, e]] += v * norm;
        }
    }
    out
}

fn upsample_nearest(x: &Array4<f32>, f: [usize; 3]) -> Array4<f32> {
    let (c, h, w, d) = x.dim();
    Array4::from_shape_fn((c, h * f[0], w * f[1], d * f[2]), |(ch, i, j, k)| {
        x[[ch, i / f[0], j / f[1], k / f[2]]]
    })
}

/// Encoder, bottleneck axial attention and decoder with skip connections,
/// followed by a pointwise 3-class head. Every block is pre-activated with SiLU.
pub fn unet_forward(
    window: &Array4<f32>,
    mc: &ModelConfig,
    wb: &WeightBundle,
) -> Result<LogitsTensor> {
    mc.validate()?;
    let (c0, h, w, d) = window.dim();
    if c0 != 1 {
        return Err(Error::invalid(format!(
            "window must have 1 input channel, got {c0}"
        )));
    }
    let total = mc.total_downsample();
    for (axis, (len, f)) in ["H", "W", "D"].iter().zip([h, w, d].into_iter().zip(total)) {
        if len == 0 || len % f != 0 {
            return Err(Error::invalid(format!(
                "axis {axis} has length {len}, not divisible by total downsample {f}"
            )));
        }
    }
    let k = mc.kernel_size;
    let mut x = window.to_owned();
    let mut skips = Vec::with_capacity(mc.encoder_stages);
    let mut c_in = 1;
    for s in 0..mc.encoder_stages {
        let c = mc.stage_channels(s);
        let layer = wb.dwsep(&format!("enc{s}"), c_in, c, k)?;
        x = dwsep_conv3d(&silu(&x), &layer)?;
        skips.push(x.clone());
        x = avg_pool(&x, mc.downsample[s]);
        c_in = c;
    }
    for axis in &mc.attention_axes {
        let proj = wb.attention(&format!("attn.{}", axis.name()), c_in)?;
        x = axial_attention(&x, *axis, &proj)?;
    }
    for s in (0..mc.encoder_stages).rev() {
        let up = upsample_nearest(&x, mc.downsample[s]);
        let skip = &skips[s];
        let cat = concatenate(NdAxis(0), &[up.view(), skip.view()]).expect("matching spatial dims");
        let layer = wb.dwsep(&format!("dec{s}"), cat.dim().0, skip.dim().0, k)?;
        x = dwsep_conv3d(&silu(&cat), &layer)?;
    }
    let (hw, hb) = wb.head(mc.base_channels)?;
    let a = silu(&x);
    let mut out = Array4::<f64>::zeros((3, h, w, d));
    for class in 0..3 {
        let mut plane = out.index_axis_mut(NdAxis(0), class);
        plane.fill(hb[class] as f64);
        for ch in 0..mc.base_channels {
            let wv = hw[[ch, class]] as f64;
            if wv == 0.0 {
                continue;
            }
            plane.zip_mut_with(&a.index_axis(NdAxis(0), ch), |o, v| *o += wv * *v as f64);
        }
    }
    LogitsTensor::new(out)
}

/// Per-voxel argmax; ties go to the lowest class.
pub fn logits_to_mask(l: &LogitsTensor) -> SegMask {
    let (h, w, d) = l.dims();
    let mut labels = Vec::with_capacity(h * w * d);
    for i in 0..h {
        for j in 0..w {
            for k in 0..d {
                let v = l.voxel(i, j, k);
                let mut best = 0;
                for c in 1..3 {
                    if v[c] > v[best] {
                        best = c;
                    }
                }
                labels.push(best as u8);
            }
        }
    }
    SegMask::from_vec((h, w, d), labels).expect("labels in range")
}
