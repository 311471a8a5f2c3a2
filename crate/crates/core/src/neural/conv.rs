// SPDX-License-Identifier: Apache-2.0

use ndarray::{Array2, Array4};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvKind {
    Standard,
    DepthwiseSeparable,
}

/// Bias-free parameter count of a 3D convolution with kernel extents `k`.
pub fn param_count(kind: ConvKind, k: [usize; 3], c_in: usize, c_out: usize) -> u64 {
    let k3 = k.iter().map(|&e| e as u64).product::<u64>();
    let (ci, co) = (c_in as u64, c_out as u64);
    match kind {
        ConvKind::Standard => k3 * ci * co,
        ConvKind::DepthwiseSeparable => k3 * ci + ci * co,
    }
}

/// Depthwise kernel `(C_in, kh, kw, kd)` followed by a pointwise `(C_in, C_out)` mix.
#[derive(Debug, Clone, PartialEq)]
pub struct DwSepLayer {
    depthwise: Array4<f32>,
    pointwise: Array2<f32>,
}

impl DwSepLayer {
    pub fn new(depthwise: Array4<f32>, pointwise: Array2<f32>) -> Result<Self> {
        let s = depthwise.shape();
        if s[1..].iter().any(|&k| k % 2 == 0) {
            return Err(Error::invalid(format!(
                "depthwise kernel extents must be odd, got {:?}",
                &s[1..]
            )));
        }
        if pointwise.nrows() != s[0] {
            return Err(Error::invalid(format!(
                "pointwise has {} input channels, depthwise has {}",
                pointwise.nrows(),
                s[0]
            )));
        }
        Ok(Self {
            depthwise,
            pointwise,
        })
    }

    pub fn in_channels(&self) -> usize {
        self.depthwise.shape()[0]
    }

    pub fn out_channels(&self) -> usize {
        self.pointwise.ncols()
    }

    pub fn depthwise(&self) -> &Array4<f32> {
        &self.depthwise
    }

    pub fn pointwise(&self) -> &Array2<f32> {
        &self.pointwise
    }
}

/// Same-size depthwise-separable convolution of a `C × H × W × D` input.
/// Taps outside the input contribute nothing (zero padding).
pub fn dwsep_conv3d(x: &Array4<f32>, layer: &DwSepLayer) -> Result<Array4<f32>> {
    let (c, h, w, d) = x.dim();
    if c != layer.in_channels() {
        return Err(Error::invalid(format!(
            "input has {c} channels, layer expects {}",
            layer.in_channels()
        )));
    }
    let x = x.as_standard_layout();
    let xs = x.as_slice().expect("standard layout");
    let kern = layer.depthwise.as_standard_layout();
    let ks = kern.as_slice().expect("standard layout");
    let (_, kh, kw, kd) = layer.depthwise.dim();
    let (rh, rw, rd) = ((kh / 2) as isize, (kw / 2) as isize, (kd / 2) as isize);
    let plane = h * w * d;

    let mut dw = vec![0f32; c * plane];
    for ch in 0..c {
        let src = &xs[ch * plane..(ch + 1) * plane];
        let dst = &mut dw[ch * plane..(ch + 1) * plane];
        let kc = &ks[ch * kh * kw * kd..(ch + 1) * kh * kw * kd];
        for a in 0..kh {
            let oa = a as isize - rh;
            for b in 0..kw {
                let ob = b as isize - rw;
                for e in 0..kd {
                    let oe = e as isize - rd;
                    let kv = kc[(a * kw + b) * kd + e];
                    if kv == 0.0 {
                        continue;
                    }
                    let d_lo = (-oe).max(0) as usize;
                    let d_hi = (d as isize - oe).min(d as isize).max(0) as usize;
                    for i in 0..h {
                        let si = i as isize + oa;
                        if si < 0 || si >= h as isize {
                            continue;
                        }
                        for j in 0..w {
                            let sj = j as isize + ob;
                            if sj < 0 || sj >= w as isize {
                                continue;
                            }
                            let src_row = (si as usize * w + sj as usize) * d;
                            let dst_row = (i * w + j) * d;
                            for k in d_lo..d_hi {
                                dst[dst_row + k] += kv * src[src_row + (k as isize + oe) as usize];
                            }
                        }
                    }
                }
            }
        }
    }

    let c_out = layer.out_channels();
    let mut out = vec![0f32; c_out * plane];
    for ci in 0..c {
        let src = &dw[ci * plane..(ci + 1) * plane];
        for co in 0..c_out {
            let p = layer.pointwise[[ci, co]];
            if p == 0.0 {
                continue;
            }
            let dst = &mut out[co * plane..(co + 1) * plane];
            for (o, s) in dst.iter_mut().zip(src) {
                *o += p * s;
            }
        }
    }
    Ok(Array4::from_shape_vec((c_out, h, w, d), out).expect("shape"))
}
