// SPDX-License-Identifier: Apache-2.0

use ndarray::Array4;

use crate::error::{Error, Result};
use crate::mask::SegMask;
use crate::neural::LogitsTensor;

pub const DICE_EPSILON: f64 = 1e-6;
pub const DICE_WEIGHT: f64 = 0.5;

fn softmax3(v: [f64; 3]) -> [f64; 3] {
    let m = v[0].max(v[1]).max(v[2]);
    let e = v.map(|x| (x - m).exp());
    let s = e[0] + e[1] + e[2];
    e.map(|x| x / s)
}

fn check(l: &LogitsTensor, y: &SegMask) -> Result<()> {
    if l.dims() != y.dims() {
        return Err(Error::invalid(format!(
            "logits dims {:?} do not match mask dims {:?}",
            l.dims(),
            y.dims()
        )));
    }
    Ok(())
}

/// Per-voxel softmax probabilities, shaped like the logits.
pub fn softmax_probs(l: &LogitsTensor) -> Array4<f64> {
    let (h, w, d) = l.dims();
    let mut p = Array4::<f64>::zeros((3, h, w, d));
    for i in 0..h {
        for j in 0..w {
            for k in 0..d {
                let s = softmax3(l.voxel(i, j, k));
                for c in 0..3 {
                    p[[c, i, j, k]] = s[c];
                }
            }
        }
    }
    p
}

/// Weighted cross entropy summed over voxels, and its gradient with respect to the logits.
pub fn wce_loss(l: &LogitsTensor, y: &SegMask, weights: [f64; 3]) -> Result<(f64, Array4<f64>)> {
    check(l, y)?;
    let (h, w, d) = l.dims();
    let mut grad = Array4::<f64>::zeros((3, h, w, d));
    let mut loss = 0.0;
    for i in 0..h {
        for j in 0..w {
            for k in 0..d {
                let v = l.voxel(i, j, k);
                let m = v[0].max(v[1]).max(v[2]);
                let lse = m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln();
                let t = y.get(i, j, k) as usize;
                let wt = weights[t];
                loss += wt * (lse - v[t]);
                let p = softmax3(v);
                for c in 0..3 {
                    let yc = if c == t { 1.0 } else { 0.0 };
                    grad[[c, i, j, k]] = wt * (p[c] - yc);
                }
            }
        }
    }
    Ok((loss, grad))
}

/// Soft Dice loss per class on softmax probabilities.
pub fn dice_per_class(l: &LogitsTensor, y: &SegMask) -> Result<[f64; 3]> {
    check(l, y)?;
    let (h, w, d) = l.dims();
    let mut inter = [0.0; 3];
    let mut psum = [0.0; 3];
    let mut ysum = [0.0; 3];
    for i in 0..h {
        for j in 0..w {
            for k in 0..d {
                let p = softmax3(l.voxel(i, j, k));
                let t = y.get(i, j, k) as usize;
                for c in 0..3 {
                    psum[c] += p[c];
                }
                inter[t] += p[t];
                ysum[t] += 1.0;
            }
        }
    }
    Ok(std::array::from_fn(|c| {
        1.0 - (2.0 * inter[c] + DICE_EPSILON) / (psum[c] + ysum[c] + DICE_EPSILON)
    }))
}

/// Soft Dice loss averaged over the three classes.
pub fn dice_loss(l: &LogitsTensor, y: &SegMask) -> Result<f64> {
    let per = dice_per_class(l, y)?;
    Ok(per.iter().sum::<f64>() / 3.0)
}

/// `wce + 0.5 · dice`.
pub fn total_loss(l: &LogitsTensor, y: &SegMask, weights: [f64; 3]) -> Result<f64> {
    Ok(wce_loss(l, y, weights)?.0 + DICE_WEIGHT * dice_loss(l, y)?)
}
