// SPDX-License-Identifier: Apache-2.0

use ndarray::{s, Array2, Array4, ArrayView2};

use crate::error::{Error, Result};
use crate::neural::Axis;

/// Query, key and value maps, each `C × C` and applied as `x · W`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionProjections {
    q: Array2<f32>,
    k: Array2<f32>,
    v: Array2<f32>,
}

impl AttentionProjections {
    pub fn new(q: Array2<f32>, k: Array2<f32>, v: Array2<f32>) -> Result<Self> {
        let c = q.nrows();
        for (name, m) in [("q", &q), ("k", &k), ("v", &v)] {
            if m.dim() != (c, c) {
                return Err(Error::invalid(format!(
                    "projection {name} has shape {:?}, expected ({c}, {c})",
                    m.dim()
                )));
            }
        }
        Ok(Self { q, k, v })
    }

    pub fn channels(&self) -> usize {
        self.q.nrows()
    }
}

/// Row-wise softmax of `q · kᵀ / sqrt(C)` for `n × C` query and key matrices.
pub fn attention_weights(q: ArrayView2<f32>, k: ArrayView2<f32>) -> Array2<f32> {
    let scale = 1.0 / (q.ncols().max(1) as f32).sqrt();
    let mut scores = q.dot(&k.t()) * scale;
    for mut row in scores.rows_mut() {
        let m = row.iter().copied().fold(f32::NEG_INFINITY, f32::max);
        let mut sum = 0f64;
        for v in row.iter_mut() {
            *v = (*v - m).exp();
            sum += *v as f64;
        }
        let inv = (1.0 / sum) as f32;
        row.mapv_inplace(|v| v * inv);
    }
    scores
}

/// Self-attention along `axis` without the residual term.
pub fn axial_attention_pre_residual(
    x: &Array4<f32>,
    axis: Axis,
    proj: &AttentionProjections,
) -> Result<Array4<f32>> {
    let c = x.dim().0;
    if c != proj.channels() {
        return Err(Error::invalid(format!(
            "input has {c} channels, projections expect {}",
            proj.channels()
        )));
    }
    // Move the attended axis last: view is C × o1 × o2 × n.
    let perm = match axis {
        Axis::H => [0, 2, 3, 1],
        Axis::W => [0, 1, 3, 2],
        Axis::D => [0, 1, 2, 3],
    };
    let xv = x.view().permuted_axes(perm);
    let mut out = Array4::<f32>::zeros(x.raw_dim());
    let mut ov = out.view_mut().permuted_axes(perm);
    let (_, o1, o2, _) = xv.dim();
    for a in 0..o1 {
        for b in 0..o2 {
            // n × C
            let fiber = xv.slice(s![.., a, b, ..]).reversed_axes();
            let q = fiber.dot(&proj.q);
            let k = fiber.dot(&proj.k);
            let v = fiber.dot(&proj.v);
            let att = attention_weights(q.view(), k.view());
            let y = att.dot(&v);
            ov.slice_mut(s![.., a, b, ..]).assign(&y.t());
        }
    }
    Ok(out)
}

/// Self-attention along `axis` with residual addition.
pub fn axial_attention(
    x: &Array4<f32>,
    axis: Axis,
    proj: &AttentionProjections,
) -> Result<Array4<f32>> {
    let mut y = axial_attention_pre_residual(x, axis, proj)?;
    y += x;
    Ok(y)
}
