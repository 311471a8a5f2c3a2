// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use ndarray::{Array2, Array4};

use crate::error::{Error, Result};
use crate::neural::{AttentionProjections, DwSepLayer, ModelConfig};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct NamedTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

/// Ordered collection of named parameter tensors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightBundle {
    tensors: Vec<NamedTensor>,
}

impl WeightBundle {
    pub fn new(tensors: Vec<NamedTensor>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &tensors {
            if !seen.insert(t.name.as_str()) {
                return Err(Error::invalid(format!(
                    "duplicate tensor name {:?}",
                    t.name
                )));
            }
            let n: usize = t.shape.iter().product();
            if n != t.data.len() {
                return Err(Error::invalid(format!(
                    "tensor {:?} has shape {:?} but {} values",
                    t.name,
                    t.shape,
                    t.data.len()
                )));
            }
            if t.data.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!(
                    "tensor {:?} has non-finite values",
                    t.name
                )));
            }
        }
        Ok(Self { tensors })
    }

    pub fn tensors(&self) -> &[NamedTensor] {
        &self.tensors
    }

    pub fn get(&self, name: &str) -> Result<&NamedTensor> {
        self.tensors
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| Error::invalid(format!("weight bundle has no tensor {name:?}")))
    }

    fn array2(&self, name: &str, shape: [usize; 2]) -> Result<Array2<f32>> {
        let t = self.get(name)?;
        if t.shape != shape {
            return Err(Error::invalid(format!(
                "{name}: expected shape {shape:?}, got {:?}",
                t.shape
            )));
        }
        Ok(Array2::from_shape_vec(shape, t.data.clone()).expect("checked shape"))
    }

    fn array4(&self, name: &str, shape: [usize; 4]) -> Result<Array4<f32>> {
        let t = self.get(name)?;
        if t.shape != shape {
            return Err(Error::invalid(format!(
                "{name}: expected shape {shape:?}, got {:?}",
                t.shape
            )));
        }
        Ok(Array4::from_shape_vec(shape, t.data.clone()).expect("checked shape"))
    }

    pub fn dwsep(
        &self,
        prefix: &str,
        c_in: usize,
        c_out: usize,
        k: [usize; 3],
    ) -> Result<DwSepLayer> {
        DwSepLayer::new(
            self.array4(&format!("{prefix}.dw"), [c_in, k[0], k[1], k[2]])?,
            self.array2(&format!("{prefix}.pw"), [c_in, c_out])?,
        )
    }

    pub fn attention(&self, prefix: &str, c: usize) -> Result<AttentionProjections> {
        AttentionProjections::new(
            self.array2(&format!("{prefix}.q"), [c, c])?,
            self.array2(&format!("{prefix}.k"), [c, c])?,
            self.array2(&format!("{prefix}.v"), [c, c])?,
        )
    }

    pub fn head(&self, c: usize) -> Result<(Array2<f32>, [f32; 3])> {
        let w = self.array2("head.w", [c, 3])?;
        let b = self.get("head.b")?;
        if b.shape != [3] {
            return Err(Error::invalid(format!(
                "head.b: expected shape [3], got {:?}",
                b.shape
            )));
        }
        Ok((w, [b.data[0], b.data[1], b.data[2]]))
    }

    /// Names and shapes of every tensor a model with `mc` expects.
    pub fn layout(mc: &ModelConfig) -> Vec<(String, Vec<usize>)> {
        let [kx, ky, kz] = mc.kernel_size;
        let mut out = Vec::new();
        let mut c_in = 1;
        for s in 0..mc.encoder_stages {
            let c = mc.stage_channels(s);
            out.push((format!("enc{s}.dw"), vec![c_in, kx, ky, kz]));
            out.push((format!("enc{s}.pw"), vec![c_in, c]));
            c_in = c;
        }
        let bottleneck = mc.stage_channels(mc.encoder_stages - 1);
        for axis in &mc.attention_axes {
            for p in ["q", "k", "v"] {
                out.push((
                    format!("attn.{}.{p}", axis.name()),
                    vec![bottleneck, bottleneck],
                ));
            }
        }
        let mut c_up = bottleneck;
        for s in (0..mc.encoder_stages).rev() {
            let skip = mc.stage_channels(s);
            out.push((format!("dec{s}.dw"), vec![c_up + skip, kx, ky, kz]));
            out.push((format!("dec{s}.pw"), vec![c_up + skip, skip]));
            c_up = skip;
        }
        out.push(("head.w".into(), vec![mc.base_channels, 3]));
        out.push(("head.b".into(), vec![3]));
        out
    }

    pub fn zeros(mc: &ModelConfig) -> Self {
        let tensors = Self::layout(mc)
            .into_iter()
            .map(|(name, shape)| {
                let n = shape.iter().product();
                NamedTensor {
                    name,
                    shape,
                    data: vec![0.0; n],
                }
            })
            .collect();
        Self { tensors }
    }

    /// Uniform `±sqrt(3 / fan_in)` initialization keyed by `(seed, tensor, element)`.
    pub fn random(mc: &ModelConfig, seed: u64) -> Self {
        let tensors = Self::layout(mc)
            .into_iter()
            .enumerate()
            .map(|(ti, (name, shape))| {
                let n: usize = shape.iter().product();
                let fan_in = if name.ends_with(".dw") {
                    shape[1..].iter().product::<usize>()
                } else {
                    shape[0]
                };
                let a = (3.0 / fan_in.max(1) as f64).sqrt();
                let data = (0..n)
                    .map(|e| rng::uniform(seed, &[ti as u64, e as u64], -a, a) as f32)
                    .collect();
                NamedTensor { name, shape, data }
            })
            .collect();
        Self { tensors }
    }
}
