// SPDX-License-Identifier: Apache-2.0

//! Forward kernels and losses of the waveform segmentation network.

mod attention;
mod config;
mod conv;
mod loss;
mod unet;
mod weights;

pub use attention::{
    attention_weights, axial_attention, axial_attention_pre_residual, AttentionProjections,
};
pub use config::{Axis, ModelConfig};
pub use conv::{dwsep_conv3d, param_count, ConvKind, DwSepLayer};
pub use loss::{
    dice_loss, dice_per_class, softmax_probs, total_loss, wce_loss, DICE_EPSILON, DICE_WEIGHT,
};
pub use unet::{logits_to_mask, unet_forward, LogitsTensor};
pub use weights::{NamedTensor, WeightBundle};
