// SPDX-License-Identifier: Apache-2.0

//! Non-neural defenses: mask application, simultaneous-sensing baselines,
//! mask resizing and point-cloud outlier filters.

mod average;
mod masking;
mod method;
pub(crate) mod outlier;

pub use average::avg_subtract;
pub use masking::{apply_mask, coherence_mask, resize_mask};
pub use method::{
    run_defense, DefenseInputs, DefenseMethod, DefenseOutcome, DEFAULT_COHERENCE_THETA,
};
pub use outlier::{
    knn_mean_distances, ror_filter, sor_filter, DEFAULT_ROR_MIN_NEIGHBORS, DEFAULT_ROR_RADIUS,
    DEFAULT_SOR_K, DEFAULT_SOR_STD_RATIO,
};
