// SPDX-License-Identifier: Apache-2.0

pub mod attack;
pub mod bench;
pub mod defend;
pub mod eval;
pub mod synth;
