// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliResult, Context};

/// Self-describing record of one invocation, written next to its main output.
#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub config: C,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(subcommand: &'static str, config: C) -> Self {
        Self {
            tool: "pulsar",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Write `<out>.manifest.json`.
    pub fn write_beside(&self, out: &Path) -> CliResult<PathBuf> {
        let path = manifest_path(out);
        let mut json = serde_json::to_string_pretty(self).expect("manifest serializes");
        json.push('\n');
        std::fs::write(&path, json).with_path(&path)?;
        Ok(path)
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
