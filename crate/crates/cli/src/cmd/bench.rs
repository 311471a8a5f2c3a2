// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use pulsar_core::defense::DefenseMethod;
use pulsar_core::suite::{run_bench, SuiteConfig};

use crate::error::{CliError, CliResult, Context};
use crate::manifest::RunManifest;

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// "standard" or a suite JSON path
    #[arg(long, default_value = "standard")]
    pub suite: String,
    /// Group sizes to sweep
    #[arg(long, default_value = "1,4,5,10,25", value_delimiter = ',')]
    pub phi_list: Vec<usize>,
    /// Defenses to compare: none, oracle, avgsub, coherence, ror, sor
    #[arg(
        long,
        default_value = "none,avgsub,coherence,oracle",
        value_delimiter = ','
    )]
    pub methods: Vec<String>,
    /// Restrict to these scene indices
    #[arg(long, value_delimiter = ',')]
    pub scenes: Option<Vec<usize>>,
    /// CSV table, one row per group size
    #[arg(long)]
    pub out: PathBuf,
    /// Full JSON results [default: --out with a .json extension]
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Serialize)]
struct BenchConfig {
    suite: SuiteConfig,
    phis: Vec<usize>,
    methods: Vec<DefenseMethod>,
}

pub fn load_suite(name: &str) -> CliResult<SuiteConfig> {
    if name == "standard" {
        return Ok(SuiteConfig::standard());
    }
    let path = PathBuf::from(name);
    let text = std::fs::read_to_string(&path).with_path(&path)?;
    SuiteConfig::from_json(&text).with_path(&path)
}

pub fn parse_method(name: &str) -> CliResult<DefenseMethod> {
    Ok(match name.trim() {
        "none" => DefenseMethod::None,
        "oracle" => DefenseMethod::OracleMask,
        "avgsub" => DefenseMethod::AvgSubtract,
        "coherence" => DefenseMethod::coherence(),
        "ror" => DefenseMethod::ror(),
        "sor" => DefenseMethod::sor(),
        other => {
            return Err(CliError::usage(format!(
                "unknown method {other:?} in --methods"
            )))
        }
    })
}

pub fn run(args: BenchArgs) -> CliResult<()> {
    let mut suite = load_suite(&args.suite)?;
    if let Some(idx) = &args.scenes {
        let picked = idx
            .iter()
            .map(|&i| {
                suite.scenes.get(i).cloned().ok_or_else(|| {
                    CliError::usage(format!(
                        "--scenes {i}: suite has {} scenes",
                        suite.scenes.len()
                    ))
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        suite.scenes = picked;
    }
    if args.phi_list.is_empty() || args.phi_list.contains(&0) {
        return Err(CliError::usage("--phi-list needs positive group sizes"));
    }
    let methods = args
        .methods
        .iter()
        .map(|m| parse_method(m))
        .collect::<CliResult<Vec<_>>>()?;

    let result = run_bench(&suite, &args.phi_list, &methods)?;
    let json_path = args
        .json
        .clone()
        .unwrap_or_else(|| args.out.with_extension("json"));
    std::fs::write(&args.out, result.to_csv()).with_path(&args.out)?;
    std::fs::write(&json_path, result.to_json()).with_path(&json_path)?;

    for row in &result.rows {
        let cells: Vec<String> = row
            .cells
            .iter()
            .map(|c| match c.mean_accuracy {
                Some(v) => format!("{} {v:.2}%", c.method),
                None if c.undefined => format!("{} -", c.method),
                None => format!("{} failed", c.method),
            })
            .collect();
        eprintln!("bench: phi {:>3}: {}", row.phi, cells.join(", "));
    }
    for c in result.rows.iter().flat_map(|r| &r.cells) {
        for s in c.scenes.iter().filter(|s| s.error.is_some()) {
            eprintln!(
                "bench: phi {} {} scene {}: {}",
                c.phi,
                c.method,
                s.scene,
                s.error.as_deref().unwrap_or_default()
            );
        }
    }

    let mut m = RunManifest::new(
        "bench",
        BenchConfig {
            suite,
            phis: args.phi_list.clone(),
            methods,
        },
    );
    m.outputs.extend([args.out.clone(), json_path]);
    m.write_beside(&args.out)?;
    Ok(())
}
