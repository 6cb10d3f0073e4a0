// Copyright 2026 The su2-wigner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `su2wig`: verification suites, Wigner tables and overlaps from state files.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage,
//! schema or configuration errors.

mod commands;
mod config;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use config::{parse_spin, CommonArgs, Format, RunConfig};
use su2_wigner::io::TableFormat;
use su2_wigner::Result;

#[derive(Parser)]
#[command(name = "su2wig", version, about = "Wigner distributions on SU(2), SO(2) and the line")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the invariant battery and write a report
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate the Wigner function of a state file
    Wigner {
        state: PathBuf,
        /// JSON array of nodes; defaults to the --grid nodes
        #[arg(long)]
        nodes: Option<PathBuf>,
        /// Comma-separated list of J values for su2 blocks, e.g. `0,1/2,1`
        #[arg(long, value_delimiter = ',', value_parser = parse_spin)]
        j: Option<Vec<u32>>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare Tr(rho_1 rho_2) with its Wigner-space partial sums
    Overlap {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Verify { common } => {
            let cfg = RunConfig::resolve(&common)?;
            let report = verify::run(&cfg);
            let text = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializes") + "\n",
                Format::Csv => {
                    let mut meta = report.metadata.clone();
                    meta.insert("passed".into(), report.passed.into());
                    commands::csv_with_header(&serde_json::Value::Object(meta), &report.checks)?
                }
            };
            emit(&cfg, &text)?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("check {} failed: {}", c.name, c.failure.as_deref().unwrap_or("error above tolerance"));
            }
            Ok(report.passed)
        }
        Cmd::Wigner { state, nodes, j, common } => {
            let cfg = RunConfig::resolve(&common)?;
            let table = commands::wigner(&cfg, &state, nodes.as_deref(), j.as_deref())?;
            let fmt = match cfg.format {
                Format::Json => TableFormat::Json,
                Format::Csv => TableFormat::Csv,
            };
            let mut text = table.render(fmt)?;
            if fmt == TableFormat::Json {
                text.push('\n');
            }
            emit(&cfg, &text)?;
            Ok(true)
        }
        Cmd::Overlap { a, b, common } => {
            let cfg = RunConfig::resolve(&common)?;
            let report = commands::overlap(&cfg, &a, &b)?;
            let mut text = report.render(cfg.format)?;
            if cfg.format == Format::Json {
                text.push('\n');
            }
            emit(&cfg, &text)?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("su2wig: {e}");
            ExitCode::from(2)
        }
    }
}
