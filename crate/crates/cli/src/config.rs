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

//! Run configuration: defaults, then a JSON config file, then flags.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use su2_wigner::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Su2,
    So2,
    Cartesian,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Self::Su2 => "su2",
            Self::So2 => "so2",
            Self::Cartesian => "cartesian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: Group,
    pub jmax_twice: u32,
    pub grid: String,
    pub jsum_twice: u32,
    pub tol: f64,
    pub identity_tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub oracle: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            group: Group::Su2,
            jmax_twice: 1,
            grid: "8x4x16".into(),
            jsum_twice: 40,
            tol: 1e-3,
            identity_tol: 1e-8,
            out: None,
            format: Format::Json,
            seed: 0,
            oracle: false,
        }
    }
}

/// The config file: every field optional, same names as [`RunConfig`].
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    group: Option<Group>,
    jmax_twice: Option<u32>,
    grid: Option<String>,
    jsum_twice: Option<u32>,
    tol: Option<f64>,
    identity_tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
    oracle: Option<bool>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON config file; flags win on conflict
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub group: Option<Group>,
    /// Band limit j_max, as `1`, `3/2` or `1.5`
    #[arg(long, value_parser = parse_spin)]
    pub jmax: Option<u32>,
    /// Haar grid `n_alpha x n_beta x n_gamma`, e.g. `8x4x16`
    #[arg(long)]
    pub grid: Option<String>,
    /// Truncation J_sum of the infinite series, in the same form as --jmax
    #[arg(long, value_parser = parse_spin)]
    pub jsum: Option<u32>,
    /// Tolerance for truncated series (overlap, marginals, reconstruction)
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Add the mollified brute-force cross-checks
    #[arg(long)]
    pub oracle: bool,
}

/// Doubled spin from `"3/2"`, `"1.5"` or `"1"`.
pub fn parse_spin(s: &str) -> std::result::Result<u32, String> {
    let twice = match s.split_once('/') {
        Some((num, "2")) => num.trim().parse::<u32>().map_err(|e| e.to_string())?,
        Some(_) => return Err(format!("spin {s:?} must be a multiple of 1/2")),
        None => {
            let v: f64 = s.trim().parse().map_err(|_| format!("not a spin: {s:?}"))?;
            let t = 2.0 * v;
            if !(t >= 0.0) || t.fract() != 0.0 || t > u32::MAX as f64 {
                return Err(format!("spin {s:?} must be a nonnegative multiple of 1/2"));
            }
            t as u32
        }
    };
    Ok(twice)
}

pub fn parse_grid(s: &str) -> Result<[usize; 3]> {
    let parts: Vec<&str> = s.split('x').collect();
    let bad = || Error::Config(format!("grid {s:?} is not of the form AxBxC"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| bad())?;
        if *o == 0 {
            return Err(bad());
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let mut c = Self::default();
        if let Some(path) = &args.config {
            let text = std::fs::read_to_string(path)?;
            let f: ConfigFile = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            macro_rules! take {
                ($($field:ident),*) => { $( if let Some(v) = f.$field { c.$field = v; } )* };
            }
            take!(group, jmax_twice, grid, jsum_twice, tol, identity_tol, format, seed, oracle);
            if f.out.is_some() {
                c.out = f.out;
            }
        }
        if let Some(v) = args.group {
            c.group = v;
        }
        if let Some(v) = args.jmax {
            c.jmax_twice = v;
        }
        if let Some(v) = &args.grid {
            c.grid = v.clone();
        }
        if let Some(v) = args.jsum {
            c.jsum_twice = v;
        }
        if let Some(v) = args.tol {
            c.tol = v;
        }
        if let Some(v) = &args.out {
            c.out = Some(v.clone());
        }
        if let Some(v) = args.format {
            c.format = v;
        }
        if let Some(v) = args.seed {
            c.seed = v;
        }
        c.oracle |= args.oracle;
        parse_grid(&c.grid)?;
        if !(c.tol > 0.0) || !(c.identity_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(c)
    }

    pub fn grid_sizes(&self) -> [usize; 3] {
        parse_grid(&self.grid).expect("validated in resolve")
    }

    /// The metadata header shared by every output.
    pub fn metadata(&self) -> serde_json::Map<String, serde_json::Value> {
        let mut m = serde_json::Map::new();
        m.insert("group".into(), self.group.name().into());
        m.insert("haar_normalized".into(), true.into());
        m.insert("grid".into(), self.grid.clone().into());
        m.insert("jsum_twice".into(), self.jsum_twice.into());
        m.insert("tol".into(), self.tol.into());
        m.insert("identity_tol".into(), self.identity_tol.into());
        m.insert("config".into(), serde_json::to_value(self).expect("config serializes"));
        m
    }
}
