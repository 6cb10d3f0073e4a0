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

//! State files and Wigner table export.
//!
//! State files are JSON objects tagged by `"group"`:
//!
//! ```json
//! {"group": "su2", "jmax_twice": 1, "normalized": true,
//!  "blocks": [{"two_j": 0, "re": [[1.0]], "im": [[0.0]]}]}
//! {"group": "su2", "jmax_twice": 1, "weights": [0.5, 0.5],
//!  "components": [{"blocks": [...]}, {"blocks": [...]}]}
//! {"group": "so2", "m_max": 2, "re": [0, 0, 1, 0, 0], "im": [0, 0, 0, 0, 0]}
//! {"group": "cartesian", "half_width": 8.0, "re": [...], "im": [...]}
//! ```
//!
//! Omitted SU(2) blocks are zero. `"normalized": true` asserts unit norm
//! (checked to 1e-8); otherwise nonzero states are normalized on load.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::baselines::{AngleState, CartesianState};
use crate::error::{Error, Result};
use crate::harmonic::{DensityEnsemble, IrrepBlockState};
use crate::linalg::CMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockFile {
    pub two_j: u32,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    pub blocks: Vec<BlockFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Su2File {
    pub jmax_twice: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentFile>>,
    #[serde(default)]
    pub normalized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct So2File {
    pub m_max: i64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartesianFile {
    pub half_width: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum StateFile {
    Su2(Su2File),
    So2(So2File),
    Cartesian(CartesianFile),
}

/// A parsed and validated state.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedState {
    Su2(DensityEnsemble),
    So2(AngleState),
    Cartesian(CartesianState),
}

impl LoadedState {
    pub fn group(&self) -> &'static str {
        match self {
            Self::Su2(_) => "su2",
            Self::So2(_) => "so2",
            Self::Cartesian(_) => "cartesian",
        }
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn complex_vec(re: &[f64], im: &[f64], what: &str) -> Result<Vec<Complex64>> {
    if re.len() != im.len() {
        return Err(schema(format!("{what}: re has {} entries, im has {}", re.len(), im.len())));
    }
    Ok(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

fn parse_blocks(jmax_twice: u32, blocks: &[BlockFile], normalized: bool) -> Result<IrrepBlockState> {
    let mut mats: Vec<Option<CMatrix>> = vec![None; jmax_twice as usize + 1];
    for b in blocks {
        if b.two_j > jmax_twice {
            return Err(schema(format!("block two_j = {} exceeds jmax_twice = {jmax_twice}", b.two_j)));
        }
        let n = b.two_j as usize + 1;
        let square = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if !square(&b.re) || !square(&b.im) {
            return Err(schema(format!("block two_j = {} must be {n} x {n}", b.two_j)));
        }
        let slot = &mut mats[b.two_j as usize];
        if slot.is_some() {
            return Err(schema(format!("duplicate block two_j = {}", b.two_j)));
        }
        *slot = Some(CMatrix::from_fn(n, |r, c| Complex64::new(b.re[r][c], b.im[r][c])));
    }
    let blocks = mats
        .into_iter()
        .enumerate()
        .map(|(tj, m)| m.unwrap_or_else(|| CMatrix::zeros(tj + 1)))
        .collect();
    let mut s = IrrepBlockState::from_blocks(blocks)?;
    let norm = s.norm();
    if normalized {
        if (norm - 1.0).abs() > 1e-8 {
            return Err(schema(format!("state marked normalized has norm {norm}")));
        }
    } else if norm > 0.0 {
        s.normalize();
    }
    Ok(s)
}

impl StateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| schema(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files serialize")
    }

    pub fn load(&self) -> Result<LoadedState> {
        match self {
            Self::Su2(f) => {
                let ens = match (&f.blocks, &f.weights, &f.components) {
                    (Some(b), None, None) => DensityEnsemble::pure(parse_blocks(f.jmax_twice, b, f.normalized)?),
                    (None, Some(w), Some(c)) => {
                        if w.len() != c.len() || c.is_empty() {
                            return Err(schema(format!("{} weights for {} components", w.len(), c.len())));
                        }
                        if w.iter().any(|x| !(*x >= 0.0)) {
                            return Err(schema("weights must be nonnegative"));
                        }
                        let states =
                            c.iter().map(|c| parse_blocks(f.jmax_twice, &c.blocks, f.normalized)).collect::<Result<_>>()?;
                        DensityEnsemble::new(w.clone(), states).map_err(|e| schema(e.to_string()))?
                    }
                    _ => return Err(schema("su2 state needs either blocks, or weights with components")),
                };
                Ok(LoadedState::Su2(ens))
            }
            Self::So2(f) => {
                let c = complex_vec(&f.re, &f.im, "so2 coefficients")?;
                AngleState::new(f.m_max, c).map(LoadedState::So2).map_err(|e| schema(e.to_string()))
            }
            Self::Cartesian(f) => {
                let c = complex_vec(&f.re, &f.im, "cartesian samples")?;
                CartesianState::new(f.half_width, c).map(LoadedState::Cartesian).map_err(|e| schema(e.to_string()))
            }
        }
    }

    pub fn from_su2_state(state: &IrrepBlockState) -> Self {
        Self::Su2(Su2File {
            jmax_twice: state.two_jmax(),
            blocks: Some(block_files(state)),
            weights: None,
            components: None,
            normalized: (state.norm() - 1.0).abs() < 1e-12,
        })
    }

    pub fn from_ensemble(rho: &DensityEnsemble) -> Self {
        Self::Su2(Su2File {
            jmax_twice: rho.two_jmax(),
            blocks: None,
            weights: Some(rho.weights().to_vec()),
            components: Some(rho.states().iter().map(|s| ComponentFile { blocks: block_files(s) }).collect()),
            normalized: rho.states().iter().all(|s| (s.norm() - 1.0).abs() < 1e-12),
        })
    }

    pub fn from_angle_state(s: &AngleState) -> Self {
        Self::So2(So2File {
            m_max: s.m_max(),
            re: s.coeffs().iter().map(|z| z.re).collect(),
            im: s.coeffs().iter().map(|z| z.im).collect(),
        })
    }

    pub fn from_cartesian_state(s: &CartesianState) -> Self {
        Self::Cartesian(CartesianFile {
            half_width: s.half_width(),
            re: s.samples().iter().map(|z| z.re).collect(),
            im: s.samples().iter().map(|z| z.im).collect(),
        })
    }
}

fn block_files(state: &IrrepBlockState) -> Vec<BlockFile> {
    state
        .blocks()
        .iter()
        .enumerate()
        .map(|(tj, b)| {
            let n = tj + 1;
            BlockFile {
                two_j: tj as u32,
                re: (0..n).map(|r| (0..n).map(|c| b[(r, c)].re).collect()).collect(),
                im: (0..n).map(|r| (0..n).map(|c| b[(r, c)].im).collect()).collect(),
            }
        })
        .collect()
}

/// One exported value. For `so2` tables `alpha` is theta and `two_m` is
/// `2m`; for `cartesian` tables `alpha` is q and `beta` is p. Unused
/// columns are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub two_j: u32,
    pub two_m: i32,
    pub two_n: i32,
    #[serde(rename = "two_m'")]
    pub two_mp: i32,
    #[serde(rename = "two_n'")]
    pub two_np: i32,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerTable {
    pub metadata: serde_json::Map<String, serde_json::Value>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Csv,
}

impl WignerTable {
    /// Starts a table whose metadata carries the group and the measure flag.
    pub fn new(group: &str) -> Self {
        let mut metadata = serde_json::Map::new();
        metadata.insert("group".into(), group.into());
        metadata.insert("haar_normalized".into(), true.into());
        Self { metadata, rows: Vec::new() }
    }

    pub fn push_block(&mut self, block: &crate::wigner::WignerBlock) {
        let e = block.g.to_euler();
        let t = block.two_j;
        let n = block.dim();
        let m = |i: usize| crate::irreps::two_m_of(t, i);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let z = block.get(a, b, c, d);
                        self.rows.push(TableRow {
                            alpha: e.alpha,
                            beta: e.beta,
                            gamma: e.gamma,
                            two_j: t,
                            two_m: m(a),
                            two_n: m(b),
                            two_mp: m(c),
                            two_np: m(d),
                            re: z.re,
                            im: z.im,
                        });
                    }
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    /// CSV with the metadata as a single leading `# {json}` comment line.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!("# {}\n", serde_json::Value::Object(self.metadata.clone()));
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        if self.rows.is_empty() {
            w.write_record(["alpha", "beta", "gamma", "two_j", "two_m", "two_n", "two_m'", "two_n'", "re", "im"])
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(body).expect("csv is utf-8"));
        Ok(out)
    }

    pub fn render(&self, format: TableFormat) -> Result<String> {
        match format {
            TableFormat::Json => Ok(self.to_json()),
            TableFormat::Csv => self.to_csv(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| schema(e.to_string()))
    }
}
