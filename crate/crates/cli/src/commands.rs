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

//! The `wigner` and `overlap` commands.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;
use serde::Serialize;
use su2_wigner::baselines::{angle_wigner_complex, cartesian_wigner_complex};
use su2_wigner::harmonic::Side;
use su2_wigner::io::{LoadedState, StateFile, TableRow, WignerTable};
use su2_wigner::quadrature::haar_grid;
use su2_wigner::wigner::{overlap_trace, WignerPlan};
use su2_wigner::{Error, EulerAngles, Result, Su2Element};

use crate::config::{Format, RunConfig};

/// Nodes file: a JSON array of `[alpha, beta, gamma]` (su2), `[theta, m]`
/// (so2) or `[q, p]` (cartesian).
fn read_nodes(path: &Path, width: usize) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let nodes: Vec<Vec<f64>> = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("nodes file: {e}")))?;
    if let Some(bad) = nodes.iter().find(|n| n.len() != width) {
        return Err(Error::Schema(format!("nodes file: expected {width} numbers per node, got {}", bad.len())));
    }
    Ok(nodes)
}

fn load(path: &Path) -> Result<LoadedState> {
    StateFile::read(path)?.load()
}

fn row(alpha: f64, beta: f64, two_m: i32, z: num_complex::Complex64) -> TableRow {
    TableRow { alpha, beta, gamma: 0.0, two_j: 0, two_m, two_n: 0, two_mp: 0, two_np: 0, re: z.re, im: z.im }
}

pub fn wigner(
    cfg: &RunConfig,
    state: &Path,
    nodes: Option<&Path>,
    two_js: Option<&[u32]>,
) -> Result<WignerTable> {
    let loaded = load(state)?;
    let [na, nb, ng] = cfg.grid_sizes();
    let mut table = WignerTable::new(loaded.group());
    for (k, v) in cfg.metadata() {
        if k != "group" {
            table.metadata.insert(k, v);
        }
    }
    match loaded {
        LoadedState::Su2(rho) => {
            let tjs: Vec<u32> = match two_js {
                Some(t) => t.to_vec(),
                None => (0..=rho.two_jmax()).collect(),
            };
            let points: Vec<Su2Element> = match nodes {
                Some(p) => read_nodes(p, 3)?
                    .into_iter()
                    .map(|n| Su2Element::from_euler(EulerAngles::new(n[0], n[1], n[2])))
                    .collect(),
                None => haar_grid(na, nb, ng)?.nodes().to_vec(),
            };
            table.metadata.insert("two_js".into(), serde_json::to_value(&tjs).expect("serializes"));
            let plan = WignerPlan::new(rho.two_jmax(), &tjs, 0)?;
            for g in &points {
                for &tj in &tjs {
                    table.push_block(&plan.full(&rho, g, tj)?);
                }
            }
        }
        LoadedState::So2(st) => {
            let points: Vec<(f64, i64)> = match nodes {
                Some(p) => read_nodes(p, 2)?
                    .into_iter()
                    .map(|n| {
                        if n[1].fract() != 0.0 {
                            return Err(Error::Schema(format!("so2 node m = {} is not an integer", n[1])));
                        }
                        Ok((n[0], n[1] as i64))
                    })
                    .collect::<Result<_>>()?,
                None => {
                    let m = st.m_max();
                    (0..na)
                        .flat_map(|i| {
                            let th = -PI + 2.0 * PI * (i + 1) as f64 / na as f64;
                            (-m..=m).map(move |mm| (th, mm))
                        })
                        .collect()
                }
            };
            for (th, m) in points {
                table.rows.push(row(th, 0.0, 2 * m as i32, angle_wigner_complex(&st, th, m)));
            }
        }
        LoadedState::Cartesian(st) => {
            let l = st.half_width();
            let points: Vec<(f64, f64)> = match nodes {
                Some(p) => read_nodes(p, 2)?.into_iter().map(|n| (n[0], n[1])).collect(),
                None => (0..na)
                    .flat_map(|i| {
                        let q = -l + 2.0 * l * i as f64 / na as f64;
                        (0..nb).map(move |k| (q, -l + 2.0 * l * k as f64 / nb as f64))
                    })
                    .collect(),
            };
            for (q, p) in points {
                table.rows.push(row(q, p, 0, cartesian_wigner_complex(&st, q, p)?));
            }
        }
    }
    Ok(table)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PartialRow {
    pub two_jsum: u32,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OverlapReport {
    pub metadata: serde_json::Map<String, serde_json::Value>,
    pub trace: f64,
    pub partial_sums: Vec<PartialRow>,
    pub converged_two_jsum: Option<u32>,
    pub gap: f64,
    pub passed: bool,
}

pub fn overlap(cfg: &RunConfig, a: &Path, b: &Path) -> Result<OverlapReport> {
    let (LoadedState::Su2(r1), LoadedState::Su2(r2)) = (load(a)?, load(b)?) else {
        return Err(Error::Config("overlap needs two su2 state files".into()));
    };
    let [na, nb, ng] = cfg.grid_sizes();
    let grid = haar_grid(na, nb, ng)?;
    let jm = r1.two_jmax().max(r2.two_jmax());
    let plan = WignerPlan::new(jm, &[], cfg.jsum_twice)?;
    let left = overlap_trace(&plan, &r1, &r2, cfg.jsum_twice, Side::Left, &grid)?;
    let right = overlap_trace(&plan, &r1, &r2, cfg.jsum_twice, Side::Right, &grid)?;
    let trace = r1.trace_product(&r2);
    let gap = (left.value() - trace).abs();
    let mut metadata = cfg.metadata();
    metadata.insert("group".into(), "su2".into());
    Ok(OverlapReport {
        metadata,
        trace,
        partial_sums: (0..=cfg.jsum_twice)
            .map(|t| PartialRow { two_jsum: t, left: left.at(t), right: right.at(t) })
            .collect(),
        converged_two_jsum: left.converged_at(cfg.tol),
        gap,
        passed: gap <= cfg.tol,
    })
}

impl OverlapReport {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self).expect("serializes")),
            Format::Csv => {
                let mut meta = self.metadata.clone();
                meta.insert("trace".into(), self.trace.into());
                meta.insert("gap".into(), self.gap.into());
                meta.insert("converged_two_jsum".into(), serde_json::to_value(self.converged_two_jsum).expect("serializes"));
                meta.insert("passed".into(), self.passed.into());
                csv_with_header(&serde_json::Value::Object(meta), &self.partial_sums)
            }
        }
    }
}

pub fn csv_with_header<T: Serialize>(meta: &serde_json::Value, rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(format!("# {meta}\n{}", String::from_utf8(body).expect("csv is utf-8")))
}
