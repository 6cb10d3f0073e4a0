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

//! The `verify` battery.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use su2_wigner::baselines::*;
use su2_wigner::group::{geodesic_midpoint, group_sqrt, Su2Element};
use su2_wigner::harmonic::{left_translate, right_translate, DensityEnsemble, IrrepBlockState, Side};
use su2_wigner::irreps::dmatrix;
use su2_wigner::quadrature::{haar_grid, QuadratureGrid};
use su2_wigner::wigner::*;
use su2_wigner::{Error, Result};

use crate::config::{Group, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub error: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub failure: Option<String>,
    pub failure_kind: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub metadata: serde_json::Map<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::GridTooCoarse { .. } => "GridTooCoarse",
        Error::AntipodalPair { .. } => "AntipodalPair",
        Error::AntipodalNode { .. } => "AntipodalNode",
        Error::Domain(_) => "Domain",
        Error::InvalidGrid(_) => "InvalidGrid",
        Error::Index { .. } => "Index",
        Error::Schema(_) => "Schema",
        Error::Dimension(_) => "Dimension",
        Error::Config(_) => "Config",
        Error::Io(_) => "Io",
    }
}

fn check(name: &'static str, tol: f64, measured: Result<f64>) -> Check {
    match measured {
        Ok(e) => Check { name, error: Some(e), tol, pass: e <= tol, failure: None, failure_kind: None },
        Err(err) => Check {
            name,
            error: None,
            tol,
            pass: false,
            failure: Some(err.to_string()),
            failure_kind: Some(kind(&err)),
        },
    }
}

struct Ctx {
    jm: u32,
    jsum: u32,
    grid: Result<QuadratureGrid>,
    seed: u64,
}

impl Ctx {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    fn grid(&self) -> Result<&QuadratureGrid> {
        self.grid.as_ref().map_err(Clone::clone)
    }

    fn mixed(&self, r: &mut ChaCha8Rng) -> DensityEnsemble {
        let a = IrrepBlockState::random(self.jm, r);
        let b = IrrepBlockState::random(self.jm, r);
        DensityEnsemble::new(vec![0.75, 0.25], vec![a, b]).expect("valid weights")
    }
}

fn orthogonality(c: &Ctx) -> Result<f64> {
    let grid = c.grid()?;
    grid.require(2 * c.jm)?;
    let mut worst: f64 = 0.0;
    for a in 0..=c.jm {
        for b in 0..=c.jm {
            let (na, nb) = (a as usize + 1, b as usize + 1);
            let mut acc = vec![Complex64::new(0.0, 0.0); na * na * nb * nb];
            for (g, w) in grid.iter() {
                let (da, db) = (dmatrix(a, g), dmatrix(b, g));
                for (i, x) in da.as_slice().iter().enumerate() {
                    for (k, y) in db.as_slice().iter().enumerate() {
                        acc[i * nb * nb + k] += w * x * y.conj();
                    }
                }
            }
            for i in 0..na * na {
                for k in 0..nb * nb {
                    let want = if a == b && i == k { 1.0 / na as f64 } else { 0.0 };
                    worst = worst.max((acc[i * nb * nb + k] - want).norm());
                }
            }
        }
    }
    Ok(worst)
}

fn parseval(c: &Ctx) -> Result<f64> {
    let grid = c.grid()?;
    grid.require(2 * c.jm)?;
    let mut r = c.rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let s = IrrepBlockState::random(c.jm, &mut r);
        worst = worst.max((grid.integrate(|g| s.evaluate(g).norm_sqr()) - s.norm_sqr()).abs());
    }
    Ok(worst)
}

fn momentum(c: &Ctx) -> Result<f64> {
    let grid = c.grid()?;
    let rho = c.mixed(&mut c.rng(2));
    let tjs: Vec<u32> = (0..=c.jm).collect();
    let plan = WignerPlan::new(c.jm, &tjs, 0)?;
    let mut worst: f64 = 0.0;
    for &tj in &tjs {
        let m = marginal_momentum(&plan, &rho, tj, grid)?;
        worst = worst.max((&m - &momentum_matrix(&rho, tj)).max_abs());
    }
    Ok(worst)
}

fn hermiticity(c: &Ctx) -> Result<f64> {
    let mut r = c.rng(3);
    let rho = c.mixed(&mut r);
    let tjs: Vec<u32> = (0..=c.jm + 1).collect();
    let plan = WignerPlan::new(c.jm, &tjs, c.jm + 1)?;
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let g = Su2Element::random(&mut r);
        for &tj in &tjs {
            worst = worst.max(plan.full(&rho, &g, tj)?.hermiticity_defect());
            for side in [Side::Left, Side::Right] {
                worst = worst.max(plan.tilde(&rho, &g, tj, side)?.matrix.hermiticity_defect());
            }
        }
    }
    Ok(worst)
}

fn covariance(c: &Ctx) -> Result<f64> {
    let mut r = c.rng(4);
    let tjs: Vec<u32> = (0..=c.jm).collect();
    let plan = WignerPlan::new(c.jm, &tjs, 0)?;
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let s = IrrepBlockState::random(c.jm, &mut r);
        let (h, x) = (Su2Element::random(&mut r), Su2Element::random(&mut r));
        let rho = DensityEnsemble::pure(s.clone());
        let left = DensityEnsemble::pure(left_translate(&s, &h));
        let right = DensityEnsemble::pure(right_translate(&s, &h));
        for &tj in &tjs {
            let w = plan.full(&rho, &x, tj)?;
            let a = wigner_covariant_transform(&w, Side::Left, &h);
            worst = worst.max(a.max_abs_diff(&plan.full(&left, &(h * x), tj)?));
            let b = wigner_covariant_transform(&w, Side::Right, &h);
            worst = worst.max(b.max_abs_diff(&plan.full(&right, &(x * h.inverse()), tj)?));
        }
    }
    Ok(worst)
}

fn position(c: &Ctx) -> Result<f64> {
    let mut r = c.rng(5);
    let rho = c.mixed(&mut r);
    let plan = WignerPlan::new(c.jm, &[], c.jsum)?;
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let g = Su2Element::random(&mut r);
        let s = marginal_position(&plan, &rho, &g, c.jsum)?;
        worst = worst.max((s.value() - rho.kernel(&g, &g)).norm());
    }
    Ok(worst)
}

/// (gap at J_sum, largest left/right disagreement)
fn overlap(c: &Ctx) -> Result<(f64, f64)> {
    let grid = c.grid()?;
    let mut r = c.rng(6);
    let (rho1, rho2) = (c.mixed(&mut r), c.mixed(&mut r));
    let plan = WignerPlan::new(c.jm, &[], c.jsum)?;
    let a = overlap_trace(&plan, &rho1, &rho2, c.jsum, Side::Left, grid)?;
    let b = overlap_trace(&plan, &rho1, &rho2, c.jsum, Side::Right, grid)?;
    let agree = (0..=c.jsum).map(|t| (a.at(t) - b.at(t)).abs()).fold(0.0, f64::max);
    Ok(((a.value() - rho1.trace_product(&rho2)).abs(), agree))
}

fn reconstruction(c: &Ctx) -> Result<(f64, f64)> {
    let mut r = c.rng(7);
    let rho = c.mixed(&mut r);
    let plan = WignerPlan::new(c.jm, &[], c.jsum)?;
    let (mut err, mut agree): (f64, f64) = (0.0, 0.0);
    for _ in 0..3 {
        let (g1, g2) = (Su2Element::random(&mut r), Su2Element::random(&mut r));
        let a = reconstruct_kernel(&plan, &rho, &g1, &g2, c.jsum, Side::Left)?;
        let b = reconstruct_kernel(&plan, &rho, &g1, &g2, c.jsum, Side::Right)?;
        err = err.max((a.value() - rho.kernel(&g1, &g2)).norm());
        agree = agree.max((0..=c.jsum).map(|t| (a.at(t) - b.at(t)).norm()).fold(0.0, f64::max));
    }
    Ok((err, agree))
}

fn midpoint(c: &Ctx) -> Result<f64> {
    let mut r = c.rng(8);
    let dist = |a: &Su2Element, b: &Su2Element| {
        let (x, y) = (a.components(), b.components());
        (0..4).map(|i| (x[i] - y[i]).abs()).fold(0.0, f64::max)
    };
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (a, b) = (Su2Element::random(&mut r), Su2Element::random(&mut r));
        let (g, h) = (Su2Element::random(&mut r), Su2Element::random(&mut r));
        let s = geodesic_midpoint(&a, &b)?;
        worst = worst.max(dist(&s, &geodesic_midpoint(&b, &a)?));
        let moved = geodesic_midpoint(&(g * a * h.inverse()), &(g * b * h.inverse()))?;
        worst = worst.max(dist(&moved, &(g * s * h.inverse())));
        let s0 = group_sqrt(&a)?;
        worst = worst.max(dist(&(s0 * s0), &a));
    }
    Ok(worst)
}

/// Richardson-extrapolated mollified blocks against the production path, on
/// a fixed 10x6x20 outer grid.
fn oracle(c: &Ctx) -> Result<f64> {
    let outer = &haar_grid(10, 6, 20)?;
    let mut r = c.rng(9);
    let rho = DensityEnsemble::pure(IrrepBlockState::random(c.jm, &mut r));
    let g = Su2Element::random(&mut r);
    let tjs: Vec<u32> = (0..=c.jm).collect();
    let plan = WignerPlan::new(c.jm, &tjs, 0)?;
    let coarse = wigner_bruteforce_mollified(&rho, &g, &tjs, 0.05, outer, 16)?;
    let fine = wigner_bruteforce_mollified(&rho, &g, &tjs, 0.025, outer, 16)?;
    let mut worst: f64 = 0.0;
    for (i, &tj) in tjs.iter().enumerate() {
        let exact = plan.full(&rho, &g, tj)?;
        let rich = &fine[i].matrix().scale(Complex64::new(4.0 / 3.0, 0.0))
            - &coarse[i].matrix().scale(Complex64::new(1.0 / 3.0, 0.0));
        worst = worst.max((&rich - exact.matrix()).max_abs() / exact.max_abs());
    }
    Ok(worst)
}

fn cartesian_closed_form() -> Result<f64> {
    let st = CartesianState::oscillator(1, 8.0, 1024)?;
    let mut worst: f64 = 0.0;
    for i in 0..=12 {
        for k in 0..=12 {
            let (q, p) = (-3.0 + 0.5 * i as f64 + 0.01, -3.0 + 0.5 * k as f64);
            let want = 2.0 / PI * (q * q + p * p - 0.5) * (-q * q - p * p).exp();
            worst = worst.max((cartesian_wigner(&st, q, p)? - want).abs());
        }
    }
    Ok(worst)
}

fn cartesian_hudson() -> Result<f64> {
    let st = CartesianState::gaussian(0.4, -0.7, 0.9, 8.0, 256)?;
    let mut min: f64 = 0.0;
    for i in (0..st.len()).step_by(4) {
        for k in -30..=30 {
            min = min.min(cartesian_wigner(&st, st.q(i), 0.1 * k as f64)?);
        }
    }
    Ok(-min)
}

fn cartesian_marginals() -> Result<f64> {
    let st = CartesianState::oscillator(2, 8.0, 256)?;
    let (n, dp) = (st.len(), st.dp());
    let mut worst: f64 = 0.0;
    for i in (64..192).step_by(16) {
        let mut s = 0.0;
        for k in 0..n {
            s += cartesian_wigner(&st, st.q(i), -PI / (2.0 * st.dq()) + k as f64 * dp)? * dp;
        }
        worst = worst.max((s - st.samples()[i].norm_sqr()).abs());
    }
    for p in [-1.5, 0.0, 0.4, 2.2] {
        let mut s = 0.0;
        for i in 0..n {
            s += cartesian_wigner(&st, st.q(i), p)? * st.dq();
        }
        worst = worst.max((s - st.momentum_amplitude(p).norm_sqr()).abs());
    }
    Ok(worst)
}

fn so2_eigenstate() -> Result<f64> {
    let st = AngleState::eigenstate(4, 1)?;
    let mut worst: f64 = 0.0;
    for i in 0..24 {
        let th = -PI + 0.26 * i as f64;
        for m in -6..=6 {
            let want = if m == 1 { 0.5 / PI } else { 0.0 };
            worst = worst.max((angle_wigner(&st, th, m) - want).abs());
        }
    }
    Ok(worst)
}

fn so2_duality(c: &Ctx) -> Result<f64> {
    let s = AngleState::random(3, None, &mut c.rng(10));
    let mut worst: f64 = 0.0;
    for (n, tau) in [(1, 0.7), (-2, -1.9), (0, 2.4)] {
        worst = worst.max((weyl_expectation(&s, n, tau) - weyl_phase_space(&s, n, tau, 4000)?).norm());
    }
    Ok(worst)
}

fn so2_general(c: &Ctx) -> Result<f64> {
    let s = AngleState::random(3, None, &mut c.rng(11));
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        let th = -3.0 + 0.75 * i as f64;
        for m in -4..=4 {
            worst = worst.max((so2_general_wigner(&s, th, m)? - 2.0 * PI * angle_wigner(&s, th, m)).abs());
        }
    }
    Ok(worst)
}

pub fn run(cfg: &RunConfig) -> Report {
    let [a, b, g] = cfg.grid_sizes();
    let c = Ctx { jm: cfg.jmax_twice, jsum: cfg.jsum_twice, grid: haar_grid(a, b, g), seed: cfg.seed };
    let id = cfg.identity_tol;
    let mut checks = Vec::new();
    if cfg.group == Group::Su2 {
        checks.push(check("d_orthogonality", id, orthogonality(&c)));
        checks.push(check("parseval", id, parseval(&c)));
        checks.push(check("midpoint_axioms", id, midpoint(&c)));
        checks.push(check("momentum_marginal", id, momentum(&c)));
        checks.push(check("hermiticity", id, hermiticity(&c)));
        checks.push(check("covariance", id, covariance(&c)));
        checks.push(check("position_marginal", cfg.tol, position(&c)));
        let ov = overlap(&c);
        checks.push(check("overlap_gap", cfg.tol, ov.clone().map(|x| x.0)));
        checks.push(check("overlap_variants", id, ov.map(|x| x.1)));
        let rc = reconstruction(&c);
        checks.push(check("reconstruction", cfg.tol, rc.clone().map(|x| x.0)));
        checks.push(check("reconstruction_variants", id, rc.map(|x| x.1)));
        if cfg.oracle {
            checks.push(check("mollified_oracle", 1e-2, oracle(&c)));
        }
    }
    if cfg.group != Group::Cartesian {
        checks.push(check("so2_eigenstate", 1e-14, so2_eigenstate()));
        checks.push(check("so2_weyl_duality", 1e-6, so2_duality(&c)));
        checks.push(check("so2_general_route", 1e-10, so2_general(&c)));
    }
    if cfg.group != Group::So2 {
        checks.push(check("cartesian_closed_form", 1e-6, cartesian_closed_form()));
        checks.push(check("cartesian_hudson", 1e-12, cartesian_hudson()));
        checks.push(check("cartesian_marginals", 1e-6, cartesian_marginals()));
    }
    let passed = checks.iter().all(|c| c.pass);
    Report { metadata: cfg.metadata(), checks, passed }
}
