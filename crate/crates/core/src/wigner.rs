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

//! Wigner distributions on SU(2).
//!
//! `W(g; JMN M'N')` is defined through a delta function pinning the geodesic
//! midpoint of `(g', g'')` to `g`. Substituting `g' = g k^{-1}`, `g'' = g k`
//! with `k` in the hemisphere `a0 > 0` removes the delta exactly:
//!
//! ```text
//! W(g; JMN M'N') = N_J int_{a0(k) > 0} dk j(k) <gk|rho|gk^{-1}> D^J_{MN}(gk^{-1}) conj(D^J_{M'N'}(gk))
//! ```
//!
//! with `j(k) = 8 a0(k)^2`. Everything here evaluates that integral, either
//! node by node on a hemisphere grid (`wigner_full`) or through precomputed
//! moments (`WignerPlan`).
//!
//! Two facts drive `WignerPlan`. Write `f_g(k) = <gk|rho|gk^{-1}>`. Then
//! `f_g(k) = sum_K sum_{XY} F^K_{XY}(g) D^K_{XY}(k)` with `2K <= 4 j_max`, where the
//! pair coefficients `F` follow from the state by Clebsch-Gordan coupling.
//! Both traced forms reduce to one matrix,
//! `X_J(g)_{PQ} = int dk j(k) f_g(k) D^J_{PQ}(k^{-2})`:
//! the left-traced block is `W~ = N_J D^J(g) X D^J(g)^dagger` and the
//! right-traced one is `W~~ = N_J X^T`. The moments
//! `int dh D^K_{XY}(s0(h)) D^J_{PQ}(h^{-1})` have a closed form from the Weyl
//! integration formula, so `X_J` costs `O(N_K^2 N_J)` for any `J`.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::group::{geodesic_midpoint, Su2Element};
use crate::harmonic::{DensityEnsemble, Side};
use crate::irreps::{cg, dmatrix, index_of, two_m_of};
use crate::linalg::CMatrix;
use crate::quadrature::{hemisphere_grid, GridKind, QuadratureGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hemisphere nodes closer than this to `a0 = 0` are rejected.
pub const HEMISPHERE_EPS: f64 = 1e-9;

/// `W(g; JMN M'N')` for one `g` and `J`, stored as an `N_J^2 x N_J^2`
/// matrix with row `(M, N)` and column `(M', N')`; it is Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerBlock {
    pub g: Su2Element,
    pub two_j: u32,
    matrix: CMatrix,
}

impl WignerBlock {
    pub fn new(g: Su2Element, two_j: u32, matrix: CMatrix) -> Result<Self> {
        let n = two_j as usize + 1;
        if matrix.dim() != n * n {
            return Err(Error::Dimension(format!(
                "Wigner block for 2J = {two_j} needs dimension {}",
                n * n
            )));
        }
        Ok(Self { g, two_j, matrix })
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Entry by row indices (0-based, `m = j` first).
    pub fn get(&self, m: usize, n: usize, mp: usize, np: usize) -> Complex64 {
        let d = self.dim();
        self.matrix[(m * d + n, mp * d + np)]
    }

    /// Entry by doubled magnetic numbers.
    pub fn entry(&self, two_m: i32, two_n: i32, two_mp: i32, two_np: i32) -> Complex64 {
        let t = self.two_j;
        self.get(
            index_of(t, two_m),
            index_of(t, two_n),
            index_of(t, two_mp),
            index_of(t, two_np),
        )
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.hermiticity_defect()
    }

    /// `W~(g; J M M') = sum_N W(g; JMN M'N)`.
    pub fn trace_n(&self) -> WignerTildeBlock {
        let d = self.dim();
        let m = CMatrix::from_fn(d, |a, b| (0..d).map(|n| self.get(a, n, b, n)).sum());
        WignerTildeBlock {
            g: self.g,
            two_j: self.two_j,
            variant: Side::Left,
            matrix: m,
        }
    }

    /// `W~~(g; J N N') = sum_M W(g; JMN MN')`.
    pub fn trace_m(&self) -> WignerTildeBlock {
        let d = self.dim();
        let m = CMatrix::from_fn(d, |a, b| (0..d).map(|k| self.get(k, a, k, b)).sum());
        WignerTildeBlock {
            g: self.g,
            two_j: self.two_j,
            variant: Side::Right,
            matrix: m,
        }
    }

    /// `sum_{MN} W(g; JMN MN)`.
    pub fn diagonal_sum(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.max_abs()
    }
}

/// A traced block: `W~(g; J M M')` (`Side::Left`) or `W~~(g; J N N')` (`Side::Right`).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerTildeBlock {
    pub g: Su2Element,
    pub two_j: u32,
    pub variant: Side,
    pub matrix: CMatrix,
}

/// `A (x) B` for square matrices.
fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim(), b.dim());
    CMatrix::from_fn(na * nb, |r, c| a[(r / nb, c / nb)] * b[(r % nb, c % nb)])
}

fn check_hemisphere(kgrid: &QuadratureGrid) -> Result<()> {
    if !matches!(kgrid.kind(), GridKind::Hemisphere { .. }) {
        return Err(Error::InvalidGrid(
            "the k-integral needs a hemisphere grid".into(),
        ));
    }
    for k in kgrid.nodes() {
        if k.a0() < HEMISPHERE_EPS {
            return Err(Error::AntipodalNode { a0: k.a0() });
        }
    }
    Ok(())
}

/// Node-by-node evaluation of `W(g; J)` on a hemisphere grid whose weights
/// include the squaring Jacobian.
pub fn wigner_full(
    rho: &DensityEnsemble,
    g: &Su2Element,
    two_j: u32,
    kgrid: &QuadratureGrid,
) -> Result<WignerBlock> {
    check_hemisphere(kgrid)?;
    kgrid.require(2 * (rho.two_jmax() + two_j))?;
    let n = two_j as usize + 1;
    let nn = n * n;
    let mut acc = vec![ZERO; nn * nn];
    for (k, w) in kgrid.iter() {
        let gk = *g * *k;
        let gki = *g * k.inverse();
        let f = rho.kernel(&gk, &gki);
        let a = dmatrix(two_j, &gki);
        let b = dmatrix(two_j, &gk);
        let a = a.as_slice();
        let b = b.as_slice();
        for r in 0..nn {
            let fa = w * f * a[r];
            for c in 0..nn {
                acc[r * nn + c] += fa * b[c].conj();
            }
        }
    }
    let nj = n as f64;
    WignerBlock::new(
        *g,
        two_j,
        CMatrix::from_vec(nn, acc.into_iter().map(|z| z * nj).collect()),
    )
}

/// `W~` or `W~~` by direct hemisphere quadrature of the kernel
/// `D^J(g' g''^{-1})` (left) or `D^J(g''^{-1} g')` transposed (right).
pub fn wigner_tilde_direct(
    rho: &DensityEnsemble,
    g: &Su2Element,
    two_j: u32,
    variant: Side,
    kgrid: &QuadratureGrid,
) -> Result<WignerTildeBlock> {
    check_hemisphere(kgrid)?;
    kgrid.require(2 * (rho.two_jmax() + two_j))?;
    let n = two_j as usize + 1;
    let mut acc = CMatrix::zeros(n);
    for (k, w) in kgrid.iter() {
        let gp = *g * k.inverse();
        let gpp = *g * *k;
        let f = rho.kernel(&gpp, &gp);
        let d = match variant {
            // sum_N D_{MN}(g') conj(D_{M'N}(g'')) = D_{MM'}(g' g''^{-1})
            Side::Left => dmatrix(two_j, &(gp * gpp.inverse())),
            // sum_M D_{MN}(g') conj(D_{MN'}(g'')) = D_{N'N}(g''^{-1} g')
            Side::Right => dmatrix(two_j, &(gpp.inverse() * gp)).transpose(),
        };
        acc += &d.scale(Complex64::new(w, 0.0) * f);
    }
    Ok(WignerTildeBlock {
        g: *g,
        two_j,
        variant,
        matrix: acc.scale(Complex64::new(n as f64, 0.0)),
    })
}

/// Clebsch-Gordan values `<l1 m1 l2 m2 | K, m1+m2>` laid out as `[i1 * n2 + i2]`.
#[derive(Debug, Clone)]
struct CgTable {
    two_k: u32,
    values: Vec<f64>,
}

fn cg_tables(two_l1: u32, two_l2: u32) -> Vec<CgTable> {
    let lo = (two_l1 as i32 - two_l2 as i32).unsigned_abs();
    let (n1, n2) = (two_l1 as usize + 1, two_l2 as usize + 1);
    (lo..=two_l1 + two_l2)
        .step_by(2)
        .map(|tk| {
            let mut values = vec![0.0; n1 * n2];
            for i1 in 0..n1 {
                for i2 in 0..n2 {
                    let (m1, m2) = (two_m_of(two_l1, i1), two_m_of(two_l2, i2));
                    values[i1 * n2 + i2] = cg(two_l1, m1, two_l2, m2, tk, m1 + m2);
                }
            }
            CgTable { two_k: tk, values }
        })
        .collect()
}

/// `I(nu) = (2/pi) int_0^pi sin^2(psi) e^{i nu psi} dpsi`, `nu = two_nu / 2`.
fn weyl_radial(two_nu: i32) -> Complex64 {
    let e = |two_mu: i32| -> Complex64 {
        if two_mu == 0 {
            Complex64::new(PI, 0.0)
        } else {
            let mu = two_mu as f64 / 2.0;
            (Complex64::from_polar(1.0, mu * PI) - 1.0) / Complex64::new(0.0, mu)
        }
    };
    (0.5 * e(two_nu) - 0.25 * e(two_nu + 4) - 0.25 * e(two_nu - 4)) * (2.0 / PI)
}

/// `Q^{K,J}_{XY,PQ} = int dh D^K_{XY}(s0(h)) D^J_{PQ}(h^{-1})`, which vanishes
/// unless `X + P = Y + Q`. Returned densely as `[(x * nK + y) * nJ + p]`, the
/// `Q` index being implied.
pub fn traced_moment(two_k: u32, two_j: u32) -> Vec<Complex64> {
    let (nk, nj) = (two_k as usize + 1, two_j as usize + 1);
    let lo = (two_k as i32 - two_j as i32).unsigned_abs();
    let mut out = vec![ZERO; nk * nk * nj];
    for tl in (lo..=two_k + two_j).step_by(2) {
        // lambda(K, J, L) = sum_{x,p} C(K x J p | L, x+p)^2 I(2p - x)
        let mut lambda = ZERO;
        for ix in 0..nk {
            let tx = two_m_of(two_k, ix);
            for ip in 0..nj {
                let tp = two_m_of(two_j, ip);
                let c = cg(two_k, tx, two_j, tp, tl, tx + tp);
                if c != 0.0 {
                    lambda += c * c * weyl_radial(2 * tp - tx);
                }
            }
        }
        let lam = lambda / (tl as f64 + 1.0);
        for ix in 0..nk {
            let tx = two_m_of(two_k, ix);
            for iy in 0..nk {
                let ty = two_m_of(two_k, iy);
                for ip in 0..nj {
                    let tp = two_m_of(two_j, ip);
                    let tq = tx + tp - ty;
                    if tq.abs() > two_j as i32 {
                        continue;
                    }
                    let c1 = cg(two_k, tx, two_j, tp, tl, tx + tp);
                    let c2 = cg(two_k, ty, two_j, tq, tl, ty + tq);
                    out[(ix * nk + iy) * nj + ip] += lam * c1 * c2;
                }
            }
        }
    }
    out
}

/// Moment tables for one band limit. Built once, then applied to any
/// ensemble with `two_jmax` at most the plan's.
#[derive(Debug, Clone)]
pub struct WignerPlan {
    two_jmax: u32,
    /// `[2 L1][2 L2]` coupling tables.
    tables: Vec<Vec<Vec<CgTable>>>,
    /// `2J -> [2K] -> int dk j D^K_{XY}(k) conj(D^J_{NP}(k)) conj(D^J_{P'N'}(k))`,
    /// laid out `[(x nK + y) nJ^4 + ((p nJ + n) nJ + p') nJ + n']`.
    full: BTreeMap<u32, Vec<Vec<Complex64>>>,
    /// `2J -> [2K] -> traced_moment(K, J)`.
    traced: Vec<Vec<Vec<Complex64>>>,
}

impl WignerPlan {
    /// `full_two_js` lists the `J` for which full blocks will be requested;
    /// traced blocks are available for every `2J <= two_jsum`.
    pub fn new(two_jmax: u32, full_two_js: &[u32], two_jsum: u32) -> Result<Self> {
        let tables = (0..=two_jmax)
            .map(|l1| (0..=two_jmax).map(|l2| cg_tables(l1, l2)).collect())
            .collect();
        let two_kmax = 2 * two_jmax;
        let mut full = BTreeMap::new();
        for &tj in full_two_js {
            if full.contains_key(&tj) {
                continue;
            }
            let kgrid = hemisphere_grid(two_jmax + tj)?;
            full.insert(tj, full_moments(two_kmax, tj, &kgrid));
        }
        let traced = (0..=two_jsum)
            .map(|tj| (0..=two_kmax).map(|tk| traced_moment(tk, tj)).collect())
            .collect();
        Ok(Self {
            two_jmax,
            tables,
            full,
            traced,
        })
    }

    pub fn two_jmax(&self) -> u32 {
        self.two_jmax
    }

    /// Largest `2J` with traced moments.
    pub fn two_jsum(&self) -> u32 {
        self.traced.len() as u32 - 1
    }

    fn check(&self, rho: &DensityEnsemble) -> Result<()> {
        if rho.two_jmax() > self.two_jmax {
            return Err(Error::Config(format!(
                "plan built for 2j_max = {}, state has {}",
                self.two_jmax,
                rho.two_jmax()
            )));
        }
        Ok(())
    }

    /// `F^K_{XY}(g)`, indexed by `2K`, such that `<gk|rho|gk^{-1}> = sum F^K_{XY} D^K_{XY}(k)`.
    pub fn pair_coefficients(&self, rho: &DensityEnsemble, g: &Su2Element) -> Result<Vec<CMatrix>> {
        self.check(rho)?;
        let jm = self.two_jmax;
        let mut out: Vec<CMatrix> = (0..=2 * jm)
            .map(|tk| CMatrix::zeros(tk as usize + 1))
            .collect();
        let dg: Vec<CMatrix> = (0..=jm).map(|l| dmatrix(l, g).transpose()).collect();
        for (w, s) in rho.components() {
            // phi^L = D^L(g)^T psi^L, so psi(gk) = sum sqrt(N_L) phi_{CB} D^L_{CB}(k)
            let phi: Vec<CMatrix> = s
                .with_band(jm)
                .blocks()
                .iter()
                .enumerate()
                .map(|(l, b)| dg[l].matmul(b))
                .collect();
            for l1 in 0..=jm as usize {
                let n1 = l1 + 1;
                for l2 in 0..=jm as usize {
                    let n2 = l2 + 1;
                    let scale = w * ((n1 * n2) as f64).sqrt();
                    for t in &self.tables[l1][l2] {
                        let tk = t.two_k;
                        let f = &mut out[tk as usize];
                        for c1 in 0..n1 {
                            for b1 in 0..n1 {
                                let p1 = phi[l1][(c1, b1)] * scale;
                                if p1 == ZERO {
                                    continue;
                                }
                                for c2 in 0..n2 {
                                    let cy = t.values[b1 * n2 + c2];
                                    if cy == 0.0 {
                                        continue;
                                    }
                                    let y = index_of(
                                        tk,
                                        two_m_of(l1 as u32, b1) + two_m_of(l2 as u32, c2),
                                    );
                                    for b2 in 0..n2 {
                                        let cx = t.values[c1 * n2 + b2];
                                        if cx == 0.0 {
                                            continue;
                                        }
                                        // conj(psi(gk^{-1})) = sum sqrt(N) conj(phi_{C2 B2}) D_{B2 C2}(k)
                                        let x = index_of(
                                            tk,
                                            two_m_of(l1 as u32, c1) + two_m_of(l2 as u32, b2),
                                        );
                                        f[(x, y)] += p1 * phi[l2][(c2, b2)].conj() * (cx * cy);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `W(g; J)` from the precomputed moments.
    pub fn full(&self, rho: &DensityEnsemble, g: &Su2Element, two_j: u32) -> Result<WignerBlock> {
        let f = self.pair_coefficients(rho, g)?;
        self.full_from_pairs(&f, g, two_j)
    }

    pub fn full_from_pairs(
        &self,
        f: &[CMatrix],
        g: &Su2Element,
        two_j: u32,
    ) -> Result<WignerBlock> {
        let moments = self
            .full
            .get(&two_j)
            .ok_or_else(|| Error::Config(format!("plan has no full moments for 2J = {two_j}")))?;
        let n = two_j as usize + 1;
        let n4 = n * n * n * n;
        let mut y = vec![ZERO; n4];
        for (tk, fk) in f.iter().enumerate() {
            let m = &moments[tk];
            for (xy, c) in fk.as_slice().iter().enumerate() {
                if *c == ZERO {
                    continue;
                }
                let row = &m[xy * n4..(xy + 1) * n4];
                for (acc, v) in y.iter_mut().zip(row) {
                    *acc += c * v;
                }
            }
        }
        // y is laid out [(p n + n_) n^2 + (p' n + n')], the (P N),(P' N') matrix.
        let ymat = CMatrix::from_vec(n * n, y);
        let lift = kron(&dmatrix(two_j, g), &CMatrix::identity(n));
        let w = lift
            .matmul(&ymat)
            .matmul(&lift.adjoint())
            .scale(Complex64::new(n as f64, 0.0));
        WignerBlock::new(*g, two_j, w)
    }

    /// `X_J(g)` from pair coefficients.
    pub fn x_matrix(&self, f: &[CMatrix], two_j: u32) -> Result<CMatrix> {
        let per_k = self.traced.get(two_j as usize).ok_or_else(|| {
            Error::Config(format!(
                "plan has traced moments up to 2J = {}",
                self.two_jsum()
            ))
        })?;
        let n = two_j as usize + 1;
        let mut x = CMatrix::zeros(n);
        for (tk, fk) in f.iter().enumerate() {
            let nk = tk + 1;
            let q = &per_k[tk];
            for ix in 0..nk {
                let tx = two_m_of(tk as u32, ix);
                for iy in 0..nk {
                    let c = fk[(ix, iy)];
                    if c == ZERO {
                        continue;
                    }
                    let ty = two_m_of(tk as u32, iy);
                    for ip in 0..n {
                        let tq = tx + two_m_of(two_j, ip) - ty;
                        if tq.abs() > two_j as i32 {
                            continue;
                        }
                        x[(ip, index_of(two_j, tq))] += c * q[(ix * nk + iy) * n + ip];
                    }
                }
            }
        }
        Ok(x)
    }

    /// `W~` (left) or `W~~` (right) at `g`.
    pub fn tilde(
        &self,
        rho: &DensityEnsemble,
        g: &Su2Element,
        two_j: u32,
        variant: Side,
    ) -> Result<WignerTildeBlock> {
        let f = self.pair_coefficients(rho, g)?;
        self.tilde_from_pairs(&f, g, two_j, variant)
    }

    pub fn tilde_from_pairs(
        &self,
        f: &[CMatrix],
        g: &Su2Element,
        two_j: u32,
        variant: Side,
    ) -> Result<WignerTildeBlock> {
        let x = self.x_matrix(f, two_j)?;
        let nj = Complex64::new(two_j as f64 + 1.0, 0.0);
        let matrix = match variant {
            Side::Left => {
                let d = dmatrix(two_j, g);
                d.matmul(&x).matmul(&d.adjoint()).scale(nj)
            }
            Side::Right => x.transpose().scale(nj),
        };
        Ok(WignerTildeBlock {
            g: *g,
            two_j,
            variant,
            matrix,
        })
    }
}

fn full_moments(two_kmax: u32, two_j: u32, kgrid: &QuadratureGrid) -> Vec<Vec<Complex64>> {
    let n = two_j as usize + 1;
    let n4 = n * n * n * n;
    let mut out: Vec<Vec<Complex64>> = (0..=two_kmax)
        .map(|tk| vec![ZERO; (tk as usize + 1).pow(2) * n4])
        .collect();
    let mut pair = vec![ZERO; n4];
    for (k, w) in kgrid.iter() {
        let dj = dmatrix(two_j, k);
        for p in 0..n {
            for nn in 0..n {
                let a = dj[(nn, p)].conj() * w;
                for pp in 0..n {
                    for np in 0..n {
                        pair[((p * n + nn) * n + pp) * n + np] = a * dj[(pp, np)].conj();
                    }
                }
            }
        }
        for tk in 0..=two_kmax {
            let dk = dmatrix(tk, k);
            let m = &mut out[tk as usize];
            for (xy, d) in dk.as_slice().iter().enumerate() {
                let row = &mut m[xy * n4..(xy + 1) * n4];
                for (acc, v) in row.iter_mut().zip(&pair) {
                    *acc += d * v;
                }
            }
        }
    }
    out
}

/// Applies the covariance laws to a block.
///
/// * `Side::Left`: given `W[rho]` at `x`, returns `W[V(h) rho V(h)^dagger]` at `h x`,
///   i.e. `D^J(h)` acting on `(M, M')`.
/// * `Side::Right`: given `W[rho]` at `x`, returns `W[V~(h) rho V~(h)^dagger]` at `x h^{-1}`,
///   i.e. `D^J(h^{-1})` acting on `(N, N')` from the right.
pub fn wigner_covariant_transform(block: &WignerBlock, side: Side, h: &Su2Element) -> WignerBlock {
    let n = block.dim();
    let id = CMatrix::identity(n);
    let (lift, g) = match side {
        Side::Left => (kron(&dmatrix(block.two_j, h), &id), *h * block.g),
        Side::Right => (
            kron(&id, &dmatrix(block.two_j, &h.inverse()).transpose()),
            block.g * h.inverse(),
        ),
    };
    let m = lift.matmul(&block.matrix).matmul(&lift.adjoint());
    WignerBlock {
        g,
        two_j: block.two_j,
        matrix: m,
    }
}

/// `int dg W(g; JMN M'N')` over a Haar grid, as an `N_J^2 x N_J^2` matrix with
/// row `(M, N)` and column `(M', N')`; equals `<JM'N'|rho|JMN>`.
pub fn marginal_momentum(
    plan: &WignerPlan,
    rho: &DensityEnsemble,
    two_j: u32,
    ggrid: &QuadratureGrid,
) -> Result<CMatrix> {
    ggrid.require(2 * (rho.two_jmax() + two_j))?;
    let n = two_j as usize + 1;
    let mut acc = CMatrix::zeros(n * n);
    for (g, w) in ggrid.iter() {
        let b = plan.full(rho, g, two_j)?;
        acc += &b.matrix.scale(Complex64::new(w, 0.0));
    }
    Ok(acc)
}

/// The same matrix built from coefficients: entry `((M,N),(M',N'))` is
/// `sum_i w_i conj(psi_{i,JMN}) psi_{i,JM'N'}`.
pub fn momentum_matrix(rho: &DensityEnsemble, two_j: u32) -> CMatrix {
    let n = two_j as usize + 1;
    CMatrix::from_fn(n * n, |r, c| {
        let (tm, tn) = (two_m_of(two_j, r / n), two_m_of(two_j, r % n));
        let (tmp, tnp) = (two_m_of(two_j, c / n), two_m_of(two_j, c % n));
        rho.matrix_element(two_j, (tmp, tnp), (tm, tn))
    })
}

/// Partial sums of a `J` series, one entry per `2J = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSums<T> {
    pub partial: Vec<T>,
}

impl<T: Copy> PartialSums<T> {
    pub fn value(&self) -> T {
        *self.partial.last().expect("nonempty series")
    }

    pub fn two_jsum(&self) -> u32 {
        self.partial.len() as u32 - 1
    }

    /// Partial sum through `2J = two_j`.
    pub fn at(&self, two_j: u32) -> T {
        self.partial[two_j as usize]
    }
}

/// First index `2J >= 2` at which the tail estimate `2J |t_2J|` of the
/// increments `t` drops below `tol / 2`. Series here decay polynomially, about
/// as `J^{-3}`, and the estimate overshoots such tails.
fn first_converged(incs: &[f64], tol: f64) -> Option<u32> {
    (2..incs.len())
        .find(|&i| i as f64 * incs[i] < 0.5 * tol)
        .map(|i| i as u32)
}

impl PartialSums<f64> {
    pub fn converged_at(&self, tol: f64) -> Option<u32> {
        let incs: Vec<f64> = (0..self.partial.len())
            .map(|i| {
                if i == 0 {
                    self.partial[0].abs()
                } else {
                    (self.partial[i] - self.partial[i - 1]).abs()
                }
            })
            .collect();
        first_converged(&incs, tol)
    }

    pub fn last_increment(&self) -> f64 {
        let n = self.partial.len();
        if n < 2 {
            self.partial[0]
        } else {
            self.partial[n - 1] - self.partial[n - 2]
        }
    }
}

impl PartialSums<Complex64> {
    pub fn converged_at(&self, tol: f64) -> Option<u32> {
        let incs: Vec<f64> = (0..self.partial.len())
            .map(|i| {
                if i == 0 {
                    self.partial[0].norm()
                } else {
                    (self.partial[i] - self.partial[i - 1]).norm()
                }
            })
            .collect();
        first_converged(&incs, tol)
    }

    pub fn last_increment(&self) -> Complex64 {
        let n = self.partial.len();
        if n < 2 {
            self.partial[0]
        } else {
            self.partial[n - 1] - self.partial[n - 2]
        }
    }
}

/// `sum_{2J <= two_jsum} sum_{MN} W(g; JMN MN)`, which tends to `<g|rho|g>`.
/// Each term is `N_J Tr X_J(g)`; the imaginary part is exposed so callers
/// can check reality.
pub fn marginal_position(
    plan: &WignerPlan,
    rho: &DensityEnsemble,
    g: &Su2Element,
    two_jsum: u32,
) -> Result<PartialSums<Complex64>> {
    let f = plan.pair_coefficients(rho, g)?;
    let mut partial = Vec::with_capacity(two_jsum as usize + 1);
    let mut s = ZERO;
    for tj in 0..=two_jsum {
        let x = plan.x_matrix(&f, tj)?;
        s += x.trace() * (tj as f64 + 1.0);
        partial.push(s);
    }
    Ok(PartialSums { partial })
}

/// `sum_{2J <= two_jsum} N_J^{-1} int dg Tr(W~_1 W~_2)` (left) or the same with
/// `W~~` (right); tends to `Tr(rho_1 rho_2)`.
///
/// After the `D^J(g)` conjugation cancels, the `g` integrand is a product of
/// two pair-coefficient expansions of band `2 j_max` each, so the grid only
/// needs exactness `4 j_max`, independent of `J`.
pub fn overlap_trace(
    plan: &WignerPlan,
    rho1: &DensityEnsemble,
    rho2: &DensityEnsemble,
    two_jsum: u32,
    variant: Side,
    ggrid: &QuadratureGrid,
) -> Result<PartialSums<f64>> {
    let jm = rho1.two_jmax().max(rho2.two_jmax());
    ggrid.require(4 * jm)?;
    let mut terms = vec![0.0; two_jsum as usize + 1];
    for (g, w) in ggrid.iter() {
        let f1 = plan.pair_coefficients(rho1, g)?;
        let f2 = plan.pair_coefficients(rho2, g)?;
        for tj in 0..=two_jsum {
            let a = plan.tilde_from_pairs(&f1, g, tj, variant)?;
            let b = plan.tilde_from_pairs(&f2, g, tj, variant)?;
            terms[tj as usize] += w * a.matrix.trace_product(&b.matrix).re / (tj as f64 + 1.0);
        }
    }
    let mut s = 0.0;
    let partial = terms
        .into_iter()
        .map(|t| {
            s += t;
            s
        })
        .collect();
    Ok(PartialSums { partial })
}

/// Partial sums of the reconstruction of `<g1|rho|g2>` from the traced
/// blocks at `s(g1, g2)`.
///
/// * left: `sum_J sum_{MM'} W~(s; J M M') D^J_{M'M}(g1 g2^{-1})`
/// * right: `sum_J sum_{NN'} W~~(s; J N N') D^J_{N N'}(g2^{-1} g1)`
pub fn reconstruct_kernel(
    plan: &WignerPlan,
    rho: &DensityEnsemble,
    g1: &Su2Element,
    g2: &Su2Element,
    two_jsum: u32,
    variant: Side,
) -> Result<PartialSums<Complex64>> {
    let s = geodesic_midpoint(g1, g2)?;
    let f = plan.pair_coefficients(rho, &s)?;
    let mut partial = Vec::with_capacity(two_jsum as usize + 1);
    let mut acc = ZERO;
    for tj in 0..=two_jsum {
        let wt = plan.tilde_from_pairs(&f, &s, tj, variant)?;
        let term = match variant {
            Side::Left => wt.matrix.trace_product(&dmatrix(tj, &(*g1 * g2.inverse()))),
            Side::Right => {
                let k = dmatrix(tj, &(g2.inverse() * *g1));
                wt.matrix
                    .as_slice()
                    .iter()
                    .zip(k.as_slice())
                    .map(|(a, b)| a * b)
                    .sum()
            }
        };
        acc += term;
        partial.push(acc);
    }
    Ok(PartialSums { partial })
}

/// Normalized Gaussian `delta_eps(x) prop. exp(-d(x, e)^2 / (2 eps^2))` in arc
/// distance, with `int dx delta_eps(x) = 1` under normalized Haar measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    eps: f64,
    inv_norm: f64,
}

impl Mollifier {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!("mollifier width {eps}")));
        }
        // Haar measure in the arc distance psi is (2/pi) sin^2(psi) dpsi.
        let top = (12.0 * eps).min(PI);
        let z: f64 = crate::quadrature::gauss_legendre(200)?
            .iter()
            .map(|&(x, w)| {
                let psi = 0.5 * top * (x + 1.0);
                0.5 * top
                    * w
                    * (2.0 / PI)
                    * psi.sin().powi(2)
                    * (-psi * psi / (2.0 * eps * eps)).exp()
            })
            .sum();
        Ok(Self {
            eps,
            inv_norm: 1.0 / z,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Density at arc distance `d` from the identity.
    pub fn density(&self, d: f64) -> f64 {
        (-d * d / (2.0 * self.eps * self.eps)).exp() * self.inv_norm
    }
}

fn orthonormal_frame(n: [f64; 3]) -> [[f64; 3]; 3] {
    let pick = if n[0].abs() < 0.6 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let d = pick[0] * n[0] + pick[1] * n[1] + pick[2] * n[2];
    let mut e2 = [pick[0] - d * n[0], pick[1] - d * n[1], pick[2] - d * n[2]];
    let l = (e2[0] * e2[0] + e2[1] * e2[1] + e2[2] * e2[2]).sqrt();
    e2.iter_mut().for_each(|x| *x /= l);
    let e3 = [
        n[1] * e2[2] - n[2] * e2[1],
        n[2] * e2[0] - n[0] * e2[2],
        n[0] * e2[1] - n[1] * e2[0],
    ];
    [n, e2, e3]
}

/// Brute-force `W(g; J)` from the defining double integral with the delta
/// replaced by a `Mollifier` of width `eps`.
///
/// `g'` runs over `outer`. For each `g'` the `g''` integral uses a product
/// Gauss-Legendre grid of `local_n^3` nodes in exponential coordinates around
/// `r = g g'^{-1} g`, the point where the midpoint hits `g`. Directions across
/// the `g' -> r` geodesic are compressed by `cos d(g, g')`, the rate at which
/// the midpoint moves, so the mollifier stays resolved near the boundary
/// of the hemisphere. Pairs with `g'` nearly orthogonal to `g` whose
/// midpoint lands near `g` from far outside that chart are not sampled; the
/// mass lost is about `eps^{5/2}` (1e-3 at `eps = 0.05`).
///
/// Beyond quadrature error the result is `delta_eps * W`, which differs from
/// `W` by roughly `2 L (L + 1) eps^2` on band-`L` components.
pub fn wigner_bruteforce_mollified(
    rho: &DensityEnsemble,
    g: &Su2Element,
    two_js: &[u32],
    eps: f64,
    outer: &QuadratureGrid,
    local_n: usize,
) -> Result<Vec<WignerBlock>> {
    let moll = Mollifier::new(eps)?;
    let radius = 10.0 * eps;
    let local: Vec<(f64, f64)> = crate::quadrature::gauss_legendre(local_n)?
        .into_iter()
        .map(|(x, w)| (radius * x, radius * w))
        .collect();
    let two_top = two_js
        .iter()
        .copied()
        .max()
        .unwrap_or(0)
        .max(rho.two_jmax());
    let jm = rho.two_jmax() as usize;
    let ds_at = |x: &Su2Element| -> Vec<CMatrix> { (0..=two_top).map(|t| dmatrix(t, x)).collect() };
    let psi_at = |ds: &[CMatrix]| -> Vec<Complex64> {
        rho.states()
            .iter()
            .map(|s| s.evaluate_with(&ds[..=jm]))
            .collect()
    };
    let mut acc: Vec<Vec<Complex64>> = two_js
        .iter()
        .map(|&t| vec![ZERO; (t as usize + 1).pow(4)])
        .collect();

    for (gp, wp) in outer.iter() {
        let c = g.dot(gp);
        if c < 1e-6 {
            continue;
        }
        let dgp = ds_at(gp);
        let psi_p = psi_at(&dgp);
        let r = *g * gp.inverse() * *g;
        // unit tangent at r toward g'
        let (a, b) = (gp.components(), r.components());
        let rg = gp.dot(&r);
        let t: [f64; 4] = std::array::from_fn(|i| a[i] - rg * b[i]);
        let tn = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        let axis = if tn < 1e-12 {
            [1.0, 0.0, 0.0]
        } else {
            let q = r.inverse() * Su2Element::new(t)?;
            let v = q.components();
            let l = (v[1] * v[1] + v[2] * v[2] + v[3] * v[3]).sqrt();
            [v[1] / l, v[2] / l, v[3] / l]
        };
        let frame = orthonormal_frame(axis);
        for &(u1, w1) in &local {
            for &(u2, w2) in &local {
                for &(u3, w3) in &local {
                    let v: [f64; 3] = std::array::from_fn(|i| {
                        u1 * frame[0][i] + c * (u2 * frame[1][i] + u3 * frame[2][i])
                    });
                    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                    if len >= PI {
                        continue;
                    }
                    let sinc = if len < 1e-12 { 1.0 } else { len.sin() / len };
                    let step =
                        Su2Element::from_unit([len.cos(), sinc * v[0], sinc * v[1], sinc * v[2]]);
                    let gpp = r * step;
                    let Ok(s) = geodesic_midpoint(gp, &gpp) else {
                        continue;
                    };
                    let dens = moll.density(crate::group::geodesic_distance(g, &s));
                    if dens < 1e-300 {
                        continue;
                    }
                    let wt = wp * w1 * w2 * w3 * c * c * sinc * sinc / (2.0 * PI * PI) * dens;
                    let dgpp = ds_at(&gpp);
                    let psi_pp = psi_at(&dgpp);
                    let kern: Complex64 = rho
                        .weights()
                        .iter()
                        .zip(psi_pp.iter().zip(&psi_p))
                        .map(|(w, (x, y))| w * x * y.conj())
                        .sum();
                    let f = kern * wt;
                    for (slot, &tj) in acc.iter_mut().zip(two_js) {
                        let (da, db) = (dgp[tj as usize].as_slice(), dgpp[tj as usize].as_slice());
                        let nn = da.len();
                        for (i, x) in da.iter().enumerate() {
                            let fx = f * x;
                            for (j, y) in db.iter().enumerate() {
                                slot[i * nn + j] += fx * y.conj();
                            }
                        }
                    }
                }
            }
        }
    }
    two_js
        .iter()
        .zip(acc)
        .map(|(&tj, a)| {
            let n = tj as usize + 1;
            let m = CMatrix::from_vec(n * n, a.into_iter().map(|z| z * n as f64).collect());
            WignerBlock::new(*g, tj, m)
        })
        .collect()
}

/// One-shot `W~(g; J M M')`; batch callers should build a `WignerPlan`.
pub fn wigner_tilde(rho: &DensityEnsemble, g: &Su2Element, two_j: u32) -> Result<WignerTildeBlock> {
    WignerPlan::new(rho.two_jmax(), &[], two_j)?.tilde(rho, g, two_j, Side::Left)
}

/// One-shot `W~~(g; J N N')`.
pub fn wigner_tilde_tilde(
    rho: &DensityEnsemble,
    g: &Su2Element,
    two_j: u32,
) -> Result<WignerTildeBlock> {
    WignerPlan::new(rho.two_jmax(), &[], two_j)?.tilde(rho, g, two_j, Side::Right)
}
