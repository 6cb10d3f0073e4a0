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

//! Product quadratures on SU(2).
//!
//! Two kinds of grid are built here:
//!
//! * `haar_grid`: uniform in `alpha` and `gamma`, Gauss-Legendre in
//!   `cos(beta)`, for integrals against the normalized Haar measure.
//! * `hemisphere_grid`: a rule for `int dk j(k) f(k)` over the open
//!   hemisphere `a0 > 0`, where `j(k) = 8 a0^2` is the squaring Jacobian.
//!   Its weights already include `j`, so they also sum to one.
//!
//! `exactness_degree = d` means every product `D^J_{MN} conj(D^{J'}_{M'N'})`
//! with `J, J' <= d` is integrated exactly (hemisphere: every polynomial in
//! the components of degree <= 4d). Both claims are checked numerically at
//! construction.

use gauss_quad::legendre::GaussLegendre;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::group::{EulerAngles, Su2Element};
use crate::irreps::little_d_matrix;

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre(n: usize) -> Result<Vec<(f64, f64)>> {
    match n {
        0 => Err(Error::InvalidGrid(
            "Gauss-Legendre order must be positive".into(),
        )),
        1 => Ok(vec![(0.0, 2.0)]),
        _ => {
            let rule = GaussLegendre::new(n).map_err(|e| Error::InvalidGrid(e.to_string()))?;
            let mut v: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            Ok(v)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Haar {
        n_alpha: usize,
        n_beta: usize,
        n_gamma: usize,
    },
    Hemisphere {
        n_psi: usize,
        n_theta: usize,
        n_phi: usize,
    },
}

#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    nodes: Vec<Su2Element>,
    weights: Vec<f64>,
    exactness_degree: u32,
    kind: GridKind,
}

/// Verification tolerance for the exactness claim.
const EXACTNESS_TOL: f64 = 1e-12;

impl QuadratureGrid {
    pub fn nodes(&self) -> &[Su2Element] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn exactness_degree(&self) -> u32 {
        self.exactness_degree
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Su2Element, f64)> {
        self.nodes.iter().zip(self.weights.iter().copied())
    }

    pub fn euler_nodes(&self) -> Vec<EulerAngles> {
        self.nodes.iter().map(|n| n.to_euler()).collect()
    }

    /// Errors unless the grid integrates `D^J conj(D^{J'})` exactly for
    /// all `2J, 2J' <= two_band`.
    pub fn require(&self, two_band: u32) -> Result<()> {
        let have = 2 * self.exactness_degree;
        if have < two_band {
            return Err(Error::GridTooCoarse {
                have,
                need: two_band,
            });
        }
        Ok(())
    }

    pub fn integrate<F: FnMut(&Su2Element) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(g, w)| w * f(g)).sum()
    }
}

/// The Haar exactness of an `(n_alpha, n_beta, n_gamma)` product grid.
pub fn haar_exactness(n_alpha: usize, n_beta: usize, n_gamma: usize) -> u32 {
    let m = (n_alpha as f64)
        .min(n_gamma as f64 / 2.0)
        .min(2.0 * n_beta as f64);
    ((m / 2.0).floor() - 1.0).max(0.0) as u32
}

pub fn haar_grid(n_alpha: usize, n_beta: usize, n_gamma: usize) -> Result<QuadratureGrid> {
    if n_alpha == 0 || n_beta == 0 || n_gamma == 0 {
        return Err(Error::InvalidGrid(format!("{n_alpha}x{n_beta}x{n_gamma}")));
    }
    let gl = gauss_legendre(n_beta)?;
    let deg = haar_exactness(n_alpha, n_beta, n_gamma);
    verify_haar_factors(n_alpha, n_gamma, &gl, deg)?;
    let mut nodes = Vec::with_capacity(n_alpha * n_beta * n_gamma);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for ia in 0..n_alpha {
        let alpha = 2.0 * PI * ia as f64 / n_alpha as f64;
        for &(x, wx) in &gl {
            let beta = x.clamp(-1.0, 1.0).acos();
            for ic in 0..n_gamma {
                let gamma = 4.0 * PI * ic as f64 / n_gamma as f64;
                nodes.push(Su2Element::from_euler(EulerAngles { alpha, beta, gamma }));
                weights.push(0.5 * wx / (n_alpha * n_gamma) as f64);
            }
        }
    }
    Ok(QuadratureGrid {
        nodes,
        weights,
        exactness_degree: deg,
        kind: GridKind::Haar {
            n_alpha,
            n_beta,
            n_gamma,
        },
    })
}

/// The product integrates `D^J_{MN} conj(D^{J'}_{M'N'})` exactly iff the
/// alpha sum kills `e^{-i(M-M')alpha}` for `M != M'`, the gamma sum does the same
/// for `N - N'`, and Gauss-Legendre integrates `d^J_{MN} d^{J'}_{MN}`.
fn verify_haar_factors(n_alpha: usize, n_gamma: usize, gl: &[(f64, f64)], deg: u32) -> Result<()> {
    let fail = |what: String| {
        Err(Error::InvalidGrid(format!(
            "exactness check failed: {what}"
        )))
    };
    // M - M' ranges over integers up to 2 deg in magnitude.
    for k in 1..=2 * deg as i64 {
        let s: f64 = (0..n_alpha)
            .map(|i| (2.0 * PI * (k * i as i64) as f64 / n_alpha as f64).cos())
            .sum();
        if (s / n_alpha as f64).abs() > EXACTNESS_TOL {
            return fail(format!("alpha frequency {k}"));
        }
    }
    // N - N' is an integer up to 2 deg; the gamma phase is e^{-i(N-N')gamma}
    // with gamma in [0, 4pi), i.e. frequency (N-N')/2 per 2pi.
    for k in 1..=4 * deg as i64 {
        let (mut c, mut s) = (0.0, 0.0);
        for i in 0..n_gamma {
            let t = 2.0 * PI * (k * i as i64) as f64 / n_gamma as f64;
            c += t.cos();
            s += t.sin();
        }
        if c.hypot(s) / n_gamma as f64 > EXACTNESS_TOL {
            return fail(format!("gamma frequency {k}/2"));
        }
    }
    // beta: orthogonality of d-functions sharing (M, N), spins up to
    // min(deg, 24); beyond that the claim rests on GL degree 2 n_beta - 1.
    let top = deg.min(24) * 2;
    let blocks: Vec<Vec<Vec<f64>>> = (0..=top)
        .map(|tj| {
            gl.iter()
                .map(|&(x, _)| little_d_matrix(tj, x.clamp(-1.0, 1.0).acos()))
                .collect()
        })
        .collect();
    for tj in 0..=top {
        for tk in (tj % 2..=top).step_by(2) {
            let lo = tj.min(tk) as i32;
            let mut tm = -lo;
            while tm <= lo {
                let mut tn = -lo;
                while tn <= lo {
                    let (ij, nj) = (((tj as i32 - tm) / 2) as usize, tj as usize + 1);
                    let (ik, nk) = (((tk as i32 - tm) / 2) as usize, tk as usize + 1);
                    let (jj, jk) = (
                        ((tj as i32 - tn) / 2) as usize,
                        ((tk as i32 - tn) / 2) as usize,
                    );
                    let s: f64 = gl
                        .iter()
                        .enumerate()
                        .map(|(q, &(_, w))| {
                            0.5 * w
                                * blocks[tj as usize][q][ij * nj + jj]
                                * blocks[tk as usize][q][ik * nk + jk]
                        })
                        .sum();
                    let want = if tj == tk {
                        1.0 / (tj as f64 + 1.0)
                    } else {
                        0.0
                    };
                    if (s - want).abs() > EXACTNESS_TOL {
                        return fail(format!(
                            "beta orthogonality 2j={tj}, 2j'={tk}, 2m={tm}, 2n={tn}"
                        ));
                    }
                    tn += 2;
                }
                tm += 2;
            }
        }
    }
    Ok(())
}

/// `int_0^{pi/2} cos^n`.
fn wallis(n: u32) -> f64 {
    let (mut w, mut k) = if n % 2 == 0 { (PI / 2.0, 0) } else { (1.0, 1) };
    while k < n {
        k += 2;
        w *= (k - 1) as f64 / k as f64;
    }
    w
}

/// `int_0^{pi/2} cos^p(psi) sin^2(psi) dpsi`.
fn radial_moment(p: u32) -> f64 {
    wallis(p) - wallis(p + 2)
}

/// `int_0^{pi/2} cos^a sin^b` by the recursion in `b`, free of cancellation.
fn trig_moment(a: u32, b: u32) -> f64 {
    let mut v = if b % 2 == 0 {
        wallis(a)
    } else {
        1.0 / (a as f64 + 1.0)
    };
    let mut k = b % 2;
    while k < b {
        k += 2;
        v *= (k - 1) as f64 / (a + k) as f64;
    }
    v
}

/// A rule for `int_{a0 > 0} dk j(k) f(k)` exact for polynomials of degree
/// `<= 4 * exactness` in the components of `k`.
///
/// In coordinates `k = (cos psi, sin psi n)`, `dk = (2/pi) sin^2 psi dpsi dn/(4pi)`;
/// `psi` uses Gauss-Legendre on (0, pi/2) so no node sits on the boundary, and
/// the sphere part is Gauss-Legendre in `cos theta` times a uniform `phi` rule.
pub fn hemisphere_grid(exactness: u32) -> Result<QuadratureGrid> {
    let deg = 4 * exactness as usize;
    // Integrand degree in cos psi after the measure and j: deg + 2, times sin^2.
    let n_theta = deg / 2 + 1;
    let n_phi = deg + 1;
    let mut n_psi = deg / 2 + 8;
    let psi_rule = loop {
        let rule = gauss_legendre(n_psi)?;
        let map = |x: f64| 0.25 * PI * (x + 1.0);
        let ok = (0..=deg as u32 + 2).all(|p| {
            let s: f64 = rule
                .iter()
                .map(|&(x, w)| 0.25 * PI * w * map(x).cos().powi(p as i32) * map(x).sin().powi(2))
                .sum();
            (s - radial_moment(p)).abs() <= 1e-14 * radial_moment(p).max(1.0)
        });
        if ok {
            break rule;
        }
        n_psi += 4;
        if n_psi > 4 * deg + 64 {
            return Err(Error::InvalidGrid(
                "hemisphere radial rule did not converge".into(),
            ));
        }
    };
    let theta_rule = gauss_legendre(n_theta)?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for &(x, wx) in &psi_rule {
        let psi = 0.25 * PI * (x + 1.0);
        let (sp, cp) = psi.sin_cos();
        let wr = (2.0 / PI) * sp * sp * 0.25 * PI * wx * 8.0 * cp * cp;
        for &(ct, wt) in &theta_rule {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for ip in 0..n_phi {
                let phi = 2.0 * PI * ip as f64 / n_phi as f64;
                let (sf, cf) = phi.sin_cos();
                nodes.push(Su2Element::from_unit([
                    cp,
                    sp * st * cf,
                    sp * st * sf,
                    sp * ct,
                ]));
                weights.push(wr * 0.5 * wt / n_phi as f64);
            }
        }
    }
    let grid = QuadratureGrid {
        nodes,
        weights,
        exactness_degree: exactness,
        kind: GridKind::Hemisphere {
            n_psi,
            n_theta,
            n_phi,
        },
    };
    verify_hemisphere(&grid, deg as u32)?;
    Ok(grid)
}

/// For the axis polynomial `a0^p a3^q`: `int j a0^p a3^q dk` equals
/// `8 (2/pi) int cos^{p+2} sin^{q+2} dpsi * <n3^q>` with `<n3^q> = 1/(q+1)`
/// for even `q` and zero otherwise.
fn verify_hemisphere(grid: &QuadratureGrid, deg: u32) -> Result<()> {
    for p in 0..=deg {
        for q in (0..=deg - p).step_by(2) {
            let got = grid.integrate(|k| {
                let c = k.components();
                c[0].powi(p as i32) * c[3].powi(q as i32)
            });
            let radial = trig_moment(p + 2, q + 2);
            let want = 8.0 * (2.0 / PI) * radial / (q as f64 + 1.0);
            if (got - want).abs() > EXACTNESS_TOL * want.abs().max(1.0) {
                return Err(Error::InvalidGrid(format!(
                    "hemisphere exactness check failed for a0^{p} a3^{q}: {got} vs {want}"
                )));
            }
        }
    }
    let odd = grid.integrate(|k| k.components()[1] * k.components()[0]);
    if deg >= 2 && odd.abs() > EXACTNESS_TOL {
        return Err(Error::InvalidGrid(
            "hemisphere odd moment does not vanish".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irreps::dmatrix;
    use crate::linalg::CMatrix;

    #[test]
    fn exactness_formula() {
        assert_eq!(haar_exactness(8, 4, 16), 3);
        assert_eq!(haar_exactness(14, 7, 28), 6);
        assert_eq!(haar_exactness(1, 1, 1), 0);
        assert!(haar_grid(0, 3, 3).is_err());
    }

    #[test]
    fn weights_sum_to_one() {
        let g = haar_grid(8, 4, 16).unwrap();
        assert_eq!(g.len(), 8 * 4 * 16);
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let h = hemisphere_grid(2).unwrap();
        assert!((h.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13);
        assert!(h.nodes().iter().all(|k| k.a0() > 0.0));
    }

    #[test]
    fn haar_grid_orthogonality_at_claimed_degree() {
        let g = haar_grid(8, 4, 16).unwrap();
        let deg = g.exactness_degree();
        let ds: Vec<Vec<CMatrix>> = g
            .nodes()
            .iter()
            .map(|n| (0..=2 * deg).map(|tj| dmatrix(tj, n)).collect())
            .collect();
        for tj in 0..=2 * deg as usize {
            for tk in 0..=2 * deg as usize {
                let (nj, nk) = (tj + 1, tk + 1);
                for a in 0..nj * nj {
                    for b in 0..nk * nk {
                        let s: num_complex::Complex64 = g
                            .iter()
                            .enumerate()
                            .map(|(q, (_, w))| {
                                w * ds[q][tj].as_slice()[a] * ds[q][tk].as_slice()[b].conj()
                            })
                            .sum();
                        let want = if tj == tk && a == b {
                            1.0 / nj as f64
                        } else {
                            0.0
                        };
                        assert!((s - want).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn hemisphere_pushforward_matches_haar() {
        // int dk j(k) f(k^2) = int dh f(h) for f = |D^1_{00}|^2 + Re D^{1/2}_{11}
        let h = hemisphere_grid(2).unwrap();
        let got = h.integrate(|k| {
            let kk = *k * *k;
            dmatrix(2, &kk)[(1, 1)].norm_sqr() + dmatrix(1, &kk)[(0, 0)].re
        });
        assert!((got - 1.0 / 3.0).abs() < 1e-12);
    }
}
