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

//! Irreducible representations of SU(2): Wigner D-matrices, characters and
//! Clebsch-Gordan coefficients.
//!
//! Spins are passed doubled (`two_j = 2j`, `two_m = 2m`). Rows and columns of
//! `D^j` run over `m = j, j-1, ..., -j`, so that `D^{1/2}(a) = u(a)`.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::group::Su2Element;
use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrrepLabel {
    pub two_j: u32,
}

impl IrrepLabel {
    pub fn new(two_j: u32) -> Self {
        Self { two_j }
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn spin(&self) -> f64 {
        0.5 * self.two_j as f64
    }

    /// Doubled magnetic numbers in row order.
    pub fn two_ms(&self) -> impl Iterator<Item = i32> {
        let tj = self.two_j as i32;
        (0..=self.two_j as i32).map(move |i| tj - 2 * i)
    }
}

/// Row index of `m` inside a spin-`j` block.
pub fn index_of(two_j: u32, two_m: i32) -> usize {
    ((two_j as i32 - two_m) / 2) as usize
}

/// Doubled `m` of row `i`.
pub fn two_m_of(two_j: u32, i: usize) -> i32 {
    two_j as i32 - 2 * i as i32
}

pub fn check_index(two_j: u32, two_m: i32) -> Result<()> {
    if two_m.abs() > two_j as i32 || (two_j as i32 - two_m) % 2 != 0 {
        return Err(Error::Index { two_j, two_m });
    }
    Ok(())
}

const LN_FACT_LEN: usize = 4096;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; LN_FACT_LEN];
        for n in 1..LN_FACT_LEN {
            t[n] = t[n - 1] + (n as f64).ln();
        }
        t
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: i64) -> f64 {
    assert!(
        n >= 0 && (n as usize) < LN_FACT_LEN,
        "ln_factorial({n}) out of table"
    );
    ln_fact_table()[n as usize]
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the three-term recurrence.
pub fn jacobi(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `d^j_{m m'}` from `c = cos(beta/2)` and `s = sin(beta/2)`. Indices must be
/// valid.
fn little_d_cs(two_j: u32, two_m: i32, two_mp: i32, c: f64, s: f64) -> f64 {
    // Reduce to m' >= |m|, where the Jacobi form applies directly.
    let (m, mp, sign) = if two_mp.abs() >= two_m.abs() {
        if two_mp >= 0 {
            (two_m, two_mp, 1.0)
        } else {
            (-two_m, -two_mp, parity((two_m - two_mp) / 2))
        }
    } else if two_m >= 0 {
        (two_mp, two_m, parity((two_m - two_mp) / 2))
    } else {
        (-two_mp, -two_m, 1.0)
    };
    let tj = two_j as i64;
    let (m, mp) = (m as i64, mp as i64);
    let lnpre = 0.5
        * (ln_factorial((tj + mp) / 2) + ln_factorial((tj - mp) / 2)
            - ln_factorial((tj + m) / 2)
            - ln_factorial((tj - m) / 2));
    let p = ((mp - m) / 2) as i32;
    let q = ((mp + m) / 2) as i32;
    let n = ((tj - mp) / 2) as u32;
    let x = (c - s) * (c + s);
    sign * lnpre.exp() * s.powi(p) * c.powi(q) * jacobi(n, p as f64, q as f64, x)
}

fn parity(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wigner small-d `d^j_{m m'}(beta)`.
pub fn little_d(two_j: u32, two_m: i32, two_mp: i32, beta: f64) -> Result<f64> {
    check_index(two_j, two_m)?;
    check_index(two_j, two_mp)?;
    if !beta.is_finite() {
        return Err(Error::Domain(format!("beta = {beta}")));
    }
    let (s, c) = (0.5 * beta).sin_cos();
    Ok(little_d_cs(two_j, two_m, two_mp, c, s))
}

/// The full `d^j(beta)` block.
pub fn little_d_matrix(two_j: u32, beta: f64) -> Vec<f64> {
    let (s, c) = (0.5 * beta).sin_cos();
    d_block_cs(two_j, c, s)
}

fn d_block_cs(two_j: u32, c: f64, s: f64) -> Vec<f64> {
    let n = two_j as usize + 1;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            d[i * n + k] = little_d_cs(two_j, two_m_of(two_j, i), two_m_of(two_j, k), c, s);
        }
    }
    d
}

/// Phase data of `a` in the form used by `dmatrix`: `lambda = c e^{-i(alpha+gamma)/2}`,
/// `a2 + i a1 = s e^{i(gamma-alpha)/2}`. At gimbal points the undefined phase
/// is set to 1, which is the `alpha = 0` convention of `to_euler`.
struct Phases {
    c: f64,
    s: f64,
    lam: Complex64,
    nu: Complex64,
}

fn phases(g: &Su2Element) -> Phases {
    let [a0, a1, a2, a3] = g.components();
    let c = a0.hypot(a3);
    let s = a2.hypot(a1);
    let one = Complex64::new(1.0, 0.0);
    let lam = if c > 0.0 {
        Complex64::new(a0 / c, -a3 / c)
    } else {
        one
    };
    let nu = if s > 0.0 {
        Complex64::new(a2 / s, a1 / s)
    } else {
        one
    };
    Phases { c, s, lam, nu }
}

/// `z^k` for a unit complex `z` and any integer `k`.
fn upow(z: Complex64, k: i32) -> Complex64 {
    if k >= 0 {
        z.powi(k)
    } else {
        z.conj().powi(-k)
    }
}

/// `D^j(g)` with `D^j_{m m'} = e^{-i m alpha} d^j_{m m'}(beta) e^{-i m' gamma}`.
pub fn dmatrix(two_j: u32, g: &Su2Element) -> CMatrix {
    let ph = phases(g);
    let n = two_j as usize + 1;
    let d = d_block_cs(two_j, ph.c, ph.s);
    let tj = two_j as i32;
    let lp: Vec<Complex64> = (-tj..=tj).map(|k| upow(ph.lam, k)).collect();
    let np: Vec<Complex64> = (-tj..=tj).map(|k| upow(ph.nu, k)).collect();
    CMatrix::from_fn(n, |i, k| {
        let (m, mp) = (two_m_of(two_j, i), two_m_of(two_j, k));
        let e1 = ((m + mp) / 2 + tj) as usize;
        let e2 = ((m - mp) / 2 + tj) as usize;
        lp[e1] * np[e2] * d[i * n + k]
    })
}

/// One entry `D^j_{m m'}(g)`.
pub fn dmatrix_entry(two_j: u32, two_m: i32, two_mp: i32, g: &Su2Element) -> Result<Complex64> {
    check_index(two_j, two_m)?;
    check_index(two_j, two_mp)?;
    let ph = phases(g);
    let d = little_d_cs(two_j, two_m, two_mp, ph.c, ph.s);
    Ok(upow(ph.lam, (two_m + two_mp) / 2) * upow(ph.nu, (two_m - two_mp) / 2) * d)
}

/// All blocks `D^0 .. D^{two_jmax/2}` at once.
pub fn dmatrices(two_jmax: u32, g: &Su2Element) -> Vec<CMatrix> {
    (0..=two_jmax).map(|tj| dmatrix(tj, g)).collect()
}

/// `chi^j(g) = U_{2j}(a0)`, Chebyshev of the second kind; equals
/// `sin((2j+1) phi/2) / sin(phi/2)` for rotation angle `phi`.
pub fn character(two_j: u32, g: &Su2Element) -> f64 {
    chebyshev_u(two_j, g.a0())
}

pub fn chebyshev_u(n: u32, x: f64) -> f64 {
    let (mut u0, mut u1) = (1.0, 2.0 * x);
    if n == 0 {
        return u0;
    }
    for _ in 1..n {
        let u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u1
}

/// `<j1 m1 j2 m2 | J M>` with Condon-Shortley phases (Racah formula).
/// Returns 0 whenever a selection rule fails; errors on malformed indices.
pub fn clebsch_gordan(
    two_j1: u32,
    two_m1: i32,
    two_j2: u32,
    two_m2: i32,
    two_j: u32,
    two_m: i32,
) -> Result<f64> {
    check_index(two_j1, two_m1)?;
    check_index(two_j2, two_m2)?;
    check_index(two_j, two_m)?;
    Ok(cg(two_j1, two_m1, two_j2, two_m2, two_j, two_m))
}

/// Unchecked Clebsch-Gordan; indices assumed well formed.
pub(crate) fn cg(
    two_j1: u32,
    two_m1: i32,
    two_j2: u32,
    two_m2: i32,
    two_j: u32,
    two_m: i32,
) -> f64 {
    let (j1, j2, j) = (two_j1 as i64, two_j2 as i64, two_j as i64);
    let (m1, m2, m) = (two_m1 as i64, two_m2 as i64, two_m as i64);
    if m1 + m2 != m || j > j1 + j2 || j < (j1 - j2).abs() || (j1 + j2 + j) % 2 != 0 {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return 0.0;
    }
    let f = |x: i64| ln_factorial(x / 2);
    let lnpre = 0.5
        * ((j as f64 + 1.0).ln() + f(j + j1 - j2) + f(j - j1 + j2) + f(j1 + j2 - j)
            - f(j1 + j2 + j + 2)
            + f(j + m)
            + f(j - m)
            + f(j1 - m1)
            + f(j1 + m1)
            + f(j2 - m2)
            + f(j2 + m2));
    // k runs over doubled values with every factorial argument >= 0.
    let kmin = 0.max(j2 - j - m1).max(j1 - j + m2);
    let kmax = (j1 + j2 - j).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    let mut k = kmin;
    while k <= kmax {
        let den = f(k)
            + f(j1 + j2 - j - k)
            + f(j1 - m1 - k)
            + f(j2 + m2 - k)
            + f(j - j2 + m1 + k)
            + f(j - j1 - m2 + k);
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (lnpre - den).exp();
        k += 2;
    }
    sum
}

/// One term `coeff * D^{J}_{M N}` of a Clebsch-Gordan series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerm {
    pub two_j: u32,
    pub two_m: i32,
    pub two_n: i32,
    pub coeff: f64,
}

/// `D^{j1}_{m1 n1} D^{j2}_{m2 n2} = sum_J <j1 m1 j2 m2|J M><j1 n1 j2 n2|J N> D^J_{M N}`.
pub fn dd_product_decompose(
    (two_j1, two_m1, two_n1): (u32, i32, i32),
    (two_j2, two_m2, two_n2): (u32, i32, i32),
) -> Result<Vec<SeriesTerm>> {
    for (tj, tm) in [
        (two_j1, two_m1),
        (two_j1, two_n1),
        (two_j2, two_m2),
        (two_j2, two_n2),
    ] {
        check_index(tj, tm)?;
    }
    let (tm, tn) = (two_m1 + two_m2, two_n1 + two_n2);
    let lo = (two_j1 as i32 - two_j2 as i32).unsigned_abs();
    let mut out = Vec::new();
    let mut tj = lo;
    while tj <= two_j1 + two_j2 {
        if tm.unsigned_abs() <= tj && tn.unsigned_abs() <= tj {
            let coeff = cg(two_j1, two_m1, two_j2, two_m2, tj, tm)
                * cg(two_j1, two_n1, two_j2, two_n2, tj, tn);
            if coeff != 0.0 {
                out.push(SeriesTerm {
                    two_j: tj,
                    two_m: tm,
                    two_n: tn,
                    coeff,
                });
            }
        }
        tj += 2;
    }
    Ok(out)
}

/// Evaluates a series returned by `dd_product_decompose` at `g`.
pub fn eval_series(terms: &[SeriesTerm], g: &Su2Element) -> Complex64 {
    terms
        .iter()
        .map(|t| t.coeff * dmatrix_entry(t.two_j, t.two_m, t.two_n, g).expect("series indices"))
        .sum()
}
