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

//! Angle and integer angular momentum.
//!
//! `psi(theta) = (2pi)^{-1/2} sum_m c_m e^{i m theta}` and
//! `W(theta, m) = (1/2pi) int_{-pi}^{pi} dtau psi(theta + tau/2) conj(psi(theta - tau/2)) e^{-i m tau}`.
//! The tau integral is done in closed form: with `nu = (n + n')/2 - m`,
//! `int e^{i nu tau} dtau` is `2pi delta_{nu,0}` for integer `nu` and
//! `2 sin(pi nu)/nu` for half-integer `nu`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, PartialEq)]
pub struct AngleState {
    m_max: i64,
    coeffs: Vec<Complex64>,
}

impl AngleState {
    /// `coeffs[i]` multiplies `e^{i m theta}` with `m = i - m_max`; normalized on construction.
    pub fn new(m_max: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if m_max < 0 || coeffs.len() != (2 * m_max + 1) as usize {
            return Err(Error::Dimension(format!(
                "{} coefficients for m_max = {m_max}",
                coeffs.len()
            )));
        }
        let n = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0) {
            return Err(Error::Domain("zero state".into()));
        }
        Ok(Self {
            m_max,
            coeffs: coeffs.into_iter().map(|z| z / n).collect(),
        })
    }

    pub fn eigenstate(m_max: i64, m0: i64) -> Result<Self> {
        if m0.abs() > m_max {
            return Err(Error::Domain(format!("m0 = {m0} beyond m_max = {m_max}")));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); (2 * m_max + 1) as usize];
        c[(m0 + m_max) as usize] = Complex64::new(1.0, 0.0);
        Self::new(m_max, c)
    }

    /// Random state; `parity` restricts to `m` of that parity (0 even, 1 odd).
    pub fn random<R: rand::Rng + ?Sized>(m_max: i64, parity: Option<i64>, rng: &mut R) -> Self {
        let c: Vec<Complex64> = (-m_max..=m_max)
            .map(|m| {
                let keep = parity.is_none_or(|p| m.rem_euclid(2) == p);
                let (re, im): (f64, f64) = (
                    rng.sample(rand_distr::StandardNormal),
                    rng.sample(rand_distr::StandardNormal),
                );
                if keep {
                    Complex64::new(re, im)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::new(m_max, c).expect("nonzero random state")
    }

    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        if m.abs() > self.m_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(m + self.m_max) as usize]
        }
    }

    fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        (-self.m_max..=self.m_max)
            .map(|m| (m, self.coeff(m)))
            .filter(|(_, c)| c.norm_sqr() > 0.0)
    }

    pub fn evaluate(&self, theta: f64) -> Complex64 {
        self.terms()
            .map(|(m, c)| c * Complex64::from_polar(1.0, m as f64 * theta))
            .sum::<Complex64>()
            / (2.0 * PI).sqrt()
    }

    /// `sum_m conj(c_m) d_m`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let top = self.m_max.max(other.m_max);
        (-top..=top)
            .map(|m| self.coeff(m).conj() * other.coeff(m))
            .sum()
    }
}

/// `int_{-pi}^{pi} e^{i (two_nu/2) tau} dtau`.
fn arc_integral(two_nu: i64) -> f64 {
    if two_nu == 0 {
        2.0 * PI
    } else if two_nu % 2 == 0 {
        0.0
    } else {
        let nu = two_nu as f64 / 2.0;
        2.0 * (PI * nu).sin() / nu
    }
}

/// `W(theta, m)` in closed form; real for any state.
pub fn angle_wigner(state: &AngleState, theta: f64, m: i64) -> f64 {
    angle_wigner_complex(state, theta, m).re
}

pub fn angle_wigner_complex(state: &AngleState, theta: f64, m: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, c) in state.terms() {
        for (np, d) in state.terms() {
            let s = arc_integral(n + np - 2 * m);
            if s != 0.0 {
                acc += c * d.conj() * Complex64::from_polar(s, (n - np) as f64 * theta);
            }
        }
    }
    acc / (4.0 * PI * PI)
}

/// The same `W`, but built the way the group construction builds it: the
/// delta pinning the midpoint is removed by `theta' = theta - k`,
/// `theta'' = theta + k`, `k in (-pi/2, pi/2)` (Jacobian 2 on the circle),
/// with normalized Haar measure `dtheta / 2pi` and wavefunctions normalized
/// against it. In that convention the result is `2pi` times `angle_wigner`.
pub fn so2_general_wigner(state: &AngleState, theta: f64, m: i64) -> Result<f64> {
    let band = 2 * state.m_max + 2 * m.abs();
    let gl = gauss_legendre(32 + 2 * band as usize)?;
    let haar = |x: f64| state.evaluate(x) * (2.0 * PI).sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in gl {
        let k = 0.5 * PI * x;
        let (gp, gpp) = (theta - k, theta + k);
        let kern = haar(gpp) * haar(gp).conj();
        let chars = Complex64::from_polar(1.0, m as f64 * gp)
            * Complex64::from_polar(1.0, -(m as f64) * gpp);
        // dk / 2pi over (-pi/2, pi/2)
        acc += kern * chars * (2.0 * 0.5 * PI * w / (2.0 * PI));
    }
    Ok(acc.re)
}

/// Midpoint on the circle along the shorter arc, in `(-pi, pi]`.
///
/// `(theta' + theta'')/2` on representatives is the same point whenever
/// `|theta'' - theta'| < pi`; taking the shorter arc keeps the result
/// translation covariant when a shift moves one argument across the cut.
pub fn so2_midpoint(theta_p: f64, theta_pp: f64) -> f64 {
    let d = wrap(theta_pp - theta_p);
    wrap(theta_p + 0.5 * d)
}

/// Reduce to `(-pi, pi]`.
pub fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// `<psi| U(n) V(tau) e^{-i n tau/2} |psi> = sum_m conj(c_{m+n}) c_m e^{-i tau m} e^{-i n tau/2}`.
pub fn weyl_expectation(state: &AngleState, n: i64, tau: f64) -> Complex64 {
    state
        .terms()
        .map(|(m, c)| state.coeff(m + n).conj() * c * Complex64::from_polar(1.0, -tau * m as f64))
        .sum::<Complex64>()
        * Complex64::from_polar(1.0, -0.5 * n as f64 * tau)
}

/// `int dtheta sum_m W(theta, m) e^{i(n theta - tau m)}` from tabulated `W`.
///
/// The theta integral uses the trapezoid rule, exact for the trigonometric
/// polynomial `W(., m)`. For odd `n` the `m` sum converges only like `1/m`;
/// it is summed with a smooth window over `|m| <= m_cut`, which converges
/// rapidly for `|tau|` away from `pi`.
pub fn weyl_phase_space(state: &AngleState, n: i64, tau: f64, m_cut: i64) -> Result<Complex64> {
    if !(tau.abs() < PI) {
        return Err(Error::Domain(format!("tau = {tau} outside (-pi, pi)")));
    }
    let nodes = (4 * state.m_max + 2 * n.abs() + 8) as usize;
    let thetas: Vec<f64> = (0..nodes)
        .map(|i| -PI + 2.0 * PI * i as f64 / nodes as f64)
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in -m_cut..=m_cut {
        let w = smooth_window(m as f64 / m_cut as f64);
        if w == 0.0 {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for &t in &thetas {
            row += angle_wigner(state, t, m) * Complex64::from_polar(1.0, n as f64 * t);
        }
        acc += row * (2.0 * PI / nodes as f64) * Complex64::from_polar(w, -tau * m as f64);
    }
    Ok(acc)
}

/// 1 on `|x| <= 1/2`, 0 on `|x| >= 1`, smooth in between.
fn smooth_window(x: f64) -> f64 {
    let a = x.abs();
    if a <= 0.5 {
        return 1.0;
    }
    if a >= 1.0 {
        return 0.0;
    }
    let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let t = (1.0 - a) / 0.5;
    f(t) / (f(t) + f(1.0 - t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_examples() {
        assert!((so2_midpoint(0.3, 0.3) - 0.3).abs() < 1e-15);
        assert!((so2_midpoint(0.0, PI / 2.0) - PI / 4.0).abs() < 1e-15);
        assert!((so2_midpoint(3.0, -3.0).abs() - PI).abs() < 1e-12);
    }

    #[test]
    fn window_is_continuous() {
        for i in 0..100 {
            let x = 0.5 + i as f64 / 200.0;
            assert!((smooth_window(x) - smooth_window(x + 1e-7)).abs() < 1e-5);
        }
    }
}
