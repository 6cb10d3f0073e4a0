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

//! One Cartesian degree of freedom, `hbar = 1`.
//!
//! States are samples on the periodic grid `q_i = -L + i dq`, `dq = 2L/n`.
//! `W(q, p) = (1/2pi) int dq' psi(q - q'/2) conj(psi(q + q'/2)) e^{i p q'}` is
//! evaluated with `q' = 2k dq`, so on-grid `q` needs only the samples; other
//! `q` use the trigonometric interpolant.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CartesianState {
    half_width: f64,
    samples: Vec<Complex64>,
}

impl CartesianState {
    /// Normalizes the samples; errors if they fail to decay below `1e-8`
    /// at the edges.
    pub fn new(half_width: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(half_width > 0.0) || samples.len() < 4 {
            return Err(Error::Domain(format!(
                "grid of {} points on half-width {half_width}",
                samples.len()
            )));
        }
        let mut s = Self {
            half_width,
            samples,
        };
        let n = s.norm_sqr().sqrt();
        if !(n > 0.0) {
            return Err(Error::Domain("zero state".into()));
        }
        s.samples.iter_mut().for_each(|z| *z /= n);
        let edge = s.samples[0]
            .norm()
            .max(s.samples[s.samples.len() - 1].norm());
        if edge > 1e-8 {
            return Err(Error::Domain(format!(
                "state does not decay at the box edge: |psi| = {edge:e}"
            )));
        }
        Ok(s)
    }

    pub fn from_fn(half_width: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let dq = 2.0 * half_width / n as f64;
        Self::new(
            half_width,
            (0..n).map(|i| f(-half_width + i as f64 * dq)).collect(),
        )
    }

    /// Oscillator eigenfunction `level` (Hermite function recurrence).
    pub fn oscillator(level: usize, half_width: f64, n: usize) -> Result<Self> {
        Self::from_fn(half_width, n, |q| {
            let mut prev = 0.0;
            let mut cur = PI.powf(-0.25) * (-0.5 * q * q).exp();
            for k in 0..level {
                let next = (2.0 / (k as f64 + 1.0)).sqrt() * q * cur
                    - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
            }
            Complex64::new(cur, 0.0)
        })
    }

    /// `exp(-(q - q0)^2 / (2 sigma^2) + i p0 q)`, normalized.
    pub fn gaussian(q0: f64, p0: f64, sigma: f64, half_width: f64, n: usize) -> Result<Self> {
        Self::from_fn(half_width, n, |q| {
            Complex64::from_polar((-(q - q0).powi(2) / (2.0 * sigma * sigma)).exp(), p0 * q)
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dq(&self) -> f64 {
        2.0 * self.half_width / self.samples.len() as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dq()
    }

    /// Trapezoid norm (exact on the periodic grid).
    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dq()
    }

    /// Spacing of the momentum grid on which `sum_p W dp` is exact.
    pub fn dp(&self) -> f64 {
        PI / (self.samples.len() as f64 * self.dq())
    }

    /// `psi~(p) = (2pi)^{-1/2} int dq psi(q) e^{-ipq}`.
    pub fn momentum_amplitude(&self, p: f64) -> Complex64 {
        let dq = self.dq();
        self.samples
            .iter()
            .enumerate()
            .map(|(i, z)| z * Complex64::from_polar(1.0, -p * self.q(i)))
            .sum::<Complex64>()
            * (dq / (2.0 * PI).sqrt())
    }

    /// Trigonometric interpolant on the periodic box; equals the samples on the grid.
    pub fn interpolate(&self, q: f64) -> Complex64 {
        let n = self.samples.len();
        let x = (q + self.half_width) / self.dq();
        let near = x.round();
        if (x - near).abs() < 1e-12 {
            return self.samples[(near as i64).rem_euclid(n as i64) as usize];
        }
        // periodic sinc (Dirichlet kernel) interpolation, symmetric Nyquist split for even n
        let nf = n as f64;
        self.samples
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let t = PI * (x - i as f64) / nf;
                let k = if n % 2 == 0 {
                    (nf * t).sin() / (nf * t.tan())
                } else {
                    (nf * t).sin() / (nf * t.sin())
                };
                z * k
            })
            .sum()
    }

    fn at_offset(&self, base: f64, on_grid: Option<usize>, k: i64) -> Complex64 {
        match on_grid {
            Some(i) => {
                let j = i as i64 + k;
                if j < 0 || j >= self.samples.len() as i64 {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.samples[j as usize]
                }
            }
            None => {
                let q = base + k as f64 * self.dq();
                if q.abs() >= self.half_width {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.interpolate(q)
                }
            }
        }
    }
}

/// `W(q, p)`, real by construction; `q` must lie in the box `[-L, L)`.
pub fn cartesian_wigner(state: &CartesianState, q: f64, p: f64) -> Result<f64> {
    cartesian_wigner_complex(state, q, p).map(|z| z.re)
}

/// The sum before discarding its (roundoff-level) imaginary part.
pub fn cartesian_wigner_complex(state: &CartesianState, q: f64, p: f64) -> Result<Complex64> {
    let l = state.half_width();
    if !(q >= -l && q < l) {
        return Err(Error::Domain(format!("q = {q} outside [-{l}, {l})")));
    }
    let dq = state.dq();
    let x = (q + l) / dq;
    let on_grid = if (x - x.round()).abs() < 1e-12 {
        Some(x.round() as usize)
    } else {
        None
    };
    let kmax = state.len() as i64 / 2;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -kmax..=kmax {
        let a = state.at_offset(q, on_grid, -k);
        let b = state.at_offset(q, on_grid, k);
        if a == Complex64::new(0.0, 0.0) || b == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc += a * b.conj() * Complex64::from_polar(1.0, 2.0 * p * k as f64 * dq);
    }
    Ok(acc * (2.0 * dq / (2.0 * PI)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_is_normalized() {
        for level in 0..4 {
            let s = CartesianState::oscillator(level, 8.0, 512).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolant_reproduces_smooth_state() {
        let s = CartesianState::oscillator(1, 8.0, 256).unwrap();
        let q = 0.4321;
        let want = 2f64.sqrt() * PI.powf(-0.25) * q * (-q * q / 2.0).exp();
        assert!((s.interpolate(q).re - want).abs() < 1e-10);
    }

    #[test]
    fn outside_the_box_is_an_error() {
        let s = CartesianState::oscillator(0, 8.0, 64).unwrap();
        assert!(cartesian_wigner(&s, 8.5, 0.0).is_err());
    }
}
