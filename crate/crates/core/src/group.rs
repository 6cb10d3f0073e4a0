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

//! SU(2) as the unit 3-sphere: elements, Euler angles, the left and right
//! regular actions on R^4, geodesic midpoints and the squaring Jacobian.
//!
//! An element `a = (a0, a1, a2, a3)` stands for the matrix
//! `u(a) = a0 I - i (a1 s1 + a2 s2 + a3 s3)`, i.e.
//!
//! ```text
//!     [  lambda   mu      ]     lambda = a0 - i a3
//!     [ -mu*      lambda* ]     mu     = -(a2 + i a1)
//! ```

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;
use std::ops::Mul;

use crate::error::{Error, Result};

/// `geodesic_midpoint` refuses pairs with `1 + a.b` at or below this.
pub const ANTIPODAL_CUTOFF: f64 = 1e-9;

/// Below this `sin(beta/2)` (or `cos(beta/2)`) an element is treated as a
/// gimbal point by `to_euler`.
const GIMBAL_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Element {
    a: [f64; 4],
}

/// ZYZ Euler angles: `alpha` in [0, 2pi), `beta` in [0, pi], `gamma` in [0, 4pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }
}

impl Su2Element {
    pub const IDENTITY: Su2Element = Su2Element {
        a: [1.0, 0.0, 0.0, 0.0],
    };

    /// Normalizes `a` onto the sphere. Fails on zero or non-finite input.
    pub fn new(a: [f64; 4]) -> Result<Self> {
        let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::Domain(format!("cannot normalize {a:?}")));
        }
        Ok(Self {
            a: [a[0] / n, a[1] / n, a[2] / n, a[3] / n],
        })
    }

    /// `a` must already be a unit vector; only renormalizes roundoff.
    pub(crate) fn from_unit(a: [f64; 4]) -> Self {
        let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self {
            a: [a[0] / n, a[1] / n, a[2] / n, a[3] / n],
        }
    }

    /// `exp(-i (phi/2) n.sigma)`: rotation by `phi` about the unit axis `n`.
    pub fn from_axis_angle(axis: [f64; 3], phi: f64) -> Result<Self> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain("axis must be nonzero".into()));
        }
        let (s, c) = (0.5 * phi).sin_cos();
        Ok(Self::from_unit([
            c,
            s * axis[0] / n,
            s * axis[1] / n,
            s * axis[2] / n,
        ]))
    }

    /// Haar-uniform sample.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let a: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(e) = Self::new(a) {
                return e;
            }
        }
    }

    pub fn components(&self) -> [f64; 4] {
        self.a
    }

    pub fn a0(&self) -> f64 {
        self.a[0]
    }

    pub fn inverse(&self) -> Self {
        let a = self.a;
        Self {
            a: [a[0], -a[1], -a[2], -a[3]],
        }
    }

    pub fn neg(&self) -> Self {
        let a = self.a;
        Self {
            a: [-a[0], -a[1], -a[2], -a[3]],
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        (0..4).map(|i| self.a[i] * other.a[i]).sum()
    }

    /// Group product `self * b`.
    pub fn compose(&self, b: &Self) -> Self {
        let [a0, a1, a2, a3] = self.a;
        let [b0, b1, b2, b3] = b.a;
        Self::from_unit([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        ])
    }

    /// `L(a)` with `L(a) b = a * b`.
    pub fn left_matrix(&self) -> [[f64; 4]; 4] {
        let [a0, a1, a2, a3] = self.a;
        [
            [a0, -a1, -a2, -a3],
            [a1, a0, -a3, a2],
            [a2, a3, a0, -a1],
            [a3, -a2, a1, a0],
        ]
    }

    /// `R(a)` with `R(a) b = b * a^{-1}`.
    pub fn right_matrix(&self) -> [[f64; 4]; 4] {
        let [a0, a1, a2, a3] = self.a;
        [
            [a0, a1, a2, a3],
            [-a1, a0, -a3, a2],
            [-a2, a3, a0, -a1],
            [-a3, -a2, a1, a0],
        ]
    }

    pub fn apply(m: &[[f64; 4]; 4], b: &Self) -> Self {
        let v = std::array::from_fn(|i| (0..4).map(|k| m[i][k] * b.a[k]).sum());
        Self::from_unit(v)
    }

    /// `lambda = a0 - i a3`.
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.a[0], -self.a[3])
    }

    /// `mu = -(a2 + i a1)`.
    pub fn mu(&self) -> Complex64 {
        Complex64::new(-self.a[2], -self.a[1])
    }

    /// The 2x2 unitary `u(a)`.
    pub fn to_matrix(&self) -> [[Complex64; 2]; 2] {
        let (l, m) = (self.lambda(), self.mu());
        [[l, m], [-m.conj(), l.conj()]]
    }

    /// Rotation angle in [0, 2pi]: `a0 = cos(phi/2)`.
    pub fn rotation_angle(&self) -> f64 {
        2.0 * self.a[0].clamp(-1.0, 1.0).acos()
    }

    pub fn from_euler(e: EulerAngles) -> Self {
        let (sb, cb) = (0.5 * e.beta).sin_cos();
        let p = -0.5 * (e.alpha + e.gamma);
        let q = 0.5 * (e.gamma - e.alpha);
        // a0 - i a3 = cb e^{ip},  a2 + i a1 = sb e^{iq}
        Self::from_unit([cb * p.cos(), sb * q.sin(), sb * q.cos(), -cb * p.sin()])
    }

    /// Inverse of `from_euler` on the canonical ranges. At the gimbal points
    /// `beta = 0` and `beta = pi` only one combination of `alpha` and `gamma`
    /// is defined; there `alpha = 0` and `gamma` carries it.
    pub fn to_euler(&self) -> EulerAngles {
        let [a0, a1, a2, a3] = self.a;
        let c = a0.hypot(a3);
        let s = a2.hypot(a1);
        let beta = 2.0 * s.atan2(c);
        if s < GIMBAL_EPS {
            // a0 - i a3 = e^{-i gamma/2}
            let gamma = wrap(-2.0 * (-a3).atan2(a0), 4.0 * PI);
            return EulerAngles {
                alpha: 0.0,
                beta: 0.0,
                gamma,
            };
        }
        if c < GIMBAL_EPS {
            // a2 + i a1 = e^{i gamma/2}
            let gamma = wrap(2.0 * a1.atan2(a2), 4.0 * PI);
            return EulerAngles {
                alpha: 0.0,
                beta: PI,
                gamma,
            };
        }
        let sum = -2.0 * (-a3).atan2(a0);
        let diff = 2.0 * a1.atan2(a2);
        let mut alpha = 0.5 * (sum - diff);
        let mut gamma = 0.5 * (sum + diff);
        // Shifting alpha and gamma together by 2pi leaves the element fixed.
        let k = (alpha / (2.0 * PI)).floor();
        alpha -= 2.0 * PI * k;
        gamma -= 2.0 * PI * k;
        if alpha >= 2.0 * PI {
            alpha -= 2.0 * PI;
            gamma -= 2.0 * PI;
        }
        EulerAngles {
            alpha,
            beta,
            gamma: wrap(gamma, 4.0 * PI),
        }
    }
}

impl Mul for Su2Element {
    type Output = Su2Element;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    let y = x.rem_euclid(period);
    if y >= period {
        0.0
    } else {
        y
    }
}

/// Geodesic distance on the unit 3-sphere, in [0, pi].
pub fn geodesic_distance(a: &Su2Element, b: &Su2Element) -> f64 {
    // atan2 form keeps precision for nearby points.
    let d: [f64; 4] = std::array::from_fn(|i| a.a[i] - b.a[i]);
    let s: [f64; 4] = std::array::from_fn(|i| a.a[i] + b.a[i]);
    let nd = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    let ns = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    2.0 * nd.atan2(ns)
}

/// Midpoint of the minimal great arc from `a` to `b`.
pub fn geodesic_midpoint(a: &Su2Element, b: &Su2Element) -> Result<Su2Element> {
    let gap = 1.0 + a.dot(b);
    if !(gap > ANTIPODAL_CUTOFF) {
        return Err(Error::AntipodalPair { gap });
    }
    let n = (2.0 * gap).sqrt();
    Ok(Su2Element::from_unit(std::array::from_fn(|i| {
        (a.a[i] + b.a[i]) / n
    })))
}

/// The square root `s0(a) = midpoint(e, a)`, the unique root with `a0 > 0`.
pub fn group_sqrt(a: &Su2Element) -> Result<Su2Element> {
    geodesic_midpoint(&Su2Element::IDENTITY, a)
}

/// Density of the Haar pushforward under `k -> k^2` on the open hemisphere
/// `a0 > 0`: `dh = j(k) dk` with `j(k) = 8 a0^2`.
pub fn squaring_jacobian(k: &Su2Element) -> Result<f64> {
    let a0 = k.a0();
    if !(a0 >= 0.0) {
        return Err(Error::Domain(format!(
            "squaring Jacobian needs a0 >= 0, got {a0}"
        )));
    }
    Ok(8.0 * a0 * a0)
}
