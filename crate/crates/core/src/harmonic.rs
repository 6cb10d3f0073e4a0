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

//! The regular representation of SU(2): band-limited wavefunctions stored as
//! Peter-Weyl coefficient blocks, translations, multiplication operators,
//! Fourier projectors and mixed-state ensembles.
//!
//! A state with band limit `j_max` is `psi(g) = sum_J sqrt(N_J) sum_{MN} psi_{JMN} D^J_{MN}(g)`,
//! with one `N_J x N_J` block for every `J = 0, 1/2, ..., j_max`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group::Su2Element;
use crate::irreps::{cg, dmatrix, index_of, two_m_of, IrrepLabel};
use crate::linalg::CMatrix;
use crate::quadrature::QuadratureGrid;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct IrrepBlockState {
    two_jmax: u32,
    blocks: Vec<CMatrix>,
}

impl IrrepBlockState {
    pub fn zeros(two_jmax: u32) -> Self {
        Self {
            two_jmax,
            blocks: (0..=two_jmax)
                .map(|tj| CMatrix::zeros(tj as usize + 1))
                .collect(),
        }
    }

    /// `blocks[k]` must be `(k+1) x (k+1)`.
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Dimension(
                "a state needs at least the J = 0 block".into(),
            ));
        }
        for (k, b) in blocks.iter().enumerate() {
            if b.dim() != k + 1 {
                return Err(Error::Dimension(format!(
                    "block 2J = {k} has dimension {}",
                    b.dim()
                )));
            }
        }
        Ok(Self {
            two_jmax: blocks.len() as u32 - 1,
            blocks,
        })
    }

    /// The basis state `|JMN>`.
    pub fn basis(two_jmax: u32, two_j: u32, two_m: i32, two_n: i32) -> Result<Self> {
        crate::irreps::check_index(two_j, two_m)?;
        crate::irreps::check_index(two_j, two_n)?;
        if two_j > two_jmax {
            return Err(Error::Index { two_j, two_m });
        }
        let mut s = Self::zeros(two_jmax);
        s.blocks[two_j as usize][(index_of(two_j, two_m), index_of(two_j, two_n))] =
            Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Normalized state with i.i.d. Gaussian coefficients on the selected blocks.
    pub fn random_filtered<R: Rng + ?Sized>(
        two_jmax: u32,
        rng: &mut R,
        keep: impl Fn(u32) -> bool,
    ) -> Self {
        let mut s = Self::zeros(two_jmax);
        for tj in 0..=two_jmax {
            if !keep(tj) {
                continue;
            }
            for z in s.blocks[tj as usize].as_mut_slice() {
                *z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
        }
        s.normalize();
        s
    }

    pub fn random<R: Rng + ?Sized>(two_jmax: u32, rng: &mut R) -> Self {
        Self::random_filtered(two_jmax, rng, |_| true)
    }

    /// Only integer `J` (even `two_j`) blocks populated.
    pub fn random_integer<R: Rng + ?Sized>(two_jmax: u32, rng: &mut R) -> Self {
        Self::random_filtered(two_jmax, rng, |tj| tj % 2 == 0)
    }

    /// Band-limited normalized bump `psi(g) prop. sum_J f_J chi^J(c^{-1} g)`, the
    /// truncated character series of `exp(-d(g, c)^2 / (2 sigma^2))`.
    pub fn gaussian_bump(center: &Su2Element, sigma: f64, two_jmax: u32) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!("bump width {sigma}")));
        }
        let top = (12.0 * sigma).min(std::f64::consts::PI);
        let gl = crate::quadrature::gauss_legendre(64 + 4 * two_jmax as usize)?;
        let mut blocks = Vec::with_capacity(two_jmax as usize + 1);
        for tj in 0..=two_jmax {
            let n = tj as f64 + 1.0;
            let fj: f64 = gl
                .iter()
                .map(|&(x, w)| {
                    let psi = 0.5 * top * (x + 1.0);
                    0.5 * top
                        * w
                        * psi.sin()
                        * (n * psi).sin()
                        * (-psi * psi / (2.0 * sigma * sigma)).exp()
                })
                .sum::<f64>()
                * (2.0 / std::f64::consts::PI);
            blocks.push(
                dmatrix(tj, center)
                    .conj()
                    .scale(Complex64::new(fj / n.sqrt(), 0.0)),
            );
        }
        let mut s = Self { two_jmax, blocks };
        s.normalize();
        Ok(s)
    }

    pub fn two_jmax(&self) -> u32 {
        self.two_jmax
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, two_j: u32) -> Option<&CMatrix> {
        self.blocks.get(two_j as usize)
    }

    pub fn block_mut(&mut self, two_j: u32) -> Option<&mut CMatrix> {
        self.blocks.get_mut(two_j as usize)
    }

    /// `psi_{JMN}`, zero outside the band.
    pub fn coeff(&self, two_j: u32, two_m: i32, two_n: i32) -> Complex64 {
        match self.blocks.get(two_j as usize) {
            Some(b) => b[(index_of(two_j, two_m), index_of(two_j, two_n))],
            None => ZERO,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Scales to unit norm; the zero state is left alone.
    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let s = Complex64::new(1.0 / n, 0.0);
            for b in &mut self.blocks {
                *b = b.scale(s);
            }
        }
    }

    /// Pads or truncates to a new band limit.
    pub fn with_band(&self, two_jmax: u32) -> Self {
        let mut out = Self::zeros(two_jmax);
        for tj in 0..=two_jmax.min(self.two_jmax) {
            out.blocks[tj as usize] = self.blocks[tj as usize].clone();
        }
        out
    }

    /// `<self|other> = sum conj(self) * other`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                a.as_slice()
                    .iter()
                    .zip(b.as_slice())
                    .map(|(x, y)| x.conj() * y)
                    .sum::<Complex64>()
            })
            .sum()
    }

    /// `psi(g)`.
    pub fn evaluate(&self, g: &Su2Element) -> Complex64 {
        let ds: Vec<CMatrix> = (0..=self.two_jmax).map(|tj| dmatrix(tj, g)).collect();
        self.evaluate_with(&ds)
    }

    /// `psi(g)` from precomputed `ds[2J] = D^J(g)`, which may extend past the band.
    pub fn evaluate_with(&self, ds: &[CMatrix]) -> Complex64 {
        let mut v = ZERO;
        for (tj, b) in self.blocks.iter().enumerate() {
            let dot: Complex64 = b
                .as_slice()
                .iter()
                .zip(ds[tj].as_slice())
                .map(|(x, y)| x * y)
                .sum();
            v += dot * ((tj + 1) as f64).sqrt();
        }
        v
    }

    /// Whether every coefficient in an unpopulated parity sector is zero.
    pub fn is_integer_spin(&self) -> bool {
        self.blocks
            .iter()
            .enumerate()
            .all(|(tj, b)| tj % 2 == 0 || b.norm_sqr() == 0.0)
    }

    fn map_blocks(&self, f: impl Fn(u32, &CMatrix) -> CMatrix) -> Self {
        Self {
            two_jmax: self.two_jmax,
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(tj, b)| f(tj as u32, b))
                .collect(),
        }
    }

    fn scaled_add(&mut self, other: &Self, s: Complex64) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            for (x, y) in a.as_mut_slice().iter_mut().zip(b.as_slice()) {
                *x += s * y;
            }
        }
    }
}

/// `psi(g)` at every grid node.
pub fn synthesize(state: &IrrepBlockState, grid: &QuadratureGrid) -> Vec<Complex64> {
    grid.nodes().iter().map(|g| state.evaluate(g)).collect()
}

/// `psi(g)` at one point.
pub fn synthesize_at(state: &IrrepBlockState, g: &Su2Element) -> Complex64 {
    state.evaluate(g)
}

/// Peter-Weyl coefficients of grid values `values[i] = f(node_i)`.
pub fn analyze(
    values: &[Complex64],
    grid: &QuadratureGrid,
    two_jmax: u32,
) -> Result<IrrepBlockState> {
    grid.require(2 * two_jmax)?;
    if values.len() != grid.len() {
        return Err(Error::Dimension(format!(
            "{} values for {} nodes",
            values.len(),
            grid.len()
        )));
    }
    let mut s = IrrepBlockState::zeros(two_jmax);
    for ((g, w), f) in grid.iter().zip(values) {
        for tj in 0..=two_jmax {
            let d = dmatrix(tj, g);
            let c = w * ((tj + 1) as f64).sqrt() * f;
            for (x, y) in s.blocks[tj as usize]
                .as_mut_slice()
                .iter_mut()
                .zip(d.as_slice())
            {
                *x += y.conj() * c;
            }
        }
    }
    Ok(s)
}

/// `analyze` of a function evaluated at the nodes.
pub fn analyze_fn<F: FnMut(&Su2Element) -> Complex64>(
    mut f: F,
    grid: &QuadratureGrid,
    two_jmax: u32,
) -> Result<IrrepBlockState> {
    let values: Vec<Complex64> = grid.nodes().iter().map(&mut f).collect();
    analyze(&values, grid, two_jmax)
}

pub fn inner_product(a: &IrrepBlockState, b: &IrrepBlockState) -> Complex64 {
    a.inner(b)
}

pub fn norm(a: &IrrepBlockState) -> f64 {
    a.norm()
}

/// `(V(g1) psi)(g) = psi(g1^{-1} g)`: each block becomes `conj(D^J(g1)) psi^(J)`.
pub fn left_translate(state: &IrrepBlockState, g1: &Su2Element) -> IrrepBlockState {
    state.map_blocks(|tj, b| dmatrix(tj, g1).conj().matmul(b))
}

/// `(V~(g2) psi)(g) = psi(g g2)`: each block becomes `psi^(J) conj(D^J(g2^{-1}))`.
pub fn right_translate(state: &IrrepBlockState, g2: &Su2Element) -> IrrepBlockState {
    state.map_blocks(|tj, b| b.matmul(&dmatrix(tj, &g2.inverse()).conj()))
}

/// `(U_{JMN} psi)(g) = D^J_{MN}(g) psi(g)`; the band grows by `J`.
pub fn u_multiply(
    state: &IrrepBlockState,
    two_j: u32,
    two_m: i32,
    two_n: i32,
) -> Result<IrrepBlockState> {
    crate::irreps::check_index(two_j, two_m)?;
    crate::irreps::check_index(two_j, two_n)?;
    let mut out = IrrepBlockState::zeros(state.two_jmax + two_j);
    for tk in 0..=state.two_jmax {
        let b = &state.blocks[tk as usize];
        let nk = tk as usize + 1;
        for i in 0..nk {
            let mp = two_m_of(tk, i);
            for k in 0..nk {
                let np = two_m_of(tk, k);
                let c = b[(i, k)];
                if c == ZERO {
                    continue;
                }
                let (mm, nn) = (two_m + mp, two_n + np);
                let lo = (two_j as i32 - tk as i32).unsigned_abs();
                let mut tl = lo;
                while tl <= two_j + tk {
                    if mm.unsigned_abs() <= tl && nn.unsigned_abs() <= tl {
                        let coef = cg(two_j, two_m, tk, mp, tl, mm)
                            * cg(two_j, two_n, tk, np, tl, nn)
                            * ((tk as f64 + 1.0) / (tl as f64 + 1.0)).sqrt();
                        out.blocks[tl as usize][(index_of(tl, mm), index_of(tl, nn))] += c * coef;
                    }
                    tl += 2;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `D^(g; JMN) = V(g) U_{JMN}` (left) or `V~(g) U_{JMN}` (right).
pub fn dhat_apply(
    state: &IrrepBlockState,
    g: &Su2Element,
    two_j: u32,
    two_m: i32,
    two_n: i32,
    side: Side,
) -> Result<IrrepBlockState> {
    let u = u_multiply(state, two_j, two_m, two_n)?;
    Ok(match side {
        Side::Left => left_translate(&u, g),
        Side::Right => right_translate(&u, g),
    })
}

/// Fourier projectors by quadrature:
/// `P_{JMN} = N_J int dg D^J_{MN}(g) V(g)` (left) and
/// `P~_{JMN} = N_J int dg D^J_{MN}(g^{-1}) V~(g)` (right).
pub fn fourier_projector(
    state: &IrrepBlockState,
    two_j: u32,
    two_m: i32,
    two_n: i32,
    side: Side,
    grid: &QuadratureGrid,
) -> Result<IrrepBlockState> {
    crate::irreps::check_index(two_j, two_m)?;
    crate::irreps::check_index(two_j, two_n)?;
    grid.require(2 * state.two_jmax.max(two_j))?;
    let (i, k) = (index_of(two_j, two_m), index_of(two_j, two_n));
    let nj = two_j as f64 + 1.0;
    let mut out = IrrepBlockState::zeros(state.two_jmax);
    for (g, w) in grid.iter() {
        let (coef, moved) = match side {
            Side::Left => (dmatrix(two_j, g)[(i, k)], left_translate(state, g)),
            Side::Right => (
                dmatrix(two_j, &g.inverse())[(i, k)],
                right_translate(state, g),
            ),
        };
        out.scaled_add(&moved, coef * (w * nj));
    }
    Ok(out)
}

/// A mixed state `rho = sum_i w_i |psi_i><psi_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEnsemble {
    weights: Vec<f64>,
    states: Vec<IrrepBlockState>,
    two_jmax: u32,
}

impl DensityEnsemble {
    /// Weights must be positive; they are rescaled to sum to one. Component
    /// states are padded to a common band.
    pub fn new(weights: Vec<f64>, states: Vec<IrrepBlockState>) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::Dimension("need one weight per component".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::Domain("ensemble weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        let two_jmax = states.iter().map(|s| s.two_jmax).max().unwrap_or(0);
        Ok(Self {
            weights: weights.iter().map(|w| w / total).collect(),
            states: states.iter().map(|s| s.with_band(two_jmax)).collect(),
            two_jmax,
        })
    }

    pub fn pure(state: IrrepBlockState) -> Self {
        let two_jmax = state.two_jmax;
        Self {
            weights: vec![1.0],
            states: vec![state],
            two_jmax,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[IrrepBlockState] {
        &self.states
    }

    pub fn components(&self) -> impl Iterator<Item = (f64, &IrrepBlockState)> {
        self.weights.iter().copied().zip(self.states.iter())
    }

    pub fn two_jmax(&self) -> u32 {
        self.two_jmax
    }

    /// `<x|rho|y> = sum_i w_i psi_i(x) conj(psi_i(y))`.
    pub fn kernel(&self, x: &Su2Element, y: &Su2Element) -> Complex64 {
        self.components()
            .map(|(w, s)| w * s.evaluate(x) * s.evaluate(y).conj())
            .sum()
    }

    /// `Tr(rho)`, one for normalized components.
    pub fn trace(&self) -> f64 {
        self.components().map(|(w, s)| w * s.norm_sqr()).sum()
    }

    /// `Tr(self * other)` in coefficient space.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let mut t = 0.0;
        for (w, a) in self.components() {
            for (v, b) in other.components() {
                let bb = b.with_band(a.two_jmax.max(b.two_jmax));
                let aa = a.with_band(bb.two_jmax);
                t += w * v * aa.inner(&bb).norm_sqr();
            }
        }
        t
    }

    /// `<JM'N'|rho|JMN> = sum_i w_i psi_{i,JM'N'} conj(psi_{i,JMN})`.
    pub fn matrix_element(
        &self,
        two_j: u32,
        (tmp, tnp): (i32, i32),
        (tm, tn): (i32, i32),
    ) -> Complex64 {
        self.components()
            .map(|(w, s)| w * s.coeff(two_j, tmp, tnp) * s.coeff(two_j, tm, tn).conj())
            .sum()
    }

    /// Applies `f` to every component.
    pub fn map_states(&self, f: impl Fn(&IrrepBlockState) -> IrrepBlockState) -> Self {
        let states: Vec<IrrepBlockState> = self.states.iter().map(f).collect();
        let two_jmax = states.iter().map(|s| s.two_jmax).max().unwrap_or(0);
        Self {
            weights: self.weights.clone(),
            states,
            two_jmax,
        }
    }
}

/// All spins present in a label range, as `IrrepLabel`s.
pub fn labels(two_jmax: u32) -> impl Iterator<Item = IrrepLabel> {
    (0..=two_jmax).map(IrrepLabel::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::haar_grid;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid4() -> QuadratureGrid {
        haar_grid(10, 5, 20).unwrap()
    }

    fn max_diff(a: &IrrepBlockState, b: &IrrepBlockState) -> f64 {
        let n = a.two_jmax.max(b.two_jmax);
        let (a, b) = (a.with_band(n), b.with_band(n));
        a.blocks
            .iter()
            .zip(&b.blocks)
            .map(|(x, y)| (x - y).max_abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn basis_synthesis_matches_dmatrix() {
        let g = Su2Element::random(&mut ChaCha8Rng::seed_from_u64(2));
        let s = IrrepBlockState::basis(3, 2, 0, -2).unwrap();
        let want = 3f64.sqrt() * dmatrix(2, &g)[(1, 2)];
        assert!((s.evaluate(&g) - want).norm() < 1e-14);
        assert_eq!(IrrepBlockState::zeros(2).evaluate(&g), ZERO);
    }

    #[test]
    fn analyze_examples() {
        let grid = grid4();
        let one = analyze_fn(|_| Complex64::new(1.0, 0.0), &grid, 2).unwrap();
        assert!((one.coeff(0, 0, 0) - 1.0).norm() < 1e-13);
        assert!(one.norm_sqr() - 1.0 < 1e-13);
        let s = analyze_fn(|g| 2f64.sqrt() * dmatrix(1, g)[(0, 0)], &grid, 2).unwrap();
        assert!((s.coeff(1, 1, 1) - 1.0).norm() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let coarse = haar_grid(4, 2, 8).unwrap();
        assert!(matches!(
            analyze_fn(|_| ZERO, &coarse, 2),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn parseval_and_roundtrip() {
        let grid = grid4();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let s = IrrepBlockState::random(4, &mut rng);
            let vals = synthesize(&s, &grid);
            let q: f64 = vals
                .iter()
                .zip(grid.weights())
                .map(|(v, w)| w * v.norm_sqr())
                .sum();
            assert!((q - s.norm_sqr()).abs() < 1e-10);
            let back = analyze(&vals, &grid, 4).unwrap();
            assert!(max_diff(&back, &s) < 1e-10);
        }
    }

    #[test]
    fn translations_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = IrrepBlockState::random(3, &mut rng);
        let (g1, g2) = (Su2Element::random(&mut rng), Su2Element::random(&mut rng));
        let l = left_translate(&s, &g1);
        let r = right_translate(&s, &g2);
        for _ in 0..50 {
            let g = Su2Element::random(&mut rng);
            assert!((l.evaluate(&g) - s.evaluate(&(g1.inverse() * g))).norm() < 1e-10);
            assert!((r.evaluate(&g) - s.evaluate(&(g * g2))).norm() < 1e-10);
        }
        assert!((l.norm() - 1.0).abs() < 1e-12 && (r.norm() - 1.0).abs() < 1e-12);
        let lr = right_translate(&l, &g2);
        let rl = left_translate(&r, &g1);
        assert!(max_diff(&lr, &rl) < 1e-12);
        assert!(max_diff(&left_translate(&s, &Su2Element::IDENTITY), &s) < 1e-15);
    }

    #[test]
    fn u_multiply_on_basis_matches_analysis() {
        let grid = haar_grid(14, 7, 28).unwrap();
        let s = IrrepBlockState::basis(2, 2, 2, 0).unwrap();
        let u = u_multiply(&s, 1, 1, -1).unwrap();
        let want = analyze_fn(|g| dmatrix(1, g)[(0, 1)] * s.evaluate(g), &grid, 3).unwrap();
        assert!(max_diff(&u, &want) < 1e-12);
        let id = u_multiply(&s, 0, 0, 0).unwrap();
        assert!(max_diff(&id, &s) < 1e-15);
    }

    #[test]
    fn projector_action_laws() {
        let grid = grid4();
        // P_{J'M'N'} |JMN> = d_{J'J} d_{N'M} |J M' N>
        let ket = IrrepBlockState::basis(2, 2, 2, 0).unwrap();
        let p = fourier_projector(&ket, 2, -2, 2, Side::Left, &grid).unwrap();
        assert!(max_diff(&p, &IrrepBlockState::basis(2, 2, -2, 0).unwrap()) < 1e-12);
        let z = fourier_projector(&ket, 1, 1, 1, Side::Left, &grid).unwrap();
        assert!(z.norm() < 1e-12);
        // P~_{J'M'N'} |JMN> = d_{J'J} d_{M'N} |J M N'>
        let p = fourier_projector(&ket, 2, 0, -2, Side::Right, &grid).unwrap();
        assert!(max_diff(&p, &IrrepBlockState::basis(2, 2, 2, -2).unwrap()) < 1e-12);
    }

    #[test]
    fn projector_completeness_and_composition() {
        let grid = grid4();
        let s = IrrepBlockState::random(2, &mut ChaCha8Rng::seed_from_u64(8));
        let mut total = IrrepBlockState::zeros(2);
        for tj in 0..=2u32 {
            for tm in IrrepLabel::new(tj).two_ms() {
                let p = fourier_projector(&s, tj, tm, tm, Side::Left, &grid).unwrap();
                total.scaled_add(&p, Complex64::new(1.0, 0.0));
            }
        }
        assert!(max_diff(&total, &s) < 1e-11);
        // P_{J M'N'} P_{J M N} = d_{N'M} P_{J M'N}
        let once = fourier_projector(&s, 2, 0, 2, Side::Left, &grid).unwrap();
        let twice = fourier_projector(&once, 2, -2, 0, Side::Left, &grid).unwrap();
        let direct = fourier_projector(&s, 2, -2, 2, Side::Left, &grid).unwrap();
        assert!(max_diff(&twice, &direct) < 1e-11);
    }

    #[test]
    fn ensemble_kernel_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = DensityEnsemble::new(
            vec![0.3, 0.7],
            vec![
                IrrepBlockState::random(1, &mut rng),
                IrrepBlockState::random(2, &mut rng),
            ],
        )
        .unwrap();
        assert!((e.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for _ in 0..20 {
            let (x, y) = (Su2Element::random(&mut rng), Su2Element::random(&mut rng));
            assert!((e.kernel(&x, &y) - e.kernel(&y, &x).conj()).norm() < 1e-14);
        }
        assert!(DensityEnsemble::new(vec![-1.0], vec![IrrepBlockState::zeros(0)]).is_err());
    }

    fn arb_state(two_jmax: u32) -> impl Strategy<Value = IrrepBlockState> {
        any::<u64>()
            .prop_map(move |s| IrrepBlockState::random(two_jmax, &mut ChaCha8Rng::seed_from_u64(s)))
    }

    fn arb_element() -> impl Strategy<Value = Su2Element> {
        any::<u64>().prop_map(|s| Su2Element::random(&mut ChaCha8Rng::seed_from_u64(s)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn translation_is_a_representation(s in arb_state(3), g1 in arb_element(), g2 in arb_element()) {
            let a = left_translate(&left_translate(&s, &g2), &g1);
            let b = left_translate(&s, &(g1 * g2));
            prop_assert!(max_diff(&a, &b) < 1e-12);
            let a = right_translate(&right_translate(&s, &g2), &g1);
            let b = right_translate(&s, &(g1 * g2));
            prop_assert!(max_diff(&a, &b) < 1e-12);
        }

        #[test]
        fn u_multiply_pointwise(s in arb_state(2), g in arb_element(), tj in 0u32..=3, im in 0usize..4, in_ in 0usize..4) {
            let (tm, tn) = (two_m_of(tj, im % (tj as usize + 1)), two_m_of(tj, in_ % (tj as usize + 1)));
            let u = u_multiply(&s, tj, tm, tn).unwrap();
            let want = crate::irreps::dmatrix_entry(tj, tm, tn, &g).unwrap() * s.evaluate(&g);
            prop_assert!((u.evaluate(&g) - want).norm() < 1e-9);
        }

        #[test]
        fn u_operators_commute(s in arb_state(2)) {
            let a = u_multiply(&u_multiply(&s, 1, 1, -1).unwrap(), 2, 0, 2).unwrap();
            let b = u_multiply(&u_multiply(&s, 2, 0, 2).unwrap(), 1, 1, -1).unwrap();
            prop_assert!(max_diff(&a, &b) < 1e-12);
        }

        #[test]
        fn inner_product_is_quadrature(a in arb_state(2), b in arb_state(2)) {
            let grid = haar_grid(6, 3, 12).unwrap();
            let q: Complex64 = grid.iter().map(|(g, w)| w * a.evaluate(g).conj() * b.evaluate(g)).sum();
            prop_assert!((q - a.inner(&b)).norm() < 1e-10);
        }
    }
}
