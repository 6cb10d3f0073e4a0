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

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use su2_wigner::group::Su2Element;
use su2_wigner::harmonic::*;
use su2_wigner::irreps::{dmatrix_entry, two_m_of};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dist(a: &IrrepBlockState, b: &IrrepBlockState) -> f64 {
    let band = a.two_jmax().max(b.two_jmax());
    let (a, b) = (a.with_band(band), b.with_band(band));
    a.blocks().iter().zip(b.blocks()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn dhat_at_identity_with_trivial_label_is_identity() {
    let s = IrrepBlockState::random(3, &mut rng(1));
    for side in [Side::Left, Side::Right] {
        let t = dhat_apply(&s, &Su2Element::IDENTITY, 0, 0, 0, side).unwrap();
        assert!(dist(&t, &s) < 1e-13);
    }
}

#[test]
fn dhat_moves_a_localized_state() {
    // D^(g; JMN)|g'> = D^J_MN(g') |g g'>, with |g'> replaced by a narrowing bump
    let mut r = rng(2);
    let gp = Su2Element::random(&mut r);
    let g = Su2Element::random(&mut r);
    let (tj, tm, tn) = (1, 1, -1);
    let phase = dmatrix_entry(tj, tm, tn, &gp).unwrap();
    let mut last = f64::INFINITY;
    for (sigma, band) in [(0.5, 16), (0.25, 32), (0.125, 64)] {
        let b = IrrepBlockState::gaussian_bump(&gp, sigma, band).unwrap();
        let got = dhat_apply(&b, &g, tj, tm, tn, Side::Left).unwrap();
        let moved = left_translate(&b, &g);
        let want = IrrepBlockState::from_blocks(
            moved.blocks().iter().map(|m| m.scale(phase)).collect(),
        )
        .unwrap();
        let err = dist(&got, &want);
        assert!(err < 0.7 * last, "sigma {sigma}: {err} after {last}");
        last = err;
    }
    // first order in sigma
    assert!(last < 0.15, "{last}");
}

#[test]
fn dhat_trace_orthogonality_on_a_band() {
    // over the band-limited space, Tr(D^(g; J'M'N')^dagger D^(g; JMN)) = d_L delta / N_J
    let band = 2u32;
    let mut basis = Vec::new();
    for tj in 0..=band {
        for i in 0..=tj as usize {
            for k in 0..=tj as usize {
                basis.push(IrrepBlockState::basis(band, tj, two_m_of(tj, i), two_m_of(tj, k)).unwrap());
            }
        }
    }
    let d = basis.len() as f64;
    let mut r = rng(3);
    let labels: Vec<(u32, i32, i32)> = vec![(0, 0, 0), (1, 1, 1), (1, 1, -1), (1, -1, 1), (2, 0, 2), (2, 2, 2)];
    for side in [Side::Left, Side::Right] {
        let g = Su2Element::random(&mut r);
        for &(ja, ma, na) in &labels {
            for &(jb, mb, nb) in &labels {
                let mut tr = Complex64::new(0.0, 0.0);
                for b in &basis {
                    let x = dhat_apply(b, &g, ja, ma, na, side).unwrap();
                    let y = dhat_apply(b, &g, jb, mb, nb, side).unwrap();
                    tr += x.inner(&y);
                }
                let want = if (ja, ma, na) == (jb, mb, nb) { d / (ja as f64 + 1.0) } else { 0.0 };
                assert!((tr - want).norm() < 1e-10, "{:?} {:?}: {tr}", (ja, ma, na), (jb, mb, nb));
            }
        }
    }
}
