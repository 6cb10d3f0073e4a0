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

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use su2_wigner::baselines::*;
use su2_wigner::group::{
    geodesic_distance, geodesic_midpoint, group_sqrt, squaring_jacobian, Su2Element,
};
use su2_wigner::harmonic::{left_translate, right_translate, DensityEnsemble, IrrepBlockState, Side};
use su2_wigner::irreps::{character, dmatrix, two_m_of};
use su2_wigner::quadrature::{haar_exactness, haar_grid, hemisphere_grid};
use su2_wigner::wigner::*;

type TestFn = Box<dyn Fn(&Su2Element) -> f64>;
type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c1_orthogonality() -> Outcome {
    let t = Instant::now();
    let grid = haar_grid(14, 7, 28).unwrap();
    assert!(haar_exactness(14, 7, 28) >= 6);
    let mut worst: f64 = 0.0;
    let ds: Vec<Vec<_>> = grid.nodes().iter().map(|g| (0..=6).map(|tj| dmatrix(tj, g)).collect()).collect();
    for a in 0..=6u32 {
        for b in 0..=6u32 {
            let (na, nb) = (a as usize + 1, b as usize + 1);
            let mut acc = vec![Complex64::new(0.0, 0.0); na * na * nb * nb];
            for (d, w) in ds.iter().zip(grid.weights()) {
                let (da, db) = (d[a as usize].as_slice(), d[b as usize].as_slice());
                for i in 0..na * na {
                    for k in 0..nb * nb {
                        acc[i * nb * nb + k] += *w * da[i] * db[k].conj();
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
    let secs = t.elapsed().as_secs_f64();
    outcome(
        worst < 1e-10 && secs < 5.0,
        format!("exactness {}, max error {worst:.2e}, {secs:.2} s", grid.exactness_degree()),
    )
}

fn c2_parseval() -> Outcome {
    let mut r = rng(2);
    let grid = haar_grid(10, 5, 20).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..20u32 {
        let s = IrrepBlockState::random(i % 5, &mut r);
        let quad = grid.integrate(|g| s.evaluate(g).norm_sqr());
        worst = worst.max((quad - s.norm_sqr()).abs());
    }
    outcome(worst < 1e-10, format!("20 states, 2 j_max <= 4, max error {worst:.2e}"))
}

fn c3_momentum_marginal() -> Outcome {
    let mut r = rng(3);
    let plan = WignerPlan::new(2, &[0, 1, 2, 3, 4], 0).unwrap();
    let grid = haar_grid(14, 7, 28).unwrap();
    let (mut worst, mut diag): (f64, f64) = (0.0, 0.0);
    for _ in 0..3 {
        let s = IrrepBlockState::random(2, &mut r);
        let rho = DensityEnsemble::pure(s.clone());
        for tj in 0..=4u32 {
            let m = marginal_momentum(&plan, &rho, tj, &grid).unwrap();
            worst = worst.max((&m - &momentum_matrix(&rho, tj)).max_abs());
            let n = tj as i32 + 1;
            for im in 0..n {
                for in_ in 0..n {
                    let i = (im * n + in_) as usize;
                    let c = s.coeff(tj, two_m_of(tj, im as usize), two_m_of(tj, in_ as usize));
                    diag = diag.max((m[(i, i)] - c.norm_sqr()).norm());
                }
            }
        }
    }
    outcome(
        worst < 1e-8 && diag < 1e-8,
        format!("j_max = 1, 2J <= 4: off-diagonal {worst:.2e}, diagonal {diag:.2e}"),
    )
}

fn c4_hermiticity() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for tjm in [1u32, 2, 3] {
        let a = IrrepBlockState::random(tjm, &mut r);
        let b = IrrepBlockState::random(tjm, &mut r);
        let ens = [
            DensityEnsemble::pure(a.clone()),
            DensityEnsemble::new(vec![0.6, 0.4], vec![a, b]).unwrap(),
        ];
        let tjs: Vec<u32> = (0..=4).collect();
        let plan = WignerPlan::new(tjm, &tjs, 4).unwrap();
        for rho in &ens {
            for _ in 0..3 {
                let g = Su2Element::random(&mut r);
                for &tj in &tjs {
                    worst = worst.max(plan.full(rho, &g, tj).unwrap().hermiticity_defect());
                    for side in [Side::Left, Side::Right] {
                        worst = worst.max(plan.tilde(rho, &g, tj, side).unwrap().matrix.hermiticity_defect());
                    }
                    count += 3;
                }
            }
        }
    }
    outcome(worst < 1e-10, format!("{count} blocks, max defect {worst:.2e}"))
}

fn c5_covariance() -> Outcome {
    let mut r = rng(5);
    let plan = WignerPlan::new(1, &[0, 1, 2], 0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let s = IrrepBlockState::random(1, &mut r);
        let h = Su2Element::random(&mut r);
        let x = Su2Element::random(&mut r);
        let rho = DensityEnsemble::pure(s.clone());
        let left = DensityEnsemble::pure(left_translate(&s, &h));
        let right = DensityEnsemble::pure(right_translate(&s, &h));
        for tj in 0..=2u32 {
            let w = plan.full(&rho, &x, tj).unwrap();
            let a = wigner_covariant_transform(&w, Side::Left, &h);
            worst = worst.max(a.max_abs_diff(&plan.full(&left, &(h * x), tj).unwrap()));
            let b = wigner_covariant_transform(&w, Side::Right, &h);
            worst = worst.max(b.max_abs_diff(&plan.full(&right, &(x * h.inverse()), tj).unwrap()));
        }
    }
    outcome(worst < 1e-8, format!("20 pairs, left and right, max error {worst:.2e}"))
}

fn rel_err(a: &WignerBlock, exact: &WignerBlock) -> f64 {
    a.max_abs_diff(exact) / exact.max_abs()
}

fn c6_oracle() -> Outcome {
    let t = Instant::now();
    let mut r = rng(6);
    let outer = haar_grid(10, 6, 20).unwrap();
    let plan = WignerPlan::new(1, &[0, 1, 2], 0).unwrap();
    let epss = [0.1, 0.05, 0.025];
    let tjs = [0u32, 1, 2];
    let mut worst_mid: f64 = 0.0;
    let mut worst_rich: f64 = 0.0;
    let mut monotone = true;
    let mut per_j = [0.0f64; 3];
    for _ in 0..2 {
        let rho = DensityEnsemble::pure(IrrepBlockState::random(1, &mut r));
        let g = Su2Element::random(&mut r);
        let exact: Vec<_> = tjs.iter().map(|&tj| plan.full(&rho, &g, tj).unwrap()).collect();
        let runs: Vec<Vec<WignerBlock>> = epss
            .iter()
            .map(|&e| wigner_bruteforce_mollified(&rho, &g, &tjs, e, &outer, 16).unwrap())
            .collect();
        for (i, ex) in exact.iter().enumerate() {
            let errs: Vec<f64> = runs.iter().map(|run| rel_err(&run[i], ex)).collect();
            monotone &= errs.windows(2).all(|w| w[1] < w[0]);
            worst_mid = worst_mid.max(errs[1]);
            per_j[i] = per_j[i].max(errs[1]);
            // Richardson step on the eps^2 bias, reported only
            let rich = (&runs[2][i].matrix().scale(Complex64::new(4.0 / 3.0, 0.0))
                - &runs[1][i].matrix().scale(Complex64::new(1.0 / 3.0, 0.0)))
                .clone();
            let rich = WignerBlock::new(g, tjs[i], rich).unwrap();
            worst_rich = worst_rich.max(rel_err(&rich, ex));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        worst_mid < 0.02 && monotone && secs < 60.0,
        format!(
            "eps 0.05 rel error by 2J: {:.2}% {:.2}% {:.2}%, monotone {monotone}, \
             Richardson(0.05, 0.025) {:.2}%, {secs:.1} s",
            100.0 * per_j[0],
            100.0 * per_j[1],
            100.0 * per_j[2],
            100.0 * worst_rich
        ),
    )
}

fn c7_position_marginal() -> Outcome {
    let mut r = rng(7);
    let two_jmax = 2;
    let plan = WignerPlan::new(two_jmax, &[], 4 * two_jmax).unwrap();
    let mut strict = true;
    let mut worst4: f64 = 0.0;
    let mut worst2: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for _ in 0..3 {
        let a = IrrepBlockState::random_integer(two_jmax, &mut r);
        let b = IrrepBlockState::random_integer(two_jmax, &mut r);
        let rho = DensityEnsemble::new(vec![0.8, 0.2], vec![a, b]).unwrap();
        for _ in 0..5 {
            let g = Su2Element::random(&mut r);
            let want = rho.kernel(&g, &g);
            let s = marginal_position(&plan, &rho, &g, 4 * two_jmax).unwrap();
            let e2 = (s.at(2 * two_jmax) - want).norm();
            let e4 = (s.at(4 * two_jmax) - want).norm();
            strict &= e4 < e2;
            for tj in two_jmax + 1..=4 * two_jmax {
                tail = tail.max((s.at(tj) - s.at(tj - 1)).norm());
            }
            worst2 = worst2.max(e2);
            worst4 = worst4.max(e4);
        }
    }
    outcome(
        strict && worst4 < 1e-2,
        format!("j_max = 1, 15 nodes: max error {worst2:.2e} at J_sum = 2 j_max, {worst4:.2e} at 4 j_max, strict {strict}, largest term beyond J = j_max {tail:.1e}"),
    )
}

fn c8_overlap() -> Outcome {
    let mut r = rng(8);
    let plan = WignerPlan::new(1, &[], 60).unwrap();
    let grid = haar_grid(6, 3, 12).unwrap();
    let (mut gap, mut agree, mut chosen): (f64, f64, u32) = (0.0, 0.0, 0);
    for _ in 0..2 {
        let mk = |r: &mut ChaCha8Rng| {
            let a = IrrepBlockState::random(1, r);
            let b = IrrepBlockState::random(1, r);
            DensityEnsemble::new(vec![0.7, 0.3], vec![a, b]).unwrap()
        };
        let rho1 = mk(&mut r);
        let rho2 = mk(&mut r);
        let want = rho1.trace_product(&rho2);
        let a = overlap_trace(&plan, &rho1, &rho2, 60, Side::Left, &grid).unwrap();
        let b = overlap_trace(&plan, &rho1, &rho2, 60, Side::Right, &grid).unwrap();
        let Some(at) = a.converged_at(1e-3) else {
            return outcome(false, "series did not meet the convergence rule by 2J = 60".into());
        };
        chosen = chosen.max(at);
        gap = gap.max((a.at(at) - want).abs());
        for tj in 0..=60 {
            agree = agree.max((a.at(tj) - b.at(tj)).abs());
        }
    }
    outcome(
        gap < 1e-3 && agree < 1e-8,
        format!("chosen 2J_sum <= {chosen}, gap {gap:.2e}, variants differ {agree:.2e}"),
    )
}

fn c9_reconstruction() -> Outcome {
    let mut r = rng(9);
    let c = Su2Element::random(&mut r);
    let s = IrrepBlockState::gaussian_bump(&c, 0.8, 6).unwrap();
    let rho = DensityEnsemble::pure(s.clone());
    let max_sum = 80;
    let plan = WignerPlan::new(6, &[], max_sum).unwrap();
    let scale = s.evaluate(&c).norm_sqr();
    let (mut err, mut agree, mut chosen): (f64, f64, u32) = (0.0, 0.0, 0);
    for _ in 0..4 {
        let g1 = Su2Element::random(&mut r);
        let g2 = Su2Element::random(&mut r);
        let want = s.evaluate(&g1) * s.evaluate(&g2).conj();
        let a = reconstruct_kernel(&plan, &rho, &g1, &g2, max_sum, Side::Left).unwrap();
        let b = reconstruct_kernel(&plan, &rho, &g1, &g2, max_sum, Side::Right).unwrap();
        let Some(at) = a.converged_at(1e-2 * scale) else {
            return outcome(false, format!("no convergence by 2J = {max_sum}"));
        };
        chosen = chosen.max(at);
        err = err.max((a.at(at) - want).norm() / scale);
        for tj in 0..=max_sum {
            agree = agree.max((a.at(tj) - b.at(tj)).norm());
        }
    }
    outcome(
        err < 1e-2 && agree < 1e-6,
        format!("bump sigma 0.8, 2 j_max = 6: chosen 2J_sum <= {chosen}, error {err:.2e} of peak, variants differ {agree:.2e}"),
    )
}

fn c10_cartesian() -> Outcome {
    let st = CartesianState::oscillator(1, 8.0, 1024).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=20 {
        for k in 0..=20 {
            let q = -3.0 + 0.3 * i as f64 + 0.013;
            let p = -3.0 + 0.3 * k as f64;
            let want = 2.0 / PI * (q * q + p * p - 0.5) * (-q * q - p * p).exp();
            worst = worst.max((cartesian_wigner(&st, q, p).unwrap() - want).abs());
        }
    }
    let gs = CartesianState::gaussian(0.5, -1.0, 0.8, 8.0, 512).unwrap();
    let mut min = f64::INFINITY;
    for i in 0..512 {
        for k in -60..=60 {
            min = min.min(cartesian_wigner(&gs, gs.q(i), 0.1 * k as f64).unwrap());
        }
    }
    // marginals on the exact lattice
    let n = st.len();
    let dp = st.dp();
    let mut marg: f64 = 0.0;
    for i in (0..n).step_by(7) {
        let pos: f64 = (0..n as i64).map(|k| cartesian_wigner(&st, st.q(i), (k - n as i64 / 2) as f64 * dp).unwrap() * dp).sum();
        marg = marg.max((pos - st.samples()[i].norm_sqr()).abs());
    }
    for k in -20..=20 {
        let p = 0.17 * k as f64;
        let mom: f64 = (0..n).map(|i| cartesian_wigner(&st, st.q(i), p).unwrap() * st.dq()).sum();
        marg = marg.max((mom - st.momentum_amplitude(p).norm_sqr()).abs());
    }
    outcome(
        worst < 1e-6 && min >= -1e-12 && marg < 1e-6,
        format!("closed form {worst:.2e}, Gaussian min {min:.2e}, marginals {marg:.2e}"),
    )
}

fn c11_so2() -> Outcome {
    let mut exact: f64 = 0.0;
    let st = AngleState::eigenstate(6, 2).unwrap();
    for i in 0..40 {
        let th = -PI + 0.157 * i as f64;
        for m in -8..=8 {
            let want = if m == 2 { 1.0 / (2.0 * PI) } else { 0.0 };
            exact = exact.max((angle_wigner(&st, th, m) - want).abs());
        }
    }
    let mut r = rng(11);
    let mut duality: f64 = 0.0;
    let mut general: f64 = 0.0;
    for _ in 0..3 {
        let s = AngleState::random(4, None, &mut r);
        for (n, tau) in [(1, 0.7), (-2, -1.9), (3, 2.4), (0, 0.3)] {
            let lhs = weyl_expectation(&s, n, tau);
            let rhs = weyl_phase_space(&s, n, tau, 4000).unwrap();
            duality = duality.max((lhs - rhs).norm());
        }
        for i in 0..10 {
            let th = -3.0 + 0.6 * i as f64;
            for m in -5..=5 {
                let a = so2_general_wigner(&s, th, m).unwrap();
                general = general.max((a - 2.0 * PI * angle_wigner(&s, th, m)).abs());
            }
        }
    }
    outcome(
        exact < 1e-14 && duality < 1e-6 && general < 1e-10,
        format!("eigenstate {exact:.1e}, Weyl duality {duality:.2e}, general route {general:.2e}"),
    )
}

fn c12_midpoint() -> Outcome {
    let mut r = rng(12);
    let close = |a: &Su2Element, b: &Su2Element| {
        let (x, y) = (a.components(), b.components());
        (0..4).map(|i| (x[i] - y[i]).abs()).fold(0.0, f64::max)
    };
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 1000 {
        let a = Su2Element::random(&mut r);
        let b = Su2Element::random(&mut r);
        if 1.0 + a.dot(&b) < 1e-3 {
            continue;
        }
        let g = Su2Element::random(&mut r);
        let h = Su2Element::random(&mut r);
        let s = geodesic_midpoint(&a, &b).unwrap();
        worst = worst.max(close(&s, &geodesic_midpoint(&b, &a).unwrap()));
        worst = worst.max(close(&a, &geodesic_midpoint(&a, &a).unwrap()));
        let moved = geodesic_midpoint(&(g * a * h.inverse()), &(g * b * h.inverse())).unwrap();
        worst = worst.max(close(&moved, &(g * s * h.inverse())));
        let d = geodesic_distance(&a, &b);
        worst = worst.max((geodesic_distance(&a, &s) - d / 2.0).abs());
        let s0 = group_sqrt(&a).unwrap();
        worst = worst.max(close(&(s0 * a), &(a * s0)));
        worst = worst.max(close(&(s0 * s0), &a));
        n += 1;
    }
    // int dh f(h) = int_{a0 > 0} dk j(k) f(k^2)
    let haar = haar_grid(16, 8, 32).unwrap();
    let hemi = hemisphere_grid(12).unwrap();
    let c = Su2Element::random(&mut r);
    let tests: Vec<TestFn> = vec![
        Box::new(|_| 1.0),
        Box::new(|g| character(1, g)),
        Box::new(|g| character(2, g)),
        Box::new(move |g| (-geodesic_distance(g, &c).powi(2)).exp()),
        Box::new(|g| {
            let a = g.components();
            (a[0] + 0.3 * a[1]).powi(2) * (1.0 + a[3])
        }),
    ];
    let mut push: f64 = 0.0;
    for f in &tests {
        let lhs = haar.integrate(|h| f(h));
        // the hemisphere weights carry 8 a0^2; divide it out to get plain dk
        let rhs: f64 = hemi
            .iter()
            .map(|(k, w)| {
                let dk = w / (8.0 * k.a0() * k.a0());
                dk * squaring_jacobian(k).unwrap() * f(&(*k * *k))
            })
            .sum();
        push = push.max((lhs - rhs).abs());
    }
    outcome(
        worst < 1e-12 && push < 1e-6,
        format!("{n} samples, axioms {worst:.2e}, pushforward {push:.2e}"),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("D-matrix orthogonality", c1_orthogonality),
        ("Parseval", c2_parseval),
        ("momentum marginal", c3_momentum_marginal),
        ("Hermiticity", c4_hermiticity),
        ("covariance", c5_covariance),
        ("mollified oracle", c6_oracle),
        ("position marginal", c7_position_marginal),
        ("trace overlap", c8_overlap),
        ("reconstruction", c9_reconstruction),
        ("Cartesian baseline", c10_cartesian),
        ("SO(2) baseline", c11_so2),
        ("midpoint axioms", c12_midpoint),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let o = f();
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{failed} of 12 criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
