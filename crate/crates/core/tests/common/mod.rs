//! Independent reference computations for the integration tests. Nothing
//! here calls the library's geometry kernels.

#![allow(dead_code)]

use gamecond::{MatrixGame, StrategyProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn pennies() -> MatrixGame {
    MatrixGame::new(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap()
}

pub fn rps() -> MatrixGame {
    MatrixGame::new(&[
        vec![0.0, -1.0, 1.0],
        vec![1.0, 0.0, -1.0],
        vec![-1.0, 1.0, 0.0],
    ])
    .unwrap()
}

pub fn constant() -> MatrixGame {
    MatrixGame::new(&[vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in `[-1, 1]`.
pub fn random_game(rng: &mut ChaCha8Rng, m: usize, n: usize) -> MatrixGame {
    let payoff = (0..m * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    MatrixGame::from_row_major(m, n, payoff).unwrap()
}

/// Random point of the simplex; a third of the time on a random face.
pub fn random_simplex_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..d).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    if rng.gen_bool(1.0 / 3.0) {
        let keep = rng.gen_range(0..d);
        for (j, c) in v.iter_mut().enumerate() {
            if j != keep && rng.gen_bool(0.5) {
                *c = 0.0;
            }
        }
    }
    let s: f64 = v.iter().sum();
    v.iter().map(|c| c / s).collect()
}

pub fn random_profile(rng: &mut ChaCha8Rng, m: usize, n: usize) -> StrategyProfile {
    StrategyProfile::new(random_simplex_point(rng, m), random_simplex_point(rng, n)).unwrap()
}

/// `max { x'Av - u'Ay : u, v pure }`, literally over all pairs.
pub fn brute_force_gap(game: &MatrixGame, w: &StrategyProfile) -> f64 {
    let (m, n) = (game.m(), game.n());
    let mut best = f64::NEG_INFINITY;
    for v in 0..n {
        let xav: f64 = (0..m).map(|k| w.x[k] * game.entry(k, v)).sum();
        for u in 0..m {
            let uay: f64 = (0..n).map(|i| game.entry(u, i) * w.y[i]).sum();
            best = best.max(xav - uay);
        }
    }
    best
}

/// `min_x max_i a_i.x` over the grid of step `1/steps` (any `m`, small).
pub fn grid_minimax(game: &MatrixGame, steps: usize) -> (f64, Vec<f64>) {
    let m = game.m();
    let mut best = (f64::INFINITY, vec![]);
    let mut parts = vec![0usize; m];
    fn rec(
        game: &MatrixGame,
        steps: usize,
        parts: &mut Vec<usize>,
        at: usize,
        left: usize,
        best: &mut (f64, Vec<f64>),
    ) {
        let m = parts.len();
        if at + 1 == m {
            parts[at] = left;
            let x: Vec<f64> = parts.iter().map(|&p| p as f64 / steps as f64).collect();
            let v = (0..game.n())
                .map(|i| (0..m).map(|k| x[k] * game.entry(k, i)).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            if v < best.0 {
                *best = (v, x);
            }
            return;
        }
        for p in 0..=left {
            parts[at] = p;
            rec(game, steps, parts, at + 1, left - p, best);
        }
    }
    rec(game, steps, &mut parts, 0, steps, &mut best);
    best
}

/// Euclidean projection onto the unit simplex by bisection on the shift.
pub fn simplex_projection_bisect(v: &[f64]) -> Vec<f64> {
    let (mut lo, mut hi) = (
        v.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0,
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let s: f64 = v.iter().map(|c| (c - mid).max(0.0)).sum();
        if s > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    v.iter().map(|c| (c - t).max(0.0)).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis of the span of `lines` by modified Gram-Schmidt.
pub fn orthonormal(lines: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for l in lines {
        let mut v = l.clone();
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let nv = dot(&v, &v).sqrt();
        if nv > 1e-12 {
            basis.push(v.iter().map(|x| x / nv).collect());
        }
    }
    basis
}

pub fn remove_span(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut out = v.to_vec();
    for b in basis {
        let c = dot(&out, b);
        out.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    out
}

/// Distance from the origin to `co(points) + span(lines) + cone(rays)` by
/// accelerated projected gradient with adaptive restart. The span part is
/// removed first; the remaining variables are simplex weights and
/// nonnegative ray weights.
pub fn projected_gradient_min_norm(
    points: &[Vec<f64>],
    lines: &[Vec<f64>],
    rays: &[Vec<f64>],
    iterations: usize,
) -> f64 {
    let basis = orthonormal(lines);
    let p: Vec<Vec<f64>> = points.iter().map(|v| remove_span(v, &basis)).collect();
    let r: Vec<Vec<f64>> = rays.iter().map(|v| remove_span(v, &basis)).collect();
    let d = points[0].len();
    let (np, nr) = (p.len(), r.len());
    let combine = |lam: &[f64], mu: &[f64]| {
        let mut z = vec![0.0; d];
        for (w, v) in lam.iter().zip(&p) {
            z.iter_mut().zip(v).for_each(|(a, b)| *a += w * b);
        }
        for (w, v) in mu.iter().zip(&r) {
            z.iter_mut().zip(v).for_each(|(a, b)| *a += w * b);
        }
        z
    };
    let lip: f64 = p.iter().chain(&r).map(|v| dot(v, v)).sum::<f64>().max(1e-12);
    let step = 1.0 / lip;
    let mut lam = vec![1.0 / np as f64; np];
    let mut mu = vec![0.0; nr];
    let (mut lam_y, mut mu_y) = (lam.clone(), mu.clone());
    let mut t = 1.0_f64;
    let mut prev_obj = f64::INFINITY;
    for _ in 0..iterations {
        let z = combine(&lam_y, &mu_y);
        let g_lam: Vec<f64> = p.iter().map(|v| dot(v, &z)).collect();
        let g_mu: Vec<f64> = r.iter().map(|v| dot(v, &z)).collect();
        let lam_next = simplex_projection_bisect(
            &lam_y.iter().zip(&g_lam).map(|(a, g)| a - step * g).collect::<Vec<_>>(),
        );
        let mu_next: Vec<f64> = mu_y
            .iter()
            .zip(&g_mu)
            .map(|(a, g)| (a - step * g).max(0.0))
            .collect();
        let zn = combine(&lam_next, &mu_next);
        let obj = dot(&zn, &zn);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        if obj > prev_obj {
            // Restart the momentum.
            t = 1.0;
            lam_y = lam.clone();
            mu_y = mu.clone();
            continue;
        }
        let beta = (t - 1.0) / t_next;
        lam_y = lam_next.iter().zip(&lam).map(|(a, b)| a + beta * (a - b)).collect();
        mu_y = mu_next.iter().zip(&mu).map(|(a, b)| a + beta * (a - b)).collect();
        lam = lam_next;
        mu = mu_next;
        t = t_next;
        prev_obj = obj;
    }
    dot(&combine(&lam, &mu), &combine(&lam, &mu)).sqrt()
}

/// Projection onto `{v : rows.v <= rhs, sum of each block = 1, v_j >= 0 for
/// j in nonneg}` by Dykstra's alternating projections. Slow but simple.
pub fn dykstra_projection(
    v: &[f64],
    halfspaces: &[(Vec<f64>, f64)],
    m: usize,
    nonneg: &[usize],
    sweeps: usize,
) -> Vec<f64> {
    let d = v.len();
    // Sets: each halfspace, the affine block-sum set, and the orthant part.
    let count = halfspaces.len() + 2;
    let mut incr = vec![vec![0.0; d]; count];
    let mut x = v.to_vec();
    for _ in 0..sweeps {
        for s in 0..count {
            let y: Vec<f64> = x.iter().zip(&incr[s]).map(|(a, b)| a + b).collect();
            let proj = if s < halfspaces.len() {
                let (a, b) = &halfspaces[s];
                let excess = dot(a, &y) - b;
                if excess > 0.0 {
                    let na = dot(a, a);
                    y.iter().zip(a).map(|(yi, ai)| yi - excess / na * ai).collect()
                } else {
                    y.clone()
                }
            } else if s == halfspaces.len() {
                let mut p = y.clone();
                let sx: f64 = p[..m].iter().sum();
                let sy: f64 = p[m..].iter().sum();
                p[..m].iter_mut().for_each(|c| *c += (1.0 - sx) / m as f64);
                let n = (d - m) as f64;
                p[m..].iter_mut().for_each(|c| *c += (1.0 - sy) / n);
                p
            } else {
                let mut p = y.clone();
                for &j in nonneg {
                    p[j] = p[j].max(0.0);
                }
                p
            };
            incr[s] = y.iter().zip(&proj).map(|(a, b)| a - b).collect();
            x = proj;
        }
    }
    x
}
