//! Sampling lower bound on the condition measure, straight from its
//! definition as the smallest `k` with `dist(w, S) <= k F(w)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{max_of, MatrixGame, StrategyProfile};
use crate::tolerance::Tolerances;

/// Which profiles the oracle evaluates.
///
/// Strategies are sampled per player and every pair is evaluated. Each
/// player gets the regular grid with spacing `grid_step` (if any), the
/// pure strategies, and `random_samples` random mixed strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    /// Grid spacing; `1 / grid_step` must be an integer.
    pub grid_step: Option<f64>,
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            grid_step: Some(0.01),
            random_samples: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    /// Largest sampled ratio `dist(w, S) / F(w)`.
    pub estimate: f64,
    pub argmax: StrategyProfile,
    /// Number of profiles with a gap above the equilibrium threshold.
    pub evaluated: usize,
}

/// A sampled strategy with its share of the gap and its distance to the
/// player's optimal set. The gap splits as
/// `F = (max_i a_i.x - v) + (max_k b_k.y + v)`.
struct Sample {
    point: Vec<f64>,
    excess: f64,
    distance: f64,
}

pub fn condition_measure_oracle(
    game: &MatrixGame,
    plan: &SamplingPlan,
    tol: &Tolerances,
) -> Result<OracleEstimate> {
    if game.all_profiles_equilibria(tol) {
        return Err(Error::AllEquilibria);
    }
    let steps = match plan.grid_step {
        Some(h) => Some(grid_divisions(h)?),
        None => None,
    };
    let value = game.value()?;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let xs = strategies(game.m(), steps, plan.random_samples, &mut rng);
    let ys = strategies(game.n(), steps, plan.random_samples, &mut rng);
    let xs = annotate(xs, |x| {
        Ok((max_of(&game.column_scores(x)) - value.value, value.row_distance(x)?))
    })?;
    let ys = annotate(ys, |y| {
        Ok((max_of(&game.row_scores(y)) + value.value, value.column_distance(y)?))
    })?;

    let threshold = tol.equilibrium_threshold(game);
    // (ratio, x index, y index) and the evaluated count, per x sample.
    let per_x: Vec<((f64, usize, usize), usize)> = xs
        .par_iter()
        .enumerate()
        .map(|(a, x)| {
            let mut best = (f64::NEG_INFINITY, a, 0);
            let mut count = 0;
            for (b, y) in ys.iter().enumerate() {
                let gap = x.excess + y.excess;
                if gap > threshold {
                    count += 1;
                    let ratio = x.distance.hypot(y.distance) / gap;
                    if ratio > best.0 {
                        best = (ratio, a, b);
                    }
                }
            }
            (best, count)
        })
        .collect();

    let evaluated = per_x.iter().map(|r| r.1).sum();
    // First strict maximum in sample order, so the result does not depend
    // on scheduling.
    let (estimate, a, b) = per_x
        .into_iter()
        .map(|r| r.0)
        .fold((f64::NEG_INFINITY, 0, 0), |acc, r| if r.0 > acc.0 { r } else { acc });
    if evaluated == 0 {
        return Err(Error::AllEquilibria);
    }
    Ok(OracleEstimate {
        estimate,
        argmax: StrategyProfile {
            x: xs[a].point.clone(),
            y: ys[b].point.clone(),
        },
        evaluated,
    })
}

fn grid_divisions(h: f64) -> Result<usize> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::InvalidArgument(format!("grid step must be in (0, 1], got {h}")));
    }
    let inv = 1.0 / h;
    let steps = inv.round();
    if (inv - steps).abs() > 1e-9 * inv {
        return Err(Error::InvalidArgument(format!(
            "grid step {h} does not divide 1 evenly"
        )));
    }
    Ok(steps as usize)
}

fn annotate(
    points: Vec<Vec<f64>>,
    eval: impl Fn(&[f64]) -> Result<(f64, f64)> + Sync,
) -> Result<Vec<Sample>> {
    points
        .into_par_iter()
        .map(|point| {
            let (excess, distance) = eval(&point)?;
            Ok(Sample {
                point,
                excess,
                distance,
            })
        })
        .collect()
}

/// Grid points (just the vertices when there is no grid), then random
/// strategies.
fn strategies(
    dim: usize,
    steps: Option<usize>,
    random: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    match steps {
        Some(steps) => compositions(dim, steps, &mut vec![0; dim], 0, steps, &mut out),
        None => out.extend((0..dim).map(|j| {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            e
        })),
    }
    for _ in 0..random {
        out.push(random_strategy(dim, rng));
    }
    out
}

fn compositions(
    dim: usize,
    steps: usize,
    parts: &mut Vec<usize>,
    at: usize,
    left: usize,
    out: &mut Vec<Vec<f64>>,
) {
    if at + 1 == dim {
        parts[at] = left;
        out.push(parts.iter().map(|&p| p as f64 / steps as f64).collect());
        return;
    }
    for p in 0..=left {
        parts[at] = p;
        compositions(dim, steps, parts, at + 1, left - p, out);
    }
}

/// Uniform on the simplex, restricted half the time to a random support so
/// that faces get sampled as well as the interior.
fn random_strategy(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    if rng.gen_bool(0.5) {
        let keep = rng.gen_range(0..dim);
        for (j, c) in v.iter_mut().enumerate() {
            if j != keep && rng.gen_bool(0.5) {
                *c = 0.0;
            }
        }
    }
    let total: f64 = v.iter().sum();
    v.iter().map(|c| c / total).collect()
}
