//! Index configurations that occur at non-equilibrium profiles.
//!
//! A configuration `(I, K, J)` occurs with positive margin when some profile
//! has `I` as its exact set of best-response columns, `K` as its exact set
//! of best-response rows and `J` as its exact zero pattern, every strict
//! inequality holding with slack at least `s > 0`, and a gap of at least
//! `s`. The realizability LP maximizes that common slack.
//!
//! The LP couples the players only through the gap constraint
//! `t_x + t_y >= s`, so candidates are screened one player at a time first:
//! each half `(I, J_x)` or `(K, J_y)` gets its own slack LP and the best
//! score it can reach at the margin. Pairs are then formed from surviving
//! halves.

use rayon::prelude::*;

use super::condition::ConditionOptions;
use crate::error::{Error, Result};
use crate::game::{IndexConfiguration, MatrixGame, StrategyProfile};
use crate::geometry::{lp_solve, min_norm_point, GeneratorSet, Polyhedron, Sense};

/// A configuration with the optimal realizability slack and the profile
/// attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub config: IndexConfiguration,
    pub slack: f64,
    pub point: StrategyProfile,
}

/// One player's half of a configuration.
#[derive(Debug, Clone)]
pub(crate) struct Half {
    pub best: Vec<usize>,
    pub zeros: Vec<usize>,
    /// Largest common margin of this half on its own.
    pub slack: f64,
    /// Largest best-response score reachable with margins at the tolerance.
    pub top: f64,
    /// Squared distance from the origin to this half's generator set.
    pub distance_sq: f64,
}

/// Player 1's score vectors are the columns `a_i`; Player 2's are the
/// negated rows `b_k`, which are the columns of `-A'`.
pub(crate) fn score_vectors(game: &MatrixGame) -> Vec<Vec<f64>> {
    (0..game.n()).map(|i| game.column(i)).collect()
}

fn mask_to_indices(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Adds the constraints of one half. `z` occupies `offset..offset + dim`.
fn push_half(
    poly: &mut Polyhedron,
    vectors: &[Vec<f64>],
    best: &[usize],
    zeros: &[usize],
    offset: usize,
    t: usize,
    s: usize,
) {
    let total = poly.dim();
    let dim = vectors[0].len();
    for (l, v) in vectors.iter().enumerate() {
        let mut row = vec![0.0; total];
        row[offset..offset + dim].copy_from_slice(v);
        row[t] = -1.0;
        if best.contains(&l) {
            poly.push_eq(row, 0.0);
        } else {
            row[s] = 1.0;
            poly.push_le(row, 0.0);
        }
    }
    for j in 0..dim {
        let mut row = vec![0.0; total];
        if zeros.contains(&j) {
            row[offset + j] = 1.0;
            poly.push_eq(row, 0.0);
        } else {
            row[offset + j] = -1.0;
            row[s] = 1.0;
            poly.push_le(row, 0.0);
        }
    }
    let mut ones = vec![0.0; total];
    ones[offset..offset + dim].fill(1.0);
    poly.push_eq(ones, 1.0);
    poly.push_nonnegative(offset..offset + dim);
}

/// `(slack, top)` for one half; `top` is computed with the slack pinned at
/// `min(margin, slack)` and is only meaningful when `slack > 0`.
fn half_lps(vectors: &[Vec<f64>], best: &[usize], zeros: &[usize], margin: f64) -> Result<(f64, f64)> {
    let dim = vectors[0].len();
    let (t, s) = (dim, dim + 1);
    let mut poly = Polyhedron::new(dim + 2);
    push_half(&mut poly, vectors, best, zeros, 0, t, s);
    let mut objective = vec![0.0; dim + 2];
    objective[s] = 1.0;
    let slack = match lp_solve(&objective, &poly, Sense::Maximize) {
        Ok(sol) => sol.optimum,
        Err(Error::Infeasible) => return Ok((f64::NEG_INFINITY, f64::NEG_INFINITY)),
        Err(e) => return Err(e),
    };
    if slack <= 0.0 {
        return Ok((slack, f64::NEG_INFINITY));
    }
    let mut pin = vec![0.0; dim + 2];
    pin[s] = 1.0;
    poly.push_eq(pin, margin.min(slack));
    objective[s] = 0.0;
    objective[t] = 1.0;
    let top = lp_solve(&objective, &poly, Sense::Maximize)?.optimum;
    Ok((slack, top))
}

/// `dist(0, co{v_i : i in best} + span{1} - cone{e_j : j in zeros})^2`.
fn half_distance_sq(vectors: &[Vec<f64>], best: &[usize], zeros: &[usize]) -> Result<f64> {
    let dim = vectors[0].len();
    let mut set = GeneratorSet::new(dim);
    set.points = best.iter().map(|&i| vectors[i].clone()).collect();
    set.lines = vec![vec![1.0; dim]];
    set.rays = zeros
        .iter()
        .map(|&j| {
            let mut r = vec![0.0; dim];
            r[j] = -1.0;
            r
        })
        .collect();
    Ok(min_norm_point(&set)?.distance.powi(2))
}

/// Every half with positive slack. Halves whose slack does not exceed the
/// margin are kept too so that callers can report borderline cases.
pub(crate) fn halves(vectors: &[Vec<f64>], margin: f64) -> Result<Vec<Half>> {
    let count = vectors.len();
    let dim = vectors[0].len();
    let masks: Vec<(u64, u64)> = (1..1u64 << count)
        .flat_map(|b| (0..(1u64 << dim) - 1).map(move |z| (b, z)))
        .collect();
    let found: Vec<Option<Half>> = masks
        .par_iter()
        .map(|&(b, z)| -> Result<Option<Half>> {
            let best = mask_to_indices(b, count);
            let zeros = mask_to_indices(z, dim);
            let (slack, top) = half_lps(vectors, &best, &zeros, margin)?;
            if !(slack > 0.0) {
                return Ok(None);
            }
            let distance_sq = half_distance_sq(vectors, &best, &zeros)?;
            Ok(Some(Half {
                best,
                zeros,
                slack,
                top,
                distance_sq,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

pub(crate) fn pair_config(m: usize, x: &Half, y: &Half) -> IndexConfiguration {
    IndexConfiguration {
        best_columns: x.best.clone(),
        best_rows: y.best.clone(),
        zero_coords: x
            .zeros
            .iter()
            .copied()
            .chain(y.zeros.iter().map(|&j| j + m))
            .collect(),
    }
}

pub(crate) fn pair_passes(x: &Half, y: &Half, margin: f64) -> bool {
    x.slack > margin && y.slack > margin && x.top + y.top > margin
}

/// Solves the joint realizability LP for a configuration.
pub fn realize_configuration(game: &MatrixGame, config: &IndexConfiguration) -> Result<Realization> {
    let (m, n) = (game.m(), game.n());
    let x_zeros = config.row_zeros(m);
    let y_zeros = config.column_zeros(m);
    let valid = !config.best_columns.is_empty()
        && !config.best_rows.is_empty()
        && config.best_columns.iter().all(|&i| i < n)
        && config.best_rows.iter().all(|&k| k < m)
        && config.zero_coords.iter().all(|&j| j < m + n)
        && x_zeros.len() < m
        && y_zeros.len() < n;
    if !valid {
        return Err(Error::InvalidArgument(format!(
            "not a configuration of a {m}x{n} game: {config}"
        )));
    }
    let (tx, ty, s) = (m + n, m + n + 1, m + n + 2);
    let mut poly = Polyhedron::new(m + n + 3);
    push_half(&mut poly, &score_vectors(game), &config.best_columns, &x_zeros, 0, tx, s);
    push_half(
        &mut poly,
        &score_vectors(&game.negated_transpose()),
        &config.best_rows,
        &y_zeros,
        m,
        ty,
        s,
    );
    let mut gap_row = vec![0.0; m + n + 3];
    gap_row[tx] = -1.0;
    gap_row[ty] = -1.0;
    gap_row[s] = 1.0;
    poly.push_le(gap_row, 0.0);
    let mut objective = vec![0.0; m + n + 3];
    objective[s] = 1.0;
    let sol = lp_solve(&objective, &poly, Sense::Maximize)?;
    let point = StrategyProfile::new(
        clean_simplex(&sol.solution[..m]),
        clean_simplex(&sol.solution[m..m + n]),
    )?;
    Ok(Realization {
        config: config.clone(),
        slack: sol.optimum,
        point,
    })
}

/// Clears round-off below zero and renormalizes.
fn clean_simplex(v: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = v.iter().map(|c| c.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    clipped.iter().map(|c| c / total).collect()
}

/// Every configuration realizable with slack above the margin, sorted.
/// Empty when every profile is an equilibrium.
pub fn enumerate_configurations(
    game: &MatrixGame,
    options: &ConditionOptions,
) -> Result<Vec<Realization>> {
    options.check_size(game)?;
    let margin = options.tolerances.margin;
    options.install(|| {
        let xs = halves(&score_vectors(game), margin)?;
        let ys = halves(&score_vectors(&game.negated_transpose()), margin)?;
        let pairs: Vec<IndexConfiguration> = xs
            .iter()
            .flat_map(|x| ys.iter().map(move |y| (x, y)))
            .filter(|(x, y)| pair_passes(x, y, margin))
            .map(|(x, y)| pair_config(game.m(), x, y))
            .collect();
        let realized: Vec<Realization> = pairs
            .par_iter()
            .map(|c| realize_configuration(game, c))
            .collect::<Result<_>>()?;
        let mut kept: Vec<Realization> =
            realized.into_iter().filter(|r| r.slack > margin).collect();
        kept.sort_by(|a, b| a.config.cmp(&b.config));
        Ok(kept)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(i: &[usize], k: &[usize], j: &[usize]) -> IndexConfiguration {
        // 1-based in, 0-based out.
        let z = |v: &[usize]| v.iter().map(|x| x - 1).collect();
        IndexConfiguration {
            best_columns: z(i),
            best_rows: z(k),
            zero_coords: z(j),
        }
    }

    #[test]
    fn pennies_configurations() {
        let g = MatrixGame::new(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let all = enumerate_configurations(&g, &ConditionOptions::default()).unwrap();
        let configs: Vec<_> = all.iter().map(|r| r.config.clone()).collect();
        assert!(configs.contains(&config(&[1], &[2], &[2, 4])));
        assert!(configs.contains(&config(&[1], &[1, 2], &[2])));
        // The equilibrium pattern itself never has a positive gap.
        assert!(!configs.contains(&config(&[1, 2], &[1, 2], &[])));
        for r in &all {
            assert!(r.slack > 1e-9);
            assert!(g.gap_value(&r.point).unwrap() >= r.slack - 1e-12);
        }
    }

    #[test]
    fn named_witnesses_are_realized() {
        let g = MatrixGame::new(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let r = realize_configuration(&g, &config(&[1], &[2], &[2, 4])).unwrap();
        assert!((r.slack - 1.0).abs() < 1e-12);
        assert_eq!(r.point.x, vec![1.0, 0.0]);
        assert_eq!(r.point.y, vec![1.0, 0.0]);
        let r = realize_configuration(&g, &config(&[1], &[1, 2], &[2])).unwrap();
        assert!(r.slack > 0.1);
        assert_eq!(r.point.x, vec![1.0, 0.0]);
        assert!((r.point.y[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn no_configurations_without_gap() {
        let opts = ConditionOptions::default();
        let c = MatrixGame::new(&[vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        assert!(enumerate_configurations(&c, &opts).unwrap().is_empty());
        let one = MatrixGame::new(&[vec![5.0]]).unwrap();
        assert!(enumerate_configurations(&one, &opts).unwrap().is_empty());
    }

    #[test]
    fn rejects_malformed_configuration() {
        let g = MatrixGame::new(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        assert!(realize_configuration(&g, &config(&[], &[1], &[])).is_err());
        assert!(realize_configuration(&g, &config(&[1], &[1], &[1, 2])).is_err());
    }
}
