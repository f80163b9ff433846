use crate::error::{Error, Result};
use crate::game::{IndexConfiguration, MatrixGame, StrategyProfile};
use crate::geometry::{min_norm_point, GeneratorSet};
use crate::tolerance::Tolerances;

/// Stacked vectors `(a_i, b_k)` for the active pairs, `i` outer. Their convex
/// hull is the subdifferential of the gap at `w`.
pub fn subdifferential_generators(
    game: &MatrixGame,
    w: &StrategyProfile,
    tol: &Tolerances,
) -> Result<Vec<Vec<f64>>> {
    let config = game.index_sets(w, tol)?;
    Ok(active_pairs(game, &config))
}

fn active_pairs(game: &MatrixGame, config: &IndexConfiguration) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(config.best_columns.len() * config.best_rows.len());
    for &i in &config.best_columns {
        let a = game.column(i);
        for &k in &config.best_rows {
            let mut g = a.clone();
            g.extend(game.negated_row(k));
            out.push(g);
        }
    }
    out
}

/// Normal cone of the simplex product at `w`: the two block all-ones
/// directions as lines, and `-e_j` for every zero coordinate as rays.
pub fn normal_cone_generators(
    game: &MatrixGame,
    w: &StrategyProfile,
    tol: &Tolerances,
) -> Result<GeneratorSet> {
    let config = game.index_sets(w, tol)?;
    Ok(normal_cone(game.m(), game.n(), &config.zero_coords))
}

fn normal_cone(m: usize, n: usize, zeros: &[usize]) -> GeneratorSet {
    let d = m + n;
    let mut set = GeneratorSet::new(d);
    let mut row_ones = vec![0.0; d];
    row_ones[..m].fill(1.0);
    let mut col_ones = vec![0.0; d];
    col_ones[m..].fill(1.0);
    set.lines = vec![row_ones, col_ones];
    set.rays = zeros
        .iter()
        .map(|&j| {
            let mut r = vec![0.0; d];
            r[j] = -1.0;
            r
        })
        .collect();
    set
}

/// Subdifferential plus normal cone for a configuration, as one set.
pub fn configuration_generators(game: &MatrixGame, config: &IndexConfiguration) -> GeneratorSet {
    normal_cone(game.m(), game.n(), &config.zero_coords).with_points(active_pairs(game, config))
}

/// `1 / dist(0, dF(w) + N(w))` at a non-equilibrium profile.
pub fn exact_regularity_bound(
    game: &MatrixGame,
    w: &StrategyProfile,
    tol: &Tolerances,
) -> Result<f64> {
    let gap = game.gap_value(w)?;
    if gap <= tol.equilibrium_threshold(game) {
        return Err(Error::PointIsEquilibrium { gap });
    }
    let config = game.index_sets(w, tol)?;
    let mn = min_norm_point(&configuration_generators(game, &config))?;
    if mn.distance <= 0.0 {
        return Err(Error::NumericalFailure(format!(
            "zero distance at a non-equilibrium profile ({config})"
        )));
    }
    Ok(1.0 / mn.distance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pennies() -> MatrixGame {
        MatrixGame::new(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap()
    }

    fn profile(x: &[f64], y: &[f64]) -> StrategyProfile {
        StrategyProfile::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn subdifferential_examples() {
        let tol = Tolerances::default();
        let g = pennies();
        assert_eq!(
            subdifferential_generators(&g, &profile(&[1.0, 0.0], &[1.0, 0.0]), &tol).unwrap(),
            vec![vec![1.0, -1.0, 1.0, -1.0]]
        );
        assert_eq!(
            subdifferential_generators(&g, &profile(&[1.0, 0.0], &[0.5, 0.5]), &tol).unwrap(),
            vec![vec![1.0, -1.0, -1.0, 1.0], vec![1.0, -1.0, 1.0, -1.0]]
        );
        let c = MatrixGame::new(&[vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        let gens =
            subdifferential_generators(&c, &profile(&[0.4, 0.6], &[0.3, 0.7]), &tol).unwrap();
        assert_eq!(gens.len(), 4);
        assert!(gens.iter().all(|v| v == &vec![2.0, 2.0, -2.0, -2.0]));
    }

    #[test]
    fn normal_cone_examples() {
        let tol = Tolerances::default();
        let g = pennies();
        let set = normal_cone_generators(&g, &profile(&[1.0, 0.0], &[1.0, 0.0]), &tol).unwrap();
        assert!(set.points.is_empty());
        assert_eq!(
            set.lines,
            vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0]]
        );
        assert_eq!(
            set.rays,
            vec![vec![0.0, -1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, -1.0]]
        );
        let set = normal_cone_generators(&g, &profile(&[0.0, 1.0], &[0.0, 1.0]), &tol).unwrap();
        assert_eq!(
            set.rays,
            vec![vec![-1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, -1.0, 0.0]]
        );
        let set = normal_cone_generators(&g, &profile(&[0.3, 0.7], &[0.6, 0.4]), &tol).unwrap();
        assert!(set.rays.is_empty());
    }

    #[test]
    fn bound_examples() {
        let tol = Tolerances::default();
        let g = pennies();
        let b = exact_regularity_bound(&g, &profile(&[1.0, 0.0], &[1.0, 0.0]), &tol).unwrap();
        assert!((b - 0.5).abs() < 1e-12);
        let b = exact_regularity_bound(&g, &profile(&[1.0, 0.0], &[0.5, 0.5]), &tol).unwrap();
        assert!((b - 0.5_f64.sqrt()).abs() < 1e-12);
        let c = MatrixGame::new(&[vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        assert!(matches!(
            exact_regularity_bound(&c, &profile(&[1.0, 0.0], &[0.0, 1.0]), &tol),
            Err(Error::PointIsEquilibrium { .. })
        ));
        assert!(matches!(
            exact_regularity_bound(&g, &profile(&[0.5, 0.5], &[0.5, 0.5]), &tol),
            Err(Error::PointIsEquilibrium { .. })
        ));
    }
}
