//! Distance from a profile to the sublevel sets of the gap.
//!
//! For a non-equilibrium `w` and `0 < z < F(w)`, the local problem keeps
//! only the constraints active at `w`:
//!
//! ```text
//! V_z(w) = min |v - w|  s.t.  c.v <= z for the active stacks c = (a_i, b_k),
//!                             both block sums equal 1,
//!                             v_j >= 0 for the zero coordinates of w.
//! ```
//!
//! Its value has the closed form `(F(w) - z) / dist(0, G)` with `G` the
//! configuration's generator set, which makes the projection an independent
//! check of the min-norm computation.

use super::generators::configuration_generators;
use crate::error::{Error, Result};
use crate::game::{MatrixGame, StrategyProfile};
use crate::geometry::{min_norm_point, project_onto_polyhedron, Polyhedron};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricValue {
    pub z: f64,
    /// Optimum of the projection problem.
    pub direct: f64,
    pub closed_form: f64,
}

/// Projection onto the sublevel set `{F <= z}` within the simplex product.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetProjection {
    pub distance: f64,
    pub point: StrategyProfile,
    /// `|F(point) - z|`; the projection of a point above the level lands on
    /// the level set itself.
    pub level_residual: f64,
}

/// Checks `w` is not an equilibrium and `z` lies in `(0, F(w))`; returns the
/// gap.
fn check_parameter(game: &MatrixGame, w: &StrategyProfile, z: f64, tol: &Tolerances) -> Result<f64> {
    let gap = game.gap_value(w)?;
    if gap <= tol.equilibrium_threshold(game) {
        return Err(Error::PointIsEquilibrium { gap });
    }
    if !(z > 0.0 && z < gap) {
        return Err(Error::ParameterOutOfRange { z, upper: gap });
    }
    Ok(gap)
}

fn simplex_product(m: usize, n: usize) -> Polyhedron {
    let mut poly = Polyhedron::new(m + n);
    let mut row_ones = vec![0.0; m + n];
    row_ones[..m].fill(1.0);
    let mut col_ones = vec![0.0; m + n];
    col_ones[m..].fill(1.0);
    poly.push_eq(row_ones, 1.0);
    poly.push_eq(col_ones, 1.0);
    poly
}

fn stack(game: &MatrixGame, i: usize, k: usize) -> Vec<f64> {
    let mut c = game.column(i);
    c.extend(game.negated_row(k));
    c
}

pub fn parametric_value_direct(
    game: &MatrixGame,
    w: &StrategyProfile,
    z: f64,
    tol: &Tolerances,
) -> Result<f64> {
    check_parameter(game, w, z, tol)?;
    let config = game.index_sets(w, tol)?;
    let mut poly = simplex_product(game.m(), game.n());
    for &i in &config.best_columns {
        for &k in &config.best_rows {
            poly.push_le(stack(game, i, k), z);
        }
    }
    poly.push_nonnegative(config.zero_coords.iter().copied());
    Ok(project_onto_polyhedron(&w.stacked(), &poly)?.distance)
}

pub fn parametric_value_closed_form(
    game: &MatrixGame,
    w: &StrategyProfile,
    z: f64,
    tol: &Tolerances,
) -> Result<f64> {
    let gap = check_parameter(game, w, z, tol)?;
    let config = game.index_sets(w, tol)?;
    let mn = min_norm_point(&configuration_generators(game, &config))?;
    Ok((gap - z) / mn.distance)
}

pub fn parametric_values(
    game: &MatrixGame,
    w: &StrategyProfile,
    z: f64,
    tol: &Tolerances,
) -> Result<ParametricValue> {
    Ok(ParametricValue {
        z,
        direct: parametric_value_direct(game, w, z, tol)?,
        closed_form: parametric_value_closed_form(game, w, z, tol)?,
    })
}

/// Distance from `w` to `{v in simplex product : F(v) <= z}`, written with
/// one constraint `c.v <= z` per stack `(a_i, b_k)`.
pub fn level_set_distance(
    game: &MatrixGame,
    w: &StrategyProfile,
    z: f64,
    tol: &Tolerances,
) -> Result<LevelSetProjection> {
    check_parameter(game, w, z, tol)?;
    let (m, n) = (game.m(), game.n());
    let mut poly = simplex_product(m, n);
    for i in 0..n {
        for k in 0..m {
            poly.push_le(stack(game, i, k), z);
        }
    }
    poly.push_nonnegative(0..m + n);
    let proj = project_onto_polyhedron(&w.stacked(), &poly)?;
    let clipped: Vec<f64> = proj.point.iter().map(|c| c.max(0.0)).collect();
    let point = StrategyProfile {
        x: clipped[..m].to_vec(),
        y: clipped[m..].to_vec(),
    };
    let level_residual = (game.gap_value(&point)? - z).abs();
    Ok(LevelSetProjection {
        distance: proj.distance,
        point,
        level_residual,
    })
}
