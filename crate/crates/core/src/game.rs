//! Matrix games, mixed-strategy profiles and the saddle-point gap.
//!
//! Player 1 picks `x` in the `m`-simplex and minimizes `x'Ay`; Player 2
//! picks `y` in the `n`-simplex and maximizes it. A profile is written
//! `w = (x, y)` with the `x` coordinates first, so coordinate `j < m`
//! belongs to Player 1 and coordinate `m + p` to Player 2.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{lp_solve, project_onto_polyhedron, Polyhedron, Sense};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGame {
    rows: usize,
    cols: usize,
    /// Row-major payoff entries.
    payoff: Vec<f64>,
}

impl MatrixGame {
    /// Validates a payoff matrix given as rows (Player 1 strategies) of
    /// columns (Player 2 strategies).
    pub fn new(matrix: &[Vec<f64>]) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut payoff = Vec::with_capacity(rows * cols);
        for (r, row) in matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedMatrix {
                    row: r + 1,
                    expected: cols,
                    found: row.len(),
                });
            }
            payoff.extend_from_slice(row);
        }
        Self::from_row_major(rows, cols, payoff)
    }

    pub fn from_row_major(rows: usize, cols: usize, payoff: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || payoff.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if payoff.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: payoff.len(),
            });
        }
        if let Some(pos) = payoff.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry {
                row: pos / cols + 1,
                col: pos % cols + 1,
            });
        }
        Ok(Self { rows, cols, payoff })
    }

    /// Number of Player 1 pure strategies.
    pub fn m(&self) -> usize {
        self.rows
    }

    /// Number of Player 2 pure strategies.
    pub fn n(&self) -> usize {
        self.cols
    }

    /// Entry in row `k`, column `i` (0-based).
    pub fn entry(&self, k: usize, i: usize) -> f64 {
        self.payoff[k * self.cols + i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.payoff.chunks_exact(self.cols)
    }

    pub fn max_abs(&self) -> f64 {
        self.payoff.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Column `i` of the payoff matrix, `a_i`.
    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.rows).map(|k| self.entry(k, i)).collect()
    }

    /// Negated row `k` of the payoff matrix, `b_k`.
    pub fn negated_row(&self, k: usize) -> Vec<f64> {
        self.rows().nth(k).unwrap().iter().map(|v| -v).collect()
    }

    /// `a_i . x` for every column `i`.
    pub fn column_scores(&self, x: &[f64]) -> Vec<f64> {
        let mut scores = vec![0.0; self.cols];
        for (row, &xk) in self.rows().zip(x) {
            for (s, &a) in scores.iter_mut().zip(row) {
                *s += a * xk;
            }
        }
        scores
    }

    /// `b_k . y` for every row `k`.
    pub fn row_scores(&self, y: &[f64]) -> Vec<f64> {
        self.rows()
            .map(|row| -row.iter().zip(y).map(|(a, v)| a * v).sum::<f64>())
            .collect()
    }

    /// The game `-A'`: Player 2's problem seen as Player 1's.
    pub fn negated_transpose(&self) -> MatrixGame {
        let mut payoff = Vec::with_capacity(self.payoff.len());
        for i in 0..self.cols {
            payoff.extend((0..self.rows).map(|k| -self.entry(k, i)));
        }
        MatrixGame {
            rows: self.cols,
            cols: self.rows,
            payoff,
        }
    }

    pub fn scaled(&self, alpha: f64) -> Result<MatrixGame> {
        Self::from_row_major(
            self.rows,
            self.cols,
            self.payoff.iter().map(|v| alpha * v).collect(),
        )
    }

    /// Reorders rows and columns: row `r` of the result is row
    /// `row_order[r]` of `self`, likewise for columns.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Result<MatrixGame> {
        check_permutation(row_order, self.rows)?;
        check_permutation(col_order, self.cols)?;
        let mut payoff = Vec::with_capacity(self.payoff.len());
        for &k in row_order {
            payoff.extend(col_order.iter().map(|&i| self.entry(k, i)));
        }
        Ok(MatrixGame {
            rows: self.rows,
            cols: self.cols,
            payoff,
        })
    }

    fn check_profile(&self, w: &StrategyProfile) -> Result<()> {
        if w.x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: w.x.len(),
            });
        }
        if w.y.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: w.y.len(),
            });
        }
        Ok(())
    }

    /// The gap `F(x, y) = max_i a_i.x + max_k b_k.y`, i.e. the best payoff
    /// improvement available to either player against the other.
    pub fn gap_value(&self, w: &StrategyProfile) -> Result<f64> {
        self.check_profile(w)?;
        Ok(max_of(&self.column_scores(&w.x)) + max_of(&self.row_scores(&w.y)))
    }

    /// Best-response columns `I(x)`, best-response rows `K(y)` and zero
    /// coordinates `J(x, y)`.
    pub fn index_sets(&self, w: &StrategyProfile, tol: &Tolerances) -> Result<IndexConfiguration> {
        self.check_profile(w)?;
        let tie = tol.tie_threshold(self);
        let zero_coords = w
            .x
            .iter()
            .chain(&w.y)
            .enumerate()
            .filter(|(_, &v)| v <= tol.zero)
            .map(|(j, _)| j)
            .collect();
        Ok(IndexConfiguration {
            best_columns: near_max(&self.column_scores(&w.x), tie),
            best_rows: near_max(&self.row_scores(&w.y), tie),
            zero_coords,
        })
    }

    pub fn is_equilibrium(&self, w: &StrategyProfile, eps: f64) -> Result<bool> {
        if !(eps >= 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be >= 0, got {eps}")));
        }
        Ok(self.gap_value(w)? <= eps)
    }

    /// Whether every profile is an equilibrium. `F` is convex, so it is
    /// enough that it vanishes at every pair of pure strategies.
    pub fn all_profiles_equilibria(&self, tol: &Tolerances) -> bool {
        let threshold = tol.equilibrium_threshold(self);
        let row_max: Vec<f64> = self.rows().map(max_of).collect();
        let col_min: Vec<f64> = (0..self.cols)
            .map(|i| (0..self.rows).map(|k| self.entry(k, i)).fold(f64::INFINITY, f64::min))
            .collect();
        row_max
            .iter()
            .all(|&hi| col_min.iter().all(|&lo| hi - lo <= threshold))
    }

    /// Solves both players' linear programs.
    pub fn value(&self) -> Result<GameValue> {
        let (value, row_strategy) = minimax_lp(self)?;
        let (dual_value, column_strategy) = minimax_lp(&self.negated_transpose())?;
        let slack = 1e-12 * (1.0 + self.max_abs());
        Ok(GameValue {
            value,
            row_optimal: optimal_face(self, value + slack),
            column_optimal: optimal_face(&self.negated_transpose(), dual_value + slack),
            row_strategy,
            column_strategy,
        })
    }

    /// Euclidean distance from `w` to the equilibrium set.
    pub fn nash_distance(&self, w: &StrategyProfile) -> Result<f64> {
        self.check_profile(w)?;
        self.value()?.distance(w)
    }
}

fn check_permutation(order: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for &p in order {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument(format!(
                "not a permutation of 0..{len}: {order:?}"
            )));
        }
    }
    if order.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: order.len(),
        });
    }
    Ok(())
}

pub(crate) fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn near_max(values: &[f64], tie: f64) -> Vec<usize> {
    let best = max_of(values);
    (0..values.len()).filter(|&i| values[i] >= best - tie).collect()
}

/// `min_x max_i a_i.x` over the simplex, as an epigraph LP in `(x, t)`.
fn minimax_lp(game: &MatrixGame) -> Result<(f64, Vec<f64>)> {
    let m = game.m();
    let mut poly = Polyhedron::new(m + 1);
    for i in 0..game.n() {
        let mut row = game.column(i);
        row.push(-1.0);
        poly.push_le(row, 0.0);
    }
    poly.push_nonnegative(0..m);
    let mut ones = vec![1.0; m];
    ones.push(0.0);
    poly.push_eq(ones, 1.0);
    let mut objective = vec![0.0; m + 1];
    objective[m] = 1.0;
    let sol = lp_solve(&objective, &poly, Sense::Minimize)?;
    let mut x = sol.solution;
    x.truncate(m);
    Ok((sol.optimum, x))
}

/// `{x in simplex : a_i.x <= level for all i}`.
fn optimal_face(game: &MatrixGame, level: f64) -> Polyhedron {
    let mut poly = Polyhedron::simplex(game.m());
    for i in 0..game.n() {
        poly.push_le(game.column(i), level);
    }
    poly
}

/// The value of a game and its optimal-strategy polytopes. The equilibrium
/// set is the product `row_optimal x column_optimal`.
#[derive(Debug, Clone)]
pub struct GameValue {
    /// `min_x max_y x'Ay`.
    pub value: f64,
    /// `X* = {x in simplex : a_i.x <= value}`.
    pub row_optimal: Polyhedron,
    /// `Y* = {y in simplex : b_k.y <= -value}`.
    pub column_optimal: Polyhedron,
    pub row_strategy: Vec<f64>,
    pub column_strategy: Vec<f64>,
}

impl GameValue {
    pub fn row_distance(&self, x: &[f64]) -> Result<f64> {
        Ok(project_onto_polyhedron(x, &self.row_optimal)?.distance)
    }

    pub fn column_distance(&self, y: &[f64]) -> Result<f64> {
        Ok(project_onto_polyhedron(y, &self.column_optimal)?.distance)
    }

    /// Distance to the equilibrium set; it is a product, so the squared
    /// distances of the two blocks add.
    pub fn distance(&self, w: &StrategyProfile) -> Result<f64> {
        Ok(self.row_distance(&w.x)?.hypot(self.column_distance(&w.y)?))
    }
}

/// A pair of mixed strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl StrategyProfile {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(x, y, Tolerances::default().feasibility)
    }

    pub fn with_tolerance(x: Vec<f64>, y: Vec<f64>, tol: f64) -> Result<Self> {
        check_simplex(&x, tol, "x")?;
        check_simplex(&y, tol, "y")?;
        Ok(Self { x, y })
    }

    /// Uniform strategies for both players.
    pub fn barycenter(m: usize, n: usize) -> Self {
        Self {
            x: vec![1.0 / m as f64; m],
            y: vec![1.0 / n as f64; n],
        }
    }

    /// Splits a stacked vector `(x, y)` with `x` of length `m`.
    pub fn from_stacked(w: &[f64], m: usize) -> Result<Self> {
        if m == 0 || m >= w.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot split a vector of length {} at {m}",
                w.len()
            )));
        }
        Self::new(w[..m].to_vec(), w[m..].to_vec())
    }

    pub fn stacked(&self) -> Vec<f64> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    /// Largest violation of the simplex constraints over both blocks.
    pub fn simplex_residual(&self) -> f64 {
        simplex_residual(&self.x).max(simplex_residual(&self.y))
    }
}

pub(crate) fn simplex_residual(v: &[f64]) -> f64 {
    let neg = v.iter().fold(0.0_f64, |acc, &c| acc.max(-c));
    neg.max((v.iter().sum::<f64>() - 1.0).abs())
}

fn check_simplex(v: &[f64], tol: f64, name: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InfeasibleProfile(format!("{name} is empty")));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InfeasibleProfile(format!("{name} has non-finite entries")));
    }
    let residual = simplex_residual(v);
    if residual > tol {
        return Err(Error::InfeasibleProfile(format!(
            "{name} violates the simplex constraints by {residual:e}"
        )));
    }
    Ok(())
}

/// Active index sets at a profile: best-response columns `I`, best-response
/// rows `K` and zero coordinates `J`, all 0-based and sorted. `J` indexes the
/// stacked profile, `x` coordinates first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexConfiguration {
    pub best_columns: Vec<usize>,
    pub best_rows: Vec<usize>,
    pub zero_coords: Vec<usize>,
}

impl IndexConfiguration {
    /// Zero coordinates of `x` (indices into `x`).
    pub fn row_zeros(&self, m: usize) -> Vec<usize> {
        self.zero_coords.iter().copied().filter(|&j| j < m).collect()
    }

    /// Zero coordinates of `y` (indices into `y`).
    pub fn column_zeros(&self, m: usize) -> Vec<usize> {
        self.zero_coords
            .iter()
            .filter(|&&j| j >= m)
            .map(|&j| j - m)
            .collect()
    }

    /// The three sets with 1-based indices.
    pub fn one_based(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let shift = |v: &[usize]| v.iter().map(|i| i + 1).collect();
        (
            shift(&self.best_columns),
            shift(&self.best_rows),
            shift(&self.zero_coords),
        )
    }
}

impl fmt::Display for IndexConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, k, j) = self.one_based();
        let list = |v: &[usize]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "I={{{}}} K={{{}}} J={{{}}}", list(&i), list(&k), list(&j))
    }
}
