//! Dense two-phase simplex method with Bland's rule.
//!
//! Variables of a [`Polyhedron`] are free; a row of the form `-c w_j <= 0`
//! (`c > 0`) is recognized as a sign bound and handled as such instead of
//! splitting `w_j`. Every solve reports dual multipliers so callers can
//! check optimality themselves through [`LpSolution::certificate`].

use super::dot;
use super::polyhedron::Polyhedron;
use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }
}

/// An optimal basic solution together with dual multipliers.
///
/// With `s = 1` for minimization and `s = -1` for maximization the
/// multipliers satisfy `s c = A_eq' u - A_le' v` with `v >= 0`, and the dual
/// objective is `s (b_eq' u - b_le' v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub optimum: f64,
    pub solution: Vec<f64>,
    pub eq_duals: Vec<f64>,
    pub ineq_duals: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpCertificate {
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// Largest negative part of the inequality multipliers.
    pub dual_sign_violation: f64,
    pub duality_gap: f64,
}

impl LpSolution {
    pub fn certificate(&self, objective: &[f64], poly: &Polyhedron, sense: Sense) -> LpCertificate {
        let s = sense.sign();
        let mut stationarity: Vec<f64> = objective.iter().map(|c| s * c).collect();
        let mut dual_value = 0.0;
        for ((row, rhs), u) in poly.eq_rows().iter().zip(&self.eq_duals) {
            for (g, a) in stationarity.iter_mut().zip(row) {
                *g -= u * a;
            }
            dual_value += u * rhs;
        }
        for ((row, rhs), v) in poly.ineq_rows().iter().zip(&self.ineq_duals) {
            for (g, a) in stationarity.iter_mut().zip(row) {
                *g += v * a;
            }
            dual_value -= v * rhs;
        }
        LpCertificate {
            primal_residual: poly.max_violation(&self.solution),
            dual_residual: stationarity.iter().fold(0.0, |acc, g| acc.max(g.abs())),
            dual_sign_violation: self.ineq_duals.iter().fold(0.0, |acc, v| acc.max(-v)),
            duality_gap: (s * dot(objective, &self.solution) - dual_value).abs(),
        }
    }
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `(rows + 1) x (cols + 1)`, row-major; the last row holds reduced
    /// costs and the last column the right-hand side.
    cells: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let p = self.cells[r * w + c];
        for k in 0..w {
            self.cells[r * w + k] /= p;
        }
        self.cells[r * w + c] = 1.0;
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let f = self.cells[i * w + c];
            if f != 0.0 {
                for k in 0..w {
                    self.cells[i * w + k] -= f * self.cells[r * w + k];
                }
                self.cells[i * w + c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column enters, ratio ties go to
    /// the lowest-index basic variable. Only columns below `allowed` enter.
    fn optimize(&mut self, allowed: usize, rc_tol: f64) -> Result<()> {
        for _ in 0..MAX_PIVOTS {
            let Some(c) = (0..allowed).find(|&c| self.at(self.rows, c) < -rc_tol) else {
                return Ok(());
            };
            let mut leave: Option<(f64, usize)> = None;
            for r in 0..self.rows {
                let a = self.at(r, c);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((ratio, r)),
                    Some((best, br)) => {
                        let tie = 1e-12 * (1.0 + best.abs());
                        if ratio < best - tie
                            || (ratio <= best + tie && self.basis[r] < self.basis[br])
                        {
                            Some((ratio, r))
                        } else {
                            Some((best, br))
                        }
                    }
                };
            }
            let Some((_, r)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(r, c);
        }
        Err(Error::NumericalFailure("simplex pivot limit reached".into()))
    }
}

/// Where an original variable lives in the standard-form problem.
struct VarSlot {
    pos: usize,
    neg: Option<usize>,
    /// Index into the inequality rows of the bound `-gamma w_j <= 0`.
    bound: Option<(usize, f64)>,
}

/// Solves `min/max c'w` over a polyhedron.
pub fn lp_solve(objective: &[f64], poly: &Polyhedron, sense: Sense) -> Result<LpSolution> {
    let d = poly.dim();
    if objective.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: objective.len(),
        });
    }
    poly.validate()?;
    if objective.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("objective has non-finite entries".into()));
    }
    let s = sense.sign();

    // Sign bounds.
    let mut bound_of: Vec<Option<(usize, f64)>> = vec![None; d];
    let mut is_bound_row = vec![false; poly.ineq_rows().len()];
    for (idx, (row, rhs)) in poly.ineq_rows().iter().enumerate() {
        if *rhs != 0.0 {
            continue;
        }
        let mut nz = row.iter().enumerate().filter(|(_, a)| **a != 0.0);
        if let (Some((j, &a)), None) = (nz.next(), nz.next()) {
            if a < 0.0 && bound_of[j].is_none() {
                bound_of[j] = Some((idx, -a));
                is_bound_row[idx] = true;
            }
        }
    }
    let mut slots = Vec::with_capacity(d);
    let mut ncols = 0;
    for bound in bound_of {
        let pos = ncols;
        ncols += 1;
        let neg = if bound.is_none() {
            ncols += 1;
            Some(ncols - 1)
        } else {
            None
        };
        slots.push(VarSlot { pos, neg, bound });
    }

    // Constraint rows of the standard form: equalities, then general
    // inequalities with a slack column each.
    let general: Vec<usize> = (0..poly.ineq_rows().len())
        .filter(|&i| !is_bound_row[i])
        .collect();
    let n_eq = poly.eq_rows().len();
    let rows = n_eq + general.len();
    let slack_start = ncols;
    let art_start = slack_start + general.len();
    let cols = art_start + rows;
    let w = cols + 1;
    let mut t = Tableau {
        rows,
        cols,
        cells: vec![0.0; (rows + 1) * w],
        basis: (art_start..art_start + rows).collect(),
    };
    let mut flips = vec![1.0; rows];
    let row_iter = poly
        .eq_rows()
        .iter()
        .chain(general.iter().map(|&i| &poly.ineq_rows()[i]));
    for (r, (coeffs, rhs)) in row_iter.enumerate() {
        let sigma = if *rhs < 0.0 { -1.0 } else { 1.0 };
        flips[r] = sigma;
        let base = r * w;
        for (slot, &a) in slots.iter().zip(coeffs) {
            t.cells[base + slot.pos] = sigma * a;
            if let Some(neg) = slot.neg {
                t.cells[base + neg] = -sigma * a;
            }
        }
        if r >= n_eq {
            t.cells[base + slack_start + (r - n_eq)] = sigma;
        }
        t.cells[base + art_start + r] = 1.0;
        t.cells[base + cols] = sigma * rhs;
    }

    // Phase 1: minimize the sum of artificials.
    let obj = rows * w;
    for r in 0..rows {
        for c in 0..art_start {
            t.cells[obj + c] -= t.cells[r * w + c];
        }
        t.cells[obj + cols] -= t.cells[r * w + cols];
    }
    let b_scale = 1.0 + (0..rows).fold(0.0_f64, |acc, r| acc.max(t.rhs(r).abs()));
    t.optimize(art_start, 1e-11 * b_scale)?;
    if -t.at(rows, cols) > 1e-9 * b_scale {
        return Err(Error::Infeasible);
    }
    for r in 0..rows {
        if t.basis[r] >= art_start {
            if let Some(c) = (0..art_start).find(|&c| t.at(r, c).abs() > 1e-9) {
                t.pivot(r, c);
            }
        }
    }

    // Phase 2.
    let mut cost = vec![0.0; cols];
    for (slot, &c) in slots.iter().zip(objective) {
        cost[slot.pos] = s * c;
        if let Some(neg) = slot.neg {
            cost[neg] = -s * c;
        }
    }
    t.cells[obj..obj + w].fill(0.0);
    t.cells[obj..obj + cols].copy_from_slice(&cost);
    for r in 0..rows {
        let cb = cost[t.basis[r]];
        if cb != 0.0 {
            for k in 0..w {
                t.cells[obj + k] -= cb * t.cells[r * w + k];
            }
        }
    }
    let c_scale = 1.0 + objective.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
    t.optimize(art_start, 1e-11 * c_scale)?;

    let mut standard = vec![0.0; cols];
    for r in 0..rows {
        standard[t.basis[r]] = t.rhs(r);
    }
    let solution: Vec<f64> = slots
        .iter()
        .map(|slot| standard[slot.pos] - slot.neg.map_or(0.0, |c| standard[c]))
        .collect();

    let y: Vec<f64> = (0..rows)
        .map(|r| -flips[r] * t.at(rows, art_start + r))
        .collect();
    let eq_duals = y[..n_eq].to_vec();
    let mut ineq_duals = vec![0.0; poly.ineq_rows().len()];
    for (k, &i) in general.iter().enumerate() {
        ineq_duals[i] = -y[n_eq + k];
    }
    for slot in &slots {
        if let Some((i, gamma)) = slot.bound {
            ineq_duals[i] = t.at(rows, slot.pos) / gamma;
        }
    }

    Ok(LpSolution {
        optimum: dot(objective, &solution),
        solution,
        eq_duals,
        ineq_duals,
    })
}
