use nalgebra::{DMatrix, DVector};

use super::lp::{lp_solve, Sense};
use super::{dot, norm};
use crate::error::{Error, Result};

const MAX_ACTIVE_SET_STEPS: usize = 10_000;

/// `{w : a.w = b for every equality row, a.w <= b for every inequality row}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    dim: usize,
    eq_rows: Vec<(Vec<f64>, f64)>,
    ineq_rows: Vec<(Vec<f64>, f64)>,
}

impl Polyhedron {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            eq_rows: Vec::new(),
            ineq_rows: Vec::new(),
        }
    }

    /// The probability simplex `{w >= 0, sum w = 1}`.
    pub fn simplex(dim: usize) -> Self {
        let mut p = Self::new(dim);
        p.push_nonnegative(0..dim);
        p.push_eq(vec![1.0; dim], 1.0);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eq_rows(&self) -> &[(Vec<f64>, f64)] {
        &self.eq_rows
    }

    pub fn ineq_rows(&self) -> &[(Vec<f64>, f64)] {
        &self.ineq_rows
    }

    /// # Panics
    /// If `row` does not have length `dim`.
    pub fn push_eq(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.dim, "row dimension");
        self.eq_rows.push((row, rhs));
    }

    /// # Panics
    /// If `row` does not have length `dim`.
    pub fn push_le(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.dim, "row dimension");
        self.ineq_rows.push((row, rhs));
    }

    /// Adds `w_j >= 0` as the row `-w_j <= 0`.
    pub fn push_nonnegative(&mut self, coords: impl IntoIterator<Item = usize>) {
        for j in coords {
            let mut row = vec![0.0; self.dim];
            row[j] = -1.0;
            self.push_le(row, 0.0);
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        for (row, rhs) in self.eq_rows.iter().chain(&self.ineq_rows) {
            if row.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: row.len(),
                });
            }
            if !rhs.is_finite() || row.iter().any(|a| !a.is_finite()) {
                return Err(Error::InvalidArgument("polyhedron has non-finite rows".into()));
            }
        }
        Ok(())
    }

    /// Largest constraint violation at `w`.
    pub fn max_violation(&self, w: &[f64]) -> f64 {
        let eq = self
            .eq_rows
            .iter()
            .map(|(a, b)| (dot(a, w) - b).abs());
        let le = self.ineq_rows.iter().map(|(a, b)| (dot(a, w) - b).max(0.0));
        eq.chain(le).fold(0.0, f64::max)
    }

    pub fn contains(&self, w: &[f64], tol: f64) -> bool {
        self.max_violation(w) <= tol
    }
}

/// Nearest point of a polyhedron with KKT multipliers:
/// `point - v + A_eq' u + A_le' lambda = 0`, `lambda >= 0`, complementary.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub point: Vec<f64>,
    pub distance: f64,
    pub eq_multipliers: Vec<f64>,
    pub ineq_multipliers: Vec<f64>,
}

impl Projection {
    /// Largest of the stationarity, sign and complementarity residuals.
    pub fn kkt_residual(&self, v: &[f64], poly: &Polyhedron) -> f64 {
        let mut g: Vec<f64> = self.point.iter().zip(v).map(|(p, q)| p - q).collect();
        let rows = poly
            .eq_rows()
            .iter()
            .zip(&self.eq_multipliers)
            .chain(poly.ineq_rows().iter().zip(&self.ineq_multipliers));
        for ((a, _), mult) in rows {
            for (gi, ai) in g.iter_mut().zip(a) {
                *gi += mult * ai;
            }
        }
        let stationarity = g.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        let sign = self.ineq_multipliers.iter().fold(0.0_f64, |acc, l| acc.max(-l));
        let complementarity = poly
            .ineq_rows()
            .iter()
            .zip(&self.ineq_multipliers)
            .fold(0.0_f64, |acc, ((a, b), l)| {
                acc.max((l * (dot(a, &self.point) - b)).abs())
            });
        stationarity.max(sign).max(complementarity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Active {
    Eq(usize),
    Le(usize),
}

/// Orthonormal basis used to keep the working set linearly independent.
struct SpanBasis(Vec<Vec<f64>>);

impl SpanBasis {
    fn try_add(&mut self, a: &[f64]) -> bool {
        let mut r = a.to_vec();
        for q in &self.0 {
            let c = dot(q, &r);
            r.iter_mut().zip(q).for_each(|(ri, qi)| *ri -= c * qi);
        }
        let len = norm(&r);
        if len <= 1e-10 * norm(a).max(f64::MIN_POSITIVE) {
            return false;
        }
        r.iter_mut().for_each(|ri| *ri /= len);
        self.0.push(r);
        true
    }
}

/// Euclidean projection onto a polyhedron: a primal active-set method on
/// `min 1/2 |w - v|^2`, started from a vertex found by LP phase one.
pub fn project_onto_polyhedron(v: &[f64], poly: &Polyhedron) -> Result<Projection> {
    let d = poly.dim();
    if v.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.len(),
        });
    }
    poly.validate()?;
    let scale = 1.0 + norm(v);
    if poly.contains(v, 1e-13 * scale) {
        return Ok(Projection {
            point: v.to_vec(),
            distance: 0.0,
            eq_multipliers: vec![0.0; poly.eq_rows().len()],
            ineq_multipliers: vec![0.0; poly.ineq_rows().len()],
        });
    }
    let mut w = match lp_solve(&vec![0.0; d], poly, Sense::Minimize) {
        Ok(sol) => sol.solution,
        Err(Error::Infeasible) => return Err(Error::InfeasiblePolyhedron),
        Err(e) => return Err(e),
    };

    let row = |a: Active| -> &(Vec<f64>, f64) {
        match a {
            Active::Eq(i) => &poly.eq_rows()[i],
            Active::Le(i) => &poly.ineq_rows()[i],
        }
    };
    let rebuild = |working: &[Active]| -> Vec<Active> {
        let mut basis = SpanBasis(Vec::new());
        working
            .iter()
            .copied()
            .filter(|&a| basis.try_add(&row(a).0))
            .collect()
    };

    let mut candidates: Vec<Active> = (0..poly.eq_rows().len()).map(Active::Eq).collect();
    let active_tol = 1e-10 * (1.0 + norm(&w));
    candidates.extend(
        (0..poly.ineq_rows().len())
            .filter(|&i| {
                let (a, b) = &poly.ineq_rows()[i];
                (dot(a, &w) - b).abs() <= active_tol * (1.0 + norm(a))
            })
            .map(Active::Le),
    );
    let mut working = rebuild(&candidates);
    let mut in_working = vec![false; poly.ineq_rows().len()];
    for a in &working {
        if let Active::Le(i) = a {
            in_working[*i] = true;
        }
    }

    for _ in 0..MAX_ACTIVE_SET_STEPS {
        let r: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a - b).collect();
        let (step, multipliers) = if working.is_empty() {
            (r.clone(), Vec::new())
        } else {
            let k = working.len();
            let m = DMatrix::from_fn(d, k, |i, j| row(working[j]).0[i]);
            let qr = m.qr();
            let q = qr.q();
            let rr = qr.r();
            let qtr = q.transpose() * DVector::from_column_slice(&r);
            let along = &q * &qtr;
            let step: Vec<f64> = r.iter().zip(along.iter()).map(|(a, b)| a - b).collect();
            let lambda = rr
                .solve_upper_triangular(&qtr)
                .ok_or_else(|| Error::NumericalFailure("singular working set".into()))?;
            (step, lambda.iter().copied().collect())
        };

        let step_len = norm(&step);
        if step_len <= 1e-13 * (scale + norm(&w)) {
            let worst = working
                .iter()
                .zip(&multipliers)
                .filter(|(a, _)| matches!(a, Active::Le(_)))
                .min_by(|x, y| x.1.total_cmp(y.1));
            match worst {
                Some((&Active::Le(i), &l)) if l < -1e-12 * (1.0 + norm(&r)) => {
                    working.retain(|&a| a != Active::Le(i));
                    in_working[i] = false;
                    continue;
                }
                _ => {}
            }
            let mut eq_multipliers = vec![0.0; poly.eq_rows().len()];
            let mut ineq_multipliers = vec![0.0; poly.ineq_rows().len()];
            for (a, l) in working.iter().zip(&multipliers) {
                match *a {
                    Active::Eq(i) => eq_multipliers[i] = *l,
                    Active::Le(i) => ineq_multipliers[i] = l.max(0.0),
                }
            }
            let distance = w.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            return Ok(Projection {
                point: w,
                distance,
                eq_multipliers,
                ineq_multipliers,
            });
        }

        let mut alpha = 1.0;
        let mut blocking = None;
        for (i, (a, b)) in poly.ineq_rows().iter().enumerate() {
            if in_working[i] {
                continue;
            }
            let ap = dot(a, &step);
            if ap <= 1e-14 * norm(a) * step_len {
                continue;
            }
            let t = (b - dot(a, &w)).max(0.0) / ap;
            if t < alpha {
                alpha = t;
                blocking = Some(i);
            }
        }
        w.iter_mut().zip(&step).for_each(|(wi, si)| *wi += alpha * si);
        if let Some(i) = blocking {
            working.push(Active::Le(i));
            in_working[i] = true;
        }
    }
    Err(Error::NumericalFailure("active-set projection did not terminate".into()))
}
