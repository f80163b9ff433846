//! Minimum-norm point of `co(points) + span(lines) + cone(rays)`.
//!
//! The span part is removed by projecting every generator onto the
//! orthogonal complement of the lines. What remains is solved with Wolfe's
//! corral method, extended so that a ray may join the corral: its weight is
//! free of the affine constraint and only has to stay nonnegative.

use nalgebra::{DMatrix, DVector};

use super::{dot, norm};
use crate::error::{Error, Result};

const MAX_MAJOR_CYCLES: usize = 10_000;
/// Corral weights at or below this are treated as zero.
const WEIGHT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    dim: usize,
    pub points: Vec<Vec<f64>>,
    pub lines: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
}

impl GeneratorSet {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
            lines: Vec::new(),
            rays: Vec::new(),
        }
    }

    pub fn from_parts(
        dim: usize,
        points: Vec<Vec<f64>>,
        lines: Vec<Vec<f64>>,
        rays: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let set = Self {
            dim,
            points,
            lines,
            rays,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Minkowski sum with the convex hull of `points`.
    pub fn with_points(mut self, points: Vec<Vec<f64>>) -> Self {
        self.points.extend(points);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for g in self.points.iter().chain(&self.lines).chain(&self.rays) {
            if g.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: g.len(),
                });
            }
            if g.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidArgument("generator has non-finite entries".into()));
            }
        }
        Ok(())
    }
}

/// The nearest point to the origin, `point = sum weights_i points_i +
/// sum line_coeffs_l lines_l + sum ray_weights_r rays_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinNormPoint {
    pub distance: f64,
    pub point: Vec<f64>,
    pub weights: Vec<f64>,
    pub line_coeffs: Vec<f64>,
    pub ray_weights: Vec<f64>,
}

impl MinNormPoint {
    /// Recombines the witness coefficients.
    pub fn reconstruct(&self, set: &GeneratorSet) -> Vec<f64> {
        let mut out = vec![0.0; set.dim()];
        let terms = set
            .points
            .iter()
            .zip(&self.weights)
            .chain(set.lines.iter().zip(&self.line_coeffs))
            .chain(set.rays.iter().zip(&self.ray_weights));
        for (g, c) in terms {
            out.iter_mut().zip(g).for_each(|(o, gi)| *o += c * gi);
        }
        out
    }

    /// Largest violation of the optimality conditions at the witness:
    /// weights in the simplex, ray weights nonnegative, the point orthogonal
    /// to every line, no point of the hull and no ray direction reducing the
    /// norm, and rays in use orthogonal to the point.
    pub fn kkt_residual(&self, set: &GeneratorSet) -> f64 {
        let x = &self.point;
        let hull_level: f64 = set
            .points
            .iter()
            .zip(&self.weights)
            .map(|(p, l)| l * dot(x, p))
            .sum();
        let weight_sum = (self.weights.iter().sum::<f64>() - 1.0).abs();
        let negative = self
            .weights
            .iter()
            .chain(&self.ray_weights)
            .fold(0.0_f64, |acc, w| acc.max(-w));
        let lines = set.lines.iter().fold(0.0_f64, |acc, l| acc.max(dot(x, l).abs()));
        let points = set
            .points
            .iter()
            .fold(0.0_f64, |acc, p| acc.max(hull_level - dot(x, p)));
        let rays = set
            .rays
            .iter()
            .zip(&self.ray_weights)
            .fold(0.0_f64, |acc, (r, mu)| {
                let xr = dot(x, r);
                acc.max(-xr).max((mu * xr).abs())
            });
        weight_sum.max(negative).max(lines).max(points).max(rays)
    }
}

/// Orthonormal basis of the span of `vectors`, dropping dependent ones.
fn orthonormal_basis(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &r);
                r.iter_mut().zip(q).for_each(|(ri, qi)| *ri -= c * qi);
            }
        }
        let len = norm(&r);
        if len > 1e-12 * norm(v).max(f64::MIN_POSITIVE) {
            r.iter_mut().for_each(|ri| *ri /= len);
            basis.push(r);
        }
    }
    basis
}

fn remove_span(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, &r);
            r.iter_mut().zip(q).for_each(|(ri, qi)| *ri -= c * qi);
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Member {
    Point(usize),
    Ray(usize),
}

struct Corral<'a> {
    points: &'a [Vec<f64>],
    rays: &'a [Vec<f64>],
    members: Vec<Member>,
    weights: Vec<f64>,
}

impl Corral<'_> {
    fn vector(&self, m: Member) -> &[f64] {
        match m {
            Member::Point(i) => &self.points[i],
            Member::Ray(r) => &self.rays[r],
        }
    }

    fn combine(&self, weights: &[f64]) -> Vec<f64> {
        let dim = self.points[0].len();
        let mut x = vec![0.0; dim];
        for (&m, &c) in self.members.iter().zip(weights) {
            x.iter_mut().zip(self.vector(m)).for_each(|(xi, gi)| *xi += c * gi);
        }
        x
    }

    /// Minimizes the norm over the affine hull of the corral points plus
    /// the span of the corral rays.
    fn affine_minimizer(&self) -> Result<Vec<f64>> {
        let anchor_pos = self
            .members
            .iter()
            .position(|m| matches!(m, Member::Point(_)))
            .ok_or_else(|| Error::NumericalFailure("corral lost all points".into()))?;
        let anchor = self.vector(self.members[anchor_pos]);
        let others: Vec<usize> = (0..self.members.len()).filter(|&k| k != anchor_pos).collect();
        let mut out = vec![0.0; self.members.len()];
        if others.is_empty() {
            out[anchor_pos] = 1.0;
            return Ok(out);
        }
        let dim = anchor.len();
        let b = DMatrix::from_fn(dim, others.len(), |i, j| match self.members[others[j]] {
            Member::Point(p) => self.points[p][i] - anchor[i],
            Member::Ray(r) => self.rays[r][i],
        });
        let rhs = -DVector::from_column_slice(anchor);
        let qr = b.qr();
        let qtb = qr.q().transpose() * rhs;
        let coeffs = qr
            .r()
            .solve_upper_triangular(&qtb)
            .ok_or_else(|| Error::NumericalFailure("degenerate corral".into()))?;
        let mut anchor_weight = 1.0;
        for (&k, &c) in others.iter().zip(coeffs.iter()) {
            out[k] = c;
            if matches!(self.members[k], Member::Point(_)) {
                anchor_weight -= c;
            }
        }
        out[anchor_pos] = anchor_weight;
        Ok(out)
    }
}

/// Distance from the origin to `co(points) + span(lines) + cone(rays)` with
/// a witness decomposition.
pub fn min_norm_point(set: &GeneratorSet) -> Result<MinNormPoint> {
    set.validate()?;
    if set.points.is_empty() {
        return Err(Error::NoPoints);
    }
    let basis = orthonormal_basis(&set.lines);
    let points: Vec<Vec<f64>> = set.points.iter().map(|p| remove_span(p, &basis)).collect();
    let rays: Vec<Vec<f64>> = set.rays.iter().map(|r| remove_span(r, &basis)).collect();

    let scale = points
        .iter()
        .chain(&rays)
        .map(|g| norm(g))
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let start = (0..points.len())
        .min_by(|&a, &b| norm(&points[a]).total_cmp(&norm(&points[b])))
        .unwrap();
    let mut corral = Corral {
        points: &points,
        rays: &rays,
        members: vec![Member::Point(start)],
        weights: vec![1.0],
    };
    let mut x = points[start].clone();

    let mut converged = false;
    for _ in 0..MAX_MAJOR_CYCLES {
        let xx = dot(&x, &x);
        if xx.sqrt() <= 1e-15 * scale {
            converged = true;
            break;
        }
        let candidates = (0..points.len())
            .map(|i| (Member::Point(i), dot(&x, &points[i]) - xx))
            .chain((0..rays.len()).map(|r| (Member::Ray(r), dot(&x, &rays[r]))));
        let (entering, score) = candidates
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one point");
        if score >= -1e-13 * scale * scale || corral.members.contains(&entering) {
            converged = true;
            break;
        }
        corral.members.push(entering);
        corral.weights.push(0.0);

        // Minor cycles: move toward the affine minimizer, dropping members
        // whose weight reaches zero on the way.
        loop {
            let target = corral.affine_minimizer()?;
            if target.iter().all(|&t| t > WEIGHT_FLOOR) {
                corral.weights = target;
                break;
            }
            let theta = corral
                .weights
                .iter()
                .zip(&target)
                .filter(|(_, &t)| t <= WEIGHT_FLOOR)
                .map(|(&w, &t)| if w - t > 0.0 { w / (w - t) } else { 0.0 })
                .fold(1.0_f64, f64::min);
            let blended: Vec<f64> = corral
                .weights
                .iter()
                .zip(&target)
                .map(|(&w, &t)| w + theta * (t - w))
                .collect();
            let keep: Vec<bool> = blended.iter().map(|&w| w > WEIGHT_FLOOR).collect();
            if keep.iter().all(|&k| k) {
                // theta landed exactly on a floor value; drop the smallest.
                let (smallest, _) = blended
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .unwrap();
                corral.members.remove(smallest);
                corral.weights = blended;
                corral.weights.remove(smallest);
            } else {
                let mut k = 0;
                corral.members.retain(|_| {
                    k += 1;
                    keep[k - 1]
                });
                corral.weights = blended
                    .into_iter()
                    .zip(&keep)
                    .filter_map(|(w, &k)| k.then_some(w))
                    .collect();
            }
            renormalize(&mut corral);
            if corral.members.len() == 1 {
                break;
            }
        }
        let next = corral.combine(&corral.weights);
        if dot(&next, &next) >= xx * (1.0 - 1e-15) {
            // The entering generator was dropped again: no further descent.
            converged = true;
            break;
        }
        x = next;
    }
    if !converged {
        return Err(Error::NumericalFailure("min-norm point did not converge".into()));
    }

    let mut weights = vec![0.0; set.points.len()];
    let mut ray_weights = vec![0.0; set.rays.len()];
    for (&m, &c) in corral.members.iter().zip(&corral.weights) {
        match m {
            Member::Point(i) => weights[i] = c,
            Member::Ray(r) => ray_weights[r] = c,
        }
    }

    // Recover the span coefficients in the original coordinates.
    let mut point = vec![0.0; set.dim()];
    for (g, c) in set.points.iter().zip(&weights).chain(set.rays.iter().zip(&ray_weights)) {
        point.iter_mut().zip(g).for_each(|(o, gi)| *o += c * gi);
    }
    let line_coeffs = if set.lines.is_empty() {
        Vec::new()
    } else {
        let l = DMatrix::from_fn(set.dim(), set.lines.len(), |i, j| set.lines[j][i]);
        let rhs = -DVector::from_column_slice(&point);
        let coeffs = l
            .svd(true, true)
            .solve(&rhs, 1e-13)
            .map_err(|e| Error::NumericalFailure(e.to_string()))?;
        coeffs.iter().copied().collect()
    };
    for (line, c) in set.lines.iter().zip(&line_coeffs) {
        point.iter_mut().zip(line).for_each(|(o, li)| *o += c * li);
    }
    Ok(MinNormPoint {
        distance: norm(&point),
        point,
        weights,
        line_coeffs,
        ray_weights,
    })
}

/// Keeps the point weights summing to one after members are dropped.
fn renormalize(corral: &mut Corral<'_>) {
    let total: f64 = corral
        .members
        .iter()
        .zip(&corral.weights)
        .filter(|(m, _)| matches!(m, Member::Point(_)))
        .map(|(_, w)| w)
        .sum();
    if total > 0.0 {
        for (m, w) in corral.members.iter().zip(corral.weights.iter_mut()) {
            if matches!(m, Member::Point(_)) {
                *w /= total;
            }
        }
    }
}
