//! Small dense convex kernels: simplex projection, linear programming,
//! projection onto H-polytopes and minimum-norm points of generator sets.

mod lp;
mod min_norm;
mod polyhedron;
mod simplex;

pub use lp::{lp_solve, LpCertificate, LpSolution, Sense};
pub use min_norm::{min_norm_point, GeneratorSet, MinNormPoint};
pub use polyhedron::{project_onto_polyhedron, Polyhedron, Projection};
pub use simplex::project_onto_simplex;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
