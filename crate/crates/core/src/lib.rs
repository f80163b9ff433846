//! Condition measure of two-person zero-sum matrix games.
//!
//! The condition measure `kappa(A)` is the smallest `k` such that every
//! strategy profile `w` satisfies `dist(w, S) <= k F(w)`, where `F` is the
//! duality gap and `S` the set of equilibria. It is computed exactly by
//! enumerating the index configurations that occur at non-equilibrium
//! profiles and solving one min-norm-point problem per configuration.
//!
//! ```
//! use gamecond::{condition_measure, ConditionOptions, MatrixGame};
//!
//! let pennies = MatrixGame::new(&[vec![1.0, -1.0], vec![-1.0, 1.0]])?;
//! let report = condition_measure(&pennies, &ConditionOptions::default())?;
//! assert!((report.kappa - 0.5_f64.sqrt()).abs() < 1e-12);
//! # Ok::<(), gamecond::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod game;
pub mod geometry;
pub mod regularity;
pub mod smoothing;
pub mod tolerance;

pub use error::{Error, Result};
pub use game::{GameValue, IndexConfiguration, MatrixGame, StrategyProfile};
pub use geometry::{
    lp_solve, min_norm_point, project_onto_polyhedron, project_onto_simplex, GeneratorSet,
    LpCertificate, LpSolution, MinNormPoint, Polyhedron, Projection, Sense,
};
pub use regularity::{
    condition_measure, condition_measure_oracle, configuration_generators,
    enumerate_configurations, exact_regularity_bound, level_set_distance,
    normal_cone_generators, parametric_value_closed_form, parametric_value_direct,
    parametric_values, realize_configuration, subdifferential_generators, ConditionOptions,
    ConditionReport, LevelSetProjection, OracleEstimate, ParametricValue, Realization,
    SamplingPlan,
};
pub use smoothing::{complexity_probe, solve, HistoryPoint, ProbeRow, Solution, SolveOptions, SolveTrace};
pub use tolerance::Tolerances;
