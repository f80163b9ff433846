//! Regularity of the gap function and the condition measure of a game.
//!
//! For a non-equilibrium profile `w` the exact regularity bound is
//! `1 / dist(0, dF(w) + N(w))`, where `dF(w)` is the subdifferential of the
//! gap and `N(w)` the normal cone of the strategy simplices. Both depend on
//! `w` only through its index configuration, so the condition measure (the
//! supremum of the bound) is a maximum over the finitely many
//! configurations that occur at non-equilibrium profiles.

mod condition;
mod enumerate;
mod generators;
mod oracle;
mod parametric;

pub use condition::{condition_measure, ConditionOptions, ConditionReport};
pub use enumerate::{enumerate_configurations, realize_configuration, Realization};
pub use generators::{
    configuration_generators, exact_regularity_bound, normal_cone_generators,
    subdifferential_generators,
};
pub use oracle::{condition_measure_oracle, OracleEstimate, SamplingPlan};
pub use parametric::{
    level_set_distance, parametric_value_closed_form, parametric_value_direct,
    parametric_values, LevelSetProjection, ParametricValue,
};
