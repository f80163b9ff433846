//! Numerical tolerances shared across the crate.
//!
//! The geometric sets involved (argmax sets, zero patterns, the equilibrium
//! set) are defined by exact equalities; floating point needs explicit
//! thresholds. Thresholds that compare products of payoff data scale with
//! `1 + max |a_ij|`.

use crate::game::MatrixGame;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Simplex membership: component lower bound and sum residual.
    pub feasibility: f64,
    /// Relative threshold for ties among best responses.
    pub tie: f64,
    /// A coordinate at or below this is treated as zero.
    pub zero: f64,
    /// Relative gap threshold below which a profile counts as an equilibrium.
    pub equilibrium: f64,
    /// Minimum realizability slack for an index configuration.
    pub margin: f64,
    /// Slack allowed when comparing a sampling estimate with the exact measure.
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feasibility: 1e-9,
            tie: 1e-9,
            zero: 1e-12,
            equilibrium: 1e-9,
            margin: 1e-9,
            oracle: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn tie_threshold(&self, game: &MatrixGame) -> f64 {
        self.tie * (1.0 + game.max_abs())
    }

    pub fn equilibrium_threshold(&self, game: &MatrixGame) -> f64 {
        self.equilibrium * (1.0 + game.max_abs())
    }
}
