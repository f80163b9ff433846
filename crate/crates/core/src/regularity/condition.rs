use std::cmp::Reverse;

use super::enumerate::{halves, pair_config, pair_passes, realize_configuration, score_vectors};
use crate::error::{Error, Result};
use crate::game::{IndexConfiguration, MatrixGame, StrategyProfile};
use crate::tolerance::Tolerances;

/// Default refusal threshold on `m + n` for configuration enumeration.
pub const DEFAULT_SIZE_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionOptions {
    pub tolerances: Tolerances,
    /// Worker threads for the enumeration; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Enumerate games with `m + n` above the size limit anyway.
    pub allow_large: bool,
    pub size_limit: usize,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            threads: None,
            allow_large: false,
            size_limit: DEFAULT_SIZE_LIMIT,
        }
    }
}

impl ConditionOptions {
    pub(crate) fn check_size(&self, game: &MatrixGame) -> Result<()> {
        if !self.allow_large && game.m() + game.n() > self.size_limit {
            return Err(Error::TooLarge {
                m: game.m(),
                n: game.n(),
                limit: self.size_limit,
            });
        }
        Ok(())
    }

    /// Runs `op` on a dedicated pool when a thread count is set.
    pub(crate) fn install<R: Send>(&self, op: impl FnOnce() -> Result<R> + Send) -> Result<R> {
        match self.threads {
            Some(threads) => rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?
                .install(op),
            None => op(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub kappa: f64,
    pub argmax_config: IndexConfiguration,
    /// Distance from the origin to the argmax configuration's generator
    /// set; `kappa` is its reciprocal.
    pub witness_distance: f64,
    /// Number of realizable configurations compared.
    pub configs_examined: usize,
    /// Realizability slack of the argmax configuration.
    pub realizability_slack: f64,
    /// Profile realizing the argmax configuration.
    pub witness_point: StrategyProfile,
    /// Configurations at least as bad as the argmax whose realizability
    /// slack lies within ten margins of zero.
    pub marginal_configs: Vec<IndexConfiguration>,
    pub oracle_estimate: Option<f64>,
    pub tolerances: Tolerances,
}

/// The condition measure as the largest regularity bound over the
/// configurations that occur at non-equilibrium profiles.
///
/// The generator set of a configuration is a product of one set per
/// player (the hull of stacked pairs `(a_i, b_k)` is the product of the two
/// hulls), so squared distances add and each half is solved once. Ties on
/// the distance go to the configuration with the most zero coordinates,
/// then to the lexicographically smallest.
pub fn condition_measure(game: &MatrixGame, options: &ConditionOptions) -> Result<ConditionReport> {
    let tol = &options.tolerances;
    if game.all_profiles_equilibria(tol) {
        return Err(Error::AllEquilibria);
    }
    options.check_size(game)?;
    let margin = tol.margin;
    let m = game.m();

    options.install(|| {
        let xs = halves(&score_vectors(game), margin)?;
        let ys = halves(&score_vectors(&game.negated_transpose()), margin)?;

        let mut candidates = Vec::new();
        let mut borderline = Vec::new();
        for (a, x) in xs.iter().enumerate() {
            for (b, y) in ys.iter().enumerate() {
                let d2 = x.distance_sq + y.distance_sq;
                if pair_passes(x, y, margin) {
                    candidates.push((d2, a, b));
                }
                let slack_hint = x.slack.min(y.slack).min(x.top + y.top);
                if slack_hint > 0.0 && slack_hint < 10.0 * margin {
                    borderline.push((d2, a, b));
                }
            }
        }
        if candidates.is_empty() {
            return Err(Error::AllEquilibria);
        }
        let configs_examined = candidates.len();
        candidates.sort_by(|p, q| p.0.total_cmp(&q.0));

        let mut start = 0;
        while start < candidates.len() {
            let lead = candidates[start].0;
            let end = candidates[start..]
                .iter()
                .position(|c| c.0 > lead + 1e-10 * (1.0 + lead))
                .map_or(candidates.len(), |p| start + p);
            let mut group: Vec<(f64, IndexConfiguration)> = candidates[start..end]
                .iter()
                .map(|&(d2, a, b)| (d2, pair_config(m, &xs[a], &ys[b])))
                .collect();
            group.sort_by(|p, q| {
                (Reverse(p.1.zero_coords.len()), &p.1).cmp(&(Reverse(q.1.zero_coords.len()), &q.1))
            });
            for (d2, config) in group {
                let realization = realize_configuration(game, &config)?;
                if realization.slack <= margin {
                    continue;
                }
                if !(d2 > 0.0) {
                    return Err(Error::NumericalFailure(format!(
                        "zero distance for realizable configuration {config}"
                    )));
                }
                let witness_distance = d2.sqrt();
                let mut marginal_configs: Vec<IndexConfiguration> = borderline
                    .iter()
                    .filter(|c| c.0 <= d2 * (1.0 + 1e-9))
                    .map(|&(_, a, b)| pair_config(m, &xs[a], &ys[b]))
                    .collect();
                marginal_configs.sort();
                marginal_configs.dedup();
                return Ok(ConditionReport {
                    kappa: 1.0 / witness_distance,
                    argmax_config: config,
                    witness_distance,
                    configs_examined,
                    realizability_slack: realization.slack,
                    witness_point: realization.point,
                    marginal_configs,
                    oracle_estimate: None,
                    tolerances: *tol,
                });
            }
            start = end;
        }
        Err(Error::NumericalFailure(
            "no candidate configuration passed the joint realizability check".into(),
        ))
    })
}
