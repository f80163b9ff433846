//! Certified equilibrium solving by Nesterov smoothing.
//!
//! The bilinear saddle function `x'Ay` is smoothed on both sides with an
//! entropy prox term and solved by the excessive gap technique. An outer
//! loop restarts the method, recentring the prox terms at the current
//! iterate, every time the exact gap has halved since the last restart.
//!
//! The stopping test uses the exact gap `F`, never a smoothed estimate, so
//! a returned profile is an `epsilon`-equilibrium by direct evaluation.

use crate::error::{Error, Result};
use crate::game::{max_of, MatrixGame, StrategyProfile};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub max_iterations: usize,
    /// Restart whenever the gap halves.
    pub restart: bool,
    /// Weight of the uniform distribution mixed into a recentred prox
    /// center, which keeps every strategy reachable.
    pub center_mixing: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iterations: 1_000_000,
            restart: true,
            center_mixing: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryPoint {
    pub iteration: usize,
    /// Exact gap at `profile`.
    pub gap: f64,
    pub profile: StrategyProfile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    pub epsilon: f64,
    pub iterations: usize,
    pub final_gap: f64,
    /// Iterate 0, every power-of-two iteration, every restart and the last
    /// iterate.
    pub history: Vec<HistoryPoint>,
    pub restart_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub profile: StrategyProfile,
    pub trace: SolveTrace,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub epsilon: f64,
    pub iterations: usize,
    pub final_gap: f64,
}

/// `center * exp(g)`, normalized, computed with the usual shift.
fn softmax(center: &[f64], g: impl Iterator<Item = f64>) -> Vec<f64> {
    let g: Vec<f64> = g.collect();
    let top = max_of(&g);
    let mut out: Vec<f64> = center
        .iter()
        .zip(&g)
        .map(|(c, v)| c * (v - top).exp())
        .collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
    out
}

fn mix(a: &[f64], b: &[f64], tau: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(u, v)| (1.0 - tau) * u + tau * v).collect()
}

fn recenter(v: &[f64], theta: f64) -> Vec<f64> {
    let uniform = 1.0 / v.len() as f64;
    v.iter().map(|c| (1.0 - theta) * c + theta * uniform).collect()
}

/// One run of the excessive gap technique from fixed prox centers.
struct Phase<'a> {
    game: &'a MatrixGame,
    cx: Vec<f64>,
    cy: Vec<f64>,
    mu1: f64,
    mu2: f64,
    k: usize,
}

impl Phase<'_> {
    /// Player 1 minimizes: `x ~ c exp(-Ay / mu1)`. `row_scores` is `-Ay`.
    fn best_x(&self, base: &[f64], y: &[f64], scale: f64) -> Vec<f64> {
        let s = self.game.row_scores(y);
        softmax(base, s.into_iter().map(|v| v * scale / self.mu1))
    }

    /// Player 2 maximizes: `y ~ c exp(A'x / mu2)`.
    fn best_y(&self, base: &[f64], x: &[f64], scale: f64) -> Vec<f64> {
        let s = self.game.column_scores(x);
        softmax(base, s.into_iter().map(|v| v * scale / self.mu2))
    }

    fn start(&self) -> (Vec<f64>, Vec<f64>) {
        let y = self.best_y(&self.cy, &self.cx, 1.0);
        let x = self.best_x(&self.cx, &y, 1.0);
        (x, y)
    }

    fn step(&mut self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let tau = 2.0 / (self.k as f64 + 3.0);
        let ratio = tau / (1.0 - tau);
        let next = if self.k.is_multiple_of(2) {
            let x_breve = self.best_x(&self.cx, y, 1.0);
            let x_hat = mix(x, &x_breve, tau);
            let y_hat = self.best_y(&self.cy, &x_hat, 1.0);
            let x_tilde = self.best_x(&x_breve, &y_hat, ratio);
            self.mu1 *= 1.0 - tau;
            (mix(x, &x_tilde, tau), mix(y, &y_hat, tau))
        } else {
            let y_breve = self.best_y(&self.cy, x, 1.0);
            let y_hat = mix(y, &y_breve, tau);
            let x_hat = self.best_x(&self.cx, &y_hat, 1.0);
            let y_tilde = self.best_y(&y_breve, &x_hat, ratio);
            self.mu2 *= 1.0 - tau;
            (mix(x, &x_hat, tau), mix(y, &y_tilde, tau))
        };
        self.k += 1;
        next
    }
}

/// Finds a profile with gap at most `epsilon`, starting from the uniform
/// strategies. The iterate sequence does not depend on `epsilon`, only the
/// stopping point does.
pub fn solve(game: &MatrixGame, epsilon: f64, options: &SolveOptions) -> Result<Solution> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !(options.center_mixing > 0.0 && options.center_mixing <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "center mixing must be in (0, 1], got {}",
            options.center_mixing
        )));
    }
    let (m, n) = (game.m(), game.n());
    let start = StrategyProfile::barycenter(m, n);
    let gap_of = |x: &[f64], y: &[f64]| max_of(&game.column_scores(x)) + max_of(&game.row_scores(y));
    let mut gap = gap_of(&start.x, &start.y);
    let mut history = vec![HistoryPoint {
        iteration: 0,
        gap,
        profile: start.clone(),
    }];
    let mut best = (gap, start.clone());
    let mut iteration: usize = 0;
    let mut restart_count = 0;

    let finish = |profile: StrategyProfile,
                  gap: f64,
                  iteration: usize,
                  restart_count: usize,
                  mut history: Vec<HistoryPoint>| {
        if history.last().is_none_or(|h| h.iteration != iteration) {
            history.push(HistoryPoint {
                iteration,
                gap,
                profile: profile.clone(),
            });
        }
        Solution {
            profile,
            trace: SolveTrace {
                epsilon,
                iterations: iteration,
                final_gap: gap,
                history,
                restart_count,
            },
        }
    };

    if gap <= epsilon {
        return Ok(finish(start, gap, 0, 0, history));
    }

    let norm = game.max_abs();
    let (mut cx, mut cy) = (start.x, start.y);
    let mut phase_gap = gap;
    loop {
        let mut phase = Phase {
            game,
            cx: cx.clone(),
            cy: cy.clone(),
            mu1: norm,
            mu2: norm,
            k: 0,
        };
        let (mut x, mut y) = phase.start();
        loop {
            iteration += 1;
            gap = gap_of(&x, &y);
            let restarting = options.restart && gap <= 0.5 * phase_gap;
            if iteration.is_power_of_two() || restarting {
                history.push(HistoryPoint {
                    iteration,
                    gap,
                    profile: StrategyProfile {
                        x: x.clone(),
                        y: y.clone(),
                    },
                });
            }
            if gap < best.0 {
                best = (gap, StrategyProfile { x: x.clone(), y: y.clone() });
            }
            if gap <= epsilon {
                let profile = StrategyProfile { x, y };
                return Ok(finish(profile, gap, iteration, restart_count, history));
            }
            if iteration >= options.max_iterations {
                let (gap, profile) = best;
                return Err(Error::IterationLimitExceeded(Box::new(finish(
                    profile,
                    gap,
                    iteration,
                    restart_count,
                    history,
                ))));
            }
            if restarting {
                restart_count += 1;
                phase_gap = gap;
                cx = recenter(&x, options.center_mixing);
                cy = recenter(&y, options.center_mixing);
                break;
            }
            (x, y) = phase.step(&x, &y);
        }
    }
}

/// One independent solve per target, in ladder order.
pub fn complexity_probe(
    game: &MatrixGame,
    ladder: &[f64],
    options: &SolveOptions,
) -> Result<Vec<ProbeRow>> {
    if ladder.is_empty() {
        return Err(Error::InvalidArgument("epsilon ladder is empty".into()));
    }
    if ladder.iter().any(|e| !(*e > 0.0)) || ladder.windows(2).any(|p| !(p[1] < p[0])) {
        return Err(Error::InvalidArgument(
            "epsilon ladder must be positive and strictly decreasing".into(),
        ));
    }
    ladder
        .iter()
        .map(|&epsilon| {
            let sol = solve(game, epsilon, options)?;
            Ok(ProbeRow {
                epsilon,
                iterations: sol.trace.iterations,
                final_gap: sol.trace.final_gap,
            })
        })
        .collect()
}
