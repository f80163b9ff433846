use gamecond::{
    complexity_probe, condition_measure, condition_measure_oracle, exact_regularity_bound,
    parametric_values, solve, ConditionOptions, MatrixGame, SamplingPlan, SolveOptions,
    StrategyProfile, Tolerances,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::Command;
use crate::error::CliError;
use crate::input::{load_game, parse_ladder, parse_point, sniff_format};
use crate::output::{config_json, emit, profile_json, to_json_string, Report};

pub fn run(command: &Command) -> Result<(), CliError> {
    let common = command.common();
    let tol = common.tolerances();
    let format = sniff_format(&common.input, common.format)?;
    let game = load_game(&common.input, format)?;

    if let Command::Report {
        ladder,
        max_iterations,
        ..
    } = command
    {
        let ladder = parse_ladder(ladder)?;
        let options = SolveOptions {
            max_iterations: *max_iterations,
            ..Default::default()
        };
        let rows = complexity_probe(&game, &ladder, &options)?;
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io_err = |e: csv::Error| CliError::Input(e.to_string());
        writer
            .write_record(["epsilon", "iterations", "final_gap"])
            .map_err(io_err)?;
        for r in &rows {
            writer
                .write_record([
                    format!("{:.16e}", r.epsilon),
                    r.iterations.to_string(),
                    format!("{:.16e}", r.final_gap),
                ])
                .map_err(io_err)?;
        }
        let buf = writer.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
        let text = String::from_utf8(buf).expect("csv writes UTF-8");
        return emit(&text, common.output.as_deref());
    }

    let (result, diagnostics) = match command {
        Command::Value(_) => value(&game)?,
        Command::Kappa {
            allow_large,
            grid_step,
            ..
        } => {
            let options = ConditionOptions {
                tolerances: tol,
                threads: common.threads.map(usize::from),
                allow_large: *allow_large,
                ..Default::default()
            };
            kappa(&game, &options, *grid_step)?
        }
        Command::KappaOracle {
            grid_step,
            samples,
            seed,
            ..
        } => {
            let plan = SamplingPlan {
                grid_step: Some(*grid_step),
                random_samples: *samples,
                seed: *seed,
            };
            let est = condition_measure_oracle(&game, &plan, &tol)?;
            (
                json!({
                    "estimate": est.estimate,
                    "argmax": profile_json(&est.argmax),
                    "evaluated": est.evaluated,
                }),
                json!({ "grid_step": grid_step, "samples": samples, "seed": seed }),
            )
        }
        Command::Reg { point, .. } => {
            let w = parse_point(point, tol.feasibility)?;
            let bound = exact_regularity_bound(&game, &w, &tol)?;
            let config = game.index_sets(&w, &tol)?;
            (
                json!({
                    "regularity_bound": bound,
                    "distance": 1.0 / bound,
                    "gap": game.gap_value(&w)?,
                    "config": config_json(&config),
                    "point": profile_json(&w),
                }),
                json!({ "nash_distance": game.nash_distance(&w)? }),
            )
        }
        Command::Solve {
            eps,
            max_iterations,
            ..
        } => {
            let options = SolveOptions {
                max_iterations: *max_iterations,
                ..Default::default()
            };
            let sol = solve(&game, *eps, &options)?;
            let history: Vec<Value> = sol
                .trace
                .history
                .iter()
                .map(|h| json!([h.iteration, h.gap]))
                .collect();
            (
                json!({
                    "epsilon": eps,
                    "iterations": sol.trace.iterations,
                    "final_gap": sol.trace.final_gap,
                    "x": sol.profile.x,
                    "y": sol.profile.y,
                }),
                json!({
                    "restart_count": sol.trace.restart_count,
                    "history": history,
                    "simplex_residual": sol.profile.simplex_residual(),
                }),
            )
        }
        Command::VzCheck { trials, seed, .. } => vz_check(&game, *trials, *seed, &tol)?,
        Command::Report { .. } => unreachable!("handled above"),
    };

    let report = Report {
        command: command.name(),
        input: common.input.display().to_string(),
        result,
        diagnostics,
        tolerances: tol,
    };
    emit(
        &to_json_string(&report.to_value(!common.no_timestamp)),
        common.output.as_deref(),
    )
}

fn value(game: &MatrixGame) -> Result<(Value, Value), CliError> {
    let v = game.value()?;
    let dual = game.negated_transpose().value()?;
    Ok((
        json!({
            "value": v.value,
            "row_strategy": v.row_strategy,
            "column_strategy": v.column_strategy,
        }),
        json!({ "duality_residual": v.value + dual.value }),
    ))
}

fn kappa(
    game: &MatrixGame,
    options: &ConditionOptions,
    grid_step: Option<f64>,
) -> Result<(Value, Value), CliError> {
    let mut report = condition_measure(game, options)?;
    if let Some(h) = grid_step {
        let plan = SamplingPlan {
            grid_step: Some(h),
            random_samples: 0,
            seed: 0,
        };
        report.oracle_estimate = Some(condition_measure_oracle(game, &plan, &options.tolerances)?.estimate);
    }
    let marginal: Vec<Value> = report.marginal_configs.iter().map(config_json).collect();
    Ok((
        json!({
            "kappa": report.kappa,
            "argmax_config": config_json(&report.argmax_config),
            "witness_distance": report.witness_distance,
            "configs_examined": report.configs_examined,
            "oracle_estimate": report.oracle_estimate,
        }),
        json!({
            "witness_point": profile_json(&report.witness_point),
            "realizability_slack": report.realizability_slack,
            "marginal_configs": marginal,
            "threads": options.threads,
        }),
    ))
}

fn vz_check(
    game: &MatrixGame,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<(Value, Value), CliError> {
    if game.all_profiles_equilibria(tol) {
        return Err(gamecond::Error::AllEquilibria.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let threshold = tol.equilibrium_threshold(game);
    let (mut worst, mut worst_scaled, mut skipped) = (0.0_f64, 0.0_f64, 0usize);
    let mut done = 0;
    while done < trials {
        let w = StrategyProfile::new(
            random_strategy(&mut rng, game.m()),
            random_strategy(&mut rng, game.n()),
        )?;
        let gap = game.gap_value(&w)?;
        if gap <= 1e3 * threshold {
            skipped += 1;
            if skipped > 100 * trials.max(1) {
                return Err(CliError::Input(
                    "could not sample non-equilibrium profiles".into(),
                ));
            }
            continue;
        }
        let z = gap * rng.gen_range(0.001..0.999);
        let v = parametric_values(game, &w, z, tol)?;
        let dev = (v.direct - v.closed_form).abs();
        worst = worst.max(dev);
        worst_scaled = worst_scaled.max(dev / (1.0 + gap));
        done += 1;
    }
    Ok((
        json!({
            "trials": trials,
            "max_deviation": worst,
            "max_scaled_deviation": worst_scaled,
        }),
        json!({ "seed": seed, "skipped_near_equilibrium": skipped }),
    ))
}

fn random_strategy(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..d).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = v.iter().sum();
    v.iter().map(|c| c / s).collect()
}
