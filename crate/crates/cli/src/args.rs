use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gamecond::Tolerances;

#[derive(Debug, Parser)]
#[command(name = "gamecond", version, about = "Condition measure and equilibria of zero-sum matrix games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Game value and optimal strategies.
    Value(Common),
    /// Exact condition measure by configuration enumeration.
    Kappa {
        #[command(flatten)]
        common: Common,
        /// Enumerate even when m + n exceeds the default limit.
        #[arg(long)]
        allow_large: bool,
        /// Also run the sampling oracle with this grid step.
        #[arg(long, value_parser = positive)]
        grid_step: Option<f64>,
    },
    /// Sampling lower bound on the condition measure.
    KappaOracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.01, value_parser = positive)]
        grid_step: f64,
        /// Random strategies per player, on top of the grid.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact regularity bound at a profile.
    Reg {
        #[command(flatten)]
        common: Common,
        /// Profile as "x1,x2,...;y1,y2,...".
        #[arg(long)]
        point: String,
    },
    /// Certified epsilon-equilibrium by the smoothing solver.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-6, value_parser = positive)]
        eps: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iterations: usize,
    },
    /// Compares the two evaluations of the parametric distance at random
    /// profiles and levels.
    VzCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Iteration counts along a ladder of targets, as CSV.
    Report {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly decreasing targets.
        #[arg(long, default_value = "1e-1,1e-2,1e-3,1e-4")]
        ladder: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_iterations: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Payoff matrix file (rows are Player 1's strategies).
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; guessed from the extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Leave the timestamp out of the report.
    #[arg(long)]
    pub no_timestamp: bool,
    #[arg(long, env = "GAMECOND_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[arg(long, value_parser = positive)]
    pub tol_feas: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_tie: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_zero: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_equil: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_margin: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tol_oracle: Option<f64>,
}

impl Common {
    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            feasibility: self.tol_feas.unwrap_or(d.feasibility),
            tie: self.tol_tie.unwrap_or(d.tie),
            zero: self.tol_zero.unwrap_or(d.zero),
            equilibrium: self.tol_equil.unwrap_or(d.equilibrium),
            margin: self.tol_margin.unwrap_or(d.margin),
            oracle: self.tol_oracle.unwrap_or(d.oracle),
        }
    }
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Value(common)
            | Command::Kappa { common, .. }
            | Command::KappaOracle { common, .. }
            | Command::Reg { common, .. }
            | Command::Solve { common, .. }
            | Command::VzCheck { common, .. }
            | Command::Report { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Value(_) => "value",
            Command::Kappa { .. } => "kappa",
            Command::KappaOracle { .. } => "kappa-oracle",
            Command::Reg { .. } => "reg",
            Command::Solve { .. } => "solve",
            Command::VzCheck { .. } => "vz-check",
            Command::Report { .. } => "report",
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}
