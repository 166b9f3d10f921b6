//! Experiment runner for open systems embedded by the z-Bargmann map.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "opensys", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Taylor coefficients of J(t) for H1 and H2 at z = e^{iπ/4}, e^{iπ/5}, e^{iπ/6}.
    ///
    /// CSV columns: hamiltonian,z_angle,c0,c1,c2 where J(t) ≈ c0 + c1·t + c2·t².
    /// The initial state is always v0.
    Table1(Config),
    /// Probability current J(t) and occupancy Tr[Π(z)ρ(t)] on a time grid.
    ///
    /// CSV columns: t,J,occupancy.
    CurrentCurve(Config),
    /// Q(t) = 2|Tr[Π(z)ρ(t)]| / g[ρ(t)] on a time grid.
    ///
    /// CSV columns: t,Q,Q_times_g,g. For mixed states g is a lower bound from the
    /// phase ascent and the columns are t,Q_upper,Q_times_g,g_lower.
    QCurve {
        #[command(flatten)]
        config: Config,
        /// Accept a mixed initial state (Q becomes an upper bound).
        #[arg(long)]
        allow_mixed: bool,
        /// Evolve the quantum form itself with V = W = exp(−iHt).
        #[arg(long)]
        isolated: bool,
    },
    /// Q = 2d/g[Π(z)] for the embedded projector.
    ///
    /// CSV columns: d,z_angle,g_lower,g_prime,one_norm,q_upper,window_open.
    QGtOne(Config),
    /// Run the invariant suites at the configured d, z and seed.
    Check(Config),
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct Config {
    /// Dimension of the open system; the full space has dimension 2d.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Angle of z on the unit circle: `pi/4`, `2pi/3`, or radians.
    #[arg(long, default_value = "pi/4", allow_hyphen_values = true)]
    pub z: String,
    /// `H1`, `H2`, or a matrix file.
    #[arg(long, default_value = "H1")]
    pub hamiltonian: String,
    /// `v0`, `maximally-mixed-bargmann`, or a vector/matrix file.
    #[arg(long, default_value = "v0")]
    pub state: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.01)]
    pub t_step: f64,
    /// Seed of the phase-ascent restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restarts of the phase ascent.
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    /// CSV destination; the summary then goes to stdout instead of stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare against the published reference values (exit code 4 on mismatch).
    #[arg(long)]
    pub assert_paper_values: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table1(c) => commands::table1(&c),
        Command::CurrentCurve(c) => commands::current_curve(&c),
        Command::QCurve { config, allow_mixed, isolated } => commands::q_curve(&config, allow_mixed, isolated),
        Command::QGtOne(c) => commands::q_gt_one(&c),
        Command::Check(c) => commands::check(&c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
