use std::path::PathBuf;

use clap::{Parser, Subcommand};
use fisherwit::states::default_cutoff;
use fisherwit_cli::{grid, run_fig1, run_fig2, run_hybrid, run_scenario, CliError, RunOptions, SweepTable};

#[derive(Parser)]
#[command(
    name = "fisherwit",
    version,
    about = "Entanglement witnesses comparing Fisher information against local variances",
    after_help = "Output is CSV with a header row; every sweep is deterministic for fixed flags."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write CSV to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Fock-space cutoff (default: chosen from the largest coherent amplitude,
    /// or excitation + 8 for the hybrid scenario)
    #[arg(long, global = true)]
    cutoff: Option<usize>,

    /// Seed for the multi-start optimizer and random mixtures
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Detection threshold on λ_max and bound comparisons
    #[arg(long, global = true, default_value_t = 1e-8)]
    threshold: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the dephasing of the two-mode cat state against quadrature witnesses
    Fig1 {
        /// Coherent amplitude(s); several values stack sweeps with an extra column
        #[arg(long, value_delimiter = ',', default_value = "1.0")]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        s_start: f64,
        #[arg(long, default_value_t = 1.0)]
        s_stop: f64,
        #[arg(long, default_value_t = 0.05)]
        s_step: f64,
    },
    /// Sweep the weight of the N-qubit two-branch superposition against spin witnesses
    Fig2 {
        /// Number of qubits
        #[arg(long, short = 'n', default_value_t = 3)]
        parties: usize,
        #[arg(long, default_value_t = 0.0)]
        q_start: f64,
        #[arg(long, default_value_t = 1.0)]
        q_stop: f64,
        #[arg(long, default_value_t = 0.01)]
        q_step: f64,
        /// Relative phase of the upper branch
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
    },
    /// Witness the qubit-oscillator correlated state with the σx + x generator
    Hybrid {
        /// Oscillator excitation number n of the lower branch
        #[arg(long, short = 'n', default_value_t = 0)]
        excitation: usize,
    },
    /// Run a JSON scenario file
    Run { file: PathBuf },
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let table = match &cli.command {
        Command::Fig1 { alpha, s_start, s_stop, s_step } => {
            if alpha.is_empty() {
                return Err(CliError::Validation("--alpha needs at least one value".into()));
            }
            let s_grid = grid(*s_start, *s_stop, *s_step)?;
            let max_alpha = alpha.iter().cloned().fold(0.0, f64::max);
            let cutoff = cli.cutoff.unwrap_or_else(|| default_cutoff(max_alpha));
            if alpha.len() == 1 {
                run_fig1(alpha[0], &s_grid, cutoff, cli.threshold)?
            } else {
                let tables = alpha
                    .iter()
                    .map(|&a| {
                        Ok(run_fig1(a, &s_grid, cutoff, cli.threshold)?
                            .with_prefix_column("alpha", a))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                SweepTable::stack(tables)?
            }
        }
        Command::Fig2 { parties, q_start, q_stop, q_step, phi } => {
            let q_grid = grid(*q_start, *q_stop, *q_step)?;
            run_fig2(*parties, &q_grid, *phi, cli.seed, cli.threshold)?
        }
        Command::Hybrid { excitation } => {
            let cutoff = cli.cutoff.unwrap_or(excitation + 8);
            run_hybrid(*excitation, cutoff, cli.threshold)?
        }
        Command::Run { file } => {
            let opts = RunOptions { cutoff: cli.cutoff, seed: cli.seed, threshold: cli.threshold };
            run_scenario(file, &opts)?
        }
    };
    Ok(table.to_csv())
}

fn main() {
    let cli = Cli::parse();
    let csv = match execute(&cli) {
        Ok(csv) => csv,
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(err) = std::fs::write(path, csv) {
                eprintln!("error: cannot write {}: {err}", path.display());
                std::process::exit(2);
            }
        }
        None => print!("{csv}"),
    }
}
