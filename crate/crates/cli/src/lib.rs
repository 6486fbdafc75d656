//! Sweep runners, scenario files, and CSV emission for the witness library.

pub mod scenario;
pub mod sweeps;
pub mod table;

pub use scenario::{run_scenario, scenario_table, RunOptions, Scenario};
pub use sweeps::{hybrid_set, run_fig1, run_fig2, run_hybrid};
pub use table::{format_number, grid, SweepRow, SweepTable};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Core(#[from] fisherwit::Error),
    #[error("scenario parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit codes: 2 for anything wrong with the inputs, 3 for floating-point
    /// failures (truncation loss, states that stopped being states).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Core(e) => {
                if e.is_numerical() {
                    3
                } else {
                    2
                }
            }
        }
    }
}
