//! Reproducible runs of the sleigh and Suslov models: configuration,
//! trajectory files, invariant reports, phase portraits and
//! continuous-limit studies.

pub mod config;
pub mod limit;
pub mod portrait;
pub mod report;
pub mod sweep;
pub mod systems;
pub mod trajectory;

use thiserror::Error;

pub use config::{ConfigError, OutputFormat, SimConfig, SystemKind};
pub use limit::{compare_limit, compare_limit_sleigh, compare_limit_suslov, LimitTable};
pub use portrait::{phase_portrait, GridSpec};
pub use report::{invariant_report, report_file, FileReport, InvariantReport};
pub use systems::{run, run_directed, Direction, RunOutcome};
pub use trajectory::{Trajectory, TrajectoryError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Model(String),
}

/// Process exit codes of the `deps` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const BRANCH_FAILURE: i32 = 2;
    pub const VERIFICATION: i32 = 3;
}
