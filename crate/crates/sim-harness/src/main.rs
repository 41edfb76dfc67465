use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rootfind::BranchPolicy;
use sim_harness::config::{validate_limit, ConfigError};
use sim_harness::report::{render, report_file};
use sim_harness::sweep::{run_and_write, run_sweep};
use sim_harness::{compare_limit, exit, phase_portrait, GridSpec, HarnessError, SimConfig};

#[derive(Parser)]
#[command(name = "deps", version, about = "Discrete and continuous sleigh and Suslov runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory, or every member of a sweep.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        policy: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        /// `key=value` applied on top of the config file.
        #[arg(long = "seed-override", num_args = 1..)]
        seed_override: Vec<String>,
    },
    /// Sample orbits from a grid of initial conditions.
    Portrait {
        config: PathBuf,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence table of discrete orbits against RK4.
    Limit {
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
    },
    /// Drift statistics and self-consistency of a trajectory file.
    Report { file: PathBuf },
}

fn read_config(path: &Path, overrides: &[String]) -> Result<SimConfig, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    Ok(SimConfig::parse_with_overrides(&text, overrides)?)
}

fn output_path(cfg: &SimConfig, out: Option<PathBuf>) -> Result<PathBuf, HarnessError> {
    out.or_else(|| cfg.output.clone()).ok_or_else(|| ConfigError::Missing("output.path".into()).into())
}

fn code(e: &HarnessError) -> i32 {
    match e {
        HarnessError::Config(_) | HarnessError::Unsupported(_) | HarnessError::Trajectory(_) => exit::USAGE,
        HarnessError::Model(_) => exit::VERIFICATION,
    }
}

fn execute(cmd: Command) -> Result<i32, HarnessError> {
    match cmd {
        Command::Run { config, out, format, policy, steps, seed_override } => {
            let mut overrides = seed_override;
            if let Some(f) = format {
                overrides.push(format!("output.format={f}"));
            }
            if let Some(p) = policy {
                overrides.push(format!("policy={}", p.parse::<BranchPolicy>().map_err(|e| ConfigError::Invalid {
                    field: "policy".into(),
                    message: e.to_string(),
                })?));
            }
            if let Some(n) = steps {
                overrides.push(format!("steps={n}"));
            }
            let cfg = read_config(&config, &overrides)?;
            let path = output_path(&cfg, out)?;
            if let Some(spec) = &cfg.sweep {
                let members = run_sweep(&cfg, spec, &path)?;
                let mut status = exit::OK;
                for m in &members {
                    println!("{} = {:?}: {}", spec.param, m.value, m.path.display());
                    if m.failed_step.is_some() {
                        status = exit::BRANCH_FAILURE;
                    } else if !m.consistent && status == exit::OK {
                        status = exit::VERIFICATION;
                    }
                }
                return Ok(status);
            }
            let (outcome, report) = run_and_write(&cfg, &path)?;
            print!("{}", render(&report));
            if let Some(f) = outcome.failure {
                eprintln!("branch failure at step {}: {}", f.step, f.message);
                return Ok(exit::BRANCH_FAILURE);
            }
            Ok(if report.consistency.holds() { exit::OK } else { exit::VERIFICATION })
        }
        Command::Portrait { config, grid, out } => {
            let cfg = read_config(&config, &[])?;
            let path = output_path(&cfg, out)?;
            let grid: GridSpec = grid.parse()?;
            let p = phase_portrait(&cfg, &grid)?;
            p.trajectory.write(&path, cfg.format)?;
            println!("{} orbits written to {}", grid.points().len(), path.display());
            for (orbit, f) in &p.failures {
                eprintln!("orbit {orbit}: branch failure at step {}: {}", f.step, f.message);
            }
            Ok(if p.failures.is_empty() { exit::OK } else { exit::BRANCH_FAILURE })
        }
        Command::Limit { config, eps } => {
            let mut cfg = read_config(&config, &[])?;
            if let Some(eps) = eps {
                cfg.limit.eps = eps;
                validate_limit(&cfg.limit)?;
            }
            let table = compare_limit(&cfg)?;
            print!("{}", table.render());
            Ok(if table.passes() { exit::OK } else { exit::VERIFICATION })
        }
        Command::Report { file } => {
            let r = report_file(&file)?;
            print!("{}", render(&r));
            Ok(if r.consistency.holds() { exit::OK } else { exit::VERIFICATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let help = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if help { 0 } else { exit::USAGE as u8 });
        }
    };
    match execute(cli.command) {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code(&e) as u8)
        }
    }
}
