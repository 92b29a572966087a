use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dinls::commands::{cmd_groundstate, cmd_scan, cmd_simulate, cmd_verify, ScanKind, Suite, OUT_DIR_ENV};
use dinls::config::ExperimentConfig;

#[derive(Parser, Debug)]
#[command(author, version, about = "Radial damped inhomogeneous NLS laboratory")]
struct Cli {
    /// TOML experiment config; defaults apply when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = "out")]
    out: PathBuf,

    /// Worker threads for scans (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Seed for randomised checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve the configured initial data
    Simulate,
    /// Compute and certify the ground state
    Groundstate,
    /// Run diagnostic suites; exit status reports pass/fail
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
    /// Parameter scan
    Scan {
        #[arg(long)]
        kind: ScanKind,
    },
}

fn run(cli: Cli) -> dinls::Result<bool> {
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build_global()
        .ok();
    match cli.command {
        Command::Simulate => {
            let outcome = cmd_simulate(&cfg, &cli.out)?;
            println!("{}", outcome.summary.outcome);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Groundstate => {
            let gs = cmd_groundstate(&cfg, &cli.out)?;
            println!(
                "K_opt = {:.12e}  pohozaev = ({:.3e}, {:.3e})  iterations = {}",
                gs.k_opt_quotient, gs.pohozaev_residuals.0, gs.pohozaev_residuals.1, gs.iterations
            );
            Ok(true)
        }
        Command::Verify { suite } => {
            let report = cmd_verify(&cfg, suite, cli.seed, &cli.out)?;
            for c in &report.checks {
                println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            Ok(report.passed)
        }
        Command::Scan { kind } => {
            let path = cmd_scan(&cfg, kind, &cli.out)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
