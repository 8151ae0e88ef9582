use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pltl_bmc::{run, Engine, Job, Mode, RunConfig, SolverId};

#[derive(Parser)]
#[command(name = "pltl-bmc", version, about = "Bounded satisfiability and model checking for PLTL/TRIO specs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a spec file and write output.{cnf,sat,hist}.txt
    Check {
        spec: PathBuf,
        #[arg(long, short = 'k')]
        bound: Option<usize>,
        #[arg(long)]
        engine: Option<Engine>,
        #[arg(long, default_value = "bsc")]
        mode: Mode,
        #[arg(long)]
        solver: Option<SolverId>,
        #[arg(long)]
        loop_free: bool,
        #[arg(long)]
        history: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Largest bound tried by find-bound
        #[arg(long)]
        max_bound: Option<usize>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let Command::Check {
        spec,
        bound,
        engine,
        mode,
        solver,
        loop_free,
        history,
        out,
        max_bound,
    } = Cli::parse().command;
    let config = RunConfig {
        spec,
        history,
        out_dir: out,
        job: Job {
            mode,
            bound,
            engine,
            loop_free,
            solver,
            max_bound,
            ..Job::default()
        },
    };
    match run::run(&config) {
        Ok(report) => {
            // a closed pipe (e.g. `| head`) is not an error
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", report.summary()).and_then(|_| write!(out, "{}", report.history()));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
