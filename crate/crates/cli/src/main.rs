use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use resultant_core::bench::run_bench;
use resultant_core::offline::{emit_template, SolverTemplate};
use resultant_core::problems::{Problem, ProblemData};
use resultant_core::recover::solve_online;

const THREADS_ENV: &str = "RESULTANT_SOLVE_THREADS";

#[derive(Parser)]
#[command(name = "resultant-solve", version, about = "Hidden-variable resultant solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the solver template for a problem.
    Offline {
        /// Problem id: conic or five_point.
        problem: Problem,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve one instance and print the solutions as JSON.
    Solve {
        #[arg(short, long)]
        template: PathBuf,
        #[arg(short, long)]
        data: PathBuf,
    },
    /// Run seeded synthetic trials and print a CSV summary.
    Bench {
        problem: Problem,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the log10-residual histogram CSV here.
        #[arg(long)]
        hist: Option<PathBuf>,
        /// Worker threads; overridden by RESULTANT_SOLVE_THREADS.
        #[arg(long)]
        jobs: Option<usize>,
        /// Use this template instead of building one from the seed.
        #[arg(long)]
        template: Option<PathBuf>,
    },
}

/// Failure with its exit code: 1 for usage and I/O, 2 for the offline stage.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 1,
            error: e.into(),
        }
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn jobs(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => Ok(Some(
            v.trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV} must be a thread count, got {v:?}"))?,
        )),
        Err(_) => Ok(flag),
    }
}

fn run(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Offline {
            problem,
            seed,
            output,
        } => {
            let template = emit_template(&problem, seed).map_err(|e| Failure {
                code: 2,
                error: anyhow::Error::new(e).context(format!("offline stage for {problem}")),
            })?;
            write_output(output.as_ref(), &template.to_json()?)?;
        }
        Command::Solve { template, data } => {
            let tpl = SolverTemplate::load(&template)
                .with_context(|| format!("reading template {}", template.display()))?;
            let text = fs::read_to_string(&data)
                .with_context(|| format!("reading data {}", data.display()))?;
            let data: ProblemData = serde_json::from_str(&text)
                .with_context(|| format!("parsing data {}", data.display()))?;
            let solution = solve_online(&tpl, &data)?;
            write_output(None, &solution.to_json()?)?;
        }
        Command::Bench {
            problem,
            trials,
            seed,
            hist,
            jobs: jobs_flag,
            template,
        } => {
            let tpl = match template {
                Some(p) => SolverTemplate::load(&p)
                    .with_context(|| format!("reading template {}", p.display()))?,
                None => emit_template(&problem, seed).map_err(|e| Failure {
                    code: 2,
                    error: e.into(),
                })?,
            };
            let report = run_bench(&tpl, problem, trials, seed, jobs(jobs_flag)?)?;
            if let Some(path) = hist {
                write_output(Some(&path), &report.histogram().csv())?;
            }
            write_output(None, &report.csv())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
