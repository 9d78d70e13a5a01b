use clap::{Parser, Subcommand};
use perfopt_cli::config::ExperimentConfig;
use perfopt_cli::{exit_codes, execute, run_certify, validate_config, RunError};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Experiment runner for distributionally robust performative optimization.
#[derive(Parser)]
#[command(name = "perfopt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Size of the worker thread pool (default: all cores). Outputs are
        /// byte-identical for any thread count.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the theorem certification suite; exits nonzero if any bound is
    /// unsatisfied.
    Certify { config: PathBuf },
    /// Parse and semantically check a config file.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(()) => exit_codes::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run {
            config,
            output_dir,
            seed,
            threads,
        } => {
            let mut config = ExperimentConfig::from_file(&config)?;
            if let Some(dir) = output_dir {
                config.output_dir = dir;
            }
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let start = Instant::now();
            let run = || -> Result<(), RunError> {
                if let Some(files) = execute(&config)? {
                    println!("{}", files.results_csv.display());
                    println!("{}", files.summary_json.display());
                    println!("{}", files.manifest_json.display());
                }
                Ok(())
            };
            let result = match threads {
                Some(n) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .map_err(|e| {
                            RunError::Experiment(
                                perfopt_cli::experiments::ExperimentError::Run(e.to_string()),
                            )
                        })?;
                    pool.install(run)
                }
                None => run(),
            };
            // Timing goes to stderr only: the output files are byte-stable
            // under a fixed seed, and wall clocks are not.
            eprintln!("elapsed: {} ms", start.elapsed().as_millis());
            result
        }
        Command::Certify { config } => {
            let config = ExperimentConfig::from_file(&config)?;
            run_certify(&config)
        }
        Command::Validate { config } => {
            let config = validate_config(&config)?;
            println!("config ok: {:?} experiment", config.experiment);
            Ok(())
        }
    }
}
