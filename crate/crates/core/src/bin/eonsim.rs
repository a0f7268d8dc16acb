use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eonsim::cli::{self, CliError, RunOverrides};

#[derive(Parser)]
#[command(name = "eonsim", version, about = "Elastic optical network RMSA simulator")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured sweep and write the results CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the output path from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the configured seed list with a single seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Recheck spectrum invariants after every event.
        #[arg(long)]
        audit: bool,
    },
    /// Export the demand trace for one load point and seed.
    Trace {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Index into the configured load list.
        #[arg(long, default_value_t = 0)]
        load_index: usize,
    },
    /// Check a config file and report every problem found.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eonsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            config,
            out,
            seed,
            jobs,
            audit,
        } => {
            let overrides = RunOverrides {
                out,
                seed,
                jobs,
                audit,
            };
            let cfg = overrides.apply(cli::load_config(&config)?);
            let runs = cli::run_experiment(&cfg, overrides.audit, overrides.jobs)?;
            for run in &runs {
                println!("{}", cli::summary_line(run));
            }
            println!("wrote {} rows to {}", runs.len(), cfg.output_path.display());
        }
        Command::Trace {
            config,
            out,
            seed,
            load_index,
        } => {
            let cfg = cli::load_config(&config)?;
            let n = cli::export_trace(&cfg, &out, seed, load_index)?;
            println!("wrote {n} demands to {}", out.display());
        }
        Command::Validate { config } => {
            let cfg = cli::load_config(&config)?;
            println!(
                "ok: {} metrics x {} loads x {} seeds, {} demands each",
                cfg.metrics.len(),
                cfg.loads.len(),
                cfg.seeds.len(),
                cfg.num_demands
            );
        }
    }
    Ok(())
}
