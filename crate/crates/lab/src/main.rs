use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quantalab::experiments::render_list;
use quantalab::{run, LabError, RunOverrides};

#[derive(Parser)]
#[command(
    name = "quantalab",
    version,
    about = "Run numerical quantum-mechanics experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List experiments whose name or description contains FILTER.
    List { filter: Option<String> },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List { filter } => {
            print!("{}", render_list(filter.as_deref()));
            ExitCode::SUCCESS
        }
        Command::Run { config, seed, out } => match run(&config, &RunOverrides { seed, out }) {
            Ok(manifest) => {
                for a in &manifest.assertions {
                    println!("{a}");
                }
                println!(
                    "outputs in {} ({:.2} s)",
                    manifest.config.out.display(),
                    manifest.wall_time_s
                );
                match manifest.check() {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => {
                        eprintln!("{e}");
                        ExitCode::from(1)
                    }
                }
            }
            Err(e @ LabError::Config { .. }) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(3)
            }
        },
    }
}
