use std::path::PathBuf;
use std::process::ExitCode;

use anharmonic_cli::commands::{self, EngineChoice, Figure, KernelChoice, SimulateOptions};
use anharmonic_cli::{CliResult, Format, RunConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "anharmonic",
    version,
    about = "Semiclassical dynamics of damped anharmonic oscillators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate cumulants, observables and validity diagnostics.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long, value_enum, default_value_t)]
        engine: EngineChoice,
        /// Feed the quantum correction back into the mean (ODE engine).
        #[arg(long)]
        with_q: bool,
        /// Kernel used to integrate Q into the first-order shift.
        #[arg(long, value_enum, default_value_t)]
        kernel: KernelChoice,
    },
    /// Write the data behind one of the three figures, one CSV per curve.
    Figure {
        #[arg(value_enum)]
        which: Figure,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the semiclassical engine with an exact number-basis oracle.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Repeat at a second photon-number scale and report the error ratio.
        #[arg(long)]
        second_n: Option<f64>,
        /// Feed the quantum correction back into the semiclassical mean.
        #[arg(long)]
        with_q: bool,
    },
    /// Print breaking-time estimates as JSON.
    Report {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            format,
            engine,
            with_q,
            kernel,
        } => {
            let cfg = RunConfig::load(&config)?;
            let opts = SimulateOptions { engine, with_q, kernel };
            commands::simulate(&cfg, &opts)?.write(&out, format)
        }
        Command::Figure { which, out } => {
            for path in commands::write_figure(which, &out)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Compare {
            config,
            out,
            second_n,
            with_q,
        } => {
            let cfg = RunConfig::load(&config)?;
            let table = commands::compare(&cfg, second_n, with_q)?;
            if let Some(v) = table.meta_value("verdict") {
                println!("{v}");
            }
            table.write(&out, Format::Csv)
        }
        Command::Report { config } => {
            let cfg = RunConfig::load(&config)?;
            print!("{}", commands::report(&cfg)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
