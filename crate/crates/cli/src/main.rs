use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use diffh2_cli::commands::{self, CommandOutput, Format};
use diffh2_cli::config::ProblemConfig;
use diffh2_cli::{CliError, Exit};

/// Distributed suboptimal H2 protocol design and certification.
#[derive(Parser)]
#[command(name = "diffh2", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Laplacian spectrum and connectivity of the configured graph.
    Spectrum(Common),
    /// Synthesize a gain with the configured method and certify it.
    Design(Common),
    /// Certify an externally supplied gain and cross-check the cost oracles.
    Verify {
        #[command(flatten)]
        common: Common,
        /// JSON file with a "K" field; a design report works.
        #[arg(long)]
        gain: PathBuf,
    },
    /// Simulate the closed loop from the config's simulation block.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Use this gain instead of designing one.
        #[arg(long)]
        gain: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

fn load_gain(path: &PathBuf) -> Result<diffh2::Matrix, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    commands::parse_gain(&text, &path.display().to_string())
}

fn run(cli: Cli) -> Result<(CommandOutput, Option<PathBuf>), CliError> {
    let common = match &cli.command {
        Command::Spectrum(c) | Command::Design(c) => c,
        Command::Verify { common, .. } | Command::Simulate { common, .. } => common,
    };
    let cfg = ProblemConfig::load(&common.config)?;
    let format = match common.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Csv => Format::Csv,
    };
    let out = match &cli.command {
        Command::Simulate { gain, .. } => {
            let k = gain.as_ref().map(load_gain).transpose()?;
            commands::run_simulate(&cfg, k.as_ref(), format)?
        }
        _ if format == Format::Csv => {
            return Err(CliError::input("--format csv is only available for simulate"));
        }
        Command::Spectrum(_) => commands::run_spectrum(&cfg)?,
        Command::Design(_) => commands::run_design(&cfg)?,
        Command::Verify { gain, .. } => commands::run_verify(&cfg, &load_gain(gain)?)?,
    };
    Ok((out, common.out.clone()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { Exit::Input.code() } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok((output, path)) => {
            let written = match &path {
                Some(p) => fs::write(p, &output.body),
                None => io::stdout().write_all(output.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(Exit::Input.code() as u8);
            }
            if let Some(side) = &output.side {
                eprint!("{side}");
            }
            ExitCode::from(output.exit.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit.code() as u8)
        }
    }
}
