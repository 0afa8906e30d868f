//! `alasso` command-line tool.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use commands::Command;
use error::CliError;
use output::{emit, read_meta, Format, Meta};

#[derive(Debug, Parser)]
#[command(name = "alasso", version, about = "Adaptive LASSO: estimates, exact distributions, limits and simulations")]
struct Cli {
    /// Seed for every random draw of the run
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output file (stdout if omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Maximum number of worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Re-run the command recorded in an earlier JSON or CSV output
    #[arg(long, global = true, conflicts_with = "seed")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

fn parse_args() -> Result<Cli, CliError> {
    Cli::try_parse().map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = e.print();
            std::process::exit(0);
        }
        _ => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            CliError::Usage(first.trim_start_matches("error: ").to_string())
        }
    })
}

fn run() -> Result<(), CliError> {
    let cli = parse_args()?;
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let (command, seed, format) = match (&cli.config, cli.command) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either a subcommand or --config, not both".into()))
        }
        (None, None) => return Err(CliError::Usage("no subcommand given; see --help".into())),
        (None, Some(c)) => (c, cli.seed, cli.format),
        (Some(path), None) => {
            let meta = read_meta(path)?;
            let doc = json!({ "command": meta.command, "params": meta.params });
            let command: Command = serde_json::from_value(doc)
                .map_err(|e| CliError::Usage(format!("config does not describe a run: {e}")))?;
            (command, meta.seed, meta.format)
        }
    };
    let meta = Meta {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.name().to_string(),
        params: serde_json::to_value(&command).expect("serializable")["params"].clone(),
        seed,
        format,
    };
    let report = command.run(seed)?;
    emit(&meta, &report, cli.out.as_deref())?;
    if report.failed {
        return Err(CliError::Numerical(format!("{} reported failures", meta.command)));
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
