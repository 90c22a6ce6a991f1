mod args;
mod commands;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match &cli.command {
        Command::Run(a) => (commands::run(a).map(|s| (s, vec![])), a.output.as_deref()),
        Command::Sweep(a) => (commands::sweep(a).map(|s| (s, vec![])), a.output.as_deref()),
        Command::Resources(a) => (commands::resources(a).map(|s| (s, vec![])), a.output.as_deref()),
        Command::Compress(a) => (commands::compress(a), a.output.as_deref()),
    };
    match result {
        Ok((text, warnings)) => {
            for w in warnings {
                eprintln!("{w}");
            }
            if let Err(e) = emit(&text, output) {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
