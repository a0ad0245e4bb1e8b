use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pathring_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let text = render(&outcome.rows, cli.common.format);
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("pathring: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if let Some(message) = &outcome.error {
        eprintln!("pathring: {message}");
    }
    ExitCode::from(outcome.code as u8)
}
