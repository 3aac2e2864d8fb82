use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use littlewood_cli::{render, run, Cli, Failure, Output};

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.out {
        Some(path) => File::create(path)?.write_all(text.as_bytes()),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (primary, code) = match run(&cli) {
        Ok(output) => (Some(output), 0),
        Err(failure) => {
            eprint!("{}", failure.diagnostics());
            let code = failure.exit_code();
            match failure {
                Failure::Check(report) => (Some(Output::Json(report)), code),
                Failure::Library(_) => (None, code),
            }
        }
    };
    if let Some(output) = primary {
        if let Err(e) = emit(&cli, &render(output, cli.format)) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
