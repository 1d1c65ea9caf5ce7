use std::process::ExitCode;

use clap::Parser;

use ergokit::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            // One line, machine-parseable code first.
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
