use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use linfty_cli::{configure_threads, run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    let outcome = run(cli);
    print!("{}", outcome.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
