use std::process::ExitCode;

use brauer_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code)
}
