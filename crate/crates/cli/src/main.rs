use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = eps_lab::Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match eps_lab::run(&cli, &mut out).and_then(|()| out.flush().map_err(Into::into)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eps-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
