use std::io::Write as _;
use std::process::ExitCode;

use clap::Parser;
use cli::{run, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(&args) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.stdout.as_bytes());
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
