use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gmedian_cli::commands::{dispatch, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok((value, ok)) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON value");
            // A closed stdout (e.g. piped into `head`) is not an error.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let _ = writeln!(std::io::stderr().lock(), "{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
