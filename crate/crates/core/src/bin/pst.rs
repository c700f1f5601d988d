use std::process::ExitCode;

use pst_core::cli::{parse_args, run, CliError};

fn main() -> ExitCode {
    let result = parse_args(std::env::args_os()).and_then(|config| run(&config));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Info(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err @ CliError::Usage(_)) => {
            if let CliError::Usage(msg) = &err {
                eprint!("{msg}");
                if !msg.contains("Usage:") {
                    eprintln!("\nFor more information, try '--help'.");
                }
            }
            ExitCode::from(err.exit_code() as u8)
        }
        Err(err @ CliError::Runtime(_)) => {
            if let CliError::Runtime(msg) = &err {
                eprintln!("error: {msg}");
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
