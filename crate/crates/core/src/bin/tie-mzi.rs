use std::process::ExitCode;

use tie_mzi::cli::{parse_args, run, ConfigError, RunError};

fn main() -> ExitCode {
    let result = parse_args(std::env::args_os().skip(1))
        .map_err(RunError::from)
        .and_then(|config| run(&config));
    match result {
        Ok(report) => {
            print!("{}", report.summary);
            ExitCode::SUCCESS
        }
        Err(RunError::Config(ConfigError::Info(msg))) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let line = e.to_string().lines().next().unwrap_or_default().to_string();
            eprintln!("tie-mzi: {line}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
