use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::Parser;
use synthrank_cli::{execute, Cli, Style, NO_COLOR_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let style = Style {
        enabled: stdout.is_terminal() && std::env::var_os(NO_COLOR_ENV).is_none(),
    };
    match execute(&cli.command, style) {
        Ok(text) => {
            let mut lock = stdout.lock();
            if lock.write_all(text.as_bytes()).and_then(|_| lock.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("synthrank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
