use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = rgc_cli::Cli::parse();
    match rgc_cli::run(cli, &mut std::io::stderr()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(rgc_cli::exit_code(&err) as u8)
        }
    }
}
