use std::process::ExitCode;

use clap::Parser;
use ttvar_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match ttvar_cli::run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
