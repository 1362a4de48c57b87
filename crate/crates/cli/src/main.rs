use clap::Parser;
use qpullback_cli::{run, write_output, Cli, CliError};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rendered) => {
            if let Err(err) = write_output(&cli, &rendered) {
                eprintln!("error: {}", err.message());
                std::process::exit(err.exit_code());
            }
        }
        // a failed verification still emits its report, then exits 1
        Err(err @ CliError::VerifyFailed(_)) => {
            if write_output(&cli, err.message()).is_err() {
                eprintln!("{}", err.message());
            }
            std::process::exit(err.exit_code());
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            std::process::exit(err.exit_code());
        }
    }
}
