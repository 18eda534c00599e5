use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use seqgraph_cli::{emit, exit, run, Cli, CliError};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::usage(e.to_string())),
    };
    let result = run(&cli.command).and_then(|(output, out)| emit(&output, out.as_ref()));
    match result {
        Ok(Some(text)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(exit::USAGE as u8);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
