//! `p4`: command-line front end. Every command prints one JSON document on
//! stdout (sorted keys); `--pretty` renders it as indented text instead.
//! Exit codes: 0 pass or zero verdict, 1 nonzero verdict or failed check,
//! 2 usage or parse error.

mod args;
mod commands;
mod render;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::{dispatch, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = p4_core::SampleConfig::from_env();
    match dispatch(&cli.command, &cfg) {
        Ok(out) => {
            let text = if cli.pretty {
                render::pretty(&out.value)
            } else {
                serde_json::to_string(&out.value).expect("JSON value serializes")
            };
            println!("{text}");
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if commands::is_input_error(&e) { 2 } else { 1 })
        }
    }
}
