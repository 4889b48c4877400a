// SPDX-License-Identifier: Apache-2.0

mod args;
mod cache;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use output::{CliError, Envelope, TOOL_VERSION};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            return fail(
                &cli,
                CliError::Usage(format!("cannot start {n} workers: {e}")),
            );
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            let body = if cli.json && !wants_dot(&cli) {
                let envelope = Envelope {
                    tool_version: TOOL_VERSION,
                    seed: cli.seed,
                    group: out.group,
                    level: out.level,
                    payload: out.json,
                };
                serde_json::to_string(&envelope).expect("JSON values serialize") + "\n"
            } else {
                out.text
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(body.as_bytes());
            let _ = stdout.flush();
            if out.failed {
                fail(
                    &cli,
                    CliError::Verification("one or more checks failed".into()),
                )
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(&cli, e),
    }
}

fn wants_dot(cli: &Cli) -> bool {
    matches!(
        cli.command,
        args::Command::Portrait { dot: true, .. } | args::Command::Scheme { dot: true, .. }
    )
}

fn fail(cli: &Cli, e: CliError) -> ExitCode {
    if cli.json {
        eprintln!("{}", e.to_json_line());
    } else {
        eprintln!("{e}");
    }
    ExitCode::from(e.exit_code() as u8)
}
