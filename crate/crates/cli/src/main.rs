mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use friable_core::Error;
use serde_json::json;

use args::Cli;
use config::Settings;
use output::{digest, write_run, Manifest};

const EXIT_FAILURE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_USAGE: u8 = 64;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Argument(_) | Error::Precondition(_) => EXIT_PRECONDITION,
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, Error> {
    let mut settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    settings.resolve_threads(cli.threads)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = settings.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let outcome = pool.install(|| commands::run(&cli.command, &settings))?;
    let elapsed = start.elapsed().as_secs_f64();

    let name = cli.command.name();
    let manifest = Manifest {
        command: name,
        params: serde_json::to_value(&cli.command).expect("arguments serialize"),
        version: env!("CARGO_PKG_VERSION"),
        sieve: settings.sieve,
        tolerances: json!({
            "dickman": settings.tol,
            "sequence_modulus_slack": friable_core::gowers::VALUE_SLACK,
            "gowers_clip": friable_core::gowers::CLIP_TOLERANCE,
            "threshold_snap": friable_core::numeric::SNAP_RELATIVE,
        }),
        threads: pool.current_num_threads(),
        elapsed,
        digest: digest(&outcome.result),
    };
    write_run(&cli.out, name, &outcome.result, outcome.table.as_ref(), &manifest)
        .map_err(|e| Error::Resource(format!("cannot write to {}: {e}", cli.out.display())))?;
    println!("{}", outcome.stdout);
    if outcome.passed {
        Ok(0)
    } else {
        eprintln!("verification suite did not meet its criterion");
        Ok(EXIT_FAILURE)
    }
}
