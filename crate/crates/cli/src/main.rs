mod cli;
mod error;
mod experiments;
mod grid;
mod output;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use error::CliError;
use experiments::{Context, Finished};
use output::Manifest;

fn dispatch(ctx: &Context, command: &Command) -> Result<(), CliError> {
    let finished: Finished = match command {
        Command::Instance(args) => experiments::instance(ctx, command, args)?,
        Command::Trotter(args) => experiments::trotter(ctx, command, args)?,
        Command::Havqds(args) => experiments::havqds(ctx, command, args)?,
        Command::Spectrum(args) => experiments::spectrum(ctx, command, args)?,
        Command::Report(args) => {
            for path in experiments::report(ctx, args)? {
                eprintln!("wrote {}", path.display());
            }
            return Ok(());
        }
        Command::Rerun(_) => return Err(CliError::Config("a manifest cannot replay a rerun".into())),
    };
    eprintln!("{} runs, {} failed, output in {}", finished.runs, finished.failed, finished.dir.display());
    if finished.failed > 0 {
        return Err(CliError::Partial {
            failed: finished.failed,
            total: finished.runs,
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Rerun(args) => {
            let manifest = Manifest::read(&args.manifest)?;
            let ctx = Context {
                out: cli.out.clone(),
                parallelism: cli.parallelism.map_or(manifest.parallelism, |p| p as usize),
            };
            dispatch(&ctx, &manifest.command)
        }
        command => {
            let ctx = Context {
                out: cli.out.clone(),
                parallelism: cli.parallelism.unwrap_or(1) as usize,
            };
            dispatch(&ctx, command)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
