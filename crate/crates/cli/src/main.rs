// NaN-rejecting `!(a < b)` guards and one-shot argument enums are intended.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::large_enum_variant)]

mod commands;
mod config;
mod error;
mod output;
mod spec;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{audit, build, catalog, mass, tov, verify};
use crate::config::{Overrides, RunConfig};
use crate::error::CliError;

/// Static perfect-fluid stellar models: TOV integration, exact solutions,
/// field-equation residuals, quasi-local masses, energy conditions and
/// conformally flat constructions.
#[derive(Debug, Parser)]
#[command(name = "fluidstar", version)]
struct Cli {
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a star for one equation of state
    Tov(tov::TovArgs),
    /// Closed-form solutions: list, show, verify, sample
    Catalog(catalog::CatalogArgs),
    /// Hawking and Brown-York masses on a level set of the lapse
    Mass(mass::MassArgs),
    /// Weak, null and dominant energy conditions along a model
    Audit(audit::AuditArgs),
    /// Conformally flat model from a radial conformal factor
    Build(build::BuildArgs),
    /// Field-equation residuals of catalog models or integrated stars
    Verify(verify::VerifyArgs),
}

fn run(cli: &Cli) -> Result<output::Outcome, CliError> {
    let cfg = RunConfig::load(&cli.overrides)?;
    match &cli.command {
        Command::Tov(a) => tov::run(a, &cfg),
        Command::Catalog(a) => catalog::run(a, &cfg),
        Command::Mass(a) => mass::run(a, &cfg),
        Command::Audit(a) => audit::run(a, &cfg),
        Command::Build(a) => build::run(a, &cfg),
        Command::Verify(a) => verify::run(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("fluidstar: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
