//! `looptop`: batch front end. Exit status 0 when every check holds, 1
//! when an identity or verdict fails (the report is still printed), 2 on
//! bad input.

mod annulus;
mod chain;
mod localsys;
mod out;
mod profile;
mod sphere;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use looptop::Ring;

use out::{CliError, Status};

#[derive(Parser, Debug)]
#[command(name = "looptop", version, about = "Loop-space string operations, chain-level checks and annulus geometry")]
struct Cli {
    /// Output format. `svg` applies to `annulus foliate`, `csv` to
    /// `profile verify`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Svg,
    Csv,
}

/// Coefficient ring: `F2`, `Q`, `Z` or `F<p>`. Falls back to
/// `LOOPTOP_FIELD`, then to the subcommand's default.
#[derive(Args, Debug, Clone)]
pub struct FieldArg {
    #[arg(long, env = "LOOPTOP_FIELD")]
    field: Option<Ring>,
}

impl FieldArg {
    pub fn or(&self, default: Ring) -> Ring {
        self.field.unwrap_or(default)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Loop homology of S³: the coproduct and its identities.
    #[command(subcommand)]
    Sphere(sphere::SphereCmd),
    /// Chain complexes read from JSON.
    #[command(subcommand)]
    Chain(chain::ChainCmd),
    /// Filtered complexes read from JSON.
    #[command(subcommand)]
    Filtered(chain::FilteredCmd),
    /// Local systems on loop spaces of 3-manifolds.
    #[command(subcommand)]
    Localsys(localsys::LocalsysCmd),
    /// Round annuli and their conformal modulus.
    #[command(subcommand)]
    Annulus(annulus::AnnulusCmd),
    /// Hamiltonian profiles and the action-gap bound.
    #[command(subcommand)]
    Profile(profile::ProfileCmd),
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<Status, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Sphere(c) => sphere::run(c, format),
        Command::Chain(c) => chain::run_chain(c, format),
        Command::Filtered(c) => chain::run_filtered(c, format),
        Command::Localsys(c) => localsys::run(c, format),
        Command::Annulus(c) => annulus::run(c, format),
        Command::Profile(c) => profile::run(c, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
