use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use looptop::local_systems::{
    classify, is_compatible, make_eta, make_mu, make_o, make_otilde, make_sigma, tensor, Compatibility,
    ComponentModel, LocalSystemDoc, LocalSystemSpec, ManifoldDescriptor,
};
use serde::{Deserialize, Serialize};

use crate::out::{input, only, print_json, CliError, Status};
use crate::{read_json, Format};

#[derive(Subcommand, Debug)]
pub enum LocalsysCmd {
    /// Build a named system from {descriptor, components?}, or, without
    /// --system, validate and canonicalize a full spec document.
    Build {
        file: PathBuf,
        #[arg(long, value_enum)]
        system: Option<Named>,
    },
    /// Tensor product of two or more spec documents.
    Tensor {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    /// Compatibility with products; exits 1 when incompatible.
    Compat { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Named {
    Trivial,
    Sigma,
    Mu,
    O,
    Otilde,
    Eta,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BuildDoc {
    descriptor: ManifoldDescriptor,
    #[serde(default)]
    components: Option<ComponentModel>,
}

#[derive(Serialize)]
struct SpecOutput {
    spec: LocalSystemDoc,
    compatibility: Compatibility,
}

fn load(path: &PathBuf) -> Result<(LocalSystemSpec, ComponentModel), CliError> {
    let doc: LocalSystemDoc = read_json(path)?;
    doc.to_spec().map_err(input)
}

fn emit(x: &LocalSystemSpec, cm: &ComponentModel, format: Format) -> Compatibility {
    let compatibility = is_compatible(x, cm);
    match format {
        Format::Json => print_json(&SpecOutput {
            spec: LocalSystemDoc::from_spec(x, cm),
            compatibility: compatibility.clone(),
        }),
        _ => {
            println!("{x}");
            print_verdict(&compatibility);
        }
    }
    compatibility
}

fn print_verdict(c: &Compatibility) {
    match &c.reason {
        None => println!("compatible with products"),
        Some(r) => println!("not compatible: {r}"),
    }
}

pub fn run(cmd: LocalsysCmd, format: Format) -> Result<Status, CliError> {
    only(format, &[Format::Table, Format::Json])?;
    match cmd {
        LocalsysCmd::Build { file, system: None } => {
            let (x, cm) = load(&file)?;
            emit(&x, &cm, format);
            Ok(Status::Ok)
        }
        LocalsysCmd::Build { file, system: Some(name) } => {
            let doc: BuildDoc = read_json(&file)?;
            doc.descriptor.validate().map_err(input)?;
            let cm = doc.components.unwrap_or_default();
            cm.validate().map_err(input)?;
            let m = &doc.descriptor;
            let x = match name {
                Named::Trivial => LocalSystemSpec::trivial(m, &cm),
                Named::Sigma => make_sigma(m, &cm),
                Named::Mu => make_mu(m, &cm),
                Named::O => make_o(m, &cm),
                Named::Otilde => make_otilde(m, &cm),
                Named::Eta => make_eta(m, &cm),
            };
            emit(&x, &cm, format);
            Ok(Status::Ok)
        }
        LocalsysCmd::Tensor { files } => {
            let (mut acc, cm) = load(&files[0])?;
            for f in &files[1..] {
                let (y, cm2) = load(f)?;
                if cm2 != cm {
                    return Err(CliError::Input(format!("{}: different component model", f.display())));
                }
                acc = tensor(&acc, &y).map_err(input)?;
            }
            emit(&acc, &cm, format);
            Ok(Status::Ok)
        }
        LocalsysCmd::Compat { file } => {
            let (x, cm) = load(&file)?;
            let c = is_compatible(&x, &cm);
            match format {
                Format::Json => print_json(&serde_json::json!({
                    "classification": classify(&x),
                    "compatibility": c,
                })),
                _ => print_verdict(&c),
            }
            Ok(Status::from_holds(c.compatible))
        }
    }
}
