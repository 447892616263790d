use std::path::PathBuf;

use clap::Subcommand;
use looptop::chain::json::{ComplexDoc, HomotopyDoc, InvertDoc, MapDoc};
use looptop::chain::{
    compare_reduced, filtration_window_homology, homology, invert_upper_triangular, verify_homotopy, ChainError,
    DistinguishedPoint, HomologyGroup,
};
use looptop::Ring;
use serde::Serialize;

use crate::out::{input, only, print_json, CliError, Status};
use crate::{read_json, FieldArg, Format};

#[derive(Subcommand, Debug)]
pub enum ChainCmd {
    /// Homology of a complex (default ring Z, which reports torsion).
    Homology {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Homology of C / χq₀ against H(C) / χ[q₀]; exits 1 if they differ.
    Reduced {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        /// Generator playing the role of the point class.
        #[arg(long)]
        point: String,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Check ∂H - (-1)^{|H|}H∂ = F - G for a document {source, target?, f, g, h}.
    VerifyHomotopy {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum FilteredCmd {
    /// Invert a filtration-preserving degree-0 map with unit diagonal;
    /// document {source, target?, map}. Prints the inverse as a map.
    Invert {
        file: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Homology of the generators with filtration value in (a, b].
    Window {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[command(flatten)]
        field: FieldArg,
    },
}

fn print_groups(groups: &[HomologyGroup], ring: Ring, format: Format) {
    match format {
        Format::Json => print_json(&groups),
        _ => {
            for g in groups {
                println!("H_{} = {}", g.degree, g.describe(ring));
            }
        }
    }
}

fn chain_err(e: ChainError) -> CliError {
    input(e)
}

pub fn run_chain(cmd: ChainCmd, format: Format) -> Result<Status, CliError> {
    only(format, &[Format::Table, Format::Json])?;
    match cmd {
        ChainCmd::Homology { file, field } => {
            let ring = field.or(Ring::Integers);
            let doc: ComplexDoc = read_json(&file)?;
            let c = doc.to_complex(Ring::Integers).or_else(|_| doc.to_complex(ring)).map_err(chain_err)?;
            let groups = homology(&c, ring).map_err(chain_err)?;
            print_groups(&groups, ring, format);
            Ok(Status::Ok)
        }
        ChainCmd::Reduced { file, chi, point, field } => {
            let ring = field.or(Ring::Integers);
            let doc: ComplexDoc = read_json(&file)?;
            let c = doc.to_complex(ring).map_err(chain_err)?;
            let cmp = compare_reduced(&c, &DistinguishedPoint::new(point, chi)).map_err(chain_err)?;
            match format {
                Format::Json => print_json(&cmp),
                _ => {
                    println!("reduction: {:?}", cmp.kind);
                    println!("reduced complex:");
                    for g in &cmp.reduced {
                        println!("  H_{} = {}", g.degree, g.describe(ring));
                    }
                    println!("H(C) / χ[q0]:");
                    for g in &cmp.quotient {
                        println!("  H_{} = {}", g.degree, g.describe(ring));
                    }
                    println!("{}", cmp.note);
                }
            }
            Ok(Status::from_holds(cmp.agrees != Some(false)))
        }
        ChainCmd::VerifyHomotopy { file, field } => {
            let ring = field.or(Ring::Integers);
            let doc: HomotopyDoc = read_json(&file)?;
            let s = doc.source.to_complex(ring).map_err(chain_err)?;
            let t = match &doc.target {
                Some(t) => t.to_complex(ring).map_err(chain_err)?,
                None => s.clone(),
            };
            let f = doc.f.to_map(&s, &t).map_err(chain_err)?;
            let g = doc.g.to_map(&s, &t).map_err(chain_err)?;
            let h = doc.h.to_map(&s, &t).map_err(chain_err)?;
            let report = verify_homotopy(&f, &g, &h, &s, &t).map_err(chain_err)?;
            match format {
                Format::Json => print_json(&report),
                _ => print!("{}", report.to_table()),
            }
            Ok(Status::from_holds(report.holds()))
        }
    }
}

#[derive(Serialize)]
struct WindowOutput {
    a: f64,
    b: f64,
    homology: Vec<HomologyGroup>,
}

pub fn run_filtered(cmd: FilteredCmd, format: Format) -> Result<Status, CliError> {
    only(format, &[Format::Table, Format::Json])?;
    match cmd {
        FilteredCmd::Invert { file, field } => {
            let ring = field.or(Ring::Integers);
            let doc: InvertDoc = read_json(&file)?;
            let s = doc.source.to_filtered(ring).map_err(chain_err)?;
            let t = match &doc.target {
                Some(t) => t.to_filtered(ring).map_err(chain_err)?,
                None => s.clone(),
            };
            let f = doc.map.to_map(s.complex(), t.complex()).map_err(chain_err)?;
            match invert_upper_triangular(&f, &s, &t) {
                Ok(inv) => {
                    let out = MapDoc::from_map(&inv);
                    match format {
                        Format::Json => print_json(&out),
                        _ => {
                            println!("inverse, degree {}:", out.degree);
                            for b in &out.blocks {
                                println!("  block {}:", b.degree);
                                for row in &b.matrix {
                                    let cells: Vec<String> = row.iter().map(|v| v.to_string().replace('"', "")).collect();
                                    println!("    [{}]", cells.join(", "));
                                }
                            }
                        }
                    }
                    Ok(Status::Ok)
                }
                // The map parsed fine but is not invertible in the filtered
                // sense: a failed verdict rather than bad input.
                Err(e @ (ChainError::NonUnitDiagonal(_) | ChainError::Filtration(_))) => {
                    match format {
                        Format::Json => print_json(&serde_json::json!({ "invertible": false, "reason": e.to_string() })),
                        _ => println!("NOT INVERTIBLE: {e}"),
                    }
                    Ok(Status::Violation)
                }
                Err(e) => Err(chain_err(e)),
            }
        }
        FilteredCmd::Window { file, a, b, field } => {
            let ring = field.or(Ring::Integers);
            let doc: ComplexDoc = read_json(&file)?;
            let c = doc.to_filtered(ring).map_err(chain_err)?;
            let groups = filtration_window_homology(&c, a, b, ring).map_err(chain_err)?;
            match format {
                Format::Json => print_json(&WindowOutput { a, b, homology: groups }),
                _ => {
                    println!("window ({a}, {b}]");
                    print_groups(&groups, ring, format);
                }
            }
            Ok(Status::Ok)
        }
    }
}
