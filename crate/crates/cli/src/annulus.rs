use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand};
use looptop::annulus::{
    canonical_foliations, foliation_svg, modulus_inversive, normalize, orthogonality_residual, Annulus, Circle,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::out::{input, only, print_json, CliError, Status};
use crate::Format;

/// `x,y,r`.
#[derive(Clone, Copy, Debug)]
pub struct CircleArg {
    center: Complex64,
    radius: f64,
}

impl FromStr for CircleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("`{s}`: {e}"))?;
        match parts[..] {
            [x, y, r] => Ok(CircleArg {
                center: Complex64::new(x, y),
                radius: r,
            }),
            _ => Err(format!("`{s}`: expected x,y,r")),
        }
    }
}

#[derive(Args, Debug)]
pub struct Boundary {
    #[arg(long, allow_hyphen_values = true)]
    outer: CircleArg,
    #[arg(long, allow_hyphen_values = true)]
    inner: CircleArg,
}

impl Boundary {
    fn annulus(&self) -> Result<Annulus, CliError> {
        let circle = |c: CircleArg| Circle::new(c.center, c.radius).map_err(input);
        Annulus::new(circle(self.outer)?, circle(self.inner)?).map_err(input)
    }
}

#[derive(Subcommand, Debug)]
pub enum AnnulusCmd {
    /// Conformal modulus R, the annulus being equivalent to 1 ≤ |z| ≤ e^{2πR}.
    Modulus {
        #[command(flatten)]
        boundary: Boundary,
    },
    /// Möbius map onto the standard annulus.
    Normalize {
        #[command(flatten)]
        boundary: Boundary,
    },
    /// Canonical radial and circular foliations.
    Foliate {
        #[command(flatten)]
        boundary: Boundary,
        #[arg(long, default_value_t = 16)]
        radial: usize,
        #[arg(long, default_value_t = 8)]
        circular: usize,
        /// Samples per leaf.
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Write the figure here.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 600.0)]
        size: f64,
    },
}

#[derive(Serialize)]
struct ModulusOutput {
    #[serde(rename = "R")]
    modulus: f64,
    #[serde(rename = "R_inversive")]
    inversive: f64,
}

#[derive(Serialize)]
struct FoliateOutput {
    radial: usize,
    circular: usize,
    orthogonality_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    svg: Option<String>,
}

pub fn run(cmd: AnnulusCmd, format: Format) -> Result<Status, CliError> {
    match cmd {
        AnnulusCmd::Modulus { boundary } => {
            only(format, &[Format::Table, Format::Json])?;
            let ann = boundary.annulus()?;
            let n = normalize(&ann).map_err(input)?;
            let out = ModulusOutput {
                modulus: n.modulus,
                inversive: modulus_inversive(&ann),
            };
            match format {
                Format::Json => print_json(&out),
                _ => println!("R = {:.12}", out.modulus),
            }
        }
        AnnulusCmd::Normalize { boundary } => {
            only(format, &[Format::Table, Format::Json])?;
            let n = normalize(&boundary.annulus()?).map_err(input)?;
            match format {
                Format::Json => print_json(&n),
                _ => {
                    let m = n.map;
                    println!("φ(z) = (a z + b) / (c z + d)");
                    for (name, v) in [("a", m.a), ("b", m.b), ("c", m.c), ("d", m.d)] {
                        println!("  {name} = {:.12} {:+.12}i", v.re, v.im);
                    }
                    println!("R = {:.12}", n.modulus);
                }
            }
        }
        AnnulusCmd::Foliate {
            boundary,
            radial,
            circular,
            points,
            svg,
            size,
        } => {
            only(format, &[Format::Table, Format::Json, Format::Svg])?;
            let ann = boundary.annulus()?;
            let f = canonical_foliations(&ann, radial, circular, points).map_err(input)?;
            let picture = foliation_svg(&f, size);
            if let Some(path) = &svg {
                std::fs::write(path, &picture).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            }
            let residual = orthogonality_residual(&ann, radial * circular.max(1)).map_err(input)?;
            match format {
                Format::Svg => print!("{picture}"),
                Format::Json => print_json(&FoliateOutput {
                    radial: f.radial.len(),
                    circular: f.circular.len(),
                    orthogonality_residual: residual,
                    svg: svg.map(|p| p.display().to_string()),
                }),
                _ => {
                    println!("{} radial and {} circular leaves", f.radial.len(), f.circular.len());
                    println!("orthogonality residual {residual:.3e}");
                    if let Some(p) = svg {
                        println!("wrote {}", p.display());
                    }
                }
            }
        }
    }
    Ok(Status::Ok)
}
