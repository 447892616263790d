use std::path::PathBuf;

use clap::Subcommand;
use looptop::profile::{build_profile, sample, verify_bounds, ProfileParams, ProfileSample};
use serde::Serialize;

use crate::out::{input, print_json, CliError, Status};
use crate::Format;

#[derive(Subcommand, Debug)]
pub enum ProfileCmd {
    /// Check 0 ≤ r h' - h - h' ≤ μδ and h'' > 0 on (1, 1+δ).
    ///
    /// CSV columns (--csv or --format csv): r, h, dh, action, gap, where
    /// action = r h' - h and gap = r h' - h - h'.
    Verify {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 3.0)]
        rmax: f64,
        /// Smoothstep order of the bump (2 = quintic).
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Also write the samples here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct VerifyOutput {
    pass: bool,
    params: ProfileParams,
    samples: usize,
    min_gap: f64,
    max_gap: f64,
    bound: f64,
    violations: Vec<String>,
}

fn write_csv<W: std::io::Write>(w: W, rows: &[ProfileSample]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r).map_err(input)?;
    }
    out.flush().map_err(input)
}

pub fn run(cmd: ProfileCmd, format: Format) -> Result<Status, CliError> {
    let ProfileCmd::Verify {
        mu,
        eps,
        delta,
        rmax,
        order,
        samples,
        csv,
    } = cmd;
    if format == Format::Svg {
        return Err(CliError::Input("--format svg is not available here".into()));
    }
    let params = ProfileParams {
        r_max: rmax,
        order,
        ..ProfileParams::new(mu, eps, delta)
    };
    let p = build_profile(params).map_err(input)?;
    let report = verify_bounds(&p, samples).map_err(input)?;
    if csv.is_some() || format == Format::Csv {
        let rows = sample(&p, samples).map_err(input)?;
        if let Some(path) = &csv {
            let file = std::fs::File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            write_csv(file, &rows)?;
        }
        if format == Format::Csv {
            write_csv(std::io::stdout().lock(), &rows)?;
            return Ok(Status::from_holds(report.passes()));
        }
    }
    match format {
        Format::Json => print_json(&VerifyOutput {
            pass: report.passes(),
            params,
            samples: report.samples,
            min_gap: report.min_gap,
            max_gap: report.max_gap,
            bound: report.bound,
            violations: report.violations.clone(),
        }),
        _ => {
            let verdict = if report.passes() { "PASS" } else { "FAIL" };
            println!("{verdict} max_gap ≤ {}", report.bound);
            println!("gap range [{:.3e}, {:.15}] over {} samples", report.min_gap, report.max_gap, report.samples);
            print!("{}", p.describe());
            for v in &report.violations {
                println!("  {v}");
            }
        }
    }
    Ok(Status::from_holds(report.passes()))
}
