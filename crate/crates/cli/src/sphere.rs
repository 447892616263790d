use clap::{Subcommand, ValueEnum};
use looptop::sphere::{
    coproduct_table, CoproductRow, Monomial, SignConvention, SphereLoopHomology, DEFAULT_TRUNCATION, PINNED_CONVENTION,
};
use looptop::string_ops::{check_coassociativity, check_cocommutativity, check_sullivan, CoassocSign, EpsilonCorrected};
use looptop::{GradedMap, GradedVector, Ring, SignRule, Symmetry};
use serde::Serialize;

use crate::out::{input, only, print_json, CliError, Status};
use crate::{FieldArg, Format};

#[derive(Subcommand, Debug)]
pub enum SphereCmd {
    /// Coproduct on every monomial with exponent at most K.
    Coproduct {
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_enum, default_value_t = Mode::Closed)]
        mode: Mode,
        #[command(flatten)]
        convention: ConventionArgs,
    },
    /// Check an identity on the window of exponent at most K.
    Check {
        #[arg(value_enum)]
        identity: Identity,
        #[arg(long, default_value_t = 10)]
        k: u32,
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        convention: ConventionArgs,
        /// Twist used by `cocomm`; `geometric` shifts degrees by n.
        #[arg(long, value_enum, default_value_t = SymmetryArg::Plain)]
        symmetry: SymmetryArg,
    },
}

#[derive(clap::Args, Debug)]
pub struct ConventionArgs {
    /// Tensor sign rule; defaults to the pinned convention (`unsigned`).
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,
    /// Apply the `(-1)^{(n-1)|y|}` correction to the coproduct.
    #[arg(long)]
    epsilon: bool,
}

impl ConventionArgs {
    fn convention(&self) -> SignConvention {
        SignConvention {
            rule: self.rule.map_or(PINNED_CONVENTION.rule, RuleArg::rule),
            epsilon: self.epsilon || (self.rule.is_none() && PINNED_CONVENTION.epsilon),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleArg {
    KoszulRight,
    KoszulLeft,
    Unsigned,
}

impl RuleArg {
    fn rule(self) -> SignRule {
        match self {
            RuleArg::KoszulRight => SignRule::KoszulRight,
            RuleArg::KoszulLeft => SignRule::KoszulLeft,
            RuleArg::Unsigned => SignRule::Unsigned,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Closed,
    Recursive,
    Compare,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Identity {
    Sullivan,
    Coassoc,
    Cocomm,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SymmetryArg {
    Plain,
    Graded,
    Geometric,
}

#[derive(Serialize)]
struct CoproductOutput {
    field: String,
    mode: &'static str,
    convention: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_mismatch: Option<String>,
    rows: Vec<CoproductRow>,
}

fn model(k: u32, ring: Ring) -> SphereLoopHomology {
    SphereLoopHomology::new(k.max(DEFAULT_TRUNCATION), ring)
}

pub fn run(cmd: SphereCmd, format: Format) -> Result<Status, CliError> {
    only(format, &[Format::Table, Format::Json])?;
    match cmd {
        SphereCmd::Coproduct { k, field, mode, convention } => coproduct(k, field.or(Ring::F2), mode, convention.convention(), format),
        SphereCmd::Check { identity, k, field, convention, symmetry } => {
            check(identity, k, field.or(Ring::F2), convention.convention(), symmetry, format)
        }
    }
}

fn coproduct(k: u32, ring: Ring, mode: Mode, conv: SignConvention, format: Format) -> Result<Status, CliError> {
    let m = model(k, ring);
    let basis = m.basis(k);
    let closed = |x: Monomial| -> Result<GradedVector, CliError> {
        let v = m.coproduct_closed(x).map_err(input)?;
        Ok(if conv.epsilon { m.epsilon_correct(&v) } else { v })
    };
    let mut rec = m.recursion(conv);
    let mut rows = Vec::with_capacity(basis.len());
    let mut mismatch = None;
    for &x in &basis {
        let v = match mode {
            Mode::Closed => closed(x)?,
            Mode::Recursive => rec.coproduct(x).map_err(input)?,
            Mode::Compare => {
                let c = closed(x)?;
                let r = rec.coproduct(x).map_err(input)?;
                if c != r && mismatch.is_none() {
                    mismatch = Some(format!("λ({x}): recursive {r} ≠ closed {c}"));
                }
                c
            }
        };
        rows.push((x, v));
    }
    let compare = matches!(mode, Mode::Compare);
    match format {
        Format::Json => print_json(&CoproductOutput {
            field: ring.to_string(),
            mode: match mode {
                Mode::Closed => "closed",
                Mode::Recursive => "recursive",
                Mode::Compare => "compare",
            },
            convention: conv.to_string(),
            matches: compare.then_some(mismatch.is_none()),
            first_mismatch: mismatch.clone(),
            rows: rows.iter().map(|(x, v)| CoproductRow::new(*x, v)).collect(),
        }),
        _ => {
            if compare {
                match &mismatch {
                    None => println!("MATCH (k ≤ {k}, {ring}, {conv})"),
                    Some(m) => println!("MISMATCH {m}"),
                }
            }
            print!("{}", coproduct_table(&rows));
        }
    }
    Ok(Status::from_holds(mismatch.is_none()))
}

fn check(
    identity: Identity,
    k: u32,
    ring: Ring,
    conv: SignConvention,
    symmetry: SymmetryArg,
    format: Format,
) -> Result<Status, CliError> {
    let m = model(k, ring);
    let closed = m.coproduct_map();
    let corrected = EpsilonCorrected::new(&closed, m.n());
    let lambda: &dyn GradedMap = if conv.epsilon { &corrected } else { &closed };
    let report = match identity {
        Identity::Sullivan => check_sullivan(&m.product_map(), lambda, &m.pair_window(k), conv.rule),
        Identity::Coassoc => {
            let sign = if conv.epsilon {
                CoassocSign::corrected(conv.rule, m.n())
            } else {
                CoassocSign::raw(conv.rule)
            };
            check_coassociativity(&closed, sign, &m.single_window(k))
        }
        Identity::Cocomm => {
            let symmetry = match symmetry {
                SymmetryArg::Plain => Symmetry::Plain,
                SymmetryArg::Graded => Symmetry::Graded,
                SymmetryArg::Geometric => Symmetry::Offset(m.n()),
            };
            check_cocommutativity(lambda, &m.single_window(k), symmetry)
        }
    }
    .map_err(input)?;
    match format {
        Format::Json => print_json(&report),
        _ => print!("{}", report.to_table()),
    }
    Ok(Status::from_holds(report.holds()))
}
