use serde::Serialize;

use super::complex::{homology_of, ChainComplex, HomologyGroup};
use super::maps::ChainMapData;
use super::matrix::{smith_normal_form, Matrix};
use super::ChainError;
use crate::graded::Degree;
use crate::scalar::Ring;

/// The cycle `q₀` spanning the image of a point, weighted by `χ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinguishedPoint {
    pub generator: String,
    pub euler_characteristic: i64,
}

impl DistinguishedPoint {
    pub fn new(generator: impl Into<String>, euler_characteristic: i64) -> Self {
        DistinguishedPoint {
            generator: generator.into(),
            euler_characteristic,
        }
    }
}

/// How the quotient `C / R·χq₀` is modelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    /// `χ = 0` in the ring: nothing to divide out.
    Unchanged,
    /// `χ` is a unit: `q₀` is dropped from the basis.
    Quotient,
    /// ℤ with `|χ| ≥ 2`: the quotient is not free, so a generator `c`
    /// with `∂c = χq₀` is added one degree up. Its homology is that of
    /// the quotient.
    Cone,
}

fn locate_cycle(c: &ChainComplex, dp: &DistinguishedPoint) -> Result<(Degree, usize), ChainError> {
    let (d, i) = c
        .locate(&dp.generator)
        .ok_or_else(|| ChainError::UnknownGenerator(dp.generator.clone()))?;
    let bd = c.boundary(d);
    if (0..bd.rows()).any(|r| !bd.get(r, i).is_zero()) {
        return Err(ChainError::NotACycle(dp.generator.clone()));
    }
    Ok((d, i))
}

pub fn reduction_kind(ring: Ring, chi: i64) -> ReductionKind {
    if ring.kills(chi) {
        ReductionKind::Unchanged
    } else if ring.from_i64(chi).is_unit() {
        ReductionKind::Quotient
    } else {
        ReductionKind::Cone
    }
}

/// Name of the extra generator in the cone model.
pub fn cone_generator(dp: &DistinguishedPoint) -> String {
    format!("cone({})", dp.generator)
}

/// The reduced complex `C / R·χq₀`; see [`ReductionKind`] for the
/// three cases.
pub fn reduced_complex(c: &ChainComplex, dp: &DistinguishedPoint) -> Result<ChainComplex, ChainError> {
    let (d, i) = locate_cycle(c, dp)?;
    match reduction_kind(c.ring(), dp.euler_characteristic) {
        ReductionKind::Unchanged => Ok(c.clone()),
        ReductionKind::Quotient => c.restrict(|deg, j| !(deg == d && j == i)),
        ReductionKind::Cone => {
            let ring = c.ring();
            let name = cone_generator(dp);
            if c.locate(&name).is_some() {
                return Err(ChainError::DuplicateGenerator(name));
            }
            let mut builder = ChainComplex::builder(ring);
            for deg in c.degrees() {
                builder = builder.generators(deg, c.generators(deg).iter().cloned());
            }
            builder = builder.generators(d + 1, [name]);
            let upper = c.boundary(d + 1);
            let mut wide = Matrix::zeros(ring, upper.rows(), upper.cols() + 1);
            for r in 0..upper.rows() {
                for col in 0..upper.cols() {
                    wide.set(r, col, upper.get(r, col).clone());
                }
            }
            wide.set(i, upper.cols(), ring.from_i64(dp.euler_characteristic));
            for deg in c.boundary_degrees() {
                if deg == d + 2 {
                    // The cone generator is a new row of ∂_{d+2}, with zeros.
                    let b = c.boundary(deg);
                    let mut tall = Matrix::zeros(ring, b.rows() + 1, b.cols());
                    for r in 0..b.rows() {
                        for col in 0..b.cols() {
                            tall.set(r, col, b.get(r, col).clone());
                        }
                    }
                    builder = builder.boundary(deg, tall);
                } else if deg != d + 1 {
                    builder = builder.boundary(deg, c.boundary(deg));
                }
            }
            builder.boundary(d + 1, wide).build()
        }
    }
}

/// Induced map on reduced complexes for a degree-0 chain map with
/// `F(q₀) = q₀`.
pub fn reduced_chain_map(
    f: &ChainMapData,
    source: &ChainComplex,
    target: &ChainComplex,
    dp_source: &DistinguishedPoint,
    dp_target: &DistinguishedPoint,
) -> Result<ChainMapData, ChainError> {
    if f.degree != 0 || dp_source.euler_characteristic != dp_target.euler_characteristic {
        return Err(ChainError::Invalid(
            "reduced maps need degree 0 and equal Euler characteristics".into(),
        ));
    }
    let (d, i) = locate_cycle(source, dp_source)?;
    let (dt, it) = locate_cycle(target, dp_target)?;
    if d != dt {
        return Err(ChainError::Shape("distinguished generators in different degrees".into()));
    }
    let block = f.block(d, source, target);
    let fixes = (0..block.rows()).all(|r| {
        let v = block.get(r, i);
        if r == it {
            v.is_one()
        } else {
            v.is_zero()
        }
    });
    if !fixes {
        return Err(ChainError::Invalid("map does not fix the distinguished generator".into()));
    }
    let ring = source.ring();
    let mut out = ChainMapData::new(0);
    match reduction_kind(ring, dp_source.euler_characteristic) {
        ReductionKind::Unchanged => return Ok(f.clone()),
        ReductionKind::Quotient => {
            for deg in source.degrees() {
                let b = f.block(deg, source, target);
                let rows: Vec<usize> = (0..b.rows()).filter(|&r| !(deg == d && r == it)).collect();
                let cols: Vec<usize> = (0..b.cols()).filter(|&c| !(deg == d && c == i)).collect();
                out.blocks.insert(deg, b.select(&rows, &cols));
            }
        }
        ReductionKind::Cone => {
            for deg in source.degrees().chain(std::iter::once(d + 1)) {
                let b = f.block(deg, source, target);
                if deg == d + 1 {
                    let mut wide = Matrix::zeros(ring, b.rows() + 1, b.cols() + 1);
                    for r in 0..b.rows() {
                        for c in 0..b.cols() {
                            wide.set(r, c, b.get(r, c).clone());
                        }
                    }
                    wide.set(b.rows(), b.cols(), ring.one());
                    out.blocks.insert(deg, wide);
                } else {
                    out.blocks.insert(deg, b);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedComparison {
    pub kind: ReductionKind,
    /// Whether `R → H_d(C)`, `1 ↦ χ[q₀]`, is injective.
    pub hypothesis_holds: bool,
    /// `Some` only when the hypothesis holds.
    pub agrees: Option<bool>,
    /// Homology of [`reduced_complex`].
    pub reduced: Vec<HomologyGroup>,
    /// `H(C) / χ·[q₀]`.
    pub quotient: Vec<HomologyGroup>,
    pub note: String,
}

fn nonzero(groups: &[HomologyGroup]) -> Vec<HomologyGroup> {
    groups.iter().filter(|g| !g.is_zero()).cloned().collect()
}

/// Compare the homology of the reduced complex with `H(C)` divided by
/// the class `χ[q₀]`.
pub fn compare_reduced(c: &ChainComplex, dp: &DistinguishedPoint) -> Result<ReducedComparison, ChainError> {
    let (d, i) = locate_cycle(c, dp)?;
    let ring = c.ring();
    let kind = reduction_kind(ring, dp.euler_characteristic);
    let reduced = homology_of(&reduced_complex(c, dp)?);

    let upper = c.boundary(d + 1);
    let mut column = Matrix::zeros(ring, c.dim(d), 1);
    column.set(i, 0, ring.from_i64(dp.euler_characteristic));
    let widened = upper.hcat(&column).expect("same row count");
    let hypothesis_holds = kind == ReductionKind::Unchanged || widened.rank() > upper.rank();

    let mut quotient = homology_of(c);
    if kind != ReductionKind::Unchanged {
        let cycles = c.dim(d) - c.boundary(d).rank();
        let slot = quotient.iter_mut().find(|g| g.degree == d).expect("degree present");
        if ring == Ring::Integers {
            let snf = smith_normal_form(&widened);
            slot.rank = cycles - snf.rank();
            slot.torsion = snf.torsion();
        } else {
            slot.rank = cycles - widened.rank();
        }
    }

    let (agrees, note) = if hypothesis_holds {
        let same = nonzero(&reduced) == nonzero(&quotient);
        (Some(same), if same { "agree" } else { "differ" }.to_string())
    } else {
        (
            None,
            format!(
                "hypothesis fails: {}·[{}] has finite order in H_{d}; no comparison made",
                dp.euler_characteristic, dp.generator
            ),
        )
    };
    Ok(ReducedComparison {
        kind,
        hypothesis_holds,
        agrees,
        reduced,
        quotient,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn point(ring: Ring) -> ChainComplex {
        ChainComplex::builder(ring).generators(0, ["q0"]).build().unwrap()
    }

    #[test]
    fn point_with_chi_two_over_integers() {
        let dp = DistinguishedPoint::new("q0", 2);
        let r = reduced_complex(&point(Ring::Integers), &dp).unwrap();
        let h = homology_of(&r);
        assert_eq!(h[0].rank, 0);
        assert_eq!(h[0].torsion, vec![BigInt::from(2)]);
        let cmp = compare_reduced(&point(Ring::Integers), &dp).unwrap();
        assert_eq!(cmp.agrees, Some(true));
        assert_eq!(cmp.kind, ReductionKind::Cone);
    }

    #[test]
    fn chi_zero_and_two_torsion_leave_complex_alone() {
        let c = point(Ring::Integers);
        assert_eq!(reduced_complex(&c, &DistinguishedPoint::new("q0", 0)).unwrap(), c);
        let c2 = point(Ring::F2);
        assert_eq!(reduced_complex(&c2, &DistinguishedPoint::new("q0", 2)).unwrap(), c2);
    }

    #[test]
    fn unit_chi_drops_the_generator() {
        let c = point(Ring::Rationals);
        let r = reduced_complex(&c, &DistinguishedPoint::new("q0", 2)).unwrap();
        assert_eq!(r.total_generators(), 0);
    }

    #[test]
    fn boundary_point_fails_hypothesis() {
        let c = ChainComplex::builder(Ring::Integers)
            .generators(0, ["q0"])
            .generators(1, ["e"])
            .boundary(1, Matrix::from_rows(Ring::Integers, 1, &[vec![1]]).unwrap())
            .build()
            .unwrap();
        let cmp = compare_reduced(&c, &DistinguishedPoint::new("q0", 2)).unwrap();
        assert!(!cmp.hypothesis_holds);
        assert_eq!(cmp.agrees, None);
    }

    #[test]
    fn errors() {
        let c = ChainComplex::builder(Ring::Integers)
            .generators(0, ["p"])
            .generators(1, ["q0"])
            .boundary(1, Matrix::from_rows(Ring::Integers, 1, &[vec![1]]).unwrap())
            .build()
            .unwrap();
        assert!(matches!(
            reduced_complex(&c, &DistinguishedPoint::new("q0", 2)),
            Err(ChainError::NotACycle(_))
        ));
        assert!(matches!(
            reduced_complex(&c, &DistinguishedPoint::new("zz", 2)),
            Err(ChainError::UnknownGenerator(_))
        ));
    }
}
