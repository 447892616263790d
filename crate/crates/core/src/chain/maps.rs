use std::collections::{BTreeMap, BTreeSet};

use super::complex::ChainComplex;
use super::matrix::Matrix;
use super::ChainError;
use crate::graded::{Degree, Word};
use crate::operator::GradedMap;
use crate::string_ops::{IdentityReport, Violation};

/// A map of degree `degree` between chain complexes, stored as one
/// matrix per source degree `k`: `C_k → D_{k+degree}`. Missing blocks
/// are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapData {
    pub degree: Degree,
    pub blocks: BTreeMap<Degree, Matrix>,
}

fn sign(d: Degree) -> i64 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl ChainMapData {
    pub fn new(degree: Degree) -> Self {
        ChainMapData {
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn with_block(mut self, source_degree: Degree, matrix: Matrix) -> Self {
        self.blocks.insert(source_degree, matrix);
        self
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let blocks = c.degrees().map(|d| (d, Matrix::identity(c.ring(), c.dim(d)))).collect();
        ChainMapData { degree: 0, blocks }
    }

    pub fn zero(degree: Degree) -> Self {
        Self::new(degree)
    }

    /// The block on `C_k`, zero-filled when absent.
    pub fn block(&self, k: Degree, source: &ChainComplex, target: &ChainComplex) -> Matrix {
        self.blocks
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(source.ring(), target.dim(k + self.degree), source.dim(k)))
    }

    /// Check every stored block has the shape and ring the complexes
    /// demand.
    pub fn validate(&self, source: &ChainComplex, target: &ChainComplex) -> Result<(), ChainError> {
        if source.ring() != target.ring() {
            return Err(ChainError::RingMismatch {
                expected: source.ring(),
                found: target.ring(),
            });
        }
        for (&k, m) in &self.blocks {
            let want = (target.dim(k + self.degree), source.dim(k));
            if m.shape() != want {
                return Err(ChainError::Shape(format!(
                    "block on degree {k} must be {}×{}, got {}×{}",
                    want.0,
                    want.1,
                    m.rows(),
                    m.cols()
                )));
            }
            if m.ring() != source.ring() {
                return Err(ChainError::RingMismatch {
                    expected: source.ring(),
                    found: m.ring(),
                });
            }
        }
        Ok(())
    }

    /// `self ∘ inner`, where `inner : A → B` and `self : B → C`.
    pub fn after(
        &self,
        inner: &ChainMapData,
        a: &ChainComplex,
        b: &ChainComplex,
        c: &ChainComplex,
    ) -> Result<ChainMapData, ChainError> {
        let mut out = ChainMapData::new(self.degree + inner.degree);
        for k in a.degrees() {
            let m = self
                .block(k + inner.degree, b, c)
                .try_mul(&inner.block(k, a, b))
                .ok_or_else(|| ChainError::Shape("composition".into()))?;
            out.blocks.insert(k, m);
        }
        Ok(out)
    }

    /// `self - other` on every source degree of `source`.
    pub fn minus(
        &self,
        other: &ChainMapData,
        source: &ChainComplex,
        target: &ChainComplex,
    ) -> Result<ChainMapData, ChainError> {
        if self.degree != other.degree {
            return Err(ChainError::Shape("maps of different degree".into()));
        }
        let mut out = ChainMapData::new(self.degree);
        for k in source.degrees() {
            let m = self
                .block(k, source, target)
                .try_sub(&other.block(k, source, target))
                .ok_or_else(|| ChainError::Shape("difference".into()))?;
            out.blocks.insert(k, m);
        }
        Ok(out)
    }
}

/// Degrees `k` of the source where a relation between maps out of
/// `C_k` has to be checked.
fn relevant_degrees(source: &ChainComplex) -> BTreeSet<Degree> {
    source.degrees().collect()
}

fn compare(
    report: &mut IdentityReport,
    k: Degree,
    lhs: &Matrix,
    rhs: &Matrix,
    source: &ChainComplex,
    target: &ChainComplex,
    target_degree: Degree,
) {
    report.checked_pairs += lhs.rows() * lhs.cols();
    for (r, c) in lhs.differences(rhs) {
        report.violations.push(Violation {
            input: format!(
                "degree {k}: {} → {}",
                source.generators(k)[c],
                target.generators(target_degree)[r]
            ),
            lhs: lhs.get(r, c).to_string(),
            rhs: rhs.get(r, c).to_string(),
        });
    }
}

/// `[∂, F] = ∂F - (-1)^{|F|} F∂`, a map of degree `|F| - 1`.
pub fn commutator(f: &ChainMapData, source: &ChainComplex, target: &ChainComplex) -> Result<ChainMapData, ChainError> {
    f.validate(source, target)?;
    let mut out = ChainMapData::new(f.degree - 1);
    for k in relevant_degrees(source) {
        let left = target
            .boundary(k + f.degree)
            .try_mul(&f.block(k, source, target))
            .expect("validated shapes");
        let right = f
            .block(k - 1, source, target)
            .try_mul(&source.boundary(k))
            .expect("validated shapes")
            .scale_i64(sign(f.degree));
        out.blocks.insert(k, left.try_sub(&right).expect("same shape"));
    }
    Ok(out)
}

/// `∂F = (-1)^{|F|} F∂`, entrywise.
pub fn verify_chain_map(
    f: &ChainMapData,
    source: &ChainComplex,
    target: &ChainComplex,
) -> Result<IdentityReport, ChainError> {
    let c = commutator(f, source, target)?;
    let mut report = IdentityReport::new("chain-map", format!("degree {}", f.degree));
    for k in relevant_degrees(source) {
        let lhs = c.block(k, source, target);
        let zero = Matrix::zeros(source.ring(), lhs.rows(), lhs.cols());
        compare(&mut report, k, &lhs, &zero, source, target, k + c.degree);
    }
    Ok(report)
}

/// `∂H - (-1)^{|H|} H∂ = F - G` with `|H| = |F| + 1`; for maps of even
/// degree this is the familiar `∂H + H∂ = F - G`.
pub fn verify_homotopy(
    f: &ChainMapData,
    g: &ChainMapData,
    h: &ChainMapData,
    source: &ChainComplex,
    target: &ChainComplex,
) -> Result<IdentityReport, ChainError> {
    if f.degree != g.degree || h.degree != f.degree + 1 {
        return Err(ChainError::Shape(format!(
            "degrees F={}, G={}, H={} are incompatible",
            f.degree, g.degree, h.degree
        )));
    }
    f.validate(source, target)?;
    g.validate(source, target)?;
    let lhs = commutator(h, source, target)?;
    let rhs = f.minus(g, source, target)?;
    let mut report = IdentityReport::new("homotopy", format!("degree {}", f.degree));
    for k in relevant_degrees(source) {
        compare(
            &mut report,
            k,
            &lhs.block(k, source, target),
            &rhs.block(k, source, target),
            source,
            target,
            k + f.degree,
        );
    }
    Ok(report)
}

/// `∂Γ - (-1)^{|Γ|} Γ∂ = rhs`, where `rhs` has degree `|Γ| - 1`.
pub fn verify_commutator_relation(
    gamma: &ChainMapData,
    rhs: &ChainMapData,
    source: &ChainComplex,
    target: &ChainComplex,
) -> Result<IdentityReport, ChainError> {
    if rhs.degree != gamma.degree - 1 {
        return Err(ChainError::Shape(format!(
            "right-hand side has degree {}, expected {}",
            rhs.degree,
            gamma.degree - 1
        )));
    }
    rhs.validate(source, target)?;
    let lhs = commutator(gamma, source, target)?;
    let mut report = IdentityReport::new("commutator", format!("degree {}", gamma.degree));
    for k in relevant_degrees(source) {
        compare(
            &mut report,
            k,
            &lhs.block(k, source, target),
            &rhs.block(k, source, target),
            source,
            target,
            k + rhs.degree,
        );
    }
    Ok(report)
}

/// Matrix form of a graded map between complexes whose generators name
/// tensor words. `word_of` turns a source generator name into the word
/// the map is applied to; output words are located in `target` by their
/// printed form.
pub fn from_graded_map(
    map: &dyn GradedMap,
    source: &ChainComplex,
    target: &ChainComplex,
    word_of: impl Fn(&str) -> Option<Word>,
) -> Result<ChainMapData, ChainError> {
    if map.ring() != source.ring() || map.ring() != target.ring() {
        return Err(ChainError::RingMismatch {
            expected: source.ring(),
            found: map.ring(),
        });
    }
    let mut out = ChainMapData::new(map.degree());
    for k in source.degrees() {
        let mut m = Matrix::zeros(source.ring(), target.dim(k + map.degree()), source.dim(k));
        for (c, name) in source.generators(k).iter().enumerate() {
            let word = word_of(name).ok_or_else(|| ChainError::UnknownGenerator(name.clone()))?;
            let image = map.apply_word(&word).map_err(|e| ChainError::Invalid(e.to_string()))?;
            for (w, coeff) in image.iter() {
                let label = w.to_string();
                let (d, r) = target
                    .locate(&label)
                    .ok_or_else(|| ChainError::UnknownGenerator(label.clone()))?;
                if d != k + map.degree() {
                    return Err(ChainError::Shape(format!(
                        "{label} sits in degree {d}, expected {}",
                        k + map.degree()
                    )));
                }
                m.set(r, c, m.get(r, c) + coeff);
            }
        }
        out.blocks.insert(k, m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;

    fn interval() -> ChainComplex {
        ChainComplex::builder(Ring::Integers)
            .generators(0, ["a", "b"])
            .generators(1, ["e"])
            .boundary(1, Matrix::from_rows(Ring::Integers, 1, &[vec![-1], vec![1]]).unwrap())
            .build()
            .unwrap()
    }

    #[test]
    fn identity_and_zero_are_chain_maps() {
        let c = interval();
        assert!(verify_chain_map(&ChainMapData::identity(&c), &c, &c).unwrap().holds());
        assert!(verify_chain_map(&ChainMapData::zero(0), &c, &c).unwrap().holds());
        assert!(verify_chain_map(&ChainMapData::zero(1), &c, &c).unwrap().holds());
    }

    #[test]
    fn contraction_of_interval() {
        // F = id, G = projection to a, H(b) = e.
        let c = interval();
        let f = ChainMapData::identity(&c);
        let g = ChainMapData::new(0)
            .with_block(0, Matrix::from_rows(Ring::Integers, 2, &[vec![1, 1], vec![0, 0]]).unwrap())
            .with_block(1, Matrix::from_rows(Ring::Integers, 1, &[vec![0]]).unwrap());
        assert!(verify_chain_map(&g, &c, &c).unwrap().holds());
        let h = ChainMapData::new(1).with_block(0, Matrix::from_rows(Ring::Integers, 2, &[vec![0, 1]]).unwrap());
        assert!(verify_homotopy(&f, &g, &h, &c, &c).unwrap().holds());
        let bad = ChainMapData::new(1).with_block(0, Matrix::from_rows(Ring::Integers, 2, &[vec![1, 1]]).unwrap());
        let report = verify_homotopy(&f, &g, &bad, &c, &c).unwrap();
        assert!(!report.holds());
        assert!(report.violations[0].input.contains("degree 0"));
    }

    #[test]
    fn shape_errors() {
        let c = interval();
        let f = ChainMapData::new(0).with_block(0, Matrix::zeros(Ring::Integers, 1, 1));
        assert!(matches!(verify_chain_map(&f, &c, &c), Err(ChainError::Shape(_))));
    }
}
