use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::complex::{homology_of, ChainComplex, HomologyGroup};
use super::maps::ChainMapData;
use super::matrix::Matrix;
use super::ChainError;
use crate::graded::Degree;
use crate::scalar::Ring;

/// Whether the differential must strictly lower the filtration value or
/// only not raise it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    #[default]
    Strict,
    Weak,
}

/// A chain complex with a real filtration value on every generator.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredChainComplex {
    complex: ChainComplex,
    values: BTreeMap<Degree, Vec<f64>>,
    strictness: Strictness,
}

impl FilteredChainComplex {
    /// `values[k][i]` is the filtration value of the `i`-th generator in
    /// degree `k`.
    pub fn new(
        complex: ChainComplex,
        values: BTreeMap<Degree, Vec<f64>>,
        strictness: Strictness,
    ) -> Result<Self, ChainError> {
        for d in complex.degrees() {
            let got = values.get(&d).map_or(0, Vec::len);
            if got != complex.dim(d) {
                return Err(ChainError::Filtration(format!(
                    "degree {d} has {} generators but {got} filtration values",
                    complex.dim(d)
                )));
            }
            if values[&d].iter().any(|v| !v.is_finite()) {
                return Err(ChainError::Filtration(format!("non-finite value in degree {d}")));
            }
        }
        let fc = FilteredChainComplex {
            complex,
            values,
            strictness,
        };
        for k in fc.complex.boundary_degrees() {
            let m = fc.complex.boundary(k);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    if m.get(r, c).is_zero() {
                        continue;
                    }
                    let (from, to) = (fc.value(k, c), fc.value(k - 1, r));
                    let ok = match strictness {
                        Strictness::Strict => to < from,
                        Strictness::Weak => to <= from,
                    };
                    if !ok {
                        return Err(ChainError::Filtration(format!(
                            "∂ sends {} ({from}) to {} ({to})",
                            fc.complex.generators(k)[c],
                            fc.complex.generators(k - 1)[r]
                        )));
                    }
                }
            }
        }
        Ok(fc)
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn strictness(&self) -> Strictness {
        self.strictness
    }

    pub fn value(&self, degree: Degree, index: usize) -> f64 {
        self.values[&degree][index]
    }

    pub fn values(&self, degree: Degree) -> &[f64] {
        self.values.get(&degree).map_or(&[], Vec::as_slice)
    }
}

fn unit_inverse(s: &crate::scalar::Scalar) -> Option<crate::scalar::Scalar> {
    if s.is_unit() {
        s.inverse()
    } else {
        None
    }
}

/// True iff every nonzero entry of `F` lands in a generator whose
/// filtration value is at most that of its source.
pub fn check_filtration_preserving(
    f: &ChainMapData,
    source: &FilteredChainComplex,
    target: &FilteredChainComplex,
) -> Result<bool, ChainError> {
    f.validate(&source.complex, &target.complex)?;
    for k in source.complex.degrees() {
        let m = f.block(k, &source.complex, &target.complex);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !m.get(r, c).is_zero() && target.value(k + f.degree, r) > source.value(k, c) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Indices sorted by ascending filtration value, ties by position.
fn order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

/// Exact inverse of a degree-0 filtration-preserving map which, with
/// both bases sorted by filtration value, is upper triangular with unit
/// diagonal. Solved column by column by back substitution.
pub fn invert_upper_triangular(
    f: &ChainMapData,
    source: &FilteredChainComplex,
    target: &FilteredChainComplex,
) -> Result<ChainMapData, ChainError> {
    if f.degree != 0 {
        return Err(ChainError::Shape("only degree-0 maps can be inverted".into()));
    }
    if !check_filtration_preserving(f, source, target)? {
        return Err(ChainError::Filtration("map raises the filtration".into()));
    }
    let ring = source.complex.ring();
    let mut inverse = ChainMapData::new(0);
    for k in source.complex.degrees().chain(target.complex.degrees()) {
        if inverse.blocks.contains_key(&k) {
            continue;
        }
        let (sv, tv) = (source.values(k), target.values(k));
        if sv.len() != tv.len() {
            return Err(ChainError::Filtration(format!(
                "degree {k}: {} source and {} target generators cannot pair off",
                sv.len(),
                tv.len()
            )));
        }
        let (so, to) = (order(sv), order(tv));
        for (&i, &j) in so.iter().zip(&to) {
            if sv[i] != tv[j] {
                return Err(ChainError::Filtration(format!(
                    "degree {k}: {} ({}) pairs with {} ({})",
                    source.complex.generators(k)[i],
                    sv[i],
                    target.complex.generators(k)[j],
                    tv[j]
                )));
            }
        }
        let n = sv.len();
        let raw = f.block(k, &source.complex, &target.complex);
        let t = raw.select(&to, &so);
        for r in 0..n {
            for c in 0..r {
                if !t.get(r, c).is_zero() {
                    return Err(ChainError::Filtration(format!(
                        "degree {k}: not upper triangular in the filtration order"
                    )));
                }
            }
        }
        let diag_inv = (0..n)
            .map(|i| {
                unit_inverse(t.get(i, i))
                    .ok_or_else(|| ChainError::NonUnitDiagonal(source.complex.generators(k)[so[i]].clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        // Solve t · x = e_j for each j, last row first.
        let mut sorted_inv = Matrix::zeros(ring, n, n);
        for j in 0..n {
            let mut x = vec![ring.zero(); n];
            for i in (0..=j).rev() {
                let mut acc = if i == j { ring.one() } else { ring.zero() };
                for l in i + 1..=j {
                    acc = &acc - &(t.get(i, l) * &x[l]);
                }
                x[i] = &acc * &diag_inv[i];
            }
            for (i, v) in x.into_iter().enumerate() {
                sorted_inv.set(i, j, v);
            }
        }
        // sorted_inv maps sorted target coordinates to sorted source ones.
        let mut block = Matrix::zeros(ring, n, n);
        for (a, &src) in so.iter().enumerate() {
            for (b, &tgt) in to.iter().enumerate() {
                block.set(src, tgt, sorted_inv.get(a, b).clone());
            }
        }
        inverse.blocks.insert(k, block);
    }
    Ok(inverse)
}

/// Homology of the subquotient spanned by generators with filtration
/// value in `(a, b]`, reported for every degree of `c`.
pub fn filtration_window_homology(
    c: &FilteredChainComplex,
    a: f64,
    b: f64,
    ring: Ring,
) -> Result<Vec<HomologyGroup>, ChainError> {
    if !(a < b) {
        return Err(ChainError::Invalid(format!("window ({a}, {b}] is empty")));
    }
    for d in c.complex.degrees() {
        for &v in c.values(d) {
            if v == a || v == b {
                return Err(ChainError::IrregularWindow(if v == a { a } else { b }));
            }
        }
    }
    let window = c.complex.restrict(|d, i| {
        let v = c.value(d, i);
        a < v && v <= b
    })?;
    let groups = homology_of(&window.over(ring)?);
    Ok(c.complex
        .degrees()
        .map(|d| {
            groups.iter().find(|g| g.degree == d).cloned().unwrap_or(HomologyGroup {
                degree: d,
                rank: 0,
                torsion: Vec::new(),
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(values: [f64; 2]) -> FilteredChainComplex {
        let c = ChainComplex::builder(Ring::Integers)
            .generators(0, ["y"])
            .generators(1, ["x"])
            .boundary(1, Matrix::from_rows(Ring::Integers, 1, &[vec![1]]).unwrap())
            .build()
            .unwrap();
        FilteredChainComplex::new(c, BTreeMap::from([(0, vec![values[0]]), (1, vec![values[1]])]), Strictness::Strict)
            .unwrap()
    }

    fn two_in_degree_zero(values: [f64; 2]) -> FilteredChainComplex {
        let c = ChainComplex::builder(Ring::Integers)
            .generators(0, ["p", "q"])
            .build()
            .unwrap();
        FilteredChainComplex::new(c, BTreeMap::from([(0, values.to_vec())]), Strictness::Strict).unwrap()
    }

    #[test]
    fn boundary_must_lower_filtration() {
        let c = pair([1.0, 2.0]).complex().clone();
        let vals = BTreeMap::from([(0, vec![2.0]), (1, vec![2.0])]);
        assert!(FilteredChainComplex::new(c.clone(), vals.clone(), Strictness::Strict).is_err());
        assert!(FilteredChainComplex::new(c, vals, Strictness::Weak).is_ok());
    }

    #[test]
    fn worked_two_by_two_inverse() {
        let fc = two_in_degree_zero([2.0, 1.0]);
        let f = ChainMapData::new(0).with_block(0, Matrix::from_rows(Ring::Integers, 2, &[vec![1, 0], vec![7, -1]]).unwrap());
        assert!(check_filtration_preserving(&f, &fc, &fc).unwrap());
        let inv = invert_upper_triangular(&f, &fc, &fc).unwrap();
        assert_eq!(inv.blocks[&0], f.blocks[&0]);
    }

    #[test]
    fn raising_map_is_not_preserving() {
        let fc = two_in_degree_zero([2.0, 1.0]);
        let f = ChainMapData::new(0).with_block(0, Matrix::from_rows(Ring::Integers, 2, &[vec![1, 1], vec![0, 1]]).unwrap());
        assert!(!check_filtration_preserving(&f, &fc, &fc).unwrap());
    }

    #[test]
    fn non_unit_diagonal_rejected() {
        let fc = two_in_degree_zero([2.0, 1.0]);
        let f = ChainMapData::new(0).with_block(0, Matrix::from_rows(Ring::Integers, 2, &[vec![2, 0], vec![0, 1]]).unwrap());
        assert!(matches!(invert_upper_triangular(&f, &fc, &fc), Err(ChainError::NonUnitDiagonal(_))));
    }

    #[test]
    fn windows() {
        let fc = pair([1.0, 2.0]);
        let both = filtration_window_homology(&fc, 0.5, 2.5, Ring::Integers).unwrap();
        assert!(both.iter().all(HomologyGroup::is_zero));
        let top = filtration_window_homology(&fc, 1.5, 2.5, Ring::Integers).unwrap();
        assert_eq!(top[1].rank, 1);
        let none = filtration_window_homology(&fc, 5.0, 6.0, Ring::Integers).unwrap();
        assert!(none.iter().all(HomologyGroup::is_zero));
        assert!(matches!(
            filtration_window_homology(&fc, 1.0, 3.0, Ring::Integers),
            Err(ChainError::IrregularWindow(_))
        ));
    }
}
