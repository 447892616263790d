use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::matrix::{smith_normal_form, Matrix};
use super::ChainError;
use crate::graded::Degree;
use crate::scalar::Ring;

/// Finite free chain complex with named generators. `∂_k : C_k → C_{k-1}`
/// is stored as a matrix whose rows are indexed by the generators of
/// `C_{k-1}` and columns by those of `C_k`. `∂∘∂ = 0` is checked at
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    generators: BTreeMap<Degree, Vec<String>>,
    boundaries: BTreeMap<Degree, Matrix>,
    index: HashMap<String, (Degree, usize)>,
}

#[derive(Clone, Debug)]
pub struct ChainComplexBuilder {
    ring: Ring,
    generators: BTreeMap<Degree, Vec<String>>,
    boundaries: BTreeMap<Degree, Matrix>,
}

impl ChainComplexBuilder {
    pub fn generators<I, S>(mut self, degree: Degree, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.generators
            .entry(degree)
            .or_default()
            .extend(names.into_iter().map(Into::into));
        self
    }

    pub fn boundary(mut self, degree: Degree, matrix: Matrix) -> Self {
        self.boundaries.insert(degree, matrix);
        self
    }

    pub fn build(self) -> Result<ChainComplex, ChainError> {
        ChainComplex::new(self.ring, self.generators, self.boundaries)
    }
}

impl ChainComplex {
    pub fn builder(ring: Ring) -> ChainComplexBuilder {
        ChainComplexBuilder {
            ring,
            generators: BTreeMap::new(),
            boundaries: BTreeMap::new(),
        }
    }

    pub fn new(
        ring: Ring,
        generators: BTreeMap<Degree, Vec<String>>,
        boundaries: BTreeMap<Degree, Matrix>,
    ) -> Result<Self, ChainError> {
        let generators: BTreeMap<_, _> = generators.into_iter().filter(|(_, g)| !g.is_empty()).collect();
        let mut index = HashMap::new();
        for (&d, names) in &generators {
            for (i, n) in names.iter().enumerate() {
                if index.insert(n.clone(), (d, i)).is_some() {
                    return Err(ChainError::DuplicateGenerator(n.clone()));
                }
            }
        }
        let count = |d: Degree| generators.get(&d).map_or(0, Vec::len);
        let mut kept = BTreeMap::new();
        for (d, m) in boundaries {
            if m.ring() != ring {
                return Err(ChainError::RingMismatch {
                    expected: ring,
                    found: m.ring(),
                });
            }
            if m.shape() != (count(d - 1), count(d)) {
                return Err(ChainError::Shape(format!(
                    "∂_{d} must be {}×{}, got {}×{}",
                    count(d - 1),
                    count(d),
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_zero() {
                kept.insert(d, m);
            }
        }
        let c = ChainComplex {
            ring,
            generators,
            boundaries: kept,
            index,
        };
        for (&d, m) in &c.boundaries {
            let below = c.boundary(d - 1);
            if !below.try_mul(m).expect("shapes checked").is_zero() {
                return Err(ChainError::NotAComplex { degree: d });
            }
        }
        Ok(c)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Degrees carrying at least one generator, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.generators.keys().copied()
    }

    pub fn generators(&self, degree: Degree) -> &[String] {
        self.generators.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, degree: Degree) -> usize {
        self.generators(degree).len()
    }

    pub fn total_generators(&self) -> usize {
        self.index.len()
    }

    pub fn locate(&self, name: &str) -> Option<(Degree, usize)> {
        self.index.get(name).copied()
    }

    /// `∂_k`, a zero matrix of the right shape when nothing was stored.
    pub fn boundary(&self, degree: Degree) -> Matrix {
        self.boundaries
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.ring, self.dim(degree - 1), self.dim(degree)))
    }

    /// Degrees with a nonzero differential.
    pub fn boundary_degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.boundaries.keys().copied()
    }

    /// Base change along ℤ → R (or the identity).
    pub fn over(&self, ring: Ring) -> Result<ChainComplex, ChainError> {
        if ring == self.ring {
            return Ok(self.clone());
        }
        let boundaries = self
            .boundaries
            .iter()
            .map(|(&d, m)| {
                m.to_ring(ring)
                    .map(|m| (d, m))
                    .ok_or(ChainError::RingMismatch {
                        expected: self.ring,
                        found: ring,
                    })
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        ChainComplex::new(ring, self.generators.clone(), boundaries)
    }

    /// Subcomplex or subquotient spanned by the generators selected by
    /// `keep`. The caller is responsible for the selection being closed
    /// under the relevant quotient.
    pub fn restrict(&self, keep: impl Fn(Degree, usize) -> bool) -> Result<ChainComplex, ChainError> {
        let selected: BTreeMap<Degree, Vec<usize>> = self
            .generators
            .iter()
            .map(|(&d, g)| (d, (0..g.len()).filter(|&i| keep(d, i)).collect()))
            .collect();
        let sel = |d: Degree| selected.get(&d).cloned().unwrap_or_default();
        let generators = selected
            .iter()
            .map(|(&d, idx)| (d, idx.iter().map(|&i| self.generators[&d][i].clone()).collect()))
            .collect();
        let boundaries = self
            .boundaries
            .iter()
            .map(|(&d, m)| (d, m.select(&sel(d - 1), &sel(d))))
            .collect();
        ChainComplex::new(self.ring, generators, boundaries)
    }

    /// `C ⊗ D` with `∂(x⊗y) = ∂x⊗y + (-1)^{|x|} x⊗∂y`; generators are
    /// named `x⊗y`.
    pub fn tensor(&self, other: &ChainComplex) -> Result<ChainComplex, ChainError> {
        if self.ring != other.ring {
            return Err(ChainError::RingMismatch {
                expected: self.ring,
                found: other.ring,
            });
        }
        let ring = self.ring;
        let mut generators: BTreeMap<Degree, Vec<(Degree, usize, usize)>> = BTreeMap::new();
        for (&i, xs) in &self.generators {
            for (&j, ys) in &other.generators {
                let slot = generators.entry(i + j).or_default();
                for a in 0..xs.len() {
                    for b in 0..ys.len() {
                        slot.push((i, a, b));
                    }
                }
            }
        }
        let position: HashMap<(Degree, Degree, usize, usize), usize> = generators
            .iter()
            .flat_map(|(&k, v)| v.iter().enumerate().map(move |(p, &(i, a, b))| ((k, i, a, b), p)))
            .collect();
        let mut boundaries = BTreeMap::new();
        for (&k, sources) in &generators {
            let targets = generators.get(&(k - 1)).map_or(0, Vec::len);
            let mut m = Matrix::zeros(ring, targets, sources.len());
            for (col, &(i, a, b)) in sources.iter().enumerate() {
                let j = k - i;
                let dx = self.boundary(i);
                for r in 0..dx.rows() {
                    let c = dx.get(r, a);
                    if !c.is_zero() {
                        let row = position[&(k - 1, i - 1, r, b)];
                        m.set(row, col, m.get(row, col) + c);
                    }
                }
                let dy = other.boundary(j);
                let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                for r in 0..dy.rows() {
                    let c = dy.get(r, b);
                    if !c.is_zero() {
                        let row = position[&(k - 1, i, a, r)];
                        m.set(row, col, m.get(row, col) + &c.scale_i64(sign));
                    }
                }
            }
            boundaries.insert(k, m);
        }
        let names = generators
            .iter()
            .map(|(&k, v)| {
                (
                    k,
                    v.iter()
                        .map(|&(i, a, b)| {
                            format!("{}⊗{}", self.generators[&i][a], other.generators[&(k - i)][b])
                        })
                        .collect(),
                )
            })
            .collect();
        ChainComplex::new(ring, names, boundaries)
    }
}

/// One homology group: free rank plus torsion coefficients (ℤ only).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: Degree,
    pub rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn describe(&self, ring: Ring) -> String {
        let mut parts = Vec::new();
        if self.rank > 0 {
            let base = ring.to_string();
            parts.push(if self.rank == 1 {
                base
            } else {
                format!("{base}^{}", self.rank)
            });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{} = rank {}", self.degree, self.rank)?;
        if !self.torsion.is_empty() {
            let t: Vec<String> = self.torsion.iter().map(|x| x.to_string()).collect();
            write!(f, ", torsion [{}]", t.join(", "))?;
        }
        Ok(())
    }
}

/// Homology in every degree that carries generators, over the complex's
/// own ring: ranks and torsion via Smith normal form over ℤ, dimensions
/// via rank–nullity over a field.
pub fn homology_of(c: &ChainComplex) -> Vec<HomologyGroup> {
    c.degrees()
        .map(|d| {
            let n = c.dim(d);
            let out_rank = c.boundary(d).rank();
            let incoming = c.boundary(d + 1);
            if c.ring() == Ring::Integers {
                let snf = smith_normal_form(&incoming);
                HomologyGroup {
                    degree: d,
                    rank: n - out_rank - snf.rank(),
                    torsion: snf.torsion(),
                }
            } else {
                HomologyGroup {
                    degree: d,
                    rank: n - out_rank - incoming.rank(),
                    torsion: Vec::new(),
                }
            }
        })
        .collect()
}

/// Homology with coefficients in `ring`, base-changing from ℤ if needed.
pub fn homology(c: &ChainComplex, ring: Ring) -> Result<Vec<HomologyGroup>, ChainError> {
    Ok(homology_of(&c.over(ring)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>], cols: usize) -> Matrix {
        Matrix::from_rows(Ring::Integers, cols, rows).unwrap()
    }

    #[test]
    fn zero_differential_gives_free_homology() {
        let c = ChainComplex::builder(Ring::Integers)
            .generators(1, ["a", "b"])
            .build()
            .unwrap();
        let h = homology(&c, Ring::Integers).unwrap();
        assert_eq!(h, vec![HomologyGroup { degree: 1, rank: 2, torsion: vec![] }]);
    }

    #[test]
    fn multiplication_by_two() {
        let c = ChainComplex::builder(Ring::Integers)
            .generators(0, ["y"])
            .generators(1, ["x"])
            .boundary(1, z(&[vec![2]], 1))
            .build()
            .unwrap();
        let h = homology(&c, Ring::Integers).unwrap();
        assert_eq!(h[0].rank, 0);
        assert_eq!(h[0].torsion, vec![BigInt::from(2)]);
        assert!(h[1].is_zero());
        let h2 = homology(&c, Ring::F2).unwrap();
        assert_eq!((h2[0].rank, h2[1].rank), (1, 1));
        let hq = homology(&c, Ring::Rationals).unwrap();
        assert!(hq.iter().all(HomologyGroup::is_zero));
    }

    #[test]
    fn circle_morse_complex() {
        let c = ChainComplex::builder(Ring::Integers)
            .generators(0, ["min"])
            .generators(1, ["max"])
            .boundary(1, z(&[vec![0]], 1))
            .build()
            .unwrap();
        let h = homology(&c, Ring::Integers).unwrap();
        assert_eq!(h.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn rejects_bad_complexes() {
        let err = ChainComplex::builder(Ring::Integers)
            .generators(0, ["p"])
            .generators(1, ["e"])
            .generators(2, ["f"])
            .boundary(1, z(&[vec![1]], 1))
            .boundary(2, z(&[vec![1]], 1))
            .build()
            .unwrap_err();
        assert_eq!(err, ChainError::NotAComplex { degree: 2 });

        let err = ChainComplex::builder(Ring::Integers)
            .generators(0, ["p", "p"])
            .build()
            .unwrap_err();
        assert!(matches!(err, ChainError::DuplicateGenerator(_)));

        let err = ChainComplex::builder(Ring::Integers)
            .generators(0, ["p"])
            .generators(1, ["e"])
            .boundary(1, z(&[vec![1, 1]], 2))
            .build()
            .unwrap_err();
        assert!(matches!(err, ChainError::Shape(_)));
    }

    #[test]
    fn tensor_of_intervals_is_a_square() {
        let interval = ChainComplex::builder(Ring::Integers)
            .generators(0, ["a", "b"])
            .generators(1, ["e"])
            .boundary(1, z(&[vec![-1], vec![1]], 1))
            .build()
            .unwrap();
        let sq = interval.tensor(&interval).unwrap();
        assert_eq!((sq.dim(0), sq.dim(1), sq.dim(2)), (4, 4, 1));
        let h = homology(&sq, Ring::Integers).unwrap();
        assert_eq!(h.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![1, 0, 0]);
        assert!(sq.locate("e⊗e").is_some());
    }

    #[test]
    fn restrict_keeps_boundaries_consistent() {
        let c = ChainComplex::builder(Ring::Integers)
            .generators(0, ["y", "w"])
            .generators(1, ["x"])
            .boundary(1, z(&[vec![1], vec![0]], 1))
            .build()
            .unwrap();
        let sub = c.restrict(|d, i| !(d == 0 && i == 1)).unwrap();
        assert_eq!(sub.total_generators(), 2);
        assert!(homology(&sub, Ring::Integers).unwrap().iter().all(HomologyGroup::is_zero));
    }
}
