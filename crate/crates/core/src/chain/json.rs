//! JSON documents for complexes and maps.
//!
//! A complex:
//!
//! ```json
//! {"degrees": [{"degree": 0, "generators": [{"name": "y", "filtration": 1.0}]},
//!              {"degree": 1, "generators": [{"name": "x", "filtration": 2.0}]}],
//!  "boundaries": [{"degree": 1, "matrix": [[1]]}]}
//! ```
//!
//! Matrices are row-major with rows indexed by target generators.
//! Entries are JSON integers, or strings holding big integers or
//! fractions `p/q`. A map is `{"degree": d, "blocks": [{"degree": k,
//! "matrix": ...}]}` with `k` the source degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::filtered::{FilteredChainComplex, Strictness};
use super::maps::ChainMapData;
use super::matrix::Matrix;
use super::{ChainComplex, ChainError};
use crate::graded::Degree;
use crate::scalar::{Ring, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeDoc {
    pub degree: Degree,
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub degree: Degree,
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub degrees: Vec<DegreeDoc>,
    #[serde(default)]
    pub boundaries: Vec<BlockDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strictness: Option<Strictness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub degree: Degree,
    #[serde(default)]
    pub blocks: Vec<BlockDoc>,
}

/// `F`, `G`, `H` between two complexes; `target` defaults to `source`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyDoc {
    pub source: ComplexDoc,
    #[serde(default)]
    pub target: Option<ComplexDoc>,
    pub f: MapDoc,
    pub g: MapDoc,
    pub h: MapDoc,
}

/// A filtered map to invert; `target` defaults to `source`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertDoc {
    pub source: ComplexDoc,
    #[serde(default)]
    pub target: Option<ComplexDoc>,
    pub map: MapDoc,
}

fn invalid(msg: impl Into<String>) -> ChainError {
    ChainError::Invalid(msg.into())
}

/// Parse one matrix entry into `ring`.
pub fn parse_entry(v: &Value, ring: Ring) -> Result<Scalar, ChainError> {
    let q: BigRational = match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| invalid(format!("entry {n} is not an integer")))?;
            BigRational::from_integer(BigInt::from(i))
        }
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((p, q)) => {
                    let p: BigInt = p.trim().parse().map_err(|_| invalid(format!("bad entry {s:?}")))?;
                    let q: BigInt = q.trim().parse().map_err(|_| invalid(format!("bad entry {s:?}")))?;
                    if q == BigInt::from(0) {
                        return Err(invalid(format!("zero denominator in {s:?}")));
                    }
                    BigRational::new(p, q)
                }
                None => BigRational::from_integer(s.parse().map_err(|_| invalid(format!("bad entry {s:?}")))?),
            }
        }
        other => return Err(invalid(format!("entry {other} is neither a number nor a string"))),
    };
    if q.denom().is_one() {
        return Ok(ring.from_bigint(q.numer()));
    }
    match ring {
        Ring::Rationals => Ok(Scalar::Rat(q)),
        Ring::Prime(_) => {
            let inv = ring
                .from_bigint(q.denom())
                .inverse()
                .ok_or_else(|| invalid(format!("denominator of {q} vanishes in {ring}")))?;
            Ok(&ring.from_bigint(q.numer()) * &inv)
        }
        Ring::Integers => Err(invalid(format!("fraction {q} is not an integer"))),
    }
}

/// Inverse of [`parse_entry`]: small integers as numbers, the rest as
/// strings.
pub fn entry_value(s: &Scalar) -> Value {
    match s {
        Scalar::Int(v) => v.to_i64().map_or_else(|| Value::String(v.to_string()), Value::from),
        Scalar::Mod { value, .. } => Value::from(*value),
        Scalar::Rat(q) if q.denom().is_one() => q
            .numer()
            .to_i64()
            .map_or_else(|| Value::String(q.numer().to_string()), Value::from),
        Scalar::Rat(q) => Value::String(q.to_string()),
    }
}

pub fn matrix_from_doc(rows: &[Vec<Value>], expect: (usize, usize), ring: Ring) -> Result<Matrix, ChainError> {
    if rows.len() != expect.0 && !(rows.is_empty() && expect.1 == 0) {
        return Err(ChainError::Shape(format!("expected {} rows, got {}", expect.0, rows.len())));
    }
    let mut m = Matrix::zeros(ring, expect.0, expect.1);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != expect.1 {
            return Err(ChainError::Shape(format!(
                "row {r} has {} entries, expected {}",
                row.len(),
                expect.1
            )));
        }
        for (c, v) in row.iter().enumerate() {
            m.set(r, c, parse_entry(v, ring)?);
        }
    }
    Ok(m)
}

pub fn matrix_to_doc(m: &Matrix) -> Vec<Vec<Value>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(entry_value).collect()).collect()
}

impl ComplexDoc {
    fn generator_map(&self) -> Result<BTreeMap<Degree, Vec<&GeneratorDoc>>, ChainError> {
        let mut out: BTreeMap<Degree, Vec<&GeneratorDoc>> = BTreeMap::new();
        for d in &self.degrees {
            out.entry(d.degree).or_default().extend(d.generators.iter());
        }
        Ok(out)
    }

    pub fn to_complex(&self, ring: Ring) -> Result<ChainComplex, ChainError> {
        let gens = self.generator_map()?;
        let dim = |d: Degree| gens.get(&d).map_or(0, Vec::len);
        let mut builder = ChainComplex::builder(ring);
        for (&d, g) in &gens {
            builder = builder.generators(d, g.iter().map(|g| g.name.clone()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &self.boundaries {
            if !seen.insert(b.degree) {
                return Err(invalid(format!("boundary in degree {} given twice", b.degree)));
            }
            let m = matrix_from_doc(&b.matrix, (dim(b.degree - 1), dim(b.degree)), ring)?;
            builder = builder.boundary(b.degree, m);
        }
        builder.build()
    }

    /// Every generator must carry a filtration value.
    pub fn to_filtered(&self, ring: Ring) -> Result<FilteredChainComplex, ChainError> {
        let complex = self.to_complex(ring)?;
        let mut values = BTreeMap::new();
        for (d, g) in self.generator_map()? {
            let v = g
                .iter()
                .map(|g| {
                    g.filtration
                        .ok_or_else(|| ChainError::Filtration(format!("generator {:?} has no filtration value", g.name)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            values.insert(d, v);
        }
        FilteredChainComplex::new(complex, values, self.strictness.unwrap_or_default())
    }

    /// Canonical document: degrees ascending, empty degrees dropped,
    /// zero boundaries omitted.
    pub fn from_complex(c: &ChainComplex, filtration: Option<&FilteredChainComplex>) -> Self {
        let degrees = c
            .degrees()
            .map(|d| DegreeDoc {
                degree: d,
                generators: c
                    .generators(d)
                    .iter()
                    .enumerate()
                    .map(|(i, name)| GeneratorDoc {
                        name: name.clone(),
                        filtration: filtration.map(|f| f.value(d, i)),
                    })
                    .collect(),
            })
            .collect();
        let boundaries = c
            .boundary_degrees()
            .map(|d| BlockDoc {
                degree: d,
                matrix: matrix_to_doc(&c.boundary(d)),
            })
            .collect();
        ComplexDoc {
            degrees,
            boundaries,
            strictness: filtration.map(|f| f.strictness()),
        }
    }
}

impl MapDoc {
    pub fn to_map(&self, source: &ChainComplex, target: &ChainComplex) -> Result<ChainMapData, ChainError> {
        let mut out = ChainMapData::new(self.degree);
        for b in &self.blocks {
            if out.blocks.contains_key(&b.degree) {
                return Err(invalid(format!("block for degree {} given twice", b.degree)));
            }
            let shape = (target.dim(b.degree + self.degree), source.dim(b.degree));
            out.blocks.insert(b.degree, matrix_from_doc(&b.matrix, shape, source.ring())?);
        }
        out.validate(source, target)?;
        Ok(out)
    }

    pub fn from_map(f: &ChainMapData) -> Self {
        MapDoc {
            degree: f.degree,
            blocks: f
                .blocks
                .iter()
                .map(|(&d, m)| BlockDoc {
                    degree: d,
                    matrix: matrix_to_doc(m),
                })
                .collect(),
        }
    }
}
