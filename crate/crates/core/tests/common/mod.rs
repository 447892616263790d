#![allow(dead_code)]

use looptop::chain::{smith_normal_form, ChainComplex, ChainMapData, Matrix};
use looptop::{Ring, Scalar};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dims(rng: &mut impl Rng, max_gens: usize, degrees: usize) -> Vec<usize> {
    let mut dims = vec![0; degrees];
    let total = rng.gen_range(1..=max_gens);
    for _ in 0..total {
        dims[rng.gen_range(0..degrees)] += 1;
    }
    dims
}

/// Random integer complex in degrees `0..degrees` with at most
/// `max_gens` generators; each boundary column is a random combination
/// of a kernel basis of the boundary below.
pub fn random_complex(rng: &mut impl Rng, max_gens: usize, degrees: usize) -> ChainComplex {
    let dims = dims(rng, max_gens, degrees);
    let mut builder = ChainComplex::builder(Ring::Integers);
    for (d, &n) in dims.iter().enumerate() {
        builder = builder.generators(d as i64, (0..n).map(|i| format!("g{d}_{i}")));
    }
    let mut below: Option<Matrix> = None;
    for d in 1..degrees {
        let (rows, cols) = (dims[d - 1], dims[d]);
        let mut m = Matrix::zeros(Ring::Integers, rows, cols);
        let kernel: Vec<Vec<BigInt>> = match &below {
            None => (0..rows)
                .map(|i| (0..rows).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect(),
            Some(b) => smith_normal_form(b).kernel_basis(),
        };
        for c in 0..cols {
            if rng.gen_bool(0.25) {
                continue;
            }
            for k in &kernel {
                let coeff: i64 = rng.gen_range(-2..=2);
                for r in 0..rows {
                    let v = m.get(r, c) + &Scalar::Int(&k[r] * coeff);
                    m.set(r, c, v);
                }
            }
        }
        builder = builder.boundary(d as i64, m.clone());
        below = Some(m);
    }
    builder.build().expect("generated complex satisfies ∂² = 0")
}

pub fn random_matrix(rng: &mut impl Rng, ring: Ring, rows: usize, cols: usize, range: i64) -> Matrix {
    let mut m = Matrix::zeros(ring, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, ring.from_i64(rng.gen_range(-range..=range)));
        }
    }
    m
}

/// Random map of the given degree from `source` to `target`.
pub fn random_map(rng: &mut impl Rng, source: &ChainComplex, target: &ChainComplex, degree: i64) -> ChainMapData {
    let mut f = ChainMapData::new(degree);
    for k in source.degrees() {
        let m = random_matrix(rng, source.ring(), target.dim(k + degree), source.dim(k), 2);
        f.blocks.insert(k, m);
    }
    f
}
