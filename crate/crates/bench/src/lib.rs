//! Shared fixtures for the criterion benches.

use looptop::chain::{ChainComplex, Matrix};
use looptop::Ring;

/// Boundary of the standard `k`-simplex's faces arranged as a chain
/// complex of `k + 1` vertices, `C(k+1, 2)` edges and `C(k+1, 3)` triangles.
pub fn simplex_skeleton(k: usize) -> ChainComplex {
    let verts: Vec<String> = (0..=k).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..=k {
        for j in i + 1..=k {
            edges.push((i, j));
        }
    }
    let mut tris = Vec::new();
    for i in 0..=k {
        for j in i + 1..=k {
            for l in j + 1..=k {
                tris.push((i, j, l));
            }
        }
    }
    let mut d1 = Matrix::zeros(Ring::Integers, verts.len(), edges.len());
    for (c, &(i, j)) in edges.iter().enumerate() {
        d1.set(j, c, Ring::Integers.from_i64(1));
        d1.set(i, c, Ring::Integers.from_i64(-1));
    }
    let edge_index = |a: usize, b: usize| edges.iter().position(|&e| e == (a, b)).unwrap();
    let mut d2 = Matrix::zeros(Ring::Integers, edges.len(), tris.len());
    for (c, &(i, j, l)) in tris.iter().enumerate() {
        d2.set(edge_index(j, l), c, Ring::Integers.from_i64(1));
        d2.set(edge_index(i, l), c, Ring::Integers.from_i64(-1));
        d2.set(edge_index(i, j), c, Ring::Integers.from_i64(1));
    }
    ChainComplex::builder(Ring::Integers)
        .generators(0, verts)
        .generators(1, edges.iter().map(|(i, j)| format!("e{i}{j}")))
        .generators(2, tris.iter().map(|(i, j, l)| format!("t{i}{j}{l}")))
        .boundary(1, d1)
        .boundary(2, d2)
        .build()
        .expect("simplex skeleton is a chain complex")
}
