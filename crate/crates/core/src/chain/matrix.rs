//! Dense exact matrices and Smith normal form over ℤ.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Ring, Scalar};

/// Dense row-major matrix with entries in a single [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Build from integer rows; every row must have length `cols`.
    pub fn from_rows(ring: Ring, cols: usize, rows: &[Vec<i64>]) -> Option<Self> {
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_bigint_rows(ring, cols, &big)
    }

    pub fn from_bigint_rows(ring: Ring, cols: usize, rows: &[Vec<BigInt>]) -> Option<Self> {
        let mut m = Self::zeros(ring, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return None;
            }
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, ring.from_bigint(v));
            }
        }
        Some(m)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.ring(), self.ring);
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Integer rows, for serialization. `None` for non-integral rationals.
    pub fn to_bigint_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(Scalar::to_bigint).collect())
            .collect()
    }

    pub fn to_ring(&self, ring: Ring) -> Option<Matrix> {
        let data = self
            .data
            .iter()
            .map(|v| v.to_ring(ring))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Product `self · rhs`; `None` on shape mismatch.
    pub fn try_mul(&self, rhs: &Matrix) -> Option<Matrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = Matrix::zeros(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Some(out)
    }

    pub fn try_add(&self, rhs: &Matrix) -> Option<Matrix> {
        if self.shape() != rhs.shape() {
            return None;
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Some(Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn try_sub(&self, rhs: &Matrix) -> Option<Matrix> {
        self.try_add(&rhs.scale_i64(-1))
    }

    pub fn scale_i64(&self, k: i64) -> Matrix {
        let f = self.ring.from_i64(k);
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * &f).collect(),
        }
    }

    /// Restriction to the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.ring, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Option<Matrix> {
        if self.rows != other.rows {
            return None;
        }
        let mut out = Matrix::zeros(self.ring, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Some(out)
    }

    /// Positions where `self` and `other` differ, row-major.
    pub fn differences(&self, other: &Matrix) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) != other.get(r, c) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Rank over the fraction field (ℚ for integer matrices).
    pub fn rank(&self) -> usize {
        let m = match self.ring {
            Ring::Integers => self.to_ring(Ring::Rationals).expect("ℤ embeds in ℚ"),
            _ => self.clone(),
        };
        row_echelon_rank(m)
    }
}

fn row_echelon_rank(mut m: Matrix) -> usize {
    let mut rank = 0;
    for c in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
            continue;
        };
        for j in 0..m.cols {
            m.data.swap(p * m.cols + j, rank * m.cols + j);
        }
        let inv = m.get(rank, c).inverse().expect("field element is invertible");
        for r in rank + 1..m.rows {
            let f = m.get(r, c) * &inv;
            if f.is_zero() {
                continue;
            }
            for j in c..m.cols {
                let v = m.get(r, j) - &(&f * m.get(rank, j));
                m.set(r, j, v);
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `left · A · right = diag(diagonal)` with `left`, `right` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero invariant factors, positive, each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Columns of `right` past the rank: an integer basis of the kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let n = self.right.len();
        (self.rank()..n)
            .map(|c| (0..n).map(|r| self.right[r][c].clone()).collect())
            .collect()
    }
}

fn ident(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form of an integer matrix by unimodular row and column
/// operations. Panics if `m` is not over ℤ.
pub fn smith_normal_form(m: &Matrix) -> SmithForm {
    assert_eq!(m.ring(), Ring::Integers, "Smith normal form needs ℤ entries");
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| m.row(r).iter().map(|v| v.to_bigint().unwrap()).collect())
        .collect();
    let mut left = ident(rows);
    let mut right = ident(cols);

    let row_axpy = |a: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for j in 0..a[0].len() {
            let t = &a[src][j] * q;
            a[dst][j] -= t;
        }
    };
    let col_axpy = |a: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in a.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    };
    let col_swap = |a: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };

    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        // Pivot: smallest nonzero entry in the trailing block.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        left.swap(t, pi);
        col_swap(&mut a, t, pj);
        col_swap(&mut right, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut left, i, t, &q);
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    left.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut right, j, t, &q);
                if !a[t][j].is_zero() {
                    col_swap(&mut a, t, j);
                    col_swap(&mut right, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero())
            });
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = -&*v;
            }
            for v in left[t].iter_mut() {
                *v = -&*v;
            }
        }
        diagonal.push(a[t][t].clone());
    }
    SmithForm {
        diagonal,
        left,
        right,
    }
}
