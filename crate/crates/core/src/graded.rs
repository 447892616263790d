//! Graded basis symbols, tensor words and finite linear combinations.
//!
//! Degrees are shifted degrees throughout. A [`Word`] of length `k` is a
//! basis element of the `k`-fold tensor power; a [`GradedVector`] is a
//! finite linear combination of words, usually all of the same length.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::scalar::{Ring, Scalar};

pub type Degree = i64;

/// `(-1)^{p·q}`.
pub fn koszul_sign(p: Degree, q: Degree) -> i64 {
    if (p * q).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A named basis element of fixed degree. Ordered by degree, then name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    degree: Degree,
    name: Arc<str>,
}

impl Symbol {
    pub fn new(name: impl AsRef<str>, degree: Degree) -> Self {
        Symbol {
            degree,
            name: Arc::from(name.as_ref()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A pure tensor of basis symbols, `x₁⊗…⊗x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn single(s: Symbol) -> Self {
        Word(vec![s])
    }

    pub fn pair(a: Symbol, b: Symbol) -> Self {
        Word(vec![a, b])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn degree(&self) -> Degree {
        self.0.iter().map(Symbol::degree).sum()
    }

    pub fn split_at(&self, mid: usize) -> (Word, Word) {
        let (l, r) = self.0.split_at(mid);
        (Word(l.to_vec()), Word(r.to_vec()))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl From<Symbol> for Word {
    fn from(s: Symbol) -> Self {
        Word::single(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("⊗")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Finite linear combination of tensor words with exact coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVector {
    ring: Ring,
    terms: BTreeMap<Word, Scalar>,
}

impl GradedVector {
    pub fn zero(ring: Ring) -> Self {
        GradedVector {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(ring: Ring, word: impl Into<Word>) -> Self {
        let mut v = Self::zero(ring);
        v.add_term(word.into(), ring.one());
        v
    }

    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut v = Self::zero(ring);
        for (w, c) in terms {
            v.add_term(w, c);
        }
        v
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &Word) -> Scalar {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, word: Word, coeff: Scalar) {
        debug_assert_eq!(coeff.ring(), self.ring);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(c) => {
                let s = &*c + &coeff;
                if s.is_zero() {
                    self.terms.remove(&word);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &GradedVector, factor: &Scalar) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &Scalar) -> GradedVector {
        let mut out = GradedVector::zero(self.ring);
        out.add_assign_scaled(self, factor);
        out
    }

    pub fn scale_i64(&self, k: i64) -> GradedVector {
        self.scale(&self.ring.from_i64(k))
    }

    /// Degree shared by every term, or `None` for zero / inhomogeneous vectors.
    pub fn homogeneous_degree(&self) -> Option<Degree> {
        let mut it = self.terms.keys().map(Word::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Tensor length shared by every term.
    pub fn arity(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Word::len);
        let a = it.next()?;
        it.all(|e| e == a).then_some(a)
    }

    /// Unsigned tensor product `self ⊗ other` (words concatenated).
    pub fn tensor(&self, other: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero(self.ring);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Reinterpret every coefficient in another ring (ℤ → anything).
    pub fn to_ring(&self, ring: Ring) -> Option<GradedVector> {
        let mut out = GradedVector::zero(ring);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.to_ring(ring)?);
        }
        Some(out)
    }
}

impl std::ops::Add<&GradedVector> for &GradedVector {
    type Output = GradedVector;

    fn add(self, rhs: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &self.ring.one());
        out
    }
}

impl std::ops::Sub<&GradedVector> for &GradedVector {
    type Output = GradedVector;

    fn sub(self, rhs: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &self.ring.from_i64(-1));
        out
    }
}

impl fmt::Display for GradedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{abs}·{w}")?;
            }
        }
        Ok(())
    }
}

/// `x⊗y ↦ (-1)^{|x||y|} y⊗x`, extended linearly. Words of any other
/// length are left unchanged.
pub fn twist(v: &GradedVector) -> GradedVector {
    twist_with(v, true)
}

/// Swap of tensor factors, with the Koszul sign when `graded` is set.
pub fn twist_with(v: &GradedVector, graded: bool) -> GradedVector {
    if graded {
        twist_offset(v, 0)
    } else {
        swap_factors(v, |_, _| 1)
    }
}

/// Swap with sign `(-1)^{(|x|+k)(|y|+k)}`: the Koszul twist for the
/// grading shifted by `k`.
pub fn twist_offset(v: &GradedVector, k: Degree) -> GradedVector {
    swap_factors(v, |x, y| koszul_sign(x + k, y + k))
}

fn swap_factors(v: &GradedVector, sign_of: impl Fn(Degree, Degree) -> i64) -> GradedVector {
    let mut out = GradedVector::zero(v.ring());
    for (w, c) in v.iter() {
        if w.len() != 2 {
            out.add_term(w.clone(), c.clone());
            continue;
        }
        let (x, y) = (&w.symbols()[0], &w.symbols()[1]);
        let sign = sign_of(x.degree(), y.degree());
        out.add_term(Word::pair(y.clone(), x.clone()), c.scale_i64(sign));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: &str, d: Degree) -> Symbol {
        Symbol::new(n, d)
    }

    #[test]
    fn koszul_sign_values() {
        assert_eq!(koszul_sign(0, 5), 1);
        assert_eq!(koszul_sign(3, 3), -1);
        assert_eq!(koszul_sign(-3, -5), -1);
        assert_eq!(koszul_sign(-2, 7), 1);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let r = Ring::Rationals;
        let x = Word::single(sym("x", 1));
        let mut v = GradedVector::basis(r, x.clone());
        v.add_term(x.clone(), r.from_i64(-1));
        assert!(v.is_zero());
        v.add_term(x, r.zero());
        assert!(v.is_empty());
    }

    #[test]
    fn homogeneous_degree_detects_mixing() {
        let r = Ring::Integers;
        let mut v = GradedVector::basis(r, sym("x", 2));
        assert_eq!(v.homogeneous_degree(), Some(2));
        v.add_term(Word::single(sym("y", 3)), r.one());
        assert_eq!(v.homogeneous_degree(), None);
    }

    #[test]
    fn twist_examples() {
        let r = Ring::Rationals;
        let x0 = sym("e", 0);
        let y = sym("y", 3);
        let v = GradedVector::basis(r, Word::pair(x0.clone(), y.clone()));
        assert_eq!(twist(&v), GradedVector::basis(r, Word::pair(y, x0)));

        let x = sym("x", 1);
        let xx = GradedVector::basis(r, Word::pair(x.clone(), x));
        assert_eq!(twist(&xx), xx.scale_i64(-1));
    }

    #[test]
    fn twist_is_involution() {
        let r = Ring::Rationals;
        let syms = [sym("a", -3), sym("b", 2), sym("c", 1), sym("d", 0)];
        let mut v = GradedVector::zero(r);
        for (i, s) in syms.iter().enumerate() {
            for (j, t) in syms.iter().enumerate() {
                v.add_term(Word::pair(s.clone(), t.clone()), r.from_i64((i * 4 + j) as i64 - 7));
            }
        }
        assert_eq!(twist(&twist(&v)), v);
    }

    #[test]
    fn display_is_readable() {
        let r = Ring::Integers;
        let a = sym("A", -3);
        let one = sym("1", 0);
        let mut v = GradedVector::basis(r, Word::pair(a.clone(), one.clone()));
        v.add_term(Word::pair(one, a), r.from_i64(-2));
        assert_eq!(v.to_string(), "A⊗1 - 2·1⊗A");
    }
}
