//! Degree-carrying linear maps between tensor powers of graded modules.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graded::{koszul_sign, Degree, GradedVector, Word};
use crate::scalar::Ring;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operator `{op}` is undefined on {input}")]
    Undefined { op: String, input: String },
    #[error("operator `{op}` expects words of length {expected}, got {input}")]
    Arity {
        op: String,
        expected: usize,
        input: String,
    },
    #[error("cannot compose `{outer}` (arity in {outer_in}) after `{inner}` (arity out {inner_out})")]
    Compose {
        outer: String,
        outer_in: usize,
        inner: String,
        inner_out: usize,
    },
    #[error("operator `{op}` has degree {degree} but maps {input} to a term of degree {found}")]
    Degree {
        op: String,
        degree: Degree,
        input: String,
        found: Degree,
    },
    #[error("exponent {exponent} exceeds truncation {truncation}")]
    Truncation { exponent: u32, truncation: u32 },
    #[error("unknown basis symbol `{0}`")]
    UnknownSymbol(String),
    #[error("{0}")]
    Model(String),
}

/// How the tensor product of two maps picks up signs when it is applied,
/// `(f⊗g)(x⊗y) = ± f(x)⊗g(y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRule {
    /// `(-1)^{|g|·|x|}`: the right-hand map moves past `x`. The default.
    KoszulRight,
    /// `(-1)^{|f|·|y|}`: maps act from the right, so `f` moves past `y`.
    KoszulLeft,
    /// No signs at all.
    Unsigned,
}

impl SignRule {
    pub const ALL: [SignRule; 3] = [SignRule::KoszulRight, SignRule::KoszulLeft, SignRule::Unsigned];

    pub fn sign(self, f_degree: Degree, g_degree: Degree, x: &Word, y: &Word) -> i64 {
        match self {
            SignRule::KoszulRight => koszul_sign(g_degree, x.degree()),
            SignRule::KoszulLeft => koszul_sign(f_degree, y.degree()),
            SignRule::Unsigned => 1,
        }
    }
}

impl Default for SignRule {
    fn default() -> Self {
        SignRule::KoszulRight
    }
}

impl fmt::Display for SignRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignRule::KoszulRight => "koszul-right",
            SignRule::KoszulLeft => "koszul-left",
            SignRule::Unsigned => "unsigned",
        })
    }
}

/// A homogeneous linear map defined on basis words.
pub trait GradedMap: Sync {
    fn name(&self) -> &str;
    fn degree(&self) -> Degree;
    fn arity_in(&self) -> usize;
    fn arity_out(&self) -> usize;
    fn ring(&self) -> Ring;

    /// Value on a single basis word of length [`arity_in`](Self::arity_in).
    fn apply_word(&self, word: &Word) -> Result<GradedVector, AlgebraError>;

    fn apply(&self, v: &GradedVector) -> Result<GradedVector, AlgebraError> {
        let mut out = GradedVector::zero(self.ring());
        for (w, c) in v.iter() {
            if w.len() != self.arity_in() {
                return Err(AlgebraError::Arity {
                    op: self.name().to_string(),
                    expected: self.arity_in(),
                    input: w.to_string(),
                });
            }
            out.add_assign_scaled(&self.apply_word(w)?, c);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Action {
    Identity,
    Zero,
    Table(BTreeMap<Word, GradedVector>),
}

/// A linear map given by a finite table on basis words, or the identity
/// / zero map on everything.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator {
    name: String,
    arity_in: usize,
    arity_out: usize,
    degree: Degree,
    ring: Ring,
    action: Action,
}

impl TensorOperator {
    pub fn identity(ring: Ring) -> Self {
        TensorOperator {
            name: "id".into(),
            arity_in: 1,
            arity_out: 1,
            degree: 0,
            ring,
            action: Action::Identity,
        }
    }

    /// The zero map; defined on every word of the right length.
    pub fn zero(
        name: impl Into<String>,
        arity_in: usize,
        arity_out: usize,
        degree: Degree,
        ring: Ring,
    ) -> Self {
        TensorOperator {
            name: name.into(),
            arity_in,
            arity_out,
            degree,
            ring,
            action: Action::Zero,
        }
    }

    /// Build from explicit values. Every output term must have degree
    /// `|input| + degree` and length `arity_out`.
    pub fn from_table(
        name: impl Into<String>,
        arity_in: usize,
        arity_out: usize,
        degree: Degree,
        ring: Ring,
        entries: impl IntoIterator<Item = (Word, GradedVector)>,
    ) -> Result<Self, AlgebraError> {
        let name = name.into();
        let mut table = BTreeMap::new();
        for (w, v) in entries {
            if w.len() != arity_in {
                return Err(AlgebraError::Arity {
                    op: name,
                    expected: arity_in,
                    input: w.to_string(),
                });
            }
            for (out, _) in v.iter() {
                if out.len() != arity_out {
                    return Err(AlgebraError::Arity {
                        op: name,
                        expected: arity_out,
                        input: out.to_string(),
                    });
                }
                if out.degree() != w.degree() + degree {
                    return Err(AlgebraError::Degree {
                        op: name,
                        degree,
                        input: w.to_string(),
                        found: out.degree(),
                    });
                }
            }
            table.insert(w, v);
        }
        Ok(TensorOperator {
            name,
            arity_in,
            arity_out,
            degree,
            ring,
            action: Action::Table(table),
        })
    }

    /// Replace (or add) the value on one basis word of a tabulated map.
    pub fn with_entry(self, word: Word, value: GradedVector) -> Result<Self, AlgebraError> {
        let Action::Table(mut table) = self.action else {
            return Err(AlgebraError::Model(format!(
                "`{}` is not a table operator",
                self.name
            )));
        };
        table.insert(word, value);
        Self::from_table(self.name, self.arity_in, self.arity_out, self.degree, self.ring, table)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Declared basis range: `None` for identity and zero maps.
    pub fn domain(&self) -> Option<impl Iterator<Item = &Word>> {
        match &self.action {
            Action::Table(t) => Some(t.keys()),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.action, Action::Identity)
    }

    /// Tabulate any graded map on the given basis words.
    pub fn tabulate(map: &dyn GradedMap, words: &[Word]) -> Result<Self, AlgebraError> {
        let entries = words
            .iter()
            .map(|w| Ok((w.clone(), map.apply_word(w)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Self::from_table(
            map.name(),
            map.arity_in(),
            map.arity_out(),
            map.degree(),
            map.ring(),
            entries,
        )
    }
}

impl GradedMap for TensorOperator {
    fn name(&self) -> &str {
        &self.name
    }

    fn degree(&self) -> Degree {
        self.degree
    }

    fn arity_in(&self) -> usize {
        self.arity_in
    }

    fn arity_out(&self) -> usize {
        self.arity_out
    }

    fn ring(&self) -> Ring {
        self.ring
    }

    fn apply_word(&self, word: &Word) -> Result<GradedVector, AlgebraError> {
        if word.len() != self.arity_in {
            return Err(AlgebraError::Arity {
                op: self.name.clone(),
                expected: self.arity_in,
                input: word.to_string(),
            });
        }
        match &self.action {
            Action::Identity => Ok(GradedVector::basis(self.ring, word.clone())),
            Action::Zero => Ok(GradedVector::zero(self.ring)),
            Action::Table(t) => t.get(word).cloned().ok_or_else(|| AlgebraError::Undefined {
                op: self.name.clone(),
                input: word.to_string(),
            }),
        }
    }
}

/// `f ⊗ g` as a map on words of length `f.arity_in + g.arity_in`.
pub struct TensorPair<'a> {
    pub left: &'a dyn GradedMap,
    pub right: &'a dyn GradedMap,
    pub rule: SignRule,
    name: String,
}

impl<'a> TensorPair<'a> {
    pub fn new(left: &'a dyn GradedMap, right: &'a dyn GradedMap, rule: SignRule) -> Self {
        let name = format!("({}⊗{})", left.name(), right.name());
        TensorPair {
            left,
            right,
            rule,
            name,
        }
    }
}

impl GradedMap for TensorPair<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn degree(&self) -> Degree {
        self.left.degree() + self.right.degree()
    }

    fn arity_in(&self) -> usize {
        self.left.arity_in() + self.right.arity_in()
    }

    fn arity_out(&self) -> usize {
        self.left.arity_out() + self.right.arity_out()
    }

    fn ring(&self) -> Ring {
        self.left.ring()
    }

    fn apply_word(&self, word: &Word) -> Result<GradedVector, AlgebraError> {
        if word.len() != self.arity_in() {
            return Err(AlgebraError::Arity {
                op: self.name.clone(),
                expected: self.arity_in(),
                input: word.to_string(),
            });
        }
        let (x, y) = word.split_at(self.left.arity_in());
        let sign = self
            .rule
            .sign(self.left.degree(), self.right.degree(), &x, &y);
        let fx = self.left.apply_word(&x)?;
        if fx.is_zero() {
            return Ok(fx);
        }
        let gy = self.right.apply_word(&y)?;
        Ok(fx.tensor(&gy).scale_i64(sign))
    }
}

/// Bilinear extension of `(f⊗g)(x⊗y) = ± f(x)⊗g(y)` with the sign chosen
/// by `rule`.
pub fn apply_tensor(
    f: &dyn GradedMap,
    g: &dyn GradedMap,
    v: &GradedVector,
    rule: SignRule,
) -> Result<GradedVector, AlgebraError> {
    TensorPair::new(f, g, rule).apply(v)
}

/// `f ∘ g`, tabulated on the domain of `g`. Identity and zero maps
/// compose symbolically.
pub fn compose(f: &TensorOperator, g: &TensorOperator) -> Result<TensorOperator, AlgebraError> {
    if f.arity_in != g.arity_out {
        return Err(AlgebraError::Compose {
            outer: f.name.clone(),
            outer_in: f.arity_in,
            inner: g.name.clone(),
            inner_out: g.arity_out,
        });
    }
    let name = format!("{}∘{}", f.name, g.name);
    let degree = f.degree + g.degree;
    if matches!(f.action, Action::Zero) || matches!(g.action, Action::Zero) {
        return Ok(TensorOperator::zero(name, g.arity_in, f.arity_out, degree, f.ring));
    }
    if g.is_identity() {
        return Ok(f.clone().with_name(name));
    }
    if f.is_identity() {
        return Ok(g.clone().with_name(name));
    }
    let Action::Table(inner) = &g.action else {
        unreachable!()
    };
    let entries = inner
        .iter()
        .map(|(w, v)| Ok((w.clone(), f.apply(v)?)))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    TensorOperator::from_table(name, g.arity_in, f.arity_out, degree, f.ring, entries)
}

/// Adapter composing two graded maps lazily, `outer ∘ inner`.
pub struct Composite<'a> {
    pub outer: &'a dyn GradedMap,
    pub inner: &'a dyn GradedMap,
    name: String,
}

impl<'a> Composite<'a> {
    pub fn new(outer: &'a dyn GradedMap, inner: &'a dyn GradedMap) -> Self {
        let name = format!("{}∘{}", outer.name(), inner.name());
        Composite { outer, inner, name }
    }
}

impl GradedMap for Composite<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn degree(&self) -> Degree {
        self.outer.degree() + self.inner.degree()
    }

    fn arity_in(&self) -> usize {
        self.inner.arity_in()
    }

    fn arity_out(&self) -> usize {
        self.outer.arity_out()
    }

    fn ring(&self) -> Ring {
        self.outer.ring()
    }

    fn apply_word(&self, word: &Word) -> Result<GradedVector, AlgebraError> {
        self.outer.apply(&self.inner.apply_word(word)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Symbol;

    fn sym(n: &str, d: Degree) -> Symbol {
        Symbol::new(n, d)
    }

    fn shift(ring: Ring, pairs: &[(Symbol, Symbol)], degree: Degree) -> TensorOperator {
        TensorOperator::from_table(
            "s",
            1,
            1,
            degree,
            ring,
            pairs
                .iter()
                .map(|(a, b)| (Word::single(a.clone()), GradedVector::basis(ring, b.clone()))),
        )
        .unwrap()
    }

    #[test]
    fn identity_tensor_identity_is_identity() {
        let r = Ring::Rationals;
        let id = TensorOperator::identity(r);
        let mut v = GradedVector::zero(r);
        v.add_term(Word::pair(sym("x", 3), sym("y", -1)), r.from_i64(2));
        v.add_term(Word::pair(sym("y", -1), sym("y", -1)), r.from_i64(-5));
        let out = apply_tensor(&id, &id, &v, SignRule::KoszulRight).unwrap();
        assert_eq!(out, v);
    }

    #[test]
    fn odd_right_map_past_odd_left_input_is_negative() {
        let r = Ring::Rationals;
        let x = sym("x", -3);
        let y = sym("y", 2);
        let y2 = sym("y'", -3);
        let g = shift(r, &[(y.clone(), y2.clone())], -5);
        let id = TensorOperator::identity(r);
        let v = GradedVector::basis(r, Word::pair(x.clone(), y));
        let out = apply_tensor(&id, &g, &v, SignRule::KoszulRight).unwrap();
        assert_eq!(out, GradedVector::basis(r, Word::pair(x, y2)).scale_i64(-1));
    }

    #[test]
    fn even_degree_introduces_no_sign() {
        let r = Ring::Rationals;
        let x = sym("x", 1);
        let y = sym("y", 1);
        let y2 = sym("y2", 3);
        let g = shift(r, &[(y.clone(), y2.clone())], 2);
        let id = TensorOperator::identity(r);
        let v = GradedVector::basis(r, Word::pair(x.clone(), y));
        for rule in SignRule::ALL {
            let out = apply_tensor(&id, &g, &v, rule).unwrap();
            assert_eq!(out, GradedVector::basis(r, Word::pair(x.clone(), y2.clone())));
        }
    }

    #[test]
    fn undefined_symbol_is_an_error() {
        let r = Ring::F2;
        let g = shift(r, &[(sym("a", 0), sym("b", 1))], 1);
        let id = TensorOperator::identity(r);
        let v = GradedVector::basis(r, Word::pair(sym("a", 0), sym("z", 0)));
        assert!(matches!(
            apply_tensor(&id, &g, &v, SignRule::KoszulRight),
            Err(AlgebraError::Undefined { .. })
        ));
    }

    #[test]
    fn table_rejects_wrong_degree() {
        let r = Ring::F2;
        let err = TensorOperator::from_table(
            "bad",
            1,
            1,
            1,
            r,
            [(Word::single(sym("a", 0)), GradedVector::basis(r, sym("b", 2)))],
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::Degree { .. }));
    }

    #[test]
    fn compose_with_identity_and_degrees() {
        let r = Ring::Integers;
        let (a, b, c) = (sym("a", 0), sym("b", 1), sym("c", 3));
        let f = shift(r, &[(b.clone(), c.clone())], 2);
        let g = shift(r, &[(a.clone(), b.clone())], 1);
        let id = TensorOperator::identity(r);
        let fid = compose(&f, &id).unwrap();
        assert_eq!(fid.apply_word(&Word::single(b.clone())).unwrap(), f.apply_word(&Word::single(b)).unwrap());
        let fg = compose(&f, &g).unwrap();
        assert_eq!(fg.degree(), 3);
        assert_eq!(fg.apply_word(&Word::single(a)).unwrap(), GradedVector::basis(r, c));
    }

    #[test]
    fn differential_squares_to_zero() {
        let r = Ring::Integers;
        let (x, y, z) = (sym("x", 2), sym("y", 1), sym("z", 0));
        let d = TensorOperator::from_table(
            "d",
            1,
            1,
            -1,
            r,
            [
                (Word::single(x.clone()), GradedVector::basis(r, y.clone())),
                (Word::single(y.clone()), GradedVector::zero(r)),
                (Word::single(z.clone()), GradedVector::zero(r)),
            ],
        )
        .unwrap();
        let dd = compose(&d, &d).unwrap();
        for s in [x, y, z] {
            assert!(dd.apply_word(&Word::single(s)).unwrap().is_zero());
        }
    }

    #[test]
    fn compose_arity_mismatch() {
        let r = Ring::F2;
        let m = TensorOperator::zero("mu", 2, 1, 0, r);
        let l = TensorOperator::zero("lambda", 1, 2, -5, r);
        assert!(compose(&l, &l).is_err());
        assert!(compose(&m, &l).is_ok());
    }
}
