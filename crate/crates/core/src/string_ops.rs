//! Extensional checks of the algebraic identities relating a loop
//! product `μ` and a loop coproduct `λ` on a finite window of basis
//! inputs: Sullivan's relation, coassociativity (with an optional sign
//! correction), graded cocommutativity, and the algebra axioms for `μ`.
//!
//! Every check evaluates both sides on each input of a [`BasisWindow`]
//! and records the inputs where they disagree. Inputs are processed in
//! parallel; the violation list is always in window order.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::graded::{twist_offset, twist_with, Degree, GradedVector, Symbol, Word};
use crate::operator::{AlgebraError, Composite, GradedMap, SignRule, TensorOperator, TensorPair};
use crate::scalar::Ring;

/// Finite list of basis inputs together with a human-readable label.
#[derive(Clone, Debug)]
pub struct BasisWindow {
    pub label: String,
    pub inputs: Vec<Word>,
}

impl BasisWindow {
    pub fn new(label: impl Into<String>, inputs: Vec<Word>) -> Self {
        BasisWindow {
            label: label.into(),
            inputs,
        }
    }

    pub fn singles(label: impl Into<String>, symbols: &[Symbol]) -> Self {
        Self::new(label, symbols.iter().cloned().map(Word::single).collect())
    }

    /// All ordered pairs.
    pub fn pairs(label: impl Into<String>, symbols: &[Symbol]) -> Self {
        let inputs = symbols
            .iter()
            .flat_map(|a| symbols.iter().map(move |b| Word::pair(a.clone(), b.clone())))
            .collect();
        Self::new(label, inputs)
    }

    /// All ordered triples.
    pub fn triples(label: impl Into<String>, symbols: &[Symbol]) -> Self {
        let mut inputs = Vec::with_capacity(symbols.len().pow(3));
        for a in symbols {
            for b in symbols {
                for c in symbols {
                    inputs.push(Word::new(vec![a.clone(), b.clone(), c.clone()]));
                }
            }
        }
        Self::new(label, inputs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub window: String,
    pub checked_pairs: usize,
    pub violations: Vec<Violation>,
}

impl IdentityReport {
    pub fn new(identity: impl Into<String>, window: impl Into<String>) -> Self {
        IdentityReport {
            identity: identity.into(),
            window: window.into(),
            checked_pairs: 0,
            violations: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// Line-oriented table: one header line, one line per violation.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let verdict = if self.holds() { "HOLDS" } else { "VIOLATED" };
        let _ = writeln!(
            s,
            "{:<24} {:<28} checked={:<8} violations={:<6} {}",
            self.identity,
            self.window,
            self.checked_pairs,
            self.violations.len(),
            verdict
        );
        for v in &self.violations {
            let _ = writeln!(s, "  input {}: lhs = {} ; rhs = {}", v.input, v.lhs, v.rhs);
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    fn absorb(&mut self, results: Vec<Option<Violation>>) {
        self.checked_pairs += results.len();
        self.violations.extend(results.into_iter().flatten());
    }
}

fn compare_all<F>(inputs: &[Word], f: F) -> Result<Vec<Option<Violation>>, AlgebraError>
where
    F: Fn(&Word) -> Result<(GradedVector, GradedVector), AlgebraError> + Sync,
{
    inputs
        .par_iter()
        .map(|w| {
            let (lhs, rhs) = f(w)?;
            Ok((lhs != rhs).then(|| Violation {
                input: w.to_string(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }))
        })
        .collect()
}

/// Right-hand side of Sullivan's relation on `a⊗b`:
/// `(1⊗μ)(λ⊗1)(a⊗b) + (μ⊗1)(1⊗λ)(a⊗b)`.
pub fn sullivan_rhs(
    mu: &dyn GradedMap,
    lambda: &dyn GradedMap,
    input: &Word,
    rule: SignRule,
) -> Result<GradedVector, AlgebraError> {
    let id = TensorOperator::identity(mu.ring());
    let first = TensorPair::new(&id, mu, rule).apply(&TensorPair::new(lambda, &id, rule).apply_word(input)?)?;
    let second = TensorPair::new(mu, &id, rule).apply(&TensorPair::new(&id, lambda, rule).apply_word(input)?)?;
    Ok(&first + &second)
}

/// Compare `λμ(a⊗b)` with [`sullivan_rhs`] on every pair in the window.
pub fn check_sullivan(
    mu: &dyn GradedMap,
    lambda: &dyn GradedMap,
    window: &BasisWindow,
    rule: SignRule,
) -> Result<IdentityReport, AlgebraError> {
    let lhs_map = Composite::new(lambda, mu);
    let results = compare_all(&window.inputs, |w| {
        Ok((lhs_map.apply_word(w)?, sullivan_rhs(mu, lambda, w, rule)?))
    })?;
    let mut report = IdentityReport::new("sullivan", &window.label);
    report.absorb(results);
    Ok(report)
}

/// Sign correction applied to a coproduct before testing
/// coassociativity: the component `x⊗y` is multiplied by
/// `(-1)^{(n-1)(j-n)}` with `j` the geometric degree of `y`, i.e.
/// `j - n = |y|` in shifted grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoassocSign {
    pub rule: SignRule,
    /// Manifold dimension for the correction; `None` disables it.
    pub epsilon: Option<i64>,
}

impl CoassocSign {
    pub fn raw(rule: SignRule) -> Self {
        CoassocSign { rule, epsilon: None }
    }

    pub fn corrected(rule: SignRule, n: i64) -> Self {
        CoassocSign {
            rule,
            epsilon: Some(n),
        }
    }
}

/// `λ` with every `x⊗y` term multiplied by `(-1)^{(n-1)|y|}`.
pub struct EpsilonCorrected<'a> {
    pub inner: &'a dyn GradedMap,
    pub n: i64,
    name: String,
}

impl<'a> EpsilonCorrected<'a> {
    pub fn new(inner: &'a dyn GradedMap, n: i64) -> Self {
        let name = format!("ε{}", inner.name());
        EpsilonCorrected { inner, n, name }
    }
}

/// `(-1)^{(n-1)(j-n)}` for a second tensor factor of shifted degree `j - n`.
pub fn epsilon_sign(n: i64, second_shifted: Degree) -> i64 {
    crate::graded::koszul_sign(n - 1, second_shifted)
}

impl GradedMap for EpsilonCorrected<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn degree(&self) -> Degree {
        self.inner.degree()
    }

    fn arity_in(&self) -> usize {
        self.inner.arity_in()
    }

    fn arity_out(&self) -> usize {
        self.inner.arity_out()
    }

    fn ring(&self) -> Ring {
        self.inner.ring()
    }

    fn apply_word(&self, word: &Word) -> Result<GradedVector, AlgebraError> {
        let raw = self.inner.apply_word(word)?;
        let mut out = GradedVector::zero(raw.ring());
        for (w, c) in raw.iter() {
            let sign = match w.symbols() {
                [_, y] => epsilon_sign(self.n, y.degree()),
                _ => 1,
            };
            out.add_term(w.clone(), c.scale_i64(sign));
        }
        Ok(out)
    }
}

/// Compare `(λ⊗1)λ` with `(1⊗λ)λ` on every single input of the window.
pub fn check_coassociativity(
    lambda: &dyn GradedMap,
    sign: CoassocSign,
    window: &BasisWindow,
) -> Result<IdentityReport, AlgebraError> {
    let corrected;
    let lam: &dyn GradedMap = match sign.epsilon {
        Some(n) => {
            corrected = EpsilonCorrected::new(lambda, n);
            &corrected
        }
        None => lambda,
    };
    let id = TensorOperator::identity(lambda.ring());
    let left = TensorPair::new(lam, &id, sign.rule);
    let right = TensorPair::new(&id, lam, sign.rule);
    let results = compare_all(&window.inputs, |w| {
        let once = lam.apply_word(w)?;
        Ok((left.apply(&once)?, right.apply(&once)?))
    })?;
    let label = match sign.epsilon {
        Some(_) => format!("coassociativity[{}, ε]", sign.rule),
        None => format!("coassociativity[{}]", sign.rule),
    };
    let mut report = IdentityReport::new(label, &window.label);
    report.absorb(results);
    Ok(report)
}

/// Which swap `λ` is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    /// Swap without signs.
    Plain,
    /// Koszul sign in the grading the symbols carry.
    Graded,
    /// Koszul sign in the grading shifted up by the given amount, e.g.
    /// geometric degrees `|x| + n` for shifted symbols.
    Offset(Degree),
}

impl Symmetry {
    fn apply(self, v: &GradedVector) -> GradedVector {
        match self {
            Symmetry::Plain => twist_with(v, false),
            Symmetry::Graded => twist_with(v, true),
            Symmetry::Offset(k) => twist_offset(v, k),
        }
    }

    fn label(self) -> String {
        match self {
            Symmetry::Plain => "cocommutativity[plain]".into(),
            Symmetry::Graded => "cocommutativity[graded]".into(),
            Symmetry::Offset(k) => format!("cocommutativity[graded+{k}]"),
        }
    }
}

/// Compare `τ∘λ` with `λ` for the chosen swap `τ`.
pub fn check_cocommutativity(
    lambda: &dyn GradedMap,
    window: &BasisWindow,
    symmetry: Symmetry,
) -> Result<IdentityReport, AlgebraError> {
    let results = compare_all(&window.inputs, |w| {
        let v = lambda.apply_word(w)?;
        Ok((symmetry.apply(&v), v))
    })?;
    let mut report = IdentityReport::new(symmetry.label(), &window.label);
    report.absorb(results);
    Ok(report)
}

/// Associativity on all triples, graded commutativity on all pairs and
/// both unit laws on all singles drawn from `symbols`.
pub fn check_assoc_comm_unit(
    mu: &dyn GradedMap,
    unit: &Symbol,
    symbols: &[Symbol],
    label: &str,
) -> Result<IdentityReport, AlgebraError> {
    let ring = mu.ring();
    let id = TensorOperator::identity(ring);
    let mu_left = TensorPair::new(mu, &id, SignRule::KoszulRight);
    let mu_right = TensorPair::new(&id, mu, SignRule::KoszulRight);

    let triples = BasisWindow::triples(label, symbols);
    let assoc = compare_all(&triples.inputs, |w| {
        Ok((
            mu.apply(&mu_left.apply_word(w)?)?,
            mu.apply(&mu_right.apply_word(w)?)?,
        ))
    })?;

    let pairs = BasisWindow::pairs(label, symbols);
    let comm = compare_all(&pairs.inputs, |w| {
        let swapped = twist_with(&GradedVector::basis(ring, w.clone()), true);
        Ok((mu.apply(&swapped)?, mu.apply_word(w)?))
    })?;

    let unit_checks = compare_all(&BasisWindow::singles(label, symbols).inputs, |w| {
        let x = &w.symbols()[0];
        let expected = GradedVector::basis(ring, w.clone());
        let left = mu.apply_word(&Word::pair(unit.clone(), x.clone()))?;
        let right = mu.apply_word(&Word::pair(x.clone(), unit.clone()))?;
        if left != expected {
            return Ok((left, expected));
        }
        Ok((right, expected))
    })?;

    let mut report = IdentityReport::new("assoc-comm-unit", label);
    let tag = |mut v: Vec<Option<Violation>>, what: &str| {
        for x in v.iter_mut().flatten() {
            x.input = format!("{what} {}", x.input);
        }
        v
    };
    report.absorb(tag(assoc, "assoc"));
    report.absorb(tag(comm, "comm"));
    report.absorb(tag(unit_checks, "unit"));
    Ok(report)
}

/// Loop product: binary, degree 0 in shifted grading, with a unit.
#[derive(Clone, Debug)]
pub struct AlgebraStructure {
    pub product: TensorOperator,
    pub unit: Symbol,
}

impl AlgebraStructure {
    pub fn new(product: TensorOperator, unit: Symbol) -> Result<Self, AlgebraError> {
        if product.arity_in() != 2 || product.arity_out() != 1 || product.degree() != 0 {
            return Err(AlgebraError::Model(format!(
                "product must be a degree-0 map of arity 2→1, got {}→{} of degree {}",
                product.arity_in(),
                product.arity_out(),
                product.degree()
            )));
        }
        Ok(AlgebraStructure { product, unit })
    }

    pub fn check(&self, symbols: &[Symbol], label: &str) -> Result<IdentityReport, AlgebraError> {
        check_assoc_comm_unit(&self.product, &self.unit, symbols, label)
    }
}

/// Loop coproduct of shifted degree `1 - 2n`.
#[derive(Clone, Debug)]
pub struct CoalgebraStructure {
    pub coproduct: TensorOperator,
    pub n: i64,
}

impl CoalgebraStructure {
    pub fn new(coproduct: TensorOperator, n: i64) -> Result<Self, AlgebraError> {
        if coproduct.arity_in() != 1 || coproduct.arity_out() != 2 {
            return Err(AlgebraError::Model("coproduct must have arity 1→2".into()));
        }
        if coproduct.degree() != 1 - 2 * n {
            return Err(AlgebraError::Model(format!(
                "coproduct has degree {} but dimension {n} requires {}",
                coproduct.degree(),
                1 - 2 * n
            )));
        }
        Ok(CoalgebraStructure { coproduct, n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: &str, d: Degree) -> Symbol {
        Symbol::new(n, d)
    }

    #[test]
    fn zero_coproduct_satisfies_everything() {
        let r = Ring::Rationals;
        let syms = [sym("1", 0), sym("x", 2)];
        let mut table = Vec::new();
        for a in &syms {
            for b in &syms {
                let out = if a.name() == "1" {
                    GradedVector::basis(r, b.clone())
                } else if b.name() == "1" {
                    GradedVector::basis(r, a.clone())
                } else {
                    GradedVector::zero(r)
                };
                table.push((Word::pair(a.clone(), b.clone()), out));
            }
        }
        let mu = TensorOperator::from_table("mu", 2, 1, 0, r, table).unwrap();
        let lambda = TensorOperator::zero("lambda", 1, 2, -5, r);
        let w = BasisWindow::pairs("toy", &syms);
        assert!(check_sullivan(&mu, &lambda, &w, SignRule::KoszulRight).unwrap().holds());
        let singles = BasisWindow::singles("toy", &syms);
        assert!(check_coassociativity(&lambda, CoassocSign::raw(SignRule::KoszulRight), &singles)
            .unwrap()
            .holds());
        assert!(check_cocommutativity(&lambda, &singles, Symmetry::Graded).unwrap().holds());
    }

    #[test]
    fn asymmetric_coproduct_is_caught() {
        let r = Ring::F2;
        let (x, y, z) = (sym("x", 0), sym("y", -1), sym("z", -2));
        let lambda = TensorOperator::from_table(
            "lambda",
            1,
            2,
            -3,
            r,
            [(Word::single(x.clone()), GradedVector::basis(r, Word::pair(y, z)))],
        )
        .unwrap();
        let rep = check_cocommutativity(&lambda, &BasisWindow::singles("x", &[x]), Symmetry::Plain).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.checked_pairs, 1);
    }

    #[test]
    fn noncommutative_product_is_caught() {
        let r = Ring::Integers;
        let (e, a, b) = (sym("e", 0), sym("a", 0), sym("b", 0));
        let syms = [e.clone(), a.clone(), b.clone()];
        let mut table = Vec::new();
        for x in &syms {
            for y in &syms {
                let out = match (x.name(), y.name()) {
                    ("e", _) => GradedVector::basis(r, y.clone()),
                    (_, "e") => GradedVector::basis(r, x.clone()),
                    ("a", "b") => GradedVector::basis(r, a.clone()),
                    _ => GradedVector::zero(r),
                };
                table.push((Word::pair(x.clone(), y.clone()), out));
            }
        }
        let mu = TensorOperator::from_table("mu", 2, 1, 0, r, table).unwrap();
        let rep = check_assoc_comm_unit(&mu, &e, &syms, "toy").unwrap();
        assert!(rep.violations.iter().any(|v| v.input.starts_with("comm")));
    }

    #[test]
    fn reports_are_deterministic() {
        let r = Ring::F2;
        let (x, y) = (sym("x", 0), sym("y", 0));
        let lambda = TensorOperator::from_table(
            "lambda",
            1,
            2,
            0,
            r,
            [
                (Word::single(x.clone()), GradedVector::basis(r, Word::pair(x.clone(), y.clone()))),
                (Word::single(y.clone()), GradedVector::basis(r, Word::pair(y.clone(), x.clone()))),
            ],
        )
        .unwrap();
        let w = BasisWindow::singles("xy", &[x, y]);
        let a = check_cocommutativity(&lambda, &w, Symmetry::Plain).unwrap();
        let b = check_cocommutativity(&lambda, &w, Symmetry::Plain).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.violations.len(), 2);
    }

    #[test]
    fn epsilon_is_trivial_for_odd_dimension() {
        for n in [3, 5, 7] {
            for d in -9..9 {
                assert_eq!(epsilon_sign(n, d), 1);
            }
        }
        assert_eq!(epsilon_sign(2, 1), -1);
    }
}
