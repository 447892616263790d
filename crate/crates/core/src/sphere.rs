//! The loop homology of an odd sphere as the exterior algebra `Λ(A, U)`
//! with its loop coproduct.
//!
//! Shifted degrees are `|A| = -n`, `|U| = n - 1`; the product has degree
//! 0 and the coproduct degree `1 - 2n` (`-5` for `S³`). The coproduct is
//! available in closed form and as the recursion obtained from Sullivan's
//! relation and the seed values `λ(1) = λ(A) = 0`, `λ(U) = A⊗1 + 1⊗A`.
//!
//! Only `n = 3` is supported by default; other odd `n` go through
//! [`SphereLoopHomology::experimental`].

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::graded::{Degree, GradedVector, Symbol, Word};
use crate::operator::{AlgebraError, GradedMap, SignRule, TensorOperator};
use crate::scalar::Ring;
use crate::string_ops::{self, epsilon_sign, BasisWindow, EpsilonCorrected};

pub const DEFAULT_TRUNCATION: u32 = 64;

/// Basis monomial `U^k` or `A·U^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub has_a: bool,
    pub power: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial::u(0);
    pub const A: Monomial = Monomial::au(0);

    pub const fn u(power: u32) -> Self {
        Monomial {
            has_a: false,
            power,
        }
    }

    pub const fn au(power: u32) -> Self {
        Monomial { has_a: true, power }
    }

    pub fn name(&self) -> String {
        match (self.has_a, self.power) {
            (false, 0) => "1".into(),
            (true, 0) => "A".into(),
            (false, 1) => "U".into(),
            (true, 1) => "AU".into(),
            (false, k) => format!("U^{k}"),
            (true, k) => format!("AU^{k}"),
        }
    }

    pub fn parse(name: &str) -> Option<Monomial> {
        let (has_a, rest) = match name.strip_prefix('A') {
            Some(r) => (true, r),
            None => (false, name),
        };
        let power = match rest {
            "" if has_a => 0,
            "1" if !has_a => 0,
            "U" => 1,
            r => r.strip_prefix("U^")?.parse().ok()?,
        };
        Some(Monomial { has_a, power })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sign convention for the Sullivan recursion: the tensor sign rule plus
/// an optional coassociativity correction of the output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignConvention {
    pub rule: SignRule,
    pub epsilon: bool,
}

impl SignConvention {
    pub fn all() -> Vec<SignConvention> {
        SignRule::ALL
            .into_iter()
            .flat_map(|rule| [false, true].map(|epsilon| SignConvention { rule, epsilon }))
            .collect()
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        if self.epsilon {
            f.write_str("+ε")?;
        }
        Ok(())
    }
}

/// The convention under which the recursion reproduces the closed form
/// over ℚ *and* Sullivan's relation holds on every pair. Pinned by the
/// sweep test in this module.
pub const PINNED_CONVENTION: SignConvention = SignConvention {
    rule: SignRule::Unsigned,
    epsilon: false,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereLoopHomology {
    n: i64,
    truncation: u32,
    ring: Ring,
}

impl SphereLoopHomology {
    /// `H_{*+3}(ΛS³)` truncated at `U^truncation`.
    pub fn new(truncation: u32, ring: Ring) -> Self {
        SphereLoopHomology {
            n: 3,
            truncation,
            ring,
        }
    }

    /// Odd spheres of dimension `n > 3`, using the `S³` seed values.
    pub fn experimental(n: i64, truncation: u32, ring: Ring) -> Result<Self, AlgebraError> {
        if n < 3 || n % 2 == 0 {
            return Err(AlgebraError::Model(format!(
                "sphere dimension must be odd and at least 3, got {n}"
            )));
        }
        Ok(SphereLoopHomology {
            n,
            truncation,
            ring,
        })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Euler characteristic of the sphere; zero for odd `n`.
    pub fn euler_characteristic(&self) -> i64 {
        0
    }

    pub fn coproduct_degree(&self) -> Degree {
        1 - 2 * self.n
    }

    pub fn degree(&self, m: Monomial) -> Degree {
        let k = m.power as i64 * (self.n - 1);
        if m.has_a {
            k - self.n
        } else {
            k
        }
    }

    pub fn symbol(&self, m: Monomial) -> Symbol {
        Symbol::new(m.name(), self.degree(m))
    }

    pub fn monomial(&self, s: &Symbol) -> Result<Monomial, AlgebraError> {
        let m = Monomial::parse(s.name())
            .ok_or_else(|| AlgebraError::UnknownSymbol(s.name().to_string()))?;
        if self.degree(m) != s.degree() {
            return Err(AlgebraError::UnknownSymbol(format!("{} in degree {}", s.name(), s.degree())));
        }
        self.check_power(m.power)?;
        Ok(m)
    }

    fn check_power(&self, power: u32) -> Result<(), AlgebraError> {
        if power > self.truncation {
            return Err(AlgebraError::Truncation {
                exponent: power,
                truncation: self.truncation,
            });
        }
        Ok(())
    }

    /// `1, A, U, AU, …, U^k, AU^k` up to `max_power`.
    pub fn basis(&self, max_power: u32) -> Vec<Monomial> {
        (0..=max_power.min(self.truncation))
            .flat_map(|k| [Monomial::u(k), Monomial::au(k)])
            .collect()
    }

    pub fn basis_symbols(&self, max_power: u32) -> Vec<Symbol> {
        self.basis(max_power).into_iter().map(|m| self.symbol(m)).collect()
    }

    /// Pairs `(a, b)` whose exponents add up to at most `max_total`.
    pub fn pair_window(&self, max_total: u32) -> BasisWindow {
        let basis = self.basis(max_total);
        let mut inputs = Vec::new();
        for a in &basis {
            for b in &basis {
                if a.power + b.power <= max_total {
                    inputs.push(Word::pair(self.symbol(*a), self.symbol(*b)));
                }
            }
        }
        BasisWindow::new(format!("S{} total exponent ≤ {max_total}", self.n), inputs)
    }

    pub fn single_window(&self, max_power: u32) -> BasisWindow {
        BasisWindow::singles(
            format!("S{} exponent ≤ {max_power}", self.n),
            &self.basis_symbols(max_power),
        )
    }

    fn pair(&self, l: Monomial, r: Monomial) -> Word {
        Word::pair(self.symbol(l), self.symbol(r))
    }

    /// Loop product of two basis monomials.
    pub fn product(&self, x: Monomial, y: Monomial) -> Result<GradedVector, AlgebraError> {
        let power = x.power + y.power;
        self.check_power(x.power.max(y.power))?;
        if x.has_a && y.has_a {
            return Ok(GradedVector::zero(self.ring));
        }
        self.check_power(power)?;
        Ok(GradedVector::basis(
            self.ring,
            self.symbol(Monomial {
                has_a: x.has_a || y.has_a,
                power,
            }),
        ))
    }

    /// `λ(U^k) = Σ_{i+j=k-1} AU^i⊗U^j + U^i⊗AU^j`,
    /// `λ(AU^k) = Σ_{i+j=k-1} AU^i⊗AU^j`.
    pub fn coproduct_closed(&self, m: Monomial) -> Result<GradedVector, AlgebraError> {
        self.check_power(m.power)?;
        let one = self.ring.one();
        let mut out = GradedVector::zero(self.ring);
        if m.power == 0 {
            return Ok(out);
        }
        for i in 0..m.power {
            let j = m.power - 1 - i;
            if m.has_a {
                out.add_term(self.pair(Monomial::au(i), Monomial::au(j)), one.clone());
            } else {
                out.add_term(self.pair(Monomial::au(i), Monomial::u(j)), one.clone());
                out.add_term(self.pair(Monomial::u(i), Monomial::au(j)), one.clone());
            }
        }
        Ok(out)
    }

    pub fn product_map(&self) -> SphereProduct<'_> {
        SphereProduct { model: self }
    }

    pub fn coproduct_map(&self) -> SphereCoproduct<'_> {
        SphereCoproduct { model: self }
    }

    pub fn recursion(&self, convention: SignConvention) -> CoproductRecursion<'_> {
        CoproductRecursion {
            model: self,
            convention,
            memo: HashMap::new(),
        }
    }

    fn seed(&self, m: Monomial) -> Option<GradedVector> {
        match (m.has_a, m.power) {
            (_, 0) => Some(GradedVector::zero(self.ring)),
            (false, 1) => {
                let mut v = GradedVector::zero(self.ring);
                v.add_term(self.pair(Monomial::A, Monomial::ONE), self.ring.one());
                v.add_term(self.pair(Monomial::ONE, Monomial::A), self.ring.one());
                Some(v)
            }
            _ => None,
        }
    }

    /// Multiply each `x⊗y` term by `(-1)^{(n-1)|y|}`.
    pub fn epsilon_correct(&self, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero(v.ring());
        for (w, c) in v.iter() {
            out.add_term(w.clone(), c.scale_i64(epsilon_sign(self.n, w.symbols()[1].degree())));
        }
        out
    }
}

/// The loop product as a [`GradedMap`] on pairs of basis symbols.
pub struct SphereProduct<'a> {
    model: &'a SphereLoopHomology,
}

impl GradedMap for SphereProduct<'_> {
    fn name(&self) -> &str {
        "μ"
    }

    fn degree(&self) -> Degree {
        0
    }

    fn arity_in(&self) -> usize {
        2
    }

    fn arity_out(&self) -> usize {
        1
    }

    fn ring(&self) -> Ring {
        self.model.ring
    }

    fn apply_word(&self, word: &Word) -> Result<GradedVector, AlgebraError> {
        let [x, y] = word.symbols() else {
            return Err(AlgebraError::Arity {
                op: "μ".into(),
                expected: 2,
                input: word.to_string(),
            });
        };
        self.model
            .product(self.model.monomial(x)?, self.model.monomial(y)?)
    }
}

/// The closed-form coproduct as a [`GradedMap`].
pub struct SphereCoproduct<'a> {
    model: &'a SphereLoopHomology,
}

impl GradedMap for SphereCoproduct<'_> {
    fn name(&self) -> &str {
        "λ"
    }

    fn degree(&self) -> Degree {
        self.model.coproduct_degree()
    }

    fn arity_in(&self) -> usize {
        1
    }

    fn arity_out(&self) -> usize {
        2
    }

    fn ring(&self) -> Ring {
        self.model.ring
    }

    fn apply_word(&self, word: &Word) -> Result<GradedVector, AlgebraError> {
        let [x] = word.symbols() else {
            return Err(AlgebraError::Arity {
                op: "λ".into(),
                expected: 1,
                input: word.to_string(),
            });
        };
        self.model.coproduct_closed(self.model.monomial(x)?)
    }
}

/// Memoized evaluation of `λ` from the seeds via
/// `λ(a•b) = (1⊗μ)(λ(a)⊗b) + (μ⊗1)(a⊗λ(b))`, splitting
/// `U^k = U·U^{k-1}` and `AU^k = A·U^k`.
pub struct CoproductRecursion<'a> {
    model: &'a SphereLoopHomology,
    convention: SignConvention,
    memo: HashMap<Monomial, GradedVector>,
}

impl CoproductRecursion<'_> {
    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    /// Value of `λ` on `m` under this recursion's convention.
    pub fn coproduct(&mut self, m: Monomial) -> Result<GradedVector, AlgebraError> {
        let raw = self.raw(m)?;
        Ok(if self.convention.epsilon {
            self.model.epsilon_correct(&raw)
        } else {
            raw
        })
    }

    fn raw(&mut self, m: Monomial) -> Result<GradedVector, AlgebraError> {
        self.model.check_power(m.power)?;
        if let Some(v) = self.model.seed(m) {
            return Ok(v);
        }
        if let Some(v) = self.memo.get(&m) {
            return Ok(v.clone());
        }
        if m.has_a {
            let lambda_u = self.raw(Monomial::u(m.power))?;
            let v = self.step(Monomial::A, Monomial::u(m.power), lambda_u)?;
            self.memo.insert(m, v.clone());
            return Ok(v);
        }
        // Climb U^2, U^3, … so large powers never recurse deeply.
        let mut prev = self.model.seed(Monomial::u(1)).expect("λ(U) is a seed");
        for k in 2..=m.power {
            let target = Monomial::u(k);
            prev = match self.memo.get(&target) {
                Some(v) => v.clone(),
                None => {
                    let v = self.step(Monomial::u(1), Monomial::u(k - 1), prev)?;
                    self.memo.insert(target, v.clone());
                    v
                }
            };
        }
        Ok(prev)
    }

    fn step(
        &self,
        a: Monomial,
        b: Monomial,
        lambda_b: GradedVector,
    ) -> Result<GradedVector, AlgebraError> {
        let model = self.model;
        let lambda_a = model.seed(a).expect("left factor is a seed");
        let mut entries = vec![(Word::single(model.symbol(b)), lambda_b)];
        if a != b {
            entries.push((Word::single(model.symbol(a)), lambda_a));
        }
        let known = TensorOperator::from_table(
            "λ",
            1,
            2,
            model.coproduct_degree(),
            model.ring,
            entries,
        )?;
        string_ops::sullivan_rhs(
            &model.product_map(),
            &known,
            &Word::pair(model.symbol(a), model.symbol(b)),
            self.convention.rule,
        )
    }
}

/// Result of running one candidate convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConventionOutcome {
    pub convention: SignConvention,
    pub recursion_matches: bool,
    pub sullivan_holds: bool,
    pub first_mismatch: Option<String>,
}

/// Run every candidate convention: recursion against the closed form on
/// all monomials up to `max_power`, and Sullivan's relation on all pairs
/// of total exponent at most `max_power`.
pub fn sweep_conventions(
    model: &SphereLoopHomology,
    max_power: u32,
) -> Result<Vec<ConventionOutcome>, AlgebraError> {
    let closed = model.coproduct_map();
    let window = model.pair_window(max_power);
    SignConvention::all()
        .into_iter()
        .map(|convention| {
            let mut rec = model.recursion(convention);
            let mut first_mismatch = None;
            for m in model.basis(max_power) {
                let got = rec.coproduct(m)?;
                let mut want = model.coproduct_closed(m)?;
                if convention.epsilon {
                    want = model.epsilon_correct(&want);
                }
                if got != want {
                    first_mismatch = Some(format!("λ({m}): recursion {got} ≠ closed {want}"));
                    break;
                }
            }
            let corrected = EpsilonCorrected::new(&closed, model.n());
            let lambda: &dyn GradedMap = if convention.epsilon { &corrected } else { &closed };
            let sullivan =
                string_ops::check_sullivan(&model.product_map(), lambda, &window, convention.rule)?;
            Ok(ConventionOutcome {
                convention,
                recursion_matches: first_mismatch.is_none(),
                sullivan_holds: sullivan.holds(),
                first_mismatch,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoproductTerm {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoproductRow {
    pub input: String,
    pub terms: Vec<CoproductTerm>,
}

impl CoproductRow {
    pub fn new(input: Monomial, value: &GradedVector) -> Self {
        let terms = value
            .iter()
            .map(|(w, c)| CoproductTerm {
                left: w.symbols()[0].to_string(),
                right: w.symbols()[1].to_string(),
                coeff: c.to_string(),
            })
            .collect();
        CoproductRow {
            input: input.name(),
            terms,
        }
    }
}

/// Aligned text table, one `λ(x) = …` line per row.
pub fn coproduct_table(rows: &[(Monomial, GradedVector)]) -> String {
    let width = rows
        .iter()
        .map(|(m, _)| m.name().chars().count())
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    for (m, v) in rows {
        let label = format!("λ({})", m.name());
        let _ = writeln!(s, "{label:<w$} = {v}", w = width + 3);
    }
    s
}
