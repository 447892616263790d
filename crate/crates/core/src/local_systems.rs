//! ℤ/2 local systems with an integer degree on a free loop space,
//! modelled by their monodromy functionals.
//!
//! On the loop component `c`, a system has monodromy
//! `a(c)·[ev₀ γ] + b(c)·[γ × S¹]` around a loop of loops `γ`, where
//! `[ev₀ γ] ∈ H₁(M; ℤ/2)` is the class traced by the base point and
//! `[γ × S¹]` pairs against `H²(M; ℤ/2)`. Tensor products add the
//! functionals and the degrees. Both forms of the compatibility
//! condition for products collapse here to one predicate, see
//! [`is_compatible`].
//!
//! Not every system on a loop space is of this form; which systems are
//! compatible with products in general is open.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vector over ℤ/2, entries 0 or 1.
pub type Z2Vector = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LocalSystemError {
    #[error("{what} has length {got}, expected {expected}")]
    Length {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("entry {0} is not 0 or 1")]
    NotBinary(u8),
    #[error("component model: {0}")]
    Model(String),
    #[error("systems live over different manifolds or component models")]
    Mismatch,
    #[error("component {0} out of range")]
    Component(usize),
}

fn check_vec(what: &str, v: &[u8], expected: usize) -> Result<(), LocalSystemError> {
    if v.len() != expected {
        return Err(LocalSystemError::Length {
            what: what.into(),
            expected,
            got: v.len(),
        });
    }
    match v.iter().find(|&&x| x > 1) {
        Some(&x) => Err(LocalSystemError::NotBinary(x)),
        None => Ok(()),
    }
}

fn add(x: &[u8], y: &[u8]) -> Z2Vector {
    x.iter().zip(y).map(|(a, b)| a ^ b).collect()
}

fn dot(x: &[u8], y: &[u8]) -> u8 {
    x.iter().zip(y).fold(0, |acc, (a, b)| acc ^ (a & b))
}

fn scale(bit: u8, v: &[u8]) -> Z2Vector {
    v.iter().map(|x| x & bit).collect()
}

/// Dimension and ℤ/2 characteristic data of the base manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDescriptor {
    pub n: i64,
    pub g1: usize,
    pub g2: usize,
    pub w1: Z2Vector,
    pub w2: Z2Vector,
}

impl ManifoldDescriptor {
    pub fn new(n: i64, w1: Z2Vector, w2: Z2Vector) -> Result<Self, LocalSystemError> {
        let d = ManifoldDescriptor {
            n,
            g1: w1.len(),
            g2: w2.len(),
            w1,
            w2,
        };
        d.validate()?;
        Ok(d)
    }

    /// Orientable spin manifold with the given ℤ/2 Betti numbers.
    pub fn spin(n: i64, g1: usize, g2: usize) -> Self {
        ManifoldDescriptor {
            n,
            g1,
            g2,
            w1: vec![0; g1],
            w2: vec![0; g2],
        }
    }

    pub fn validate(&self) -> Result<(), LocalSystemError> {
        check_vec("w1", &self.w1, self.g1)?;
        check_vec("w2", &self.w2, self.g2)
    }
}

/// Finite commutative monoid of loop components under concatenation,
/// with an additive orientation bit `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentModel {
    /// `table[i][j]` is the component of a concatenation.
    pub table: Vec<Vec<usize>>,
    pub w: Z2Vector,
}

impl Default for ComponentModel {
    /// Components distinguished only by whether the loop preserves
    /// orientation: `(ℤ/2, +)` with `w = id`.
    fn default() -> Self {
        ComponentModel {
            table: vec![vec![0, 1], vec![1, 0]],
            w: vec![0, 1],
        }
    }
}

impl ComponentModel {
    pub fn new(table: Vec<Vec<usize>>, w: Z2Vector) -> Result<Self, LocalSystemError> {
        let m = ComponentModel { table, w };
        m.validate()?;
        Ok(m)
    }

    /// Single component, as for a simply connected manifold.
    pub fn trivial() -> Self {
        ComponentModel {
            table: vec![vec![0]],
            w: vec![0],
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    /// The component of constant loops.
    pub fn identity(&self) -> usize {
        self.find_identity().expect("validated model has an identity")
    }

    fn find_identity(&self) -> Option<usize> {
        let k = self.len();
        (0..k).find(|&e| (0..k).all(|x| self.table[e][x] == x && self.table[x][e] == x))
    }

    pub fn validate(&self) -> Result<(), LocalSystemError> {
        let k = self.len();
        let bad = |m: &str| Err(LocalSystemError::Model(m.into()));
        if k == 0 {
            return bad("no components");
        }
        if self.table.iter().any(|r| r.len() != k || r.iter().any(|&v| v >= k)) {
            return bad("operation table is not a closed square table");
        }
        check_vec("w", &self.w, k)?;
        for x in 0..k {
            for y in 0..k {
                if self.table[x][y] != self.table[y][x] {
                    return bad("operation is not commutative");
                }
                if self.w[self.table[x][y]] != self.w[x] ^ self.w[y] {
                    return bad("orientation bit is not additive");
                }
                for z in 0..k {
                    if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]] {
                        return bad("operation is not associative");
                    }
                }
            }
        }
        if self.find_identity().is_none() {
            return bad("no identity component");
        }
        Ok(())
    }
}

/// A loop of loops in component `component`, described by the class of
/// its base-point trace and its torus class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyInput {
    pub component: usize,
    pub base_loop: Z2Vector,
    pub torus_class: Z2Vector,
}

/// Degree plus, for every component, the coefficient vectors `a(c)`
/// (against base loops) and `b(c)` (against torus classes).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSystemSpec {
    descriptor: ManifoldDescriptor,
    degree: i64,
    a: Vec<Z2Vector>,
    b: Vec<Z2Vector>,
}

impl LocalSystemSpec {
    pub fn new(
        descriptor: ManifoldDescriptor,
        degree: i64,
        a: Vec<Z2Vector>,
        b: Vec<Z2Vector>,
    ) -> Result<Self, LocalSystemError> {
        descriptor.validate()?;
        if a.len() != b.len() || a.is_empty() {
            return Err(LocalSystemError::Model(
                "coefficient tables must cover the same nonempty set of components".into(),
            ));
        }
        for v in &a {
            check_vec("a", v, descriptor.g1)?;
        }
        for v in &b {
            check_vec("b", v, descriptor.g2)?;
        }
        Ok(LocalSystemSpec {
            descriptor,
            degree,
            a,
            b,
        })
    }

    pub fn trivial(m: &ManifoldDescriptor, cm: &ComponentModel) -> Self {
        Self::uniform(m, cm, 0, |_| vec![0; m.g1], vec![0; m.g2])
    }

    fn uniform(
        m: &ManifoldDescriptor,
        cm: &ComponentModel,
        degree: i64,
        a: impl Fn(usize) -> Z2Vector,
        b: Z2Vector,
    ) -> Self {
        LocalSystemSpec {
            descriptor: m.clone(),
            degree,
            a: (0..cm.len()).map(a).collect(),
            b: vec![b; cm.len()],
        }
    }

    pub fn descriptor(&self) -> &ManifoldDescriptor {
        &self.descriptor
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn components(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, component: usize) -> &[u8] {
        &self.a[component]
    }

    pub fn b(&self, component: usize) -> &[u8] {
        &self.b[component]
    }

    /// True when every monodromy coefficient vanishes.
    pub fn has_trivial_monodromy(&self) -> bool {
        self.a.iter().chain(&self.b).all(|v| v.iter().all(|&x| x == 0))
    }
}

impl fmt::Display for LocalSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[u8]| v.iter().map(|x| x.to_string()).collect::<String>();
        write!(f, "degree {}", self.degree)?;
        for c in 0..self.components() {
            write!(f, "; c{c}: a={} b={}", bits(&self.a[c]), bits(&self.b[c]))?;
        }
        Ok(())
    }
}

/// Degrees add, coefficient vectors add mod 2.
pub fn tensor(x: &LocalSystemSpec, y: &LocalSystemSpec) -> Result<LocalSystemSpec, LocalSystemError> {
    if x.descriptor != y.descriptor || x.components() != y.components() {
        return Err(LocalSystemError::Mismatch);
    }
    Ok(LocalSystemSpec {
        descriptor: x.descriptor.clone(),
        degree: x.degree + y.degree,
        a: x.a.iter().zip(&y.a).map(|(p, q)| add(p, q)).collect(),
        b: x.b.iter().zip(&y.b).map(|(p, q)| add(p, q)).collect(),
    })
}

/// Same monodromy, opposite degree.
pub fn dual(x: &LocalSystemSpec) -> LocalSystemSpec {
    LocalSystemSpec {
        degree: -x.degree,
        ..x.clone()
    }
}

/// Same monodromy, degree 0.
pub fn underline(x: &LocalSystemSpec) -> LocalSystemSpec {
    LocalSystemSpec { degree: 0, ..x.clone() }
}

/// Transgression `τ_c` of a class `c ∈ H²(M; ℤ/2)`.
pub fn transgression(
    m: &ManifoldDescriptor,
    cm: &ComponentModel,
    class: Z2Vector,
) -> Result<LocalSystemSpec, LocalSystemError> {
    check_vec("class", &class, m.g2)?;
    Ok(LocalSystemSpec::uniform(m, cm, 0, |_| vec![0; m.g1], class))
}

/// `σ = τ_{w₂}`.
pub fn make_sigma(m: &ManifoldDescriptor, cm: &ComponentModel) -> LocalSystemSpec {
    LocalSystemSpec::uniform(m, cm, 0, |_| vec![0; m.g1], m.w2.clone())
}

/// Pullback of the inverse orientation system: degree `-n`, `a = w₁`.
pub fn make_mu(m: &ManifoldDescriptor, cm: &ComponentModel) -> LocalSystemSpec {
    LocalSystemSpec::uniform(m, cm, -m.n, |_| m.w1.clone(), vec![0; m.g2])
}

/// Pullback of the orientation system: degree `n`, `a = w₁`.
pub fn make_o(m: &ManifoldDescriptor, cm: &ComponentModel) -> LocalSystemSpec {
    LocalSystemSpec::uniform(m, cm, m.n, |_| m.w1.clone(), vec![0; m.g2])
}

/// Shift system: degree 0, `a(c) = w(c)·w₁`.
pub fn make_otilde(m: &ManifoldDescriptor, cm: &ComponentModel) -> LocalSystemSpec {
    LocalSystemSpec::uniform(m, cm, 0, |c| scale(cm.w[c], &m.w1), vec![0; m.g2])
}

/// `η = σ ⊗ μ ⊗ õ`.
pub fn make_eta(m: &ManifoldDescriptor, cm: &ComponentModel) -> LocalSystemSpec {
    let mu_ot = tensor(&make_mu(m, cm), &make_otilde(m, cm)).expect("same model");
    tensor(&make_sigma(m, cm), &mu_ot).expect("same model")
}

/// `a(c)·base_loop + b(c)·torus_class` mod 2.
pub fn monodromy(x: &LocalSystemSpec, input: &MonodromyInput) -> Result<u8, LocalSystemError> {
    if input.component >= x.components() {
        return Err(LocalSystemError::Component(input.component));
    }
    check_vec("base_loop", &input.base_loop, x.descriptor.g1)?;
    check_vec("torus_class", &input.torus_class, x.descriptor.g2)?;
    Ok(dot(&x.a[input.component], &input.base_loop) ^ dot(&x.b[input.component], &input.torus_class))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Compatibility {
    pub compatible: bool,
    /// First failing condition.
    pub reason: Option<String>,
}

/// Compatibility with products: degree 0, `b` constant over
/// components, `a` additive under concatenation, and trivial on
/// constant loops.
pub fn is_compatible(x: &LocalSystemSpec, cm: &ComponentModel) -> Compatibility {
    let fail = |r: String| Compatibility {
        compatible: false,
        reason: Some(r),
    };
    if cm.validate().is_err() || cm.len() != x.components() {
        return fail("component model does not match the system".into());
    }
    if x.degree != 0 {
        return fail(format!("degree ≠ 0 (degree {})", x.degree));
    }
    if let Some(c) = (1..x.components()).find(|&c| x.b[c] != x.b[0]) {
        return fail(format!("torus coefficient differs between components 0 and {c}"));
    }
    for c1 in 0..cm.len() {
        for c2 in 0..cm.len() {
            if x.a[cm.op(c1, c2)] != add(&x.a[c1], &x.a[c2]) {
                return fail(format!("base-loop coefficient not additive on components {c1}, {c2}"));
            }
        }
    }
    let e = cm.identity();
    if x.a[e].iter().any(|&v| v != 0) {
        return fail("restriction to constant loops is nontrivial".into());
    }
    Compatibility {
        compatible: true,
        reason: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCoefficients {
    pub component: usize,
    pub a: Z2Vector,
    pub b: Z2Vector,
}

/// Canonical form: degree plus the monodromy functional on each
/// component. Two specs over the same descriptor are equal iff their
/// classifications are.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub degree: i64,
    pub coefficients: Vec<ComponentCoefficients>,
}

pub fn classify(x: &LocalSystemSpec) -> Classification {
    Classification {
        degree: x.degree,
        coefficients: (0..x.components())
            .map(|c| ComponentCoefficients {
                component: c,
                a: x.a[c].clone(),
                b: x.b[c].clone(),
            })
            .collect(),
    }
}

/// JSON form of a spec. `components` defaults to the orientation model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSystemDoc {
    pub descriptor: ManifoldDescriptor,
    #[serde(default)]
    pub components: Option<ComponentModel>,
    pub degree: i64,
    pub coefficients: Vec<ComponentCoefficients>,
}

impl LocalSystemDoc {
    pub fn component_model(&self) -> ComponentModel {
        self.components.clone().unwrap_or_default()
    }

    pub fn to_spec(&self) -> Result<(LocalSystemSpec, ComponentModel), LocalSystemError> {
        let cm = self.component_model();
        cm.validate()?;
        let mut a = vec![None; cm.len()];
        let mut b = vec![None; cm.len()];
        for c in &self.coefficients {
            if c.component >= cm.len() || a[c.component].is_some() {
                return Err(LocalSystemError::Component(c.component));
            }
            a[c.component] = Some(c.a.clone());
            b[c.component] = Some(c.b.clone());
        }
        let missing = a.iter().position(Option::is_none);
        if let Some(c) = missing {
            return Err(LocalSystemError::Model(format!("no coefficients for component {c}")));
        }
        let spec = LocalSystemSpec::new(
            self.descriptor.clone(),
            self.degree,
            a.into_iter().flatten().collect(),
            b.into_iter().flatten().collect(),
        )?;
        Ok((spec, cm))
    }

    pub fn from_spec(x: &LocalSystemSpec, cm: &ComponentModel) -> Self {
        LocalSystemDoc {
            descriptor: x.descriptor.clone(),
            components: Some(cm.clone()),
            degree: x.degree,
            coefficients: classify(x).coefficients,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nonorientable() -> ManifoldDescriptor {
        ManifoldDescriptor::new(3, vec![1, 0], vec![1]).unwrap()
    }

    #[test]
    fn default_model_is_valid() {
        let cm = ComponentModel::default();
        cm.validate().unwrap();
        assert_eq!(cm.identity(), 0);
        ComponentModel::trivial().validate().unwrap();
    }

    #[test]
    fn bad_models_are_rejected() {
        assert!(ComponentModel::new(vec![vec![0, 1], vec![1, 1]], vec![0, 1]).is_err());
        assert!(ComponentModel::new(vec![vec![0, 1], vec![1, 0]], vec![1, 1]).is_err());
        assert!(ComponentModel::new(vec![vec![0, 1], vec![0, 0]], vec![0, 0]).is_err());
        assert!(ManifoldDescriptor::new(3, vec![2], vec![]).is_err());
    }

    #[test]
    fn eta_degree_and_monodromy() {
        let cm = ComponentModel::default();
        let m = nonorientable();
        let eta = make_eta(&m, &cm);
        assert_eq!(eta.degree(), -3);
        assert_eq!(eta.a(1), &[0, 0]);
        assert_eq!(eta.a(0), &[1, 0]);
        assert_eq!(eta.b(0), &[1]);
        let spin = make_eta(&ManifoldDescriptor::spin(3, 2, 1), &cm);
        assert!(spin.has_trivial_monodromy());
    }

    #[test]
    fn monodromy_examples() {
        let cm = ComponentModel::default();
        let m = nonorientable();
        let input = MonodromyInput {
            component: 0,
            base_loop: vec![1, 1],
            torus_class: vec![1],
        };
        assert_eq!(monodromy(&make_sigma(&m, &cm), &input).unwrap(), 1);
        assert_eq!(monodromy(&make_mu(&m, &cm), &input).unwrap(), 1);
        assert_eq!(monodromy(&LocalSystemSpec::trivial(&m, &cm), &input).unwrap(), 0);
        let short = MonodromyInput {
            base_loop: vec![1],
            ..input
        };
        assert!(monodromy(&make_mu(&m, &cm), &short).is_err());
    }

    #[test]
    fn compatibility_verdicts() {
        let cm = ComponentModel::default();
        let m = nonorientable();
        assert!(is_compatible(&make_sigma(&m, &cm), &cm).compatible);
        assert!(is_compatible(&make_otilde(&m, &cm), &cm).compatible);
        let mu = is_compatible(&make_mu(&m, &cm), &cm);
        assert!(!mu.compatible);
        assert!(mu.reason.unwrap().starts_with("degree ≠ 0"));
        let pulled_back = underline(&make_o(&m, &cm));
        let r = is_compatible(&pulled_back, &cm);
        assert!(!r.compatible);
        assert!(r.reason.unwrap().contains("additive"));
    }

    #[test]
    fn dual_and_underline() {
        let cm = ComponentModel::default();
        let m = nonorientable();
        let o = make_o(&m, &cm);
        assert_eq!(dual(&o).degree(), -3);
        assert_eq!(dual(&dual(&o)), o);
        assert_eq!(underline(&underline(&o)), underline(&o));
        let x = tensor(&o, &dual(&o)).unwrap();
        assert_eq!(x.degree(), 0);
        assert!(x.has_trivial_monodromy());
    }

    #[test]
    fn mismatched_tensor() {
        let cm = ComponentModel::default();
        let a = make_sigma(&nonorientable(), &cm);
        let b = make_sigma(&ManifoldDescriptor::spin(3, 2, 1), &cm);
        assert_eq!(tensor(&a, &b), Err(LocalSystemError::Mismatch));
    }

    #[test]
    fn document_round_trip() {
        let cm = ComponentModel::default();
        let eta = make_eta(&nonorientable(), &cm);
        let doc = LocalSystemDoc::from_spec(&eta, &cm);
        let text = serde_json::to_string(&doc).unwrap();
        let back: LocalSystemDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_spec().unwrap().0, eta);
    }
}
