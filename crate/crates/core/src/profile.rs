//! Radial Hamiltonian profiles `h(r) = μ ∫₁^r β` built from a
//! polynomial smoothstep `β`, and the action inequalities they satisfy.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ProfileError {
    #[error("{0} must be positive and finite, got {1}")]
    NotPositive(&'static str, f64),
    #[error("δ = {delta} exceeds ε/μ = {bound}")]
    DeltaTooLarge { delta: f64, bound: f64 },
    #[error("smoothstep order must be between 2 and 8, got {0}")]
    Order(u32),
    #[error("r must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error("need at least 2 samples, got {0}")]
    Samples(usize),
}

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational64>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational64>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational64::from_integer(i as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![Rational64::zero()];
        out.extend(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| c / Rational64::from_integer(i as i64 + 1)),
        );
        Poly::new(out)
    }

    pub fn eval_exact(&self, t: Rational64) -> Rational64 {
        self.0.iter().rev().fold(Rational64::zero(), |acc, c| acc * t + c)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().expect("finite coefficient"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if *c < Rational64::zero() { "-" } else { "+" };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show = !(a == Rational64::from_integer(1) && i > 0);
            if show {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Smoothstep of order `k` on `[0, 1]`: the unique polynomial of degree
/// `2k + 1` with value 0 at 0, 1 at 1 and vanishing derivatives up to
/// order `k` at both ends. Order 2 is `6t⁵ - 15t⁴ + 10t³`.
pub fn smoothstep(order: u32) -> Result<Poly, ProfileError> {
    if !(2..=8).contains(&order) {
        return Err(ProfileError::Order(order));
    }
    let k = order as i64;
    let mut coeffs = vec![Rational64::zero(); (2 * k + 2) as usize];
    for j in 0..=k {
        let c = binomial(k + j, j) * binomial(2 * k + 1, k - j) * if j % 2 == 0 { 1 } else { -1 };
        coeffs[(k + 1 + j) as usize] = Rational64::from_integer(c);
    }
    Ok(Poly::new(coeffs))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileParams {
    pub mu: f64,
    pub eps: f64,
    pub delta: f64,
    pub r_max: f64,
    /// Smoothstep order; the bump has degree `2·order + 1`.
    pub order: u32,
}

impl ProfileParams {
    /// Quintic bump on `[0, 3]`.
    pub fn new(mu: f64, eps: f64, delta: f64) -> Self {
        ProfileParams {
            mu,
            eps,
            delta,
            r_max: 3.0,
            order: 2,
        }
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        for (name, v) in [("μ", self.mu), ("ε", self.eps), ("δ", self.delta), ("r_max", self.r_max)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ProfileError::NotPositive(name, v));
            }
        }
        let bound = self.eps / self.mu;
        if self.delta > bound * (1.0 + 1e-12) {
            return Err(ProfileError::DeltaTooLarge {
                delta: self.delta,
                bound,
            });
        }
        Ok(())
    }
}

/// `h`, `h'` and `h''` in closed form. With `t = (r - 1)/δ`:
/// zero for `r ≤ 1`, `μδ B(t)` on `[1, 1 + δ]` where `B' = β`, and
/// `μ(r - 1 - δ) + μδ B(1)` beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    params: ProfileParams,
    beta: Poly,
    beta_prime: Poly,
    beta_integral: Poly,
    /// `∫₀¹ β`.
    plateau: Rational64,
}

pub fn build_profile(params: ProfileParams) -> Result<Profile, ProfileError> {
    params.validate()?;
    let beta = smoothstep(params.order)?;
    let beta_integral = beta.antiderivative();
    let plateau = beta_integral.eval_exact(Rational64::from_integer(1));
    Ok(Profile {
        params,
        beta_prime: beta.derivative(),
        beta,
        beta_integral,
        plateau,
    })
}

impl Profile {
    pub fn params(&self) -> &ProfileParams {
        &self.params
    }

    pub fn beta(&self) -> &Poly {
        &self.beta
    }

    /// `∫₀¹ β` as an exact rational; `1/2` for every smoothstep.
    pub fn plateau(&self) -> Rational64 {
        self.plateau
    }

    /// `h(1 + δ) = μδ ∫₀¹ β`.
    pub fn h_at_end(&self) -> f64 {
        self.params.mu * self.params.delta * self.plateau.to_f64().unwrap()
    }

    fn t(&self, r: f64) -> f64 {
        (r - 1.0) / self.params.delta
    }

    fn end(&self) -> f64 {
        1.0 + self.params.delta
    }

    pub fn h(&self, r: f64) -> f64 {
        let ProfileParams { mu, delta, .. } = self.params;
        if r <= 1.0 {
            0.0
        } else if r < self.end() {
            mu * delta * self.beta_integral.eval(self.t(r))
        } else {
            mu * (r - self.end()) + self.h_at_end()
        }
    }

    pub fn dh(&self, r: f64) -> f64 {
        if r <= 1.0 {
            0.0
        } else if r < self.end() {
            self.params.mu * self.beta.eval(self.t(r))
        } else {
            self.params.mu
        }
    }

    pub fn d2h(&self, r: f64) -> f64 {
        if r <= 1.0 || r >= self.end() {
            0.0
        } else {
            self.params.mu / self.params.delta * self.beta_prime.eval(self.t(r))
        }
    }

    /// `r h'(r) - h(r) - h'(r)`: constant `μδ ∫₀¹ β` for `r ≥ 1 + δ`.
    pub fn gap(&self, r: f64) -> f64 {
        let (h, dh) = (self.h(r), self.dh(r));
        r * dh - h - dh
    }

    /// Printable pieces of `h` on `[0, 1]`, `[1, 1+δ]`, `[1+δ, ∞)`.
    pub fn describe(&self) -> String {
        let ProfileParams { mu, delta, .. } = self.params;
        format!(
            "h(r) = 0 for r ≤ 1\nh(r) = {mu}·{delta}·B(t), t = (r-1)/{delta}, B(t) = {} for 1 ≤ r ≤ {}\nh(r) = {mu}·(r - {}) + {} for r ≥ {}\n",
            self.beta_integral,
            self.end(),
            self.end(),
            self.h_at_end(),
            self.end()
        )
    }
}

/// `(A_H, ∫α) = (r h'(r) - h(r), h'(r))` for the orbit at radius `r`.
pub fn orbit_actions(p: &Profile, r: f64) -> Result<(f64, f64), ProfileError> {
    if !(r >= 0.0) {
        return Err(ProfileError::NegativeRadius(r));
    }
    let dh = p.dh(r);
    Ok((r * dh - p.h(r), dh))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileSample {
    pub r: f64,
    pub h: f64,
    pub dh: f64,
    pub action: f64,
    pub gap: f64,
}

/// `samples` evenly spaced radii covering `[0, r_max]`.
pub fn sample(p: &Profile, samples: usize) -> Result<Vec<ProfileSample>, ProfileError> {
    if samples < 2 {
        return Err(ProfileError::Samples(samples));
    }
    let step = p.params.r_max / (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| {
            let r = i as f64 * step;
            let (action, dh) = orbit_actions(p, r).expect("nonnegative radius");
            ProfileSample {
                r,
                h: p.h(r),
                dh,
                action,
                gap: p.gap(r),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub samples: usize,
    pub min_gap: f64,
    pub max_gap: f64,
    /// `μδ`.
    pub bound: f64,
    pub violations: Vec<String>,
}

impl BoundsReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

const TOL: f64 = 1e-12;

/// Check `0 ≤ r h' - h - h' ≤ μδ`, `A_H - ε ≤ ∫α ≤ A_H`, monotonicity
/// of the gap and convexity of `h` on a grid over `[0, r_max]`, and
/// `h'' > 0` on a separate grid strictly inside `(1, 1 + δ)`.
pub fn verify_bounds(p: &Profile, samples: usize) -> Result<BoundsReport, ProfileError> {
    let rows = sample(p, samples)?;
    let ProfileParams { mu, eps, delta, .. } = p.params;
    let bound = mu * delta;
    let mut violations = Vec::new();
    let mut min_gap = f64::INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    let mut prev: Option<f64> = None;
    for s in &rows {
        min_gap = min_gap.min(s.gap);
        max_gap = max_gap.max(s.gap);
        if s.gap < -TOL || s.gap > bound + TOL {
            violations.push(format!("gap {} outside [0, {bound}] at r = {}", s.gap, s.r));
        }
        if s.action - eps > s.dh + TOL || s.dh > s.action + TOL {
            violations.push(format!("action inequality fails at r = {}", s.r));
        }
        if p.d2h(s.r) < 0.0 {
            violations.push(format!("h'' < 0 at r = {}", s.r));
        }
        if let Some(g) = prev {
            if s.gap < g - TOL {
                violations.push(format!("gap decreases at r = {}", s.r));
            }
        }
        prev = Some(s.gap);
    }
    for i in 1..=samples {
        let r = 1.0 + delta * i as f64 / (samples + 1) as f64;
        if r > 1.0 && r < 1.0 + delta && !(p.d2h(r) > 0.0) {
            violations.push(format!("h'' not positive at r = {r}"));
        }
    }
    Ok(BoundsReport {
        samples,
        min_gap,
        max_gap,
        bound,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn quintic_smoothstep() {
        let s = smoothstep(2).unwrap();
        assert_eq!(
            s.coeffs(),
            &[r(0, 1), r(0, 1), r(0, 1), r(10, 1), r(-15, 1), r(6, 1)]
        );
        assert_eq!(s.antiderivative().eval_exact(r(1, 1)), r(1, 2));
        assert_eq!(s.to_string(), "6t^5 - 15t^4 + 10t^3");
    }

    #[test]
    fn higher_orders_are_smoothsteps() {
        for k in 2..=8 {
            let s = smoothstep(k).unwrap();
            assert_eq!(s.degree(), Some(2 * k as usize + 1));
            assert_eq!(s.eval_exact(r(0, 1)), r(0, 1));
            assert_eq!(s.eval_exact(r(1, 1)), r(1, 1));
            assert_eq!(s.eval_exact(r(1, 2)), r(1, 2));
            let mut d = s.derivative();
            for _ in 0..k {
                assert_eq!(d.eval_exact(r(0, 1)), r(0, 1));
                assert_eq!(d.eval_exact(r(1, 1)), r(0, 1));
                d = d.derivative();
            }
        }
        assert!(smoothstep(1).is_err());
    }

    #[test]
    fn piecewise_values() {
        let p = build_profile(ProfileParams::new(2.0, 0.1, 0.05)).unwrap();
        assert_eq!(p.h(0.7), 0.0);
        assert_eq!(p.dh(1.05), 2.0);
        assert_eq!(p.dh(2.0), 2.0);
        assert!((p.h(1.05) - 0.05).abs() < 1e-15);
        assert!((p.h(2.0) - (2.0 * 0.95 + 0.05)).abs() < 1e-12);
        assert!((p.gap(2.0) - 0.05).abs() < 1e-12);
        assert_eq!(orbit_actions(&p, 0.5).unwrap(), (0.0, 0.0));
        let (a, s) = orbit_actions(&p, 2.0).unwrap();
        assert!(a - s >= 0.0 && a - s <= 0.1);
    }

    #[test]
    fn junctions_are_c2() {
        let p = build_profile(ProfileParams::new(3.0, 0.3, 0.1)).unwrap();
        for x in [1.0, 1.1] {
            let (lo, hi) = (x - 1e-9, x + 1e-9);
            assert!((p.h(lo) - p.h(hi)).abs() < 1e-8);
            assert!((p.dh(lo) - p.dh(hi)).abs() < 1e-6);
            assert!((p.d2h(lo) - p.d2h(hi)).abs() < 1e-4);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(
            build_profile(ProfileParams::new(2.0, 0.1, 0.06)),
            Err(ProfileError::DeltaTooLarge { .. })
        ));
        assert!(build_profile(ProfileParams::new(-1.0, 0.1, 0.01)).is_err());
        let p = build_profile(ProfileParams::new(2.0, 0.1, 0.05)).unwrap();
        assert!(orbit_actions(&p, -1.0).is_err());
        assert!(verify_bounds(&p, 1).is_err());
    }

    #[test]
    fn reference_bounds() {
        let p = build_profile(ProfileParams::new(2.0, 0.1, 0.05)).unwrap();
        let report = verify_bounds(&p, 10_000).unwrap();
        assert!(report.passes(), "{:?}", report.violations);
        assert!(report.max_gap <= 0.1);
        assert!(report.min_gap >= 0.0);
    }
}
