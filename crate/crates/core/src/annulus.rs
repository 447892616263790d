//! Annuli bounded by two nested circles in the Riemann sphere.
//!
//! Circles are stored as Hermitian forms `H = [[A, B], [B̄, C]]`, the
//! zero set of `A|z|² + 2 Re(B z̄) + C`; a Möbius map `M` sends `H` to
//! `M^{-†} H M^{-1}`, so images of lines and circles are computed the
//! same way. An annulus is normalized by sending the two limit points of
//! the pencil spanned by its boundary circles to `0` and `∞`, then
//! scaling so the inner circle becomes `|z| = 1`. The outer one is then
//! `|z| = e^{2πR}` with `R` the conformal modulus.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AnnulusError {
    #[error("circle radius must be positive and finite, got {0}")]
    Radius(f64),
    #[error("line direction must be nonzero")]
    Direction,
    #[error("boundary must be two round circles")]
    NotRound,
    #[error("circles are not nested")]
    NotNested,
    #[error("circles are tangent or degenerate (gap {gap:e} below {threshold:e})")]
    Tangent { gap: f64, threshold: f64 },
    #[error("Möbius map is singular")]
    Singular,
}

/// Relative separation below which two boundary circles count as
/// tangent.
pub const TANGENCY: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircleShape {
    Round { center: Complex64, radius: f64 },
    /// Circle through `∞`; `direction` has unit length.
    Line { point: Complex64, direction: Complex64 },
}

/// A circle or line in `Ĉ` as a Hermitian form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    a: f64,
    b: Complex64,
    c: f64,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64) -> Result<Self, AnnulusError> {
        if !(radius.is_finite() && radius > 0.0) || !center.is_finite() {
            return Err(AnnulusError::Radius(radius));
        }
        Ok(Circle {
            a: 1.0,
            b: -center,
            c: center.norm_sqr() - radius * radius,
        })
    }

    pub fn line(point: Complex64, direction: Complex64) -> Result<Self, AnnulusError> {
        if direction.norm() == 0.0 || !direction.is_finite() {
            return Err(AnnulusError::Direction);
        }
        let normal = Complex64::i() * direction / direction.norm();
        Ok(Circle {
            a: 0.0,
            b: normal / 2.0,
            c: -(normal.conj() * point).re,
        })
    }

    /// Round circle through three distinct points, or the line through
    /// them if they are collinear.
    pub fn through(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Self, AnnulusError> {
        let (u, v) = (z2 - z1, z3 - z1);
        let cross = (u.conj() * v).im;
        if cross.abs() <= 1e-14 * u.norm() * v.norm() {
            return Circle::line(z1, u);
        }
        // Circumcenter relative to z1.
        let w = Complex64::i() * (u * v.norm_sqr() - v * u.norm_sqr()) / (2.0 * cross);
        Circle::new(z1 + w, w.norm())
    }

    /// Scale the form to `A = 1` (round) or `|B| = 1/2` (line).
    fn normalized(self) -> Self {
        let scale = self.a.abs().max(self.b.norm()).max(self.c.abs());
        if self.a.abs() > 1e-13 * scale {
            Circle {
                a: 1.0,
                b: self.b / self.a,
                c: self.c / self.a,
            }
        } else {
            let k = 2.0 * self.b.norm();
            Circle {
                a: 0.0,
                b: self.b / k,
                c: self.c / k,
            }
        }
    }

    pub fn shape(&self) -> CircleShape {
        let n = self.normalized();
        if n.a == 0.0 {
            let normal = 2.0 * n.b;
            CircleShape::Line {
                point: -n.c * normal / normal.norm_sqr(),
                direction: -Complex64::i() * normal / normal.norm(),
            }
        } else {
            CircleShape::Round {
                center: -n.b,
                radius: (n.b.norm_sqr() - n.c).max(0.0).sqrt(),
            }
        }
    }

    /// `(center, radius)` for a round circle.
    pub fn round(&self) -> Option<(Complex64, f64)> {
        match self.shape() {
            CircleShape::Round { center, radius } => Some((center, radius)),
            CircleShape::Line { .. } => None,
        }
    }

    /// Value of the form at `z`: negative inside a round circle.
    pub fn power(&self, z: Complex64) -> f64 {
        let n = self.normalized();
        n.a * z.norm_sqr() + 2.0 * (n.b * z.conj()).re + n.c
    }

    /// Euclidean distance from `z` to the circle.
    pub fn distance(&self, z: Complex64) -> f64 {
        match self.shape() {
            CircleShape::Round { center, radius } => ((z - center).norm() - radius).abs(),
            CircleShape::Line { point, direction } => ((z - point) * direction.conj()).im.abs(),
        }
    }

    fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.a, 0.0), self.b],
            [self.b.conj(), Complex64::new(self.c, 0.0)],
        ]
    }
}

fn mat_mul(x: [[Complex64; 2]; 2], y: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn dagger(x: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[x[0][0].conj(), x[1][0].conj()], [x[0][1].conj(), x[1][1].conj()]]
}

/// `z ↦ (az + b)/(cz + d)`, stored with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, AnnulusError> {
        let det = a * d - b * c;
        let size = [a, b, c, d].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if !(det.norm() > 1e-14 * size) || !det.is_finite() {
            return Err(AnnulusError::Singular);
        }
        let s = det.sqrt();
        Ok(MoebiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        MoebiusMap {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// Image of a finite point; `None` when it is `∞`.
    pub fn apply(&self, z: Complex64) -> Option<Complex64> {
        let den = self.c * z + self.d;
        (den.norm() > 0.0).then(|| (self.a * z + self.b) / den)
    }

    /// Image of `∞`; `None` when it is `∞`.
    pub fn apply_infinity(&self) -> Option<Complex64> {
        (self.c.norm() > 0.0).then(|| self.a / self.c)
    }

    /// The point sent to `∞`, if finite.
    pub fn pole(&self) -> Option<Complex64> {
        (self.c.norm() > 0.0).then(|| -self.d / self.c)
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> Self {
        let m = mat_mul(self.matrix(), other.matrix());
        MoebiusMap {
            a: m[0][0],
            b: m[0][1],
            c: m[1][0],
            d: m[1][1],
        }
    }

    /// Image circle, `M^{-†} H M^{-1}`.
    pub fn apply_circle(&self, x: &Circle) -> Circle {
        let inv = self.inverse().matrix();
        let h = mat_mul(dagger(inv), mat_mul(x.matrix(), inv));
        Circle {
            a: h[0][0].re,
            b: (h[0][1] + h[1][0].conj()) / 2.0,
            c: h[1][1].re,
        }
        .normalized()
    }

    /// `|a|² + |b|² + |c|² + |d|²` for the unimodular representative;
    /// 2 for rigid rotations, large for badly conditioned maps.
    pub fn condition(&self) -> f64 {
        [self.a, self.b, self.c, self.d].iter().map(|z| z.norm_sqr()).sum()
    }

    fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }
}

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[derive(Serialize)]
struct MoebiusJson<'a> {
    #[serde(serialize_with = "ser_complex")]
    a: &'a Complex64,
    #[serde(serialize_with = "ser_complex")]
    b: &'a Complex64,
    #[serde(serialize_with = "ser_complex")]
    c: &'a Complex64,
    #[serde(serialize_with = "ser_complex")]
    d: &'a Complex64,
}

impl Serialize for MoebiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MoebiusJson {
            a: &self.a,
            b: &self.b,
            c: &self.c,
            d: &self.d,
        }
        .serialize(s)
    }
}

/// Closed region between two nested round circles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    outer: Circle,
    inner: Circle,
}

impl Annulus {
    /// The two circles may be given in either order.
    pub fn new(first: Circle, second: Circle) -> Result<Self, AnnulusError> {
        let (c1, r1) = first.round().ok_or(AnnulusError::NotRound)?;
        let (c2, r2) = second.round().ok_or(AnnulusError::NotRound)?;
        let (outer, inner, (co, ro), (ci, ri)) = if r1 >= r2 {
            (first, second, (c1, r1), (c2, r2))
        } else {
            (second, first, (c2, r2), (c1, r1))
        };
        let gap = ro - ri - (co - ci).norm();
        let threshold = TANGENCY * ro;
        if gap < -threshold {
            return Err(AnnulusError::NotNested);
        }
        if gap < threshold {
            return Err(AnnulusError::Tangent { gap, threshold });
        }
        Ok(Annulus { outer, inner })
    }

    pub fn concentric(center: Complex64, inner: f64, outer: f64) -> Result<Self, AnnulusError> {
        Annulus::new(Circle::new(center, outer)?, Circle::new(center, inner)?)
    }

    /// `{1 ≤ |z| ≤ e^{2πR}}`.
    pub fn standard(modulus: f64) -> Result<Self, AnnulusError> {
        Annulus::concentric(Complex64::new(0.0, 0.0), 1.0, (2.0 * PI * modulus).exp())
    }

    pub fn outer(&self) -> &Circle {
        &self.outer
    }

    pub fn inner(&self) -> &Circle {
        &self.inner
    }

    /// Image under a Möbius map whose pole lies off the closed annulus.
    pub fn map(&self, phi: &MoebiusMap) -> Result<Annulus, AnnulusError> {
        Annulus::new(phi.apply_circle(&self.outer), phi.apply_circle(&self.inner))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.outer.power(z) <= 0.0 && self.inner.power(z) >= 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Normalization {
    #[serde(rename = "R")]
    pub modulus: f64,
    pub map: MoebiusMap,
    /// Pencil limit point inside the inner disc, sent to 0.
    #[serde(skip)]
    pub zero: Complex64,
    /// Limit point outside the outer disc, sent to `∞`; `None` when the
    /// circles are concentric.
    #[serde(skip)]
    pub infinity: Option<Complex64>,
}

/// Limit points of the pencil spanned by two disjoint circles: the
/// point circles `H₁ + tH₂` with `det = 0`.
pub fn limit_points(x: &Circle, y: &Circle) -> Result<(Option<Complex64>, Option<Complex64>), AnnulusError> {
    let (x, y) = (x.normalized(), y.normalized());
    let a2 = y.a * y.c - y.b.norm_sqr();
    let a1 = x.a * y.c + y.a * x.c - 2.0 * (x.b * y.b.conj()).re;
    let a0 = x.a * x.c - x.b.norm_sqr();
    let disc = a1 * a1 - 4.0 * a2 * a0;
    let scale = a1 * a1 + (4.0 * a2 * a0).abs();
    if !(disc > 1e-14 * scale) {
        return Err(AnnulusError::Tangent {
            gap: disc,
            threshold: 1e-14 * scale,
        });
    }
    let q = -0.5 * (a1 + a1.signum() * disc.sqrt());
    let roots = [q / a2, a0 / q];
    let point = |t: f64| {
        let a = x.a + t * y.a;
        let b = x.b + t * y.b;
        let size = 1.0 + t.abs();
        (a.abs() > 1e-12 * size).then(|| -b / a)
    };
    Ok((point(roots[0]), point(roots[1])))
}

/// Möbius map onto the standard annulus `{1 ≤ |z| ≤ e^{2πR}}`.
pub fn normalize(ann: &Annulus) -> Result<Normalization, AnnulusError> {
    let (p1, p2) = limit_points(&ann.outer, &ann.inner)?;
    let inside = |p: &Option<Complex64>| p.is_some_and(|z| ann.inner.power(z) < 0.0);
    let (zero, infinity) = match (inside(&p1), inside(&p2)) {
        (true, false) => (p1.unwrap(), p2),
        (false, true) => (p2.unwrap(), p1),
        _ => return Err(AnnulusError::NotNested),
    };
    let one = Complex64::new(1.0, 0.0);
    let raw = match infinity {
        Some(q) => MoebiusMap::new(one, -zero, one, -q)?,
        None => MoebiusMap::new(one, -zero, Complex64::new(0.0, 0.0), one)?,
    };
    let radius = |c: &Circle| raw.apply_circle(c).round().map(|(_, r)| r).ok_or(AnnulusError::NotRound);
    let (r_in, r_out) = (radius(&ann.inner)?, radius(&ann.outer)?);
    let s = Complex64::new(r_in.sqrt(), 0.0);
    let scaled = MoebiusMap {
        a: raw.a / s,
        b: raw.b / s,
        c: raw.c * s,
        d: raw.d * s,
    };
    Ok(Normalization {
        modulus: (r_out / r_in).ln() / (2.0 * PI),
        map: scaled,
        zero,
        infinity,
    })
}

pub fn modulus(ann: &Annulus) -> Result<f64, AnnulusError> {
    normalize(ann).map(|n| n.modulus)
}

/// Independent formula for nested circles with radii `r₁ > r₂` and
/// centre distance `d`: `R = arccosh((r₁² + r₂² - d²)/(2r₁r₂)) / 2π`.
pub fn modulus_inversive(ann: &Annulus) -> f64 {
    let (c1, r1) = ann.outer.round().expect("round");
    let (c2, r2) = ann.inner.round().expect("round");
    let d = (c1 - c2).norm();
    ((r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2)).acosh() / (2.0 * PI)
}

pub type Polyline = Vec<Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub struct Foliations {
    /// Leaves joining the two boundary circles.
    pub radial: Vec<Polyline>,
    /// Closed leaves, first and last are the boundary circles.
    pub circular: Vec<Polyline>,
}

/// Push the radial segments and concentric circles of the standard
/// annulus forward to `ann`. `points` is the number of samples per leaf.
pub fn canonical_foliations(
    ann: &Annulus,
    n_radial: usize,
    n_circular: usize,
    points: usize,
) -> Result<Foliations, AnnulusError> {
    let norm = normalize(ann)?;
    let back = norm.map.inverse();
    let top = 2.0 * PI * norm.modulus;
    let points = points.max(2);
    let pull = |w: Complex64| back.apply(w).expect("pole lies outside the annulus");
    let radial = (0..n_radial)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n_radial as f64;
            (0..points)
                .map(|i| pull(Complex64::from_polar((top * i as f64 / (points - 1) as f64).exp(), theta)))
                .collect()
        })
        .collect();
    let circular = (0..n_circular)
        .map(|j| {
            let rho = if n_circular == 1 {
                1.0
            } else {
                (top * j as f64 / (n_circular - 1) as f64).exp()
            };
            (0..=points)
                .map(|i| pull(Complex64::from_polar(rho, 2.0 * PI * i as f64 / points as f64)))
                .collect()
        })
        .collect();
    Ok(Foliations { radial, circular })
}

/// Largest `|cos|` of the angle between the two leaves through
/// `crossings` points spread over the annulus, with tangents taken by
/// central differences of the pushed-forward parametrizations.
pub fn orthogonality_residual(ann: &Annulus, crossings: usize) -> Result<f64, AnnulusError> {
    let norm = normalize(ann)?;
    let back = norm.map.inverse();
    let top = 2.0 * PI * norm.modulus;
    let pull = |w: Complex64| back.apply(w).expect("pole lies outside the annulus");
    let side = (crossings as f64).sqrt().ceil().max(1.0) as usize;
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for k in 0..crossings {
        let (i, j) = (k / side, k % side);
        let s = top * (i as f64 + 0.5) / side as f64;
        let theta = 2.0 * PI * (j as f64 + 0.5) / side as f64;
        let radial = pull(Complex64::from_polar((s + h).exp(), theta)) - pull(Complex64::from_polar((s - h).exp(), theta));
        let circular = pull(Complex64::from_polar(s.exp(), theta + h)) - pull(Complex64::from_polar(s.exp(), theta - h));
        let cos = (radial.conj() * circular).re / (radial.norm() * circular.norm());
        worst = worst.max(cos.abs());
    }
    Ok(worst)
}

/// Standalone SVG with the two leaf families as stroke-only paths.
pub fn foliation_svg(f: &Foliations, size: f64) -> String {
    let all = f.radial.iter().chain(&f.circular).flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in all {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let margin = 0.05 * size;
    let k = (size - 2.0 * margin) / span;
    let px = |z: &Complex64| (margin + (z.re - x0) * k, margin + (y1 - z.im) * k);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    s.push_str("<style>path{fill:none;stroke-linejoin:round}.radial{stroke:#b03a2e;stroke-width:1}.circular{stroke:#1f4e79;stroke-width:1.2}</style>\n");
    for (class, leaves) in [("radial", &f.radial), ("circular", &f.circular)] {
        for leaf in leaves.iter() {
            let mut d = String::new();
            for (i, z) in leaf.iter().enumerate() {
                let (x, y) = px(z);
                let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
            }
            let _ = writeln!(s, r#"<path class="{class}" d="{d}"/>"#);
        }
    }
    s.push_str("</svg>\n");
    s
}
