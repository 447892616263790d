//! Exact coefficient rings: ℤ, ℚ and prime fields F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient ring selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Rationals,
    Prime(u64),
}

impl Ring {
    pub const F2: Ring = Ring::Prime(2);

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Ring::Integers => Scalar::Int(v.clone()),
            Ring::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            Ring::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }

    /// Characteristic of the ring (0 for ℤ and ℚ).
    pub fn characteristic(self) -> u64 {
        match self {
            Ring::Prime(p) => p,
            _ => 0,
        }
    }

    /// Whether the integer `v` maps to zero in this ring.
    pub fn kills(self, v: i64) -> bool {
        match self {
            Ring::Prime(p) => v.rem_euclid(p as i64) == 0,
            _ => v == 0,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown coefficient ring `{0}` (expected Z, Q or F<p> with p prime)")]
pub struct ParseRingError(pub String);

impl FromStr for Ring {
    type Err = ParseRingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.to_ascii_uppercase().as_str() {
            "Z" | "INT" | "INTEGERS" => return Ok(Ring::Integers),
            "Q" | "RAT" | "RATIONALS" => return Ok(Ring::Rationals),
            _ => {}
        }
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix('f'))
            .ok_or_else(|| ParseRingError(s.to_string()))?;
        let p: u64 = digits.parse().map_err(|_| ParseRingError(s.to_string()))?;
        if p < 2 || !(2..).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(ParseRingError(s.to_string()));
        }
        Ok(Ring::Prime(p))
    }
}

/// An exact ring element. Binary operations require both operands to
/// live in the same ring and panic otherwise; every constructor goes
/// through [`Ring`], so mixing only happens on programmer error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Int(_) => Ring::Integers,
            Scalar::Rat(_) => Ring::Rationals,
            Scalar::Mod { modulus, .. } => Ring::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_one(),
            Scalar::Rat(v) => v.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Sign test for ℤ and ℚ; prime-field elements are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_negative(),
            Scalar::Rat(v) => v.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    /// True for units of the ring: ±1 in ℤ, anything nonzero in a field.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Int(v) => v.abs().is_one(),
            _ => !self.is_zero(),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Int(v) if v.abs().is_one() => Some(Scalar::Int(v.clone())),
            Scalar::Int(_) => None,
            Scalar::Rat(v) if v.is_zero() => None,
            Scalar::Rat(v) => Some(Scalar::Rat(v.recip())),
            Scalar::Mod { value: 0, .. } => None,
            Scalar::Mod { value, modulus } => {
                let e = BigInt::from(*value).extended_gcd(&BigInt::from(*modulus));
                Some(Ring::Prime(*modulus).from_bigint(&e.x))
            }
        }
    }

    /// Integer representative: exact for ℤ, the residue in `[0, p)` for
    /// F_p, and `None` for non-integral rationals.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(v) => Some(v.clone()),
            Scalar::Rat(v) if v.is_integer() => Some(v.to_integer()),
            Scalar::Rat(_) => None,
            Scalar::Mod { value, .. } => Some(BigInt::from(*value)),
        }
    }

    /// Map an integer or field element into `target`. Fails for ℚ → ℤ/F_p
    /// on non-integral values and for F_p → anything else.
    pub fn to_ring(&self, target: Ring) -> Option<Scalar> {
        if self.ring() == target {
            return Some(self.clone());
        }
        match (self, target) {
            (Scalar::Int(v), _) => Some(target.from_bigint(v)),
            (Scalar::Rat(v), Ring::Integers) if v.is_integer() => {
                Some(Scalar::Int(v.to_integer()))
            }
            _ => None,
        }
    }

    pub fn scale_i64(&self, k: i64) -> Scalar {
        self * &self.ring().from_i64(k)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Int(v) => v.to_f64().unwrap_or(f64::NAN),
            Scalar::Rat(v) => v.to_f64().unwrap_or(f64::NAN),
            Scalar::Mod { value, .. } => *value as f64,
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar ring mismatch: {} vs {}", a.ring(), b.ring())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Mod {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Mod {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) => write!(f, "{v}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_reduces_into_range() {
        let f5 = Ring::Prime(5);
        assert_eq!(f5.from_i64(-1), Scalar::Mod { value: 4, modulus: 5 });
        assert_eq!(f5.from_i64(12), Scalar::Mod { value: 2, modulus: 5 });
        let x = f5.from_i64(3);
        assert_eq!(&x * &x.inverse().unwrap(), f5.one());
        assert_eq!((-&f5.zero()), f5.zero());
    }

    #[test]
    fn integer_units() {
        let z = Ring::Integers;
        assert!(z.from_i64(-1).is_unit());
        assert!(!z.from_i64(2).is_unit());
        assert!(z.from_i64(2).inverse().is_none());
        assert_eq!(Ring::Rationals.from_i64(2).inverse().unwrap().to_string(), "1/2");
    }

    #[test]
    fn parse_rings() {
        assert_eq!("F2".parse::<Ring>().unwrap(), Ring::F2);
        assert_eq!("q".parse::<Ring>().unwrap(), Ring::Rationals);
        assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Integers);
        assert_eq!("F7".parse::<Ring>().unwrap(), Ring::Prime(7));
        assert!("F4".parse::<Ring>().is_err());
        assert!("R".parse::<Ring>().is_err());
    }

    #[test]
    fn ring_kills() {
        assert!(Ring::F2.kills(2));
        assert!(!Ring::Integers.kills(2));
        assert!(Ring::Rationals.kills(0));
    }

    #[test]
    #[should_panic(expected = "scalar ring mismatch")]
    fn mixing_rings_panics() {
        let _ = &Ring::F2.one() + &Ring::Integers.one();
    }
}
