//! Exact coefficient fields: the rationals and prime fields `Z/p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient domain of a ring instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coeff {
    Rational,
    Prime(u32),
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::Prime(101)
    }
}

impl Coeff {
    pub fn is_field(self) -> bool {
        match self {
            Coeff::Rational => true,
            Coeff::Prime(p) => is_prime(p),
        }
    }

    pub fn check_field(self) -> Result<()> {
        if self.is_field() {
            Ok(())
        } else {
            Err(Error::UnsupportedDomain(self.to_string()))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Coeff::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Coeff::Prime(p) => Scalar::Zp {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        let inv = d
            .inv()
            .ok_or_else(|| Error::Parse(format!("{den} is not invertible in {self}")))?;
        Ok(&n * &inv)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational => write!(f, "q"),
            Coeff::Prime(p) => write!(f, "zp:{p}"),
        }
    }
}

impl FromStr for Coeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Coeff::Rational);
        }
        if let Some(p) = s.strip_prefix("zp:") {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
            if p < 2 {
                return Err(Error::Parse(format!("modulus must be >= 2 in {s:?}")));
            }
            return Ok(Coeff::Prime(p));
        }
        Err(Error::Parse(format!(
            "unknown coefficient domain {s:?} (expected \"q\" or \"zp:<p>\")"
        )))
    }
}

impl Serialize for Coeff {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A coefficient value. Both operands of an arithmetic operation must come
/// from the same domain; mixing domains is an internal bug and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Zp { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn domain(&self) -> Coeff {
        match self {
            Scalar::Q(_) => Coeff::Rational,
            Scalar::Zp { modulus, .. } => Coeff::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Zp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Zp { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero (or a non-unit mod a composite).
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(q) => (!q.is_zero()).then(|| Scalar::Q(q.recip())),
            Scalar::Zp { value, modulus } => {
                let (g, x, _) = ext_gcd(*value as i64, *modulus as i64);
                (g == 1).then(|| Scalar::Zp {
                    value: x.rem_euclid(*modulus as i64) as u32,
                    modulus: *modulus,
                })
            }
        }
    }

    /// The encoding used in JSON: `"num/den"` over Q, `"k mod p"` over Z/p.
    pub fn encode(&self) -> String {
        match self {
            Scalar::Q(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Zp { value, modulus } => format!("{value} mod {modulus}"),
        }
    }

    pub fn decode(s: &str, coeff: Coeff) -> Result<Scalar> {
        let s = s.trim();
        match coeff {
            Coeff::Rational => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: BigInt = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                let d: BigInt = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar::Q(BigRational::new(n, d)))
            }
            Coeff::Prime(p) => {
                let (k, m) = match s.split_once("mod") {
                    Some((k, m)) => (k.trim(), Some(m.trim())),
                    None => (s, None),
                };
                if let Some(m) = m {
                    let m: u32 = m
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
                    if m != p {
                        return Err(Error::Parse(format!(
                            "coefficient {s:?} is not in domain zp:{p}"
                        )));
                    }
                }
                let k: i64 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
                Ok(coeff.from_i64(k))
            }
        }
    }

    /// Integer representative used for display; residues are shown
    /// symmetrically so that `-1 mod p` prints as `-1`.
    fn signed_repr(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Zp { value, modulus } => {
                let v = *value as i64;
                let m = *modulus as i64;
                Some(if v > m / 2 { v - m } else { v })
            }
        }
    }

    pub fn is_negative_repr(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            _ => self.signed_repr().is_some_and(|v| v < 0),
        }
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.signed_repr() {
            Some(v) => write!(f, "{v}"),
            None => match self {
                Scalar::Q(q) => write!(f, "{q}"),
                _ => unreachable!(),
            },
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar domain mismatch: {} vs {}", a.domain(), b.domain())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Zp { value: a, modulus: p }, Scalar::Zp { value: b, modulus: q }) if p == q => {
                Scalar::Zp {
                    value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Zp { value: a, modulus: p }, Scalar::Zp { value: b, modulus: q }) if p == q => {
                Scalar::Zp {
                    value: ((*a as u64 * *b as u64) % *p as u64) as u32,
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
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Zp { value, modulus } => Scalar::Zp {
                value: (*modulus - *value) % *modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
