//! Exact max-plus scalars.
//!
//! [`TropScalar`] is an element of `Q ∪ {-inf}` with `⊕ = max` and `⊙ = +`.
//! [`DualScalar`] is its min-plus mirror, `Q ∪ {+inf}` with `⊖ = min`.
//! Values are arbitrary precision rationals; nothing here ever rounds.
//!
//! Scalars print and parse with a small grammar shared by every JSON
//! surface of the crate: `"p/q"`, `"n"`, `"-inf"` and, for duals, `"+inf"`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number used for every coordinate in the crate.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` as a rational. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"n"` or `"p/q"` (optional leading sign, `q > 0` after sign handling).
pub fn parse_rational(input: &str) -> Result<Rational> {
    let err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty string"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected an integer or a fraction p/q"));
        }
        BigInt::from_str(t.strip_prefix('+').unwrap_or(t)).map_err(|e| err(&e.to_string()))
    };
    let n = parse_int(num)?;
    match den {
        None => Ok(Rational::from_integer(n)),
        Some(d) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Max-plus scalar: a rational or the bottom element `-inf`.
///
/// The derived ordering puts `NegInf` below every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TropScalar {
    NegInf,
    Finite(Rational),
}

impl TropScalar {
    pub fn zero() -> Self {
        TropScalar::Finite(Rational::zero())
    }

    pub fn int(n: i64) -> Self {
        TropScalar::Finite(rat(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TropScalar::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            TropScalar::Finite(v) => Some(v),
            TropScalar::NegInf => None,
        }
    }

    /// The finite value, or [`Error::NonFinite`] naming `what`.
    pub fn expect_finite(&self, what: &str) -> Result<&Rational> {
        self.finite()
            .ok_or_else(|| Error::NonFinite(what.to_string()))
    }

    /// Classical negation; `-(-inf)` would leave the semiring.
    pub fn neg(&self) -> Result<Self> {
        match self {
            TropScalar::Finite(v) => Ok(TropScalar::Finite(-v)),
            TropScalar::NegInf => Err(Error::NegateBottom),
        }
    }

    /// Classical difference `self - other` of two finite values.
    pub fn sub(&self, other: &Rational) -> Self {
        match self {
            TropScalar::Finite(v) => TropScalar::Finite(v - other),
            TropScalar::NegInf => TropScalar::NegInf,
        }
    }
}

impl From<Rational> for TropScalar {
    fn from(v: Rational) -> Self {
        TropScalar::Finite(v)
    }
}

impl From<i64> for TropScalar {
    fn from(v: i64) -> Self {
        TropScalar::int(v)
    }
}

/// `a ⊕ b = max(a, b)`.
pub fn t_add(a: &TropScalar, b: &TropScalar) -> TropScalar {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `a ⊙ b = a + b`, with `-inf` absorbing.
pub fn t_mul(a: &TropScalar, b: &TropScalar) -> TropScalar {
    match (a, b) {
        (TropScalar::Finite(x), TropScalar::Finite(y)) => TropScalar::Finite(x + y),
        _ => TropScalar::NegInf,
    }
}

/// Min-plus scalar: a rational or the top element `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DualScalar {
    Finite(Rational),
    PosInf,
}

impl PartialOrd for DualScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DualScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (DualScalar::PosInf, DualScalar::PosInf) => Ordering::Equal,
            (DualScalar::PosInf, _) => Ordering::Greater,
            (_, DualScalar::PosInf) => Ordering::Less,
            (DualScalar::Finite(a), DualScalar::Finite(b)) => a.cmp(b),
        }
    }
}

impl DualScalar {
    pub fn int(n: i64) -> Self {
        DualScalar::Finite(rat(n))
    }

    /// Negation maps the min-plus world onto the max-plus one.
    pub fn neg(&self) -> TropScalar {
        match self {
            DualScalar::Finite(v) => TropScalar::Finite(-v),
            DualScalar::PosInf => TropScalar::NegInf,
        }
    }
}

impl TropScalar {
    /// Negation into the min-plus world, total on both sides.
    pub fn neg_dual(&self) -> DualScalar {
        match self {
            TropScalar::Finite(v) => DualScalar::Finite(-v),
            TropScalar::NegInf => DualScalar::PosInf,
        }
    }
}

/// `a ⊖ b = min(a, b)`, with `+inf` neutral.
pub fn t_min(a: &DualScalar, b: &DualScalar) -> DualScalar {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `max(|x|, |y|, |x - y|)`: the integer length of the tropical segment from
/// the origin to `(x, y)` in the `Z = 0` chart.
pub fn plane_norm(x: &Rational, y: &Rational) -> Rational {
    let d = x - y;
    x.abs().max(y.abs()).max(d.abs())
}

/// Tropical distance `‖p - q‖` between two chart points.
pub fn trop_distance(p: (&Rational, &Rational), q: (&Rational, &Rational)) -> Rational {
    plane_norm(&(p.0 - q.0), &(p.1 - q.1))
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropScalar::NegInf => f.write_str("-inf"),
            TropScalar::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualScalar::PosInf => f.write_str("+inf"),
            DualScalar::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for TropScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" => Ok(TropScalar::NegInf),
            other => parse_rational(other).map(TropScalar::Finite),
        }
    }
}

impl FromStr for DualScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+inf" | "inf" => Ok(DualScalar::PosInf),
            other => parse_rational(other).map(DualScalar::Finite),
        }
    }
}

impl Serialize for TropScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TropScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for DualScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DualScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Rational`] as its exact string form.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a triple of rationals.
pub mod rational_str3 {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &[Rational; 3],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<[Rational; 3], D::Error> {
        let strings = <[String; 3]>::deserialize(d)?;
        let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
        for (slot, s) in out.iter_mut().zip(strings.iter()) {
            *slot = parse_rational(s).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}
