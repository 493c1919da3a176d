//! Nonnegative exact rationals extended with `+inf`.
//!
//! Exponent values, their reciprocals and all regime arithmetic live here.
//! The conventions `1/inf = 0` and `1/0 = inf` hold exactly, so boundary
//! cases (tail sums hitting 1/2 or 1) never depend on floating point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::ExponentError;

/// Exact rational used throughout the exponent calculus.
pub type Rat = Rational64;

/// A nonnegative exact rational or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtScalar {
    Finite(Rat),
    Infinity,
}

impl ExtScalar {
    pub const INF: ExtScalar = ExtScalar::Infinity;

    /// Builds a finite scalar from a ratio; fails on negative values.
    pub fn new(num: i64, den: i64) -> Result<Self, ExponentError> {
        if den == 0 {
            return Err(ExponentError::Parse("zero denominator".into()));
        }
        let r = Rat::new(num, den);
        if r.is_negative() {
            return Err(ExponentError::Parse(format!("negative value {num}/{den}")));
        }
        Ok(ExtScalar::Finite(r))
    }

    pub fn from_int(n: u64) -> Self {
        ExtScalar::Finite(Rat::from_integer(n as i64))
    }

    pub fn from_rat(r: Rat) -> Result<Self, ExponentError> {
        if r.is_negative() {
            return Err(ExponentError::Parse(format!("negative value {r}")));
        }
        Ok(ExtScalar::Finite(r))
    }

    pub fn zero() -> Self {
        ExtScalar::Finite(Rat::zero())
    }

    pub fn one() -> Self {
        ExtScalar::Finite(Rat::one())
    }

    pub fn two() -> Self {
        ExtScalar::from_int(2)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtScalar::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtScalar::Finite(r) if r.is_zero())
    }

    /// Finite part, if any.
    pub fn as_rat(&self) -> Option<Rat> {
        match self {
            ExtScalar::Finite(r) => Some(*r),
            ExtScalar::Infinity => None,
        }
    }

    /// Reciprocal with the conventions `1/inf = 0` and `1/0 = inf`.
    pub fn recip(&self) -> ExtScalar {
        match self {
            ExtScalar::Infinity => ExtScalar::Finite(Rat::zero()),
            ExtScalar::Finite(r) if r.is_zero() => ExtScalar::Infinity,
            ExtScalar::Finite(r) => ExtScalar::Finite(r.recip()),
        }
    }

    /// Reciprocal as an exact rational; `inf` maps to 0.
    /// Only defined for nonzero values.
    pub fn recip_rat(&self) -> Result<Rat, ExponentError> {
        match self {
            ExtScalar::Infinity => Ok(Rat::zero()),
            ExtScalar::Finite(r) if r.is_zero() => Err(ExponentError::Domain(
                "reciprocal of 0 is not a finite rational".into(),
            )),
            ExtScalar::Finite(r) => Ok(r.recip()),
        }
    }

    /// Inverse of `recip_rat`: a reciprocal value in `[0, inf)` back to a scalar.
    pub fn from_recip(r: Rat) -> Result<Self, ExponentError> {
        if r.is_negative() {
            return Err(ExponentError::Domain(format!(
                "negative reciprocal {r} has no nonnegative inverse"
            )));
        }
        if r.is_zero() {
            Ok(ExtScalar::Infinity)
        } else {
            Ok(ExtScalar::Finite(r.recip()))
        }
    }

    /// True when the value lies in `[1, inf]`, the range of every exponent.
    pub fn is_exponent(&self) -> bool {
        match self {
            ExtScalar::Infinity => true,
            ExtScalar::Finite(r) => *r >= Rat::one(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtScalar::Infinity => f64::INFINITY,
            ExtScalar::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn checked_sub(&self, other: &ExtScalar) -> Option<ExtScalar> {
        match (self, other) {
            (ExtScalar::Infinity, ExtScalar::Finite(_)) => Some(ExtScalar::Infinity),
            (ExtScalar::Finite(a), ExtScalar::Finite(b)) if a >= b => {
                Some(ExtScalar::Finite(a - b))
            }
            _ => None,
        }
    }
}

impl PartialOrd for ExtScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtScalar::Infinity, ExtScalar::Infinity) => Ordering::Equal,
            (ExtScalar::Infinity, _) => Ordering::Greater,
            (_, ExtScalar::Infinity) => Ordering::Less,
            (ExtScalar::Finite(a), ExtScalar::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::Infinity => write!(f, "inf"),
            ExtScalar::Finite(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for ExtScalar {
    type Err = ExponentError;

    /// Parses "inf", integers ("10"), ratios ("4/3") and finite decimals ("0.01").
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" || s.eq_ignore_ascii_case("infinity") {
            return Ok(ExtScalar::Infinity);
        }
        if let Some((n, d)) = s.split_once('/') {
            let num: i64 = n
                .trim()
                .parse()
                .map_err(|_| ExponentError::Parse(format!("bad numerator in {s:?}")))?;
            let den: i64 = d
                .trim()
                .parse()
                .map_err(|_| ExponentError::Parse(format!("bad denominator in {s:?}")))?;
            return ExtScalar::new(num, den);
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let whole: i64 = if whole.is_empty() {
                0
            } else {
                whole
                    .parse()
                    .map_err(|_| ExponentError::Parse(format!("bad decimal {s:?}")))?
            };
            if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ExponentError::Parse(format!("bad decimal {s:?}")));
            }
            let scale = 10i64.pow(frac.len() as u32);
            let frac_num: i64 = frac.parse().unwrap();
            return ExtScalar::new(whole * scale + frac_num, scale);
        }
        let n: i64 = s
            .parse()
            .map_err(|_| ExponentError::Parse(format!("not a rational: {s:?}")))?;
        ExtScalar::new(n, 1)
    }
}

// JSON form: {"num": i, "den": j} for finite values, the string "inf" otherwise.
impl Serialize for ExtScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtScalar::Infinity => serializer.serialize_str("inf"),
            ExtScalar::Finite(r) => {
                let mut st = serializer.serialize_struct("ExtScalar", 2)?;
                st.serialize_field("num", r.numer())?;
                st.serialize_field("den", r.denom())?;
                st.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ExtScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ExtScalar;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "\"inf\" or {{\"num\": i64, \"den\": i64}}")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtScalar, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_map<A: de::MapAccess<'de>>(self, mut map: A) -> Result<ExtScalar, A::Error> {
                let mut num: Option<i64> = None;
                let mut den: Option<i64> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "num" => num = Some(map.next_value()?),
                        "den" => den = Some(map.next_value()?),
                        other => return Err(de::Error::unknown_field(other, &["num", "den"])),
                    }
                }
                let num = num.ok_or_else(|| de::Error::missing_field("num"))?;
                let den = den.ok_or_else(|| de::Error::missing_field("den"))?;
                ExtScalar::new(num, den).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Parses a comma-separated list of scalars.
pub fn parse_scalar_list(s: &str) -> Result<Vec<ExtScalar>, ExponentError> {
    s.split(',').map(|part| part.parse()).collect()
}
