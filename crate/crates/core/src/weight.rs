//! Edge weights, costs and ratios.
//!
//! A [`Weight`] is either an exact rational, a floating point value (used
//! only when a host graph is built from a `p`-norm with `p >= 2`), or the
//! `+inf` sentinel for unreachable pairs. Exact values combine exactly;
//! mixing exact and float values yields a float.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number used for canonical weights.
pub type Rational = Ratio<i128>;

/// Default tolerance for float-mode comparisons.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// A nonnegative edge weight, cost, or ratio.
#[derive(Clone, Copy, Debug)]
pub enum Weight {
    Exact(Rational),
    Float(f64),
    Infinite,
}

impl Weight {
    pub fn int(v: i128) -> Self {
        Weight::Exact(Rational::from_integer(v))
    }

    /// `num/den` reduced. Panics on a zero denominator.
    pub fn ratio(num: i128, den: i128) -> Self {
        Weight::Exact(Rational::new(num, den))
    }

    pub fn zero() -> Self {
        Weight::int(0)
    }

    pub fn one() -> Self {
        Weight::int(1)
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Weight::Infinite)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Weight::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Exact(r) => r.is_zero(),
            Weight::Float(f) => *f == 0.0,
            Weight::Infinite => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Weight::Exact(r) => r.is_negative(),
            Weight::Float(f) => *f < 0.0,
            Weight::Infinite => false,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Weight::Exact(r) => Some(*r),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(r) => r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN),
            Weight::Float(f) => *f,
            Weight::Infinite => f64::INFINITY,
        }
    }

    /// Comparison that treats float values within `eps` as equal.
    pub fn cmp_eps(&self, other: &Weight, eps: f64) -> Ordering {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => a.cmp(b),
            (Weight::Infinite, Weight::Infinite) => Ordering::Equal,
            (Weight::Infinite, _) => Ordering::Greater,
            (_, Weight::Infinite) => Ordering::Less,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                if (a - b).abs() <= eps {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// `self <= other`, with float tolerance `eps`.
    pub fn le_eps(&self, other: &Weight, eps: f64) -> bool {
        self.cmp_eps(other, eps) != Ordering::Greater
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::zero()
    }
}

impl From<i64> for Weight {
    fn from(v: i64) -> Self {
        Weight::int(v as i128)
    }
}

impl From<Rational> for Weight {
    fn from(r: Rational) -> Self {
        Weight::Exact(r)
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => Some(a.cmp(b)),
            (Weight::Infinite, Weight::Infinite) => Some(Ordering::Equal),
            (Weight::Infinite, _) => Some(Ordering::Greater),
            (_, Weight::Infinite) => Some(Ordering::Less),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Infinite, _) | (_, Weight::Infinite) => Weight::Infinite,
            (Weight::Exact(a), Weight::Exact(b)) => Weight::Exact(a + b),
            (a, b) => Weight::Float(a.to_f64() + b.to_f64()),
        }
    }
}

impl Sub for Weight {
    type Output = Weight;
    /// `inf - x` is `inf`; `x - inf` is not meaningful and panics.
    fn sub(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (_, Weight::Infinite) => panic!("subtracting an infinite weight"),
            (Weight::Infinite, _) => Weight::Infinite,
            (Weight::Exact(a), Weight::Exact(b)) => Weight::Exact(a - b),
            (a, b) => Weight::Float(a.to_f64() - b.to_f64()),
        }
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Infinite, x) | (x, Weight::Infinite) => {
                if x.is_zero() {
                    Weight::zero()
                } else {
                    Weight::Infinite
                }
            }
            (Weight::Exact(a), Weight::Exact(b)) => Weight::Exact(a * b),
            (a, b) => Weight::Float(a.to_f64() * b.to_f64()),
        }
    }
}

impl Div for Weight {
    type Output = Weight;
    /// Ratio of two nonnegative quantities. `x/0` is `inf` for `x > 0`,
    /// `0/0` and `inf/inf` are 1 (no improvement possible), `x/inf` is 0.
    fn div(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Infinite, Weight::Infinite) => Weight::one(),
            (Weight::Infinite, _) => Weight::Infinite,
            (_, Weight::Infinite) => Weight::zero(),
            (a, b) if b.is_zero() => {
                if a.is_zero() {
                    Weight::one()
                } else {
                    Weight::Infinite
                }
            }
            (Weight::Exact(a), Weight::Exact(b)) => Weight::Exact(a / b),
            (a, b) => Weight::Float(a.to_f64() / b.to_f64()),
        }
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::zero(), |a, b| a + b)
    }
}

/// Formats a float with 12 significant digits, trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x > 0.0 { "inf".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 11 - magnitude;
    if (0..=20).contains(&decimals) {
        let s = format!("{:.*}", decimals as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.11e}", x)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Weight::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Weight::Float(x) => f.write_str(&format_float(*x)),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

/// Parses a decimal literal such as `-12.375` or `2.5e-3` exactly.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: i128 = if all.is_empty() { 0 } else { all.parse().ok()? };
    if neg {
        num = -num;
    }
    let shift = exp - frac_part.len() as i32;
    let pow = 10i128.checked_pow(shift.unsigned_abs())?;
    Some(if shift >= 0 {
        Rational::from_integer(num.checked_mul(pow)?)
    } else {
        Rational::new(num, pow)
    })
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if lower == "inf" || lower == "infinity" || lower == "+inf" {
            return Ok(Weight::Infinite);
        }
        if let Some((a, b)) = t.split_once('/') {
            let num = parse_decimal(a).ok_or_else(|| Error::parse(format!("bad rational `{s}`")))?;
            let den = parse_decimal(b).ok_or_else(|| Error::parse(format!("bad rational `{s}`")))?;
            if den.is_zero() {
                return Err(Error::parse(format!("zero denominator in `{s}`")));
            }
            return Ok(Weight::Exact(num / den));
        }
        parse_decimal(t)
            .map(Weight::Exact)
            .ok_or_else(|| Error::parse(format!("bad number `{s}`")))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Weight::Exact(r) if r.is_integer() => match i64::try_from(*r.numer()) {
                Ok(v) => ser.serialize_i64(v),
                Err(_) => ser.serialize_str(&r.numer().to_string()),
            },
            Weight::Exact(r) => {
                let mut m = ser.serialize_map(Some(2))?;
                match (i64::try_from(*r.numer()), i64::try_from(*r.denom())) {
                    (Ok(n), Ok(d)) => {
                        m.serialize_entry("num", &n)?;
                        m.serialize_entry("den", &d)?;
                    }
                    _ => {
                        m.serialize_entry("num", &r.numer().to_string())?;
                        m.serialize_entry("den", &r.denom().to_string())?;
                    }
                }
                m.end()
            }
            Weight::Float(x) => {
                let mut m = ser.serialize_map(Some(1))?;
                m.serialize_entry("float", x)?;
                m.end()
            }
            Weight::Infinite => ser.serialize_str("inf"),
        }
    }
}

fn integer_field(v: &serde_json::Value) -> Option<i128> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(i128::from),
        serde_json::Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

impl Weight {
    /// Reads a weight from any of the accepted JSON encodings.
    pub fn from_json(v: &serde_json::Value) -> Result<Weight, Error> {
        match v {
            serde_json::Value::Number(n) => n.to_string().parse(),
            serde_json::Value::String(s) => s.parse(),
            serde_json::Value::Object(map) => {
                if let Some(f) = map.get("float") {
                    return f
                        .as_f64()
                        .map(Weight::Float)
                        .ok_or_else(|| Error::parse("`float` must be a number"));
                }
                let num = map.get("num").and_then(integer_field);
                let den = map.get("den").and_then(integer_field);
                match (num, den) {
                    (Some(_), Some(0)) => Err(Error::parse("zero denominator")),
                    (Some(n), Some(d)) => Ok(Weight::ratio(n, d)),
                    _ => Err(Error::parse("rational object needs integer `num` and `den`")),
                }
            }
            other => Err(Error::parse(format!("expected a number, got {other}"))),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        Weight::from_json(&v).map_err(D::Error::custom)
    }
}

/// Least common multiple of the denominators, used to scale exact weights to integers.
pub(crate) fn common_denominator<'a>(values: impl Iterator<Item = &'a Rational>) -> i128 {
    values.fold(1i128, |acc, r| acc.lcm(r.denom()))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_decimals_and_fractions() {
        assert_eq!("0.25".parse::<Weight>().unwrap(), Weight::ratio(1, 4));
        assert_eq!("7/4".parse::<Weight>().unwrap(), Weight::ratio(7, 4));
        assert_eq!("-3".parse::<Weight>().unwrap(), Weight::int(-3));
        assert_eq!("1.5e2".parse::<Weight>().unwrap(), Weight::int(150));
        assert_eq!("2.5e-1".parse::<Weight>().unwrap(), Weight::ratio(1, 4));
        assert!("inf".parse::<Weight>().unwrap().is_finite() == false);
        assert!("abc".parse::<Weight>().is_err());
        assert!("1/0".parse::<Weight>().is_err());
    }

    #[test]
    fn display_uses_p_over_q() {
        assert_eq!(Weight::ratio(7, 4).to_string(), "7/4");
        assert_eq!(Weight::int(70).to_string(), "70");
        assert_eq!(Weight::Infinite.to_string(), "inf");
        assert_eq!(Weight::Float(5.0).to_string(), "5");
        assert_eq!(Weight::Float(1.0 / 3.0).to_string(), "0.333333333333");
    }

    #[test]
    fn infinity_orders_above_everything() {
        assert!(Weight::Infinite > Weight::int(1_000_000));
        assert!(Weight::Infinite > Weight::Float(1e300));
        assert_eq!(Weight::Infinite + Weight::int(3), Weight::Infinite);
        assert_eq!(Weight::Infinite, Weight::Infinite);
    }

    #[test]
    fn division_conventions() {
        assert_eq!(Weight::int(7) / Weight::int(4), Weight::ratio(7, 4));
        assert_eq!(Weight::zero() / Weight::zero(), Weight::one());
        assert_eq!(Weight::Infinite / Weight::Infinite, Weight::one());
        assert_eq!(Weight::int(1) / Weight::zero(), Weight::Infinite);
    }

    #[test]
    fn json_round_trip() {
        for w in [Weight::int(5), Weight::ratio(3, 7), Weight::Float(2.5), Weight::Infinite] {
            let s = serde_json::to_string(&w).unwrap();
            let back: Weight = serde_json::from_str(&s).unwrap();
            assert_eq!(back, w);
            assert_eq!(back.is_exact(), w.is_exact());
        }
        let w: Weight = serde_json::from_str("0.1").unwrap();
        assert_eq!(w, Weight::ratio(1, 10));
        let w: Weight = serde_json::from_str(r#"{"num": 2, "den": 6}"#).unwrap();
        assert_eq!(w, Weight::ratio(1, 3));
    }

    #[test]
    fn float_tolerance_comparison() {
        let a = Weight::Float(1.0);
        let b = Weight::Float(1.0 + 1e-12);
        assert_eq!(a.cmp_eps(&b, DEFAULT_EPSILON), Ordering::Equal);
        assert_eq!(a.cmp_eps(&Weight::Float(1.1), DEFAULT_EPSILON), Ordering::Less);
    }
}
