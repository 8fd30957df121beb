//! Scalars of the max-plus semiring and of its dual completion.
//!
//! Finite values are exact rationals. [`Scalar`] is `ℚ ∪ {−∞}` with
//! `⊕ = max` and `⊗ = +`; [`UpperScalar`] additionally admits `+∞` and is
//! only produced by residuation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{CheckedAdd, Signed};
use thiserror::Error;

pub type Rational = Rational64;

/// Element of `ℚ ∪ {−∞}`.
///
/// The derived order puts `Bottom` below every finite value, which is the
/// natural order of the semiring (`a ≤ b ⟺ a ⊕ b = b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Bottom,
    Finite(Rational),
}

/// Element of `ℚ ∪ {−∞, +∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UpperScalar {
    Bottom,
    Finite(Rational),
    Top,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty scalar literal")]
    Empty,
    #[error("invalid scalar literal `{0}`")]
    Invalid(String),
    #[error("scalar literal `{0}` is out of range")]
    OutOfRange(String),
}

#[inline]
fn checked_sum(a: Rational, b: Rational) -> Rational {
    a.checked_add(&b)
        .expect("max-plus product overflowed the 64-bit rational range")
}

impl Scalar {
    /// Neutral element of `⊕`.
    pub const ZERO: Scalar = Scalar::Bottom;
    /// Neutral element of `⊗`.
    pub const ONE: Scalar = Scalar::Finite(Rational::new_raw(0, 1));

    pub fn int(v: i64) -> Scalar {
        Scalar::Finite(Rational::from_integer(v))
    }

    pub fn ratio(numer: i64, denom: i64) -> Scalar {
        Scalar::Finite(Rational::new(numer, denom))
    }

    #[inline]
    pub fn is_bottom(self) -> bool {
        matches!(self, Scalar::Bottom)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        !self.is_bottom()
    }

    pub fn value(self) -> Option<Rational> {
        match self {
            Scalar::Bottom => None,
            Scalar::Finite(v) => Some(v),
        }
    }

    /// `a ⊕ b = max(a, b)`.
    #[inline]
    pub fn plus(self, other: Scalar) -> Scalar {
        self.max(other)
    }

    /// `a ⊗ b = a + b`, with `−∞` absorbing.
    #[inline]
    pub fn times(self, other: Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(checked_sum(a, b)),
            _ => Scalar::Bottom,
        }
    }

    /// `a ∧ b = min(a, b)`.
    #[inline]
    pub fn meet(self, other: Scalar) -> Scalar {
        self.min(other)
    }

    /// Max-plus inverse `a⁻¹`, with the convention `(−∞)⁻¹ = +∞`.
    pub fn inverse(self) -> UpperScalar {
        match self {
            Scalar::Bottom => UpperScalar::Top,
            Scalar::Finite(v) => UpperScalar::Finite(-v),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::Finite(v)
    }
}

impl UpperScalar {
    pub const TOP: UpperScalar = UpperScalar::Top;

    pub fn is_top(self) -> bool {
        matches!(self, UpperScalar::Top)
    }

    /// Min-plus product `self ⊗' rhs`. `+∞` wins over `−∞`, so dividing by
    /// `𝟘` leaves the result unconstrained.
    #[inline]
    pub fn times_dual(self, rhs: UpperScalar) -> UpperScalar {
        match (self, rhs) {
            (UpperScalar::Top, _) | (_, UpperScalar::Top) => UpperScalar::Top,
            (UpperScalar::Bottom, _) | (_, UpperScalar::Bottom) => UpperScalar::Bottom,
            (UpperScalar::Finite(a), UpperScalar::Finite(b)) => {
                UpperScalar::Finite(checked_sum(a, b))
            }
        }
    }

    /// Max-plus product restricted to operands that are never `+∞` on the
    /// right; a `+∞` on either side is a contract violation.
    pub fn times_scalar(self, rhs: Scalar) -> UpperScalar {
        match (self, rhs) {
            (UpperScalar::Top, _) => panic!("+inf may not enter a max-plus product"),
            (UpperScalar::Bottom, _) | (_, Scalar::Bottom) => UpperScalar::Bottom,
            (UpperScalar::Finite(a), Scalar::Finite(b)) => UpperScalar::Finite(checked_sum(a, b)),
        }
    }

    pub fn meet(self, other: UpperScalar) -> UpperScalar {
        self.min(other)
    }

    /// `None` for `+∞`.
    pub fn to_scalar(self) -> Option<Scalar> {
        match self {
            UpperScalar::Bottom => Some(Scalar::Bottom),
            UpperScalar::Finite(v) => Some(Scalar::Finite(v)),
            UpperScalar::Top => None,
        }
    }

    /// Replaces `+∞` by the finite representative `cap`.
    pub fn clamp(self, cap: Rational) -> Scalar {
        self.to_scalar().unwrap_or(Scalar::Finite(cap))
    }
}

impl From<Scalar> for UpperScalar {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Bottom => UpperScalar::Bottom,
            Scalar::Finite(v) => UpperScalar::Finite(v),
        }
    }
}

impl PartialEq<UpperScalar> for Scalar {
    fn eq(&self, other: &UpperScalar) -> bool {
        UpperScalar::from(*self) == *other
    }
}

impl PartialOrd<UpperScalar> for Scalar {
    fn partial_cmp(&self, other: &UpperScalar) -> Option<Ordering> {
        UpperScalar::from(*self).partial_cmp(other)
    }
}

/// Formats a rational exactly: integers plainly, terminating fractions as
/// decimals, everything else as `p/q`.
pub fn format_rational(v: &Rational) -> String {
    if v.is_integer() {
        return v.numer().to_string();
    }
    let mut den = *v.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", v.numer(), v.denom());
    }
    let digits = twos.max(fives);
    let Some(scale) = 10i64.checked_pow(digits) else {
        return format!("{}/{}", v.numer(), v.denom());
    };
    let Some(scaled) = (v * Rational::from_integer(scale))
        .to_integer()
        .checked_abs()
    else {
        return format!("{}/{}", v.numer(), v.denom());
    };
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let sign = if v.is_negative() { "-" } else { "" };
    format!(
        "{sign}{int_part}.{frac_part:0width$}",
        width = digits as usize
    )
}

/// Parses an exact rational from `-12`, `3.25`, `+0.5` or `7/3`.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    let invalid = || ScalarParseError::Invalid(t.to_string());
    let range = || ScalarParseError::OutOfRange(t.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| invalid())?;
        let q: i64 = q.trim().parse().map_err(|_| invalid())?;
        if q == 0 {
            return Err(invalid());
        }
        return Ok(Rational::new(p, q));
    }
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (int_digits, frac_digits) = body.split_once('.').unwrap_or((body, ""));
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if int_digits.is_empty() || !all_digits(int_digits) || !all_digits(frac_digits) {
        return Err(invalid());
    }
    if body.contains('.') && frac_digits.is_empty() {
        return Err(invalid());
    }
    if frac_digits.len() > 12 {
        return Err(range());
    }
    let scale = 10i64.pow(frac_digits.len() as u32);
    let mut numer: i64 = int_digits.parse().map_err(|_| range())?;
    numer = numer.checked_mul(scale).ok_or_else(range)?;
    if !frac_digits.is_empty() {
        let frac: i64 = frac_digits.parse().map_err(|_| range())?;
        numer = numer.checked_add(frac).ok_or_else(range)?;
    }
    if negative {
        numer = -numer;
    }
    Ok(Rational::new(numer, scale))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Bottom => f.write_str("-inf"),
            Scalar::Finite(v) => f.write_str(&format_rational(v)),
        }
    }
}

impl fmt::Display for UpperScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperScalar::Bottom => f.write_str("-inf"),
            UpperScalar::Finite(v) => f.write_str(&format_rational(v)),
            UpperScalar::Top => f.write_str("+inf"),
        }
    }
}

impl FromStr for UpperScalar {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "-inf" => Ok(UpperScalar::Bottom),
            "+inf" | "inf" => Ok(UpperScalar::Top),
            other => parse_rational(other).map(UpperScalar::Finite),
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<UpperScalar>()? {
            UpperScalar::Top => Err(ScalarParseError::Invalid(s.trim().to_string())),
            other => Ok(other.to_scalar().expect("not top")),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ZERO
    }
}
