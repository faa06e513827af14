//! Amplitude scalars.
//!
//! A [`Scalar`] is either exact (a complex number with arbitrary-precision
//! rational parts) or numeric (a binary64 complex). Arithmetic between an
//! exact and a numeric scalar promotes to numeric.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ExactComplex = Complex<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Exact,
    Numeric,
}

impl ScalarKind {
    /// Kind of the result of combining values of kinds `self` and `other`.
    pub fn join(self, other: ScalarKind) -> ScalarKind {
        if self == ScalarKind::Exact && other == ScalarKind::Exact {
            ScalarKind::Exact
        } else {
            ScalarKind::Numeric
        }
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Exact => f.write_str("exact"),
            ScalarKind::Numeric => f.write_str("numeric"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(ExactComplex),
    Numeric(Complex64),
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Ratio::to_f64 handles numerators and denominators beyond f64 range.
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn exact_to_c64(z: &ExactComplex) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

impl Scalar {
    pub fn zero(kind: ScalarKind) -> Scalar {
        match kind {
            ScalarKind::Exact => Scalar::Exact(ExactComplex::zero()),
            ScalarKind::Numeric => Scalar::Numeric(Complex64::zero()),
        }
    }

    pub fn one(kind: ScalarKind) -> Scalar {
        match kind {
            ScalarKind::Exact => Scalar::Exact(ExactComplex::one()),
            ScalarKind::Numeric => Scalar::Numeric(Complex64::one()),
        }
    }

    pub fn int(value: i64) -> Scalar {
        Scalar::Exact(ExactComplex::new(
            BigRational::from_integer(BigInt::from(value)),
            BigRational::zero(),
        ))
    }

    /// Exact real `numer/denom`. Panics if `denom` is zero.
    pub fn ratio(numer: i64, denom: i64) -> Scalar {
        assert!(denom != 0, "zero denominator");
        Scalar::Exact(ExactComplex::new(
            BigRational::new(numer.into(), denom.into()),
            BigRational::zero(),
        ))
    }

    pub fn exact_complex(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Exact(ExactComplex::new(re, im))
    }

    pub fn real(value: f64) -> Scalar {
        Scalar::Numeric(Complex64::new(value, 0.0))
    }

    pub fn complex(re: f64, im: f64) -> Scalar {
        Scalar::Numeric(Complex64::new(re, im))
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Exact(_) => ScalarKind::Exact,
            Scalar::Numeric(_) => ScalarKind::Numeric,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_zero(),
            Scalar::Numeric(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => exact_to_c64(z),
            Scalar::Numeric(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&ExactComplex> {
        match self {
            Scalar::Exact(z) => Some(z),
            Scalar::Numeric(_) => None,
        }
    }

    /// Converts to `kind`. Numeric values cannot become exact.
    pub fn to_kind(&self, kind: ScalarKind) -> Result<Scalar> {
        match (self, kind) {
            (Scalar::Exact(_), ScalarKind::Exact) | (Scalar::Numeric(_), ScalarKind::Numeric) => {
                Ok(self.clone())
            }
            (Scalar::Exact(z), ScalarKind::Numeric) => Ok(Scalar::Numeric(exact_to_c64(z))),
            (Scalar::Numeric(_), ScalarKind::Exact) => Err(Error::KindMismatch),
        }
    }

    /// Magnitude as binary64.
    pub fn norm(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact(z) => Scalar::Exact(exact_inv(z)),
            Scalar::Numeric(z) => Scalar::Numeric(z.inv()),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }
}

pub(crate) fn exact_inv(z: &ExactComplex) -> ExactComplex {
    if z.im.is_zero() {
        return ExactComplex::new(z.re.recip(), BigRational::zero());
    }
    let norm_sqr = &z.re * &z.re + &z.im * &z.im;
    ExactComplex::new(&z.re / &norm_sqr, -(&z.im / &norm_sqr))
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact_mul(a, b)),
            _ => Scalar::Numeric(self.to_c64() * rhs.to_c64()),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Numeric(self.to_c64() + rhs.to_c64()),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Numeric(self.to_c64() - rhs.to_c64()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(-z.clone()),
            Scalar::Numeric(z) => Scalar::Numeric(-*z),
        }
    }
}

/// Product that skips the imaginary cross terms for real operands.
pub(crate) fn exact_mul(a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
    if a.im.is_zero() && b.im.is_zero() {
        ExactComplex::new(&a.re * &b.re, BigRational::zero())
    } else {
        a * b
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => {
                if z.im.is_zero() {
                    write!(f, "{}", z.re)
                } else if z.re.is_zero() {
                    write!(f, "{}i", z.im)
                } else if z.im.is_negative() {
                    write!(f, "{}-{}i", z.re, -z.im.clone())
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
            Scalar::Numeric(z) => {
                if z.im == 0.0 {
                    write!(f, "{:?}", z.re)
                } else {
                    write!(f, "{:?}{:+?}i", z.re, z.im)
                }
            }
        }
    }
}

/// One real part of an amplitude as read from a token.
#[derive(Debug, Clone, PartialEq)]
pub enum RealToken {
    Exact(BigRational),
    Numeric(f64),
}

impl RealToken {
    pub fn kind(&self) -> ScalarKind {
        match self {
            RealToken::Exact(_) => ScalarKind::Exact,
            RealToken::Numeric(_) => ScalarKind::Numeric,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealToken::Exact(r) => rational_to_f64(r),
            RealToken::Numeric(x) => *x,
        }
    }
}

/// Parses one amplitude token.
///
/// Grammar: integers (`-3`), fractions (`p/q`), decimals (`0.25`, `1e-3`), and
/// `±a/sqrt(b)` with positive integers `a`, `b`. Integers and fractions are
/// exact; decimals and square-root forms are numeric.
pub fn parse_real_token(token: &str) -> Result<RealToken> {
    let bad = || Error::MalformedDocument(format!("bad amplitude token {token:?}"));
    let t = token.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, t[1..].trim_start()),
        b'+' => (false, t[1..].trim_start()),
        _ => (false, t),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let sign = if negative { -1.0 } else { 1.0 };

    if body.contains("sqrt") {
        let (numer, rest) = body.split_once('/').ok_or_else(bad)?;
        let radicand = rest
            .trim()
            .strip_prefix("sqrt(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let a: u64 = parse_positive(numer).ok_or_else(bad)?;
        let b: u64 = parse_positive(radicand).ok_or_else(bad)?;
        return Ok(RealToken::Numeric(sign * a as f64 / (b as f64).sqrt()));
    }

    if let Some((p, q)) = body.split_once('/') {
        let p: BigInt = parse_unsigned_int(p).ok_or_else(bad)?;
        let q: BigInt = parse_unsigned_int(q).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(bad());
        }
        let r = BigRational::new(p, q);
        return Ok(RealToken::Exact(if negative { -r } else { r }));
    }

    if body.contains(['.', 'e', 'E']) {
        if !body
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '-' | '+'))
        {
            return Err(bad());
        }
        let x: f64 = body.parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(bad());
        }
        return Ok(RealToken::Numeric(sign * x));
    }

    let n = parse_unsigned_int(body).ok_or_else(bad)?;
    let r = BigRational::from_integer(n);
    Ok(RealToken::Exact(if negative { -r } else { r }))
}

fn parse_unsigned_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_positive(s: &str) -> Option<u64> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&v| v > 0)
}

/// Token text for a real part, in a form [`parse_real_token`] reads back to
/// the same value and kind.
pub fn real_token_text(token: &RealToken) -> String {
    match token {
        RealToken::Exact(r) => r.to_string(),
        RealToken::Numeric(x) => {
            let s = format!("{x:?}");
            if s.contains(['.', 'e', 'E']) {
                s
            } else {
                format!("{s}.0")
            }
        }
    }
}

/// Builds a scalar from real and imaginary tokens, promoting to numeric when
/// either part is numeric.
pub fn scalar_from_parts(re: RealToken, im: RealToken) -> Scalar {
    match (re, im) {
        (RealToken::Exact(re), RealToken::Exact(im)) => Scalar::Exact(ExactComplex::new(re, im)),
        (re, im) => Scalar::Numeric(Complex64::new(re.to_f64(), im.to_f64())),
    }
}
