//! Exact Gaussian-rational scalars.
//!
//! A `Scalar` is a complex number whose real and imaginary parts are
//! arbitrary-precision rationals. Every arithmetic operation is exact; the
//! crate contains no floating point on any solution path. `BigRational`
//! keeps each component in lowest terms with a positive denominator, so
//! structural equality is semantic equality.
//!
//! The text form accepted by [`Scalar::parse`] and produced by `Display` is
//!
//! ```text
//! scalar   := rational | rational ('+'|'-') urational 'i'
//! rational := ['+'|'-'] digits ['/' digits]
//! ```
//!
//! in lowest terms with the sign on the numerator only, e.g. `3`, `-1/2`,
//! `1/2+3/4i`, `0-1i`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        Scalar { re, im: Rational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Exact ratio `n/d`. Panics when `d = 0`; intended for literals in
    /// fixtures and tests.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "Scalar::ratio: zero denominator");
        Scalar::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn i() -> Self {
        Scalar { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|^2 = re^2 + im^2, an exact nonnegative rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero; callers test first.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "Scalar::inv: division by zero");
        Scalar { re: &self.re / &n, im: -(&self.im / &n) }
    }

    /// Total order on Gaussian rationals by (re, im), used only to make
    /// reported invariant lists deterministic; it is not compatible with
    /// multiplication.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        text.parse()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_integer(1)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self * rhs.inv()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl<'a> Add for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let err = |reason: &str| Error::Parse { text: text.to_string(), reason: reason.into() };
        let s = text.trim();
        if s.is_empty() {
            return Err(err("empty scalar"));
        }
        if let Some(body) = s.strip_suffix('i') {
            // Split "re±im" at the last sign that is not a leading sign.
            let body = body.trim_end();
            let bytes = body.as_bytes();
            let mut split = None;
            for pos in (1..bytes.len()).rev() {
                let c = bytes[pos] as char;
                if (c == '+' || c == '-') && bytes[pos - 1] as char != '/' {
                    split = Some(pos);
                    break;
                }
            }
            let pos = split.ok_or_else(|| err("complex form must be re+imi or re-imi"))?;
            let re = parse_rational(body[..pos].trim(), text)?;
            let sign = bytes[pos] as char;
            let im_text = body[pos + 1..].trim();
            if im_text.starts_with('+') || im_text.starts_with('-') {
                return Err(err("imaginary part carries its sign in the separator"));
            }
            let im = parse_rational(im_text, text)?;
            let im = if sign == '-' { -im } else { im };
            Ok(Scalar::new(re, im))
        } else {
            Ok(Scalar::from_rational(parse_rational(s, text)?))
        }
    }
}

fn parse_rational(part: &str, whole: &str) -> Result<Rational, Error> {
    let err = |reason: String| Error::Parse { text: whole.to_string(), reason };
    let part = part.trim();
    if part.is_empty() {
        return Err(err("empty rational component".into()));
    }
    let (numer_text, denom_text) = match part.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (part, None),
    };
    let numer: BigInt = numer_text
        .parse()
        .map_err(|_| err(format!("invalid integer {numer_text:?}")))?;
    let denom: BigInt = match denom_text {
        Some(d) => {
            if d.starts_with('+') || d.starts_with('-') {
                return Err(err("sign belongs on the numerator".into()));
            }
            d.parse().map_err(|_| err(format!("invalid integer {d:?}")))?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err("zero denominator".into()));
    }
    Ok(Rational::new(numer, denom))
}
