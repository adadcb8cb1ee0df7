//! Arithmetic kernel shared by the exact and floating-point code paths.
//!
//! Every input is held as an exact [`Rational`]. Computations are written once
//! against [`Scalar`] and instantiated either with `Rational` (bit-reproducible,
//! strict comparisons are meaningful) or with `f64` (fast sweeps).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input, Result};

pub type Rational = num_rational::BigRational;

pub trait Scalar: Clone + Debug + PartialOrd + Signed {
    fn from_rational(r: &Rational) -> Self;
    fn from_usize(n: usize) -> Self;
    fn to_f64(&self) -> f64;

    fn powi(&self, exp: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn from_usize(n: usize) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_usize(n: usize) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator or denominator: scale both down before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<Rational> {
    match Rational::from_float(x) {
        Some(r) => Ok(r),
        None => input(format!("non-finite number {x}")),
    }
}

/// Parses `3`, `-0.125`, `1/25` or `2.5e-2` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return input("empty number");
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return input(format!("zero denominator in `{s}`"));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| crate::Error::Input(format!("bad exponent in `{s}`")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return input(format!("not a number: `{s}`"));
    }
    let all: String = format!("{whole}{frac}");
    let numer: BigInt = all.parse().unwrap_or_else(|_| BigInt::zero());
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(numer);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Shortest faithful text for a rational: an integer, a terminating decimal,
/// or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d.is_one() {
        let places = twos.max(fives);
        let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
        let digits = scaled.to_integer().abs().to_string();
        let digits = format!("{digits:0>width$}", width = places + 1);
        let (w, f) = digits.split_at(digits.len() - places);
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}{w}.{f}")
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn floor_to_usize(r: &Rational) -> Option<usize> {
    r.floor().to_integer().to_usize()
}

pub(crate) fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}
