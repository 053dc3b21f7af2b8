//! Exact scalars in ℚ or ℚ(i).
//!
//! Every scalar carries a real and an imaginary rational part. In
//! [`FieldMode::Rational`] computations the imaginary part is always zero;
//! the representation is shared so that eigenvalues of rational matrices
//! (which may be Gaussian) need no separate type.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The exact coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    #[default]
    Rational,
    GaussianRational,
}

impl FieldMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldMode::Rational => "rational",
            FieldMode::GaussianRational => "gaussian_rational",
        }
    }

    pub fn admits(self, s: &Scalar) -> bool {
        self == FieldMode::GaussianRational || s.is_real()
    }
}

impl FromStr for FieldMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "rational" => Ok(FieldMode::Rational),
            "gaussian_rational" => Ok(FieldMode::GaussianRational),
            other => Err(Error::Parse(format!("unknown field mode `{other}`"))),
        }
    }
}

/// An element of ℚ(i), stored as two reduced fractions.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_i64(1)
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::real(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
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
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign of a real scalar; `None` when the imaginary part is nonzero.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        Some(self.re.cmp(&BigRational::zero()))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// Exact square root in ℚ(i) when one exists.
    ///
    /// For `z = a + bi`, a root `x + yi` satisfies `x² = (a + |z|)/2` and
    /// `y² = (|z| - a)/2`, so a root exists iff `|z|` and both of those are
    /// rational squares.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x = rational_sqrt(&((&self.re + &modulus) / &two))?;
        let y = rational_sqrt(&((&modulus - &self.re) / &two))?;
        // pick signs so that 2xy = b
        let y = if self.im.is_negative() { -y } else { y };
        let cand = Scalar { re: x, im: y };
        if &(&cand * &cand) == self {
            Some(cand)
        } else {
            None
        }
    }

    /// Canonical ordering used for sorting spectra: by real, then imaginary part.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Parse a rational `p/q` or integer `p`.
    fn parse_rational(s: &str) -> Result<BigRational, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed rational `{s}`"));
        if s.is_empty() {
            return Err(bad());
        }
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for direct conversion
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        if shift >= 0 {
            (r / BigRational::from_integer(BigInt::one() << shift as usize))
                .to_f64()
                .unwrap_or(f64::NAN)
                * 2f64.powi(shift as i32)
        } else {
            (r * BigRational::from_integer(BigInt::one() << (-shift) as usize))
                .to_f64()
                .unwrap_or(f64::NAN)
                * 2f64.powi(shift as i32)
        }
    })
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fraction convergents).
pub fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = v - v.floor();
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Scalar {
    /// `p/q` for real values, `p/q+r/s*i` otherwise; signs live on numerators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else {
            write!(f, "{}+{}*i", fmt_rational(&self.re), fmt_rational(&self.im))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts the canonical encoding plus a few lenient spellings:
    /// `3`, `-1/2`, `1/2+-3/4*i`, `1/2-3/4*i`, `i`, `-2*i`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if !t.ends_with('i') {
            return Ok(Scalar::real(Scalar::parse_rational(&t)?));
        }
        let body = &t[..t.len() - 1];
        let body = body.strip_suffix('*').unwrap_or(body);
        // split real and imaginary parts at the last +/- that is not leading
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !body[..i].ends_with(['+', '-']))
            .map(|(i, _)| i)
            .next_back();
        let (re_part, im_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let im_part = im_part.strip_prefix('+').unwrap_or(im_part);
        let im = match im_part {
            "" => BigRational::one(),
            "-" => -BigRational::one(),
            p => {
                let p = p.strip_prefix("+").unwrap_or(p);
                if p == "-" {
                    -BigRational::one()
                } else {
                    Scalar::parse_rational(p)?
                }
            }
        };
        let re = if re_part.is_empty() { BigRational::zero() } else { Scalar::parse_rational(re_part)? };
        Ok(Scalar { re, im })
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::real(r)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::real(&self.re * &o.re);
        }
        Scalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like the rational type underneath.
    fn div(self, o: &Scalar) -> Scalar {
        if o.im.is_zero() {
            return Scalar { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv().expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { self.$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_uses_numerator_signs() {
        assert_eq!(Scalar::ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(Scalar::from_i64(4).to_string(), "4/1");
        let z = Scalar::new(BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 4.into()));
        assert_eq!(z.to_string(), "1/2+-3/4*i");
    }

    #[test]
    fn parse_accepts_canonical_and_lenient_forms() {
        let cases = [
            ("3", Scalar::from_i64(3)),
            ("-1/2", Scalar::ratio(-1, 2)),
            ("1/2+-3/4*i", Scalar::new(BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 4.into()))),
            ("1/2-3/4*i", Scalar::new(BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 4.into()))),
            ("i", Scalar::i()),
            ("-2*i", Scalar::gaussian(0, -2)),
            ("0/1+1/1*i", Scalar::i()),
            ("-1-i", Scalar::gaussian(-1, -1)),
        ];
        for (s, want) in cases {
            assert_eq!(s.parse::<Scalar>().unwrap(), want, "{s}");
        }
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn gaussian_arithmetic() {
        let a = Scalar::gaussian(1, 2);
        let b = Scalar::gaussian(3, -1);
        assert_eq!(&a * &b, Scalar::gaussian(5, 5));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(Scalar::i().pow(2), Scalar::from_i64(-1));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Scalar::from_i64(-4).sqrt(), Some(Scalar::gaussian(0, 2)));
        assert_eq!(Scalar::ratio(9, 4).sqrt(), Some(Scalar::ratio(3, 2)));
        // (1+2i)^2 = -3+4i
        let r = Scalar::gaussian(-3, 4).sqrt().unwrap();
        assert_eq!(&r * &r, Scalar::gaussian(-3, 4));
        let r = Scalar::gaussian(-3, -4).sqrt().unwrap();
        assert_eq!(&r * &r, Scalar::gaussian(-3, -4));
        assert_eq!(Scalar::from_i64(2).sqrt(), None);
        assert_eq!(Scalar::i().sqrt(), None);
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.75, 1000), Some(BigRational::new(3.into(), 4.into())));
        assert_eq!(rationalize(-2.0 / 3.0, 1000), Some(BigRational::new((-2).into(), 3.into())));
    }
}
