//! Exact arithmetic in `Q(i)[√2]`.
//!
//! Every matrix element produced by the ansatz operators is an integer
//! combination of `1`, `i`, `√2` and `i√2`, so a single fixed quadratic
//! extension of the Gaussian rationals is enough for all exact linear algebra
//! in this crate.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Gaussian rational `re + im·i`. Internal building block of [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
struct Gaussian {
    re: Rational,
    im: Rational,
}

impl Gaussian {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn inv(&self) -> Gaussian {
        let norm = &self.re * &self.re + &self.im * &self.im;
        Gaussian { re: &self.re / &norm, im: -(&self.im / &norm) }
    }
}

/// An element `(re + im·i) + (re_s2 + im_s2·i)·√2` of `Q(i)[√2]`.
///
/// The representation is unique, so equality and hashing are componentwise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: Rational,
    im: Rational,
    re_s2: Rational,
    im_s2: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational, re_s2: Rational, im_s2: Rational) -> Self {
        Scalar { re, im, re_s2, im_s2 }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar { re: r, ..Scalar::default() }
    }

    /// `num/den` as a real rational scalar. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        Scalar { im: Rational::one(), ..Scalar::default() }
    }

    pub fn sqrt2() -> Self {
        Scalar { re_s2: Rational::one(), ..Scalar::default() }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn re_s2(&self) -> &Rational {
        &self.re_s2
    }

    pub fn im_s2(&self) -> &Rational {
        &self.im_s2
    }

    pub fn components(&self) -> [&Rational; 4] {
        [&self.re, &self.im, &self.re_s2, &self.im_s2]
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.re_s2.is_zero() && self.im_s2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero() && self.re_s2.is_zero() && self.im_s2.is_zero()
    }

    /// The value as a plain rational, if it has no `i` or `√2` part.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.im.is_zero() && self.re_s2.is_zero() && self.im_s2.is_zero()).then_some(&self.re)
    }

    fn split(&self) -> (Gaussian, Gaussian) {
        (
            Gaussian { re: self.re.clone(), im: self.im.clone() },
            Gaussian { re: self.re_s2.clone(), im: self.im_s2.clone() },
        )
    }

    fn join(a: Gaussian, b: Gaussian) -> Self {
        Scalar { re: a.re, im: a.im, re_s2: b.re, im_s2: b.im }
    }

    /// Complex conjugation; `√2` is fixed.
    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -&self.im, re_s2: self.re_s2.clone(), im_s2: -&self.im_s2 }
    }

    /// Multiplicative inverse via `(a + b√2)⁻¹ = (a − b√2) / (a² − 2b²)`.
    ///
    /// The norm `a² − 2b²` cannot vanish for nonzero input because `√2 ∉ Q(i)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b) = self.split();
        let two = Gaussian { re: Rational::from_integer(2.into()), im: Rational::zero() };
        let norm = a.mul(&a).sub(&two.mul(&b.mul(&b)));
        debug_assert!(!norm.is_zero());
        let ninv = norm.inv();
        let neg_b = Gaussian { re: -b.re, im: -b.im };
        Ok(Scalar::join(a.mul(&ninv), neg_b.mul(&ninv)))
    }

    /// Multiply by a machine integer.
    pub fn scale_int(&self, k: i64) -> Self {
        if k == 1 {
            return self.clone();
        }
        let k = Rational::from_integer(BigInt::from(k));
        Scalar { re: &self.re * &k, im: &self.im * &k, re_s2: &self.re_s2 * &k, im_s2: &self.im_s2 * &k }
    }

    /// Multiply by `√2`.
    pub fn mul_sqrt2(&self) -> Self {
        let two = Rational::from_integer(2.into());
        Scalar { re: &self.re_s2 * &two, im: &self.im_s2 * &two, re_s2: self.re.clone(), im_s2: self.im.clone() }
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        Scalar { re: -&self.im, im: self.re.clone(), re_s2: -&self.im_s2, im_s2: self.re_s2.clone() }
    }

    /// Encode each component as a `num/den` string.
    pub fn to_strings(&self) -> [String; 4] {
        self.components().map(rational_to_string)
    }

    pub fn from_strings(parts: [&str; 4]) -> Result<Self> {
        let [a, b, c, d] = parts;
        Ok(Scalar {
            re: parse_rational(a)?,
            im: parse_rational(b)?,
            re_s2: parse_rational(c)?,
            im_s2: parse_rational(d)?,
        })
    }
}

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            re_s2: &self.re_s2 + &o.re_s2,
            im_s2: &self.im_s2 + &o.im_s2,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        self.im += &o.im;
        self.re_s2 += &o.re_s2;
        self.im_s2 += &o.im_s2;
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            re_s2: &self.re_s2 - &o.re_s2,
            im_s2: &self.im_s2 - &o.im_s2,
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        self.im -= &o.im;
        self.re_s2 -= &o.re_s2;
        self.im_s2 -= &o.im_s2;
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2 over Q(i)
        let (a, b) = self.split();
        let (c, d) = o.split();
        let bd = b.mul(&d);
        let two_bd = bd.add(&bd);
        Scalar::join(a.mul(&c).add(&two_bd), a.mul(&d).add(&b.mul(&c)))
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im, re_s2: -&self.re_s2, im_s2: -&self.im_s2 }
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
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts = [(&self.re, ""), (&self.im, "i"), (&self.re_s2, "√2"), (&self.im_s2, "i√2")];
        let mut first = true;
        for (r, unit) in parts {
            if r.is_zero() {
                continue;
            }
            let neg = r.is_negative();
            let mag = r.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if unit.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{unit}")?;
            } else {
                write!(f, "{mag}{unit}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}
