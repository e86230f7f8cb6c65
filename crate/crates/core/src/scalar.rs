//! Exact scalars: arbitrary-precision rationals and the ordered field ℚ(√2).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Sign of an exact real number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_ordering(ord: Ordering) -> Self {
        match ord {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

/// Field element used by [`crate::tensor::DenseTensor`] and the linear algebra helpers.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: Rational) -> Self;
    fn sign(&self) -> Sign;
    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;
}

/// An exact rational number, always stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, Error> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    /// Convenience constructor for small literals. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("zero denominator")
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational, Error> {
        Rational::one().checked_div(self)
    }

    pub fn signum(&self) -> Sign {
        Sign::of_ordering(self.0.numer().sign().cmp(&num_bigint::Sign::NoSign))
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("malformed rational {s:?}"),
        };
        let s = s.trim();
        match s.split_once('/') {
            None => parse_int(s).map(Rational::from_bigint).ok_or_else(bad),
            Some((n, d)) => {
                let n = parse_int(n).ok_or_else(bad)?;
                let d = parse_int(d).ok_or_else(bad)?;
                Rational::new(n, d)
            }
        }
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $trait::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Rational, Add, add, |a, b| Rational(&a.0 + &b.0));
forward_binop!(Rational, Sub, sub, |a, b| Rational(&a.0 - &b.0));
forward_binop!(Rational, Mul, mul, |a, b| Rational(&a.0 * &b.0));
forward_binop!(Rational, Div, div, |a, b| a
    .checked_div(b)
    .expect("rational division by zero"));

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        let mut acc = Rational::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn sign(&self) -> Sign {
        self.signum()
    }
    fn inverse(&self) -> Option<Self> {
        self.recip().ok()
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// An element `a + b·√2` of ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadScalar {
    pub a: Rational,
    pub b: Rational,
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadScalar { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QuadScalar {
            a,
            b: Rational::zero(),
        }
    }

    pub fn sqrt2() -> Self {
        QuadScalar::new(Rational::zero(), Rational::one())
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conj(&self) -> Self {
        QuadScalar::new(self.a.clone(), -&self.b)
    }

    /// Field norm `a² − 2b²`, the product with the conjugate.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::int(2) * &self.b * &self.b
    }

    /// Exact sign of `a + b√2` as a real number.
    pub fn sign(&self) -> Sign {
        let sa = self.a.signum();
        let sb = self.b.signum();
        match (sa, sb) {
            (s, Sign::Zero) => s,
            (Sign::Zero, s) => s,
            (s, t) if s == t => s,
            _ => {
                // Opposite signs: the term with the larger square wins.
                let a2 = &self.a * &self.a;
                let b2 = Rational::int(2) * &self.b * &self.b;
                if a2 > b2 {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn checked_inv(&self) -> Result<Self, Error> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(QuadScalar::new(&c.a / &n, &c.b / &n))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * std::f64::consts::SQRT_2
    }
}

impl From<Rational> for QuadScalar {
    fn from(r: Rational) -> Self {
        QuadScalar::rational(r)
    }
}

impl From<i64> for QuadScalar {
    fn from(n: i64) -> Self {
        QuadScalar::rational(Rational::int(n))
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            if self.b.is_negative() {
                write!(f, "{} - {} r2", self.a, -&self.b)
            } else {
                write!(f, "{} + {} r2", self.a, self.b)
            }
        }
    }
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadScalar {
    type Err = Error;

    /// Accepts `p/q`, `r/s r2`, `p/q + r/s r2` or `p/q - r/s r2`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let irrational = |t: &str| -> Result<Rational, Error> {
            match t.trim().strip_suffix("r2") {
                Some(coef) if coef.ends_with(' ') || coef.is_empty() => {
                    let coef = coef.trim();
                    if coef.is_empty() {
                        Ok(Rational::one())
                    } else {
                        coef.parse()
                    }
                }
                _ => Err(Error::Parse {
                    line: 0,
                    message: format!("malformed quadratic scalar {s:?}"),
                }),
            }
        };
        if let Some((a, b)) = s.split_once(" + ") {
            return Ok(QuadScalar::new(a.parse()?, irrational(b)?));
        }
        if let Some((a, b)) = s.split_once(" - ") {
            return Ok(QuadScalar::new(a.parse()?, -irrational(b)?));
        }
        if s.ends_with("r2") {
            return Ok(QuadScalar::new(Rational::zero(), irrational(s)?));
        }
        Ok(QuadScalar::rational(s.parse()?))
    }
}

forward_binop!(QuadScalar, Add, add, |x, y| QuadScalar::new(
    &x.a + &y.a,
    &x.b + &y.b
));
forward_binop!(QuadScalar, Sub, sub, |x, y| QuadScalar::new(
    &x.a - &y.a,
    &x.b - &y.b
));
forward_binop!(QuadScalar, Mul, mul, |x, y| QuadScalar::new(
    &x.a * &y.a + Rational::int(2) * &x.b * &y.b,
    &x.a * &y.b + &x.b * &y.a
));
forward_binop!(QuadScalar, Div, div, |x, y| x * y
    .checked_inv()
    .expect("division by zero in Q(sqrt 2)"));

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::new(-self.a, -self.b)
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::new(-&self.a, -&self.b)
    }
}

impl Zero for QuadScalar {
    fn zero() -> Self {
        QuadScalar::default()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadScalar {
    fn one() -> Self {
        QuadScalar::rational(Rational::one())
    }
}

impl Sum for QuadScalar {
    fn sum<I: Iterator<Item = QuadScalar>>(iter: I) -> Self {
        iter.fold(QuadScalar::zero(), |acc, x| acc + x)
    }
}

impl Scalar for QuadScalar {
    fn from_rational(r: Rational) -> Self {
        QuadScalar::rational(r)
    }
    fn sign(&self) -> Sign {
        QuadScalar::sign(self)
    }
    fn inverse(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
}
