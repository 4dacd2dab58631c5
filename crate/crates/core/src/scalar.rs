//! Exact rational scalars.
//!
//! A [`Scalar`] is a rational number kept in lowest terms with a positive
//! denominator. Values whose numerator and denominator both fit in an `i64`
//! are stored inline and combined through `i128` intermediates; anything
//! larger is promoted to a [`BigRational`]. The representation is canonical
//! (the small form is used whenever it fits), so derived equality and hashing
//! agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    /// `num / den`, `den > 0`, `gcd(num, den) = 1`, neither equal to `i64::MIN`.
    Small(i64, i64),
    /// Only used when the value does not fit the small form.
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Scalar(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        if n == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(n)));
        }
        Scalar(Repr::Small(n, 1))
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        if n == 0 {
            return Self::zero();
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if fits(n) && fits(d) {
            Scalar(Repr::Small(n as i64, d as i64))
        } else {
            Scalar(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    /// Canonicalizes a big rational (demoting to the small form when possible).
    pub fn from_big(r: BigRational) -> Self {
        let r = if r.denom().is_negative() {
            BigRational::new(r.numer().clone(), r.denom().clone())
        } else {
            r
        };
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                // new_raw values may not be reduced; route through the checked path
                Self::from_i128(n as i128, d as i128)
            }
            _ => {
                let r = r.reduced();
                match (r.numer().to_i64(), r.denom().to_i64()) {
                    (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                        Scalar(Repr::Small(n, d))
                    }
                    _ => Scalar(Repr::Big(r)),
                }
            }
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    /// True when the value is stored in the inline representation.
    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small(..))
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(Self::from_i128(*d as i128, *n as i128)),
            Repr::Big(r) => Some(Self::from_big(r.recip())),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(r) => {
                1u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Self::from_int(n as i64)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }
}

fn add_impl(a: &Scalar, b: &Scalar) -> Scalar {
    match (&a.0, &b.0) {
        (Repr::Small(0, _), _) => b.clone(),
        (_, Repr::Small(0, _)) => a.clone(),
        (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
            if d1 == d2 {
                return Scalar::from_i128(*n1 as i128 + *n2 as i128, *d1 as i128);
            }
            let num = (*n1 as i128) * (*d2 as i128) + (*n2 as i128) * (*d1 as i128);
            let den = (*d1 as i128) * (*d2 as i128);
            Scalar::from_i128(num, den)
        }
        _ => Scalar::from_big(a.to_big() + b.to_big()),
    }
}

fn mul_impl(a: &Scalar, b: &Scalar) -> Scalar {
    match (&a.0, &b.0) {
        (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Scalar::zero(),
        (Repr::Small(1, 1), _) => b.clone(),
        (_, Repr::Small(1, 1)) => a.clone(),
        (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
            let num = (*n1 as i128) * (*n2 as i128);
            let den = (*d1 as i128) * (*d2 as i128);
            Scalar::from_i128(num, den)
        }
        _ => Scalar::from_big(a.to_big() * b.to_big()),
    }
}

fn neg_impl(a: &Scalar) -> Scalar {
    match &a.0 {
        Repr::Small(n, d) => Scalar(Repr::Small(-n, *d)),
        Repr::Big(r) => Scalar::from_big(-r.clone()),
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_impl(self)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_impl(&self)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $body(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $body(&self, rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_impl);
binop!(Sub, sub, |a: &Scalar, b: &Scalar| add_impl(a, &neg_impl(b)));
binop!(Mul, mul, mul_impl);
binop!(Div, div, |a: &Scalar, b: &Scalar| mul_impl(
    a,
    &b.inv().expect("division by zero scalar")
));

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = add_impl(self, rhs);
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = add_impl(self, &rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = add_impl(self, &neg_impl(rhs));
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = add_impl(self, &neg_impl(&rhs));
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = mul_impl(self, rhs);
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, allow_minus: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_minus => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<BigInt>().ok()
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `"p"` or `"p/q"` with decimal integers, an optional leading
    /// minus on `p`, and `q > 0`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::MalformedInput(format!("invalid rational literal {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (parse_int(p, true).ok_or_else(bad)?, parse_int(q, false).ok_or_else(bad)?),
            None => (parse_int(s, true).ok_or_else(bad)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Scalar::from_big(BigRational::new(num, den)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Binomial coefficient as an exact scalar.
pub fn binomial(n: u64, k: u64) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Scalar::from(acc)
}

/// `n!` as an exact scalar.
pub fn factorial(n: u64) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Scalar::from(acc)
}

/// Integer gcd helper shared by modules that scale rational vectors.
pub fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a Scalar>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_small_form() {
        assert_eq!(Scalar::new(2, 4), Scalar::new(-1, -2));
        assert_eq!(Scalar::new(6, 3), Scalar::from_int(2));
        assert!(Scalar::new(0, -5).is_zero());
    }

    #[test]
    fn promotion_and_demotion() {
        let big = Scalar::from_int(i64::MAX);
        let sq = &big * &big;
        assert!(!sq.is_small());
        let back = &sq / &big;
        assert!(back.is_small());
        assert_eq!(back, big);
    }

    #[test]
    fn min_value_is_big() {
        let m = Scalar::from_int(i64::MIN);
        assert!(!m.is_small());
        assert_eq!(-(-&m), m);
        assert_eq!(&m + &Scalar::one(), Scalar::from_int(i64::MIN + 1));
    }

    #[test]
    fn parse_and_print() {
        for s in ["3", "-7", "1/2", "-22/7", "0"] {
            let x: Scalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!("4/6".parse::<Scalar>().unwrap().to_string(), "2/3");
        for bad in ["1.5", "", "-", "1/", "/2", "1/0", "+3", "1/-2", "a"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn ordering() {
        assert!(Scalar::new(1, 3) < Scalar::new(1, 2));
        assert!(Scalar::new(-1, 2) < Scalar::zero());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 3), Scalar::from_int(560));
        assert_eq!(factorial(5), Scalar::from_int(120));
    }
}
