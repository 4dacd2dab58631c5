//! Field abstraction used by the linear-algebra routines.
//!
//! Everything in the kernel is computed over [`Scalar`] (the rationals). The
//! trait exists so that the same elimination code can run over a finite
//! extension; [`GaussRational`] (the field Q(i)) is the one extension that is
//! needed, for splitting the two-generator Clifford superalgebra.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` exactly for zero.
    fn inv(&self) -> Option<Self>;
    fn from_scalar(s: Scalar) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_scalar(Scalar::from_int(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
}

/// `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussRational {
    pub re: Scalar,
    pub im: Scalar,
}

impl GaussRational {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        GaussRational { re, im }
    }

    pub fn i() -> Self {
        GaussRational::new(Scalar::zero(), Scalar::one())
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -&self.im)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => write!(f, "({} + {}i)", self.re, self.im),
        }
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Field for GaussRational {
    fn zero() -> Self {
        GaussRational::default()
    }
    fn one() -> Self {
        GaussRational::new(Scalar::one(), Scalar::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRational::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn neg(&self) -> Self {
        GaussRational::new(-&self.re, -&self.im)
    }
    fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        let n = norm.inv()?;
        Some(GaussRational::new(&self.re * &n, -(&self.im * &n)))
    }
    fn from_scalar(s: Scalar) -> Self {
        GaussRational::new(s, Scalar::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussRational::i();
        assert_eq!(i.mul(&i), GaussRational::from_int(-1));
        let z = GaussRational::new(Scalar::new(3, 2), Scalar::from_int(-2));
        assert_eq!(z.mul(&z.inv().unwrap()), GaussRational::one());
        assert!(GaussRational::zero().inv().is_none());
    }
}
